"""Postselection pipeline for arbitrary finite-dimensional instances:
joint evolution, the probe-space map B = <f|U|i>, the postselected state
and its success probability, the postselected quantum Fisher information,
the weak-interaction limit, the no-go inequality check, the probe mean
shift, and randomized instance generation for property testing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InputError, PostselectionImpossibleError
from .fisher import qfi_pure, weak_value
from .linalg import check_hermitian, kron, partial_inner

log = logging.getLogger(__name__)

PR_F_FLOOR = 1e-14
QFI_CLAMP = -1e-10
# Relative and absolute slack in the no-go comparison lhs <= rhs.
INEQ_REL_TOL = 1e-9
INEQ_ABS_TOL = 1e-12


@dataclass(frozen=True)
class InstanceSpec:
    """One estimation instance: joint Hamiltonian h on system (x) probe,
    selection states i/f, pure probe state psi, and the true parameter."""

    d_sys: int
    d_probe: int
    h: np.ndarray
    i: np.ndarray
    f: np.ndarray
    psi: np.ndarray
    theta: float

    def validate(self) -> "InstanceSpec":
        check_hermitian(self.h)
        if self.h.shape != (self.d_sys * self.d_probe, self.d_sys * self.d_probe):
            raise InputError(f"h shape {self.h.shape} vs dims "
                             f"({self.d_sys}, {self.d_probe})")
        for name, vec, dim in (("i", self.i, self.d_sys), ("f", self.f, self.d_sys),
                               ("psi", self.psi, self.d_probe)):
            v = np.asarray(vec)
            if v.shape != (dim,):
                raise InputError(f"{name} shape {v.shape}, expected ({dim},)")
            if abs(np.linalg.norm(v) - 1.0) > 1e-12:
                raise InputError(f"{name} is not normalized")
        return self


@dataclass(frozen=True)
class PostselectionMap:
    """Probe-space operator B = <f|U|i> and companions: its analytic
    theta-derivative, the mean-shifted variant built from H - <H>, and the
    interaction mean energy."""

    b: np.ndarray
    db: np.ndarray
    b_shifted: np.ndarray
    theta: float
    mean_h: float


@dataclass(frozen=True)
class InequalityResult:
    lhs: float
    rhs: float
    holds: bool
    degenerate: bool = False

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def _joint_state(spec: InstanceSpec) -> np.ndarray:
    return kron(spec.i.reshape(-1, 1), spec.psi.reshape(-1, 1)).ravel()


def postselection_map(spec: InstanceSpec) -> PostselectionMap:
    """Build B, dB = <f|(-iH)U|i> and the phase-shifted variant."""
    w, v = np.linalg.eigh(check_hermitian(spec.h))
    phase = np.exp(-1j * spec.theta * w)
    u = (v * phase) @ v.conj().T
    hu = (v * (w * phase)) @ v.conj().T
    joint0 = _joint_state(spec)
    mean_h = float(np.vdot(joint0, spec.h @ joint0).real)
    b = partial_inner(spec.f, u, spec.i)
    db = partial_inner(spec.f, -1j * hu, spec.i)
    b_shifted = np.exp(1j * spec.theta * mean_h) * b
    return PostselectionMap(b=b, db=db, b_shifted=b_shifted,
                            theta=spec.theta, mean_h=mean_h)


def evolve_joint(spec: InstanceSpec) -> np.ndarray:
    """U(theta) |i, psi>, normalized."""
    w, v = np.linalg.eigh(check_hermitian(spec.h))
    u = (v * np.exp(-1j * spec.theta * w)) @ v.conj().T
    out = u @ _joint_state(spec)
    return out / np.linalg.norm(out)


def success_probability(spec: InstanceSpec, pm: PostselectionMap | None = None) -> float:
    pm = pm or postselection_map(spec)
    v = pm.b @ spec.psi
    return float(np.vdot(v, v).real)


def postselect(spec: InstanceSpec, pm: PostselectionMap | None = None):
    """Postselected probe density matrix and success probability."""
    pm = pm or postselection_map(spec)
    v = pm.b @ spec.psi
    pr_f = float(np.vdot(v, v).real)
    if pr_f <= PR_F_FLOOR:
        raise PostselectionImpossibleError(f"Pr(f) = {pr_f!r} vanishes")
    rho_ps = np.outer(v, v.conj()) / pr_f
    return rho_ps, pr_f


def qfi_postselected(spec: InstanceSpec, pm: PostselectionMap | None = None) -> float:
    """Quantum Fisher information of the postselected probe state,
    4 <psi|dB^dag dB|psi>/Pr - 4 |<psi|dB^dag B|psi>|^2/Pr^2."""
    pm = pm or postselection_map(spec)
    v = pm.b @ spec.psi
    dv = pm.db @ spec.psi
    pr_f = float(np.vdot(v, v).real)
    if pr_f <= PR_F_FLOOR:
        raise PostselectionImpossibleError(f"Pr(f) = {pr_f!r} vanishes")
    t1 = float(np.vdot(dv, dv).real)
    t2 = complex(np.vdot(dv, v))
    q = 4.0 * t1 / pr_f - 4.0 * abs(t2) ** 2 / pr_f**2
    if q < 0.0:
        if q < QFI_CLAMP:
            log.warning("postselected QFI %r below clamp threshold; clamping to 0", q)
        q = 0.0
    return q


def weak_limit_value(a, i, f, psi, p) -> float:
    """|<A>_w|^2 Var(p) on the probe, the weak-interaction-limit value as
    printed; the numerically extrapolated theta -> 0 limit of the
    postselected QFI is 4x this number (see the acceptance audit)."""
    w = weak_value(a, i, f)
    psi = np.asarray(psi, dtype=complex).ravel()
    p = np.asarray(p, dtype=float).ravel()
    dens = np.abs(psi) ** 2
    mean_p = float(np.sum(dens * p))
    var_p = float(np.sum(dens * (p - mean_p) ** 2))
    return abs(w) ** 2 * var_p


def interaction_qfi(spec: InstanceSpec) -> float:
    """4 (<H^2> - <H>^2) on |i, psi>: QFI of the unconditioned state."""
    joint0 = _joint_state(spec)
    hv = spec.h @ joint0
    mean_h = float(np.vdot(joint0, hv).real)
    mean_h2 = float(np.vdot(hv, hv).real)
    return 4.0 * (mean_h2 - mean_h**2)


def check_inequality(spec: InstanceSpec) -> InequalityResult:
    """No-go check Pr(f) * I(rho_ps) <= I(rho_int).

    Orthogonal/degenerate selections (Pr(f) below floor) report lhs = 0
    with a flag instead of dividing by a vanishing probability.
    """
    rhs = interaction_qfi(spec)
    pm = postselection_map(spec)
    pr_f = success_probability(spec, pm)
    if pr_f <= PR_F_FLOOR:
        return InequalityResult(lhs=0.0, rhs=rhs, holds=True, degenerate=True)
    lhs = pr_f * qfi_postselected(spec, pm)
    holds = lhs <= rhs * (1.0 + INEQ_REL_TOL) + INEQ_ABS_TOL
    return InequalityResult(lhs=lhs, rhs=rhs, holds=bool(holds))


def mean_shift(spec: InstanceSpec, x_op) -> float:
    """Tr(rho_ps x) for a given probe position operator."""
    rho_ps, _ = postselect(spec)
    return float(np.trace(rho_ps @ np.asarray(x_op, complex)).real)


def qfi_postselected_state_route(spec: InstanceSpec) -> float:
    """Independent route to the postselected QFI: normalize B|psi> and
    apply the pure-state formula with the quotient-rule derivative."""
    pm = postselection_map(spec)
    v = pm.b @ spec.psi
    dv = pm.db @ spec.psi
    pr_f = float(np.vdot(v, v).real)
    if pr_f <= PR_F_FLOOR:
        raise PostselectionImpossibleError(f"Pr(f) = {pr_f!r} vanishes")
    norm = np.sqrt(pr_f)
    dnorm = float(np.vdot(dv, v).real + np.vdot(v, dv).real) / (2.0 * norm)
    chi = v / norm
    dchi = dv / norm - v * dnorm / pr_f
    return qfi_pure(chi, dchi)


def random_instance(seed, dims=(2, 2), theta_range=(0.0, 5.0)) -> InstanceSpec:
    """Deterministic random instance: GUE-style joint Hamiltonian,
    Haar-like (normalized complex-normal) states, uniform theta."""
    d_sys, d_probe = dims
    if d_sys < 2 or d_probe < 2:
        raise InputError(f"dims must be >= 2, got {dims}")
    rng = np.random.default_rng(seed)
    n = d_sys * d_probe
    h = np.zeros((n, n), dtype=complex)
    off = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2.0)
    iu = np.triu_indices(n, k=1)
    h[iu] = off[iu]
    h = h + h.conj().T
    h[np.diag_indices(n)] = rng.normal(size=n)

    def _haar_vec(dim):
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return v / np.linalg.norm(v)

    i = _haar_vec(d_sys)
    f = _haar_vec(d_sys)
    psi = _haar_vec(d_probe)
    theta = float(rng.uniform(*theta_range))
    return InstanceSpec(d_sys=d_sys, d_probe=d_probe, h=h, i=i, f=f,
                        psi=psi, theta=theta)
