"""Fisher information: pure-state QFI, the symmetric logarithmic
derivative (SLD) for mixed states, classical Fisher information of
tabulated densities, weak values and the Bures-metric cross check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InputError, OrthogonalSelectionError, ShapeError
from .linalg import check_hermitian, eig_hermitian

SLD_RANK_TOL = 1e-12
DENSITY_FLOOR = 1e-300


@dataclass(frozen=True)
class SldOperator:
    """Hermitian SLD matrix together with the rank of the state it solves."""

    matrix: np.ndarray
    support_dim: int


@dataclass(frozen=True)
class ParamStateFamily:
    """One-parameter family of states.

    state_at(theta) returns either a state vector or a density matrix;
    derivative_at, when given, returns the analytic theta-derivative in the
    same representation. Without it, central finite differences are used.
    """

    state_at: Callable[[float], np.ndarray]
    derivative_at: Optional[Callable[[float], np.ndarray]] = None

    def derivative(self, theta: float, h: float = 1e-5) -> np.ndarray:
        if self.derivative_at is not None:
            return np.asarray(self.derivative_at(theta), dtype=complex)
        lo = np.asarray(self.state_at(theta - h), dtype=complex)
        hi = np.asarray(self.state_at(theta + h), dtype=complex)
        return (hi - lo) / (2.0 * h)


def qfi_pure(chi, dchi) -> float:
    """4 (<dchi|dchi> - |<dchi|chi>|^2) for a normalized pure state."""
    chi = np.asarray(chi, dtype=complex).ravel()
    dchi = np.asarray(dchi, dtype=complex).ravel()
    if chi.shape != dchi.shape:
        raise ShapeError(f"state/derivative shapes differ: {chi.shape} vs {dchi.shape}")
    g = np.vdot(dchi, dchi).real
    ov = np.vdot(dchi, chi)
    return float(4.0 * (g - abs(ov) ** 2))


def sld_solve(rho, drho, rank_tol: float = SLD_RANK_TOL) -> SldOperator:
    """Solve d_theta rho = (rho L + L rho)/2 for Hermitian L.

    Uses the eigenbasis of rho: L_jk = 2 (drho)_jk / (lam_j + lam_k) on the
    support, zero where lam_j + lam_k falls below rank_tol * lam_max
    (support convention, the minimal-norm solution).
    """
    drho = check_hermitian(drho, tol=1e-10)
    tr = complex(np.trace(drho))
    if abs(tr) > 1e-9:
        raise InputError(f"drho trace {tr!r} is not zero within 1e-9")
    lam, v = eig_hermitian(rho)
    if lam.size != drho.shape[0]:
        raise ShapeError(f"rho dim {lam.size} vs drho dim {drho.shape[0]}")
    lam = np.clip(lam, 0.0, None)
    lam_max = lam[-1] if lam.size else 0.0
    pair = lam[:, None] + lam[None, :]
    mask = pair > rank_tol * max(lam_max, 1e-300)
    m = v.conj().T @ drho @ v
    l_eig = np.where(mask, 2.0 * m / np.where(mask, pair, 1.0), 0.0)
    l_mat = v @ l_eig @ v.conj().T
    l_mat = (l_mat + l_mat.conj().T) / 2.0
    support_dim = int(np.count_nonzero(lam > rank_tol * max(lam_max, 1e-300)))
    return SldOperator(matrix=l_mat, support_dim=support_dim)


def qfi_mixed(rho, drho, rank_tol: float = SLD_RANK_TOL) -> float:
    """Tr(L^2 rho) with L the solved SLD."""
    l_mat = sld_solve(rho, drho, rank_tol=rank_tol).matrix
    val = float(np.trace(l_mat @ np.asarray(rho, complex) @ l_mat).real)
    return max(val, 0.0)


def classical_fisher(x, pdf, dpdf, norm_tol: float = 1e-8) -> float:
    """Integral of (d_theta log f)^2 f over the tabulated grid.

    Trapezoid quadrature; integrand set to zero where f < DENSITY_FLOOR.
    """
    x = np.asarray(x, dtype=float)
    pdf = np.asarray(pdf, dtype=float)
    dpdf = np.asarray(dpdf, dtype=float)
    if x.shape != pdf.shape or x.shape != dpdf.shape:
        raise ShapeError("x, pdf and dpdf must share a shape")
    if np.any(pdf < -norm_tol):
        raise InputError("pdf has negative entries")
    total = float(np.trapezoid(pdf, x))
    if abs(total - 1.0) > norm_tol:
        raise InputError(f"pdf integrates to {total!r}, not 1 within {norm_tol:.1e}")
    dtotal = float(np.trapezoid(dpdf, x))
    if abs(dtotal) > norm_tol:
        raise InputError(f"dpdf integrates to {dtotal!r}, not 0 within {norm_tol:.1e}")
    supported = pdf >= DENSITY_FLOOR
    integrand = np.zeros_like(pdf)
    integrand[supported] = dpdf[supported] ** 2 / pdf[supported]
    return float(np.trapezoid(integrand, x))


def weak_value(a, i, f) -> complex:
    """<f|A|i> / <f|i>; raises when the selection is orthogonal."""
    a = np.asarray(a, dtype=complex)
    i = np.asarray(i, dtype=complex).ravel()
    f = np.asarray(f, dtype=complex).ravel()
    denom = np.vdot(f, i)
    if abs(denom) <= 1e-14:
        raise OrthogonalSelectionError("<f|i> vanishes; weak value undefined")
    return complex(np.vdot(f, a @ i) / denom)


def _sqrt_psd(m) -> np.ndarray:
    lam, v = np.linalg.eigh(m)
    lam = np.clip(lam, 0.0, None)
    return (v * np.sqrt(lam)) @ v.conj().T


def fidelity_root(rho1, rho2) -> float:
    """Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))."""
    r = _sqrt_psd(rho1)
    lam = np.linalg.eigvalsh(r @ np.asarray(rho2, complex) @ r)
    return float(np.sum(np.sqrt(np.clip(lam, 0.0, None))))


def bures_metric_check(family: ParamStateFamily, theta: float, dtheta: float):
    """Squared Bures distance between neighbouring states and the Fisher
    metric prediction I * dtheta^2 / 4.

    For pure states b^2 = 2 - 2 |<chi_t|chi_{t+dt}>|; for mixed states the
    fidelity route through the matrix square root is used.
    """
    s1 = np.asarray(family.state_at(theta), dtype=complex)
    s2 = np.asarray(family.state_at(theta + dtheta), dtype=complex)
    d = family.derivative(theta)
    if s1.ndim == 1:
        b2 = 2.0 - 2.0 * abs(np.vdot(s1, s2))
        info = qfi_pure(s1, d)
    else:
        b2 = 2.0 - 2.0 * fidelity_root(s1, s2)
        info = qfi_mixed(s1, (d + d.conj().T) / 2.0)
    return float(b2), float(info * dtheta**2 / 4.0)
