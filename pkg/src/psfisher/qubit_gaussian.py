"""Numeric grid engine for the benchmark model: a qubit coupled to a
Gaussian probe through sigma_z (x) p.

The interaction is diagonal in the momentum representation, so
B = <f| exp(-i theta sigma_z p) |i> is diagonal on the grid with entries
c0 e^{-i theta p} + c1 e^{+i theta p}, where c0 = conj(f0) i0 and
c1 = conj(f1) i1. Every quantity reduces to weighted sums over the grid,
which keeps full selection-grid sweeps cheap.
"""

from __future__ import annotations

import numpy as np

from .errors import PostselectionImpossibleError
from .states import (GaussianProbe, ProbeGrid, Selection, apply_position,
                     discretize_probe, make_selection_states)

PR_F_FLOOR = 1e-14


def branch_coefficients(i: np.ndarray, f: np.ndarray):
    """Diagonal-branch coefficients (c0, c1) of B for the sigma_z model."""
    return complex(np.conj(f[0]) * i[0]), complex(np.conj(f[1]) * i[1])


def orthogonal_state(f: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to the qubit state f."""
    return np.array([-np.conj(f[1]), np.conj(f[0])], dtype=complex)


class QubitGaussianModel:
    """Grid-based evaluator for Pr(f), the postselected QFI, the probe
    mean shift and position-space densities of the sigma_z (x) p model."""

    def __init__(self, selection: Selection, sigma: float,
                 grid: ProbeGrid | None = None):
        self.selection = selection
        self.sigma = float(sigma)
        self.grid = grid if grid is not None else ProbeGrid.default(sigma)
        self.probe = GaussianProbe(sigma)
        self.psi = discretize_probe(self.probe, self.grid)
        self.i, self.f = make_selection_states(selection)
        self.c0, self.c1 = branch_coefficients(self.i, self.f)
        self.p = self.grid.p
        self.weights = np.abs(self.psi) ** 2

    # -- diagonal branch amplitudes -------------------------------------

    def _beta(self, thetas):
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        e = np.exp(-1j * np.outer(self.p, thetas))
        beta = self.c0 * e + self.c1 * e.conj()
        dbeta = -1j * self.p[:, None] * (self.c0 * e - self.c1 * e.conj())
        return beta, dbeta

    def pr_f(self, thetas):
        """Postselection success probability at each theta."""
        beta, _ = self._beta(thetas)
        out = self.weights @ (np.abs(beta) ** 2)
        return out if np.ndim(thetas) else float(out[0])

    def qfi_ps(self, thetas, clamp: bool = True):
        """Postselected QFI on the grid; NaN where Pr(f) is below floor."""
        beta, dbeta = self._beta(thetas)
        pr = self.weights @ (np.abs(beta) ** 2)
        t1 = self.weights @ (np.abs(dbeta) ** 2)
        t2 = self.weights @ (dbeta.conj() * beta)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = 4.0 * t1 / pr - 4.0 * np.abs(t2) ** 2 / pr**2
        q = np.where(pr > PR_F_FLOOR, q, np.nan)
        if clamp:
            q = np.where(np.isnan(q), q, np.maximum(q, 0.0))
        return q if np.ndim(thetas) else float(q[0])

    def qfi_int(self) -> float:
        """4 (<H^2> - <H>^2) on |i, psi>; equals 1/sigma^2 analytically."""
        a_mean = float(np.vdot(self.i, np.array([self.i[0], -self.i[1]])).real)
        p_mean = float(self.weights @ self.p)
        p2_mean = float(self.weights @ self.p**2)
        # H = sigma_z (x) p with sigma_z^2 = 1: <H> = <A><p>, <H^2> = <p^2>.
        return 4.0 * (p2_mean - (a_mean * p_mean) ** 2)

    def postselected_probe(self, theta: float) -> np.ndarray:
        """Normalized momentum-grid amplitudes of the postselected probe."""
        beta, _ = self._beta(theta)
        v = beta[:, 0] * self.psi
        norm = np.linalg.norm(v)
        if norm**2 <= PR_F_FLOOR:
            raise PostselectionImpossibleError(f"Pr(f) vanishes at theta={theta!r}")
        return v / norm

    def mean_shift(self, theta: float) -> float:
        """<x> of the postselected probe via spectral differentiation."""
        v = self.postselected_probe(theta)
        return float(np.vdot(v, apply_position(self.grid, v)).real)

    # -- position-space densities ---------------------------------------

    def _gauss_x(self, x):
        s2 = self.sigma**2
        return (2.0 * np.pi * s2) ** -0.25 * np.exp(-np.asarray(x, float) ** 2 / (4.0 * s2))

    def branch_amplitude(self, theta: float, x):
        """Unnormalized position amplitude c0 G(x - theta) + c1 G(x + theta);
        its squared modulus integrates to Pr(f)."""
        return self.c0 * self._gauss_x(np.asarray(x) - theta) \
            + self.c1 * self._gauss_x(np.asarray(x) + theta)

    def unnormalized_position_density(self, theta: float, x):
        return np.abs(self.branch_amplitude(theta, x)) ** 2

    def position_density(self, theta: float, x):
        """Normalized position density of the postselected probe."""
        pr = self.pr_f_exact(theta)
        if pr <= PR_F_FLOOR:
            raise PostselectionImpossibleError(f"Pr(f) vanishes at theta={theta!r}")
        return self.unnormalized_position_density(theta, x) / pr

    def pr_f_exact(self, theta) -> float:
        """Closed-form Pr(f) = |c0|^2 + |c1|^2 + 2 Re(c0 conj(c1)) e^{-theta^2/2 sigma^2}."""
        theta = np.asarray(theta, dtype=float)
        cross = 2.0 * (self.c0 * np.conj(self.c1)).real
        out = abs(self.c0) ** 2 + abs(self.c1) ** 2 \
            + cross * np.exp(-(theta**2) / (2.0 * self.sigma**2))
        return float(out) if out.ndim == 0 else out
