"""Closed-form expressions for the qubit/Gaussian-probe benchmark:
selection weights w+/-, the postselected QFI, the unconditioned QFI
1/sigma^2, the postselected position density f_ps and its classical
Fisher information I_c.

The f_ps / I_c formulas hold in the symmetric-selection regime
cos^2 t1 = cos^2 t2 = 1/2 with c = cos(s1 - s2) = +/-1; outside it the
grid engine computes densities numerically instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PostselectionImpossibleError
from .states import Selection, make_selection_states

PR_FLOOR = 1e-14


@dataclass(frozen=True)
class AnalyticParams:
    sel: Selection
    sigma: float
    c: float = field(init=False)

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "c", float(np.cos(self.sel.s1 - self.sel.s2)))


def w_pm(sel: Selection):
    """Selection weights w+/- = (|<f|i>|^2 +/- |<f|sigma_z|i>|^2) / 2."""
    i, f = make_selection_states(sel)
    overlap = abs(np.vdot(f, i)) ** 2
    sz = abs(np.vdot(f, np.array([i[0], -i[1]]))) ** 2
    return (overlap + sz) / 2.0, (overlap - sz) / 2.0


def pr_f_closed(sel: Selection, sigma: float, theta):
    """Success probability w+ + w- e^{-theta^2 / 2 sigma^2}."""
    wp, wm = w_pm(sel)
    theta = np.asarray(theta, dtype=float)
    out = wp + wm * np.exp(-(theta**2) / (2.0 * sigma**2))
    return float(out) if out.ndim == 0 else out


def qfi_ps_closed(sel: Selection, sigma: float, theta):
    """Closed-form postselected QFI of the benchmark model."""
    wp, wm = w_pm(sel)
    theta = np.asarray(theta, dtype=float)
    e_half = np.exp(-(theta**2) / (2.0 * sigma**2))
    e_full = np.exp(-(theta**2) / sigma**2)
    denom = (wp + wm * e_half) ** 2
    if np.any(np.sqrt(np.abs(denom)) <= PR_FLOOR):
        raise PostselectionImpossibleError("Pr(f) vanishes at a requested theta")
    num = wp**2 + (theta**2 / sigma**2) * wp * wm * e_half - wm**2 * e_full
    out = num / (sigma**2 * denom)
    return float(out) if out.ndim == 0 else out


def qfi_int_closed(sigma: float) -> float:
    """QFI of the unconditioned evolved state: 1 / sigma^2."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return 1.0 / sigma**2


def fps_density(sigma: float, theta: float, c: float, x):
    """Postselected position density in the symmetric regime (c = +/-1):
    a three-Gaussian mixture, even in x, normalized over the line."""
    x = np.asarray(x, dtype=float)
    s2 = sigma**2
    num = (np.exp(-((x - theta) ** 2) / (2.0 * s2))
           + np.exp(-((x + theta) ** 2) / (2.0 * s2))
           + 2.0 * c * np.exp(-(x**2 + theta**2) / (2.0 * s2)))
    denom = 2.0 * np.sqrt(2.0 * np.pi * s2) * (1.0 + c * np.exp(-(theta**2) / (2.0 * s2)))
    return num / denom


def ic_closed(sigma: float, theta, c: float):
    """Classical Fisher information of f_ps, evaluated as printed
    (denominator (1 + e^{-theta^2/2 sigma^2})^2 independent of c)."""
    theta = np.asarray(theta, dtype=float)
    s2 = sigma**2
    e_half = np.exp(-(theta**2) / (2.0 * s2))
    e_full = np.exp(-(theta**2) / s2)
    out = (1.0 + c * (theta**2 / s2) * e_half - e_full) / (s2 * (1.0 + e_half) ** 2)
    return float(out) if out.ndim == 0 else out
