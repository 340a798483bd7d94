"""State construction: Bloch-parameterized qubit selections, the Gaussian
probe in momentum representation, its grid discretization, and the joint
initial state.

Units are hbar = 1 with [x, p] = i. The momentum representation is
primary: the benchmark interaction sigma_z (x) p is diagonal there, and
position-space quantities are obtained by spectral (FFT) differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError
from .linalg import kron

DEFAULT_N_POINTS = 2048
# Coverage requirement on the momentum cutoff, in units of the momentum
# standard deviation sigma_p = 1/(2 sigma). The default cutoff sits at
# ~8.5 sigma_p.
MIN_COVERAGE_SIGMAS = 6.0


@dataclass(frozen=True)
class Selection:
    """Pre/post-selection angles: |i> = cos t1 |0> + e^{i s1} sin t1 |1>,
    |f> = cos t2 |0> + e^{i s2} sin t2 |1>."""

    t1: float
    s1: float
    t2: float
    s2: float


@dataclass(frozen=True)
class GaussianProbe:
    """Gaussian probe with momentum wave function (2 sigma^2/pi)^{1/4}
    exp(-sigma^2 p^2); position spread sigma, momentum variance 1/(4 sigma^2)."""

    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    @property
    def sigma_p(self) -> float:
        return 1.0 / (2.0 * self.sigma)


@dataclass(frozen=True)
class ProbeGrid:
    """Uniform momentum grid p_k = -p_max + k * spacing, k = 0..n_points-1."""

    n_points: int
    p_max: float

    @staticmethod
    def default(sigma: float, n_points: int = DEFAULT_N_POINTS) -> "ProbeGrid":
        return ProbeGrid(n_points=n_points, p_max=6.0 / (sigma * np.sqrt(2.0)))

    @property
    def spacing(self) -> float:
        return 2.0 * self.p_max / self.n_points

    @property
    def p(self) -> np.ndarray:
        return -self.p_max + self.spacing * np.arange(self.n_points)


def make_selection_states(sel: Selection):
    """Unit vectors (|i>, |f>) from the selection angles."""
    i = np.array([np.cos(sel.t1), np.exp(1j * sel.s1) * np.sin(sel.t1)], dtype=complex)
    f = np.array([np.cos(sel.t2), np.exp(1j * sel.s2) * np.sin(sel.t2)], dtype=complex)
    return i, f


def discretize_probe(probe: GaussianProbe, grid: ProbeGrid) -> np.ndarray:
    """Normalized grid samples of the Gaussian momentum wave function.

    Raises ResolutionError when the grid under-resolves the momentum
    density (spacing >= sigma_p/4) or under-covers it
    (p_max < MIN_COVERAGE_SIGMAS * sigma_p).
    """
    sigma_p = probe.sigma_p
    if grid.spacing >= sigma_p / 4.0:
        raise ResolutionError(
            f"grid spacing {grid.spacing:.3e} does not resolve sigma_p={sigma_p:.3e}")
    if grid.p_max < MIN_COVERAGE_SIGMAS * sigma_p:
        raise ResolutionError(
            f"p_max {grid.p_max:.3e} covers < {MIN_COVERAGE_SIGMAS:g} momentum "
            f"standard deviations (sigma_p={sigma_p:.3e})")
    psi = np.exp(-probe.sigma**2 * grid.p**2).astype(complex)
    return psi / np.linalg.norm(psi)


def joint_initial(i: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Tensor product |i> (x) |psi>, renormalized."""
    v = kron(np.asarray(i, complex).reshape(-1, 1),
             np.asarray(psi, complex).reshape(-1, 1)).ravel()
    return v / np.linalg.norm(v)


def _spectral_frequencies(grid: ProbeGrid) -> np.ndarray:
    omega = 2.0 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.spacing)
    if grid.n_points % 2 == 0:
        # Zero the Nyquist mode so the derivative is exactly skew-Hermitian.
        omega[grid.n_points // 2] = 0.0
    return omega


def apply_position(grid: ProbeGrid, vec: np.ndarray) -> np.ndarray:
    """Apply the position operator x = i d/dp to a momentum-grid vector."""
    omega = _spectral_frequencies(grid)
    return 1j * np.fft.ifft(1j * omega * np.fft.fft(np.asarray(vec, complex)))


def position_operator(grid: ProbeGrid) -> np.ndarray:
    """Dense matrix of x = i d/dp via spectral differentiation (Hermitian)."""
    omega = _spectral_frequencies(grid)
    f = np.fft.fft(np.eye(grid.n_points), axis=0)
    return 1j * np.fft.ifft(1j * omega[:, None] * f, axis=0)
