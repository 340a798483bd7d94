"""Dense complex linear algebra: Hermitian eigendecompositions, matrix
functions, Kronecker products and partial contractions over one tensor
factor.

All functions are pure; arrays are never mutated in place. Tolerances
follow a three-level hierarchy: 1e-12 for construction checks, 1e-10 for
algebraic identities, 1e-8 for physics-level cross checks.
"""

from __future__ import annotations

import numpy as np

from .errors import HermiticityError, InputError, ShapeError

HERM_TOL = 1e-12
IDENT_TOL = 1e-10


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a matrix, got ndim={m.ndim}")
    return m


def _as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise ShapeError(f"expected a vector, got ndim={v.ndim}")
    return v


def check_hermitian(m, tol: float = HERM_TOL) -> np.ndarray:
    """Validate that m is square and Hermitian within tol (max |M - M^dag|)."""
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix is not square: {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > tol:
        raise HermiticityError(f"max |M - M^dag| = {dev:.3e} exceeds {tol:.1e}")
    return m


def eig_hermitian(m, tol: float = HERM_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary eigenvector matrix V) with
    m = V diag(w) V^dag.
    """
    m = check_hermitian(m, tol)
    w, v = np.linalg.eigh(m)
    return w, v


def unitary_of(h, theta: float) -> np.ndarray:
    """exp(-i * theta * h) for Hermitian h, via eigendecomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * theta * w)) @ v.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product with (system, probe) factor ordering."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_inner(bra_sys, m, ket_sys) -> np.ndarray:
    """Contract the system indices of an operator on system (x) probe.

    Returns the probe-space matrix <bra_sys| m |ket_sys>. The system
    dimension is taken from the state vectors; the probe dimension from
    the operator.
    """
    bra = _as_vector(bra_sys)
    ket = _as_vector(ket_sys)
    m = _as_matrix(m)
    d_sys = bra.size
    if ket.size != d_sys:
        raise ShapeError(f"bra/ket system dims differ: {bra.size} vs {ket.size}")
    if m.shape[0] != m.shape[1] or m.shape[0] % d_sys != 0:
        raise ShapeError(f"operator shape {m.shape} incompatible with d_sys={d_sys}")
    d_probe = m.shape[0] // d_sys
    t = m.reshape(d_sys, d_probe, d_sys, d_probe)
    return np.einsum("j,jakb,k->ab", bra.conj(), t, ket)


def partial_trace_system(rho, projector_sys):
    """Unnormalized probe block <f| rho |f> and its trace.

    For rho the evolved joint state and projector_sys the postselection
    state, the returned weight is the postselection success probability.
    """
    block = partial_inner(projector_sys, rho, projector_sys)
    weight = float(np.trace(block).real)
    return block, weight


def validate_density(rho, herm_tol: float = HERM_TOL, trace_tol: float = 1e-10,
                     eig_floor: float = -1e-10) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix."""
    rho = check_hermitian(rho, herm_tol)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > trace_tol:
        raise InputError(f"trace {tr!r} deviates from 1 by more than {trace_tol:.1e}")
    wmin = float(np.linalg.eigvalsh(rho)[0])
    if wmin < eig_floor:
        raise InputError(f"smallest eigenvalue {wmin:.3e} below {eig_floor:.1e}")
    return rho
