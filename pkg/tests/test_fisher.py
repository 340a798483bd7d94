import numpy as np
import pytest

from psfisher import (GaussianProbe, InputError, OrthogonalSelectionError,
                      ParamStateFamily, ProbeGrid, ShapeError,
                      bures_metric_check, classical_fisher, discretize_probe,
                      fps_density, qfi_mixed, qfi_pure, sld_solve, weak_value)

from conftest import SIGMA_Z, random_density, random_hermitian, random_state


def unitary_family(h, v0):
    """Pure family U(theta) v0 with its analytic derivative."""
    w, vec = np.linalg.eigh(h)

    def state_at(theta):
        return (vec * np.exp(-1j * theta * w)) @ vec.conj().T @ v0

    def derivative_at(theta):
        return -1j * h @ state_at(theta)

    return ParamStateFamily(state_at=state_at, derivative_at=derivative_at)


class TestQfiPure:
    def test_parameter_free_state(self, rng):
        chi = random_state(rng, 4)
        assert qfi_pure(chi, np.zeros(4)) == 0.0

    def test_gaussian_momentum_phase(self):
        grid = ProbeGrid.default(1.0)
        psi = discretize_probe(GaussianProbe(1.0), grid)
        theta = 0.6
        chi = np.exp(-1j * theta * grid.p) * psi
        dchi = -1j * grid.p * chi
        # 4 Var(p) with Var(p) = 1/(4 sigma^2).
        assert abs(qfi_pure(chi, dchi) - 1.0) < 1e-8

    def test_equals_four_times_hamiltonian_variance(self, rng):
        h = random_hermitian(rng, 6)
        v0 = random_state(rng, 6)
        fam = unitary_family(h, v0)
        chi = fam.state_at(0.8)
        hv = h @ v0
        var_h = np.vdot(hv, hv).real - np.vdot(v0, hv).real ** 2
        assert abs(qfi_pure(chi, fam.derivative_at(0.8)) - 4 * var_h) < 1e-8 * 4 * var_h

    def test_global_phase_invariance(self, rng):
        h = random_hermitian(rng, 4)
        v0 = random_state(rng, 4)
        fam = unitary_family(h, v0)
        chi, dchi = fam.state_at(0.5), fam.derivative_at(0.5)
        alpha = 1.234
        q1 = qfi_pure(chi, dchi)
        q2 = qfi_pure(np.exp(1j * alpha) * chi, np.exp(1j * alpha) * dchi)
        assert abs(q1 - q2) < 1e-10

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            qfi_pure(np.ones(3), np.ones(4))


class TestSldSolve:
    def test_classical_diagonal_family(self):
        p1, p2, dp = 0.3, 0.7, 0.11
        rho = np.diag([p1, p2]).astype(complex)
        drho = np.diag([dp, -dp]).astype(complex)
        l_mat = sld_solve(rho, drho).matrix
        assert np.allclose(l_mat, np.diag([dp / p1, -dp / p2]), atol=1e-12)

    def test_pure_state_limit(self, rng):
        chi = random_state(rng, 4)
        h = random_hermitian(rng, 4)
        rho = np.outer(chi, chi.conj())
        drho = -1j * (h @ rho - rho @ h)
        sld = sld_solve(rho, drho)
        # On the support L = 2 drho solves the SLD equation for pure states.
        resid = drho - (rho @ sld.matrix + sld.matrix @ rho) / 2.0
        assert np.linalg.norm(resid) < 1e-8 * max(1.0, np.linalg.norm(drho))
        assert sld.support_dim == 1

    def test_traceless_sld_expectation(self, rng):
        rho = random_density(rng, 4)
        h = random_hermitian(rng, 4)
        drho = -1j * (h @ rho - rho @ h)
        l_mat = sld_solve(rho, drho).matrix
        assert abs(np.trace(rho @ l_mat)) < 1e-9

    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_residual_invariant(self, rng, dim):
        for rank in (dim, max(1, dim // 2)):
            rho = random_density(rng, dim, rank=rank)
            h = random_hermitian(rng, dim)
            drho = -1j * (h @ rho - rho @ h)
            l_mat = sld_solve(rho, drho).matrix
            assert np.max(np.abs(l_mat - l_mat.conj().T)) < 1e-10
            resid = drho - (rho @ l_mat + l_mat @ rho) / 2.0
            assert np.linalg.norm(resid) <= 1e-8 * max(1.0, np.linalg.norm(drho))

    def test_non_traceless_rejected(self, rng):
        with pytest.raises(InputError):
            sld_solve(random_density(rng, 3), np.eye(3, dtype=complex))


class TestQfiMixed:
    def test_classical_commuting_family(self):
        p = np.array([0.2, 0.3, 0.5])
        dp = np.array([0.04, -0.1, 0.06])
        rho = np.diag(p).astype(complex)
        drho = np.diag(dp).astype(complex)
        expected = np.sum(dp**2 / p)
        assert abs(qfi_mixed(rho, drho) - expected) < 1e-10

    def test_pure_family_matches_qfi_pure(self, rng):
        h = random_hermitian(rng, 4)
        v0 = random_state(rng, 4)
        fam = unitary_family(h, v0)
        chi, dchi = fam.state_at(0.9), fam.derivative_at(0.9)
        rho = np.outer(chi, chi.conj())
        drho = np.outer(dchi, chi.conj()) + np.outer(chi, dchi.conj())
        assert abs(qfi_mixed(rho, drho) - qfi_pure(chi, dchi)) < 1e-8

    def test_parameter_free_maximally_mixed(self):
        rho = np.eye(3, dtype=complex) / 3.0
        assert qfi_mixed(rho, np.zeros((3, 3), dtype=complex)) == 0.0


class TestClassicalFisher:
    def test_gaussian_location(self):
        x = np.linspace(-12, 12, 8001)
        sigma = 1.0
        pdf = np.exp(-(x**2) / (2 * sigma**2)) / np.sqrt(2 * np.pi * sigma**2)
        dpdf = pdf * x / sigma**2
        assert abs(classical_fisher(x, pdf, dpdf) - 1.0) < 1e-8

    def test_fps_at_theta_zero(self):
        x = np.linspace(-12, 12, 8001)
        h = 1e-6
        pdf = fps_density(1.0, 0.0, 1.0, x)
        dpdf = (fps_density(1.0, h, 1.0, x) - fps_density(1.0, -h, 1.0, x)) / (2 * h)
        assert abs(classical_fisher(x, pdf, dpdf)) < 1e-8

    def test_nonnegative(self, rng):
        x = np.linspace(-10, 10, 4001)
        pdf = np.exp(-np.abs(x))
        pdf /= np.trapezoid(pdf, x)
        dpdf = np.gradient(pdf, x)
        dpdf -= pdf * np.trapezoid(dpdf, x)
        assert classical_fisher(x, pdf, dpdf) >= 0.0

    def test_normalization_rejected(self):
        x = np.linspace(-5, 5, 101)
        with pytest.raises(InputError):
            classical_fisher(x, np.ones_like(x), np.zeros_like(x))


class TestWeakValue:
    def test_identity_observable(self, rng):
        i, f = random_state(rng, 2), random_state(rng, 2)
        assert abs(weak_value(np.eye(2), i, f) - 1.0) < 1e-12

    def test_eigenstate(self):
        e0 = np.array([1, 0], dtype=complex)
        assert abs(weak_value(SIGMA_Z, e0, e0) - 1.0) < 1e-12

    def test_tilted_postselection(self):
        i = np.array([1, 1], dtype=complex) / np.sqrt(2)
        f = np.array([np.cos(np.pi / 8), np.sin(np.pi / 8)], dtype=complex)
        assert abs(weak_value(SIGMA_Z, i, f) - np.tan(np.pi / 8)) < 1e-12

    def test_orthogonal_selection(self):
        i = np.array([1, 0], dtype=complex)
        f = np.array([0, 1], dtype=complex)
        with pytest.raises(OrthogonalSelectionError):
            weak_value(SIGMA_Z, i, f)


class TestBuresMetric:
    def test_identical_states(self, rng):
        chi = random_state(rng, 3)
        fam = ParamStateFamily(state_at=lambda theta: chi,
                               derivative_at=lambda theta: np.zeros(3))
        b2, pred = bures_metric_check(fam, 0.3, 1e-4)
        assert abs(b2) < 1e-12 and pred == 0.0

    def test_orthogonal_pure_states(self):
        e = np.eye(2, dtype=complex)
        fam = ParamStateFamily(state_at=lambda theta: e[0] if theta < 0.5 else e[1],
                               derivative_at=lambda theta: np.zeros(2))
        b2, _ = bures_metric_check(fam, 0.0, 1.0)
        assert abs(b2 - 2.0) < 1e-12

    def test_gaussian_shift_quadratic_expansion(self):
        grid = ProbeGrid.default(1.0)
        psi = discretize_probe(GaussianProbe(1.0), grid)
        fam = ParamStateFamily(
            state_at=lambda theta: np.exp(-1j * theta * grid.p) * psi,
            derivative_at=lambda theta: -1j * grid.p
            * np.exp(-1j * theta * grid.p) * psi)
        b2, pred = bures_metric_check(fam, 0.7, 1e-4)
        assert abs(b2 / pred - 1.0) < 1e-4

    def test_mixed_state_route(self, rng):
        h = random_hermitian(rng, 3)
        rho0 = random_density(rng, 3)
        w, vec = np.linalg.eigh(h)

        def state_at(theta):
            u = (vec * np.exp(-1j * theta * w)) @ vec.conj().T
            return u @ rho0 @ u.conj().T

        def derivative_at(theta):
            rho = state_at(theta)
            return -1j * (h @ rho - rho @ h)

        fam = ParamStateFamily(state_at=state_at, derivative_at=derivative_at)
        b2, pred = bures_metric_check(fam, 0.4, 1e-4)
        assert abs(b2 / pred - 1.0) < 1e-3


class TestDerivativeConsistency:
    def test_finite_difference_matches_analytic_qfi(self, rng):
        h = random_hermitian(rng, 5)
        v0 = random_state(rng, 5)
        fam = unitary_family(h, v0)
        numeric = ParamStateFamily(state_at=fam.state_at)
        theta = 0.6
        q_exact = qfi_pure(fam.state_at(theta), fam.derivative_at(theta))
        for step in (1e-5, 5e-6):
            q_fd = qfi_pure(fam.state_at(theta), numeric.derivative(theta, h=step))
            assert abs(q_fd - q_exact) < 1e-5 * max(1.0, q_exact)

    def test_richardson_consistency(self, rng):
        h = random_hermitian(rng, 4)
        v0 = random_state(rng, 4)
        fam = ParamStateFamily(state_at=unitary_family(h, v0).state_at)
        d1 = fam.derivative(0.3, h=1e-4)
        d2 = fam.derivative(0.3, h=5e-5)
        scale = max(float(np.max(np.abs(d2))), 1e-12)
        assert np.max(np.abs(d1 - d2)) / scale < 1e-6
