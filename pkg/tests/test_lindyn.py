"""Drift/diffusion construction and derived spectral scales."""

import numpy as np
import pytest

from optbistab.lindyn import (
    RegimeWarning,
    build_diffusion,
    build_jacobian,
    is_stable,
    saturation_factor,
    weak_scales,
)
from optbistab.params import SystemParams, from_raw_rates


@pytest.fixture
def p51():
    return SystemParams(C=5.0, xi=1.0, N=1000)


class TestJacobian:
    def test_full_equals_weak_at_zero(self, p51):
        J_full = build_jacobian(p51, 0.0, "full")
        with pytest.warns(RegimeWarning):
            J_weak = build_jacobian(p51, 1.0, "weak")
        assert np.allclose(J_full.entries[:, :2][2:4, :],
                           [[-1.0, 0.0], [0.0, -1.0]])
        J_weak0 = build_jacobian(p51, 0.0, "weak")
        assert np.array_equal(J_full.entries, J_weak0.entries)

    def test_full_entries_at_unit_amplitude(self, p51):
        J = build_jacobian(p51, 1.0, "full").entries
        assert J[2, 0] == pytest.approx(-0.5)
        assert J[4, 0] == pytest.approx(0.5)
        assert J[0, 2] == pytest.approx(10.0)

    def test_strong_zeroes_feedback_block(self, p51):
        with pytest.warns(RegimeWarning):
            J = build_jacobian(p51, 1.0, "strong").entries
        assert J[2, 0] == J[3, 1] == J[4, 0] == J[4, 1] == 0.0

    def test_weak_convergence_order(self, p51):
        def gap(X):
            full = build_jacobian(p51, X, "full").entries
            weak = build_jacobian(p51, X, "weak").entries
            return np.max(np.abs(full - weak))

        ratio = gap(1e-2) / gap(1e-3)
        assert 50.0 < ratio < 200.0  # O(X^2) scaling

    def test_weak_block_eigenvalues_match_scales(self, p51):
        sc = weak_scales(p51, 0.0)
        block = np.array([[-p51.xi, p51.xi * 2 * p51.C], [-1.0, -1.0]])
        eig = sorted(np.linalg.eigvals(block), key=lambda z: z.imag)
        expect = sorted([sc.lambda_minus, sc.lambda_plus], key=lambda z: z.imag)
        assert np.allclose(eig, expect, atol=1e-10)

    def test_strong_block_eigenvalues(self, p51):
        X = 7.0
        with pytest.warns(RegimeWarning):
            J = build_jacobian(p51, X, "strong").entries
        eig = np.linalg.eigvals(J[2:, 2:].astype(complex))
        # exact spectrum of the decoupled atomic block
        osc = np.sqrt(2 * X * X - 0.25)
        expect = np.array([-1.0, -1.5 + 1j * osc, -1.5 - 1j * osc])
        for e in expect:
            assert np.min(np.abs(eig - e)) < 1e-10

    def test_regime_guard_silent_without_bistability(self):
        p = SystemParams(C=2.0, xi=1.0, N=10)
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("error")
            build_jacobian(p, 5.0, "weak")
            build_jacobian(p, 0.1, "strong")


class TestDiffusion:
    def test_zero_at_dark_cavity(self):
        assert np.all(build_diffusion(0.0).entries == 0.0)

    def test_unit_amplitude(self):
        D = build_diffusion(1.0).entries
        assert np.allclose(np.diag(D), [0.0, 0.0, -1.0, -1.0, 4.0])
        assert np.count_nonzero(D - np.diag(np.diag(D))) == 0

    def test_saturates_at_two(self):
        D = build_diffusion(1e9).entries
        assert -D[2, 2] == pytest.approx(2.0, rel=1e-12)

    def test_polarization_entries_negative_and_symmetric(self):
        # indefinite by construction; the pair must carry equal signs so the
        # exchange symmetry of the covariance survives
        for X in (0.01, 0.5, 3.0, 100.0):
            D = build_diffusion(X).entries
            assert D[2, 2] < 0
            assert D[3, 3] == D[2, 2]
            assert D[4, 4] == pytest.approx(-4.0 * D[2, 2])


class TestWeakScales:
    def test_strong_coupling_eigenvalues(self):
        p = SystemParams(C=200.0, xi=1.0, N=1000)
        sc = weak_scales(p, 0.0)
        assert sc.lambda_plus == pytest.approx(-1.0 + 20.0j, abs=1e-12)
        assert sc.lambda_minus == pytest.approx(-1.0 - 20.0j, abs=1e-12)

    def test_experiment_oscillation_frequency(self):
        p = SystemParams(C=40.0, xi=0.176, N=310)
        assert weak_scales(p, 0.0).G_bar.real == pytest.approx(3.7296, abs=2e-4)

    def test_critically_damped(self):
        p = SystemParams(C=1e-12, xi=1.0, N=1)
        sc = weak_scales(p, 0.0)
        assert abs(sc.G_bar) < 2e-6
        assert sc.lambda_plus.real == pytest.approx(-1.0)

    def test_overdamped_is_imaginary(self):
        p = SystemParams(C=0.01, xi=100.0, N=10)
        G = weak_scales(p, 0.0).G_bar
        assert G.real == 0.0 and G.imag > 0.0

    def test_real_part_exact(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            p = SystemParams(C=float(rng.uniform(0.1, 300)),
                             xi=float(rng.uniform(0.01, 400)), N=5)
            sc = weak_scales(p, 0.0)
            # the pair always sums to the trace; underdamped roots share the
            # real part exactly and are conjugates
            assert (sc.lambda_plus + sc.lambda_minus).real == pytest.approx(
                -(p.xi + 1.0), rel=1e-14)
            if sc.G_bar.imag == 0.0:
                assert sc.lambda_plus.real == -0.5 * (p.xi + 1.0)
                assert sc.lambda_plus == sc.lambda_minus.conjugate()

    def test_rate_forms_need_rates(self, p51):
        sc = weak_scales(p51, 0.0)
        assert sc.g_prime is None and sc.gamma_prime is None and sc.r is None
        p = from_raw_rates(1.06, 0.88, 10.0, 310, unit="MHz")
        sc = weak_scales(p, 0.0)
        assert sc.gamma_prime == pytest.approx(p.gamma * (1 + 2 * p.C), rel=1e-12)
        # scaled vacuum Rabi frequency equals the laboratory one
        assert (2.0 / p.gamma) * sc.g_prime.real == pytest.approx(sc.G_bar.real, rel=1e-12)

    def test_saturation_factor_limits(self):
        assert saturation_factor(1e9, 1.0) == pytest.approx(0.5, rel=1e-12)
        assert saturation_factor(1.0, 1e9) == pytest.approx(1.0, rel=1e-6)
        assert saturation_factor(0.0, 3.0) == pytest.approx(4.0 / 3.0, rel=1e-15)

    def test_rho_scales(self, p51):
        sc = weak_scales(p51, 2.5)
        assert sc.rho_plus == pytest.approx(-1.5 + 1j * np.sqrt(2) * 2.5)


class TestStability:
    def test_three_roots(self, p51):
        for X, expect in ((1.0, True), (2.0, False), (3.0, True)):
            assert is_stable(build_jacobian(p51, X, "full")) is expect

    def test_rejects_wrong_kind(self):
        with pytest.raises(ValueError):
            is_stable(build_diffusion(1.0))
