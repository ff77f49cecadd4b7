import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracab.besselfun import bessel_j
from diracab.diskbasis import (
    BasisMode,
    Regime,
    basis_to_csv,
    boundary_residual,
    build_basis,
    build_mode,
    classify_regime,
    eigenvalue_equation,
    eigenvalues_for_order,
    evaluate_mode,
    radial_pair,
)
from diracab.quadrature import radial_rule

import oracles


class TestRegimes:
    @pytest.mark.parametrize(
        "nu,regime",
        [
            (0.0, Regime.INTEGER_NU),
            (-3.0, Regime.INTEGER_NU),
            (5.0 + 1e-12, Regime.INTEGER_NU),
            (-0.5, Regime.EXACTLY_MINUS_HALF),
            (0.75, Regime.POSITIVE_NU),
            (-2.3, Regime.BELOW_MINUS_ONE),
            (-0.25, Regime.MINUS_HALF_TO_ZERO),
            (-0.75, Regime.MINUS_ONE_TO_MINUS_HALF),
        ],
    )
    def test_examples(self, nu, regime):
        assert classify_regime(nu) is regime

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-40.0, max_value=40.0))
    def test_exhaustive_and_exclusive(self, nu):
        # exactly one regime for any finite real order
        r = classify_regime(nu)
        assert r in Regime


class TestEigenvalueEquations:
    def test_integer_order_first_root(self):
        f = eigenvalue_equation(0.0)
        from diracab.besselfun import find_roots

        (root,) = find_roots(f, 3.0, 1)
        assert root == pytest.approx(oracles.FIRST_ROOT_J0_EQ_J1, abs=1e-12)

    def test_minus_half_residual_is_cosine_like(self):
        f = eigenvalue_equation(-0.5)
        for m in range(1, 5):
            assert abs(f((2 * m - 1) * np.pi / 2)) < 1e-13

    def test_below_minus_one_branch(self):
        # residual J_{-nu} + J_{-(nu+1)}; for nu = -2.3 that is J_2.3 + J_1.3
        f = eigenvalue_equation(-2.3)
        mu = np.linspace(0.5, 12.0, 23)
        want = bessel_j(2.3, mu) + bessel_j(1.3, mu)
        got = np.array([f(x) for x in mu])
        np.testing.assert_allclose(got, want, rtol=1e-14)

    def test_positive_fractional_branch(self):
        f = eigenvalue_equation(0.75)
        mu = 2.0
        assert f(mu) == pytest.approx(
            bessel_j(0.75, mu) - bessel_j(1.75, mu), abs=1e-15
        )


class TestBuildBasis:
    def test_alpha0_ground_mode(self):
        mode = build_mode(l=0, m=1, alpha=0.0)
        assert mode.regime is Regime.INTEGER_NU
        assert mode.mu == pytest.approx(oracles.FIRST_ROOT_J0_EQ_J1, abs=1e-12)
        assert mode.norm == pytest.approx(oracles.DISK_MODE_L0M1_NORM, rel=1e-10)

    def test_alpha_half_ground_mode(self):
        mode = build_mode(l=0, m=1, alpha=0.5)
        assert mode.regime is Regime.EXACTLY_MINUS_HALF
        assert mode.mu == pytest.approx(np.pi / 2, abs=1e-12)

    def test_alpha_quarter_l1_regime(self):
        mode = build_mode(l=1, m=1, alpha=0.25)
        assert mode.nu == pytest.approx(0.75)
        assert mode.regime is Regime.POSITIVE_NU
        resid = bessel_j(0.75, mode.mu) - bessel_j(1.75, mode.mu)
        assert abs(resid) < 1e-10

    def test_mu_increasing_in_m(self):
        basis = build_basis(alpha=0.3, l_max=3, m_max=6)
        for l in basis.l_values:
            mus = [md.mu for md in basis.block(l)]
            assert all(np.diff(mus) > 0)

    def test_eigenvalue_residuals(self):
        basis = build_basis(alpha=0.37, l_max=4, m_max=4)
        for md in basis.modes:
            f = eigenvalue_equation(md.nu)
            assert abs(f(md.mu)) < 1e-10

    def test_boundary_residual_all_modes(self):
        basis = build_basis(alpha=0.21, l_max=4, m_max=4)
        for md in basis.modes:
            assert boundary_residual(md) <= 1e-8

    def test_flux_periodicity_multiset(self):
        alpha = 0.3
        a = build_basis(alpha, l_max=0, m_max=5, l_range=(-4, 4))
        b = build_basis(alpha + 1.0, l_max=0, m_max=5, l_range=(-3, 5))
        mu_a = np.sort(a.mu)
        mu_b = np.sort(b.mu)
        np.testing.assert_allclose(mu_a, mu_b, rtol=0, atol=1e-10)

    def test_csv_dump(self, tmp_path):
        basis = build_basis(alpha=0.25, l_max=2, m_max=2)
        path = tmp_path / "basis.csv"
        basis_to_csv(basis, path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "l,m,nu,mu,regime,norm"
        assert len(rows) == 1 + len(basis)


class TestRadialPairs:
    def test_integer_case_components(self):
        mode = build_mode(0, 1, 0.0)
        r = np.linspace(0.05, 1.0, 11)
        phi, chi = radial_pair(mode.nu, mode.mu, r)
        np.testing.assert_allclose(phi, bessel_j(0, mode.mu * r), rtol=1e-14)
        np.testing.assert_allclose(chi, bessel_j(1, mode.mu * r), rtol=1e-14)

    def test_below_minus_half_components(self):
        # (J_{-nu}, -J_{-(nu+1)}); for nu = -1.5 that is (J_1.5, -J_0.5).
        # Cross-check: this pair solves the first-order radial system,
        # chi' + ((nu+1)/r) chi = mu phi, which pins the chi order.
        nu, mu = -1.5, 4.0
        r = np.array([0.3, 0.8])
        phi, chi = radial_pair(nu, mu, r)
        np.testing.assert_allclose(phi, bessel_j(1.5, mu * r), rtol=1e-14)
        np.testing.assert_allclose(chi, -bessel_j(0.5, mu * r), rtol=1e-14)
        h = 1e-6
        for rr in r:
            chi_p = (radial_pair(nu, mu, rr + h)[1]
                     - radial_pair(nu, mu, rr - h)[1]) / (2 * h)
            phi_r, chi_r = radial_pair(nu, mu, rr)
            lhs = chi_p + (nu + 1) / rr * chi_r
            assert lhs == pytest.approx(mu * phi_r, rel=1e-8)

    def test_minus_half_boundary_ratio_forced(self):
        mode = build_mode(0, 1, 0.5)  # nu = -1/2, mu = pi/2
        phi, chi = radial_pair(mode.nu, mode.mu, np.array([1.0]))
        # at the eigenvalue J_{-1/2}(mu) = 0, so phi = chi = J_{1/2}(mu)
        assert phi[0] == pytest.approx(bessel_j(0.5, mode.mu), abs=1e-13)
        assert chi[0] / phi[0] == pytest.approx(1.0, abs=1e-12)


class TestEvaluateMode:
    def test_theta_zero_phases_collapse(self):
        mode = build_mode(2, 1, 0.25)
        r = np.array([0.4])
        psi1, psi2 = evaluate_mode(mode, r, 0.0)
        phi, chi = radial_pair(mode.nu, mode.mu, r)
        assert psi1[0] == pytest.approx(mode.norm * phi[0], abs=1e-14)
        assert psi2[0] == pytest.approx(1j * mode.norm * chi[0], abs=1e-14)

    def test_boundary_condition_spinor_ratio(self):
        mode = build_mode(-3, 2, 0.37)
        theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
        psi1, psi2 = evaluate_mode(mode, 1.0, theta)
        np.testing.assert_allclose(
            psi2 / psi1, 1j * np.exp(1j * theta), atol=1e-8
        )

    def test_against_extended_precision_oracle(self):
        mode = build_mode(0, 1, 0.0)
        psi1, psi2 = evaluate_mode(mode, 0.5, 0.0)
        assert psi1 == pytest.approx(oracles.DISK_MODE_L0M1_PSI1_AT_HALF,
                                     rel=1e-10)
        assert psi2 == pytest.approx(1j * oracles.DISK_MODE_L0M1_CHI_AT_HALF,
                                     rel=1e-10)


class TestOrthonormality:
    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.45])
    def test_same_l_gram_matrix(self, alpha):
        basis = build_basis(alpha, l_max=2, m_max=4)
        # independent, finer rule than the one used for the norms
        r, w = radial_rule(2048)
        for l in basis.l_values:
            block = basis.block(l)
            tab = np.array(
                [np.concatenate(radial_pair(md.nu, md.mu, r)) for md in block]
            )
            phi = tab[:, : r.size] * np.array([md.norm for md in block])[:, None]
            chi = tab[:, r.size:] * np.array([md.norm for md in block])[:, None]
            gram = 2 * np.pi * (
                (phi * (w * r)) @ phi.T + (chi * (w * r)) @ chi.T
            )
            np.testing.assert_allclose(gram, np.eye(len(block)), atol=1e-6)

    def test_unit_norm_independent_quadrature(self):
        mode = build_mode(0, 2, 0.3)
        r, w = radial_rule(4096)
        phi, chi = radial_pair(mode.nu, mode.mu, r)
        total = 2 * np.pi * mode.norm**2 * np.sum(w * r * (phi**2 + chi**2))
        assert total == pytest.approx(1.0, abs=1e-8)
