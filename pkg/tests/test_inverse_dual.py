"""Inverse spectral construction and dual eigenvalue pairs."""

import math

import pytest

from perturbkit.core import evaluate, pairing, projective_deviation, \
    resolvent_apply
from perturbkit.corpus import ex4_inputs, ex4_pair_closed, ex5_inputs
from perturbkit.eigen import (dual_pair, eigen_condition,
                              find_eigenvalues, inverse_problem)
from perturbkit.errors import DegenerateDenominator, RegularityViolation
from perturbkit.krein import TauAuto, TauExplicit, b_of_z
from perturbkit.operators import Multiplication
from perturbkit.vectors import PowerLaw

OP = Multiplication(2.0, 1.0)


class TestInverseProblem:
    def test_example_five_numbers(self):
        op, lam, phi, psi = ex5_inputs()
        res = inverse_problem(op, lam, phi, psi)
        assert abs(complex(res.spec.alpha) - (-8.0)) < 1e-9
        assert not res.gauge_fixed
        assert isinstance(res.spec.tau, TauAuto)
        coupling = pairing(op, phi, res.spec.omega1)
        assert abs(coupling - 0.125) < 1e-9
        # omega displays
        for x in (1.2, 3.0):
            assert abs(evaluate(op, res.spec.omega1, x)
                       - (x * x - 1.5) / x ** (8.0 / 3.0)) < 1e-12
            assert abs(evaluate(op, res.spec.omega2, x)
                       - (x * x - 1.5) / x ** (7.0 / 3.0)) < 1e-12

    def test_example_four_is_parametric(self):
        op, mu, phi, psi = ex4_inputs()
        res = inverse_problem(op, 2.0, phi, psi)
        assert res.gauge_fixed
        assert isinstance(res.spec.tau, TauExplicit)
        # the gauge pins the eigenvalue: 1/alpha + tau + F(2) = 0
        assert abs(eigen_condition(res.spec, 2.0)) < 1e-8

    def test_family_closed_forms(self):
        op, _, phi, psi = ex4_inputs()
        res = inverse_problem(op, 2.0, phi, psi)
        for z in (-1.0, -2.0 + 1.0j, 0.5 + 2.0j):
            closed = (2.0 - z) * ex4_pair_closed(z)
            assert abs(res.family.b_inv(z) - closed) < 1e-9

    def test_family_matches_f17(self):
        """b from the (omega, alpha, tau) presentation equals the family's."""
        op, lam, phi, psi = ex5_inputs()
        res = inverse_problem(op, lam, phi, psi)
        for z in (-1.0, -0.5 + 1.0j, 2.0j, -3.0 - 1.0j, 0.5):
            b_spec = b_of_z(res.spec, z)
            b_fam = res.family.b(z)
            assert abs(b_spec - b_fam) < 1e-7 * (1 + abs(b_fam))

    def test_family_matches_f17_parametric(self):
        op, _, phi, psi = ex4_inputs()
        res = inverse_problem(op, 2.0, phi, psi)
        for z in (-1.0, -0.5 + 1.0j, 4.0j):
            b_spec = b_of_z(res.spec, z)
            b_fam = res.family.b(z)
            assert abs(b_spec - b_fam) < 1e-7 * (1 + abs(b_fam))

    def test_adjoint_side_coupling(self):
        # conj(alpha) * (psi, omega2) = -1 for psi = (A - conj lam)^-1 omega1
        op, lam, phi, psi = ex5_inputs()
        res = inverse_problem(op, lam, phi, psi)
        alpha = complex(res.spec.alpha)
        val = pairing(op, psi, res.spec.omega2)
        assert abs(alpha.conjugate() * val + 1.0) < 1e-9

    def test_rejects_too_smooth(self):
        with pytest.raises(RegularityViolation):
            inverse_problem(OP, 0.5, PowerLaw(-3.0), PowerLaw(-3.5))

    def test_rejects_outside_h(self):
        with pytest.raises(RegularityViolation):
            inverse_problem(OP, 0.5, PowerLaw(-0.2), PowerLaw(-2.0))


class TestRoundTrip:
    def test_example_five(self):
        op, lam, phi, psi = ex5_inputs()
        res = inverse_problem(op, lam, phi, psi)
        pairs = find_eigenvalues(res.spec, seeds=[1.5 + 0.3j])
        assert len(pairs) == 1
        assert abs(pairs[0].lam - lam) < 1e-8
        assert projective_deviation(op, pairs[0].phi, phi) < 1e-6

    def test_example_four(self):
        op, _, phi, psi = ex4_inputs()
        res = inverse_problem(op, 2.0, phi, psi)
        pairs = find_eigenvalues(res.spec, seeds=[2.0 + 0.3j])
        assert len(pairs) == 1
        assert abs(pairs[0].lam - 2.0) < 1e-8
        assert projective_deviation(op, pairs[0].phi, phi) < 1e-6

    @pytest.mark.parametrize("q1, q2, lam", [
        (1.7, 2.1, 0.3), (1.9, 2.3, 0.6), (2.2, 1.8, 0.85)])
    def test_randomized_below_spectrum(self, q1, q2, lam):
        phi, psi = PowerLaw(-q1), PowerLaw(-q2)
        res = inverse_problem(OP, lam, phi, psi)
        pairs = find_eigenvalues(res.spec, seeds=[lam + 0.1j])
        assert len(pairs) == 1
        assert abs(pairs[0].lam - lam) < 1e-8
        assert projective_deviation(OP, pairs[0].phi, phi) < 1e-6


class TestDualPair:
    def test_example_two_values(self, ex2_pair):
        assert abs(ex2_pair.lam - (-1.0 / 13.0)) < 1e-12
        assert abs(ex2_pair.alpha - (-4.0 / 13.0 * math.e ** 2)) < 1e-12

    def test_example_four_values(self, ex4_pair):
        assert abs(ex4_pair.lam - 2.0) < 1e-12
        assert abs(ex4_pair.alpha - (-4.0)) < 1e-12
        for x in (1.4, 2.6):
            assert abs(evaluate(OP, ex4_pair.phi_mu, x)
                       - (x * x - 2.0) / x ** (10.0 / 3.0)) < 1e-12
            assert abs(evaluate(OP, ex4_pair.psi_mu, x)
                       - (x * x - 2.0) / x ** (11.0 / 3.0)) < 1e-12

    def test_defining_quotient(self, ex2_pair):
        op = ex2_pair.spec.op
        P = pairing(op, ex2_pair.phi_lambda, ex2_pair.psi_lambda)
        Q = pairing(op, resolvent_apply(op, ex2_pair.mu, ex2_pair.phi_lambda),
                    ex2_pair.psi_lambda)
        lam_bar = complex(ex2_pair.mu).conjugate() + P / Q
        assert abs(lam_bar.conjugate() - ex2_pair.lam) < 1e-13

    def test_constraint_identity(self, ex2_pair):
        # (conj lam - conj mu)((A-mu)^-1 phi, psi) = (phi, psi)
        op = ex2_pair.spec.op
        P = pairing(op, ex2_pair.phi_lambda, ex2_pair.psi_lambda)
        Q = pairing(op, resolvent_apply(op, ex2_pair.mu, ex2_pair.phi_lambda),
                    ex2_pair.psi_lambda)
        lhs = (complex(ex2_pair.lam).conjugate()
               - complex(ex2_pair.mu).conjugate()) * Q
        assert abs(lhs - P) < 1e-13

    def test_closure_both_eigenvalues(self, ex2_pair):
        assert abs(eigen_condition(ex2_pair.spec, ex2_pair.mu)) < 1e-8
        assert abs(eigen_condition(ex2_pair.spec, ex2_pair.lam)) < 1e-8

    def test_adjoint_pair(self, ex2_pair):
        """The adjoint spec has eigenvalues conj(mu), conj(lam) with the
        psi eigenvectors."""
        from perturbkit.krein import adjoint_spec

        adj = adjoint_spec(ex2_pair.spec)
        op = ex2_pair.spec.op
        assert abs(eigen_condition(
            adj, complex(ex2_pair.mu).conjugate())) < 1e-8
        assert abs(eigen_condition(
            adj, complex(ex2_pair.lam).conjugate())) < 1e-8
        psi_rebuilt = resolvent_apply(
            op, complex(ex2_pair.lam).conjugate(), adj.omega2)
        assert projective_deviation(op, psi_rebuilt,
                                    ex2_pair.psi_lambda) < 1e-10

    def test_symmetric_input_real_pair(self):
        phi = PowerLaw(-1.8)
        dp = dual_pair(OP, 0.4, phi, phi)
        assert abs(complex(dp.lam).imag) < 1e-12
        # f*3 reduces to the defining quotient identically
        assert abs(eigen_condition(dp.spec, dp.mu)) < 1e-9

    def test_degenerate_denominator(self):
        from perturbkit.vectors import Sum

        phi = PowerLaw(-1.8)
        base1, base2 = PowerLaw(-1.8), PowerLaw(-2.2)
        q1 = pairing(OP, resolvent_apply(OP, 0.5, phi), base1)
        q2 = pairing(OP, resolvent_apply(OP, 0.5, phi), base2)
        psi = Sum(((1.0, base1), (-q1 / q2, base2)))  # tuned so Q = 0
        with pytest.raises(DegenerateDenominator):
            dual_pair(OP, 0.5, phi, psi)

    def test_b_consistency_random_points(self, ex4_pair):
        """f24-based family b equals f17-based b for the dual-pair spec."""
        op, _, phi, psi = ex4_inputs()
        inv = inverse_problem(op, ex4_pair.lam, phi, psi)
        for z in (-1.0, -2.0 + 1.0j, 0.5 + 2.0j, -0.5 - 3.0j, 5.0j):
            b_fam = inv.family.b(z)
            b_spec = b_of_z(ex4_pair.spec, z)
            assert abs(b_fam - b_spec) < 1e-7 * (1 + abs(b_fam))
