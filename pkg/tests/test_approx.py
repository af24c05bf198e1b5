"""Spectral-window matching sequences and norm-resolvent convergence."""

import math

import pytest

from perturbkit.approx import (build_matching_step, matching_spec,
                               resolvent_gap, spectral_truncate,
                               truncation_tail_norm)
from perturbkit.core import evaluate, pairing, scale_norm_squared
from perturbkit.corpus import ex4_dual_pair
from perturbkit.errors import (ComplexTauUnsupported, RegularityViolation,
                               UnsupportedBackend, WindowNotFound)
from perturbkit.krein import PerturbationSpec, TauExplicit
from perturbkit.operators import LaplaceLine, Multiplication
from perturbkit.vectors import ExpAbs, PowerLaw, Windowed
from perturbkit.weights import tau_weight

OP = Multiplication(2.0, 1.0)


@pytest.fixture(scope="module")
def ex4():
    dp = ex4_dual_pair()
    return dp.spec.op, dp.omega1, dp.omega2, dp.alpha


def approx_probes(op, count=10):
    bottom = op.spectrum_bottom
    return [Windowed(PowerLaw(-1.0), (bottom + 10.0 * k,
                                      bottom + 10.0 * (k + 1)))
            for k in range(count)]


class TestTruncate:
    def test_full_window_identity(self, ex4):
        op, w1, _, _ = ex4
        out = spectral_truncate(op, w1, (0.0, 1e12))
        for x in (1.5, 4.0, 20.0):
            assert abs(evaluate(op, out, x) - evaluate(op, w1, x)) < 1e-13

    def test_preimage_restriction(self, ex4):
        op, w1, _, _ = ex4
        out = spectral_truncate(op, w1, (0.0, 100.0))
        assert abs(evaluate(op, out, 9.9)) > 0
        assert evaluate(op, out, 10.1) == 0

    def test_idempotent_nesting(self, ex4):
        op, w1, _, _ = ex4
        once = spectral_truncate(op, w1, (0.0, 50.0))
        twice = spectral_truncate(op, once, (25.0, 100.0))
        assert twice.window == (25.0, 50.0)

    def test_tail_norm_monotone(self, ex4):
        op, w1, _, _ = ex4
        diffs = []
        for n in (10.0, 100.0, 1000.0):
            tail = Windowed(w1, (n, math.inf))
            diffs.append(scale_norm_squared(op, tail, -2))
        assert diffs[0] > diffs[1] > diffs[2] > 0

    def test_backend_guard(self):
        with pytest.raises(UnsupportedBackend):
            spectral_truncate(LaplaceLine(), ExpAbs(1.0, 0.0), (0.0, 5.0))


class TestBuildStep:
    def test_realized_tau(self, ex4):
        op, w1, w2, _ = ex4
        step = build_matching_step(op, w1, w2, 0.0, 10000)
        assert abs(step.realized) < 1e-8
        assert abs(step.eps1_n) <= 1.0 and abs(step.eps2_n) <= 1.0

    def test_tau_equals_a_n(self, ex4):
        op, w1, w2, _ = ex4
        probe = build_matching_step(op, w1, w2, 0.0, 1000)
        step = build_matching_step(op, w1, w2, probe.a_n, 1000)
        assert step.eps1_n == 0.0 and step.eps2_n == 0.0
        assert abs(step.realized - probe.a_n) < 1e-9

    def test_convergent_pair_rejected(self):
        w1 = PowerLaw(-1.0, -1.0)
        w2 = PowerLaw(-1.0, 1.0)
        op = Multiplication(2.0, 2.0)
        with pytest.raises(RegularityViolation):
            build_matching_step(op, w1, w2, 0.0, 100)

    def test_complex_tau_rejected(self, ex4):
        op, w1, w2, _ = ex4
        with pytest.raises(ComplexTauUnsupported):
            build_matching_step(op, w1, w2, 1.0 + 0.5j, 100)

    def test_window_not_found(self, ex4):
        op, w1, w2, _ = ex4
        with pytest.raises(WindowNotFound):
            build_matching_step(op, w1, w2, -80.0, 100, max_doublings=2)

    def test_windows_disjoint_from_head(self, ex4):
        """Cross terms vanish only for tail windows: verify directly."""
        op, w1, w2, _ = ex4
        step = build_matching_step(op, w1, w2, 1.0, 1000)
        assert step.window[0] == 1000.0
        head2 = spectral_truncate(op, w2, (0.0, 1000.0))
        win1 = spectral_truncate(op, w1, step.window)
        cross = pairing(op, head2, win1, tau_weight())
        assert abs(cross) == 0.0


class TestGap:
    def test_identical_specs(self, ex4):
        op, w1, w2, alpha = ex4
        step = build_matching_step(op, w1, w2, 0.0, 1000)
        spec_n = matching_spec(op, step, alpha)
        rep = resolvent_gap(spec_n, spec_n, -1.0, approx_probes(op, 3))
        assert rep.gap == 0.0
        assert rep.fn1 == (0.0, 0.0)

    def test_truncation_only_fn1(self, ex4):
        op, w1, w2, alpha = ex4
        probe = build_matching_step(op, w1, w2, 0.0, 1000)
        step = build_matching_step(op, w1, w2, probe.a_n, 1000)
        limit = PerturbationSpec(op, w1, w2, alpha, TauExplicit(probe.a_n))
        rep = resolvent_gap(matching_spec(op, step, alpha), limit, -1.0,
                            approx_probes(op, 3))
        assert abs(rep.fn1[0] - truncation_tail_norm(op, w1, 1000.0, -1.0)) \
            < 1e-9
        assert abs(rep.fn1[1] - truncation_tail_norm(op, w2, 1000.0, -1.0)) \
            < 1e-9

    def test_distance_to_limit_decreases(self, ex4):
        from perturbkit.vectors import Sum

        op, w1, w2, _ = ex4
        dists = []
        for n in (100, 1000, 10000):
            step = build_matching_step(op, w1, w2, 0.0, n)
            diff = Sum(((1.0, step.omega2_n), (-1.0, w2)))
            dists.append(scale_norm_squared(op, diff, -2))
        assert dists[0] > dists[1] > dists[2] > 0

    def test_gap_decreases(self, ex4):
        op, w1, w2, alpha = ex4
        limit = PerturbationSpec(op, w1, w2, alpha, TauExplicit(0.0))
        probes = approx_probes(op, 4)
        gaps = []
        for n in (100, 1000):
            step = build_matching_step(op, w1, w2, 0.0, n)
            rep = resolvent_gap(matching_spec(op, step, alpha), limit, -1.0,
                                probes)
            gaps.append(rep.gap)
        assert gaps[1] < gaps[0]
