"""Spectral-window sequences realizing a prescribed coupling value.

Truncate both perturbing vectors to the spectral window [0, n] and add a
correction window in the tail (n, d_n] with amplitudes eps_i chosen so the
coupling pairing of the truncated pair equals tau exactly:

    omega_i_n = E_[0,n] omega_i + eps_i E_[n,d_n] omega_i,
    a_n + eps_1 eps_2 b_n = tau,   |eps_i| <= 1.

The correction window must be disjoint from [0, n]: only then do the
cross terms of the pairing vanish and the identity above close, and only
the divergent tail can supply |b_n| > |tau - a_n|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import norm, pairing, resolvent_apply
from .errors import (ComplexTauUnsupported, NonIntegrable, PerturbedEigenvalue,
                     RegularityViolation, UnsupportedBackend, WindowNotFound)
from .krein import PerturbationSpec, TauAuto, b_of_z, is_infinite_b, \
    krein_apply, regularized_F, tau_value
from .operators import Multiplication, OperatorModel
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .vectors import ScaleVector, Sum, Windowed
from .weights import resolvent_weight, tau_weight


@dataclass(frozen=True)
class ApproxSequenceStep:
    n: int
    omega1_n: ScaleVector
    omega2_n: ScaleVector
    a_n: float
    b_n: float
    eps1_n: float
    eps2_n: float
    window: tuple
    realized: complex


@dataclass(frozen=True)
class GapReport:
    gap: float
    fn1: tuple        # ||R_z (omega_i_n - omega_i)||, i = 1, 2
    fn3_gap: float    # |G_n(z) - (tau + F(z))|


def spectral_truncate(op: OperatorModel, omega: ScaleVector,
                      window: tuple) -> ScaleVector:
    """E_[u,v] omega; windows compose by intersection (idempotent)."""
    if not isinstance(op, Multiplication):
        raise UnsupportedBackend(
            "spectral windows are only computable on the multiplication "
            "backend")
    u, v = window
    if not u < v:
        raise ValueError("window must satisfy u < v")
    if isinstance(omega, Windowed):
        lo, hi = max(u, omega.window[0]), min(v, omega.window[1])
        if hi <= lo:
            raise ValueError("window intersection is empty")
        return Windowed(omega.base, (lo, hi), omega.scale)
    return Windowed(omega, (float(u), float(v)))


def _tail_pairing_diverges(op, omega1, omega2) -> bool:
    probe = PerturbationSpec(op, omega1, omega2, 1.0 + 0.0j, TauAuto())
    try:
        tau_value(probe)
        return False
    except NonIntegrable:
        return True


def build_matching_step(op: OperatorModel, omega1: ScaleVector,
                        omega2: ScaleVector, tau: float, n: int,
                        max_doublings: int = 60,
                        cfg: QuadratureConfig = DEFAULT_QUAD) -> ApproxSequenceStep:
    """One member of the matching sequence at truncation level n."""
    if isinstance(tau, complex) and abs(complex(tau).imag) > 1e-14:
        raise ComplexTauUnsupported(
            "the sign/sqrt amplitude construction needs real tau")
    tau = float(complex(tau).real)
    if not isinstance(op, Multiplication):
        raise UnsupportedBackend("matching sequences need spectral windows")
    if not _tail_pairing_diverges(op, omega1, omega2):
        raise RegularityViolation(
            "coupling pairing already converges; the truncation sequence "
            "is trivial for such vectors")

    w = tau_weight()
    head1 = spectral_truncate(op, omega1, (0.0, float(n)))
    head2 = spectral_truncate(op, omega2, (0.0, float(n)))
    a_n = pairing(op, head2, omega1, w, cfg)
    if abs(a_n.imag) > 1e-8 * (1 + abs(a_n)):
        raise ComplexTauUnsupported("coupling pairing is not real-valued")
    a_n = a_n.real

    target = tau - a_n
    d_n = None
    b_n = None
    for j in range(1, max_doublings + 1):
        cand = float(n) * (2.0 ** j)
        win1 = spectral_truncate(op, omega1, (float(n), cand))
        win2 = spectral_truncate(op, omega2, (float(n), cand))
        val = pairing(op, win2, win1, w, cfg).real
        if abs(val) > abs(target):
            d_n, b_n = cand, val
            break
    if d_n is None:
        raise WindowNotFound(
            f"no tail window [{n}, {n}*2^j] with |b_n| > |tau - a_n| "
            f"within {max_doublings} doublings")

    eps1 = math.sqrt(abs(target)) / math.sqrt(abs(b_n))
    eps2 = math.copysign(1.0, target) * math.copysign(1.0, b_n) * eps1
    omega1_n = Sum(((1.0, head1), (eps1, win1)))
    omega2_n = Sum(((1.0, head2), (eps2, win2)))
    realized = pairing(op, omega2_n, omega1_n, w, cfg)
    return ApproxSequenceStep(n, omega1_n, omega2_n, a_n, b_n, eps1, eps2,
                              (float(n), d_n), realized)


def matching_spec(op: OperatorModel, step: ApproxSequenceStep,
                  alpha: complex) -> PerturbationSpec:
    """The truncated perturbation A + alpha <., omega1_n> omega2_n."""
    return PerturbationSpec(op, step.omega1_n, step.omega2_n, alpha, TauAuto())


def truncation_tail_norm(op: OperatorModel, omega: ScaleVector, n: float,
                         z: complex,
                         cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """||E_(n, inf) (A - z)^-1 omega||, the pure truncation residual."""
    tail = Windowed(resolvent_apply(op, z, omega), (float(n), math.inf))
    return norm(op, tail, cfg)


def resolvent_gap(spec_n: PerturbationSpec, spec_limit: PerturbationSpec,
                  z: complex, probes,
                  cfg: QuadratureConfig = DEFAULT_QUAD) -> GapReport:
    """Probe-basis estimate of ||R~_n,z - R~_z|| plus the two diagnostics."""
    z = complex(z)
    op = spec_limit.op
    for s in (spec_n, spec_limit):
        if not s.is_zero and is_infinite_b(b_of_z(s, z, cfg)):
            raise PerturbedEigenvalue(f"z = {z} is an eigenvalue")
    gap = 0.0
    for f in probes:
        va = krein_apply(spec_n, z, f, cfg)
        vb = krein_apply(spec_limit, z, f, cfg)
        diff = Sum(((1.0, va), (-1.0, vb)))
        gap = max(gap, norm(op, diff, cfg) / norm(op, f, cfg))
    fn1 = []
    for w_n, w in ((spec_n.omega1, spec_limit.omega1),
                   (spec_n.omega2, spec_limit.omega2)):
        diff = Sum(((1.0, resolvent_apply(op, z, w_n)),
                    (-1.0, resolvent_apply(op, z, w))))
        fn1.append(norm(op, diff, cfg))
    g_n = pairing(op, spec_n.omega2, spec_n.omega1, resolvent_weight(z), cfg)
    flim = regularized_F(spec_limit, z, cfg)
    tau = tau_value(spec_limit, cfg)
    fn3 = abs(g_n - (tau + flim))
    return GapReport(gap, (fn1[0], fn1[1]), fn3)
