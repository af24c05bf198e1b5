"""Rank-one perturbed resolvents via the Krein-type correction.

For the perturbation A + alpha <., omega1> omega2 the resolvent is

    R~_z = R_z + b_z (., n_zbar) m_z,
    n_z = R_z omega1,  m_z = R_z omega2,
    -1/b_z = 1/alpha + tau + F(z),
    F(z)  = <(A-z)^-1 omega2, (1 + conj(z) A)(A^2+1)^-1 omega1>,

with tau the renormalized value of <omega2, A(A^2+1)^-1 omega1> when that
pairing diverges, and its actual value when it converges.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from typing import Union

from .core import norm, pairing, resolvent_apply
from .errors import NonIntegrable, PerturbedEigenvalue, PoleOnSpectrum
from .operators import OperatorModel, check_regular_point
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .vectors import ScaleVector, Sum
from .weights import ONE, f_weight, resolvent_weight, tau_weight


class _ZeroCoupling:
    """Marker for alpha = 0 (the unperturbed operator, b_z == 0)."""

    def __repr__(self):
        return "ZERO_COUPLING"


ZERO_COUPLING = _ZeroCoupling()

INFINITE = math.inf  # b_z at a perturbed eigenvalue

_SINGULAR_TOL = 1e-12


def is_infinite_b(b) -> bool:
    return isinstance(b, float) and math.isinf(b)


@dataclass(frozen=True)
class TauAuto:
    """Compute tau = <omega2, A(A^2+1)^-1 omega1> when it converges."""


@dataclass(frozen=True)
class TauExplicit:
    value: complex


TauPolicy = Union[TauAuto, TauExplicit]


@dataclass(frozen=True)
class PerturbationSpec:
    """A + alpha <., omega1> omega2 with a tau policy."""

    op: OperatorModel
    omega1: ScaleVector
    omega2: ScaleVector
    alpha: object = 1.0 + 0.0j  # complex or ZERO_COUPLING
    tau: TauPolicy = TauAuto()

    def __post_init__(self):
        if self.alpha is not ZERO_COUPLING:
            a = complex(self.alpha)
            if a == 0:
                raise ValueError(
                    "alpha = 0 must use the ZERO_COUPLING marker")
            object.__setattr__(self, "alpha", a)

    @property
    def is_zero(self) -> bool:
        return self.alpha is ZERO_COUPLING


@dataclass(frozen=True)
class KreinData:
    """The resolvent correction data at one regular point."""

    z: complex
    n_z: ScaleVector
    m_z: ScaleVector
    b_z: object          # complex, or INFINITE at a perturbed eigenvalue
    F_value: complex
    tau: complex

    @property
    def at_perturbed_eigenvalue(self) -> bool:
        return is_infinite_b(self.b_z)


def tau_auto(spec: PerturbationSpec,
             cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """<omega2, A(A^2+1)^-1 omega1>; NonIntegrable in the parametric case."""
    return _tau_auto_cached(spec, cfg)


@functools.lru_cache(maxsize=4096)
def _tau_auto_cached(spec, cfg) -> complex:
    return pairing(spec.op, spec.omega2, spec.omega1, tau_weight(), cfg)


def tau_value(spec: PerturbationSpec,
              cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    if isinstance(spec.tau, TauExplicit):
        return complex(spec.tau.value)
    try:
        return tau_auto(spec, cfg)
    except NonIntegrable as exc:
        raise NonIntegrable(
            "the coupling pairing diverges; supply an explicit tau "
            "(parametric perturbation)") from exc


def regularized_F(spec: PerturbationSpec, z: complex,
                  cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """F(z) = <(A-z)^-1 omega2, (1 + conj(z) A)(A^2+I)^-1 omega1>."""
    return pairing(spec.op, spec.omega2, spec.omega1, f_weight(z), cfg)


def b_of_z(spec: PerturbationSpec, z: complex,
           cfg: QuadratureConfig = DEFAULT_QUAD):
    """The scalar Krein coefficient; INFINITE exactly at new eigenvalues."""
    check_regular_point(spec.op, z)
    if spec.is_zero:
        return 0.0 + 0.0j
    denom = 1.0 / spec.alpha + tau_value(spec, cfg) + regularized_F(spec, z, cfg)
    scale = 1.0 + abs(1.0 / spec.alpha) + abs(denom)
    if abs(denom) <= _SINGULAR_TOL * scale:
        return INFINITE
    return -1.0 / denom


def krein_data(spec: PerturbationSpec, z: complex,
               cfg: QuadratureConfig = DEFAULT_QUAD) -> KreinData:
    z = complex(z)
    n_z = resolvent_apply(spec.op, z, spec.omega1)
    m_z = resolvent_apply(spec.op, z, spec.omega2)
    if spec.is_zero:
        return KreinData(z, n_z, m_z, 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j)
    F = regularized_F(spec, z, cfg)
    tau = tau_value(spec, cfg)
    denom = 1.0 / spec.alpha + tau + F
    scale = 1.0 + abs(1.0 / spec.alpha) + abs(denom)
    b = INFINITE if abs(denom) <= _SINGULAR_TOL * scale else -1.0 / denom
    return KreinData(z, n_z, m_z, b, F, tau)


def krein_apply(spec: PerturbationSpec, z: complex, f: ScaleVector,
                cfg: QuadratureConfig = DEFAULT_QUAD) -> ScaleVector:
    """R~_z f = R_z f + b_z (f, n_zbar) m_z."""
    z = complex(z)
    rf = resolvent_apply(spec.op, z, f)
    if spec.is_zero:
        return rf
    b = b_of_z(spec, z, cfg)
    if is_infinite_b(b):
        raise PerturbedEigenvalue(f"z = {z} is an eigenvalue of the "
                                  "perturbed operator")
    n_zbar = resolvent_apply(spec.op, z.conjugate(), spec.omega1)
    m_z = resolvent_apply(spec.op, z, spec.omega2)
    coef = b * pairing(spec.op, f, n_zbar, ONE, cfg)
    return Sum(((1.0, rf), (coef, m_z)))


def cocycle_residual(spec: PerturbationSpec, z: complex, xi: complex,
                     cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """| b_z^-1 - b_xi^-1 - (xi - z)(m_xi, n_zbar) |, a test statistic."""
    if spec.is_zero:
        return 0.0
    z, xi = complex(z), complex(xi)
    b_z = b_of_z(spec, z, cfg)
    b_xi = b_of_z(spec, xi, cfg)
    if is_infinite_b(b_z) or is_infinite_b(b_xi):
        raise PerturbedEigenvalue("cocycle residual needs regular points "
                                  "of the perturbed operator")
    m_xi = resolvent_apply(spec.op, xi, spec.omega2)
    n_zbar = resolvent_apply(spec.op, z.conjugate(), spec.omega1)
    cross = pairing(spec.op, m_xi, n_zbar, ONE, cfg)
    return abs(1.0 / b_z - 1.0 / b_xi - (xi - z) * cross)


def adjoint_spec(spec: PerturbationSpec) -> PerturbationSpec:
    """The spec of the adjoint operator: swap vectors, conjugate scalars."""
    alpha = spec.alpha if spec.is_zero else complex(spec.alpha).conjugate()
    tau = spec.tau if isinstance(spec.tau, TauAuto) \
        else TauExplicit(complex(spec.tau.value).conjugate())
    return replace(spec, omega1=spec.omega2, omega2=spec.omega1,
                   alpha=alpha, tau=tau)


def inverse_at_zero(spec: PerturbationSpec,
                    cfg: QuadratureConfig = DEFAULT_QUAD) -> KreinData:
    """Krein data of the inverse: -1/b_0 = 1/alpha + <omega2, A^-1 omega1>.

    The returned b_z is INFINITE when 0 is a perturbed eigenvalue; callers
    that need the inverse should treat that as PerturbedEigenvalue.
    """
    if spec.op.spectrum_bottom <= 0:
        raise PoleOnSpectrum("0 lies on the spectrum of A")
    n_0 = resolvent_apply(spec.op, 0.0, spec.omega1)
    m_0 = resolvent_apply(spec.op, 0.0, spec.omega2)
    if spec.is_zero:
        return KreinData(0.0 + 0.0j, n_0, m_0, 0.0 + 0.0j, 0.0 + 0.0j,
                         0.0 + 0.0j)
    g0 = pairing(spec.op, spec.omega2, spec.omega1, resolvent_weight(0.0), cfg)
    denom = 1.0 / spec.alpha + g0
    scale = 1.0 + abs(1.0 / spec.alpha) + abs(g0)
    b0 = INFINITE if abs(denom) <= 1e-10 * scale else -1.0 / denom
    F0 = regularized_F(spec, 0.0, cfg)
    return KreinData(0.0 + 0.0j, n_0, m_0, b0, F0, g0 - F0)


def unregularized_G(spec: PerturbationSpec, z: complex,
                    cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """<(A-z)^-1 omega2, omega1>; converges when both vectors are in H-1."""
    return pairing(spec.op, spec.omega2, spec.omega1, resolvent_weight(z), cfg)


def resolvent_norm_diff(spec_a: PerturbationSpec, spec_b: PerturbationSpec,
                        z: complex, probes,
                        cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """max_f ||(R~a_z - R~b_z) f|| / ||f|| over the probe list."""
    worst = 0.0
    for f in probes:
        va = krein_apply(spec_a, z, f, cfg)
        vb = krein_apply(spec_b, z, f, cfg)
        diff = Sum(((1.0, va), (-1.0, vb)))
        worst = max(worst, norm(spec_a.op, diff, cfg) / norm(spec_a.op, f, cfg))
    return worst
