"""Closed-form calculus for the Laplacian on R^3 (point interactions).

Admits point masses and the kernels they generate: Yukawa profiles
e^(-kappa r)/(4 pi r) from single resolvents and plain exponentials from
repeated ones.  Pairings are the classical one- and two-center integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonIntegrable, UnsupportedBackend, \
    UnrepresentableConvolution
from .operators import decay_kappa
from .vectors import (Delta, KernelVector, ScaleVector, Sum, TAG_H,
                      TAG_H_MINUS_2, TAG_H_PLUS_2)
from .weights import RationalWeight

_EQUAL_TOL = 1e-9


@dataclass(frozen=True)
class Delta3:
    point: tuple
    coef: complex


@dataclass(frozen=True)
class Yukawa3:
    """coef * e^(-kappa r) / (4 pi r), r = |x - point|."""

    point: tuple
    kappa: complex
    coef: complex


@dataclass(frozen=True)
class Exp3:
    """coef * e^(-kappa r), r = |x - point|."""

    point: tuple
    kappa: complex
    coef: complex


def terms3(v: ScaleVector, coef: complex = 1.0 + 0.0j) -> tuple:
    if isinstance(v, Sum):
        out = []
        for c, sub in v.terms:
            out.extend(terms3(sub, coef * c))
        return tuple(out)
    if isinstance(v, KernelVector):
        if v.backend != "3d":
            raise UnsupportedBackend("kernel vector belongs to another backend")
        return tuple(_scale(t, coef) for t in v.terms)
    if isinstance(v, Delta):
        pt = v.center if len(v.center) == 3 else None
        if pt is None:
            raise UnsupportedBackend("3-d backend needs 3-d delta points")
        return (Delta3(pt, complex(coef)),)
    raise UnrepresentableConvolution(
        f"{type(v).__name__} has no closed-form 3-d kernel")


def _scale(t, c):
    if isinstance(t, Delta3):
        return Delta3(t.point, t.coef * c)
    return type(t)(t.point, t.kappa, t.coef * c)


def as_vector(terms) -> KernelVector:
    return KernelVector("3d", tuple(terms))


def _dist(p, q) -> float:
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))


def resolvent_terms3(terms, kappa: complex) -> tuple:
    out = []
    for t in terms:
        if isinstance(t, Delta3):
            out.append(Yukawa3(t.point, kappa, t.coef))
        elif isinstance(t, Yukawa3):
            if abs(t.kappa - kappa) > _EQUAL_TOL * (1 + abs(kappa)):
                c = t.coef / (kappa * kappa - t.kappa * t.kappa)
                out.append(Yukawa3(t.point, t.kappa, c))
                out.append(Yukawa3(t.point, kappa, -c))
            else:
                out.append(Exp3(t.point, kappa, t.coef / (8 * math.pi * kappa)))
        else:
            raise UnrepresentableConvolution(
                "repeated resolvents beyond order two are not represented")
    return tuple(out)


def apply_weight_terms3(terms, weight: RationalWeight) -> tuple:
    const, atoms = weight.atoms()
    out = []
    if const != 0:
        out.extend(_scale(t, const) for t in terms)
    for pole, mult, coeff in atoms:
        cur = terms
        kappa = decay_kappa(pole)
        for _ in range(mult):
            cur = resolvent_terms3(cur, kappa)
        out.extend(_scale(t, coeff) for t in cur)
    return tuple(out)


def pair_terms3(f_terms, g_terms) -> complex:
    total = 0j
    singular: dict = {}
    for tf in f_terms:
        for tg in g_terms:
            group = _coincident_yukawa(tf, tg)
            if group is not None:
                singular.setdefault(group[0], []).append(group[1])
                continue
            total += _pair_two(tf, tg)
    for entries in singular.values():
        # sum_j C_j e^(-K_j d)/(4 pi d) as d -> 0: finite iff sum C_j = 0,
        # with limit -sum C_j K_j / (4 pi)
        coef_sum = sum(c for c, _ in entries)
        scale = sum(abs(c) for c, _ in entries) + 1e-300
        if abs(coef_sum) > 1e-10 * scale:
            raise NonIntegrable("Yukawa kernel contracted at its center")
        total += -sum(c * k for c, k in entries) / (4 * math.pi)
    return total


def _coincident_yukawa(tf, tg):
    """Detect a delta contracting a Yukawa at its own center; returns a
    (group key, (C, K)) entry of the regularized limit sum, else None."""
    if isinstance(tf, Delta3) and isinstance(tg, Yukawa3):
        if _dist(tf.point, tg.point) > 0:
            return None
        return (("f", tf.point), (tf.coef * tg.coef.conjugate(),
                                  tg.kappa.conjugate()))
    if isinstance(tf, Yukawa3) and isinstance(tg, Delta3):
        if _dist(tf.point, tg.point) > 0:
            return None
        return (("g", tg.point), (tf.coef * tg.coef.conjugate(), tf.kappa))
    return None


def _cexp(z):
    return complex(math.exp(z.real) * math.cos(z.imag),
                   math.exp(z.real) * math.sin(z.imag))


def _pair_two(tf, tg) -> complex:
    d = _dist(tf.point, tg.point)
    cf = tf.coef
    cg = tg.coef.conjugate()
    if isinstance(tf, Delta3) and isinstance(tg, Delta3):
        raise NonIntegrable("plain delta-delta pairing does not exist")
    if isinstance(tf, Delta3) or isinstance(tg, Delta3):
        other, conj = (tg, True) if isinstance(tf, Delta3) else (tf, False)
        kappa = other.kappa.conjugate() if conj else other.kappa
        if isinstance(other, Yukawa3):
            if d <= 0:
                raise NonIntegrable("Yukawa kernel contracted at its center")
            return cf * cg * _cexp(-kappa * d) / (4 * math.pi * d)
        return cf * cg * _cexp(-kappa * d)
    if isinstance(tf, Yukawa3) and isinstance(tg, Yukawa3):
        a, c = tf.kappa, tg.kappa.conjugate()
        return cf * cg * _two_center(a, c, d)
    if isinstance(tf, Exp3) and isinstance(tg, Exp3):
        raise UnsupportedBackend("Exp3-Exp3 pairings are not needed/implemented")
    if isinstance(tf, Yukawa3):
        a, b = tf.kappa, tg.kappa.conjugate()
    else:
        a, b = tg.kappa.conjugate(), tf.kappa
    return cf * cg * _yukawa_exp(a, b, d)


def _two_center(a, c, d) -> complex:
    """int e^(-a|x|)/(4 pi |x|) * e^(-c|x-R|)/(4 pi |x-R|) dx, |R| = d."""
    eps = c - a
    if d <= 0:
        return 1 / (4 * math.pi * (a + c))
    if abs(eps) <= 1e-3 * (1 + abs(a)):
        # series in eps: the plain difference quotient cancels badly here
        ed = eps * d
        series = 1 - ed / 2 + ed * ed / 6 - ed * ed * ed / 24
        return _cexp(-a * d) * series / (4 * math.pi * (a + c))
    return (_cexp(-a * d) - _cexp(-c * d)) / (4 * math.pi * d * (c * c - a * a))


def _yukawa_exp(a, b, d) -> complex:
    """int e^(-a|x|)/(4 pi |x|) * e^(-b|x-R|) dx via Fourier partial fractions.

    FT pair: Yukawa(a) -> 1/(p^2+a^2), Exp(b) -> 8 pi b/(p^2+b^2)^2, so the
    pairing is 8 pi b * (2 pi)^-3 int e^(ipR)/((p^2+a^2)(p^2+b^2)^2) d^3p.
    """
    if abs(a - b) <= _EQUAL_TOL * (1 + abs(a)):
        # 1/((p^2+a^2)^3): inverse FT = e^(-ar)(1+ar)/(32 pi a^3)
        return 8 * math.pi * a * _cexp(-a * d) * (1 + a * d) \
            / (32 * math.pi * a ** 3)
    den = b * b - a * a
    # 1/((p^2+a^2)(p^2+b^2)^2) = [1/(p^2+a^2) - 1/(p^2+b^2)]/den^2
    #                           - 1/((p^2+b^2)^2 den)
    exp_b = _cexp(-b * d) / (8 * math.pi * b)
    if d > 0:
        yuk_diff = (_cexp(-a * d) - _cexp(-b * d)) / (4 * math.pi * d)
    else:
        yuk_diff = (b - a) / (4 * math.pi)
    return 8 * math.pi * b * (yuk_diff / (den * den) - exp_b / den)


def classify_3d(v: ScaleVector) -> str:
    level = 2
    for t in terms3(v):
        if isinstance(t, Delta3):
            level = min(level, -2)
        elif isinstance(t, Yukawa3):
            level = min(level, 0)
    tags = {2: TAG_H_PLUS_2, 0: TAG_H, -2: TAG_H_MINUS_2}
    return tags[level]
