"""Closed-form calculus for the Laplacian on the line.

Vectors are finite combinations of point masses delta_c and decaying
profiles P(|x-c|) e^(-a|x-c|) with polynomial P.  That family is closed
under the resolvent (A - z)^-1, under multiplication by A, and under all
rational weights used by the library, so every pairing reduces to exact
exponential moments -- no quadrature on this backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (NonIntegrable, RegularityViolation, UnsupportedBackend,
                     UnrepresentableConvolution)
from .operators import decay_kappa
from .vectors import (Delta, ExpAbs, KernelVector, ScaleVector, Sum,
                      TAG_H_MINUS_1, TAG_H_PLUS_1, TAG_H_PLUS_2, Windowed)
from .weights import RationalWeight

_RES_TOL = 1e-4     # rate proximity switching to the stable resonant branch
_NEUMANN_ORDER = 6  # (z - z0)^k correction depth near resonance
_JUMP_TOL = 1e-12


@dataclass(frozen=True)
class LineDelta:
    center: float
    coef: complex


@dataclass(frozen=True)
class LineExp:
    """coef-free profile (sum_k coeffs[k] r^k) exp(-rate r), r = |x-center|."""

    center: float
    rate: complex
    coeffs: tuple


def line_terms(v: ScaleVector, coef: complex = 1.0 + 0.0j) -> tuple:
    """Flatten a catalog vector into line kernel terms."""
    if isinstance(v, Sum):
        out = []
        for c, sub in v.terms:
            out.extend(line_terms(sub, coef * c))
        return tuple(out)
    if isinstance(v, KernelVector):
        if v.backend != "line":
            raise UnsupportedBackend("kernel vector belongs to another backend")
        return tuple(_scale_term(t, coef) for t in v.terms)
    if isinstance(v, Delta):
        if len(v.center) != 1:
            raise UnsupportedBackend("line backend needs 1-d delta points")
        return (LineDelta(v.center[0], complex(coef)),)
    if isinstance(v, ExpAbs):
        rate = complex(v.rate)
        if rate.real < 0:
            raise ValueError("ExpAbs rate must have Re >= 0")
        return (LineExp(float(v.center), rate, (complex(coef),)),)
    if isinstance(v, Windowed):
        raise UnsupportedBackend(
            "spectral windows are not available under Laplace backends")
    raise UnrepresentableConvolution(
        f"{type(v).__name__} has no closed-form line kernel")


def _scale_term(t, c):
    if isinstance(t, LineDelta):
        return LineDelta(t.center, t.coef * c)
    return LineExp(t.center, t.rate, tuple(q * c for q in t.coeffs))


def as_vector(terms) -> KernelVector:
    return KernelVector("line", _merge(terms))


# ----------------------------------------------------------------------
# polynomial helpers (coefficient tuples, lowest power first)


def _poly_shift(coeffs, d):
    """P(t + d) expanded in powers of t."""
    n = len(coeffs)
    out = [0j] * n
    for j, c in enumerate(coeffs):
        for i in range(j + 1):
            out[i] += c * math.comb(j, i) * d ** (j - i)
    return out


def _poly_reverse_arg(coeffs, d):
    """P(d - s) expanded in powers of s."""
    n = len(coeffs)
    out = [0j] * n
    for j, c in enumerate(coeffs):
        for i in range(j + 1):
            out[i] += c * math.comb(j, i) * (-1) ** i * d ** (j - i)
    return out


def _poly_mul(a, b):
    out = [0j] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_eval(coeffs, x):
    val = 0j
    for c in reversed(coeffs):
        val = val * x + c
    return val


def _moments_infinite(coeffs, b):
    """sum_n coeffs[n] * int_0^inf t^n e^(-b t) dt; needs Re b > 0."""
    if b.real <= 0:
        raise NonIntegrable("non-decaying tail in a line pairing")
    total = 0j
    fact = 1.0
    binv = 1.0 / b
    power = binv
    for n, c in enumerate(coeffs):
        if n > 0:
            fact *= n
            power *= binv
        total += c * fact * power
    return total


def _moments_finite(coeffs, b, L):
    """sum_n coeffs[n] * int_0^L t^n e^(-b t) dt."""
    if L <= 0:
        return 0j
    n_max = len(coeffs) - 1
    if abs(b) * L < 1e-6:
        # series in b to avoid cancellation
        vals = []
        for n in range(n_max + 1):
            v = (L ** (n + 1) / (n + 1) - b * L ** (n + 2) / (n + 2)
                 + b * b * L ** (n + 3) / (2 * (n + 3))
                 - b ** 3 * L ** (n + 4) / (6 * (n + 4)))
            vals.append(v)
    else:
        ebl = _cexp(-b * L)
        vals = [(1 - ebl) / b]
        for n in range(1, n_max + 1):
            vals.append((n * vals[n - 1] - L ** n * ebl) / b)
    return sum(c * v for c, v in zip(coeffs, vals))


def _cexp(z):
    return complex(math.exp(z.real) * math.cos(z.imag),
                   math.exp(z.real) * math.sin(z.imag))


# ----------------------------------------------------------------------
# operator actions


def resolvent_terms(terms, kappa: complex) -> tuple:
    """(A - z)^-1 on line terms, z = -kappa^2, Re kappa >= 0."""
    out = []
    for t in terms:
        if isinstance(t, LineDelta):
            out.append(LineExp(t.center, kappa, (t.coef / (2 * kappa),)))
            continue
        a = t.rate
        p = t.coeffs
        if abs(a - kappa) > _RES_TOL * (1 + abs(kappa)):
            # -Q'' + 2aQ' - (a^2 - kappa^2) Q = P, then match the jump
            dd = a * a - kappa * kappa
            q = [0j] * len(p)
            for m in range(len(p) - 1, -1, -1):
                acc = -p[m]
                if m + 1 < len(q):
                    acc += 2 * a * (m + 1) * q[m + 1]
                if m + 2 < len(q):
                    acc -= (m + 2) * (m + 1) * q[m + 2]
                q[m] = acc / dd
            beta = (_dpoly0(q) - a * q[0]) / kappa
            out.append(LineExp(t.center, a, tuple(q)))
            out.append(LineExp(t.center, kappa, (beta,)))
        else:
            # near resonance the two-branch formula cancels catastrophically;
            # expand around the exact resonance z0 = -a^2 instead:
            # R_z = sum_k (z - z0)^k R_z0^(k+1), converging fast since
            # |z - z0| << dist(z0, spectrum)
            dz = a * a - kappa * kappa  # z - z0
            cur = t
            scale = 1.0 + 0.0j
            for _ in range(_NEUMANN_ORDER + 1):
                cur = _resolvent_resonant(cur)
                out.append(LineExp(cur.center, cur.rate,
                                   tuple(scale * q for q in cur.coeffs)))
                scale *= dz
                if abs(scale) == 0.0:
                    break
    return tuple(out)


def _resolvent_resonant(t: LineExp) -> LineExp:
    """(A + a^2)^-1 on a rate-a profile: -Q'' + 2aQ' = P with Q(0) = 0."""
    a = t.rate
    p = t.coeffs
    q = [0j] * (len(p) + 1)
    for m in range(len(p) - 1, -1, -1):
        acc = p[m]
        if m + 2 < len(q):
            acc += (m + 2) * (m + 1) * q[m + 2]
        q[m + 1] = acc / (2 * a * (m + 1))
    beta = (_dpoly0(q) - a * q[0]) / a
    q[0] += beta
    return LineExp(t.center, a, tuple(q))


def _dpoly0(q):
    return q[1] if len(q) > 1 else 0j


def a_multiply_terms(terms) -> tuple:
    """A applied to line terms; point masses are not in the range."""
    out = []
    for t in terms:
        if isinstance(t, LineDelta):
            raise RegularityViolation(
                "A * delta leaves the kernel family (outside H-2)")
        a, p = t.rate, list(t.coeffs)
        d1 = [(m + 1) * p[m + 1] for m in range(len(p) - 1)]
        d2 = [(m + 1) * d1[m + 1] for m in range(len(d1) - 1)]
        smooth = [0j] * len(p)
        for m in range(len(p)):
            val = -(a * a) * p[m]
            if m < len(d1):
                val += 2 * a * d1[m]
            if m < len(d2):
                val -= d2[m]
            smooth[m] = val
        out.append(LineExp(t.center, a, tuple(smooth)))
        jump = 2 * (a * p[0] - _dpoly0(p))
        if abs(jump) > _JUMP_TOL * (1 + abs(p[0])):
            out.append(LineDelta(t.center, jump))
    return tuple(out)


def apply_weight_terms(terms, weight: RationalWeight) -> tuple:
    """w(A) on line terms via the partial-fraction resolvent atoms."""
    const, atoms = weight.atoms()
    out = []
    if const != 0:
        out.extend(_scale_term(t, const) for t in terms)
    for pole, mult, coeff in atoms:
        cur = terms
        kappa = decay_kappa(pole)
        for _ in range(mult):
            cur = resolvent_terms(cur, kappa)
        out.extend(_scale_term(t, coeff) for t in cur)
    return tuple(out)


def evaluate_terms(terms, x: float) -> complex:
    val = 0j
    for t in terms:
        if isinstance(t, LineDelta):
            raise RegularityViolation("delta terms have no pointwise values")
        r = abs(x - t.center)
        val += _poly_eval(t.coeffs, r) * _cexp(-t.rate * r)
    return val


# ----------------------------------------------------------------------
# exact pairings


def pair_terms(f_terms, g_terms) -> complex:
    """<f, g> = int f(x) conj(g(x)) dx, exactly."""
    total = 0j
    for tf in f_terms:
        for tg in g_terms:
            total += _pair_two(tf, tg)
    return total


def _eval_conj(t: LineExp, x: float) -> complex:
    r = abs(x - t.center)
    return (_poly_eval(t.coeffs, r) * _cexp(-t.rate * r)).conjugate()


def _pair_two(tf, tg) -> complex:
    if isinstance(tf, LineDelta) and isinstance(tg, LineDelta):
        raise NonIntegrable("plain delta-delta pairing does not exist")
    if isinstance(tf, LineDelta):
        return tf.coef * _eval_conj(tg, tf.center)
    if isinstance(tg, LineDelta):
        r = abs(tg.center - tf.center)
        return _poly_eval(tf.coeffs, r) * _cexp(-tf.rate * r) \
            * tg.coef.conjugate()
    # both profiles: orient left/right and integrate the three regions
    a1, p1, c1 = tf.rate, tf.coeffs, tf.center
    a2 = tg.rate.conjugate()
    p2 = tuple(q.conjugate() for q in tg.coeffs)
    c2 = tg.center
    if c1 <= c2:
        cl, al, pl, cr, ar, pr = c1, a1, p1, c2, a2, p2
    else:
        cl, al, pl, cr, ar, pr = c2, a2, p2, c1, a1, p1
    d = cr - cl
    s = al + ar
    # x >= cr: r_l = t + d, r_r = t
    right = _cexp(-al * d) * _moments_infinite(
        _poly_mul(_poly_shift(pl, d), pr), s)
    # x <= cl: r_l = t, r_r = t + d
    left = _cexp(-ar * d) * _moments_infinite(
        _poly_mul(pl, _poly_shift(pr, d)), s)
    mid = 0j
    if d > 0:
        mid = _cexp(-ar * d) * _moments_finite(
            _poly_mul(pl, _poly_reverse_arg(pr, d)), al - ar, d)
    return left + mid + right


def norm_squared(terms) -> float:
    return pair_terms(terms, terms).real


# ----------------------------------------------------------------------
# regularity on the line


def classify_line(v: ScaleVector) -> str:
    terms = _merge(line_terms(v))
    level = 2
    for t in terms:
        if isinstance(t, LineDelta):
            level = min(level, -1)
        else:
            if t.rate.real <= 0:
                raise RegularityViolation(
                    "oscillatory profiles are not scale vectors")
            jump = t.rate * t.coeffs[0] - _dpoly0(t.coeffs)
            level = min(level, 2 if abs(jump) <= _JUMP_TOL else 1)
    tags = {2: TAG_H_PLUS_2, 1: TAG_H_PLUS_1, -1: TAG_H_MINUS_1}
    return tags[level]


def _merge(terms, drop_tol: float = 1e-11):
    """Canonicalize: sum coincident terms and drop relative cancellations.

    Rate-wise jump contributions of a smooth combination cancel only in
    the aggregate, so merging is required before deltas are paired.
    """
    deltas: dict = {}
    exps: dict = {}
    scale: dict = {}
    order = []
    for t in terms:
        if isinstance(t, LineDelta):
            key = ("d", t.center)
            deltas[key] = deltas.get(key, 0j) + t.coef
            scale[key] = max(scale.get(key, 0.0), abs(t.coef))
        else:
            key = ("e", t.center, t.rate)
            cur = exps.get(key, ())
            n = max(len(cur), len(t.coeffs))
            merged = [0j] * n
            for i, c in enumerate(cur):
                merged[i] += c
            for i, c in enumerate(t.coeffs):
                merged[i] += c
            exps[key] = tuple(merged)
            scale[key] = max(scale.get(key, 0.0),
                             max(abs(c) for c in t.coeffs))
        if key not in order:
            order.append(key)
    out = []
    for key in order:
        if key[0] == "d":
            if abs(deltas[key]) > drop_tol * scale[key]:
                out.append(LineDelta(key[1], deltas[key]))
        else:
            coeffs = exps[key]
            if any(abs(c) > drop_tol * scale[key] for c in coeffs):
                out.append(LineExp(key[1], key[2], coeffs))
    return tuple(out)
