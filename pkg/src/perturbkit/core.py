"""Pairings, resolvents and norms over the operator backends.

The multiplication backend reduces everything to one-dimensional adaptive
quadrature along the domain; the Laplace backends dispatch to their exact
kernel calculus.  All dual pairings follow one convention:

    pairing(f, g, w) = <w(A) f, g> = integral of w(m(x)) f(x) conj(g(x)).
"""

from __future__ import annotations

import functools
import math

import numpy as np

from . import linekernel, space3d
from .errors import NonIntegrable, PoleOnSpectrum, UnsupportedBackend
from .operators import (LaplaceLine, LaplaceSpace3D, Multiplication,
                        OperatorModel, check_regular_point, decay_kappa)
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate_pieces
from .vectors import (ExpAbs, PowerLaw, ScaleVector, SpectralRational,
                      Tabulated, classify_regularity, flatten, merge_terms,
                      tag_level)
from .weights import ONE, RationalWeight, resolvent_weight, shift_weight

_CACHE_SIZE = 20000


# ----------------------------------------------------------------------
# multiplication backend: term evaluation


def _atom_callable(atom, window_lo):
    if isinstance(atom, PowerLaw):
        q, s = atom.exponent, atom.shift
        return lambda x: (x + s) ** q + 0j
    if isinstance(atom, ExpAbs):
        a, c = complex(atom.rate), atom.center
        return lambda x: np.exp(-a * np.abs(x - c))
    if isinstance(atom, Tabulated):
        g = np.asarray(atom.grid)
        vr = np.asarray([v.real for v in atom.values])
        vi = np.asarray([v.imag for v in atom.values])
        return lambda x: (np.interp(x, g, vr, left=0.0, right=0.0)
                          + 1j * np.interp(x, g, vi, left=0.0, right=0.0))
    raise UnsupportedBackend(
        f"{type(atom).__name__} vectors are not admitted under the "
        "multiplication backend")


def _term_support(term, op: Multiplication):
    lo, hi = op.start, math.inf
    if term.window is not None:
        u, v = term.window
        if v <= u:
            return None
        lo = max(lo, op.preimage(u) if u > op.spectrum_bottom else op.start)
        hi = op.preimage(v) if v < math.inf else math.inf
        if hi <= lo:
            return None
    return lo, hi


def _term_points(term):
    pts = []
    if isinstance(term.atom, ExpAbs):
        pts.append(term.atom.center)
    return pts


def _tail_exponent(term, op):
    from .vectors import _term_tail_exponent

    return _term_tail_exponent(term, op)


def _endpoint_exponent(term, op):
    atom = term.atom
    if isinstance(atom, PowerLaw) and op.start + atom.shift == 0:
        return atom.exponent
    return 0.0


def _check_weight_poles(op: Multiplication, weight: RationalWeight, lo, hi):
    """Reject weight poles sitting on the part of the spectrum we integrate."""
    for p in weight.poles:
        p = complex(p)
        scale = 1.0 + abs(p)
        if abs(p.imag) > 1e-12 * scale or p.real < op.spectrum_bottom:
            continue
        x = op.preimage(max(p.real, op.spectrum_bottom))
        if lo - 1e-12 <= x <= hi + 1e-12:
            raise PoleOnSpectrum(
                f"weight pole {p} lies on the spectrum; boundary values "
                "belong to the scattering module")


def _pair_mult(op: Multiplication, f, g, weight, cfg) -> complex:
    f_terms = merge_terms(flatten(f))
    g_terms = merge_terms(flatten(g))
    total = 0j
    for tf in f_terms:
        for tg in g_terms:
            w = tf.weight * tg.weight.conjugate() * weight
            sup_f = _term_support(tf, op)
            sup_g = _term_support(tg, op)
            if sup_f is None or sup_g is None:
                continue
            lo, hi = max(sup_f[0], sup_g[0]), min(sup_f[1], sup_g[1])
            if hi <= lo:
                continue
            _check_weight_poles(op, w, lo, hi)
            if math.isinf(hi):
                tf_tail = _tail_exponent(tf, op)
                tg_tail = _tail_exponent(tg, op)
                if tf_tail is not None and tg_tail is not None:
                    # term tails already include the terms' own weights
                    e = tf_tail + tg_tail + op.power * weight.degree
                    if e >= -1.0:
                        raise NonIntegrable(
                            f"pairing integrand decays like x^{e:.3g}")
            if lo == op.start:
                e0 = _endpoint_exponent(tf, op) + _endpoint_exponent(tg, op)
                if e0 <= -1.0:
                    raise NonIntegrable(
                        "integrand not integrable at the domain endpoint")
            cf = _atom_callable(tf.atom, lo)
            cg = _atom_callable(tg.atom, lo)
            coef = tf.coef * tg.coef.conjugate()

            def integrand(x, cf=cf, cg=cg, w=w, coef=coef):
                return coef * cf(x) * np.conj(cg(x)) * w(op.symbol(x))

            pts = _term_points(tf) + _term_points(tg) + _pole_hints(op, w, lo, hi)
            val, _ = integrate_pieces(integrand, [(lo, hi)], cfg, points=pts)
            total += val
    return total


def _pole_hints(op, weight, lo, hi):
    """x-locations under near-real weight poles, to guide subdivision.

    Poles nearly cancelled by a numerator zero are left unhinted: the
    integrand is tame there and a breakpoint only trips the quadrature's
    roundoff detector.
    """
    pts = []
    for p in weight.poles:
        p = complex(p)
        if abs(p.imag) >= 0.5 or p.real <= op.spectrum_bottom:
            continue
        if any(abs(complex(z) - p) < 1e-2 * (1 + abs(p))
               for z in weight.zeros):
            continue
        x = op.preimage(p.real)
        if lo < x < hi:
            # bracket the spike; a breakpoint exactly on it trips the
            # quadrature's roundoff detector
            d = max(1e-2 * (1.0 + x),
                    10.0 * abs(p.imag) / max(op.symbol_prime(x), 1e-12))
            pts.extend((x - d, x + d))
    return pts


# ----------------------------------------------------------------------
# public operations


@functools.lru_cache(maxsize=_CACHE_SIZE)
def _pairing_cached(op, f, g, weight, cfg) -> complex:
    if isinstance(op, Multiplication):
        return _pair_mult(op, f, g, weight, cfg)
    if isinstance(op, LaplaceLine):
        wf = linekernel.apply_weight_terms(linekernel.line_terms(f), weight)
        return linekernel.pair_terms(wf, linekernel.line_terms(g))
    if isinstance(op, LaplaceSpace3D):
        wf = space3d.apply_weight_terms3(space3d.terms3(f), weight)
        return space3d.pair_terms3(wf, space3d.terms3(g))
    raise TypeError(f"unknown operator backend: {op!r}")


def pairing(op: OperatorModel, f: ScaleVector, g: ScaleVector,
            weight: RationalWeight = ONE,
            cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Dual pairing <weight(A) f, g>, conjugate-linear in g."""
    return _pairing_cached(op, f, g, weight, cfg)


def resolvent_apply(op: OperatorModel, z: complex, v: ScaleVector,
                    boundary: bool = False) -> ScaleVector:
    """(A - z)^-1 v as a new catalog vector.

    With boundary=True the Laplace backends evaluate at z = lam + i0*sign
    (pass z with an infinitesimal side encoded by its imaginary sign).
    """
    z = complex(z)
    if not boundary:
        check_regular_point(op, z)
    if isinstance(op, Multiplication):
        return apply_weight(op, resolvent_weight(z), v)
    if isinstance(op, LaplaceLine):
        if boundary and z.real > 0:
            from .operators import boundary_kappa

            kappa = boundary_kappa(z.real, 1 if z.imag >= 0 else -1)
        else:
            kappa = decay_kappa(z)
        return linekernel.as_vector(
            linekernel.resolvent_terms(linekernel.line_terms(v), kappa))
    if isinstance(op, LaplaceSpace3D):
        return space3d.as_vector(
            space3d.resolvent_terms3(space3d.terms3(v), decay_kappa(z)))
    raise TypeError(f"unknown operator backend: {op!r}")


def apply_weight(op: OperatorModel, weight: RationalWeight,
                 v: ScaleVector) -> ScaleVector:
    """w(A) v as a catalog vector (functional calculus)."""
    if isinstance(op, Multiplication):
        if isinstance(v, SpectralRational):
            return SpectralRational(v.base, v.weight * weight)
        return SpectralRational(v, weight)
    if isinstance(op, LaplaceLine):
        return linekernel.as_vector(
            linekernel.apply_weight_terms(linekernel.line_terms(v), weight))
    if isinstance(op, LaplaceSpace3D):
        return space3d.as_vector(
            space3d.apply_weight_terms3(space3d.terms3(v), weight))
    raise TypeError(f"unknown operator backend: {op!r}")


def apply_shift(op: OperatorModel, z: complex, v: ScaleVector) -> ScaleVector:
    """(A - z) v; the rank-one construction's inverse direction."""
    z = complex(z)
    if isinstance(op, Multiplication):
        return apply_weight(op, shift_weight(z), v)
    if isinstance(op, LaplaceLine):
        terms = linekernel.line_terms(v)
        av = linekernel.a_multiply_terms(terms)
        shifted = av + tuple(linekernel._scale_term(t, -z) for t in terms)
        return linekernel.as_vector(shifted)
    raise UnsupportedBackend("(A - z) multiplication needs the line or "
                             "multiplication backend")


def eta(op: OperatorModel, omega: ScaleVector) -> ScaleVector:
    """A^-1 omega; requires 0 to be regular or omega to avoid the bottom."""
    if op.spectrum_bottom > 0:
        return resolvent_apply(op, 0.0, omega)
    if isinstance(op, Multiplication) and _vanishes_near_bottom(op, omega):
        return apply_weight(op, resolvent_weight(0.0), omega)
    raise PoleOnSpectrum("0 lies on the spectrum of A")


def _vanishes_near_bottom(op, v) -> bool:
    if not isinstance(op, Multiplication):
        return False
    for t in flatten(v):
        if t.window is None or t.window[0] <= op.spectrum_bottom:
            return False
    return True


def norm(op: OperatorModel, v: ScaleVector,
         cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Hilbert-space norm ||v||."""
    return math.sqrt(max(pairing(op, v, v, ONE, cfg).real, 0.0))


def scale_norm_squared(op: OperatorModel, v: ScaleVector, k: int,
                       cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """||v||_k^2 = <(A+1)^k v, v> for k in {-2,...,2}."""
    w = RationalWeight(poles=(-1.0 + 0j,) * (-k)) if k < 0 else \
        RationalWeight(zeros=(-1.0 + 0j,) * k)
    return pairing(op, v, v, w, cfg).real


def evaluate(op: OperatorModel, v: ScaleVector, x) -> complex:
    """Pointwise value (multiplication and line backends, no deltas)."""
    if isinstance(op, Multiplication):
        total = 0j
        for t in flatten(v):
            sup = _term_support(t, op)
            if sup is None or not (sup[0] <= x <= sup[1]):
                continue
            total += (t.coef * _atom_callable(t.atom, sup[0])(x)
                      * t.weight(op.symbol(x)))
        return total
    if isinstance(op, LaplaceLine):
        return linekernel.evaluate_terms(linekernel.line_terms(v), x)
    raise UnsupportedBackend("pointwise evaluation needs a function backend")


def projective_deviation(op: OperatorModel, u: ScaleVector, v: ScaleVector,
                         cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """1 - |<u, v>| / (||u|| ||v||): phase/scale-free vector distance."""
    nu, nv = norm(op, u, cfg), norm(op, v, cfg)
    if nu == 0 or nv == 0:
        return 0.0 if nu == nv else 1.0
    return 1.0 - abs(pairing(op, u, v, ONE, cfg)) / (nu * nv)


def regularity_level(op: OperatorModel, v: ScaleVector):
    return tag_level(classify_regularity(op, v))


__all__ = [
    "pairing", "resolvent_apply", "apply_weight", "apply_shift", "eta",
    "norm", "scale_norm_squared", "evaluate", "projective_deviation",
    "classify_regularity", "regularity_level",
]
