"""Vector catalog of the operator scale and the regularity classifier.

Vectors are immutable descriptions; backends decide how to evaluate them.
Regularity tags name the finest space of the five-window chain
H+2 c H+1 c H c H-1 c H-2 that contains the vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import Undecidable, UnsupportedBackend
from .operators import LaplaceLine, LaplaceSpace3D, Multiplication, OperatorModel
from .weights import ONE, RationalWeight

# finest k with v in H_k, from smoothest to roughest
TAG_H_PLUS_2 = "H+2"
TAG_H_PLUS_1 = "H+1\\H+2"
TAG_H = "H\\H+1"
TAG_H_MINUS_1 = "H-1\\H"
TAG_H_MINUS_2 = "H-2\\H-1"
TAG_OUTSIDE = "outside"

_TAG_BY_K = {2: TAG_H_PLUS_2, 1: TAG_H_PLUS_1, 0: TAG_H,
             -1: TAG_H_MINUS_1, -2: TAG_H_MINUS_2}
_K_BY_TAG = {v: k for k, v in _TAG_BY_K.items()}


def tag_level(tag: str):
    """Finest k with v in H_k, or None for 'outside'."""
    return _K_BY_TAG.get(tag)


def member_of(tag: str, k: int) -> bool:
    """Whether a vector with this tag belongs to H_k."""
    level = tag_level(tag)
    return level is not None and level >= k


@dataclass(frozen=True)
class PowerLaw:
    """x -> (x + shift)**exponent on the operator domain."""

    exponent: float
    shift: float = 0.0


@dataclass(frozen=True)
class ExpAbs:
    """x -> exp(-rate * |x - center|), Re rate > 0."""

    rate: complex = 1.0
    center: float = 0.0


@dataclass(frozen=True)
class Delta:
    """Point functional; only contracted against closed-form kernels."""

    center: tuple = (0.0,)

    def __init__(self, center=0.0):
        if isinstance(center, (int, float)):
            center = (float(center),)
        object.__setattr__(self, "center", tuple(float(c) for c in center))

    @property
    def point(self):
        return self.center[0] if len(self.center) == 1 else self.center


@dataclass(frozen=True)
class Windowed:
    """Spectral window E_[u,v] applied to a base vector, times a scale."""

    base: "ScaleVector"
    window: tuple
    scale: complex = 1.0 + 0.0j

    def __post_init__(self):
        u, v = self.window
        if not u < v:
            raise ValueError("window must satisfy u < v")
        object.__setattr__(self, "window", (float(u), float(v)))


@dataclass(frozen=True)
class Sum:
    """Weighted sum of catalog vectors."""

    terms: tuple = ()

    def __init__(self, terms=()):
        object.__setattr__(
            self, "terms",
            tuple((complex(c), v) for c, v in terms))


@dataclass(frozen=True)
class Tabulated:
    """Grid samples, zero outside the grid; the catalog escape hatch."""

    grid: tuple
    values: tuple

    def __init__(self, grid, values):
        if len(grid) != len(values) or len(grid) < 2:
            raise ValueError("grid and values must match and have length >= 2")
        object.__setattr__(self, "grid", tuple(float(g) for g in grid))
        object.__setattr__(self, "values", tuple(complex(v) for v in values))


@dataclass(frozen=True)
class SpectralRational:
    """w(A) applied to a base vector (multiplication backend internals)."""

    base: "ScaleVector"
    weight: RationalWeight


@dataclass(frozen=True)
class KernelVector:
    """Closed-form kernel combination produced by the Laplace backends."""

    backend: str  # "line" or "3d"
    terms: tuple


ScaleVector = Union[PowerLaw, ExpAbs, Delta, Windowed, Sum, Tabulated,
                    SpectralRational, KernelVector]


def scaled(c: complex, v: ScaleVector) -> ScaleVector:
    if c == 1:
        return v
    return Sum(((c, v),))


# ----------------------------------------------------------------------
# flattening to weighted atomic terms


@dataclass(frozen=True)
class _Term:
    coef: complex
    atom: ScaleVector          # PowerLaw | ExpAbs | Delta | Tabulated
    weight: RationalWeight = ONE
    window: tuple | None = None  # spectral window, intersection of wrappers


def _intersect(w1, w2):
    if w1 is None:
        return w2
    if w2 is None:
        return w1
    u, v = max(w1[0], w2[0]), min(w1[1], w2[1])
    return (u, v) if u < v else (0.0, 0.0)  # empty marker


def flatten(v: ScaleVector, coef: complex = 1.0 + 0.0j,
            weight: RationalWeight = ONE, window=None) -> list[_Term]:
    """Expand Sum/Windowed/SpectralRational wrappers into atomic terms."""
    if isinstance(v, Sum):
        out = []
        for c, sub in v.terms:
            out.extend(flatten(sub, coef * c, weight, window))
        return out
    if isinstance(v, Windowed):
        return flatten(v.base, coef * v.scale, weight,
                       _intersect(window, v.window))
    if isinstance(v, SpectralRational):
        return flatten(v.base, coef, weight * v.weight, window)
    if isinstance(v, (PowerLaw, ExpAbs, Delta, Tabulated)):
        return [] if coef == 0 else [_Term(complex(coef), v, weight, window)]
    if isinstance(v, KernelVector):
        raise UnsupportedBackend(
            "kernel vectors belong to the Laplace backends")
    raise TypeError(f"not a catalog vector: {v!r}")


def merge_terms(terms: list[_Term]) -> list[_Term]:
    """Combine coefficients of structurally identical terms."""
    merged: dict = {}
    order = []
    for t in terms:
        key = (t.atom, t.weight, t.window)
        if key in merged:
            merged[key] = merged[key] + t.coef
        else:
            merged[key] = t.coef
            order.append(key)
    out = []
    for key in order:
        coef = merged[key]
        if abs(coef) > 0:
            atom, weight, window = key
            out.append(_Term(coef, atom, weight, window))
    return out


# ----------------------------------------------------------------------
# regularity classification (multiplication backend: exponent arithmetic)


def _term_tail_exponent(term: _Term, op: Multiplication):
    """Exponent e with |term(x)| ~ x**e as x -> inf, or None if decaying
    faster than any power / compactly supported."""
    if term.window is not None and math.isfinite(term.window[1]):
        return None
    atom = term.atom
    if isinstance(atom, ExpAbs):
        return None
    if isinstance(atom, Tabulated):
        return None
    if isinstance(atom, PowerLaw):
        return atom.exponent + op.power * term.weight.degree
    raise UnsupportedBackend(
        f"{type(atom).__name__} vectors are not admitted under the "
        "multiplication backend")


def _term_endpoint_ok(term: _Term, op: Multiplication) -> bool:
    """Square-integrability against any scale weight at the finite endpoint."""
    atom = term.atom
    if not isinstance(atom, PowerLaw):
        return True
    if term.window is not None and term.window[0] > op.spectrum_bottom:
        return True
    edge = op.start + atom.shift
    if edge > 0:
        return True
    if edge < 0:
        return False  # singular point inside the domain: not locally L2
    return 2.0 * atom.exponent > -1.0


def _finite_in(op: Multiplication, terms: list[_Term], k: int) -> bool:
    """Whether the norm integral of the k-th scale space converges."""
    for t in terms:
        if isinstance(t.atom, Delta):
            raise UnsupportedBackend(
                "Delta vectors are only admitted under Laplace backends")
        if not _term_endpoint_ok(t, op):
            return False
        tail = _term_tail_exponent(t, op)
        if tail is None:
            continue
        if 2.0 * tail + op.power * k >= -1.0:
            return False
    return True


def _classify_mult(op: Multiplication, v: ScaleVector) -> str:
    terms = merge_terms(flatten(v))
    if not terms:
        return TAG_H_PLUS_2
    for t in terms:
        if isinstance(t.atom, Tabulated):
            vals = t.atom.values
            if abs(vals[0]) > 1e-12 or abs(vals[-1]) > 1e-12:
                raise Undecidable(
                    "tabulated vector has ambiguous tails; window it or "
                    "extend the grid to decay")
    for k in (2, 1, 0, -1, -2):
        if _finite_in(op, terms, k):
            return _TAG_BY_K[k]
    return TAG_OUTSIDE


def _classify_line(v: ScaleVector) -> str:
    from .linekernel import classify_line

    return classify_line(v)


def _classify_3d(v: ScaleVector) -> str:
    from .space3d import classify_3d

    return classify_3d(v)


def classify_regularity(op: OperatorModel, v: ScaleVector) -> str:
    """Finest scale-space tag whose norm integral is finite."""
    if isinstance(op, Multiplication):
        return _classify_mult(op, v)
    if isinstance(op, LaplaceLine):
        return _classify_line(v)
    if isinstance(op, LaplaceSpace3D):
        return _classify_3d(v)
    raise TypeError(f"unknown operator backend: {op!r}")


def _fmt(value) -> str:
    value = complex(value)
    if value.imag == 0:
        return f"{value.real:.12g}"
    return f"{value.real:.12g}{value.imag:+.12g}j"


def describe(v: ScaleVector) -> str:
    """Deterministic one-line descriptor for reports."""
    if isinstance(v, PowerLaw):
        return f"powerlaw(exponent={v.exponent:.12g}, shift={v.shift:.12g})"
    if isinstance(v, ExpAbs):
        return f"expabs(rate={_fmt(v.rate)}, center={v.center:.12g})"
    if isinstance(v, Delta):
        pts = ", ".join(f"{c:.12g}" for c in v.center)
        return f"delta({pts})"
    if isinstance(v, Windowed):
        u, w = v.window
        return (f"window[{u:.12g},{w:.12g}]"
                f"(scale={_fmt(v.scale)}, {describe(v.base)})")
    if isinstance(v, Sum):
        return " + ".join(f"({_fmt(c)})*{describe(t)}" for c, t in v.terms) \
            or "0"
    if isinstance(v, Tabulated):
        return f"tabulated(n={len(v.grid)}, [{v.grid[0]:g},{v.grid[-1]:g}])"
    if isinstance(v, SpectralRational):
        zeros = ",".join(_fmt(z) for z in v.weight.zeros)
        poles = ",".join(_fmt(p) for p in v.weight.poles)
        return (f"rational(scale={_fmt(v.weight.scale)}, zeros=[{zeros}], "
                f"poles=[{poles}])*{describe(v.base)}")
    if isinstance(v, KernelVector):
        return f"kernel[{v.backend}]({len(v.terms)} terms)"
    return repr(v)
