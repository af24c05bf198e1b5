"""Adaptive quadrature engine for the spectral pairings.

Semi-infinite integrals go through the rational map t -> a + t/(1-t)
(the same change of variables QUADPACK's QAGI applies), finite pieces
through adaptive Gauss-Kronrod panels.  All entry points accept complex
integrands and return a value together with an error estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .errors import QuadratureFailure

_TINY = 1e-300


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budget for every integral evaluated by the library."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 400

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    @staticmethod
    def semiinfinite_map(a: float, t):
        """Rational map of [0, 1) onto [a, inf) used for tail integrals."""
        return a + t / (1.0 - t)

    def tolerance(self, value: complex) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUAD = QuadratureConfig()


def _quad_real(f, a, b, cfg: QuadratureConfig, points=None):
    kwargs = {"epsabs": cfg.abs_tol, "epsrel": cfg.rel_tol,
              "limit": cfg.max_subdivisions}
    if points is not None and math.isfinite(a) and math.isfinite(b):
        pts = sorted(p for p in points if a < p < b)
        if pts:
            kwargs["points"] = pts
    with warnings.catch_warnings():
        # accuracy problems surface as QuadratureFailure via the estimate
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, **kwargs)
    return val, err


def integrate_interval(f, a, b, cfg: QuadratureConfig = DEFAULT_QUAD,
                       points=None) -> tuple[complex, float]:
    """Integrate a complex-valued callable over [a, b], b possibly inf.

    Raises QuadratureFailure when the combined error estimate exceeds
    max(abs_tol, rel_tol * |value|).
    """
    if points and math.isinf(b):
        # breakpoints are only usable on finite intervals: cut the tail off
        pts = [p for p in points if p > a]
        if pts:
            cut = 2.0 * max(pts) - a + 10.0
            head, err_h = integrate_interval(f, a, cut, cfg, points)
            tail, err_t = integrate_interval(f, cut, b, cfg, None)
            return head + tail, err_h + err_t
    re, re_err = _quad_real(lambda x: f(x).real, a, b, cfg, points)
    im, im_err = _quad_real(lambda x: f(x).imag, a, b, cfg, points)
    value = complex(re, im)
    err = re_err + im_err
    if err > 10.0 * cfg.tolerance(value) + _TINY:
        raise QuadratureFailure(
            f"estimated error {err:.3e} above tolerance for integral on "
            f"[{a}, {b}]", value=value, error=err)
    return value, err


def integrate_pieces(f, pieces, cfg: QuadratureConfig = DEFAULT_QUAD,
                     points=None) -> tuple[complex, float]:
    """Sum integrals of f over a list of (a, b) pieces."""
    total = 0.0 + 0.0j
    err = 0.0
    for a, b in pieces:
        if b <= a:
            continue
        val, e = integrate_interval(f, a, b, cfg, points=points)
        total += val
        err += e
    return total, err


def principal_value(g, c, a, b, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Cauchy principal value of int_a^b g(x)/(x-c) dx, a < c < b.

    g must be smooth at c; the singular window [c-d, c+d] is handled by
    the dedicated Cauchy-weight rule, the rest by plain quadrature.
    """
    if not (a < c < b):
        raise ValueError("principal value point must lie inside the interval")
    d = min(c - a, b - c, 1.0)
    kwargs = {"epsabs": cfg.abs_tol, "epsrel": cfg.rel_tol,
              "limit": cfg.max_subdivisions, "weight": "cauchy", "wvar": c}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        sing_re = integrate.quad(lambda x: g(x).real, c - d, c + d, **kwargs)[0]
        sing_im = integrate.quad(lambda x: g(x).imag, c - d, c + d, **kwargs)[0]
    value = complex(sing_re, sing_im)
    for lo, hi in ((a, c - d), (c + d, b)):
        if hi > lo:
            val, _ = integrate_interval(lambda x: g(x) / (x - c), lo, hi, cfg)
            value += val
    return value
