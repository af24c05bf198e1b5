"""Boundary values of the regularized pairing and the scattering matrix.

On the absolutely continuous spectrum the wave-operator amplitudes are
1 + alpha (tau + F(lam +- i0)) and the scattering coefficient is their
ratio

    S(lam) = (1 + alpha (tau + F(lam - i0))) / (1 + alpha (tau + F(lam + i0))).

F(lam +- i0) is computed either by the limit-free route (principal value
plus +-i pi times the spectral density of the pairing measure) or by
Richardson extrapolation of F(lam +- i eta) along a shrinking ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import evaluate
from .errors import (DensityNondifferentiable, ExtrapolationNotCauchy,
                     OnSpectrumEdge, UnsupportedBackend)
from .krein import PerturbationSpec, regularized_F, tau_value
from .linekernel import line_terms, pair_terms, resolvent_terms
from .operators import (LaplaceLine, LaplaceSpace3D, Multiplication,
                        boundary_kappa, decay_kappa)
from .quadrature import DEFAULT_QUAD, QuadratureConfig, integrate_pieces, \
    principal_value
from .space3d import pair_terms3, resolvent_terms3, terms3
from .vectors import flatten
from .weights import f_weight

_DEFAULT_H = 1e-2


@dataclass(frozen=True)
class BoundaryValue:
    lam: float
    F_plus: complex
    F_minus: complex
    method: str                  # "plemelj" or "eta"
    eta_ladder: tuple = ()


@dataclass(frozen=True)
class SMatrixPoint:
    lam: float
    value: complex               # inf at a spectral singularity
    amp_plus: complex
    amp_minus: complex
    singular: bool = False


def _check_interior(op, lam: float) -> None:
    bottom = op.spectrum_bottom
    if not lam > bottom + 1e-12 * (1 + abs(bottom)):
        raise OnSpectrumEdge(
            f"lam = {lam} is not interior to the a.c. spectrum "
            f"({bottom}, inf)")


def boundary_value(spec: PerturbationSpec, lam: float, method: str = "auto",
                   cfg: QuadratureConfig = DEFAULT_QUAD,
                   h: float = _DEFAULT_H) -> BoundaryValue:
    """F(lam +- i0) on the absolutely continuous spectrum."""
    lam = float(lam)
    _check_interior(spec.op, lam)
    if method not in ("auto", "plemelj", "eta"):
        raise ValueError("method must be auto, plemelj, or eta")
    if method in ("auto", "plemelj"):
        try:
            return _plemelj(spec, lam, cfg)
        except DensityNondifferentiable:
            if method == "plemelj":
                raise
    return _eta_extrapolation(spec, lam, cfg, h)


def _plemelj(spec: PerturbationSpec, lam: float,
             cfg: QuadratureConfig) -> BoundaryValue:
    op = spec.op
    if isinstance(op, Multiplication):
        return _plemelj_mult(spec, lam, cfg)
    if isinstance(op, LaplaceLine):
        fp = _line_boundary_F(spec, lam, +1)
        fm = _line_boundary_F(spec, lam, -1)
        return BoundaryValue(lam, fp, fm, "plemelj")
    if isinstance(op, LaplaceSpace3D):
        fp = _space_boundary_F(spec, lam, +1)
        fm = _space_boundary_F(spec, lam, -1)
        return BoundaryValue(lam, fp, fm, "plemelj")
    raise UnsupportedBackend(f"unknown backend {op!r}")


def _plemelj_mult(spec, lam, cfg) -> BoundaryValue:
    op = spec.op
    x_r = op.preimage(lam)
    delta = min(1.0, 0.5 * (x_r - op.start)) if x_r > op.start else 0.0
    if delta <= 0:
        raise OnSpectrumEdge("energy preimage sits at the domain endpoint")
    for v in (spec.omega1, spec.omega2):
        for term in flatten(v):
            if term.window is not None:
                for edge in term.window:
                    if math.isfinite(edge) and \
                            abs(op.preimage(max(edge, op.spectrum_bottom))
                                - x_r) < delta:
                        raise DensityNondifferentiable(
                            "spectral window edge too close to the energy")

    def g(x):
        # regular factor of the F integrand: the weight's non-pole part
        m = op.symbol(x)
        return (evaluate(op, spec.omega2, x)
                * evaluate(op, spec.omega1, x).conjugate()
                * (1.0 + lam * m) / (m * m + 1.0))

    def smoothed(x):
        m = op.symbol(x)
        if abs(x - x_r) < 1e-9:
            return g(x) / op.symbol_prime(x)
        return g(x) * (x - x_r) / (m - lam)

    pv = principal_value(smoothed, x_r, x_r - delta, x_r + delta, cfg)
    for lo, hi in ((op.start, x_r - delta), (x_r + delta, math.inf)):
        val, _ = integrate_pieces(
            lambda x: g(x) / (op.symbol(x) - lam), [(lo, hi)], cfg)
        pv += val
    density = g(x_r) / abs(op.symbol_prime(x_r))
    return BoundaryValue(lam, pv + 1j * math.pi * density,
                         pv - 1j * math.pi * density, "plemelj")


def _boundary_atoms(lam: float, side: int):
    """Partial-fraction atoms of the F weight with the on-spectrum pole
    resolved toward lam + i0*side."""
    const, atoms = f_weight(lam).atoms()
    resolved = []
    for pole, mult, coeff in atoms:
        if abs(pole - lam) < 1e-12 * (1 + abs(pole)):
            kappa = boundary_kappa(lam, side)
        else:
            kappa = decay_kappa(pole)
        resolved.append((kappa, mult, coeff))
    return const, resolved


def _line_boundary_F(spec, lam, side) -> complex:
    const, atoms = _boundary_atoms(lam, side)
    base = line_terms(spec.omega2)
    out = []
    if const != 0:
        raise UnsupportedBackend("boundary weight must be proper")
    for kappa, mult, coeff in atoms:
        cur = base
        for _ in range(mult):
            cur = resolvent_terms(cur, kappa)
        out.extend(_scale_line(cur, coeff))
    return pair_terms(tuple(out), line_terms(spec.omega1))


def _scale_line(terms, c):
    from .linekernel import _scale_term

    return tuple(_scale_term(t, c) for t in terms)


def _space_boundary_F(spec, lam, side) -> complex:
    const, atoms = _boundary_atoms(lam, side)
    base = terms3(spec.omega2)
    out = []
    for kappa, mult, coeff in atoms:
        cur = base
        for _ in range(mult):
            cur = resolvent_terms3(cur, kappa)
        out.extend(_scale_space(cur, coeff))
    return pair_terms3(tuple(out), terms3(spec.omega1))


def _scale_space(terms, c):
    from .space3d import _scale

    return tuple(_scale(t, c) for t in terms)


def _eta_extrapolation(spec, lam, cfg, h) -> BoundaryValue:
    etas = tuple(h / 2 ** k for k in range(4))

    def ladder(side):
        vals = [regularized_F(spec, complex(lam, side * e), cfg) for e in etas]
        r1 = [2 * vals[k + 1] - vals[k] for k in range(3)]
        r2 = [(4 * r1[k + 1] - r1[k]) / 3 for k in range(2)]
        if abs(r2[1] - r2[0]) > 1e-4 * (1.0 + abs(r2[1])):
            raise ExtrapolationNotCauchy(
                f"extrapolation drift {abs(r2[1] - r2[0]):.2e} at lam={lam}")
        return r2[1]

    return BoundaryValue(lam, ladder(+1), ladder(-1), "eta", etas)


def smatrix(spec: PerturbationSpec, lam: float,
            method: str = "auto",
            cfg: QuadratureConfig = DEFAULT_QUAD) -> SMatrixPoint:
    """Scattering coefficient and wave-operator amplitudes at energy lam."""
    lam = float(lam)
    _check_interior(spec.op, lam)
    if spec.is_zero:
        return SMatrixPoint(lam, 1.0 + 0.0j, 1.0 + 0.0j, 1.0 + 0.0j)
    bv = boundary_value(spec, lam, method, cfg)
    tau = tau_value(spec, cfg)
    amp_plus = 1.0 + spec.alpha * (tau + bv.F_plus)
    amp_minus = 1.0 + spec.alpha * (tau + bv.F_minus)
    scale = 1.0 + abs(spec.alpha) * (abs(tau) + abs(bv.F_plus))
    if abs(amp_plus) <= 1e-12 * scale:
        return SMatrixPoint(lam, complex(math.inf, 0.0), amp_plus, amp_minus,
                            singular=True)
    return SMatrixPoint(lam, amp_minus / amp_plus, amp_plus, amp_minus)
