"""Eigenvalue machinery: direct search, inverse construction, dual pairs.

A point lam off the spectrum of A is a new eigenvalue of the perturbed
operator exactly when 1/alpha + tau + F(lam) = 0; the eigenvectors are
resolvent images of the perturbing vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (apply_shift, classify_regularity, norm, pairing,
                   projective_deviation, resolvent_apply)
from .errors import (DegenerateDenominator, NoConvergence, NonIntegrable,
                     PoleOnSpectrum, RegionTouchesSpectrum,
                     RegularityViolation)
from .krein import (PerturbationSpec, TauAuto, TauExplicit, b_of_z,
                    is_infinite_b, regularized_F, tau_value)
from .operators import Multiplication, OperatorModel, check_regular_point, \
    on_spectrum
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .vectors import ScaleVector, member_of, scaled, tag_level
from .weights import ONE

_MAX_ITER = 200
_STEP_TOL = 1e-12
_CERT_TOL = 1e-9
_DIVERGE_BOUND = 1e12


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float


@dataclass(frozen=True)
class Rectangle:
    re: tuple
    im: tuple


@dataclass(frozen=True)
class EigenPair:
    lam: complex
    phi: ScaleVector
    psi: ScaleVector
    residual: float


@dataclass(frozen=True)
class DualPair:
    mu: complex
    lam: complex
    phi_lambda: ScaleVector
    phi_mu: ScaleVector
    psi_lambda: ScaleVector
    psi_mu: ScaleVector
    alpha: complex
    omega1: ScaleVector
    omega2: ScaleVector
    spec: PerturbationSpec


def eigen_condition(spec: PerturbationSpec, lam: complex,
                    cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """1/alpha + tau + F(lam); zero iff lam is a new eigenvalue.

    Returns +inf for the zero coupling (no new eigenvalues).  Real lam
    inside the essential spectrum is evaluated as the upper boundary
    value F(lam + i0), which certifies embedded eigenvalues.
    """
    if spec.is_zero:
        return complex(math.inf, 0.0)
    lam = complex(lam)
    if on_spectrum(spec.op, lam):
        from .scattering import boundary_value

        bv = boundary_value(spec, lam.real, cfg=cfg)
        F = bv.F_plus
    else:
        F = regularized_F(spec, lam, cfg)
    return 1.0 / spec.alpha + tau_value(spec, cfg) + F


def _normalized(op, v, cfg):
    n = norm(op, v, cfg)
    if n == 0:
        raise DegenerateDenominator("eigenvector has zero norm")
    return scaled(1.0 / n, v)


def make_pair(spec: PerturbationSpec, lam: complex,
              cfg: QuadratureConfig = DEFAULT_QUAD,
              residual: Optional[float] = None) -> EigenPair:
    """Attach normalized eigenvectors phi = R_lam omega2, psi = R_lambar omega1."""
    lam = complex(lam)
    phi = _normalized(spec.op, resolvent_apply(
        spec.op, lam, spec.omega2, boundary=on_spectrum(spec.op, lam)),
        cfg)
    psi = _normalized(spec.op, resolvent_apply(
        spec.op, lam.conjugate(), spec.omega1,
        boundary=on_spectrum(spec.op, lam.conjugate())), cfg)
    cross = pairing(spec.op, phi, psi, ONE, cfg)
    if abs(cross) > 1e-13:
        psi = scaled(abs(cross) / cross.conjugate(), psi)
    if residual is None:
        residual = abs(eigen_condition(spec, lam, cfg))
    return EigenPair(lam, phi, psi, residual)


def _secant(f, seed: complex, max_iter: int = _MAX_ITER):
    """Damped complex secant with |f|-backtracking; (root, |f|) or None."""
    x0 = complex(seed)
    x1 = x0 * (1 + 1e-4) + 1e-4
    try:
        f0, f1 = f(x0), f(x1)
    except (PoleOnSpectrum, NonIntegrable):
        return None
    for _ in range(max_iter):
        if f1 == f0:
            break
        step = f1 * (x1 - x0) / (f1 - f0)
        x_new, f_new = None, None
        for _try in range(12):
            cand = x1 - step
            if abs(cand) > _DIVERGE_BOUND:
                step *= 0.5
                continue
            try:
                val = f(cand)
            except (PoleOnSpectrum, NonIntegrable):
                step *= 0.5
                continue
            if abs(val) <= 1.5 * abs(f1) or abs(step) < _STEP_TOL:
                x_new, f_new = cand, val
                break
            step *= 0.5
        if x_new is None:
            return None
        x0, f0, x1, f1 = x1, f1, x_new, f_new
        if abs(x1 - x0) < _STEP_TOL * (1.0 + abs(x1)) or abs(f1) < 1e-13:
            return x1, abs(f1)
    if abs(f1) < _CERT_TOL:
        return x1, abs(f1)
    return None


def _bisect(f, a, b, fa, fb):
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0 or (b - a) < _STEP_TOL * (1.0 + abs(mid)):
            return mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b, fb = mid, fm
    return 0.5 * (a + b)


def find_eigenvalues(spec: PerturbationSpec, region=None,
                     seeds: Sequence[complex] = (),
                     cfg: QuadratureConfig = DEFAULT_QUAD,
                     panels: int = 64) -> list[EigenPair]:
    """Locate new eigenvalues of the perturbed operator.

    Real intervals below the spectrum are scanned for sign changes and
    bisected when the condition is real there; otherwise (and for
    rectangles) damped secant iterations start from the seeds.
    """
    if spec.is_zero:
        return []
    cond = lambda z: eigen_condition(spec, z, cfg)
    bottom = spec.op.spectrum_bottom
    roots: list[complex] = []

    if isinstance(region, RealInterval):
        if region.hi >= bottom:
            raise RegionTouchesSpectrum(
                f"interval [{region.lo}, {region.hi}] reaches the spectrum "
                f"[{bottom}, inf)")
        xs = [region.lo + (region.hi - region.lo) * i / panels
              for i in range(panels + 1)]
        vals = [cond(x) for x in xs]
        if max(abs(v.imag) for v in vals) < 1e-10 * max(abs(v) for v in vals):
            re_vals = [v.real for v in vals]
            for i in range(panels):
                if re_vals[i] == 0.0:
                    roots.append(complex(xs[i]))
                elif (re_vals[i] < 0) != (re_vals[i + 1] < 0):
                    r = _bisect(lambda x: cond(x).real, xs[i], xs[i + 1],
                                re_vals[i], re_vals[i + 1])
                    roots.append(complex(r))
        else:
            if not seeds:
                raise NoConvergence(
                    "condition is not real on the interval; supply seeds")
    elif isinstance(region, Rectangle):
        if (region.im[0] <= 0.0 <= region.im[1]
                and region.re[1] >= bottom):
            raise RegionTouchesSpectrum("rectangle intersects the spectrum")
        if not seeds:
            seeds = _rectangle_seeds(region, cond)
    elif region is not None:
        raise TypeError("region must be RealInterval, Rectangle, or None")

    for seed in seeds:
        hit = _secant(cond, complex(seed))
        if hit is None:
            continue
        root, f_abs = hit
        if f_abs > _CERT_TOL:
            continue
        if isinstance(region, Rectangle) and not _in_rect(root, region, 1e-8):
            continue
        if isinstance(region, RealInterval) and not (
                region.lo - 1e-8 <= root.real <= region.hi + 1e-8
                and abs(root.imag) < 1e-8):
            continue
        roots.append(root)
    if seeds and not roots and region is None:
        raise NoConvergence("no seed iteration converged to a root")

    uniq: list[complex] = []
    for r in roots:
        if abs(r.imag) < 1e-9 * (1.0 + abs(r.real)):
            r = complex(r.real, 0.0)
        r = _snap_embedded(spec, r)
        if all(abs(r - u) > 1e-8 * (1.0 + abs(u)) for u in uniq):
            uniq.append(r)
    uniq.sort(key=lambda w: (w.real, w.imag))
    return [make_pair(spec, r, cfg) for r in uniq]


def _snap_embedded(spec: PerturbationSpec, root: complex) -> complex:
    """Snap a root converging onto the essential spectrum to the exact
    structural zero of omega2 that regularizes it (embedded eigenvalue)."""
    if root.imag != 0.0 or not on_spectrum(spec.op, root):
        return root
    if not isinstance(spec.op, Multiplication):
        return root
    from .vectors import flatten

    for term in flatten(spec.omega2):
        for zero in term.weight.zeros:
            zero = complex(zero)
            if abs(zero.imag) < 1e-12 and \
                    abs(root - zero) < 1e-6 * (1.0 + abs(zero)):
                return complex(zero.real, 0.0)
    return root


def _rectangle_seeds(region: Rectangle, cond, n: int = 9, keep: int = 4):
    """Grid-scan |condition| over the rectangle and seed from the minima."""
    values = {}
    for i in range(n):
        for j in range(n):
            z = complex(
                region.re[0] + (region.re[1] - region.re[0]) * (i + 0.5) / n,
                region.im[0] + (region.im[1] - region.im[0]) * (j + 0.5) / n)
            try:
                values[(i, j)] = (abs(cond(z)), z)
            except (PoleOnSpectrum, NonIntegrable):
                continue
    minima = []
    for (i, j), (mag, z) in values.items():
        neighbors = [values[(i + di, j + dj)][0]
                     for di in (-1, 0, 1) for dj in (-1, 0, 1)
                     if (di, dj) != (0, 0) and (i + di, j + dj) in values]
        if neighbors and mag <= min(neighbors):
            minima.append((mag, z))
    minima.sort(key=lambda pair: pair[0])
    return [z for _, z in minima[:keep]]


def _in_rect(z, region: Rectangle, tol):
    return (region.re[0] - tol <= z.real <= region.re[1] + tol
            and region.im[0] - tol <= z.imag <= region.im[1] + tol)


def verify_eigen(spec: PerturbationSpec, pair: EigenPair,
                 test_points: Sequence[complex],
                 cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """max over z of |(lam - z) b_z (phi, n_zbar) - 1| plus the deviation
    of phi from (A - z)(A - lam)^-1 m_z.

    The scalar identity is tied to the defect normalization
    phi = (A - lam)^-1 omega2, rebuilt here; the reconstruction check
    against pair.phi is projective, hence normalization-free.
    """
    worst = 0.0
    lam = pair.lam
    phi_raw = resolvent_apply(spec.op, lam, spec.omega2,
                              boundary=on_spectrum(spec.op, lam))
    for z in test_points:
        z = complex(z)
        b = b_of_z(spec, z, cfg)
        if is_infinite_b(b):
            raise PoleOnSpectrum(f"test point {z} is a perturbed eigenvalue")
        n_zbar = resolvent_apply(spec.op, z.conjugate(), spec.omega1)
        cross = pairing(spec.op, phi_raw, n_zbar, ONE, cfg)
        worst = max(worst, abs((lam - z) * b * cross - 1.0))
        m_z = resolvent_apply(spec.op, z, spec.omega2)
        reconstructed = apply_shift(
            spec.op, z,
            resolvent_apply(spec.op, lam, m_z,
                            boundary=on_spectrum(spec.op, lam)))
        worst = max(worst, projective_deviation(spec.op, reconstructed,
                                                pair.phi, cfg))
    return worst


# ----------------------------------------------------------------------
# inverse problem


@dataclass(frozen=True)
class InverseFamily:
    """Closed-form Krein data generated by (lam, phi, psi)."""

    op: OperatorModel
    lam: complex
    phi: ScaleVector
    psi: ScaleVector

    def m_z(self, z: complex) -> ScaleVector:
        return apply_shift(self.op, self.lam,
                           resolvent_apply(self.op, z, self.phi))

    def n_zbar(self, z: complex) -> ScaleVector:
        return apply_shift(self.op, self.lam.conjugate(),
                           resolvent_apply(self.op, complex(z).conjugate(),
                                           self.psi))

    def b_inv(self, z: complex, cfg: QuadratureConfig = DEFAULT_QUAD) -> complex:
        return (self.lam - z) * pairing(self.op, self.phi, self.n_zbar(z),
                                        ONE, cfg)

    def b(self, z: complex, cfg: QuadratureConfig = DEFAULT_QUAD):
        from .krein import INFINITE

        inv = self.b_inv(z, cfg)
        if abs(inv) < 1e-13:
            return INFINITE
        return 1.0 / inv


@dataclass(frozen=True)
class InverseResult:
    spec: PerturbationSpec
    family: InverseFamily
    gauge_fixed: bool  # True when (alpha, tau) is one chosen presentation


def _check_inverse_inputs(op, phi, psi):
    tag_phi = classify_regularity(op, phi)
    tag_psi = classify_regularity(op, psi)
    for name, tag in (("phi", tag_phi), ("psi", tag_psi)):
        if tag_level(tag) is None or not member_of(tag, 0):
            raise RegularityViolation(f"{name} must lie in H (got {tag})")
    if tag_phi == "H+2" and tag_psi == "H+2":
        raise RegularityViolation(
            "phi and psi both in H+2: the perturbation would be regular "
            "with omega_i in H")


def inverse_problem(op: OperatorModel, lam: complex, phi: ScaleVector,
                    psi: ScaleVector,
                    cfg: QuadratureConfig = DEFAULT_QUAD) -> InverseResult:
    """Unique perturbation with A~ phi = lam phi, A~* psi = conj(lam) psi.

    omega2 = (A - lam) phi, omega1 = (A - conj lam) psi and, when the
    pairing converges, 1/alpha = -(phi, omega1).  When it diverges the
    operator is parametric: (alpha, tau) is reported in the gauge
    alpha = 1, tau = -1 - F(lam), which pins the eigenvalue at lam.
    """
    lam = complex(lam)
    _check_inverse_inputs(op, phi, psi)
    omega2 = apply_shift(op, lam, phi)
    omega1 = apply_shift(op, lam.conjugate(), psi)
    family = InverseFamily(op, lam, phi, psi)
    try:
        coupling = pairing(op, phi, omega1, ONE, cfg)
        if abs(coupling) < 1e-13:
            raise DegenerateDenominator("(phi, omega1) vanishes")
        spec = PerturbationSpec(op, omega1, omega2, -1.0 / coupling, TauAuto())
        return InverseResult(spec, family, gauge_fixed=False)
    except NonIntegrable:
        probe = PerturbationSpec(op, omega1, omega2, 1.0 + 0.0j, TauExplicit(0))
        F_lam = _F_possibly_embedded(probe, lam, cfg)
        spec = PerturbationSpec(op, omega1, omega2, 1.0 + 0.0j,
                                TauExplicit(-1.0 - F_lam))
        return InverseResult(spec, family, gauge_fixed=True)


def _F_possibly_embedded(spec, z, cfg):
    """F(z), falling back to the boundary value for embedded real z."""
    if on_spectrum(spec.op, z):
        from .scattering import boundary_value

        return boundary_value(spec, complex(z).real, cfg=cfg).F_plus
    return regularized_F(spec, z, cfg)


# ----------------------------------------------------------------------
# dual pairs


def dual_pair(op: OperatorModel, mu: complex, phi_lambda: ScaleVector,
              psi_lambda: ScaleVector,
              cfg: QuadratureConfig = DEFAULT_QUAD) -> DualPair:
    """Build the perturbation carrying the dual eigenvalue pair (mu, lam).

    lam solves conj(lam) = conj(mu) + (phi_l, psi_l)/((A-mu)^-1 phi_l, psi_l);
    the coupling is reported as alpha = -1/((A-mu)^-1 phi_l, psi_l), with
    omega1 rescaled so that alpha = -1/(phi_l, omega1) holds whenever that
    pairing converges.
    """
    mu = complex(mu)
    check_regular_point(op, mu)
    _check_inverse_inputs(op, phi_lambda, psi_lambda)
    P = pairing(op, phi_lambda, psi_lambda, ONE, cfg)
    Q = pairing(op, resolvent_apply(op, mu, phi_lambda), psi_lambda, ONE, cfg)
    if abs(Q) < 1e-13 * (1 + abs(P)):
        raise DegenerateDenominator(
            "((A - mu)^-1 phi, psi) vanishes; no dual pair")
    lam = (mu.conjugate() + P / Q).conjugate()
    alpha = -1.0 / Q

    omega2 = apply_shift(op, lam, phi_lambda)
    omega1_raw = apply_shift(op, lam.conjugate(), psi_lambda)
    phi_mu = apply_shift(op, lam, resolvent_apply(op, mu, phi_lambda))
    psi_mu = apply_shift(op, lam.conjugate(),
                         resolvent_apply(op, mu.conjugate(), psi_lambda))
    try:
        coupling = pairing(op, phi_lambda, omega1_raw, ONE, cfg)
        s_bar = Q / coupling
        omega1 = scaled(s_bar.conjugate(), omega1_raw)
        spec = PerturbationSpec(op, omega1, omega2, alpha, TauAuto())
    except NonIntegrable:
        omega1 = omega1_raw
        probe = PerturbationSpec(op, omega1, omega2, alpha, TauExplicit(0))
        tau = -1.0 / alpha - regularized_F(probe, mu, cfg)
        spec = PerturbationSpec(op, omega1, omega2, alpha, TauExplicit(tau))
    return DualPair(mu, lam, phi_lambda, phi_mu, psi_lambda, psi_mu,
                    alpha, omega1, omega2, spec)
