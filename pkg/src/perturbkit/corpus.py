"""The six worked cases as a machine-checkable regression corpus.

Every golden quantity is produced by a public operation of another
module; tolerances are fixed here.  Provenance marks whether a number is
taken from the source display ("reported") or recomputed through an
independent oracle ("derived-oracle"); notes record where the two
disagree and which value the library follows.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .core import evaluate, pairing, projective_deviation, resolvent_apply
from .eigen import (RealInterval, Rectangle, dual_pair, eigen_condition,
                    find_eigenvalues, inverse_problem)
from .errors import NonIntegrable
from .krein import (PerturbationSpec, TauAuto, inverse_at_zero, is_infinite_b,
                    krein_apply, tau_auto)
from .operators import LaplaceLine, LaplaceSpace3D, Multiplication
from .quadrature import DEFAULT_QUAD, QuadratureConfig
from .scattering import smatrix
from .vectors import Delta, ExpAbs, PowerLaw
from .weights import ONE, resolvent_weight

EXAMPLE_IDS = (1, 2, 3, 4, 5, 6)

# Example 1: multiplication by x^2 on [2, inf), omega_i = 1/(x -+ 1).
EX1_PAIRING = (math.log(3.0) - 1.0) / 2.0
EX1_ALPHA = -2.0 / (math.log(3.0) - 1.0)
EX1_TAU = 0.047970569329760118  # frozen independent quadrature

# Example 2: dual pair on the line built from e^(-|x -+ 1|), mu = -1.
EX2_LAMBDA = -1.0 / 13.0
EX2_PAIR = 3.0 * math.exp(-2.0)
EX2_RESOLVENT_PAIR = 13.0 / 4.0 * math.exp(-2.0)
EX2_ALPHA = -4.0 / 13.0 * math.exp(2.0)

# Example 3: two delta points in R^3 at distance 1, z = -1.
EX3_KERNEL = math.exp(-1.0) / (4.0 * math.pi)

# Example 6: coincident-point delta coupling on the line.
EX6_ALPHAS = (-1.0 + 0.0j, -2.0 + 0.5j, -0.7 - 0.3j)


def ex4_pair_closed(z: complex) -> complex:
    """(phi, n_zbar) for the x^-4/3 / x^-5/3 pair: full-log form.

    The source display carries ln sqrt(1-z); quadrature validation fixes
    the log coefficient to (1/z^2 - 1/(2z)) ln(1-z) + 1/z.
    """
    z = complex(z)
    return (1.0 / z ** 2 - 1.0 / (2.0 * z)) * cmath.log(1.0 - z) + 1.0 / z


def ex5_pair_closed(z: complex) -> complex:
    """(phi, n_zbar) for the x^-7/3 / x^-8/3 pair, as displayed (validated)."""
    z = complex(z)
    return ((3.0 / (2.0 * z ** 3) - 1.0 / z ** 2) * cmath.log(cmath.sqrt(1.0 - z))
            + 3.0 / (4.0 * z ** 2) - 1.0 / (2.0 * z) + 3.0 / (8.0 * z))


def ex6_kernel_coefficient(alpha: complex, k: complex) -> complex:
    """Scalar in front of e^(ik[|x-x2|+|x1-xi|]) in the perturbed kernel."""
    return alpha / (2.0 * k * (1j * alpha + 2.0 * k))


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    computed: complex
    golden: complex
    tol: float
    provenance: str
    note: str = ""

    @property
    def error(self) -> float:
        return abs(complex(self.computed) - complex(self.golden))

    @property
    def passed(self) -> bool:
        return self.error <= self.tol


@dataclass
class SpectralReport:
    example_id: int
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def ex1_operator() -> Multiplication:
    return Multiplication(power=2.0, start=2.0)


def ex1_vectors():
    return PowerLaw(-1.0, -1.0), PowerLaw(-1.0, 1.0)  # 1/(x-1), 1/(x+1)


def ex1_spec(alpha=EX1_ALPHA) -> PerturbationSpec:
    omega1, omega2 = ex1_vectors()
    return PerturbationSpec(ex1_operator(), omega1, omega2, alpha, TauAuto())


def _example_1(cfg) -> list[GoldenCheck]:
    op = ex1_operator()
    omega1, omega2 = ex1_vectors()
    checks = []
    inv_pair = pairing(op, omega2, omega1, resolvent_weight(0.0), cfg)
    checks.append(GoldenCheck(
        "<A^-1 omega2, omega1>", inv_pair, EX1_PAIRING, 1e-9,
        "derived-oracle",
        "source prints (1 - ln 3)/2; the positive integrand fixes the sign"))
    spec = ex1_spec()
    checks.append(GoldenCheck(
        "tau (convergent pairing)", tau_auto(spec, cfg), EX1_TAU, 1e-8,
        "derived-oracle"))
    checks.append(GoldenCheck(
        "eigen condition at 0", eigen_condition(spec, 0.0, cfg), 0.0, 1e-8,
        "reported", "alpha = -2/(ln 3 - 1) puts 0 in the point spectrum"))
    kd = inverse_at_zero(spec, cfg)
    checks.append(GoldenCheck(
        "1/b_0 at the printed coupling",
        0.0 if is_infinite_b(kd.b_z) else 1.0 / kd.b_z, 0.0, 1e-8,
        "reported", "b_0 = infinity marks the eigenvalue at 0"))
    generic = ex1_spec(alpha=1.0 + 0.0j)
    kd1 = inverse_at_zero(generic, cfg)
    checks.append(GoldenCheck(
        "b_0 at alpha = 1", kd1.b_z, -1.0 / (1.0 + EX1_PAIRING), 1e-9,
        "derived-oracle"))
    return checks


def ex2_inputs():
    return LaplaceLine(), -1.0, ExpAbs(1.0, 1.0), ExpAbs(1.0, -1.0)


def ex2_dual_pair(cfg=DEFAULT_QUAD):
    op, mu, phi, psi = ex2_inputs()
    return dual_pair(op, mu, phi, psi, cfg)


def _example_2(cfg) -> list[GoldenCheck]:
    op, mu, phi, psi = ex2_inputs()
    dp = dual_pair(op, mu, phi, psi, cfg)
    checks = [
        GoldenCheck("(phi, psi)", pairing(op, phi, psi, ONE, cfg),
                    EX2_PAIR, 1e-10, "reported"),
        GoldenCheck("((A+1)^-1 phi, psi)",
                    pairing(op, resolvent_apply(op, mu, phi), psi, ONE, cfg),
                    EX2_RESOLVENT_PAIR, 1e-9, "reported"),
        GoldenCheck("lambda", dp.lam, EX2_LAMBDA, 1e-8, "reported"),
        GoldenCheck("alpha", dp.alpha, EX2_ALPHA, 1e-7, "reported",
                    "normalization with alpha = -1/((A-mu)^-1 phi, psi)"),
        GoldenCheck("biorthogonality (phi_mu, psi_lambda)",
                    pairing(op, dp.phi_mu, psi, ONE, cfg), 0.0, 1e-10,
                    "derived-oracle",
                    "the display phi_mu = e^(-|x+1|) would violate this "
                    "forced orthogonality; phi_mu is centered at +1"),
        GoldenCheck("mu eigen-equation residual for phi_mu",
                    _mu_eigen_residual(dp, cfg), 0.0, 1e-9,
                    "derived-oracle"),
        GoldenCheck("eigen condition at mu",
                    eigen_condition(dp.spec, mu, cfg), 0.0, 1e-8,
                    "derived-oracle"),
        GoldenCheck("eigen condition at lambda",
                    eigen_condition(dp.spec, dp.lam, cfg), 0.0, 1e-8,
                    "derived-oracle"),
    ]
    found = find_eigenvalues(dp.spec, RealInterval(-2.0, -0.01), cfg=cfg)
    lams = sorted(p.lam.real for p in found)
    checks.append(GoldenCheck("search recovers mu", lams[0], -1.0, 1e-8,
                              "reported"))
    checks.append(GoldenCheck("search recovers lambda", lams[-1],
                              EX2_LAMBDA, 1e-8, "reported"))
    return checks


def _mu_eigen_residual(dp, cfg) -> float:
    """||(A - mu) phi_mu - omega2|| through probe pairings: phi_mu is the
    mu-eigenvector exactly when (A - mu) phi_mu reproduces omega2."""
    from .core import apply_shift
    from .vectors import Sum

    op = dp.spec.op
    residual_vec = Sum(((1.0, apply_shift(op, dp.mu, dp.phi_mu)),
                        (-1.0, dp.omega2)))
    probes = (ExpAbs(1.0, 0.0), ExpAbs(2.0, 1.5), ExpAbs(0.5, -2.0))
    return max(abs(pairing(op, probes[i], residual_vec, ONE, cfg))
               for i in range(3))


def ex3_operator():
    return LaplaceSpace3D()


def ex3_vectors():
    return Delta((0.0, 0.0, 0.0)), Delta((1.0, 0.0, 0.0))


def _example_3(cfg) -> list[GoldenCheck]:
    op = ex3_operator()
    d0, d1 = ex3_vectors()
    value = pairing(op, resolvent_apply(op, -1.0, d0), d1, ONE, cfg)
    checks = [GoldenCheck(
        "delta-delta resolvent pairing at z = -1", value, EX3_KERNEL, 1e-10,
        "reported",
        "standard kernel e^(i sqrt(z) r)/(4 pi r); the display's 'regular "
        "point i' value matches z = -1")]
    spec = PerturbationSpec(op, d0, d1, 1.0 + 0.0j, TauAuto())
    from .krein import b_of_z

    checks.append(GoldenCheck(
        "b at z = -1 for alpha = 1", b_of_z(spec, -1.0, cfg),
        -1.0 / (1.0 + EX3_KERNEL), 1e-9, "derived-oracle",
        "separated points keep the coupling pairing finite"))
    return checks


def ex4_operator():
    return Multiplication(power=2.0, start=1.0)


def ex4_inputs():
    return ex4_operator(), 0.0, PowerLaw(-4.0 / 3.0), PowerLaw(-5.0 / 3.0)


def ex4_dual_pair(cfg=DEFAULT_QUAD):
    op, mu, phi, psi = ex4_inputs()
    return dual_pair(op, mu, phi, psi, cfg)


_EX4_ZPOINTS = (-1.0 + 0.0j, -1.0 + 1.0j, 0.5 + 2.0j, -3.0 - 2.0j, 4.0j)


def _example_4(cfg) -> list[GoldenCheck]:
    op, mu, phi, psi = ex4_inputs()
    dp = dual_pair(op, mu, phi, psi, cfg)
    inv = inverse_problem(op, dp.lam, phi, psi, cfg)
    checks = [
        GoldenCheck("(phi, psi)", pairing(op, phi, psi, ONE, cfg), 0.5,
                    1e-10, "reported"),
        GoldenCheck("(A^-1 phi, psi)",
                    pairing(op, resolvent_apply(op, mu, phi), psi, ONE, cfg),
                    0.25, 1e-10, "reported"),
        GoldenCheck("lambda", dp.lam, 2.0, 1e-8, "reported"),
        GoldenCheck("phi_mu matches (x^2-2)/x^(10/3)",
                    projective_deviation(
                        op, dp.phi_mu,
                        _ex4_phi_mu_reference(), cfg), 0.0, 1e-9, "reported"),
        GoldenCheck("eigen condition at mu",
                    eigen_condition(dp.spec, mu, cfg), 0.0, 1e-8,
                    "derived-oracle"),
    ]
    for x in (1.3, 2.7, 5.1):
        checks.append(GoldenCheck(
            f"omega1 value at x = {x}", evaluate(op, dp.omega1, x),
            (x * x - 2.0) / x ** (5.0 / 3.0), 1e-10, "reported"))
        checks.append(GoldenCheck(
            f"omega2 value at x = {x}", evaluate(op, dp.omega2, x),
            (x * x - 2.0) / x ** (4.0 / 3.0), 1e-10, "reported"))
    try:
        tau_auto(dp.spec, cfg)
        diverged = 0.0
    except NonIntegrable:
        diverged = 1.0
    checks.append(GoldenCheck(
        "coupling pairing diverges (parametric class)", diverged, 1.0, 0.0,
        "derived-oracle", "exponent arithmetic: integrand ~ 1/x"))
    worst = max(abs(inv.family.b_inv(z, cfg)
                    - (dp.lam - z) * ex4_pair_closed(z))
                for z in _EX4_ZPOINTS)
    checks.append(GoldenCheck(
        "closed-form b_z^-1 vs quadrature (5 points)", worst, 0.0, 1e-7,
        "derived-oracle",
        "display's ln sqrt(1-z) coefficient halved; validated full-log form"))
    return checks


def _ex4_phi_mu_reference():
    from .vectors import SpectralRational
    from .weights import RationalWeight

    # (x^2 - 2) * x^(-10/3) as a weighted power law
    return SpectralRational(PowerLaw(-10.0 / 3.0),
                            RationalWeight(scale=1.0, zeros=(2.0 + 0.0j,)))


def ex5_operator():
    return Multiplication(power=2.0, start=1.0)


def ex5_inputs():
    return ex5_operator(), 1.5, PowerLaw(-7.0 / 3.0), PowerLaw(-8.0 / 3.0)


def ex5_inverse(cfg=DEFAULT_QUAD):
    op, lam, phi, psi = ex5_inputs()
    return inverse_problem(op, lam, phi, psi, cfg)


def _example_5(cfg) -> list[GoldenCheck]:
    op, lam, phi, psi = ex5_inputs()
    inv = inverse_problem(op, lam, phi, psi, cfg)
    dp = dual_pair(op, 0.0, phi, psi, cfg)
    checks = [
        GoldenCheck("(phi, psi)", pairing(op, phi, psi, ONE, cfg), 0.25,
                    1e-10, "reported"),
        GoldenCheck("(A^-1 phi, psi)",
                    pairing(op, resolvent_apply(op, 0.0, phi), psi, ONE, cfg),
                    1.0 / 6.0, 1e-10, "reported"),
        GoldenCheck("dual-pair lambda", dp.lam, 1.5, 1e-8, "reported"),
        GoldenCheck("<phi, omega1>",
                    pairing(op, phi, inv.spec.omega1, ONE, cfg), 0.125,
                    1e-9, "reported"),
        GoldenCheck("alpha", inv.spec.alpha, -8.0, 1e-9, "reported"),
        GoldenCheck("phi_mu matches (x^2-3/2)/x^(13/3)",
                    projective_deviation(op, dp.phi_mu,
                                         _ex5_phi_mu_reference(), cfg),
                    0.0, 1e-9, "reported"),
    ]
    worst = max(abs(inv.family.b_inv(z, cfg)
                    - (lam - z) * ex5_pair_closed(z))
                for z in _EX4_ZPOINTS)
    checks.append(GoldenCheck(
        "closed-form b_z^-1 vs quadrature (5 points)", worst, 0.0, 1e-7,
        "derived-oracle", "display validated as printed"))
    return checks


def _ex5_phi_mu_reference():
    from .vectors import SpectralRational
    from .weights import RationalWeight

    return SpectralRational(PowerLaw(-13.0 / 3.0),
                            RationalWeight(scale=1.0, zeros=(1.5 + 0.0j,)))


def ex6_spec(alpha: complex) -> PerturbationSpec:
    delta = Delta(0.0)
    return PerturbationSpec(LaplaceLine(), delta, delta, complex(alpha),
                            TauAuto())


def _example_6(cfg) -> list[GoldenCheck]:
    checks = []
    for alpha in EX6_ALPHAS:
        spec = ex6_spec(alpha)
        expected = -alpha * alpha / 4.0
        if abs(alpha.imag) < 1e-14:
            found = find_eigenvalues(
                spec, RealInterval(-4.0 * abs(alpha) ** 2 - 1.0, -1e-4),
                cfg=cfg)
        else:
            found = find_eigenvalues(
                spec, Rectangle((-4.0, -1e-3), (-2.0, 2.0)), cfg=cfg)
        lam = found[0].lam if found else complex(math.nan)
        checks.append(GoldenCheck(
            f"eigenvalue for alpha = {alpha}", lam, expected, 1e-8, "reported",
            "single simple eigenvalue -alpha^2/4 for Re alpha < 0"))
        checks.append(GoldenCheck(
            f"pole of the amplitude at -alpha^2/4 (alpha = {alpha})",
            alpha * eigen_condition(spec, expected, cfg), 0.0, 1e-8,
            "derived-oracle"))
    # kernel contraction against the closed-form coefficient
    alpha = EX6_ALPHAS[1]
    spec = ex6_spec(alpha)
    k = 0.8 + 0.6j
    z = k * k
    f = ExpAbs(1.0, 0.7)
    applied = krein_apply(spec, z, f, cfg)
    from .operators import LaplaceLine as _LL

    op = _LL()
    inner = pairing(op, f, ExpAbs(1j * k.conjugate(), 0.0), ONE, cfg)
    coeff = ex6_kernel_coefficient(alpha, k)
    worst = 0.0
    for x in (-1.3, 0.4, 2.2):
        direct = (evaluate(op, resolvent_apply(op, z, f), x)
                  + coeff * cmath.exp(1j * k * abs(x)) * inner)
        worst = max(worst, abs(evaluate(op, applied, x) - direct))
    checks.append(GoldenCheck(
        "perturbed kernel contraction matches the display", worst, 0.0, 1e-9,
        "reported", "coincident interaction points (see notes on retardation)"))
    s = smatrix(spec, 2.0, cfg=cfg)
    ratio = (ex6_kernel_coefficient(alpha, math.sqrt(2.0))
             / ex6_kernel_coefficient(alpha, -math.sqrt(2.0)))
    checks.append(GoldenCheck(
        "S-matrix vs kernel coefficient ratio at lam = 2", s.value, ratio,
        1e-6, "derived-oracle"))
    return checks


_BUILDERS = {1: _example_1, 2: _example_2, 3: _example_3, 4: _example_4,
             5: _example_5, 6: _example_6}

_TITLES = {
    1: "multiplication operator with resolvent-summable vectors",
    2: "dual pair from exponential profiles on the line",
    3: "two-point delta interaction in R^3",
    4: "embedded eigenvalue from power-law profiles (parametric class)",
    5: "computable coupling from smoother power-law profiles",
    6: "delta coupling on the line: eigenvalue, kernel, scattering",
}


def run_example(example_id: int,
                cfg: QuadratureConfig = DEFAULT_QUAD) -> SpectralReport:
    """Compute every golden quantity of one example and report pass/fail."""
    if example_id not in _BUILDERS:
        raise ValueError(f"example id must be in {EXAMPLE_IDS}")
    report = SpectralReport(example_id, _TITLES[example_id])
    report.checks = _BUILDERS[example_id](cfg)
    return report


def run_all(cfg: QuadratureConfig = DEFAULT_QUAD) -> list[SpectralReport]:
    return [run_example(i, cfg) for i in EXAMPLE_IDS]
