"""Rational functions of the spectral variable used as pairing weights.

A weight w(t) = scale * prod(t - zeros) / prod(t - poles) acts on vectors
through the functional calculus w(A).  The multiplication backend just
evaluates w along the symbol; the kernel backends decompose w into a
constant plus resolvent atoms via partial fractions.
"""

from __future__ import annotations

from dataclasses import dataclass

_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class RationalWeight:
    scale: complex = 1.0 + 0.0j
    zeros: tuple = ()
    poles: tuple = ()

    def __call__(self, t):
        val = self.scale
        for z in self.zeros:
            val = val * (t - z)
        for p in self.poles:
            val = val / (t - p)
        return val

    @property
    def degree(self) -> int:
        return len(self.zeros) - len(self.poles)

    def conjugate(self) -> "RationalWeight":
        return RationalWeight(
            complex(self.scale).conjugate(),
            tuple(complex(z).conjugate() for z in self.zeros),
            tuple(complex(p).conjugate() for p in self.poles))

    def __mul__(self, other: "RationalWeight") -> "RationalWeight":
        zeros = list(self.zeros) + list(other.zeros)
        poles = list(self.poles) + list(other.poles)
        # cancel matching zero/pole pairs so resolvent compositions simplify
        out_poles = []
        for p in poles:
            hit = next((i for i, z in enumerate(zeros)
                        if abs(z - p) <= _MERGE_TOL * (1 + abs(p))), None)
            if hit is None:
                out_poles.append(p)
            else:
                zeros.pop(hit)
        return RationalWeight(self.scale * other.scale, tuple(zeros),
                              tuple(out_poles))

    def atoms(self):
        """Partial fractions: (constant, [(pole, multiplicity, coeff), ...]).

        Supports the library's weight inventory: degree 0 with no poles
        (constants), proper rationals with distinct simple poles, and the
        pure powers (t - p)^-m.
        """
        if not self.poles:
            if self.zeros:
                raise ValueError("polynomial weights have no atom form")
            return self.scale, []
        if self.degree >= 0:
            raise ValueError("weight must be proper for partial fractions")
        distinct = _group(self.poles)
        if len(distinct) == 1 and not self.zeros:
            p, m = distinct[0]
            return 0.0 + 0.0j, [(p, m, self.scale)]
        if any(m > 1 for _, m in distinct):
            raise ValueError("repeated poles only supported as pure powers")
        atoms = []
        for j, (p, _) in enumerate(distinct):
            c = self.scale
            for z in self.zeros:
                c *= (p - z)
            for i, (q, _) in enumerate(distinct):
                if i != j:
                    c /= (p - q)
            atoms.append((p, 1, c))
        return 0.0 + 0.0j, atoms


def _group(poles):
    groups: list[list[complex]] = []
    for p in poles:
        for g in groups:
            if abs(g[0] - p) <= _MERGE_TOL * (1 + abs(p)):
                g.append(p)
                break
        else:
            groups.append([p])
    return [(g[0], len(g)) for g in groups]


ONE = RationalWeight()


def resolvent_weight(z: complex) -> RationalWeight:
    """1/(t - z)."""
    return RationalWeight(poles=(complex(z),))


def shift_weight(z: complex) -> RationalWeight:
    """t - z, the (A - z) multiplier."""
    return RationalWeight(zeros=(complex(z),))


def tau_weight() -> RationalWeight:
    """t/(t^2 + 1), the renormalized-coupling weight."""
    return RationalWeight(zeros=(0.0 + 0.0j,), poles=(1j, -1j))


def f_weight(z: complex) -> RationalWeight:
    """(1 + z t)/((t - z)(t^2 + 1)), the regularized resolvent weight."""
    z = complex(z)
    if abs(z) < 1e-14:
        return RationalWeight(scale=1.0, poles=(z, 1j, -1j))
    return RationalWeight(scale=z, zeros=(-1.0 / z,), poles=(z, 1j, -1j))


def inverse_power_weight(k: int) -> RationalWeight:
    """(t + 1)^-k, the negative-norm weight."""
    return RationalWeight(poles=(-1.0 + 0.0j,) * k)


def power_weight(k: int) -> RationalWeight:
    """(t + 1)^k, the positive-norm weight."""
    return RationalWeight(zeros=(-1.0 + 0.0j,) * k)
