"""Computable backends for the unperturbed positive selfadjoint operator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

_REAL_TOL = 1e-12


@dataclass(frozen=True)
class Multiplication:
    """Multiplication by m(x) = x**power on L2([start, inf))."""

    power: float = 2.0
    start: float = 1.0

    def __post_init__(self):
        if self.power <= 0:
            raise ValueError("symbol power must be positive")
        if self.start < 0:
            raise ValueError("domain start must be >= 0")

    def symbol(self, x):
        return x ** self.power

    def symbol_prime(self, x):
        return self.power * x ** (self.power - 1.0)

    @property
    def spectrum_bottom(self) -> float:
        return self.start ** self.power

    def preimage(self, lam: float) -> float:
        """The x with m(x) = lam; lam must be in the essential range."""
        if lam < self.spectrum_bottom:
            raise ValueError("energy below the spectrum bottom")
        return lam ** (1.0 / self.power)


@dataclass(frozen=True)
class LaplaceLine:
    """A = -d^2/dx^2 on L2(R), spectrum [0, inf)."""

    @property
    def spectrum_bottom(self) -> float:
        return 0.0


@dataclass(frozen=True)
class LaplaceSpace3D:
    """A = -Laplacian on L2(R^3), spectrum [0, inf)."""

    @property
    def spectrum_bottom(self) -> float:
        return 0.0


OperatorModel = Union[Multiplication, LaplaceLine, LaplaceSpace3D]


def spectrum_bottom(op: OperatorModel) -> float:
    return op.spectrum_bottom


def on_spectrum(op: OperatorModel, z: complex, tol: float = _REAL_TOL) -> bool:
    """True when z lies on the (real, half-line) spectrum of A."""
    z = complex(z)
    scale = 1.0 + abs(z)
    return abs(z.imag) <= tol * scale and z.real >= op.spectrum_bottom - tol * scale


def check_regular_point(op: OperatorModel, z: complex) -> None:
    from .errors import PoleOnSpectrum

    if on_spectrum(op, z):
        raise PoleOnSpectrum(f"z = {z} lies on the spectrum of A")


def decay_kappa(z: complex) -> complex:
    """sqrt(-z) with Re >= 0: the decay rate of Laplace resolvent kernels."""
    kappa = complex(-z) ** 0.5
    if kappa.real < 0:
        kappa = -kappa
    return kappa


def boundary_kappa(lam: float, side: int) -> complex:
    """Decay rate for the Laplace resolvent at lam +- i0 (side = +1 / -1)."""
    if lam <= 0:
        raise ValueError("boundary energies must be positive")
    return complex(0.0, -side * math.sqrt(lam))
