"""
The classical perturbed Arnol'd cat map on the unit torus.

One step acts as
    (q, p) -> A (q, p) + (kappa / 2pi) cos(2pi q) (A12, A22)   mod 1
for an SL(2,Z) matrix A. The shear term derives from the momentum kick
p -> p + (kappa / 2pi) cos(2pi q) applied before A, so a single step is
exactly area preserving. For Tr A > 2 the unperturbed map is hyperbolic
with Lyapunov exponents +-log(lambda+), and its KS entropy equals the
positive exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotHyperbolic


@dataclass(frozen=True)
class CatMapParams:
    """Integer cat matrix plus the cosine-shear strength kappa."""

    a11: int
    a12: int
    a21: int
    a22: int
    kappa: float = 0.0

    def __post_init__(self):
        det = self.a11 * self.a22 - self.a12 * self.a21
        if det != 1:
            raise ValueError(f"cat matrix must have determinant 1, got {det}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=int)

    @property
    def trace(self) -> int:
        return self.a11 + self.a22

    @property
    def shift_order(self) -> int:
        """Order s = gcd(A12, A22 - 1) of the momentum-shift symmetry
        (meaningful for odd A12)."""
        return math.gcd(self.a12, self.a22 - 1)


@dataclass(frozen=True)
class TorusPoint:
    """Point on the unit torus; coordinates are reduced mod 1 (1.0 -> 0.0)."""

    q: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "q", float(np.mod(self.q, 1.0)))
        object.__setattr__(self, "p", float(np.mod(self.p, 1.0)))


def perturbed_step(x: TorusPoint, m: CatMapParams) -> TorusPoint:
    """One application of the perturbed cat map."""
    shear = m.kappa / (2.0 * np.pi) * np.cos(2.0 * np.pi * x.q)
    q = m.a11 * x.q + m.a12 * x.p + shear * m.a12
    p = m.a21 * x.q + m.a22 * x.p + shear * m.a22
    return TorusPoint(q, p)


def iterate_classical(x: TorusPoint, m: CatMapParams, t: int) -> TorusPoint:
    """t applications of the perturbed cat map (t >= 0)."""
    if t < 0:
        raise ValueError(f"iteration count must be >= 0, got {t}")
    for _ in range(t):
        x = perturbed_step(x, m)
    return x


def lyapunov_exponents(m: CatMapParams) -> tuple[float, float]:
    """(log lambda+, log lambda-) from the eigenvalues of the cat matrix."""
    tr = m.trace
    if tr <= 2:
        raise NotHyperbolic(f"trace {tr} <= 2; map is not hyperbolic")
    root = math.sqrt(tr * tr - 4.0)
    lam_plus = (tr + root) / 2.0
    lam_minus = (tr - root) / 2.0
    return (math.log(lam_plus), math.log(lam_minus))


def ks_entropy(m: CatMapParams) -> float:
    """KS entropy of the hyperbolic cat map: the positive Lyapunov exponent."""
    return lyapunov_exponents(m)[0]
