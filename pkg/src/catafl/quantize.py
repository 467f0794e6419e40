"""
Position-basis quantization of the perturbed cat map.

On the N-dimensional torus Hilbert space (effective Planck constant
h = 1/N, position eigenstates |q_j> at q_j = j/N), treating the
semiclassical propagator of the classical map as exact gives the matrix
elements

    <q_k|U|q_j> = sqrt(A12/N) * exp{ i pi (A11 j^2 - 2 j k + A22 k^2)/(A12 N)
                                     + i kappa N sin(2 pi j / N)/(2 pi) }
                  * G(N' A11, A'12, 2 (A11 j - k)/g)

with g = gcd(N, A12), N' = N/g, A'12 = A12/g, and G the averaged quadratic
exponential sum

    G(a, b, c) = lim_{M->inf} (1/2M) sum_{m=-M..M} exp{ i pi (a m^2 + c m)/b }.

For integer c the summand has period 2b in m, so the limit equals the exact
average over one period; for fractional c the average vanishes, which zeroes
the matrix elements where g does not divide 2(A11 j - k). Boundary phases of
the toral wavefunctions are fixed to zero here.

Whether the formula yields a unitary matrix for a given (A, N) is decided
empirically: construction fails if the unitarity defect exceeds tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import CatMapParams
from .errors import (
    NonIntegerGaussArgument,
    NonPositiveModulus,
    NonUnitaryQuantization,
    NotCoprime,
)

UNITARITY_TOL = 1e-10


def gauss_average(a: int, b: int, c: int) -> complex:
    """
    Averaged quadratic exponential sum G(a, b, c) for coprime a, b,
    evaluated exactly as (1/2b) sum_{m=0..2b-1} exp{i pi (a m^2 + c m)/b}.
    """
    for name, val in (("a", a), ("b", b), ("c", c)):
        if not float(val).is_integer():
            raise NonIntegerGaussArgument(f"{name} = {val!r} is not an integer")
    a, b, c = int(a), int(b), int(c)
    if b <= 0:
        raise NonPositiveModulus(f"modulus b must be positive, got {b}")
    if math.gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) != 1")
    m = np.arange(2 * b)
    # exp(i pi x / b) has period 2b in x; reduce exactly in integers
    x = (a * m * m + c * m) % (2 * b)
    return complex(np.exp(1j * np.pi * x / b).sum() / (2 * b))


@dataclass(frozen=True)
class QuantizedMap:
    """N x N unitary of the quantized map plus its provenance parameters."""

    params: CatMapParams
    dim: int
    matrix: np.ndarray
    gcd_n_a12: int
    n_prime: int
    a12_prime: int
    unitarity_defect: float


def quantize(m: CatMapParams, n: int) -> QuantizedMap:
    """
    Quantize the perturbed cat map at Hilbert space dimension n.

    Raises NonUnitaryQuantization (with the measured deviation) if the
    matrix-element formula does not produce a unitary for this (A, n).
    """
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    if m.a12 <= 0:
        # sqrt(A12/N) and the Gauss modulus both assume a positive A12;
        # maps with a12 < 0 are out of scope for this quantization.
        raise ValueError(f"a12 must be positive, got {m.a12}")

    g = math.gcd(n, m.a12)
    n_prime = n // g
    a12_prime = m.a12 // g
    a = n_prime * m.a11
    # G is periodic in c with period 2b, so 2b values cover every entry
    gauss_table = np.array(
        [gauss_average(a, a12_prime, c) for c in range(2 * a12_prime)]
    )

    j = np.arange(n)[None, :]  # input (column) index
    k = np.arange(n)[:, None]  # output (row) index
    c_num = 2 * (m.a11 * j - k)
    supported = (c_num % g) == 0
    c_idx = np.where(supported, (c_num // g) % (2 * a12_prime), 0)

    # integer quadratic reduced mod the phase period 2*A12*N for exactness
    quad = (m.a11 * j * j - 2 * j * k + m.a22 * k * k) % (2 * m.a12 * n)
    phase = np.pi * quad / (m.a12 * n) \
        + m.kappa * n * np.sin(2.0 * np.pi * j / n) / (2.0 * np.pi)
    u = np.sqrt(m.a12 / n) * np.exp(1j * phase) * gauss_table[c_idx] * supported

    defect = float(np.abs(u.conj().T @ u - np.eye(n)).max())
    if defect >= UNITARITY_TOL:
        raise NonUnitaryQuantization(
            f"unitarity defect {defect:.3e} at (A={m.matrix.tolist()}, N={n})",
            deviation=defect,
        )
    return QuantizedMap(
        params=m,
        dim=n,
        matrix=u,
        gcd_n_a12=g,
        n_prime=n_prime,
        a12_prime=a12_prime,
        unitarity_defect=defect,
    )
