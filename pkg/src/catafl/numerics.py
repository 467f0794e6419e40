"""
Dense complex-matrix primitives shared by the rest of the package:
Hermitian eigensolves with spectrum clipping, von Neumann and Shannon
entropies, and seeded Haar-random unitaries.

All operations are pure functions of their inputs. Entropies default to
natural log (nats); pass log_base="two" for bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadDistribution,
    BadTrace,
    NegativeSpectrum,
    NonHermitian,
)

HERMITIAN_TOL = 1e-10
# Eigenvalues in [-CLIP_TOL, 0) are treated as accumulated floating drift
# and clipped to zero; anything below -CLIP_TOL is a hard error.
CLIP_TOL = 1e-10
TRACE_TOL = 1e-8


def log_factor(log_base) -> float:
    """Conversion factor from nats to the requested entropy unit."""
    if log_base in ("natural", "nats", "e"):
        return 1.0
    if log_base in ("two", "bits", "2"):
        return 1.0 / np.log(2.0)
    raise ValueError(f"unknown log base {log_base!r}")


def max_abs(m) -> float:
    """Largest entry magnitude, the deviation norm used throughout."""
    return float(np.abs(m).max()) if np.size(m) else 0.0


@dataclass(frozen=True)
class Spectrum:
    """Clipped real spectrum of a Hermitian matrix, sorted descending."""

    eigenvalues: np.ndarray
    clipped_mass: float


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> Spectrum:
    """
    Real spectrum of a Hermitian matrix, descending, with negatives in
    [-CLIP_TOL, 0) clipped to zero and tallied in clipped_mass.

    The matrix is symmetrized as (M + M†)/2 before the solve; a deviation
    from Hermiticity beyond `tol` raises instead.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonHermitian(f"expected a square matrix, got shape {m.shape}")
    dev = max_abs(m - m.conj().T)
    if dev > tol:
        raise NonHermitian(f"Hermiticity deviation {dev:.3e} exceeds {tol:.1e}")
    w = np.linalg.eigvalsh((m + m.conj().T) / 2.0)[::-1]
    if w.size and w[-1] < -CLIP_TOL:
        raise NegativeSpectrum(f"eigenvalue {w[-1]:.3e} below -{CLIP_TOL:.1e}")
    neg = w < 0.0
    clipped = float(-w[neg].sum())
    w = np.where(neg, 0.0, w)
    return Spectrum(eigenvalues=w, clipped_mass=clipped)


def spectrum_entropy(eigenvalues, log_base="natural") -> float:
    """-sum p log p over a nonnegative spectrum, with 0 log 0 := 0."""
    p = np.asarray(eigenvalues, dtype=float)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum()) * log_factor(log_base)


def von_neumann_entropy(rho, log_base="natural") -> float:
    """
    Von Neumann entropy -Tr(rho log rho) of a density matrix.

    rho must be Hermitian with trace 1 within TRACE_TOL and a spectrum
    that clips cleanly (see hermitian_eigenvalues).
    """
    rho = np.asarray(rho)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_TOL:
        raise BadTrace(f"trace {tr} deviates from 1 beyond {TRACE_TOL:.1e}")
    spec = hermitian_eigenvalues(rho)
    return spectrum_entropy(spec.eigenvalues, log_base)


def shannon_entropy(p, log_base="natural") -> float:
    """Shannon entropy of a probability vector; 0 for a point mass."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise BadDistribution(f"expected a vector, got shape {p.shape}")
    if (p < 0).any():
        raise BadDistribution(f"negative entry {p.min():.3e}")
    total = p.sum()
    if abs(total - 1.0) > 1e-10:
        raise BadDistribution(f"sum {total!r} deviates from 1 beyond 1e-10")
    return spectrum_entropy(p, log_base)


def haar_random_unitary(n: int, seed: int) -> np.ndarray:
    """
    Seeded Haar-distributed n x n unitary.

    QR-factorizes a complex Ginibre matrix and rescales Q by the unit-modulus
    phases of R's diagonal, which removes the sign/phase bias of raw QR.
    Bitwise deterministic for a fixed (n, seed).
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
