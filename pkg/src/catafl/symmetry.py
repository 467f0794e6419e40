"""
Symmetry operators of the quantized cat map and the induced Hilbert-space
decompositions.

Two unitaries matter here. The momentum shift
    R |q_j> = exp(i 2pi j / s) |q_j>
generates a Z_s symmetry whenever s = gcd(A12, A22 - 1) divides N, and the
inversion
    W |q_j> = (-1)^j |q_{N/2 - j}>        (indices mod N, even N)
squares to (-1)^{N/2} and commutes with the dynamics for 4 | N. For
N = 2 mod 4 the inversion either commutes or anticommutes with U depending
on parities of the cat matrix; an anticommuting W pairs the eigenphases of
U as (E, E + pi) and induces a pseudospin-1/2 tensor factor with
    V† U V = sigma_z (x) Ubar,   V† W V = sigma_x (x) Wbar,  [Ubar, Wbar] = 0.

When both R and W are symmetries they generate a non-Abelian algebra
(W R = R^{-1} W) whose irreducible blocks are one- or two-dimensional; the
explicit basis built here realizes H = (+)_sector K_sector (x) K'_sector
with the algebra acting trivially on each K'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import schur

from .classical import CatMapParams
from .errors import (
    BadDimensions,
    IncompatibleDimension,
    NotAnticommuting,
    NotNormal,
    OddDimension,
    UnpairedPhase,
)
from .numerics import max_abs
from .quantize import QuantizedMap, quantize

GROUP_TOL = 1e-8       # eigenvalue / eigenphase grouping
COMMUTATOR_TOL = 1e-10


class CommutationClass(Enum):
    COMMUTE = "commute"
    ANTICOMMUTE = "anticommute"
    NEITHER = "neither"


@dataclass(frozen=True)
class SymmetryOp:
    """A named symmetry unitary; order_param is s for shifts, N for inversions."""

    kind: str
    matrix: np.ndarray
    order_param: int

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def as_matrix(op) -> np.ndarray:
    """Accept SymmetryOp, QuantizedMap, or a plain array."""
    if isinstance(op, SymmetryOp):
        return op.matrix
    if isinstance(op, QuantizedMap):
        return op.matrix
    return np.asarray(op)


def momentum_shift(n: int, s: int) -> SymmetryOp:
    """Diagonal shift unitary with phases exp(i 2pi j / s); requires s | n."""
    if s < 1 or n % s != 0:
        raise IncompatibleDimension(f"order {s} does not divide dimension {n}")
    phases = np.exp(2j * np.pi * np.arange(n) / s)
    return SymmetryOp(kind="momentum_shift", matrix=np.diag(phases), order_param=s)


def inversion(n: int) -> SymmetryOp:
    """Signed index-inversion unitary |q_j> -> (-1)^j |q_{N/2-j}>; even n only."""
    if n % 2 != 0:
        raise OddDimension(f"inversion requires even dimension, got {n}")
    w = np.zeros((n, n))
    for j in range(n):
        w[(n // 2 - j) % n, j] = (-1) ** j
    return SymmetryOp(kind="inversion", matrix=w, order_param=n)


def classify_inversion(m: CatMapParams, n: int) -> CommutationClass:
    """
    Commute / anticommute / neither for the inversion operator against the
    quantized dynamics at dimension n.

    4 | n always commutes. For n = 2 mod 4 the parity table applies: with
    A11 even, commuting iff 4 divides exactly one of A11, A22; with A11 odd,
    commuting iff 4 divides both or neither of A12, A21. The prediction is
    cross-checked against the numerical (anti)commutator and demoted to
    NEITHER on mismatch.
    """
    if n % 2 != 0:
        raise OddDimension(f"inversion requires even dimension, got {n}")
    if n % 4 == 0:
        predicted = CommutationClass.COMMUTE
    elif m.a11 % 2 == 0:
        one_of = (m.a11 % 4 == 0) != (m.a22 % 4 == 0)
        predicted = CommutationClass.COMMUTE if one_of else CommutationClass.ANTICOMMUTE
    else:
        both_or_neither = (m.a12 % 4 == 0) == (m.a21 % 4 == 0)
        predicted = CommutationClass.COMMUTE if both_or_neither else CommutationClass.ANTICOMMUTE

    u = quantize(m, n).matrix
    w = inversion(n).matrix
    comm = max_abs(u @ w - w @ u)
    anti = max_abs(u @ w + w @ u)
    if predicted is CommutationClass.COMMUTE and comm < COMMUTATOR_TOL:
        return CommutationClass.COMMUTE
    if predicted is CommutationClass.ANTICOMMUTE and anti < COMMUTATOR_TOL:
        return CommutationClass.ANTICOMMUTE
    return CommutationClass.NEITHER


@dataclass(frozen=True)
class ChargeSector:
    """One eigenvalue sector: value, and an orthonormal basis into the full space."""

    value: complex
    basis: np.ndarray  # n x dim, orthonormal columns

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class ChargeDecomposition:
    """Eigenspace splitting of a normal symmetry operator."""

    dim: int
    sectors: tuple[ChargeSector, ...]

    @property
    def sector_count(self) -> int:
        return len(self.sectors)

    @property
    def sector_dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.sectors)

    def projector(self, index: int) -> np.ndarray:
        b = self.sectors[index].basis
        return b @ b.conj().T


def _phase_key(z: complex) -> tuple[float, float]:
    # canonical sort key: phase in [0, 2pi) with the wrap guard, then modulus
    ang = float(np.angle(z)) % (2.0 * np.pi)
    if ang > 2.0 * np.pi - GROUP_TOL:
        ang = 0.0
    return (ang, abs(z))


def charge_decompose(z, tol: float = GROUP_TOL) -> ChargeDecomposition:
    """
    Group the eigenvalues of a normal operator into charge sectors
    (absolute tolerance `tol`), sorted canonically by eigenvalue phase then
    modulus, each with a deterministic orthonormal basis.
    """
    zm = as_matrix(z).astype(complex)
    n = zm.shape[0]
    if max_abs(zm @ zm.conj().T - zm.conj().T @ zm) > 1e-10:
        raise NotNormal("operator does not commute with its adjoint")
    t, q = schur(zm, output="complex")
    vals = np.diag(t)
    order = sorted(range(n), key=lambda i: _phase_key(vals[i]))
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and abs(vals[idx] - vals[clusters[-1][0]]) < tol:
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    # values on the circle can wrap past 2pi back to the first cluster
    if len(clusters) > 1 and abs(vals[clusters[-1][0]] - vals[clusters[0][0]]) < tol:
        clusters[0].extend(clusters.pop())
    sectors = tuple(
        ChargeSector(value=complex(np.mean(vals[c])), basis=q[:, c])
        for c in clusters
    )
    return ChargeDecomposition(dim=n, sectors=sectors)


@dataclass(frozen=True)
class PseudospinFrame:
    """Basis V with V†UV = sigma_z (x) Ubar and V†WV = sigma_x (x) Wbar."""

    basis_change: np.ndarray  # n x n unitary
    u_bar: np.ndarray         # n/2 x n/2
    w_bar: np.ndarray         # n/2 x n/2

    @property
    def half_dim(self) -> int:
        return self.u_bar.shape[0]


def _unitary_sqrt(c: np.ndarray) -> np.ndarray:
    """Square root of a unitary with one branch per eigenvalue (cut at phase 0)."""
    t, q = schur(c.astype(complex), output="complex")
    th = np.angle(np.diag(t)) % (2.0 * np.pi)
    th = np.where(th > 2.0 * np.pi - GROUP_TOL, th - 2.0 * np.pi, th)
    return (q * np.exp(0.5j * th)) @ q.conj().T


def _phase_clusters(phases: np.ndarray, tol: float) -> list[tuple[float, list[int]]]:
    """Circular clustering of phases in [0, 2pi); returns (mean, indices) pairs."""
    order = np.argsort(phases)
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and phases[idx] - phases[clusters[-1][-1]] < tol:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    shift = np.zeros_like(phases)
    if len(clusters) > 1:
        wrap = 2.0 * np.pi - phases[clusters[-1][0]] + phases[clusters[0][0]]
        if wrap < tol:
            last = clusters.pop()
            shift[last] = -2.0 * np.pi  # fold the tail onto the 0-side cluster
            clusters[0] = last + clusters[0]
    return [(float(np.mean(phases[c] + shift[c])), c) for c in clusters]


def pseudospin_decompose(u, w, tol: float = GROUP_TOL) -> PseudospinFrame:
    """
    Pseudospin frame of a unitary u with an anticommuting unitary w.

    Eigenphases of u are clustered (tolerance `tol`); each cluster in [0, pi)
    forms the spin-up space and is paired with its w-image at phase + pi.
    Raises UnpairedPhase when a cluster lacks a partner of equal multiplicity.
    """
    um = as_matrix(u).astype(complex)
    wm = as_matrix(w).astype(complex)
    n = um.shape[0]
    anti = max_abs(um @ wm + wm @ um)
    if n % 2 != 0 or anti > COMMUTATOR_TOL:
        raise NotAnticommuting(f"anticommutator norm {anti:.3e} exceeds tolerance")

    t, q = schur(um, output="complex")
    phases = np.angle(np.diag(t)) % (2.0 * np.pi)
    clusters = _phase_clusters(phases, tol)

    up_clusters: list[tuple[float, list[int]]] = []
    used = set()
    for i, (ph, idx) in enumerate(clusters):
        if i in used:
            continue
        partner = None
        for jx in range(len(clusters)):
            if jx == i or jx in used:
                continue
            ph2 = clusters[jx][0]
            gap = abs((ph2 - ph - np.pi + np.pi) % (2.0 * np.pi) - np.pi)
            if gap < tol:
                partner = jx
                break
        if partner is None:
            raise UnpairedPhase(f"eigenphase {ph:.12f} has no partner at +pi")
        if len(clusters[partner][1]) != len(idx):
            raise UnpairedPhase(
                f"multiplicity mismatch at phase {ph:.12f}: "
                f"{len(idx)} vs {len(clusters[partner][1])}"
            )
        used.add(i)
        used.add(partner)
        # canonical spin-up representative: phase in [0, pi) with a wrap guard
        if (ph + tol / 2.0) % (2.0 * np.pi) < np.pi:
            up_clusters.append(clusters[i])
        else:
            up_clusters.append(clusters[partner])

    up_clusters.sort(key=lambda c: c[0])
    up_cols = [i for _, idx in up_clusters for i in idx]
    v_up = q[:, up_cols]
    u_bar = v_up.conj().T @ um @ v_up

    # W maps the up space onto the down space; the residual W^2 factor is
    # split symmetrically so both off-diagonal blocks equal Wbar.
    c = v_up.conj().T @ (wm @ wm) @ v_up
    w_bar = _unitary_sqrt(c)
    v_down = wm @ v_up @ w_bar.conj().T
    v = np.hstack([v_up, v_down])

    err = max(
        max_abs(v.conj().T @ um @ v - np.kron(np.diag([1.0, -1.0]), u_bar)),
        max_abs(v.conj().T @ wm @ v - np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), w_bar)),
        max_abs(u_bar @ w_bar - w_bar @ u_bar),
    )
    if err > COMMUTATOR_TOL:
        raise UnpairedPhase(f"frame reconstruction defect {err:.3e}")
    return PseudospinFrame(basis_change=v, u_bar=u_bar, w_bar=w_bar)


@dataclass(frozen=True)
class AlgebraSector:
    """One irreducible block: K (x) K' with the algebra trivial on K'."""

    irrep_dim: int
    trivial_dim: int
    basis: np.ndarray          # n x (irrep_dim * trivial_dim), K-major columns
    inversion_sign: int | None  # +-1 on one-dimensional irreps, None otherwise


@dataclass(frozen=True)
class AlgebraDecomposition:
    """Irreducible block structure of the shift+inversion symmetry algebra."""

    dim: int
    shift_order: int
    sectors: tuple[AlgebraSector, ...]

    @property
    def center_dim(self) -> int:
        return len(self.sectors)

    @property
    def block_dims(self) -> tuple[tuple[int, int], ...]:
        return tuple((s.irrep_dim, s.trivial_dim) for s in self.sectors)


def _is_odd_prime(s: int) -> bool:
    if s < 3 or s % 2 == 0:
        return False
    return all(s % f for f in range(3, int(math.isqrt(s)) + 1, 2))


def shift_inversion_algebra(n: int, s: int) -> AlgebraDecomposition:
    """
    Explicit irrep basis for the algebra generated by the momentum shift of
    odd prime order s and the inversion, at n = s*M with 4 | M.

    Pairing |j, k>up = |q_{j+ks}> with |j, k>down = (-1)^{j+ks} |q_{N/2-j-ks}>
    (the inversion image) gives, on the residue-0 tower j = 0, two
    one-dimensional irreps of dimensions M/2+1 and M/2-1: the two k-values
    with 2k = M/2 mod M are inversion eigenstates (eigenvalue (-1)^{M/4})
    and belong only to the even combination. Each residue pair {j, s-j},
    j = 1..(s-1)/2, carries a two-dimensional irrep tensored with an
    M-dimensional trivial space.
    """
    if not _is_odd_prime(s):
        raise BadDimensions(f"shift order must be an odd prime, got {s}")
    if n % s != 0:
        raise BadDimensions(f"{s} does not divide {n}")
    m_dim = n // s
    if m_dim % 4 != 0:
        raise BadDimensions(f"4 does not divide M = {n}/{s} = {m_dim}")

    eye = np.eye(n)

    def up(j, k):
        return eye[:, (j + k * s) % n]

    def down(j, k):
        return float((-1) ** ((j + k * s) % 2)) * eye[:, (n // 2 - j - k * s) % n]

    sign = (-1) ** (m_dim // 4)
    quarter = m_dim // 4
    plus_cols = []
    for k in range(-quarter, quarter + 1):
        if abs(k) == quarter:
            plus_cols.append(up(0, k))  # self-paired: down(0,k) = sign*up(0,k)
        else:
            plus_cols.append((up(0, k) + sign * down(0, k)) / np.sqrt(2.0))
    minus_cols = [
        (up(0, k) - sign * down(0, k)) / np.sqrt(2.0)
        for k in range(1 - quarter, quarter)
    ]
    sectors = [
        AlgebraSector(1, m_dim // 2 + 1, np.column_stack(plus_cols), sign),
        AlgebraSector(1, m_dim // 2 - 1, np.column_stack(minus_cols), -sign),
    ]
    for j in range(1, (s - 1) // 2 + 1):
        cols = [up(j, k) for k in range(m_dim)] + [down(j, k) for k in range(m_dim)]
        sectors.append(AlgebraSector(2, m_dim, np.column_stack(cols), None))
    return AlgebraDecomposition(dim=n, shift_order=s, sectors=tuple(sectors))
