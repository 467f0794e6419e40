"""
Constructors for measurement partitions of unity as commuting-projector
Kraus sets: random-basis partitions, charge-symmetric partitions (shared
Kraus index across sectors, or one Kraus per sector cell), pseudospin
tensor-product partitions, and algebra-commutant partitions.

Every constructor returns Hermitian projectors X^i with
sum_i X^i = sum_i X^i† X^i = 1, so the induced channel is doubly
stochastic and the entropy-exchange trace is nondecreasing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadRank, EmptySector
from .numerics import haar_random_unitary, max_abs
from .symmetry import AlgebraDecomposition, ChargeDecomposition, PseudospinFrame

DIRECT_SUM = "direct_sum"
SECTOR_RESOLVED = "sector_resolved"
MEASURE_Z = "measure_z"
IDENTITY_SPIN = "identity"


@dataclass(frozen=True)
class Partition:
    """A finite Kraus set (K, n, n) with provenance metadata."""

    kraus: np.ndarray
    family: str
    seed: int | None
    metadata: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.kraus.shape[0]

    @property
    def dim(self) -> int:
        return self.kraus.shape[1]

    def completeness_defect(self) -> float:
        """max | sum_i X^i† X^i - 1 |."""
        total = sum(x.conj().T @ x for x in self.kraus)
        return max_abs(total - np.eye(self.dim))


def _block_sizes(n: int, k: int) -> list[int]:
    # near-equal split, remainder to the first blocks; zero-size cells
    # appear only when k > n (commutant sub-partitions allow this)
    base, rem = divmod(n, k)
    return [base + 1] * rem + [base] * (k - rem)


def _projective_blocks(n: int, k: int, seed: int) -> list[np.ndarray]:
    """k rank-(near-n/k) projectors diagonal in a seeded Haar-random basis."""
    v = haar_random_unitary(n, seed)
    out, lo = [], 0
    for size in _block_sizes(n, k):
        cols = v[:, lo:lo + size]
        out.append(cols @ cols.conj().T)
        lo += size
    return out


def _child_seeds(seed: int, count: int) -> list[int]:
    return [int(x) for x in np.random.SeedSequence(seed).generate_state(count)]


def random_projective(n: int, k: int, seed: int) -> Partition:
    """k projectors diagonal in a Haar-random basis, near-equal ranks."""
    if not 1 <= k <= n:
        raise BadRank(f"need 1 <= k <= {n}, got k={k}")
    kraus = np.array(_projective_blocks(n, k, seed))
    return Partition(
        kraus=kraus, family="random", seed=seed,
        metadata={"ranks": _block_sizes(n, k)},
    )


def symmetric_partition(
    dec: ChargeDecomposition, k: int, seed: int, mode: str = SECTOR_RESOLVED,
) -> Partition:
    """
    Random projective partition drawn independently inside each charge sector.

    direct_sum mode shares one Kraus index across sectors (K operators,
    each a direct sum over sectors); sector_resolved mode emits one Kraus
    operator per (sector, cell) pair (K * d operators, each supported on
    exactly one sector), with metadata["sector_of"] mapping Kraus index to
    sector.
    """
    if mode not in (DIRECT_SUM, SECTOR_RESOLVED):
        raise ValueError(f"unknown mode {mode!r}")
    if any(s.dim == 0 for s in dec.sectors):
        raise EmptySector("charge decomposition has an empty sector")
    if not 1 <= k <= min(dec.sector_dims):
        raise BadRank(
            f"need 1 <= k <= min sector dim {min(dec.sector_dims)}, got k={k}"
        )
    seeds = _child_seeds(seed, dec.sector_count)
    n = dec.dim
    kraus, sector_of = [], []
    if mode == DIRECT_SUM:
        for i in range(k):
            kraus.append(np.zeros((n, n), dtype=complex))
        for lam, sector in enumerate(dec.sectors):
            for i, blk in enumerate(_projective_blocks(sector.dim, k, seeds[lam])):
                kraus[i] += sector.basis @ blk @ sector.basis.conj().T
    else:
        for lam, sector in enumerate(dec.sectors):
            for blk in _projective_blocks(sector.dim, k, seeds[lam]):
                kraus.append(sector.basis @ blk @ sector.basis.conj().T)
                sector_of.append(lam)
    meta = {
        "mode": mode,
        "cells_per_sector": k,
        "sector_dims": list(dec.sector_dims),
    }
    if mode == SECTOR_RESOLVED:
        meta["sector_of"] = sector_of
    return Partition(
        kraus=np.array(kraus), family="symmetric", seed=seed, metadata=meta,
    )


def tensor_partition(
    frame: PseudospinFrame, spin_mode: str, k: int, seed: int,
) -> Partition:
    """
    Product partition X_spin (x) Xbar in the pseudospin frame, conjugated
    back to the position basis. Xbar is a random projective partition of
    the half-dimensional factor; the spin factor is either the two
    sigma_z projectors (measure_z) or the identity channel (identity).
    """
    if spin_mode not in (MEASURE_Z, IDENTITY_SPIN):
        raise ValueError(f"unknown spin mode {spin_mode!r}")
    half = frame.half_dim
    if not 1 <= k <= half:
        raise BadRank(f"need 1 <= k <= {half}, got k={k}")
    bar_blocks = _projective_blocks(half, k, seed)
    if spin_mode == MEASURE_Z:
        spin_blocks = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    else:
        spin_blocks = [np.eye(2)]
    v = frame.basis_change
    kraus = [
        v @ np.kron(sp, xb) @ v.conj().T
        for sp in spin_blocks
        for xb in bar_blocks
    ]
    return Partition(
        kraus=np.array(kraus), family="pseudospin", seed=seed,
        metadata={
            "spin_mode": spin_mode,
            "bar_kraus": np.array(bar_blocks),
            "bar_ranks": _block_sizes(half, k),
        },
    )


def commutant_partition(alg: AlgebraDecomposition, k: int, seed: int) -> Partition:
    """
    k Kraus operators commuting with the whole symmetry algebra: inside each
    irreducible block the operator acts as 1 on the irrep factor and as a
    random projective cell on the trivial factor. Trivial factors smaller
    than k contribute zero-rank cells to the surplus Kraus indices, so the
    shared-index completeness sum still closes.
    """
    if k < 1:
        raise BadRank(f"need k >= 1, got k={k}")
    n = alg.dim
    seeds = _child_seeds(seed, len(alg.sectors))
    kraus = [np.zeros((n, n), dtype=complex) for _ in range(k)]
    for lam, sector in enumerate(alg.sectors):
        eye_irrep = np.eye(sector.irrep_dim)
        for i, blk in enumerate(_projective_blocks(sector.trivial_dim, k, seeds[lam])):
            kraus[i] += sector.basis @ np.kron(eye_irrep, blk) @ sector.basis.conj().T
    return Partition(
        kraus=np.array(kraus), family="commutant", seed=seed,
        metadata={
            "block_dims": list(alg.block_dims),
            "cells_per_sector": [min(k, s.trivial_dim) for s in alg.sectors],
        },
    )
