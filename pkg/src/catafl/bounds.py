"""
Closed-form saturation and dimensional bounds for entropy-exchange traces.

All bounds descend from subadditivity: the environment caps H at t log K,
the system and purifier cap it at S(rho) + log N <= 2 log N, and symmetry
decompositions replace log N by the probability-weighted block entropies
plus the Shannon entropy of the block distribution. Bounds are always
computed fresh from a decomposition, never cached from a partition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import log_factor, shannon_entropy
from .partitions import IDENTITY_SPIN, MEASURE_Z
from .symmetry import AlgebraDecomposition


@dataclass(frozen=True)
class BoundReport:
    """A named bound value with its ingredient terms."""

    kind: str
    value: float
    ingredients: dict


def dimensional_bounds(
    n: int, s_rho: float, k: int, t: int, log_base="natural",
) -> tuple[float, float]:
    """(environment bound t log K, system-purifier bound S(rho) + log N)."""
    factor = log_factor(log_base)
    return (t * np.log(k) * factor, s_rho + np.log(n) * factor)


def abelian_saturation(n: int, sector_dims, p=None, log_base="natural") -> float:
    """
    Saturation value for charge-sector-respecting measurements:
    sum_l p_l * 2 log(dim_l) + H({p_l}). Defaults to the maximally mixed
    weights p_l = dim_l / N.
    """
    dims = np.asarray(sector_dims, dtype=int)
    if dims.sum() != n:
        raise ValueError(f"sector dims {dims.tolist()} do not sum to {n}")
    p = dims / n if p is None else np.asarray(p, dtype=float)
    factor = log_factor(log_base)
    weighted = float((p * 2.0 * np.log(dims)).sum()) * factor
    return weighted + shannon_entropy(p, log_base)


def pseudospin_saturation(n: int, spin_mode: str, log_base="natural") -> float:
    """
    Saturation for tensor-product measurements over the pseudospin split:
    2 log(N/2) + log 2 when the spin is measured, 2 log(N/2) when it is not.
    """
    factor = log_factor(log_base)
    base = 2.0 * np.log(n // 2) * factor
    if spin_mode == MEASURE_Z:
        return base + np.log(2.0) * factor
    if spin_mode == IDENTITY_SPIN:
        return base
    raise ValueError(f"unknown spin mode {spin_mode!r}")


def commutant_saturation(
    alg: AlgebraDecomposition, n: int | None = None, log_base="natural",
) -> BoundReport:
    """
    Saturation for commutant measurements: 2 sum_l p_l log(n'_l) + H({p_l})
    with p_l = n_l n'_l / N over the algebra's irreducible blocks.
    """
    dim = alg.dim if n is None else n
    if dim != alg.dim:
        raise ValueError(f"dimension {n} does not match the algebra ({alg.dim})")
    irrep = np.array([s.irrep_dim for s in alg.sectors], dtype=float)
    trivial = np.array([s.trivial_dim for s in alg.sectors], dtype=float)
    p = irrep * trivial / dim
    factor = log_factor(log_base)
    weighted = 2.0 * float((p * np.log(trivial)).sum()) * factor
    shannon = shannon_entropy(p, log_base)
    return BoundReport(
        kind="commutant",
        value=weighted + shannon,
        ingredients={
            "p": p.tolist(),
            "irrep_dims": irrep.astype(int).tolist(),
            "trivial_dims": trivial.astype(int).tolist(),
            "weighted_term": weighted,
            "shannon_term": shannon,
        },
    )
