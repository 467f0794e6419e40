"""
The entropy-exchange iteration.

The evolving object is the density matrix sigma on system (x) purifier,
seeded with the canonical purification |sqrt(rho)>> and updated by one
measurement-plus-evolution step per unit time:

    sigma' = sum_i (X^i U (x) 1) sigma (X^i U (x) 1)†.

Its von Neumann entropy after t steps is the cumulative AFL entropy
H(t) of the multitime measurement channel, equal to the entropy of the
growing environment state rho~ with entries Tr(K_i rho K_j†) over
multitime Kraus words K_i; the environment form survives here only as a
size-capped cross-check oracle. sigma keeps a constant size N^2, and each
Kraus application touches only the system tensor index: two reshaped
N x N batched products, never a full N^2 x N^2 matrix product.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadDensityMatrix,
    DimensionMismatch,
    OracleTooLarge,
    TraceDrift,
    WindowTooLarge,
)
from .numerics import (
    CLIP_TOL,
    HERMITIAN_TOL,
    TRACE_TOL,
    log_factor,
    max_abs,
    shannon_entropy,
    von_neumann_entropy,
)
from .partitions import DIRECT_SUM, SECTOR_RESOLVED, Partition
from .symmetry import ChargeDecomposition, as_matrix

STATIONARITY_TOL = 1e-8


@dataclass(frozen=True)
class PurifiedState:
    """Density matrix on system (x) purifier after step_count channel steps."""

    sigma: np.ndarray  # n^2 x n^2
    sys_dim: int
    step_count: int = 0
    trace_drift: float = 0.0


def _check_density_matrix(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise BadDensityMatrix(f"expected a square matrix, got shape {rho.shape}")
    if max_abs(rho - rho.conj().T) > HERMITIAN_TOL:
        raise BadDensityMatrix("density matrix is not Hermitian within tolerance")
    if abs(complex(np.trace(rho)) - 1.0) > TRACE_TOL:
        raise BadDensityMatrix("density matrix trace deviates from 1")
    return (rho + rho.conj().T) / 2.0


def initial_sigma(rho) -> PurifiedState:
    """
    Canonical purification |sqrt(rho)>> = sum_a sqrt(r_a) |psi_a>|psi_a>
    as a pure state on system (x) purifier.
    """
    rho = _check_density_matrix(rho)
    w, v = np.linalg.eigh(rho)
    if w.min() < -CLIP_TOL:
        raise BadDensityMatrix(f"negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    phi = np.einsum("a,ja,ka->jk", np.sqrt(w), v, v)
    vec = phi.ravel()
    sigma = np.outer(vec, vec.conj())
    return PurifiedState(sigma=sigma, sys_dim=rho.shape[0])


def _apply_to_system(op: np.ndarray, sigma: np.ndarray, n: int) -> np.ndarray:
    """(op (x) 1) sigma (op (x) 1)† via two reshaped batched products."""
    t = (op @ sigma.reshape(n, -1)).reshape(n * n, n, n)
    out = np.matmul(op.conj(), t)  # contracts the bra-side system index
    return out.reshape(n * n, n * n)


def afl_step(state: PurifiedState, u, part: Partition) -> PurifiedState:
    """One measurement channel step: evolve by U, then apply the Kraus sum."""
    n = state.sys_dim
    um = as_matrix(u)
    if um.shape != (n, n):
        raise DimensionMismatch(f"dynamics shape {um.shape} vs system dim {n}")
    if part.dim != n:
        raise DimensionMismatch(f"partition dim {part.dim} vs system dim {n}")
    new = np.zeros_like(state.sigma)
    for x in part.kraus:  # fixed summation order for reproducibility
        new += _apply_to_system(x @ um, state.sigma, n)
    new = (new + new.conj().T) / 2.0
    tr = float(np.trace(new).real)
    drift = abs(tr - 1.0)
    if drift > TRACE_TOL:
        raise TraceDrift(f"trace drifted by {drift:.3e} in one step")
    new /= tr
    return PurifiedState(
        sigma=new, sys_dim=n, step_count=state.step_count + 1, trace_drift=drift,
    )


def state_entropy(state: PurifiedState, log_base="natural") -> float:
    return von_neumann_entropy(state.sigma, log_base)


def partial_trace_purifier(state: PurifiedState) -> np.ndarray:
    """Reduced state of the system: the channel-evolved rho."""
    n = state.sys_dim
    return np.einsum("ipjp->ij", state.sigma.reshape(n, n, n, n))


def partial_trace_system(state: PurifiedState) -> np.ndarray:
    """Reduced state of the purifier: the original rho, untouched by steps."""
    n = state.sys_dim
    return np.einsum("ipiq->pq", state.sigma.reshape(n, n, n, n))


@dataclass
class EntropyTrace:
    """H(t) for t = 0..t_max with dimensional-bound annotations."""

    times: np.ndarray
    entropies: np.ndarray
    bound_env: np.ndarray     # t * log K
    bound_dim: np.ndarray     # S(rho) + log N
    trace_drift: np.ndarray
    wall_ms: np.ndarray
    log_base: str
    kraus_count: int
    sys_dim: int
    final_state: PurifiedState | None = field(default=None, repr=False)

    @property
    def final_entropy(self) -> float:
        return float(self.entropies[-1])

    def saturated(self, window: int = 5, tol: float = 1e-3) -> bool:
        """True when H changed by less than tol over the last `window` steps."""
        if len(self.entropies) <= window:
            return False
        return float(self.entropies[-1] - self.entropies[-1 - window]) < tol

    def to_csv(self, path) -> None:
        """Library-level CSV: t, H, bound_env, bound_dim, trace_drift, wall_ms."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,H,bound_env,bound_dim,trace_drift,wall_ms\n")
            for i in range(len(self.times)):
                fh.write(
                    f"{int(self.times[i])},{float(self.entropies[i])!r},"
                    f"{float(self.bound_env[i])!r},{float(self.bound_dim[i])!r},"
                    f"{float(self.trace_drift[i])!r},{float(self.wall_ms[i])!r}\n"
                )


def cumulative_afl_trace(
    rho, u, part: Partition, t_max: int, log_base="natural", keep_state: bool = False,
) -> EntropyTrace:
    """
    Entropy exchange H(t) of the iterated measurement channel for
    t = 0..t_max, with per-step bounds min(t log K, S(rho) + log N)
    recorded alongside.

    rho should be stationary ([U, rho] = 0); a violation is warned about,
    not rejected, so exploratory runs remain possible.
    """
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    rho = np.asarray(rho, dtype=complex)
    um = as_matrix(u)
    if max_abs(um @ rho - rho @ um) > STATIONARITY_TOL:
        warnings.warn("initial state is not stationary under the dynamics")
    factor = log_factor(log_base)
    n = rho.shape[0]
    s_rho = von_neumann_entropy(rho, log_base)
    dim_bound = s_rho + np.log(n) * factor
    log_k = np.log(part.size) * factor

    state = initial_sigma(rho)
    entropies = [state_entropy(state, log_base)]
    drifts = [0.0]
    walls = [0.0]
    for t in range(1, t_max + 1):
        tic = time.perf_counter()
        state = afl_step(state, um, part)
        entropies.append(state_entropy(state, log_base))
        walls.append((time.perf_counter() - tic) * 1e3)
        drifts.append(state.trace_drift)
    times = np.arange(t_max + 1)
    return EntropyTrace(
        times=times,
        entropies=np.array(entropies),
        bound_env=times * log_k,
        bound_dim=np.full(t_max + 1, dim_bound),
        trace_drift=np.array(drifts),
        wall_ms=np.array(walls),
        log_base=log_base,
        kraus_count=part.size,
        sys_dim=n,
        final_state=state if keep_state else None,
    )


def environment_state(rho, u, part: Partition, t: int, cap: int = 4096) -> np.ndarray:
    """
    Explicit multitime environment state with entries Tr(K_i rho K_j†)
    over the K^t Kraus words K_i of t channel steps. Independent oracle:
    its entropy equals the entropy of sigma at the same t.
    """
    if part.size ** t > cap:
        raise OracleTooLarge(f"{part.size}^{t} exceeds the cap {cap}")
    rho = _check_density_matrix(rho)
    um = as_matrix(u)
    w, v = np.linalg.eigh(rho)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    words = [sqrt_rho]
    step_ops = [x @ um for x in part.kraus]
    for _ in range(t):
        words = [op @ m for m in words for op in step_ops]
    flat = np.array([m.ravel() for m in words])
    return flat @ flat.conj().T


def afl_rate_estimate(trace: EntropyTrace, window: int) -> float:
    """Least-squares slope of H(t) over the trailing `window` points."""
    if window < 2 or window > len(trace.times):
        raise WindowTooLarge(
            f"window {window} outside 2..{len(trace.times)}"
        )
    ts = trace.times[-window:]
    hs = trace.entropies[-window:]
    return float(np.polyfit(ts, hs, 1)[0])


def block_diagonal_entropy(
    state: PurifiedState, dec: ChargeDecomposition, log_base="natural",
) -> float:
    """
    Entropy of the block-diagonal pinching of sigma onto the sector-squared
    subspaces H_sector (x) conj(H_sector). A Hermitian matrix majorizes its
    block-diagonal part, so this never falls below the entropy of sigma.
    """
    pinched = np.zeros_like(state.sigma)
    for i in range(dec.sector_count):
        p = dec.projector(i)
        pi = np.kron(p, p.conj())
        pinched += pi @ state.sigma @ pi
    return von_neumann_entropy(pinched, log_base)


@dataclass
class SectorAdditivityReport:
    """Full trace vs probability-weighted per-sector traces plus Shannon term."""

    times: np.ndarray
    full: EntropyTrace
    sector_traces: list[EntropyTrace]
    probabilities: np.ndarray
    shannon_term: float
    combined: np.ndarray       # sum_l p_l H_l(t) + H({p_l})
    mode: str
    equality_residual: float | None  # max over t >= 1, sector_resolved only
    min_slack: float                 # min over t of combined - full
    dynamics_offblock: float         # leakage of U across sectors


def sector_additivity_check(
    rho, u, part: Partition, dec: ChargeDecomposition, t_max: int, log_base="natural",
) -> SectorAdditivityReport:
    """
    Compare the full entropy trace against independently recomputed
    per-sector traces of the restricted (rho_l, U_l, X_l).

    For sector-resolved partitions the combination is an equality for
    t >= 1 (at t = 0 both the full and sector traces vanish while the
    Shannon term does not, so the residual starts at t = 1); for shared
    Kraus indices (direct_sum) it is an upper bound at every t.
    """
    mode = part.metadata.get("mode")
    if part.family != "symmetric" or mode not in (DIRECT_SUM, SECTOR_RESOLVED):
        raise ValueError("expected a symmetric partition with a mode tag")
    rho = np.asarray(rho, dtype=complex)
    um = as_matrix(u)

    probs, sector_traces = [], []
    reconstructed = np.zeros_like(um)
    for lam, sector in enumerate(dec.sectors):
        b = sector.basis
        rho_block = b.conj().T @ rho @ b
        p = float(np.trace(rho_block).real)
        u_block = b.conj().T @ um @ b
        reconstructed += b @ u_block @ b.conj().T
        if mode == SECTOR_RESOLVED:
            sector_of = part.metadata["sector_of"]
            kraus = [
                b.conj().T @ part.kraus[i] @ b
                for i in range(part.size)
                if sector_of[i] == lam
            ]
        else:
            kraus = [b.conj().T @ x @ b for x in part.kraus]
        sub_part = Partition(
            kraus=np.array(kraus), family="restricted", seed=part.seed,
            metadata={"sector": lam},
        )
        probs.append(p)
        sector_traces.append(
            cumulative_afl_trace(rho_block / p, u_block, sub_part, t_max, log_base)
        )
    probs = np.array(probs)
    shannon = shannon_entropy(probs, log_base)
    full = cumulative_afl_trace(rho, um, part, t_max, log_base)
    combined = sum(
        p * tr.entropies for p, tr in zip(probs, sector_traces)
    ) + shannon
    slack = combined - full.entropies
    residual = (
        float(np.abs(slack[1:]).max()) if mode == SECTOR_RESOLVED and t_max >= 1
        else None
    )
    return SectorAdditivityReport(
        times=full.times,
        full=full,
        sector_traces=sector_traces,
        probabilities=probs,
        shannon_term=shannon,
        combined=combined,
        mode=mode,
        equality_residual=residual,
        min_slack=float(slack.min()),
        dynamics_offblock=max_abs(um - reconstructed),
    )


@dataclass
class TensorAdditivityReport:
    """Joint trace of product dynamics vs the factor traces."""

    times: np.ndarray
    joint: EntropyTrace
    factor_a: EntropyTrace
    factor_b: EntropyTrace | None
    residual: float
    mode: str


def tensor_additivity_check(
    u_a, u_b, part_a: Partition, part_b: Partition | None,
    mode: str = "product", t_max: int = 6,
    rho_a=None, rho_b=None, log_base="natural",
) -> TensorAdditivityReport:
    """
    Run product dynamics U_A (x) U_B on a product state and compare the
    joint trace with the single-factor traces.

    mode="product": partition {X_A (x) X_B}; the joint entropy equals the
    sum of the factor entropies at every t. mode="b_unitary": the B factor
    is left unmeasured (single identity Kraus), and the joint entropy
    equals the A-factor entropy at every t.
    """
    ua, ub = as_matrix(u_a), as_matrix(u_b)
    na, nb = ua.shape[0], ub.shape[0]
    rho_a = np.eye(na) / na if rho_a is None else np.asarray(rho_a, dtype=complex)
    rho_b = np.eye(nb) / nb if rho_b is None else np.asarray(rho_b, dtype=complex)

    if mode == "b_unitary":
        part_b = Partition(
            kraus=np.eye(nb, dtype=complex)[None, :, :], family="identity", seed=None,
        )
    elif mode != "product":
        raise ValueError(f"unknown mode {mode!r}")
    if part_b is None:
        raise ValueError("product mode needs an explicit B partition")

    joint_kraus = np.array([
        np.kron(xa, xb) for xa in part_a.kraus for xb in part_b.kraus
    ])
    joint_part = Partition(kraus=joint_kraus, family="product", seed=None)
    joint = cumulative_afl_trace(
        np.kron(rho_a, rho_b), np.kron(ua, ub), joint_part, t_max, log_base,
    )
    factor_a = cumulative_afl_trace(rho_a, ua, part_a, t_max, log_base)
    if mode == "product":
        factor_b = cumulative_afl_trace(rho_b, ub, part_b, t_max, log_base)
        expect = factor_a.entropies + factor_b.entropies
    else:
        factor_b = None
        expect = factor_a.entropies
    return TensorAdditivityReport(
        times=joint.times,
        joint=joint,
        factor_a=factor_a,
        factor_b=factor_b,
        residual=float(np.abs(joint.entropies - expect).max()),
        mode=mode,
    )
