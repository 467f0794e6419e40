"""
Acceptance battery: every exit criterion of the build, each runnable on its
own and printing one pass/fail line, at two effort levels. The fast level
caps dimensions at 24 and traces at 30 steps; the full level runs the
complete grids plus a larger saturation demonstration.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .bounds import abelian_saturation, commutant_saturation, pseudospin_saturation
from .classical import CatMapParams, TorusPoint, ks_entropy
from .engine import (
    block_diagonal_entropy,
    cumulative_afl_trace,
    environment_state,
    initial_sigma,
    afl_step,
    sector_additivity_check,
    state_entropy,
    tensor_additivity_check,
)
from .numerics import haar_random_unitary, max_abs, von_neumann_entropy
from .partitions import (
    DIRECT_SUM,
    IDENTITY_SPIN,
    MEASURE_Z,
    SECTOR_RESOLVED,
    Partition,
    commutant_partition,
    random_projective,
    symmetric_partition,
    tensor_partition,
)
from .quantize import quantize
from .symmetry import (
    CommutationClass,
    charge_decompose,
    classify_inversion,
    inversion,
    momentum_shift,
    pseudospin_decompose,
    shift_inversion_algebra,
)

A2132 = CatMapParams(2, 1, 3, 2, kappa=0.05)
A6576 = CatMapParams(6, 5, 7, 6, kappa=0.05)
UNITARITY_GRID = [2, 4, 5, 6, 8, 10, 12, 18, 20, 21, 24]
SATURATION_TOL = 0.2
EQUALITY_TOL = 1e-8
MONOTONE_SLACK = 1e-9


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name} ({self.seconds:.1f}s): {self.detail}"


class AcceptanceSuite:
    """Runs the acceptance criteria; traces are cached for reuse across them."""

    def __init__(self, level: str = "full"):
        if level not in ("fast", "full"):
            raise ValueError(f"unknown level {level!r}")
        self.level = level
        self.steps = 30 if level == "fast" else 40
        self._cache: dict = {}
        self.inequality_violations: list[str] = []

    # --- cached experiment runs -------------------------------------------

    def _memo(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def _check_universal(self, tag: str, trace) -> None:
        """Record violations of monotonicity and the dimensional bounds."""
        h = trace.entropies
        if (np.diff(h) < -MONOTONE_SLACK).any():
            self.inequality_violations.append(f"{tag}: H(t) decreased")
        if (h > trace.bound_env + MONOTONE_SLACK).any():
            self.inequality_violations.append(f"{tag}: H(t) above t log K")
        if (h > 2 * np.log(trace.sys_dim) + MONOTONE_SLACK).any():
            self.inequality_violations.append(f"{tag}: H(t) above 2 log N")

    def _shift_symmetric_run(self):
        def build():
            n = 20
            u = quantize(A6576, n)
            dec = charge_decompose(momentum_shift(n, 5))
            part = symmetric_partition(dec, 2, 101, mode=SECTOR_RESOLVED)
            trace = cumulative_afl_trace(np.eye(n) / n, u, part, self.steps)
            self._check_universal("shift_symmetric_N20", trace)
            return trace, abelian_saturation(n, dec.sector_dims)

        return self._memo("r20", build)

    def _random_run(self):
        def build():
            n = 21
            u = quantize(A6576, n)
            part = random_projective(n, 2, 102)
            trace = cumulative_afl_trace(np.eye(n) / n, u, part, self.steps)
            self._check_universal("random_N21", trace)
            return trace, 2 * np.log(n)

        return self._memo("rand21", build)

    def _inversion_symmetric_run(self):
        def build():
            n = 20
            u = quantize(A6576, n)
            dec = charge_decompose(inversion(n))
            part = symmetric_partition(dec, 2, 103, mode=SECTOR_RESOLVED)
            trace = cumulative_afl_trace(np.eye(n) / n, u, part, self.steps)
            self._check_universal("inversion_symmetric_N20", trace)
            return trace, abelian_saturation(n, dec.sector_dims)

        return self._memo("w20", build)

    def _commutant_run(self):
        def build():
            n, s = 20, 5
            u = quantize(A6576, n)
            alg = shift_inversion_algebra(n, s)
            part = commutant_partition(alg, 2, 104)
            trace = cumulative_afl_trace(np.eye(n) / n, u, part, self.steps)
            self._check_universal("commutant_N20", trace)
            return trace, commutant_saturation(alg).value

        return self._memo("comm20", build)

    def _pseudospin_runs(self):
        def build():
            n, steps = 18, min(self.steps, 25)
            u = quantize(A2132, n)
            frame = pseudospin_decompose(u, inversion(n))
            z_part = tensor_partition(frame, MEASURE_Z, 2, 105)
            id_part = tensor_partition(frame, IDENTITY_SPIN, 2, 105)
            rho = np.eye(n) / n
            z_trace = cumulative_afl_trace(rho, u, z_part, steps)
            id_trace = cumulative_afl_trace(rho, u, id_part, steps)
            bar_part = Partition(
                kraus=z_part.metadata["bar_kraus"], family="random", seed=105,
            )
            half = frame.half_dim
            bar_trace = cumulative_afl_trace(
                np.eye(half) / half, frame.u_bar, bar_part, steps
            )
            self._check_universal("pseudospin_z_N18", z_trace)
            self._check_universal("pseudospin_id_N18", id_trace)
            return z_trace, id_trace, bar_trace

        return self._memo("ps18", build)

    # --- criteria ----------------------------------------------------------

    def criterion_1_quantization_unitarity(self) -> CriterionResult:
        tic = time.perf_counter()
        worst = 0.0
        for params in (A2132, A6576):
            for kappa in (0.0, 0.05):
                m = CatMapParams(params.a11, params.a12, params.a21, params.a22, kappa)
                for n in UNITARITY_GRID:
                    worst = max(worst, quantize(m, n).unitarity_defect)
        ok = worst < 1e-10
        return CriterionResult(
            "quantization_unitarity", ok,
            f"max |U†U - 1| = {worst:.2e} over {2 * 2 * len(UNITARITY_GRID)} maps",
            time.perf_counter() - tic,
        )

    def criterion_2_symmetry_classification(self) -> CriterionResult:
        tic = time.perf_counter()
        shift_dims = [20, 25, 100] if self.level == "full" else [20]
        worst = 0.0
        for n in shift_dims:
            u = quantize(A6576, n).matrix
            r = momentum_shift(n, 5).matrix
            worst = max(worst, max_abs(u @ r - r @ u))
        for n in (8, 12, 20):
            u = quantize(A2132, n).matrix
            w = inversion(n).matrix
            worst = max(worst, max_abs(u @ w - w @ u))
        for n in (6, 10, 18):
            u = quantize(A2132, n).matrix
            w = inversion(n).matrix
            worst = max(worst, max_abs(u @ w + w @ u))
        ok = worst < 1e-10

        mismatches = []
        for params in (A2132, A6576):
            for n in (6, 8, 10, 12, 18, 20, 24):
                got = classify_inversion(params, n)
                if n % 4 == 0:
                    want = CommutationClass.COMMUTE
                elif params.a11 % 2 == 0:
                    one_of = (params.a11 % 4 == 0) != (params.a22 % 4 == 0)
                    want = CommutationClass.COMMUTE if one_of else CommutationClass.ANTICOMMUTE
                else:
                    both = (params.a12 % 4 == 0) == (params.a21 % 4 == 0)
                    want = CommutationClass.COMMUTE if both else CommutationClass.ANTICOMMUTE
                if got is not want:
                    mismatches.append((params.matrix.tolist(), n, got))
        ok = ok and not mismatches
        return CriterionResult(
            "symmetry_classification", ok,
            f"max (anti)commutator = {worst:.2e}, table mismatches: {mismatches or 'none'}",
            time.perf_counter() - tic,
        )

    def criterion_3_abelian_saturation(self) -> CriterionResult:
        tic = time.perf_counter()
        shift_trace, shift_bound = self._shift_symmetric_run()
        rand_trace, rand_bound = self._random_run()
        monotone = (np.diff(shift_trace.entropies) >= -MONOTONE_SLACK).all()
        gap_shift = shift_bound - shift_trace.final_entropy
        gap_rand = rand_bound - rand_trace.final_entropy
        ok = bool(
            monotone
            and abs(gap_shift) < SATURATION_TOL
            and abs(gap_rand) < SATURATION_TOL
        )
        return CriterionResult(
            "abelian_saturation", ok,
            f"N=20 shift-symmetric plateau {shift_trace.final_entropy:.3f} vs "
            f"{shift_bound:.3f}; N=21 random plateau {rand_trace.final_entropy:.3f} "
            f"vs {rand_bound:.3f}",
            time.perf_counter() - tic,
        )

    def criterion_4_sector_additivity(self) -> CriterionResult:
        tic = time.perf_counter()
        n = 20
        u = quantize(A6576, n)
        dec = charge_decompose(momentum_shift(n, 5))
        rho = np.eye(n) / n
        resolved = symmetric_partition(dec, 2, 106, mode=SECTOR_RESOLVED)
        rep_eq = sector_additivity_check(rho, u, resolved, dec, 10)
        shared = symmetric_partition(dec, 2, 106, mode=DIRECT_SUM)
        rep_ineq = sector_additivity_check(rho, u, shared, dec, 10)
        ok = bool(
            rep_eq.equality_residual < EQUALITY_TOL
            and rep_ineq.min_slack >= -MONOTONE_SLACK
        )
        return CriterionResult(
            "sector_additivity", ok,
            f"equality residual {rep_eq.equality_residual:.2e} (t=1..10), "
            f"shared-index slack >= {rep_ineq.min_slack:.2e}",
            time.perf_counter() - tic,
        )

    def criterion_5_tensor_additivity(self) -> CriterionResult:
        tic = time.perf_counter()
        worst_prod, worst_bu = 0.0, 0.0
        for dims, seed in (((2, 3), 107), ((3, 4), 108)):
            na, nb = dims
            ua, ub = haar_random_unitary(na, seed), haar_random_unitary(nb, seed + 1)
            pa = random_projective(na, 2, seed + 2)
            pb = random_projective(nb, 2, seed + 3)
            prod = tensor_additivity_check(ua, ub, pa, pb, mode="product", t_max=8)
            bu = tensor_additivity_check(ua, ub, pa, None, mode="b_unitary", t_max=8)
            worst_prod = max(worst_prod, prod.residual)
            worst_bu = max(worst_bu, bu.residual)
        ok = worst_prod < EQUALITY_TOL and worst_bu < EQUALITY_TOL
        return CriterionResult(
            "tensor_additivity", ok,
            f"product residual {worst_prod:.2e}, unmeasured-factor residual {worst_bu:.2e}",
            time.perf_counter() - tic,
        )

    def criterion_6_pseudospin(self) -> CriterionResult:
        tic = time.perf_counter()
        z_trace, id_trace, bar_trace = self._pseudospin_runs()
        log2 = np.log(2.0)
        z_resid = float(
            np.abs(z_trace.entropies[1:] - (bar_trace.entropies[1:] + log2)).max()
        )
        id_resid = float(np.abs(id_trace.entropies - bar_trace.entropies).max())
        z_bound = pseudospin_saturation(18, MEASURE_Z)
        id_bound = pseudospin_saturation(18, IDENTITY_SPIN)
        ok = bool(
            z_resid < EQUALITY_TOL
            and id_resid < EQUALITY_TOL
            and abs(z_bound - z_trace.final_entropy) < SATURATION_TOL
            and abs(id_bound - id_trace.final_entropy) < SATURATION_TOL
        )
        return CriterionResult(
            "pseudospin_tensor_split", ok,
            f"spin-z residual {z_resid:.2e}, identity residual {id_resid:.2e}; "
            f"plateaus {z_trace.final_entropy:.3f}/{z_bound:.3f} and "
            f"{id_trace.final_entropy:.3f}/{id_bound:.3f}",
            time.perf_counter() - tic,
        )

    def criterion_7_commutant(self) -> CriterionResult:
        tic = time.perf_counter()
        comm_trace, comm_bound = self._commutant_run()
        shift_trace, shift_bound = self._shift_symmetric_run()
        inv_trace, inv_bound = self._inversion_symmetric_run()
        top = 2 * np.log(20)
        gap = comm_bound - comm_trace.final_entropy
        plateaus = [
            comm_trace.final_entropy,
            shift_trace.final_entropy,
            inv_trace.final_entropy,
            top,
        ]
        bounds_chain = [comm_bound, shift_bound, inv_bound, top]
        layered = all(a < b for a, b in zip(plateaus, plateaus[1:]))
        layered_bounds = all(a < b for a, b in zip(bounds_chain, bounds_chain[1:]))
        ok = bool(abs(gap) < SATURATION_TOL and layered and layered_bounds)
        return CriterionResult(
            "commutant_saturation", ok,
            f"plateau {comm_trace.final_entropy:.3f} vs bound {comm_bound:.3f}; "
            f"layering {' < '.join(f'{v:.3f}' for v in plateaus)}",
            time.perf_counter() - tic,
        )

    def criterion_8_environment_oracle(self) -> CriterionResult:
        tic = time.perf_counter()
        worst = 0.0
        for n in (4, 6):
            u = quantize(A2132, n)
            rho = np.eye(n) / n
            for k in (2, 3):
                for seed in range(20):
                    part = random_projective(n, k, 200 + seed)
                    trace = cumulative_afl_trace(rho, u, part, 3)
                    for t in (1, 2, 3):
                        env = environment_state(rho, u, part, t)
                        worst = max(
                            worst,
                            abs(von_neumann_entropy(env) - trace.entropies[t]),
                        )
        ok = worst < EQUALITY_TOL
        return CriterionResult(
            "environment_oracle", ok,
            f"max |S(env) - S(sigma)| = {worst:.2e} over 80 runs, t <= 3",
            time.perf_counter() - tic,
        )

    def criterion_9_universal_inequalities(self) -> CriterionResult:
        tic = time.perf_counter()
        # make sure the monitored runs happened
        self._shift_symmetric_run()
        self._random_run()
        self._inversion_symmetric_run()
        self._commutant_run()
        self._pseudospin_runs()

        # block-diagonal pinching majorization at small scale
        n = 12
        u = quantize(A2132, n)
        dec = charge_decompose(inversion(n))
        part = symmetric_partition(dec, 2, 109, mode=DIRECT_SUM)
        state = initial_sigma(np.eye(n) / n)
        pinch_ok = True
        for _ in range(4):
            state = afl_step(state, u, part)
            if state_entropy(state) > block_diagonal_entropy(state, dec) + MONOTONE_SLACK:
                pinch_ok = False
        ok = pinch_ok and not self.inequality_violations
        return CriterionResult(
            "universal_inequalities", ok,
            f"violations: {self.inequality_violations or 'none'}; "
            f"block pinching majorization {'holds' if pinch_ok else 'violated'}",
            time.perf_counter() - tic,
        )

    def criterion_10_classical(self) -> CriterionResult:
        tic = time.perf_counter()
        ks_err = abs(ks_entropy(A2132) - np.log(2 + np.sqrt(3)))
        m = CatMapParams(2, 1, 3, 2, kappa=0.05)
        rng = np.random.default_rng(110)
        worst_det = 0.0
        h = 1e-7
        for _ in range(100):
            x = TorusPoint(rng.random(), rng.random())
            jac = _fd_jacobian(m, x, h)
            worst_det = max(worst_det, abs(np.linalg.det(jac) - 1.0))
        ok = ks_err < 1e-12 and worst_det < 1e-6
        return CriterionResult(
            "classical_map", ok,
            f"KS error {ks_err:.2e}, max |det J - 1| = {worst_det:.2e} at 100 points",
            time.perf_counter() - tic,
        )

    def saturation_demo_n60(self) -> CriterionResult:
        """Full-level extra: a larger random-partition run approaches 2 log N."""
        tic = time.perf_counter()
        n = 60
        u = quantize(A6576, n)
        part = random_projective(n, 2, 111)
        rho = np.eye(n) / n
        state = initial_sigma(rho)
        h_prev, h = [], 0.0
        for _ in range(24):
            state = afl_step(state, u, part)
            h = state_entropy(state)
            h_prev.append(h)
            if len(h_prev) > 5 and h - h_prev[-6] < 1e-3:
                break
        gap = 2 * np.log(n) - h
        ok = bool(gap < SATURATION_TOL)
        return CriterionResult(
            "saturation_demo_n60", ok,
            f"plateau {h:.3f} vs 2 log 60 = {2 * np.log(n):.3f} after {state.step_count} steps",
            time.perf_counter() - tic,
        )

    def run(self) -> list[CriterionResult]:
        criteria = [
            self.criterion_1_quantization_unitarity,
            self.criterion_2_symmetry_classification,
            self.criterion_3_abelian_saturation,
            self.criterion_4_sector_additivity,
            self.criterion_5_tensor_additivity,
            self.criterion_6_pseudospin,
            self.criterion_7_commutant,
            self.criterion_8_environment_oracle,
            self.criterion_9_universal_inequalities,
            self.criterion_10_classical,
        ]
        if self.level == "full":
            criteria.append(self.saturation_demo_n60)
        results = []
        for fn in criteria:
            try:
                results.append(fn())
            except Exception as exc:  # a crash is a failed criterion, not a crash
                results.append(
                    CriterionResult(fn.__name__, False, f"raised {exc!r}", 0.0)
                )
        return results


def _fd_jacobian(m: CatMapParams, x: TorusPoint, h: float) -> np.ndarray:
    from .classical import perturbed_step

    def wrap(a, b):
        return (a - b + 0.5) % 1.0 - 0.5

    base = perturbed_step(x, m)
    dq = perturbed_step(TorusPoint(x.q + h, x.p), m)
    dp = perturbed_step(TorusPoint(x.q, x.p + h), m)
    return np.array([
        [wrap(dq.q, base.q) / h, wrap(dp.q, base.q) / h],
        [wrap(dq.p, base.p) / h, wrap(dp.p, base.p) / h],
    ])


def run_suite(level: str = "fast") -> bool:
    """Run the battery, print one line per criterion, return overall pass."""
    suite = AcceptanceSuite(level)
    results = suite.run()
    for res in results:
        print(res.line())
    passed = all(r.passed for r in results)
    print(f"{'ALL PASS' if passed else 'FAILURES PRESENT'}: "
          f"{sum(r.passed for r in results)}/{len(results)} criteria, level={level}")
    return passed
