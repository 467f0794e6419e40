import numpy as np
import pytest

from catafl import (
    DIRECT_SUM,
    SECTOR_RESOLVED,
    CatMapParams,
    Partition,
    afl_rate_estimate,
    afl_step,
    block_diagonal_entropy,
    charge_decompose,
    cumulative_afl_trace,
    environment_state,
    haar_random_unitary,
    initial_sigma,
    inversion,
    momentum_shift,
    partial_trace_purifier,
    partial_trace_system,
    quantize,
    random_projective,
    sector_additivity_check,
    state_entropy,
    symmetric_partition,
    tensor_additivity_check,
    von_neumann_entropy,
)
from catafl.engine import EntropyTrace
from catafl.errors import (
    BadDensityMatrix,
    DimensionMismatch,
    OracleTooLarge,
    WindowTooLarge,
)
from catafl.numerics import max_abs

A2132 = CatMapParams(2, 1, 3, 2, kappa=0.05)
A6576 = CatMapParams(6, 5, 7, 6, kappa=0.05)


def identity_partition(n):
    return Partition(kraus=np.eye(n, dtype=complex)[None, :, :], family="identity", seed=None)


class TestInitialSigma:
    def test_maximally_mixed_purifies_to_pure(self):
        state = initial_sigma(np.eye(5) / 5)
        assert state_entropy(state) == pytest.approx(0.0, abs=1e-12)

    def test_pure_input(self):
        rho = np.zeros((3, 3), dtype=complex)
        rho[0, 0] = 1.0
        state = initial_sigma(rho)
        expected = np.zeros((9, 9), dtype=complex)
        expected[0, 0] = 1.0
        assert max_abs(state.sigma - expected) < 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_purification_contract(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        state = initial_sigma(rho)
        assert max_abs(partial_trace_purifier(state) - rho) < 1e-12
        assert max_abs(partial_trace_system(state) - rho) < 1e-12

    def test_rejects_non_density(self):
        with pytest.raises(BadDensityMatrix):
            initial_sigma(np.eye(3))


class TestAflStep:
    def test_identity_partition_keeps_zero_entropy(self):
        u = quantize(A2132, 5).matrix
        state = initial_sigma(np.eye(5) / 5)
        for _ in range(3):
            state = afl_step(state, u, identity_partition(5))
        assert state_entropy(state) == pytest.approx(0.0, abs=1e-10)

    def test_one_step_equal_rank_projectors(self):
        # rho = 1/N with K equal cells: environment sees diag(rank_i / N)
        n, k = 4, 2
        part = random_projective(n, k, 3)
        u = haar_random_unitary(n, 0)
        state = afl_step(initial_sigma(np.eye(n) / n), u, part)
        assert state_entropy(state) == pytest.approx(np.log(k), abs=1e-10)

    def test_repeated_projection_stabilizes_without_dynamics(self):
        n = 6
        part = random_projective(n, 3, 8)
        state = initial_sigma(np.eye(n) / n)
        state = afl_step(state, np.eye(n), part)
        h1 = state_entropy(state)
        state = afl_step(state, np.eye(n), part)
        assert state_entropy(state) == pytest.approx(h1, abs=1e-10)

    def test_partial_trace_contracts_after_steps(self):
        n = 5
        rho = np.eye(n) / n
        part = random_projective(n, 2, 1)
        u = quantize(A2132, n).matrix
        state = initial_sigma(rho)
        for _ in range(3):
            state = afl_step(state, u, part)
        assert max_abs(partial_trace_system(state) - rho) < 1e-8
        evolved = partial_trace_purifier(state)
        assert abs(np.trace(evolved) - 1.0) < 1e-10
        # the maximally mixed state is a fixed point of a unital channel
        assert max_abs(evolved - rho) < 1e-8

    def test_dimension_mismatch(self):
        state = initial_sigma(np.eye(4) / 4)
        with pytest.raises(DimensionMismatch):
            afl_step(state, np.eye(5), random_projective(5, 2, 0))
        with pytest.raises(DimensionMismatch):
            afl_step(state, np.eye(4), random_projective(5, 2, 0))


class TestTrace:
    def test_zero_steps(self):
        trace = cumulative_afl_trace(np.eye(4) / 4, np.eye(4), identity_partition(4), 0)
        assert list(trace.times) == [0]
        assert trace.entropies[0] == pytest.approx(0.0, abs=1e-12)

    def test_identity_partition_all_zero(self):
        u = quantize(A2132, 4).matrix
        trace = cumulative_afl_trace(np.eye(4) / 4, u, identity_partition(4), 10)
        assert np.abs(trace.entropies).max() < 1e-9

    def test_saturates_toward_dimensional_bound(self):
        n = 4
        u = quantize(A2132, n).matrix
        part = random_projective(n, 2, 2)
        trace = cumulative_afl_trace(np.eye(n) / n, u, part, 30)
        assert trace.entropies[-1] == pytest.approx(2 * np.log(n), abs=0.05)
        assert trace.entropies[-1] <= 2 * np.log(n) + 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_monotone_and_bounded(self, seed):
        n = 6
        u = quantize(A2132, n).matrix
        part = random_projective(n, 3, seed)
        trace = cumulative_afl_trace(np.eye(n) / n, u, part, 12)
        h = trace.entropies
        assert (np.diff(h) >= -1e-9).all()
        assert (h <= trace.bound_env + 1e-9).all()
        assert (h <= trace.bound_dim + 1e-9).all()

    def test_nonstationary_warns(self):
        rho = np.diag([0.7, 0.2, 0.1]).astype(complex)
        u = haar_random_unitary(3, 1)
        with pytest.warns(UserWarning):
            cumulative_afl_trace(rho, u, identity_partition(3), 1)

    def test_csv_round_trip(self, tmp_path):
        u = quantize(A2132, 4).matrix
        trace = cumulative_afl_trace(np.eye(4) / 4, u, random_projective(4, 2, 0), 3)
        path = tmp_path / "trace.csv"
        trace.to_csv(path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "t,H,bound_env,bound_dim,trace_drift,wall_ms"
        assert len(rows) == 5
        assert float(rows[1].split(",")[1]) == pytest.approx(trace.entropies[0])


class TestEnvironmentOracle:
    def test_zero_steps_scalar(self):
        rho = np.eye(3) / 3
        out = environment_state(rho, np.eye(3), identity_partition(3), 0)
        assert out.shape == (1, 1)
        assert out[0, 0] == pytest.approx(1.0)

    def test_one_step_rank_distribution(self):
        n, k = 6, 3
        part = random_projective(n, k, 5)
        out = environment_state(np.eye(n) / n, np.eye(n), part, 1)
        ranks = np.array(part.metadata["ranks"]) / n
        assert np.allclose(np.sort(np.diag(out).real), np.sort(ranks), atol=1e-10)
        assert max_abs(out - np.diag(np.diag(out))) < 1e-10

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("n,k", [(4, 2), (6, 3)])
    def test_matches_purified_entropy(self, n, k, seed):
        u = quantize(A2132, n).matrix
        part = random_projective(n, k, seed)
        rho = np.eye(n) / n
        for t in (1, 2, 3):
            env = environment_state(rho, u, part, t)
            s_env = von_neumann_entropy(env)
            trace = cumulative_afl_trace(rho, u, part, t)
            assert s_env == pytest.approx(trace.entropies[-1], abs=1e-8)

    def test_cap(self):
        part = random_projective(4, 2, 0)
        with pytest.raises(OracleTooLarge):
            environment_state(np.eye(4) / 4, np.eye(4), part, 13)


class TestRateEstimate:
    def _trace_of(self, hs):
        hs = np.asarray(hs, dtype=float)
        n = len(hs)
        return EntropyTrace(
            times=np.arange(n), entropies=hs, bound_env=np.zeros(n),
            bound_dim=np.zeros(n), trace_drift=np.zeros(n), wall_ms=np.zeros(n),
            log_base="natural", kraus_count=2, sys_dim=4,
        )

    def test_constant_trace(self):
        assert afl_rate_estimate(self._trace_of([1.0] * 6), 4) == pytest.approx(0.0)

    def test_linear_trace(self):
        hs = 0.3 * np.arange(8)
        assert afl_rate_estimate(self._trace_of(hs), 5) == pytest.approx(0.3)

    def test_window_validation(self):
        with pytest.raises(WindowTooLarge):
            afl_rate_estimate(self._trace_of([0.0, 1.0]), 3)
        with pytest.raises(WindowTooLarge):
            afl_rate_estimate(self._trace_of([0.0, 1.0]), 1)

    def test_saturated_cat_trace_has_small_rate(self):
        n = 6
        u = quantize(A2132, n).matrix
        part = random_projective(n, 2, 3)
        trace = cumulative_afl_trace(np.eye(n) / n, u, part, 30)
        assert abs(afl_rate_estimate(trace, 5)) < 0.01


@pytest.fixture(scope="module")
def sector_setup():
    n, s = 10, 5
    u = quantize(A6576, n)
    dec = charge_decompose(momentum_shift(n, s))
    rho = np.eye(n) / n
    return n, u, dec, rho


class TestSectorAdditivity:

    def test_equality_sector_resolved(self, sector_setup):
        n, u, dec, rho = sector_setup
        part = symmetric_partition(dec, 2, 11, mode=SECTOR_RESOLVED)
        report = sector_additivity_check(rho, u, part, dec, 4)
        assert report.dynamics_offblock < 1e-10
        assert report.equality_residual < 1e-8
        assert report.shannon_term == pytest.approx(np.log(5), abs=1e-12)

    def test_inequality_direct_sum(self, sector_setup):
        n, u, dec, rho = sector_setup
        part = symmetric_partition(dec, 2, 11, mode=DIRECT_SUM)
        report = sector_additivity_check(rho, u, part, dec, 4)
        assert report.equality_residual is None
        assert report.min_slack >= -1e-9

    def test_single_sector_degenerate(self):
        n = 4
        u = quantize(A2132, n)
        dec = charge_decompose(np.eye(n))
        part = symmetric_partition(dec, 2, 0, mode=SECTOR_RESOLVED)
        report = sector_additivity_check(np.eye(n) / n, u, part, dec, 3)
        assert report.shannon_term == 0.0
        assert report.equality_residual < 1e-10


class TestTensorAdditivity:
    def test_product_state_additivity(self):
        ua, ub = haar_random_unitary(2, 0), haar_random_unitary(3, 1)
        pa, pb = random_projective(2, 2, 2), random_projective(3, 2, 3)
        report = tensor_additivity_check(ua, ub, pa, pb, mode="product", t_max=4)
        assert report.residual < 1e-8

    def test_unmeasured_factor_drops_out(self):
        ua, ub = haar_random_unitary(2, 0), haar_random_unitary(3, 1)
        pa = random_projective(2, 2, 2)
        report = tensor_additivity_check(ua, ub, pa, None, mode="b_unitary", t_max=4)
        assert report.residual < 1e-8

    def test_trivial_b_factor(self):
        ua = haar_random_unitary(3, 5)
        ub = np.eye(1, dtype=complex)
        pa = random_projective(3, 2, 1)
        pb = Partition(kraus=np.eye(1, dtype=complex)[None, :, :], family="identity", seed=None)
        report = tensor_additivity_check(ua, ub, pa, pb, mode="product", t_max=4)
        assert report.residual < 1e-10


class TestBlockMajorization:
    @pytest.mark.parametrize("seed", range(4))
    def test_pinching_never_lowers_entropy(self, seed):
        # shared-index symmetric partition at N=8: sigma stays supported on
        # the sector squares, and its pinching majorizes it
        n = 8
        u = quantize(A2132, n)
        dec = charge_decompose(inversion(n))
        part = symmetric_partition(dec, 2, seed, mode=DIRECT_SUM)
        rho = np.eye(n) / n
        trace = cumulative_afl_trace(rho, u, part, 4, keep_state=True)
        state = trace.final_state
        s_full = state_entropy(state)
        s_pinched = block_diagonal_entropy(state, dec)
        assert s_full <= s_pinched + 1e-9
