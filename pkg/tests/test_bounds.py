import numpy as np
import pytest

from catafl import (
    IDENTITY_SPIN,
    MEASURE_Z,
    abelian_saturation,
    commutant_saturation,
    dimensional_bounds,
    pseudospin_saturation,
    shift_inversion_algebra,
)


def test_dimensional_bounds():
    env, sp = dimensional_bounds(4, np.log(4), 2, 3)
    assert env == pytest.approx(3 * np.log(2))
    assert sp == pytest.approx(2 * np.log(4))
    assert dimensional_bounds(4, np.log(4), 2, 0)[0] == 0.0
    assert dimensional_bounds(9, 0.0, 2, 1)[1] == pytest.approx(np.log(9))


def test_dimensional_bounds_bits():
    env, sp = dimensional_bounds(4, 2 * np.log(2) / np.log(2), 2, 3, log_base="two")
    assert env == pytest.approx(3.0)


def test_abelian_uniform_sectors():
    assert abelian_saturation(100, [20] * 5) == pytest.approx(2 * np.log(20) + np.log(5))
    assert abelian_saturation(120, [60, 60]) == pytest.approx(2 * np.log(60) + np.log(2))
    assert abelian_saturation(7, [7]) == pytest.approx(2 * np.log(7))


def test_abelian_relabeling_invariant():
    dims = [11, 9]
    a = abelian_saturation(20, dims)
    b = abelian_saturation(20, dims[::-1])
    assert a == pytest.approx(b, abs=1e-12)


def test_abelian_validates_dims():
    with pytest.raises(ValueError):
        abelian_saturation(10, [4, 4])


def test_pseudospin_values():
    assert pseudospin_saturation(118, MEASURE_Z) == pytest.approx(
        2 * np.log(59) + np.log(2)
    )
    assert pseudospin_saturation(118, IDENTITY_SPIN) == pytest.approx(2 * np.log(59))
    assert pseudospin_saturation(2, IDENTITY_SPIN) == 0.0


def commutant_oracle(block_dims, n):
    # direct summation of 2 sum p log n' + H(p)
    total = 0.0
    shannon = 0.0
    for irrep, trivial in block_dims:
        p = irrep * trivial / n
        total += 2 * p * np.log(trivial)
        shannon -= p * np.log(p)
    return total + shannon


def test_commutant_bound_small():
    alg = shift_inversion_algebra(20, 5)
    report = commutant_saturation(alg)
    assert report.value == pytest.approx(commutant_oracle(alg.block_dims, 20), abs=1e-12)
    assert report.value == pytest.approx(3.7150418613021636, abs=1e-12)
    assert report.ingredients["p"] == pytest.approx([0.15, 0.05, 0.4, 0.4])


def test_commutant_bound_large():
    alg = shift_inversion_algebra(100, 5)
    report = commutant_saturation(alg, 100)
    assert report.value == pytest.approx(commutant_oracle(alg.block_dims, 100), abs=1e-12)
    assert report.value == pytest.approx(6.908756952351409, abs=1e-12)
    assert report.ingredients["p"] == pytest.approx([0.11, 0.09, 0.4, 0.4])


def test_commutant_dimension_mismatch():
    alg = shift_inversion_algebra(20, 5)
    with pytest.raises(ValueError):
        commutant_saturation(alg, 24)


def test_bound_layering_at_hundred():
    # commutant < shift-symmetric < inversion-symmetric < 2 log N,
    # every gap above 0.1 nats
    n, s = 100, 5
    commutant = commutant_saturation(shift_inversion_algebra(n, s)).value
    shift_sym = abelian_saturation(n, [n // s] * s)
    inv_sym = abelian_saturation(n, [n // 2 + 1, n // 2 - 1])
    chain = [commutant, shift_sym, inv_sym, 2 * np.log(n)]
    for low, high in zip(chain, chain[1:]):
        assert high - low > 0.1


def test_nonnegative_and_capped():
    for n, s in [(20, 5), (100, 5), (84, 7)]:
        val = commutant_saturation(shift_inversion_algebra(n, s)).value
        assert 0.0 <= val <= 2 * np.log(n) + 1e-12
