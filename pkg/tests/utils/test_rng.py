import numpy as np
import pytest

from block_sparse_mac.utils.rng import SEED_STREAMS, axis_value_key, complex_normal, make_rng


def test_make_rng_is_reproducible():
    first = make_rng(5, SEED_STREAMS.TRIALS, 2).standard_normal(4)
    second = make_rng(5, SEED_STREAMS.TRIALS, 2).standard_normal(4)

    np.testing.assert_array_equal(first, second)


def test_make_rng_streams_are_distinct():
    trials = make_rng(5, SEED_STREAMS.TRIALS, 2).standard_normal(4)
    analysis = make_rng(5, SEED_STREAMS.ANALYSIS, 2).standard_normal(4)

    assert not np.array_equal(trials, analysis)


def test_axis_value_key():
    assert axis_value_key(4.0) == 4000
    assert axis_value_key(0.5) == 500
    assert axis_value_key(-2.0) == 2**32 - 2000
    assert axis_value_key(24) == 24000


def test_complex_normal_draws_real_parts_first():
    values = complex_normal(make_rng(1), 3)
    reference = make_rng(1).standard_normal(6) / np.sqrt(2)

    np.testing.assert_allclose(values.real, reference[:3])
    np.testing.assert_allclose(values.imag, reference[3:])


def test_complex_normal_has_unit_variance():
    values = complex_normal(make_rng(2), 100_000)

    assert np.mean(np.abs(values) ** 2) == pytest.approx(1.0, abs=0.02)
