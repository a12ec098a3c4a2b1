import math

import numpy as np
import pytest

from block_sparse_mac.analysis.tail import noise_tail_prob
from block_sparse_mac.utils.rng import complex_normal, make_rng


def test_noise_tail_prob_single_dimension():
    assert noise_tail_prob(1.5, 1, 0.0) == pytest.approx(1 - math.exp(-2.25))


def test_noise_tail_prob_matches_finite_series():
    tau, d, nu = 2.0, 3, 0.1
    varsigma_squared = tau**2 / (1 + (d - 1) * nu)

    series = sum(varsigma_squared**k / math.factorial(k) for k in range(d))

    assert noise_tail_prob(tau, d, nu) == pytest.approx(1 - math.exp(-varsigma_squared) * series)


def test_noise_tail_prob_limits():
    assert noise_tail_prob(0.0, 4, 0.0) == 0.0
    assert noise_tail_prob(50.0, 4, 0.0) == pytest.approx(1.0)
    assert noise_tail_prob(2.0, 4, 0.2) < noise_tail_prob(2.0, 4, 0.0)


def test_noise_tail_prob_rejects_negative_radius():
    with pytest.raises(ValueError):
        noise_tail_prob(-1.0, 2, 0.0)


@pytest.mark.slow
@pytest.mark.parametrize("d", [1, 4, 16])
@pytest.mark.parametrize("tau", [1.0, 2.0, 3.0])
def test_noise_tail_prob_matches_monte_carlo(d: int, tau: float):
    rng = make_rng(17, d, int(tau))
    draws, chunk = 1_000_000, 100_000
    inside = 0
    for _ in range(draws // chunk):
        samples = complex_normal(rng, (chunk, d))
        inside += int(np.count_nonzero(np.linalg.norm(samples, axis=1) <= tau))

    assert noise_tail_prob(tau, d, 0.0) == pytest.approx(inside / draws, abs=0.005)
