import itertools

import numpy as np
import pytest

from block_sparse_mac.analysis.coherence import (
    CoherenceProfile,
    SubsamplingRequired,
    block_coherence,
    coherence_profile,
    gram_bounds_hold,
    noise_correlation,
    sub_coherence,
)
from block_sparse_mac.model.channels import ChannelRealization
from block_sparse_mac.model.precoding import PrecoderSet, draw_precoders
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.utils.rng import make_rng
from tests.test_utils.test_utils import (
    _test_config,
    _test_dictionary,
    _test_instance,
    _test_orthogonal_config,
    _test_orthogonal_dictionary,
)


def _brute_force_block_coherence(dictionary, users) -> float:
    return max(
        np.linalg.norm(dictionary.gram_block(i, j), 2)
        for i, j in itertools.combinations(users, 2)
    ) / dictionary.d


@pytest.mark.parametrize("orthogonal", [True, False])
def test_block_coherence_matches_brute_force(orthogonal):
    dictionary = _test_dictionary(_test_config(precoding_orthogonal=orthogonal))

    value = block_coherence(dictionary)

    expected = _brute_force_block_coherence(dictionary, range(dictionary.N))
    assert value == pytest.approx(expected, rel=1e-4)


def test_block_coherence_over_a_user_subset():
    dictionary = _test_dictionary(_test_config())
    users = [2, 5, 11, 17]

    value = block_coherence(dictionary, users)

    assert value == pytest.approx(_brute_force_block_coherence(dictionary, users), rel=1e-4)
    assert block_coherence(dictionary, [3]) == 0.0


def test_sub_coherence_matches_brute_force():
    dictionary = _test_dictionary(_test_config(precoding_orthogonal=False))

    expected = 0.0
    for j in range(dictionary.N):
        gram = np.abs(dictionary.gram_block(j, j))
        np.fill_diagonal(gram, 0.0)
        expected = max(expected, gram.max())

    assert sub_coherence(dictionary) == pytest.approx(expected, rel=1e-10)


def test_orthonormal_dictionary_is_incoherent():
    dictionary = _test_orthogonal_dictionary(_test_orthogonal_config())

    assert block_coherence(dictionary) == pytest.approx(0.0, abs=1e-12)
    assert sub_coherence(dictionary) == 0.0


def test_noise_correlation_is_largest_block_correlation():
    dictionary = _test_dictionary(_test_config())
    noise = make_rng(4).standard_normal(dictionary.M * dictionary.T) + 0j

    expected = max(
        np.linalg.norm(dictionary.block_matrix(j).conj().T @ noise) for j in range(dictionary.N)
    )

    assert noise_correlation(dictionary, noise) == pytest.approx(expected)


def test_block_coherence_requires_subsampling_above_cap():
    dictionary = _test_dictionary(_test_config())

    with pytest.raises(SubsamplingRequired):
        block_coherence(dictionary, pair_cap=10)


def test_subsampled_block_coherence_is_a_lower_estimate():
    dictionary = _test_dictionary(_test_config())

    sampled = block_coherence(dictionary, pair_cap=50, subsample=True, rng=make_rng(0))

    assert 0.0 < sampled <= block_coherence(dictionary) * (1 + 1e-4)


def test_coherence_profile_of_a_frame():
    cfg = _test_config()
    dictionary, frame = _test_instance(cfg)

    profile = coherence_profile(dictionary, frame.blocks, frame.noise, frame.support)

    assert profile.s_l == pytest.approx(np.sqrt(cfg.d))
    assert profile.s_u == pytest.approx(np.sqrt(cfg.d))
    assert profile.tau == pytest.approx(noise_correlation(dictionary, frame.noise))
    energies = dictionary.channels.column_energies()
    assert profile.energy_min == pytest.approx(energies[frame.support].min())
    assert profile.energy_max == pytest.approx(energies[frame.support].max())
    assert profile.energy_floor == pytest.approx(energies.min())
    assert not profile.subsampled


def test_gram_bounds_hold_on_measured_profiles():
    for orthogonal in (True, False):
        cfg = _test_config(precoding_orthogonal=orthogonal)
        for instance in range(3):
            dictionary, frame = _test_instance(cfg, instance=instance)
            profile = coherence_profile(dictionary, frame.blocks, frame.noise, frame.support)

            assert gram_bounds_hold(dictionary, profile)


def test_gram_bounds_fail_for_understated_coherence():
    dictionary, frame = _test_instance(_test_config())
    measured = coherence_profile(dictionary, frame.blocks, frame.noise, frame.support)
    understated = CoherenceProfile(
        mu_B=measured.mu_B / 2, nu=measured.nu, s_l=measured.s_l, s_u=measured.s_u, tau=0.0
    )

    assert not gram_bounds_hold(dictionary, understated)


@pytest.mark.parametrize(
    "fields",
    [
        dict(mu_B=-0.1, nu=0.0, s_l=1.0, s_u=1.0, tau=1.0),
        dict(mu_B=0.1, nu=0.0, s_l=2.0, s_u=1.0, tau=1.0),
        dict(mu_B=0.1, nu=0.0, s_l=1.0, s_u=1.0, tau=-1.0),
    ],
)
def test_coherence_profile_rejects_invalid_values(fields):
    with pytest.raises(ValueError):
        CoherenceProfile(**fields)


@pytest.mark.parametrize("d", [1, 3, 8])
def test_duplicate_user_has_unit_normalized_coherence(d: int):
    M, T = 6, 16
    rng = make_rng(31, d)
    matrices = np.array(draw_precoders(3, T, d, True, rng).matrices)
    matrices[1] = matrices[0]
    gains = rng.standard_normal((3, M)) + 1j * rng.standard_normal((3, M))
    gains *= np.sqrt(M) / np.linalg.norm(gains, axis=1, keepdims=True)
    gains[1] = gains[0]
    dictionary = BlockDictionary(PrecoderSet(matrices, True), ChannelRealization(gains))

    assert block_coherence(dictionary) == pytest.approx(1 / d, rel=1e-12)
    assert block_coherence(dictionary, users=[0, 2]) < 1 / d


@pytest.mark.slow
def test_block_coherence_of_the_tabulated_scenario():
    cfg = _test_config(M=8, N=80, N_a=1, d=200, T=1000, K=35)

    values = [block_coherence(_test_dictionary(cfg, instance)) for instance in range(20)]

    assert np.mean(values) == pytest.approx(0.0035, rel=0.3)
