import numpy as np
import pytest

from block_sparse_mac.model.channels import ChannelRealization
from block_sparse_mac.model.precoding import draw_precoders
from block_sparse_mac.operator.block_dictionary import (
    BlockDictionary,
    MaterializationCapExceeded,
)
from block_sparse_mac.utils.rng import complex_normal, make_rng
from tests.test_utils.test_utils import _test_config, _test_dictionary


@pytest.fixture
def dictionary() -> BlockDictionary:
    return _test_dictionary(_test_config(precoding_orthogonal=False))


def test_block_dictionary_shape(dictionary: BlockDictionary):
    assert dictionary.shape == (64, 80)
    assert dictionary.materialize().shape == (64, 80)


def test_block_matrix_is_scaled_kronecker_product(dictionary: BlockDictionary):
    expected = np.kron(dictionary.precoders[3], dictionary.channels.gains[3][:, None]) / 2

    np.testing.assert_allclose(dictionary.block_matrix(3), expected)


def test_vectorization_is_column_stacking(dictionary: BlockDictionary):
    x = complex_normal(make_rng(1), dictionary.d)
    grid = np.outer(dictionary.channels.gains[5], dictionary.precoders[5] @ x) / 2

    y = dictionary.apply_blocks([5], x[None, :])

    for m in range(dictionary.M):
        for t in range(dictionary.T):
            assert y[m + dictionary.M * t] == pytest.approx(grid[m, t])


def test_apply_and_adjoint_match_explicit_matrix(dictionary: BlockDictionary):
    rng = make_rng(2)
    x = complex_normal(rng, dictionary.N * dictionary.d)
    r = complex_normal(rng, dictionary.M * dictionary.T)
    explicit = dictionary.materialize()

    np.testing.assert_allclose(dictionary.apply(x), explicit @ x, atol=1e-12)
    np.testing.assert_allclose(dictionary.adjoint(r), explicit.conj().T @ r, atol=1e-12)


def test_correlate_subset_matches_single_blocks(dictionary: BlockDictionary):
    r = complex_normal(make_rng(3), dictionary.M * dictionary.T)

    subset = dictionary.correlate(r, [4, 0, 9])

    for row, j in zip(subset, [4, 0, 9]):
        np.testing.assert_allclose(row, dictionary.block_correlate(r, j), atol=1e-12)
    np.testing.assert_allclose(
        dictionary.correlation_norms(r)[9], np.linalg.norm(subset[2]), atol=1e-12
    )


def test_apply_blocks_with_no_blocks(dictionary: BlockDictionary):
    y = dictionary.apply_blocks([], np.zeros((0, dictionary.d)))

    np.testing.assert_array_equal(y, np.zeros(dictionary.M * dictionary.T))


def test_gram_blocks_match_explicit_matrix(dictionary: BlockDictionary):
    indices = [1, 6, 13]
    explicit = dictionary.materialize(indices)

    np.testing.assert_allclose(
        dictionary.restricted_gram(indices), explicit.conj().T @ explicit, atol=1e-12
    )
    np.testing.assert_allclose(
        dictionary.gram_block(1, 13),
        dictionary.block_matrix(1).conj().T @ dictionary.block_matrix(13),
        atol=1e-12,
    )
    np.testing.assert_allclose(
        dictionary.cross_gram(indices, 2),
        explicit.conj().T @ dictionary.block_matrix(2),
        atol=1e-12,
    )


def test_materialize_respects_cap(dictionary: BlockDictionary):
    with pytest.raises(MaterializationCapExceeded):
        dictionary.materialize(cap=100)


def test_dictionary_rejects_mismatched_users():
    precoders = draw_precoders(3, 8, 2, True, make_rng(0))
    channels = ChannelRealization(np.ones((4, 2), dtype=complex))

    with pytest.raises(ValueError):
        BlockDictionary(precoders, channels)
