import numpy as np
import pytest

from block_sparse_mac.model.frame import synthesize_frame
from block_sparse_mac.model.modulation import modulate
from block_sparse_mac.model.system_config import InvalidConfigError
from block_sparse_mac.utils.rng import make_rng
from tests.test_utils.test_utils import _test_config, _test_dictionary, _test_instance


def test_frame_support_and_blocks():
    cfg = _test_config()

    _, frame = _test_instance(cfg)

    assert frame.N_a == cfg.N_a
    assert list(frame.support) == sorted(set(frame.support.tolist()))
    inactive = [n for n in range(cfg.N) if not frame.is_active(n)]
    np.testing.assert_array_equal(frame.blocks[inactive], 0)
    for position, user in enumerate(frame.support):
        np.testing.assert_array_equal(
            frame.blocks[user], modulate(frame.bits[position], cfg.modulation)
        )
        assert frame.message_length(int(user)) == cfg.d


def test_frame_truth_handle():
    cfg = _test_config()
    _, frame = _test_instance(cfg)
    active = int(frame.support[0])
    inactive = next(n for n in range(cfg.N) if not frame.is_active(n))

    np.testing.assert_array_equal(frame.truth(active), frame.blocks[active])
    assert frame.truth(inactive) is None
    assert frame.message_bits(inactive) is None
    assert frame.message_length(inactive) == 0


def test_frame_received_matches_explicit_dictionary():
    cfg = _test_config()
    dictionary, frame = _test_instance(cfg)

    explicit = dictionary.materialize()

    np.testing.assert_allclose(
        frame.received, cfg.signal_scale * explicit @ frame.s + frame.noise, atol=1e-12
    )


def test_noiseless_frame_keeps_the_other_draws():
    cfg = _test_config()

    _, noisy = _test_instance(cfg, noiseless=False)
    _, noiseless = _test_instance(cfg, noiseless=True)

    np.testing.assert_array_equal(noisy.blocks, noiseless.blocks)
    np.testing.assert_array_equal(noiseless.noise, 0)
    assert np.any(noisy.noise != 0)


def test_frame_with_explicit_support():
    cfg = _test_config()

    _, frame = _test_instance(cfg, support=[7, 2, 11])

    np.testing.assert_array_equal(frame.support, [2, 7, 11])


@pytest.mark.parametrize("support", [[1, 1, 2], [0, 1, 20], [-1, 0, 1]])
def test_frame_rejects_invalid_support(support):
    with pytest.raises(InvalidConfigError):
        _test_instance(_test_config(), support=support)


def test_frame_variable_message_lengths_are_zero_padded():
    cfg = _test_config(N_a=10, message_length_min=1, message_length_max=3)
    dictionary = _test_dictionary(cfg)

    frame = synthesize_frame(cfg, dictionary.precoders, dictionary.channels, make_rng(4))

    assert np.all((frame.lengths >= 1) & (frame.lengths <= 3))
    for position, user in enumerate(frame.support):
        length = frame.lengths[position]
        assert len(frame.bits[position]) == 2 * length
        assert np.all(frame.blocks[user, :length] != 0)
        np.testing.assert_array_equal(frame.blocks[user, length:], 0)


def test_frame_is_seeded():
    cfg = _test_config()

    _, first = _test_instance(cfg, instance=5)
    _, second = _test_instance(cfg, instance=5)

    np.testing.assert_array_equal(first.received, second.received)
