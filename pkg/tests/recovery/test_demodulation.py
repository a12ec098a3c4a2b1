import numpy as np

from block_sparse_mac.recovery.demodulation import demodulate_result
from block_sparse_mac.recovery.pursuit import bomp
from tests.test_utils.test_utils import _test_orthogonal_config, _test_orthogonal_instance


def test_demodulate_result_returns_bits_of_detected_blocks():
    cfg = _test_orthogonal_config(K=3)
    dictionary, frame = _test_orthogonal_instance(cfg)
    result = bomp(dictionary, frame.received, cfg)

    decided = demodulate_result(result, cfg.modulation)

    assert sorted(decided) == sorted(result.detected)
    for position, user in enumerate(frame.support):
        np.testing.assert_array_equal(decided[int(user)], frame.bits[position])
