import numpy as np

from block_sparse_mac.codec.correction_limits import CORRECTION_LIMITS
from block_sparse_mac.codec.genie_codec import CodecSpec, GenieCodec
from block_sparse_mac.operator.least_squares import regularized_ls
from block_sparse_mac.recovery.oracle import OracleMode, oracle_receiver
from tests.test_utils.test_utils import _test_config, _test_instance


def _receive(cfg, dictionary, frame, mode):
    return oracle_receiver(
        dictionary,
        frame.received,
        frame.support,
        cfg,
        GenieCodec(CodecSpec.from_config(cfg)),
        frame.truth,
        mode,
    )


def test_oracle_ls_recovers_noiseless_frame():
    cfg = _test_config()
    dictionary, frame = _test_instance(cfg, noiseless=True)

    result = _receive(cfg, dictionary, frame, OracleMode.LS)

    assert sorted(result.support) == list(frame.support)
    assert result.iterations == 1
    for j in frame.support:
        np.testing.assert_allclose(result.estimates[j], frame.blocks[j], atol=1e-10)


def test_ic_mmse_cancels_everything_with_unlimited_correction():
    cfg = _test_config(t_c=CORRECTION_LIMITS.UNLIMITED)
    dictionary, frame = _test_instance(cfg)

    result = _receive(cfg, dictionary, frame, OracleMode.IC_MMSE)

    assert sorted(result.cancelled) == list(frame.support)
    assert result.support == ()
    assert result.iterations == 1
    for j in frame.support:
        np.testing.assert_array_equal(result.estimates[j], frame.blocks[j])


def test_ic_mmse_without_certification_is_one_mmse_pass():
    cfg = _test_config(t_c=CORRECTION_LIMITS.NEVER_CERTIFIES)
    dictionary, frame = _test_instance(cfg)

    result = _receive(cfg, dictionary, frame, OracleMode.IC_MMSE)

    expected = regularized_ls(
        dictionary, frame.received, [int(n) for n in frame.support], cfg.signal_scale
    ).as_dict()
    assert result.cancelled == ()
    assert result.iterations == 1
    for j, block in expected.items():
        np.testing.assert_allclose(result.estimates[j], block, atol=1e-12)


def test_ic_mmse_terminates():
    cfg = _test_config(rho0=3.0, N_a=8, K=10)
    dictionary, frame = _test_instance(cfg)

    result = _receive(cfg, dictionary, frame, OracleMode.IC_MMSE)

    assert result.iterations <= cfg.N_a + 1
    assert result.detected == frozenset(int(n) for n in frame.support)
