import numpy as np
import pytest

from block_sparse_mac.harness.selftest import (
    check_bomp_support,
    check_codec,
    check_explicit_operator,
    exhaustive_support_search,
    explicit_bomp,
    run_selftest,
    tiny_config,
    tiny_instance,
)
from block_sparse_mac.recovery.pursuit import bomp
from tests.test_utils.test_utils import _test_config, _test_instance


def test_exhaustive_search_finds_noiseless_support():
    cfg = tiny_config()
    dictionary, frame = tiny_instance(cfg, 0)

    found = exhaustive_support_search(dictionary, frame.received, cfg.signal_scale, cfg.N_a)

    assert list(found) == sorted(int(n) for n in frame.support)


def test_tiny_instances_are_reproducible():
    cfg = tiny_config(5)
    _, first = tiny_instance(cfg, 3, noiseless=False)
    _, second = tiny_instance(cfg, 3, noiseless=False)

    np.testing.assert_array_equal(first.received, second.received)


def test_explicit_operator_check():
    check = check_explicit_operator(tiny_config())

    assert check.passed, check.detail


def test_codec_check():
    check = check_codec(tiny_config())

    assert check.passed, check.detail


@pytest.mark.slow
@pytest.mark.parametrize("seed", [0, 1])
def test_every_check_passes(seed: int):
    checks = run_selftest(seed)

    assert len(checks) == 7
    assert [check.name for check in checks if not check.passed] == []


@pytest.mark.parametrize("instance", range(5))
def test_explicit_bomp_follows_the_matrix_free_selections(instance: int):
    cfg = _test_config()
    dictionary, frame = _test_instance(cfg, instance=instance)

    result = bomp(dictionary, frame.received, cfg)

    assert explicit_bomp(dictionary.materialize(), frame.received, cfg.d, cfg.K) == tuple(
        record.selected for record in result.trace
    )


def test_bomp_check_requires_explicit_agreement_only():
    check = check_bomp_support(tiny_config())

    assert check.passed, check.detail
    assert check.detail.startswith("100/100 selection orders match explicit BOMP")
    assert "supports match exhaustive search" in check.detail
