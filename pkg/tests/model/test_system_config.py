import logging

import pytest

from block_sparse_mac.model.system_config import InvalidConfigError, Modulation
from tests.test_utils.test_utils import _test_config


def test_system_config_derived_quantities():
    cfg = _test_config()

    assert cfg.max_users == 16
    assert cfg.is_underdetermined
    assert cfg.signal_scale == pytest.approx(40**0.5)
    assert cfg.bits_per_message == 8
    assert cfg.message_length_range == (4, 4)


def test_system_config_es_n0_db():
    cfg = _test_config().with_es_n0_db(15.0)

    assert cfg.rho0 == pytest.approx(10**1.5)
    assert cfg.es_n0_db == pytest.approx(15.0)


def test_system_config_bpsk_bits():
    cfg = _test_config(modulation=Modulation.BPSK)

    assert cfg.bits_per_message == 4


@pytest.mark.parametrize(
    "overrides",
    [
        {"d": 16},
        {"N_a": 21},
        {"K": 17},
        {"M": 0},
        {"rho0": 0.0},
        {"t_c": -2},
        {"seed": -1},
        {"message_length_min": 3, "message_length_max": 2},
        {"message_length_max": 5},
        {"early_stop_threshold": -1.0},
    ],
)
def test_system_config_rejects_invalid_values(overrides):
    with pytest.raises(InvalidConfigError):
        _test_config(**overrides)


def test_system_config_accepts_never_certifying_codec():
    assert _test_config(t_c=-1).t_c == -1


def test_system_config_warns_when_not_underdetermined(caplog):
    with caplog.at_level(logging.WARNING):
        cfg = _test_config(N=16)

    assert not cfg.is_underdetermined
    assert "not under-determined" in caplog.text


def test_modulation_distances():
    assert Modulation.QPSK.half_distance_squared == 0.5
    assert Modulation.BPSK.half_distance_squared == 1.0
    assert Modulation.QPSK.min_distance**2 == pytest.approx(2.0)
