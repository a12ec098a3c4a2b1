import pytest

from block_sparse_mac.harness.plan import (
    Algorithm,
    ExperimentPlan,
    InvalidPlanError,
    SweepAxis,
    desk_default_plan,
)
from tests.test_utils.test_utils import _test_plan


def test_plan_config_at_es_n0():
    plan = _test_plan()

    assert plan.config_at(0).rho0 == pytest.approx(1.0)
    assert plan.config_at(1).rho0 == pytest.approx(10.0)
    assert plan.config_at(1).M == plan.base.M


def test_plan_config_at_integral_axis():
    plan = _test_plan(axis=SweepAxis.M, values=(4.0, 6.0), iterations=(6, 8))

    assert plan.config_at(1).M == 6
    assert plan.config_at(1).K == 8
    assert plan.config_at(0).rho0 == plan.base.rho0


@pytest.mark.parametrize(
    "overrides",
    [
        {"trials": 0},
        {"threads": 0},
        {"algorithms": ()},
        {"algorithms": (Algorithm.BOMP, Algorithm.BOMP)},
        {"values": (5.0, 5.0)},
        {"axis": SweepAxis.N_A, "values": (2.5,)},
        {"iterations": (6,)},
        {"axis": SweepAxis.T, "values": (4.0,)},
    ],
)
def test_plan_rejects_invalid_values(overrides):
    with pytest.raises(InvalidPlanError):
        _test_plan(**overrides)


def test_algorithm_stream_ids_are_distinct():
    assert len({algorithm.stream_id for algorithm in Algorithm}) == len(Algorithm)


def test_desk_default_plan():
    plan = desk_default_plan()

    assert plan.values == (0.0, 4.0, 8.0, 12.0)
    assert plan.trials == 200
    assert plan.base.M * plan.base.T / (plan.base.d * plan.base.K) == 2
    assert plan.base.T == 5 * plan.base.d


def test_shipped_desk_plan_matches_the_built_in_default(desk_plan: ExperimentPlan):
    assert desk_plan == desk_default_plan()
