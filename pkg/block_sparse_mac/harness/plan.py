from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from block_sparse_mac.model.system_config import InvalidConfigError, SystemConfig


class InvalidPlanError(ValueError):
    pass


class SweepAxis(Enum):
    ES_N0_DB = "es_n0_db"
    N_A = "N_a"
    M = "M"
    T = "T"
    N = "N"

    @property
    def is_integral(self) -> bool:
        return self is not SweepAxis.ES_N0_DB


class Algorithm(Enum):
    BOMP = "bomp"
    ICBOMP = "icbomp"
    ORACLE_LS = "oracle-ls"
    IC_MMSE = "ic-mmse"

    @property
    def stream_id(self) -> int:
        return list(Algorithm).index(self)


class SeedPolicy(Enum):
    """INDEPENDENT gives every algorithm its own trial streams, COMMON shares them"""

    INDEPENDENT = "independent"
    COMMON = "common"


@dataclass(frozen=True)
class ExperimentPlan:
    base: SystemConfig
    axis: SweepAxis
    values: tuple[float, ...]
    algorithms: tuple[Algorithm, ...]
    trials: int
    seed_policy: SeedPolicy = SeedPolicy.INDEPENDENT
    redraw_precoders: bool = False
    iterations: tuple[int, ...] | None = None
    analysis: bool = False
    code_rate_throughput: bool = False
    threads: int = 1
    out_dir: Path = Path(".")
    name: str = "experiment"

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidPlanError(f"trials must be at least 1, got {self.trials}")
        if self.threads < 1:
            raise InvalidPlanError(f"threads must be at least 1, got {self.threads}")
        if not self.algorithms:
            raise InvalidPlanError("A plan needs at least one algorithm")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise InvalidPlanError(f"Duplicate algorithms in {self.algorithms}")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise InvalidPlanError(f"Sweep values must be strictly increasing: {self.values}")
        if self.axis.is_integral and any(float(v) != int(v) for v in self.values):
            raise InvalidPlanError(f"Sweep over {self.axis.value} needs integer values")
        if self.iterations is not None and len(self.iterations) != len(self.values):
            raise InvalidPlanError(
                f"{len(self.iterations)} iteration counts given for {len(self.values)} sweep values"
            )
        for index in range(len(self.values)):
            self.config_at(index)

    def config_at(self, index: int) -> SystemConfig:
        """Scenario of sweep point ``index``"""
        value = self.values[index]
        try:
            if self.axis is SweepAxis.ES_N0_DB:
                overrides: dict[str, float | int] = {"rho0": 10 ** (value / 10)}
            else:
                overrides = {self.axis.value: int(value)}
            if self.iterations is not None:
                overrides["K"] = self.iterations[index]
            cfg = replace(self.base, **overrides)
        except InvalidConfigError as error:
            raise InvalidPlanError(
                f"Invalid scenario at {self.axis.value}={value}: {error}"
            ) from error
        return cfg


def desk_default_plan() -> ExperimentPlan:
    """Es/N0 sweep small enough for a laptop, used when no plan file is given"""
    return ExperimentPlan(
        base=SystemConfig(M=8, N=40, N_a=12, d=50, T=250, rho0=1.0, K=20, t_c=2, seed=2024),
        axis=SweepAxis.ES_N0_DB,
        values=(0.0, 4.0, 8.0, 12.0),
        algorithms=(Algorithm.BOMP, Algorithm.ICBOMP, Algorithm.IC_MMSE),
        trials=200,
        seed_policy=SeedPolicy.COMMON,
        analysis=True,
        name="desk_default",
    )
