"""Scenario and plan files.

Both are ``key = value`` text files (``#`` comments, comma-separated lists).
Scenario keys mirror the SystemConfig fields; a plan file is a scenario plus
the sweep keys. Example::

    M = 8
    N = 40
    N_a = 12
    d = 50
    T = 250
    K = 20
    es_n0_db = 0
    t_c = 2
    seed = 2024
    axis = es_n0_db
    values = 0, 4, 8, 12
    algorithms = bomp, icbomp, ic-mmse
    trials = 200
"""

import logging
from collections.abc import Callable
from pathlib import Path
from typing import TypeVar

from block_sparse_mac.codec.correction_limits import CORRECTION_LIMITS
from block_sparse_mac.harness.plan import (
    Algorithm,
    ExperimentPlan,
    InvalidPlanError,
    SeedPolicy,
    SweepAxis,
)
from block_sparse_mac.model.system_config import (
    InvalidConfigError,
    Modulation,
    SystemConfig,
)
from block_sparse_mac.utils.key_value import KeyValueSyntaxError, parse_key_value_lines

logger = logging.getLogger(__name__)

SCENARIO_KEYS = {
    "M", "N", "N_a", "d", "T", "K", "rho0", "es_n0_db", "t_c", "seed",
    "precoding_orthogonal", "modulation", "message_length_min",
    "message_length_max", "early_stop_threshold",
}  # fmt: skip
PLAN_KEYS = {
    "axis", "values", "algorithms", "trials", "seed_policy", "redraw_precoders",
    "iterations", "analysis", "code_rate_throughput", "threads", "out_dir", "name",
}  # fmt: skip
MANDATORY_SCENARIO_KEYS = ("M", "N", "N_a", "d", "T", "K", "t_c", "seed")
MANDATORY_PLAN_KEYS = ("axis", "values", "algorithms", "trials")

_TRUE = {"true", "yes", "1"}
_FALSE = {"false", "no", "0"}

V = TypeVar("V")


def _convert(key: str, value: str, converter: Callable[[str], V]) -> V:
    try:
        return converter(value)
    except ValueError as error:
        raise InvalidPlanError(f"Invalid value for {key}: {value!r}") from error


def _parse_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(value)


def _parse_t_c(value: str) -> int:
    if value.lower() in ("inf", "infinity", "unlimited"):
        return CORRECTION_LIMITS.UNLIMITED
    return int(value)


def _parse_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _parse_float_list(value: str) -> list[float]:
    return [float(item) for item in _parse_list(value)]


def _parse_int_list(value: str) -> list[int]:
    return [int(item) for item in _parse_list(value)]


def _optional(entries: dict[str, str], key: str, converter: Callable[[str], V]) -> V | None:
    return _convert(key, entries[key], converter) if key in entries else None


def parse_scenario(entries: dict[str, str]) -> SystemConfig:
    missing = [key for key in MANDATORY_SCENARIO_KEYS if key not in entries]
    if missing:
        raise InvalidPlanError(f"Missing mandatory keys: {', '.join(missing)}")
    if ("rho0" in entries) == ("es_n0_db" in entries):
        raise InvalidPlanError("Exactly one of rho0 and es_n0_db must be given")
    if "rho0" in entries:
        rho0 = _convert("rho0", entries["rho0"], float)
    else:
        rho0 = 10 ** (_convert("es_n0_db", entries["es_n0_db"], float) / 10)

    options = {}
    orthogonal = _optional(entries, "precoding_orthogonal", _parse_bool)
    if orthogonal is not None:
        options["precoding_orthogonal"] = orthogonal
    modulation = _optional(entries, "modulation", lambda v: Modulation(v.lower()))
    if modulation is not None:
        options["modulation"] = modulation
    for key in ("message_length_min", "message_length_max"):
        length = _optional(entries, key, int)
        if length is not None:
            options[key] = length
    threshold = _optional(entries, "early_stop_threshold", float)
    if threshold is not None:
        options["early_stop_threshold"] = threshold

    try:
        return SystemConfig(
            M=_convert("M", entries["M"], int),
            N=_convert("N", entries["N"], int),
            N_a=_convert("N_a", entries["N_a"], int),
            d=_convert("d", entries["d"], int),
            T=_convert("T", entries["T"], int),
            rho0=rho0,
            K=_convert("K", entries["K"], int),
            t_c=_convert("t_c", entries["t_c"], _parse_t_c),
            seed=_convert("seed", entries["seed"], int),
            **options,
        )
    except InvalidConfigError as error:
        raise InvalidPlanError(f"Invalid scenario: {error}") from error


def parse_plan(entries: dict[str, str], default_name: str = "experiment") -> ExperimentPlan:
    unknown = sorted(set(entries) - SCENARIO_KEYS - PLAN_KEYS)
    if unknown:
        raise InvalidPlanError(f"Unknown keys: {', '.join(unknown)}")
    missing = [key for key in MANDATORY_PLAN_KEYS if key not in entries]
    if missing:
        raise InvalidPlanError(f"Missing mandatory keys: {', '.join(missing)}")

    base = parse_scenario({k: v for k, v in entries.items() if k in SCENARIO_KEYS})
    iterations = _optional(entries, "iterations", _parse_int_list)
    threads = _optional(entries, "threads", int)
    return ExperimentPlan(
        base=base,
        axis=_convert("axis", entries["axis"], SweepAxis),
        values=tuple(_convert("values", entries["values"], _parse_float_list)),
        algorithms=tuple(
            _convert("algorithms", name, lambda v: Algorithm(v.lower()))
            for name in _parse_list(entries["algorithms"])
        ),
        trials=_convert("trials", entries["trials"], int),
        seed_policy=_optional(entries, "seed_policy", lambda v: SeedPolicy(v.lower()))
        or SeedPolicy.INDEPENDENT,
        redraw_precoders=_optional(entries, "redraw_precoders", _parse_bool) or False,
        iterations=tuple(iterations) if iterations is not None else None,
        analysis=_optional(entries, "analysis", _parse_bool) or False,
        code_rate_throughput=_optional(entries, "code_rate_throughput", _parse_bool) or False,
        threads=1 if threads is None else threads,
        out_dir=Path(entries.get("out_dir", ".")),
        name=entries.get("name", default_name),
    )


def _read_entries(path: Path) -> dict[str, str]:
    with open(path) as plan_file:
        try:
            return parse_key_value_lines(plan_file)
        except KeyValueSyntaxError as error:
            raise InvalidPlanError(f"{path}: {error}") from error


def load_plan_file(path: Path) -> ExperimentPlan:
    plan = parse_plan(_read_entries(path), default_name=path.stem)
    logger.info(
        "Loaded plan %s: %d points on %s, %d trials each",
        plan.name,
        len(plan.values),
        plan.axis.value,
        plan.trials,
    )
    return plan


def load_scenario_file(path: Path) -> SystemConfig:
    """Load a scenario; sweep keys are tolerated and ignored"""
    entries = _read_entries(path)
    unknown = sorted(set(entries) - SCENARIO_KEYS - PLAN_KEYS)
    if unknown:
        raise InvalidPlanError(f"Unknown keys: {', '.join(unknown)}")
    return parse_scenario({k: v for k, v in entries.items() if k in SCENARIO_KEYS})
