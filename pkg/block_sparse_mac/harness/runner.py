"""Monte-Carlo sweeps.

Trial ``k`` of algorithm ``a`` at sweep value ``v`` draws channels, support,
payloads and noise from the substream (seed, TRIALS, key(v), a, k); with the
COMMON seed policy all algorithms share a = 0 and therefore the same frames.
Precoders are drawn once per (N, d, T) from the PRECODERS stream unless the
plan redraws them per trial. Trials run on a thread pool and are aggregated in
trial order.
"""

import logging
import math
import threading
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from tqdm import tqdm

from block_sparse_mac.analysis.report import GuaranteeReport, build_guarantee_report
from block_sparse_mac.analysis.throughput import throughput
from block_sparse_mac.codec.genie_codec import CodecSpec, GenieCodec, code_for_message
from block_sparse_mac.harness.counting import TrialErrors, count_errors
from block_sparse_mac.harness.plan import Algorithm, ExperimentPlan, SeedPolicy, SweepAxis
from block_sparse_mac.model.channels import generate_channels
from block_sparse_mac.model.frame import FrameInstance, synthesize_frame
from block_sparse_mac.model.precoding import PrecoderSet, generate_precoders
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.recovery.oracle import OracleMode, oracle_receiver
from block_sparse_mac.recovery.pursuit import bomp, icbomp
from block_sparse_mac.recovery.recovery_result import RecoveryResult
from block_sparse_mac.utils.rng import SEED_STREAMS, axis_value_key, make_rng

logger = logging.getLogger(__name__)

CONFIDENCE_Z = 1.959963984540054


@dataclass(frozen=True)
class TrialOutcome:
    errors: TrialErrors
    iterations: int
    cancelled: int
    flagged: bool


@dataclass(frozen=True)
class PointStats:
    algorithm: Algorithm
    axis: SweepAxis
    axis_value: float
    ser: float
    fer: float
    throughput: float
    mean_iterations: float
    mean_cancelled: float
    trials: int
    flagged_trials: int
    ser_half_width: float
    fer_half_width: float


def detect(
    algorithm: Algorithm,
    dictionary: BlockDictionary,
    frame: FrameInstance,
    cfg: SystemConfig,
) -> RecoveryResult:
    if algorithm is Algorithm.BOMP:
        return bomp(dictionary, frame.received, cfg)
    codec = GenieCodec(CodecSpec.from_config(cfg))
    if algorithm is Algorithm.ICBOMP:
        return icbomp(dictionary, frame.received, cfg, codec, frame.truth)
    mode = OracleMode.LS if algorithm is Algorithm.ORACLE_LS else OracleMode.IC_MMSE
    return oracle_receiver(
        dictionary, frame.received, frame.support, cfg, codec, frame.truth, mode
    )


def _half_width(rate: float, count: int) -> float:
    return CONFIDENCE_Z * math.sqrt(rate * (1 - rate) / count) if count else 0.0


def aggregate(
    outcomes: Sequence[TrialOutcome],
    algorithm: Algorithm,
    axis: SweepAxis,
    axis_value: float,
    cfg: SystemConfig,
    code_rate: float = 1.0,
) -> PointStats:
    symbol_errors = np.sum([o.errors.symbol_errors for o in outcomes])
    symbols = int(np.sum([o.errors.symbols for o in outcomes]))
    frame_errors = np.sum([o.errors.frame_errors for o in outcomes])
    frames = int(np.sum([o.errors.frames for o in outcomes]))
    ser = float(symbol_errors / symbols) if symbols else 0.0
    fer = float(frame_errors / frames) if frames else 0.0
    return PointStats(
        algorithm=algorithm,
        axis=axis,
        axis_value=float(axis_value),
        ser=ser,
        fer=fer,
        throughput=throughput(fer, cfg, code_rate),
        mean_iterations=float(np.mean([o.iterations for o in outcomes])),
        mean_cancelled=float(np.mean([o.cancelled for o in outcomes])),
        trials=len(outcomes),
        flagged_trials=sum(1 for o in outcomes if o.flagged),
        ser_half_width=_half_width(ser, symbols),
        fer_half_width=_half_width(fer, frames),
    )


class ExperimentRunner:
    def __init__(self, plan: ExperimentPlan, progress: bool = False):
        self.plan = plan
        self.progress = progress
        self._precoders: dict[tuple[int, int, int, bool], PrecoderSet] = {}
        self._lock = threading.Lock()
        self.configs = [plan.config_at(index) for index in range(len(plan.values))]

    def precoders_for(self, cfg: SystemConfig) -> PrecoderSet:
        key = (cfg.N, cfg.d, cfg.T, cfg.precoding_orthogonal)
        with self._lock:
            if key not in self._precoders:
                rng = make_rng(self.plan.base.seed, SEED_STREAMS.PRECODERS, cfg.N, cfg.d, cfg.T)
                self._precoders[key] = generate_precoders(cfg, rng)
            return self._precoders[key]

    def trial_rng(self, axis_value: float, algorithm: Algorithm, trial: int) -> np.random.Generator:
        stream = 0 if self.plan.seed_policy is SeedPolicy.COMMON else algorithm.stream_id
        return make_rng(
            self.plan.base.seed,
            SEED_STREAMS.TRIALS,
            axis_value_key(axis_value),
            stream,
            trial,
        )

    def draw_frame(
        self, cfg: SystemConfig, rng: np.random.Generator
    ) -> tuple[BlockDictionary, FrameInstance]:
        precoders = (
            generate_precoders(cfg, rng) if self.plan.redraw_precoders else self.precoders_for(cfg)
        )
        channels = generate_channels(cfg, rng)
        frame = synthesize_frame(cfg, precoders, channels, rng)
        return BlockDictionary(precoders, channels), frame

    def run_trial(self, index: int, algorithm: Algorithm, trial: int) -> TrialOutcome:
        cfg = self.configs[index]
        rng = self.trial_rng(self.plan.values[index], algorithm, trial)
        dictionary, frame = self.draw_frame(cfg, rng)
        result = detect(algorithm, dictionary, frame, cfg)
        return TrialOutcome(
            errors=count_errors(result, frame, cfg),
            iterations=result.iterations,
            cancelled=len(result.cancelled),
            flagged=result.flags.any,
        )

    def code_rate(self, cfg: SystemConfig) -> float:
        if not self.plan.code_rate_throughput:
            return 1.0
        code = code_for_message(cfg.bits_per_message)
        if code is None:
            logger.warning(
                "No known code for %d-bit messages, reporting uncoded throughput",
                cfg.bits_per_message,
            )
            return 1.0
        return code.rate

    def run_point(self, index: int) -> list[PointStats]:
        cfg = self.configs[index]
        value = self.plan.values[index]
        stats = []
        for algorithm in self.plan.algorithms:
            with ThreadPoolExecutor(max_workers=self.plan.threads) as pool:
                outcomes = list(
                    tqdm(
                        pool.map(
                            partial(self.run_trial, index, algorithm),
                            range(self.plan.trials),
                        ),
                        total=self.plan.trials,
                        desc=f"{algorithm.value} {self.plan.axis.value}={value:g}",
                        disable=not self.progress,
                    )
                )
            stats.append(
                aggregate(outcomes, algorithm, self.plan.axis, value, cfg, self.code_rate(cfg))
            )
        return stats

    def run(self) -> list[PointStats]:
        return [s for index in range(len(self.plan.values)) for s in self.run_point(index)]

    def guarantee_reports(
        self, p_e: float = 0.0, check_gram_bounds: bool = False
    ) -> list[tuple[float, GuaranteeReport]]:
        """One report per sweep point, on a realization from the ANALYSIS stream"""
        reports = []
        for index, value in enumerate(self.plan.values):
            cfg = self.configs[index]
            rng = make_rng(self.plan.base.seed, SEED_STREAMS.ANALYSIS, axis_value_key(value))
            dictionary, frame = self.draw_frame(cfg, rng)
            report = build_guarantee_report(
                cfg,
                dictionary,
                frame,
                p_e,
                check_gram_bounds=check_gram_bounds,
                subsample=True,
                rng=rng,
            )
            reports.append((value, report))
        return reports


def run_point(plan: ExperimentPlan, index: int) -> list[PointStats]:
    return ExperimentRunner(plan).run_point(index)


def run_plan(plan: ExperimentPlan, progress: bool = False) -> list[PointStats]:
    return ExperimentRunner(plan, progress).run()
