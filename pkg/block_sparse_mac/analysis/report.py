import logging
from dataclasses import dataclass

import numpy as np

from block_sparse_mac.analysis.capacity import DeterminantTooLarge, theorem3_report
from block_sparse_mac.analysis.coherence import (
    CoherenceProfile,
    coherence_profile,
    gram_bounds_hold,
)
from block_sparse_mac.analysis.guarantees import (
    IterationGuarantee,
    error_and_ser_bounds,
    iteration_guarantees,
    lemma1_predicate,
    theorem1_predicate,
)
from block_sparse_mac.analysis.tail import noise_tail_prob
from block_sparse_mac.codec.genie_codec import CodecSpec, GenieCodec
from block_sparse_mac.model.frame import FrameInstance
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.recovery.pursuit import icbomp
from block_sparse_mac.utils.key_value import render_key_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GuaranteeReport:
    profile: CoherenceProfile
    theorem1_holds: bool
    theorem1_reason: str | None
    lemma1_holds: bool
    err_bound: float | None
    N_e: int | None
    ser_bound: float | None
    tail_probability: float
    gram_bounds_hold: bool | None
    theorem2_holds: tuple[bool, ...]
    theorem2_certified: tuple[int, ...]
    capacity: float | None
    S_lower: float | None
    theorem3_satisfiable: bool | None
    p_e: float

    def to_key_value(self) -> str:
        """Flat ``key = value`` block; unavailable bounds render as ``unavailable``"""
        return render_key_value(
            {
                "mu_B": self.profile.mu_B,
                "nu": self.profile.nu,
                "s_l": self.profile.s_l,
                "s_u": self.profile.s_u,
                "tau": self.profile.tau,
                "energy_min": self.profile.energy_min,
                "energy_max": self.profile.energy_max,
                "energy_floor": self.profile.energy_floor,
                "theorem1_holds": self.theorem1_holds,
                "theorem1_reason": self.theorem1_reason or "none",
                "lemma1_holds": self.lemma1_holds,
                "err_bound": self.err_bound,
                "N_e": self.N_e,
                "ser_bound": self.ser_bound,
                "tail_probability": self.tail_probability,
                "gram_bounds_hold": self.gram_bounds_hold,
                "theorem2_holds": self.theorem2_holds or "none",
                "theorem2_certified": self.theorem2_certified or "none",
                "capacity_bits": self.capacity,
                "S_lower_bits": self.S_lower,
                "theorem3_satisfiable": self.theorem3_satisfiable,
                "p_e": self.p_e,
            }
        )


def build_guarantee_report(
    cfg: SystemConfig,
    dictionary: BlockDictionary,
    frame: FrameInstance,
    p_e: float = 0.0,
    *,
    check_gram_bounds: bool = False,
    subsample: bool = False,
    rng: np.random.Generator | None = None,
) -> GuaranteeReport:
    """Evaluate every guarantee on one realization.

    The per-iteration ICBOMP conditions are evaluated along an ICBOMP run on
    the frame with the genie codec of ``cfg``.
    """
    profile = coherence_profile(
        dictionary, frame.blocks, frame.noise, frame.support, subsample=subsample, rng=rng
    )
    theorem1 = theorem1_predicate(profile, cfg, frame.N_a)
    bounds = error_and_ser_bounds(profile, cfg, N_a=frame.N_a)

    result = icbomp(
        dictionary, frame.received, cfg, GenieCodec(CodecSpec.from_config(cfg)), frame.truth
    )
    iterations: tuple[IterationGuarantee, ...] = iteration_guarantees(
        dictionary, frame, cfg, result
    )

    payload_bits = [len(bits) for bits in frame.bits]
    try:
        theorem3 = theorem3_report(cfg, dictionary, frame.support, payload_bits, p_e)
        capacity, S_lower, satisfiable = (
            theorem3.capacity,
            theorem3.S_lower,
            theorem3.satisfiable,
        )
    except DeterminantTooLarge as error:
        logger.info("Skipping the capacity evaluation: %s", error)
        capacity = S_lower = satisfiable = None

    return GuaranteeReport(
        profile=profile,
        theorem1_holds=theorem1.holds,
        theorem1_reason=theorem1.reason.value if theorem1.reason else None,
        lemma1_holds=lemma1_predicate(profile, cfg, frame.N_a).holds,
        err_bound=bounds.err_bound,
        N_e=bounds.N_e,
        ser_bound=bounds.ser_bound,
        tail_probability=noise_tail_prob(profile.tau, cfg.d, profile.nu),
        gram_bounds_hold=gram_bounds_hold(dictionary, profile) if check_gram_bounds else None,
        theorem2_holds=tuple(guarantee.conditions.holds for guarantee in iterations),
        theorem2_certified=tuple(guarantee.certified_blocks for guarantee in iterations),
        capacity=capacity,
        S_lower=S_lower,
        theorem3_satisfiable=satisfiable,
        p_e=p_e,
    )
