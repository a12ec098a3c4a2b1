"""Recovery guarantees evaluated on a coherence profile.

All inequalities are evaluated in linear scale with x = sqrt(rho0 M),
a = e_min - (d-1) nu and b = e_max + (d-1) nu, where e_min and e_max are the
extreme active column energies carried by the profile (1 for normalized
columns).
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

from block_sparse_mac.analysis.coherence import CoherenceProfile, coherence_profile
from block_sparse_mac.model.frame import FrameInstance
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.recovery.recovery_result import RecoveryResult


class FailureReason(Enum):
    NON_POSITIVE_ENERGY_MARGIN = "non-positive-energy-margin"
    INEQUALITY_VIOLATED = "inequality-violated"
    NO_CORRECTION = "no-correction"


@dataclass(frozen=True)
class PredicateOutcome:
    holds: bool
    reason: FailureReason | None = None

    def __bool__(self) -> bool:
        return self.holds


_HOLDS = PredicateOutcome(True)


def _energy_bounds(profile: CoherenceProfile, d: int) -> tuple[float, float]:
    return (
        profile.energy_min - (d - 1) * profile.nu,
        profile.energy_max + (d - 1) * profile.nu,
    )


def separation_condition(
    profile: CoherenceProfile, rho0: float, M: int, d: int, count: int
) -> PredicateOutcome:
    """x^2 a^2 s_l^2 > tau^2 + x^2 d mu {2 (n-1) b + n^2 d mu} s_l^2
    + 2 x tau {(2n-1) d mu + b} s_l, with n = ``count``"""
    a, b = _energy_bounds(profile, d)
    if a <= 0:
        return PredicateOutcome(False, FailureReason.NON_POSITIVE_ENERGY_MARGIN)
    x = math.sqrt(rho0 * M)
    dmu = d * profile.mu_B
    s_l, tau = profile.s_l, profile.tau
    lhs = x**2 * a**2 * s_l**2
    rhs = (
        tau**2
        + x**2 * dmu * (2 * (count - 1) * b + count**2 * dmu) * s_l**2
        + 2 * x * tau * ((2 * count - 1) * dmu + b) * s_l
    )
    return _HOLDS if lhs > rhs else PredicateOutcome(False, FailureReason.INEQUALITY_VIOLATED)


def theorem1_predicate(
    profile: CoherenceProfile, cfg: SystemConfig, N_a: int | None = None
) -> PredicateOutcome:
    """Sufficient condition for BOMP to include every active block in its support.

    Not gated by the Gram eigenvalue margin, which only gates the error and SER bounds.
    """
    count = cfg.N_a if N_a is None else N_a
    return separation_condition(profile, cfg.rho0, cfg.M, cfg.d, count)


def lemma1_predicate(
    profile: CoherenceProfile, cfg: SystemConfig, N_a: int | None = None
) -> PredicateOutcome:
    """Correlation-separation condition with s_u on its left side:

    x^2 a^2 s_u^2 > tau^2 + x^2 (d mu)^2 n^2 s_u^2 + 2 x^2 d mu (n-1) b s_l^2
    + 2 x tau {(n-1) d mu + b} s_l + 2 x n d mu tau s_u
    """
    count = cfg.N_a if N_a is None else N_a
    a, b = _energy_bounds(profile, cfg.d)
    if a <= 0:
        return PredicateOutcome(False, FailureReason.NON_POSITIVE_ENERGY_MARGIN)
    x = math.sqrt(cfg.rho0 * cfg.M)
    dmu = cfg.d * profile.mu_B
    s_l, s_u, tau = profile.s_l, profile.s_u, profile.tau
    lhs = x**2 * a**2 * s_u**2
    rhs = (
        tau**2
        + x**2 * dmu**2 * count**2 * s_u**2
        + 2 * x**2 * dmu * (count - 1) * b * s_l**2
        + 2 * x * tau * ((count - 1) * dmu + b) * s_l
        + 2 * x * count * dmu * tau * s_u
    )
    return _HOLDS if lhs > rhs else PredicateOutcome(False, FailureReason.INEQUALITY_VIOLATED)


@dataclass(frozen=True)
class ErrorBounds:
    """Squared-error bound, erroneous-symbol count and SER bound.

    ``margin`` is the eigenvalue floor of the restricted Gram matrix; every
    bound is None when it is not positive.
    """

    margin: float
    err_bound: float | None
    N_e: int | None
    ser_bound: float | None

    @property
    def available(self) -> bool:
        return self.err_bound is not None


def error_and_ser_bounds(
    profile: CoherenceProfile,
    cfg: SystemConfig,
    K: int | None = None,
    N_a: int | None = None,
) -> ErrorBounds:
    K = cfg.K if K is None else K
    N_a = cfg.N_a if N_a is None else N_a
    margin = profile.energy_floor - (cfg.d - 1) * profile.nu - (K - 1) * cfg.d * profile.mu_B
    if margin <= 0:
        return ErrorBounds(margin, None, None, None)
    err_bound = K * profile.tau**2 / (margin**2 * cfg.rho0 * cfg.M)
    N_e = math.floor(err_bound / cfg.modulation.half_distance_squared)
    ser_bound = min(1.0, N_e / (N_a * cfg.d))
    return ErrorBounds(margin, err_bound, N_e, ser_bound)


@dataclass(frozen=True)
class IterationProfile:
    """Profile of ICBOMP iteration ``iteration`` (1-based).

    Quantities are limited to the users that are neither cancelled before the
    iteration nor unidentified after its block selection; ``blocks`` counts
    the active users among them.
    """

    iteration: int
    profile: CoherenceProfile
    blocks: int


def iteration_profile(
    dictionary: BlockDictionary,
    frame: FrameInstance,
    cfg: SystemConfig,
    cancelled_before: Sequence[int],
    unidentified: Sequence[int],
    iteration: int,
) -> IterationProfile:
    excluded = set(cancelled_before) | set(unidentified)
    considered = [n for n in range(dictionary.N) if n not in excluded]
    missing = sorted(unidentified)
    perturbation = frame.noise + cfg.signal_scale * dictionary.apply_blocks(
        missing, frame.blocks[missing]
    )
    profile = coherence_profile(
        dictionary, frame.blocks, perturbation, frame.support, considered
    )
    blocks = sum(1 for n in frame.support if int(n) not in excluded)
    return IterationProfile(iteration, profile, blocks)


@dataclass(frozen=True)
class CancellationConditions:
    separation: PredicateOutcome
    correction: PredicateOutcome

    @property
    def holds(self) -> bool:
        return self.separation.holds and self.correction.holds


def theorem2_predicates(
    profile: CoherenceProfile, cfg: SystemConfig, N_i: int, t_c: int
) -> CancellationConditions:
    """Sufficient conditions for ICBOMP to cancel at least one block in an iteration"""
    separation = separation_condition(profile, cfg.rho0, cfg.M, cfg.d, N_i)
    if t_c < 0:
        return CancellationConditions(
            separation, PredicateOutcome(False, FailureReason.NO_CORRECTION)
        )
    a, _ = _energy_bounds(profile, cfg.d)
    margin = a - (N_i - 1) * cfg.d * profile.mu_B
    if margin <= 0:
        return CancellationConditions(
            separation,
            PredicateOutcome(False, FailureReason.NON_POSITIVE_ENERGY_MARGIN),
        )
    l_min_squared = 4 * cfg.modulation.half_distance_squared
    lhs = margin**2 * cfg.rho0 * cfg.M * t_c * l_min_squared
    correction = (
        _HOLDS
        if lhs >= 4 * profile.tau**2
        else PredicateOutcome(False, FailureReason.INEQUALITY_VIOLATED)
    )
    return CancellationConditions(separation, correction)


def iteration_error_bound(
    profile: CoherenceProfile, cfg: SystemConfig, N_i: int
) -> float | None:
    """N_i tau_i^2 / ([a_i - (N_i-1) d mu_i]^2 rho0 M), None without a positive margin"""
    a, _ = _energy_bounds(profile, cfg.d)
    margin = a - (N_i - 1) * cfg.d * profile.mu_B
    if margin <= 0:
        return None
    return N_i * profile.tau**2 / (margin**2 * cfg.rho0 * cfg.M)


@dataclass(frozen=True)
class IterationGuarantee:
    iteration: int
    blocks: int
    conditions: CancellationConditions
    error_bound: float | None
    certified_blocks: int


def iteration_guarantees(
    dictionary: BlockDictionary,
    frame: FrameInstance,
    cfg: SystemConfig,
    result: RecoveryResult,
) -> tuple[IterationGuarantee, ...]:
    """Evaluate the per-iteration cancellation conditions along an ICBOMP run"""
    support = {int(n) for n in frame.support}
    selected: set[int] = set()
    cancelled_before: set[int] = set()
    guarantees = []
    for iteration, record in enumerate(result.trace, start=1):
        if record.selected is not None:
            selected.add(record.selected)
        unidentified = sorted(support - selected - cancelled_before)
        current = iteration_profile(
            dictionary, frame, cfg, sorted(cancelled_before), unidentified, iteration
        )
        guarantees.append(
            IterationGuarantee(
                iteration=iteration,
                blocks=current.blocks,
                conditions=theorem2_predicates(current.profile, cfg, current.blocks, cfg.t_c),
                error_bound=iteration_error_bound(current.profile, cfg, current.blocks),
                certified_blocks=len(record.cancelled),
            )
        )
        cancelled_before |= set(record.cancelled)
    return tuple(guarantees)
