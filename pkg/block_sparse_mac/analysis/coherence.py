"""Coherence quantities of a dictionary realization.

Block-coherence is mu_B = max_{i != j} ||B_i^H B_j||_2 / d with
||B_i^H B_j||_2 = c_ij ||P_i^H P_j||_2 and c_ij = |h_i^H h_j| / M. Pairs are
visited in decreasing order of the upper bound c_ij ||P_i||_2 ||P_j||_2 and the
scan stops once no remaining pair can beat the best value found.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from block_sparse_mac.operator.block_dictionary import BlockDictionary

logger = logging.getLogger(__name__)

DEFAULT_PAIR_CAP = 500_000


class SubsamplingRequired(Exception):
    pass


@dataclass(frozen=True)
class CoherenceProfile:
    """Quantities the recovery guarantees are stated in.

    ``energy_min``/``energy_max`` are the extreme column energies
    ||h_j||^2 / M over the active blocks and ``energy_floor`` the smallest over
    all blocks; the defaults describe statistically normalized columns.
    """

    mu_B: float
    nu: float
    s_l: float
    s_u: float
    tau: float
    energy_min: float = 1.0
    energy_max: float = 1.0
    energy_floor: float = 1.0
    subsampled: bool = False

    def __post_init__(self):
        if self.mu_B < 0 or self.nu < 0 or self.tau < 0:
            raise ValueError(f"Coherence quantities must be non-negative: {self}")
        if self.s_l > self.s_u:
            raise ValueError(f"s_l={self.s_l} exceeds s_u={self.s_u}")


def block_coherence(
    dictionary: BlockDictionary,
    users: Sequence[int] | None = None,
    *,
    pair_cap: int = DEFAULT_PAIR_CAP,
    subsample: bool = False,
    rng: np.random.Generator | None = None,
) -> float:
    users = np.arange(dictionary.N) if users is None else np.asarray(sorted(users), dtype=int)
    if len(users) < 2:
        return 0.0
    gains = dictionary.channels.gains[users]
    channel_terms = np.abs(gains.conj() @ gains.T) / dictionary.M
    norms = dictionary.precoders.operator_norms()[users]
    bounds = channel_terms * np.outer(norms, norms)

    first, second = np.triu_indices(len(users), k=1)
    if len(first) > pair_cap:
        if not subsample:
            raise SubsamplingRequired(
                f"{len(first)} block pairs exceed the cap of {pair_cap}; enable subsampling"
            )
        rng = rng if rng is not None else np.random.default_rng(0)
        chosen = rng.choice(len(first), pair_cap, replace=False)
        first, second = first[chosen], second[chosen]
        logger.info("Estimating block-coherence from %d sampled pairs", pair_cap)

    pair_bounds = bounds[first, second]
    best = 0.0
    for position in np.argsort(-pair_bounds, kind="stable"):
        if pair_bounds[position] <= best:
            break
        a, b = first[position], second[position]
        value = channel_terms[a, b] * dictionary.precoders.cross_norm(
            int(users[a]), int(users[b])
        )
        best = max(best, value)
    return best / dictionary.d


def sub_coherence(
    dictionary: BlockDictionary, users: Sequence[int] | None = None
) -> float:
    """Largest |inner product| between distinct columns of one block"""
    energies = dictionary.channels.column_energies()
    coherences = dictionary.precoders.column_coherences()
    if users is not None:
        users = list(users)
        energies, coherences = energies[users], coherences[users]
    if len(energies) == 0:
        return 0.0
    return float(np.max(energies * coherences))


def noise_correlation(
    dictionary: BlockDictionary,
    perturbation: np.ndarray,
    users: Sequence[int] | None = None,
) -> float:
    """tau = max_j ||B_j^H z||_2"""
    norms = dictionary.correlation_norms(perturbation)
    if users is not None:
        norms = norms[list(users)]
    return float(norms.max()) if len(norms) else 0.0


def _block_norm_range(blocks: np.ndarray, active: Iterable[int]) -> tuple[float, float]:
    norms = [float(np.linalg.norm(blocks[j])) for j in active]
    if not norms:
        return 0.0, 0.0
    return min(norms), max(norms)


def coherence_profile(
    dictionary: BlockDictionary,
    blocks: np.ndarray,
    noise: np.ndarray,
    support: Sequence[int],
    users: Sequence[int] | None = None,
    *,
    pair_cap: int = DEFAULT_PAIR_CAP,
    subsample: bool = False,
    rng: np.random.Generator | None = None,
) -> CoherenceProfile:
    """Measure the profile of a realization, optionally limited to ``users``.

    ``blocks`` is the (N, d) symbol array and ``noise`` the perturbation whose
    block correlations bound tau.
    """
    considered = list(range(dictionary.N)) if users is None else sorted(users)
    considered_set = set(considered)
    active = [j for j in sorted(int(j) for j in support) if j in considered_set]
    energies = dictionary.channels.column_energies()
    s_l, s_u = _block_norm_range(blocks, active)

    return CoherenceProfile(
        mu_B=block_coherence(
            dictionary, considered, pair_cap=pair_cap, subsample=subsample, rng=rng
        ),
        nu=sub_coherence(dictionary, considered),
        s_l=s_l,
        s_u=s_u,
        tau=noise_correlation(dictionary, noise, considered),
        energy_min=float(energies[active].min()) if active else 1.0,
        energy_max=float(energies[active].max()) if active else 1.0,
        energy_floor=float(energies[considered].min()) if considered else 1.0,
        subsampled=subsample and len(considered) * (len(considered) - 1) // 2 > pair_cap,
    )


def gram_bounds_hold(
    dictionary: BlockDictionary, profile: CoherenceProfile, tolerance: float = 1e-6
) -> bool:
    """Check the Gram-block bounds implied by mu_B and nu on every block pair.

    Off-diagonal blocks satisfy ||B_i^H B_j|| <= d mu_B, diagonal blocks
    e_j - (d-1) nu <= ||B_j^H B_j|| <= e_j + (d-1) nu with e_j = ||h_j||^2 / M.
    """
    d = dictionary.d
    energies = dictionary.channels.column_energies()
    channel_terms = (
        np.abs(dictionary.channels.gains.conj() @ dictionary.channels.gains.T)
        / dictionary.M
    )
    band = (d - 1) * profile.nu
    for i in range(dictionary.N):
        diagonal = energies[i] * dictionary.precoders.cross_norm(i, i)
        if not energies[i] - band - tolerance <= diagonal <= energies[i] + band + tolerance:
            return False
        for j in range(i + 1, dictionary.N):
            off_diagonal = channel_terms[i, j] * dictionary.precoders.cross_norm(i, j)
            if off_diagonal > d * profile.mu_B * (1 + tolerance) + tolerance:
                return False
    return True
