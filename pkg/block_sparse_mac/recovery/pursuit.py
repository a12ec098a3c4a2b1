"""Greedy block pursuit detectors.

Each iteration selects the unselected block with the largest residual
correlation ||B_j^H r||_2 (lowest index on ties), re-solves least squares over
the selected blocks and updates the residual. Selected blocks are masked out
of later selections. The interference-cancelling variant additionally decodes
every least-squares block, subtracts certified blocks from the working copy of
y and drops them from later least-squares problems.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Callable

import numpy as np
from typing_extensions import override

from block_sparse_mac.codec.genie_codec import BlockDecoder
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.operator.least_squares import IncrementalLeastSquares
from block_sparse_mac.recovery.recovery_result import (
    IterationRecord,
    RecoveryFlags,
    RecoveryResult,
)

logger = logging.getLogger(__name__)

TruthHandle = Callable[[int], np.ndarray | None]


def _stack(blocks: dict[int, np.ndarray], indices: list[int], d: int) -> np.ndarray:
    if not indices:
        return np.zeros((0, d), dtype=complex)
    return np.array([blocks[j] for j in indices])


class BlockPursuit(ABC):
    def __init__(self, dictionary: BlockDictionary, cfg: SystemConfig):
        self.dictionary = dictionary
        self.cfg = cfg

    @abstractmethod
    def certify(self, estimates: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
        """Return the certified blocks among this iteration's estimates"""
        pass

    def run(self, y: np.ndarray) -> RecoveryResult:
        dictionary = self.dictionary
        scale = self.cfg.signal_scale
        threshold = self.cfg.early_stop_threshold

        available = np.ones(dictionary.N, dtype=bool)
        working = np.array(y, dtype=complex)
        residual = working
        solver = IncrementalLeastSquares(dictionary, working, scale)

        estimates: dict[int, np.ndarray] = {}
        frozen: dict[int, np.ndarray] = {}
        cancelled: list[int] = []
        trace: list[IterationRecord] = []
        rank_deficient = False
        early_stopped = False

        for _ in range(min(self.cfg.K, dictionary.N)):
            norms = dictionary.correlation_norms(residual)
            norms[~available] = -np.inf
            selected = int(np.argmax(norms))
            available[selected] = False

            solver.append(selected)
            ls_blocks = len(solver.indices)
            solution = solver.solve()
            rank_deficient |= solution.rank_deficient
            estimates = solution.as_dict()

            certified = self.certify(estimates)
            if certified:
                certified_indices = list(certified)
                working = working - scale * dictionary.apply_blocks(
                    certified_indices, _stack(certified, certified_indices, dictionary.d)
                )
                frozen.update(certified)
                cancelled.extend(certified_indices)
                for j in certified_indices:
                    del estimates[j]
                solver.reset([j for j in solver.indices if j not in certified], working)

            remaining = list(estimates)
            residual = working - scale * dictionary.apply_blocks(
                remaining, _stack(estimates, remaining, dictionary.d)
            )
            residual_norm = float(np.linalg.norm(residual))
            trace.append(
                IterationRecord(selected, residual_norm, tuple(certified), ls_blocks)
            )

            if threshold is not None and residual_norm < threshold:
                logger.debug(
                    "Residual %.3e below %.3e after %d iterations",
                    residual_norm,
                    threshold,
                    len(trace),
                )
                early_stopped = True
                break

        return RecoveryResult(
            support=tuple(solver.indices),
            estimates={**estimates, **frozen},
            trace=tuple(trace),
            cancelled=tuple(cancelled),
            flags=RecoveryFlags(rank_deficient=rank_deficient, early_stopped=early_stopped),
        )


class BlockOrthogonalMatchingPursuit(BlockPursuit):
    @override
    def certify(self, estimates: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
        return {}


class InterferenceCancellingPursuit(BlockPursuit):
    def __init__(
        self,
        dictionary: BlockDictionary,
        cfg: SystemConfig,
        codec: BlockDecoder,
        truth: TruthHandle,
    ):
        super().__init__(dictionary, cfg)
        self.codec = codec
        self.truth = truth

    @override
    def certify(self, estimates: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
        certified = {}
        for j, estimate in estimates.items():
            outcome = self.codec.decode(estimate, self.truth(j))
            if outcome.certified:
                certified[j] = outcome.block
        return certified


def bomp(dictionary: BlockDictionary, y: np.ndarray, cfg: SystemConfig) -> RecoveryResult:
    return BlockOrthogonalMatchingPursuit(dictionary, cfg).run(y)


def icbomp(
    dictionary: BlockDictionary,
    y: np.ndarray,
    cfg: SystemConfig,
    codec: BlockDecoder,
    truth: TruthHandle,
) -> RecoveryResult:
    return InterferenceCancellingPursuit(dictionary, cfg, codec, truth).run(y)
