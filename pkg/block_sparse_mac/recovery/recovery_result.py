from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class IterationRecord:
    selected: int | None
    residual_norm: float
    cancelled: tuple[int, ...]
    ls_blocks: int


@dataclass(frozen=True)
class RecoveryFlags:
    rank_deficient: bool = False
    early_stopped: bool = False

    @property
    def any(self) -> bool:
        return self.rank_deficient or self.early_stopped


@dataclass(frozen=True, eq=False)
class RecoveryResult:
    """Output of a detector.

    ``support`` lists the blocks still carried by least squares, in selection
    order; ``cancelled`` lists the certified blocks in cancellation order.
    ``estimates`` holds a block for every index of both.
    """

    support: tuple[int, ...]
    estimates: Mapping[int, np.ndarray]
    trace: tuple[IterationRecord, ...]
    cancelled: tuple[int, ...] = ()
    flags: RecoveryFlags = field(default_factory=RecoveryFlags)

    @property
    def detected(self) -> frozenset[int]:
        return frozenset(self.support) | frozenset(self.cancelled)

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def residual_norm(self) -> float:
        return self.trace[-1].residual_norm if self.trace else float("nan")

    def estimate_blocks(self, N: int, d: int) -> np.ndarray:
        """The estimate as an (N, d) array, zero outside the detected blocks"""
        blocks = np.zeros((N, d), dtype=complex)
        for j, block in self.estimates.items():
            blocks[j] = block
        return blocks
