from collections.abc import Sequence
from enum import Enum

import numpy as np

from block_sparse_mac.codec.genie_codec import BlockDecoder
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.operator.least_squares import regularized_ls, restricted_ls
from block_sparse_mac.recovery.pursuit import TruthHandle
from block_sparse_mac.recovery.recovery_result import (
    IterationRecord,
    RecoveryFlags,
    RecoveryResult,
)


class OracleMode(Enum):
    LS = "ls"
    IC_MMSE = "ic-mmse"


def oracle_receiver(
    dictionary: BlockDictionary,
    y: np.ndarray,
    support: Sequence[int],
    cfg: SystemConfig,
    codec: BlockDecoder,
    truth: TruthHandle,
    mode: OracleMode,
) -> RecoveryResult:
    """Receivers that are told the active set.

    LS solves least squares over the true support once. IC-MMSE repeats MMSE
    estimation over the users not yet cancelled, decodes them and cancels the
    certified ones, until an iteration cancels nothing.
    """
    scale = cfg.signal_scale
    support = [int(j) for j in support]

    if mode is OracleMode.LS:
        solution = restricted_ls(dictionary, y, support, scale)
        residual = y - scale * dictionary.apply_blocks(support, solution.blocks)
        return RecoveryResult(
            support=tuple(support),
            estimates=solution.as_dict(),
            trace=(IterationRecord(None, float(np.linalg.norm(residual)), (), len(support)),),
            flags=RecoveryFlags(rank_deficient=solution.rank_deficient),
        )

    working = np.array(y, dtype=complex)
    remaining = list(support)
    frozen: dict[int, np.ndarray] = {}
    cancelled: list[int] = []
    estimates: dict[int, np.ndarray] = {}
    trace: list[IterationRecord] = []

    while remaining:
        ls_blocks = len(remaining)
        estimates = regularized_ls(dictionary, working, remaining, scale).as_dict()
        certified = {}
        for j, estimate in estimates.items():
            outcome = codec.decode(estimate, truth(j))
            if outcome.certified:
                certified[j] = outcome.block
        if certified:
            certified_indices = list(certified)
            working = working - scale * dictionary.apply_blocks(
                certified_indices, np.array([certified[j] for j in certified_indices])
            )
            frozen.update(certified)
            cancelled.extend(certified_indices)
            remaining = [j for j in remaining if j not in certified]
            for j in certified_indices:
                del estimates[j]
        residual = working
        if remaining:
            residual = working - scale * dictionary.apply_blocks(
                remaining, np.array([estimates[j] for j in remaining])
            )
        trace.append(
            IterationRecord(
                None, float(np.linalg.norm(residual)), tuple(certified), ls_blocks
            )
        )
        if not certified:
            break

    return RecoveryResult(
        support=tuple(remaining),
        estimates={**estimates, **frozen},
        trace=tuple(trace),
        cancelled=tuple(cancelled),
    )
