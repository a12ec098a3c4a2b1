from dataclasses import dataclass

import numpy as np

from block_sparse_mac.model.frame import FrameInstance
from block_sparse_mac.model.modulation import demodulate
from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.recovery.recovery_result import RecoveryResult


@dataclass(frozen=True)
class TrialErrors:
    symbol_errors: int
    symbols: int
    frame_errors: int
    frames: int
    unidentified: int


def count_errors(
    result: RecoveryResult, frame: FrameInstance, cfg: SystemConfig
) -> TrialErrors:
    """Count symbol and frame errors of the active users.

    An active user missing from the detected blocks counts all symbols of its
    message as erroneous and one frame error. A detected user has a frame
    error when more than max(t_c, 0) of its bits are wrong.
    """
    correctable = max(cfg.t_c, 0)
    bits_per_symbol = cfg.modulation.bits_per_symbol
    detected = result.detected
    symbol_errors = frame_errors = unidentified = 0

    for position, user in enumerate(int(n) for n in frame.support):
        length = int(frame.lengths[position])
        if user not in detected:
            symbol_errors += length
            frame_errors += 1
            unidentified += 1
            continue
        decided = demodulate(result.estimates[user][:length], cfg.modulation)
        wrong = (decided != frame.bits[position]).reshape(length, bits_per_symbol)
        symbol_errors += int(np.count_nonzero(wrong.any(axis=1)))
        if int(np.count_nonzero(wrong)) > correctable:
            frame_errors += 1

    return TrialErrors(
        symbol_errors=symbol_errors,
        symbols=int(np.sum(frame.lengths)),
        frame_errors=frame_errors,
        frames=frame.N_a,
        unidentified=unidentified,
    )
