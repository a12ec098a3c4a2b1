import numpy as np

from block_sparse_mac.model.modulation import demodulate
from block_sparse_mac.model.system_config import Modulation
from block_sparse_mac.recovery.recovery_result import RecoveryResult


def demodulate_result(
    result: RecoveryResult, modulation: Modulation
) -> dict[int, np.ndarray]:
    """Hard-decision bits of every detected block"""
    return {
        j: demodulate(result.estimates[j], modulation)
        for j in sorted(result.detected)
    }
