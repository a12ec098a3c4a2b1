"""Information-theoretic necessary condition for recovering a frame.

The bits to recover are the active-set index, log2 C(N, N_a), plus the payload
bits. Recovery with frame error probability p_e requires
S <= (H(p_e) + C) / (1 - p_e) with C = log2 det(I + rho0 B_I^H B_I).
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import entr, gammaln

from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary

DEFAULT_DETERMINANT_CAP = 4096


class DeterminantTooLarge(Exception):
    pass


def log2_binomial(n: int, k: int) -> float:
    return float((gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)) / math.log(2))


def binary_entropy(p: float) -> float:
    return float((entr(p) + entr(1 - p)) / math.log(2))


def frame_capacity(
    dictionary: BlockDictionary,
    support: Sequence[int],
    rho0: float,
    cap: int = DEFAULT_DETERMINANT_CAP,
) -> float:
    """log2 det(I + rho0 B_I^H B_I), equal to log2 det(I + rho0 B_I B_I^H)"""
    size = len(support) * dictionary.d
    if size > cap:
        raise DeterminantTooLarge(
            f"A {size} x {size} determinant exceeds the cap of {cap};"
            " reduce N_a or d for the capacity evaluation"
        )
    gram = dictionary.restricted_gram(support)
    _, log_det = np.linalg.slogdet(np.eye(size) + rho0 * gram)
    return float(log_det / math.log(2))


@dataclass(frozen=True)
class Theorem3Report:
    S_lower: float
    capacity: float
    p_e: float

    @property
    def rhs(self) -> float:
        return (binary_entropy(self.p_e) + self.capacity) / (1 - self.p_e)

    @property
    def satisfiable(self) -> bool:
        return self.S_lower <= self.rhs


def theorem3_report(
    cfg: SystemConfig,
    dictionary: BlockDictionary,
    support: Sequence[int],
    payload_bits: Sequence[int],
    p_e: float,
    cap: int = DEFAULT_DETERMINANT_CAP,
) -> Theorem3Report:
    """``payload_bits`` lists the payload size b_i of every active user"""
    if len(support) != len(payload_bits):
        raise ValueError(
            f"{len(payload_bits)} payload sizes given for {len(support)} active users"
        )
    if not 0 <= p_e < 1:
        raise ValueError(f"p_e must lie in [0, 1), got {p_e}")
    S_lower = log2_binomial(cfg.N, len(support)) + float(sum(payload_bits))
    capacity = frame_capacity(dictionary, support, cfg.rho0, cap)
    return Theorem3Report(S_lower=S_lower, capacity=capacity, p_e=p_e)
