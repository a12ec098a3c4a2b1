"""Error correction and detection of one decoded block.

The genie codec stands in for a t_c-error-correcting code with a CRC that never
misses and never raises a false alarm: a block whose hard decisions differ
from the transmitted message in at most t_c bits is returned as the transmitted
block and certified, any other block passes through unchanged.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from typing_extensions import Self, override

from block_sparse_mac.codec.correction_limits import CORRECTION_LIMITS
from block_sparse_mac.model.modulation import demodulate
from block_sparse_mac.model.system_config import Modulation, SystemConfig


@dataclass(frozen=True)
class BlockCode:
    name: str
    n: int
    k: int
    t: int

    @property
    def rate(self) -> float:
        return self.k / self.n


KNOWN_CODES = (
    BlockCode("shortened BCH(472,400)", n=472, k=400, t=8),
    BlockCode("shortened BCH(69,62)", n=69, k=62, t=1),
)


def code_for_message(message_bits: int) -> BlockCode | None:
    for code in KNOWN_CODES:
        if code.k == message_bits:
            return code
    return None


@dataclass(frozen=True)
class CodecSpec:
    t_c: int
    modulation: Modulation
    d: int

    @property
    def bits_per_symbol(self) -> int:
        return self.modulation.bits_per_symbol

    @property
    def certifies(self) -> bool:
        return self.t_c != CORRECTION_LIMITS.NEVER_CERTIFIES

    @classmethod
    def from_config(cls, cfg: SystemConfig) -> Self:
        return cls(cfg.t_c, cfg.modulation, cfg.d)

    @classmethod
    def for_message(cls, d: int, modulation: Modulation) -> Self:
        """Spec with the correction capability of the known code for d-symbol messages"""
        code = code_for_message(d * modulation.bits_per_symbol)
        if code is None:
            raise ValueError(
                f"No known code for {d * modulation.bits_per_symbol}-bit messages"
            )
        return cls(code.t, modulation, d)


@dataclass(frozen=True, eq=False)
class DecodeOutcome:
    block: np.ndarray
    certified: bool
    bit_errors: int | None


def count_bit_errors(
    estimate: np.ndarray, truth: np.ndarray, modulation: Modulation
) -> int:
    """Bit errors of the hard decisions on ``estimate`` over the message carried by ``truth``.

    The message length is the number of leading nonzero symbols of ``truth``.
    """
    length = int(np.count_nonzero(truth))
    decided = demodulate(estimate[:length], modulation)
    sent = demodulate(truth[:length], modulation)
    return int(np.count_nonzero(decided != sent))


def decode(
    estimate: np.ndarray, truth: np.ndarray | None, spec: CodecSpec
) -> DecodeOutcome:
    if len(estimate) != spec.d or (truth is not None and len(truth) != spec.d):
        raise ValueError(f"Decoded blocks must have length d={spec.d}")
    if truth is None:
        return DecodeOutcome(estimate, certified=False, bit_errors=None)
    bit_errors = count_bit_errors(estimate, truth, spec.modulation)
    if spec.certifies and bit_errors <= spec.t_c:
        return DecodeOutcome(truth.copy(), certified=True, bit_errors=bit_errors)
    return DecodeOutcome(estimate, certified=False, bit_errors=bit_errors)


class BlockDecoder(ABC):
    @abstractmethod
    def decode(self, estimate: np.ndarray, truth: np.ndarray | None) -> DecodeOutcome:
        pass


class GenieCodec(BlockDecoder):
    def __init__(self, spec: CodecSpec):
        self.spec = spec

    @override
    def decode(self, estimate: np.ndarray, truth: np.ndarray | None) -> DecodeOutcome:
        return decode(estimate, truth, self.spec)
