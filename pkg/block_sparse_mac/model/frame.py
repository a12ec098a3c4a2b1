from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from block_sparse_mac.model.channels import ChannelRealization
from block_sparse_mac.model.modulation import modulate
from block_sparse_mac.model.precoding import PrecoderSet
from block_sparse_mac.model.system_config import InvalidConfigError, SystemConfig
from block_sparse_mac.operator.block_dictionary import BlockDictionary
from block_sparse_mac.utils.rng import complex_normal


@dataclass(frozen=True, eq=False)
class FrameInstance:
    """One Monte-Carlo realization of the uplink frame.

    ``blocks`` holds the block-sparse symbol vector s as an (N, d) array;
    messages shorter than d are zero-padded at the end of their block.
    ``bits[k]`` and ``lengths[k]`` belong to user ``support[k]``.
    """

    support: np.ndarray
    lengths: np.ndarray
    bits: tuple[np.ndarray, ...]
    blocks: np.ndarray
    noise: np.ndarray
    received: np.ndarray

    def __post_init__(self):
        for array in (self.support, self.lengths, self.blocks, self.noise, self.received):
            array.setflags(write=False)

    @property
    def s(self) -> np.ndarray:
        return self.blocks.reshape(-1)

    @property
    def N_a(self) -> int:
        return len(self.support)

    def is_active(self, n: int) -> bool:
        return bool(np.any(self.support == n))

    def _position(self, n: int) -> int:
        return int(np.searchsorted(self.support, n))

    def message_length(self, n: int) -> int:
        return int(self.lengths[self._position(n)]) if self.is_active(n) else 0

    def message_bits(self, n: int) -> np.ndarray | None:
        return self.bits[self._position(n)] if self.is_active(n) else None

    def truth(self, n: int) -> np.ndarray | None:
        """Transmitted block of an active user, None for inactive users"""
        return self.blocks[n] if self.is_active(n) else None


def synthesize_frame(
    cfg: SystemConfig,
    precoders: PrecoderSet,
    channels: ChannelRealization,
    rng: np.random.Generator,
    *,
    support: Sequence[int] | None = None,
    noiseless: bool = False,
) -> FrameInstance:
    """Draw the active set, payloads and noise, and form y = sqrt(rho0 M) B s + z.

    Draw order: support, message lengths, payload bits per active user, noise.
    The noise is drawn even when ``noiseless`` is set, so that the remaining
    draws do not depend on it.
    """
    if support is None:
        active = np.sort(rng.choice(cfg.N, cfg.N_a, replace=False))
    else:
        active = np.array(sorted(support), dtype=int)
        if len(set(active.tolist())) != len(active) or np.any(active < 0) or np.any(
            active >= cfg.N
        ):
            raise InvalidConfigError(f"Invalid support {list(support)} for N={cfg.N}")

    low, high = cfg.message_length_range
    lengths = rng.integers(low, high + 1, size=len(active))

    bits_per_symbol = cfg.modulation.bits_per_symbol
    blocks = np.zeros((cfg.N, cfg.d), dtype=complex)
    payloads = []
    for user, length in zip(active, lengths):
        payload = rng.integers(0, 2, size=int(length) * bits_per_symbol, dtype=np.uint8)
        blocks[user, :length] = modulate(payload, cfg.modulation)
        payloads.append(payload)

    noise = complex_normal(rng, cfg.M * cfg.T)
    if noiseless:
        noise = np.zeros_like(noise)

    dictionary = BlockDictionary(precoders, channels)
    received = cfg.signal_scale * dictionary.apply_blocks(active, blocks[active]) + noise

    return FrameInstance(
        support=active,
        lengths=np.asarray(lengths, dtype=int),
        bits=tuple(payloads),
        blocks=blocks,
        noise=noise,
        received=received,
    )
