from dataclasses import dataclass

import numpy as np

from block_sparse_mac.model.system_config import SystemConfig
from block_sparse_mac.utils.rng import complex_normal


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Channel vectors of all online users. Row n of ``gains`` is h_n."""

    gains: np.ndarray

    def __post_init__(self):
        self.gains.setflags(write=False)

    @property
    def N(self) -> int:
        return self.gains.shape[0]

    @property
    def M(self) -> int:
        return self.gains.shape[1]

    def column_energies(self) -> np.ndarray:
        """||h_n||^2 / M, the squared norm of every column of block n"""
        return np.sum(np.abs(self.gains) ** 2, axis=1) / self.M


def generate_channels(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    return ChannelRealization(complex_normal(rng, (cfg.N, cfg.M)))
