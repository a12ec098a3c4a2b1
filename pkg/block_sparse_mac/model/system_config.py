import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

from typing_extensions import Self

logger = logging.getLogger(__name__)


class InvalidConfigError(ValueError):
    pass


class Modulation(Enum):
    QPSK = "qpsk"
    BPSK = "bpsk"

    @property
    def bits_per_symbol(self) -> int:
        return 2 if self is Modulation.QPSK else 1

    @property
    def min_distance(self) -> float:
        """Minimum distance between two constellation points (l_min)"""
        return math.sqrt(2) if self is Modulation.QPSK else 2.0

    @property
    def half_distance_squared(self) -> float:
        """(l_min / 2)^2, kept exact"""
        return 0.5 if self is Modulation.QPSK else 1.0


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters of one uplink frame.

    Message lengths are counted in symbols. When ``message_length_min`` and
    ``message_length_max`` are unset every active user sends ``d`` symbols.
    """

    M: int
    N: int
    N_a: int
    d: int
    T: int
    rho0: float
    K: int
    t_c: int
    seed: int
    precoding_orthogonal: bool = True
    modulation: Modulation = Modulation.QPSK
    message_length_min: int | None = None
    message_length_max: int | None = None
    early_stop_threshold: float | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for name in ("M", "N", "N_a", "d", "T", "K"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise InvalidConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.d >= self.T:
            raise InvalidConfigError(
                f"Block length d={self.d} must be smaller than the frame length T={self.T}"
            )
        if self.N_a > self.N:
            raise InvalidConfigError(
                f"N_a={self.N_a} active users exceed the N={self.N} online users"
            )
        if self.K > self.max_users:
            raise InvalidConfigError(
                f"K={self.K} iterations exceed floor(MT/d)={self.max_users}"
            )
        if not self.rho0 > 0:
            raise InvalidConfigError(f"rho0 must be positive, got {self.rho0}")
        if self.t_c < -1:
            raise InvalidConfigError(f"t_c must be -1 (never certifies) or >= 0, got {self.t_c}")
        if self.seed < 0:
            raise InvalidConfigError(f"seed must be non-negative, got {self.seed}")
        low, high = self.message_length_range
        if not 1 <= low <= high <= self.d:
            raise InvalidConfigError(
                f"Message lengths must satisfy 1 <= min <= max <= d={self.d}, got [{low}, {high}]"
            )
        if self.early_stop_threshold is not None and self.early_stop_threshold < 0:
            raise InvalidConfigError(
                f"early_stop_threshold must be non-negative, got {self.early_stop_threshold}"
            )
        if not self.is_underdetermined:
            logger.warning(
                "MT=%d >= Nd=%d: the configuration is not under-determined",
                self.M * self.T,
                self.N * self.d,
            )

    @property
    def es_n0_db(self) -> float:
        return 10 * math.log10(self.rho0)

    def with_es_n0_db(self, es_n0_db: float) -> Self:
        return replace(self, rho0=10 ** (es_n0_db / 10))

    @property
    def max_users(self) -> int:
        return (self.M * self.T) // self.d

    @property
    def is_underdetermined(self) -> bool:
        return self.M * self.T < self.N * self.d

    @property
    def signal_scale(self) -> float:
        """sqrt(rho0 * M), the amplitude in front of B*s"""
        return math.sqrt(self.rho0 * self.M)

    @property
    def message_length_range(self) -> tuple[int, int]:
        low = self.d if self.message_length_min is None else self.message_length_min
        high = self.d if self.message_length_max is None else self.message_length_max
        return low, high

    @property
    def bits_per_message(self) -> int:
        """Payload bits of a full-length message"""
        return self.d * self.modulation.bits_per_symbol
