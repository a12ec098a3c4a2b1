from dataclasses import dataclass, field

import numpy as np

from block_sparse_mac.model.system_config import InvalidConfigError, SystemConfig
from block_sparse_mac.utils.rng import complex_normal

SUB_COHERENCE_FLOOR = 1e-12


def spectral_norm(
    matrix: np.ndarray, tolerance: float = 1e-8, max_iterations: int = 500
) -> float:
    """Largest singular value by power iteration on A^H A.

    The start vector is the normalized all-ones vector, so the result is
    deterministic for a given matrix.
    """
    if not np.any(matrix):
        return 0.0
    columns = matrix.shape[1]
    vector = np.full(columns, 1 / np.sqrt(columns), dtype=complex)
    estimate = 0.0
    for _ in range(max_iterations):
        image = matrix.conj().T @ (matrix @ vector)
        norm = float(np.linalg.norm(image))
        if norm == 0.0:
            return 0.0
        vector = image / norm
        previous, estimate = estimate, np.sqrt(norm)
        if abs(estimate - previous) <= tolerance * estimate:
            break
    return float(estimate)


@dataclass(frozen=True, eq=False)
class PrecoderSet:
    """Precoding matrices of all online users, shaped (N, T, d).

    Spectral norms of cross products P_i^H P_j are memoized, since precoders
    stay fixed while channels and supports are redrawn.
    """

    matrices: np.ndarray
    orthogonal: bool
    _cross_norms: dict[tuple[int, int], float] = field(
        default_factory=dict, init=False, repr=False
    )
    _cache: dict[str, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self.matrices.setflags(write=False)

    @property
    def N(self) -> int:
        return self.matrices.shape[0]

    @property
    def T(self) -> int:
        return self.matrices.shape[1]

    @property
    def d(self) -> int:
        return self.matrices.shape[2]

    def __getitem__(self, n: int) -> np.ndarray:
        return self.matrices[n]

    def cross_norm(self, i: int, j: int) -> float:
        """||P_i^H P_j||_2"""
        key = (i, j) if i <= j else (j, i)
        if key not in self._cross_norms:
            self._cross_norms[key] = spectral_norm(
                self.matrices[key[0]].conj().T @ self.matrices[key[1]]
            )
        return self._cross_norms[key]

    def operator_norms(self) -> np.ndarray:
        """||P_n||_2 for every user"""
        if "operator_norms" not in self._cache:
            if self.orthogonal:
                norms = np.ones(self.N)
            else:
                norms = np.sqrt([self.cross_norm(n, n) for n in range(self.N)])
            self._cache["operator_norms"] = norms
        return self._cache["operator_norms"]

    def column_coherences(self) -> np.ndarray:
        """max_{k != k'} |p_k^H p_k'| within every precoder"""
        if "column_coherences" not in self._cache:
            grams = np.einsum("ntk,ntl->nkl", self.matrices.conj(), self.matrices)
            off_diagonal = np.abs(grams)
            idx = np.arange(self.d)
            off_diagonal[:, idx, idx] = 0.0
            coherences = off_diagonal.max(axis=(1, 2))
            coherences[coherences < SUB_COHERENCE_FLOOR] = 0.0
            self._cache["column_coherences"] = coherences
        return self._cache["column_coherences"]


def draw_precoders(
    N: int, T: int, d: int, orthogonal: bool, rng: np.random.Generator
) -> PrecoderSet:
    if d >= T:
        raise InvalidConfigError(
            f"Cannot build T x d precoders with full column rank for d={d} >= T={T}"
        )
    draws = complex_normal(rng, (N, T, d))
    if orthogonal:
        matrices, _ = np.linalg.qr(draws)
    else:
        matrices = draws / np.linalg.norm(draws, axis=1, keepdims=True)
    return PrecoderSet(np.ascontiguousarray(matrices), orthogonal)


def generate_precoders(cfg: SystemConfig, rng: np.random.Generator) -> PrecoderSet:
    return draw_precoders(cfg.N, cfg.T, cfg.d, cfg.precoding_orthogonal, rng)
