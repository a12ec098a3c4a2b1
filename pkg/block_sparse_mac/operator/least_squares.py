"""Least squares restricted to a set of dictionary blocks.

Solutions minimize ||y - scale * B_Lambda x||_2 with scale = sqrt(rho0 M).
Well-conditioned systems are solved through a Cholesky factor of the block
Gram matrix; otherwise the restricted dictionary is materialized and solved by
pivoted QR, with a minimum-norm solution when it is rank deficient.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, cholesky, lstsq, qr
from scipy.linalg import get_lapack_funcs, solve_triangular

from block_sparse_mac.operator.block_dictionary import BlockDictionary

logger = logging.getLogger(__name__)

GRAM_CONDITION_LIMIT = 1e6


class SolveMethod(Enum):
    CHOLESKY = "cholesky"
    QR = "qr"
    MINIMUM_NORM = "minimum-norm"


@dataclass(frozen=True, eq=False)
class LeastSquaresSolution:
    indices: tuple[int, ...]
    blocks: np.ndarray
    method: SolveMethod

    @property
    def rank_deficient(self) -> bool:
        return self.method is SolveMethod.MINIMUM_NORM

    def as_dict(self) -> dict[int, np.ndarray]:
        return {j: self.blocks[position] for position, j in enumerate(self.indices)}


def _condition_estimate(factor: np.ndarray, gram_norm: float) -> float:
    """1-norm condition number of G = L L^H estimated from its lower Cholesky factor L.

    ``gram_norm`` is ||G||_1. Uses the LAPACK pocon estimator of ||G^-1||_1.
    """
    (pocon,) = get_lapack_funcs(("pocon",), (factor,))
    rcond, info = pocon(factor, gram_norm, uplo="L")
    if info != 0 or rcond <= 0.0:
        return np.inf
    return float(1.0 / rcond)


def _empty_solution(dictionary: BlockDictionary) -> LeastSquaresSolution:
    return LeastSquaresSolution((), np.zeros((0, dictionary.d), dtype=complex), SolveMethod.CHOLESKY)


def solve_by_qr(
    dictionary: BlockDictionary, y: np.ndarray, indices: Sequence[int], scale: float
) -> LeastSquaresSolution:
    indices = tuple(indices)
    if not indices:
        return _empty_solution(dictionary)
    matrix = scale * dictionary.materialize(indices, cap=None)
    q, r, permutation = qr(matrix, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    tolerance = max(matrix.shape) * np.finfo(float).eps * diagonal[0]
    rank = int(np.sum(diagonal > tolerance))
    if rank < matrix.shape[1]:
        logger.debug(
            "Restricted dictionary over %d blocks has rank %d < %d, using the minimum-norm solution",
            len(indices),
            rank,
            matrix.shape[1],
        )
        solution, *_ = lstsq(matrix, y, lapack_driver="gelsd")
        method = SolveMethod.MINIMUM_NORM
    else:
        permuted = solve_triangular(r, q.conj().T @ y)
        solution = np.empty_like(permuted)
        solution[permutation] = permuted
        method = SolveMethod.QR
    return LeastSquaresSolution(indices, solution.reshape(len(indices), dictionary.d), method)


def restricted_ls(
    dictionary: BlockDictionary, y: np.ndarray, indices: Sequence[int], scale: float
) -> LeastSquaresSolution:
    """Solve from scratch over the blocks in ``indices``"""
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        raise ValueError(f"Block indices must be distinct, got {indices}")
    if len(indices) * dictionary.d > dictionary.M * dictionary.T:
        raise ValueError(
            f"{len(indices)} blocks of length {dictionary.d} exceed the MT={dictionary.M * dictionary.T} observations"
        )
    solver = IncrementalLeastSquares(dictionary, y, scale)
    solver.reset(indices, y)
    return solver.solve()


class IncrementalLeastSquares:
    """Cholesky factor of B_Lambda^H B_Lambda that grows one block at a time.

    Removing blocks (after cancellation) is handled by refactoring from scratch
    through ``reset``. Once the Gram matrix is found ill-conditioned the solver
    stays on the QR path until the next reset.
    """

    def __init__(self, dictionary: BlockDictionary, y: np.ndarray, scale: float):
        self.dictionary = dictionary
        self.scale = scale
        self._y = y
        self.indices: list[int] = []
        self._factor = np.zeros((0, 0), dtype=complex)
        self._rhs = np.zeros(0, dtype=complex)
        self._column_sums = np.zeros(0)
        self._use_qr = False

    def reset(self, indices: Sequence[int], y: np.ndarray) -> None:
        self._y = y
        self.indices = []
        self._factor = np.zeros((0, 0), dtype=complex)
        self._rhs = np.zeros(0, dtype=complex)
        self._column_sums = np.zeros(0)
        self._use_qr = False
        for j in indices:
            self.append(j)

    def append(self, j: int) -> None:
        if j in self.indices:
            raise ValueError(f"Block {j} is already part of the least squares problem")
        previous = self.indices
        self.indices = previous + [j]
        if self._use_qr:
            return

        d = self.dictionary.d
        cross = self.dictionary.cross_gram(previous, j)
        diagonal = self.dictionary.gram_block(j, j)
        try:
            lower = solve_triangular(self._factor, cross, lower=True) if previous else cross
            schur = diagonal - lower.conj().T @ lower
            corner = cholesky(schur, lower=True)
        except (LinAlgError, ValueError):
            self._switch_to_qr()
            return

        size = len(previous) * d
        factor = np.zeros((size + d, size + d), dtype=complex)
        factor[:size, :size] = self._factor
        factor[size:, :size] = lower.conj().T
        factor[size:, size:] = corner
        column_sums = np.concatenate(
            [
                self._column_sums + np.abs(cross).sum(axis=1),
                np.abs(cross).sum(axis=0) + np.abs(diagonal).sum(axis=0),
            ]
        )
        if _condition_estimate(factor, float(column_sums.max())) >= GRAM_CONDITION_LIMIT:
            self._switch_to_qr()
            return
        self._factor = factor
        self._column_sums = column_sums
        self._rhs = np.concatenate([self._rhs, self.dictionary.block_correlate(self._y, j)])

    def _switch_to_qr(self) -> None:
        logger.debug(
            "Gram matrix over %d blocks is ill-conditioned, falling back to QR",
            len(self.indices),
        )
        self._use_qr = True

    def solve(self) -> LeastSquaresSolution:
        if not self.indices:
            return _empty_solution(self.dictionary)
        if self._use_qr:
            return solve_by_qr(self.dictionary, self._y, self.indices, self.scale)
        solution = cho_solve((self._factor, True), self._rhs) / self.scale
        return LeastSquaresSolution(
            tuple(self.indices),
            solution.reshape(len(self.indices), self.dictionary.d),
            SolveMethod.CHOLESKY,
        )


def regularized_ls(
    dictionary: BlockDictionary, y: np.ndarray, indices: Sequence[int], scale: float
) -> LeastSquaresSolution:
    """Linear MMSE estimate (scale^2 G + I)^-1 scale B_Lambda^H y for unit-power symbols and noise"""
    indices = tuple(indices)
    if not indices:
        return _empty_solution(dictionary)
    gram = dictionary.restricted_gram(indices)
    system = scale**2 * gram + np.eye(gram.shape[0])
    rhs = scale * dictionary.correlate(y, indices).reshape(-1)
    solution = cho_solve(cho_factor(system, lower=True), rhs)
    return LeastSquaresSolution(
        indices, solution.reshape(len(indices), dictionary.d), SolveMethod.CHOLESKY
    )
