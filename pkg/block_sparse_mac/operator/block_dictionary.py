"""Matrix-free block dictionary.

Block n of the MT x Nd dictionary is B_n = (P_n kron h_n) / sqrt(M). A vector of
length MT is the column-stacked vectorization of an M x T matrix R, that is
``r[m + M * t] == R[m, t]``, so that

    B_n^H r = vec(h_n^H R conj(P_n)) / sqrt(M)
    B x     = vec(H^T V) / sqrt(M),   V[n, t] = sum_k P_n[t, k] x_n[k]

and no product with B ever needs the dictionary in memory.
"""

from collections.abc import Sequence

import numpy as np

from block_sparse_mac.model.channels import ChannelRealization
from block_sparse_mac.model.precoding import PrecoderSet

DEFAULT_MATERIALIZATION_CAP = 10**7


class MaterializationCapExceeded(Exception):
    pass


class BlockDictionary:
    def __init__(self, precoders: PrecoderSet, channels: ChannelRealization):
        if precoders.N != channels.N:
            raise ValueError(
                f"{precoders.N} precoders do not match {channels.N} channel vectors"
            )
        self.precoders = precoders
        self.channels = channels
        self.M = channels.M
        self.N = precoders.N
        self.T = precoders.T
        self.d = precoders.d
        self._sqrt_m = np.sqrt(self.M)

    @property
    def shape(self) -> tuple[int, int]:
        return self.M * self.T, self.N * self.d

    def _as_grid(self, r: np.ndarray) -> np.ndarray:
        return np.asarray(r).reshape(self.M, self.T, order="F")

    def block_correlate(self, r: np.ndarray, j: int) -> np.ndarray:
        """B_j^H r"""
        weighted = self.channels.gains[j].conj() @ self._as_grid(r)
        return weighted @ self.precoders[j].conj() / self._sqrt_m

    def correlate(
        self, r: np.ndarray, indices: Sequence[int] | None = None
    ) -> np.ndarray:
        """B_j^H r for every block j in ``indices`` (all blocks by default), shaped (len, d)"""
        gains = self.channels.gains
        matrices = self.precoders.matrices
        if indices is not None:
            gains = gains[list(indices)]
            matrices = matrices[list(indices)]
        weighted = gains.conj() @ self._as_grid(r)
        return np.einsum("nt,ntd->nd", weighted, matrices.conj()) / self._sqrt_m

    def correlation_norms(self, r: np.ndarray) -> np.ndarray:
        """||B_j^H r||_2 for every block"""
        return np.linalg.norm(self.correlate(r), axis=1)

    def adjoint(self, r: np.ndarray) -> np.ndarray:
        return self.correlate(r).reshape(-1)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """B x for a full Nd-vector (or an (N, d) array of blocks)"""
        return self.apply_blocks(range(self.N), np.asarray(x).reshape(self.N, self.d))

    def apply_blocks(self, indices: Sequence[int], blocks: np.ndarray) -> np.ndarray:
        """B_Lambda x_Lambda, with ``blocks`` shaped (len(indices), d)"""
        indices = list(indices)
        if not indices:
            return np.zeros(self.M * self.T, dtype=complex)
        blocks = np.asarray(blocks).reshape(len(indices), self.d)
        precoded = np.einsum("ntd,nd->nt", self.precoders.matrices[indices], blocks)
        grid = self.channels.gains[indices].T @ precoded / self._sqrt_m
        return grid.reshape(-1, order="F")

    def gram_block(self, i: int, j: int) -> np.ndarray:
        """B_i^H B_j = (h_i^H h_j / M) P_i^H P_j"""
        channel_term = self.channels.gains[i].conj() @ self.channels.gains[j] / self.M
        return channel_term * (self.precoders[i].conj().T @ self.precoders[j])

    def cross_gram(self, indices: Sequence[int], j: int) -> np.ndarray:
        """B_Lambda^H B_j, shaped (len(indices) * d, d)"""
        indices = list(indices)
        if not indices:
            return np.zeros((0, self.d), dtype=complex)
        channel_terms = self.channels.gains[indices].conj() @ self.channels.gains[j]
        products = np.einsum(
            "ntk,tl->nkl", self.precoders.matrices[indices].conj(), self.precoders[j]
        )
        scaled = products * (channel_terms / self.M)[:, None, None]
        return scaled.reshape(len(indices) * self.d, self.d)

    def restricted_gram(self, indices: Sequence[int]) -> np.ndarray:
        """B_Lambda^H B_Lambda"""
        indices = list(indices)
        size = len(indices) * self.d
        gram = np.empty((size, size), dtype=complex)
        for position, j in enumerate(indices):
            gram[:, position * self.d : (position + 1) * self.d] = self.cross_gram(
                indices, j
            )
        return gram

    def block_matrix(self, j: int) -> np.ndarray:
        return np.kron(self.precoders[j], self.channels.gains[j][:, None]) / self._sqrt_m

    def materialize(
        self,
        indices: Sequence[int] | None = None,
        cap: int | None = DEFAULT_MATERIALIZATION_CAP,
    ) -> np.ndarray:
        """Explicit (MT) x (|indices| d) matrix. Meant for oracles and fallbacks."""
        indices = list(range(self.N)) if indices is None else list(indices)
        rows, columns = self.M * self.T, len(indices) * self.d
        if cap is not None and rows * columns > cap:
            raise MaterializationCapExceeded(
                f"Materializing {rows} x {columns} entries exceeds the cap of {cap}"
            )
        if not indices:
            return np.zeros((rows, 0), dtype=complex)
        return np.hstack([self.block_matrix(j) for j in indices])
