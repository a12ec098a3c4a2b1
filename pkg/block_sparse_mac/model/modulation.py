"""Gray-mapped QPSK and BPSK.

QPSK maps the bit pair (b0, b1) to ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2), BPSK maps
b to 1 - 2 b. Demodulation slices each component at zero; a component that is
exactly zero decides for bit 0.
"""

import numpy as np

from block_sparse_mac.model.system_config import Modulation


class ModulationError(ValueError):
    pass


def modulate(bits: np.ndarray, modulation: Modulation) -> np.ndarray:
    raw = np.asarray(bits)
    invalid = ~np.isin(raw, (0, 1))
    if invalid.any():
        raise ModulationError(f"Bits must be 0 or 1, got {np.unique(raw[invalid])}")
    bits = raw.astype(np.uint8)
    if bits.size % modulation.bits_per_symbol:
        raise ModulationError(
            f"{bits.size} bits cannot be split into {modulation.name} symbols"
            f" of {modulation.bits_per_symbol} bits"
        )
    signs = 1.0 - 2.0 * bits
    if modulation is Modulation.BPSK:
        return signs.astype(complex)
    pairs = signs.reshape(-1, 2)
    return (pairs[:, 0] + 1j * pairs[:, 1]) / np.sqrt(2)


def demodulate(symbols: np.ndarray, modulation: Modulation) -> np.ndarray:
    symbols = np.asarray(symbols)
    if modulation is Modulation.BPSK:
        return (symbols.real < 0).astype(np.uint8)
    bits = np.empty((symbols.size, 2), dtype=np.uint8)
    bits[:, 0] = symbols.real < 0
    bits[:, 1] = symbols.imag < 0
    return bits.reshape(-1)


def constellation(modulation: Modulation) -> np.ndarray:
    patterns = np.array(
        [[(k >> shift) & 1 for shift in reversed(range(modulation.bits_per_symbol))]
         for k in range(2**modulation.bits_per_symbol)],
        dtype=np.uint8,
    )
    return modulate(patterns.reshape(-1), modulation)
