"""Sylvester-Hadamard matrices, binary illumination patterns, and the fast
Walsh-Hadamard transform.

All orderings are natural (Sylvester) order; indices are 0-based. Individual
matrix rows are generated on demand from the popcount-parity identity
H(i, j) = (-1)^popcount(i & j), so pattern construction never materializes
the full n^2 x n^2 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Largest order build_matrix will fully materialize (order^2 int8 entries).
MAX_MATERIALIZED_ORDER = 8192


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def build_matrix(k: int, max_order: int = MAX_MATERIALIZED_ORDER) -> np.ndarray:
    """Return the order-2^k Sylvester-Hadamard matrix as an int8 array.

    H_{2^k} = H_{2^(k-1)} kron H_2, with H_2 = [[1, 1], [1, -1]].
    """
    if k < 1:
        raise ValueError("order exponent k must be >= 1 (lowest order is 2)")
    order = 1 << k
    if order > max_order:
        raise ValueError(
            f"order {order} exceeds materialization budget {max_order}"
        )
    h2 = np.array([[1, 1], [1, -1]], dtype=np.int8)
    m = h2
    for _ in range(k - 1):
        m = np.kron(m, h2)
    return m


def hadamard_element(i: int, j: int) -> int:
    """Entry (i, j) of the Sylvester-Hadamard matrix, on demand."""
    return -1 if (int(i) & int(j)).bit_count() & 1 else 1


def hadamard_row(order: int, k: int) -> np.ndarray:
    """Row k of the order-N Sylvester-Hadamard matrix as +/-1 int8."""
    if not is_power_of_two(order):
        raise ValueError(f"order must be a power of two, got {order}")
    if not 0 <= k < order:
        raise IndexError(f"row index {k} out of range for order {order}")
    j = np.arange(order, dtype=np.uint32)
    parity = np.bitwise_count(j & np.uint32(k)) & 1
    return (1 - 2 * parity).astype(np.int8)


@dataclass(frozen=True)
class Pattern:
    """An n x n binary illumination mask from one row of H_{n^2}.

    cells(r, c) = 1 iff H_{n^2}(index, r*n + c) = +1 (row-major reshape).
    """

    index: int
    side: int
    cells: np.ndarray
    polarity: str = "positive"

    def complement(self) -> "Pattern":
        flipped = "complement" if self.polarity == "positive" else "positive"
        return Pattern(self.index, self.side, 1 - self.cells, flipped)


def pattern_cells(n: int, k: int) -> np.ndarray:
    """Binary n x n cells for pattern index k, without the dataclass wrapper."""
    if not is_power_of_two(n):
        raise ValueError(f"pattern side must be a power of two, got {n}")
    if not 0 <= k < n * n:
        raise IndexError(f"pattern index {k} out of range for side {n}")
    row = hadamard_row(n * n, k)
    return ((row > 0).astype(np.uint8)).reshape(n, n)


def pattern_from_row(n: int, k: int) -> Pattern:
    """Build the pattern obtained by reshaping row k of H_{n^2} row-major."""
    return Pattern(index=k, side=n, cells=pattern_cells(n, k))


def fwht(v: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform H_N . v, natural order.

    O(N log N); fwht(fwht(v)) == N * v.
    """
    a = np.array(v, dtype=np.float64)
    if a.ndim != 1:
        raise ValueError("fwht expects a 1-D vector")
    n = a.shape[0]
    if not is_power_of_two(n):
        raise ValueError(f"fwht length must be a power of two, got {n}")
    h = 1
    while h < n:
        b = a.reshape(-1, 2, h)
        top = b[:, 0, :].copy()
        b[:, 0, :] = top + b[:, 1, :]
        b[:, 1, :] = top - b[:, 1, :]
        h *= 2
    return a
