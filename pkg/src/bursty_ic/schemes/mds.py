"""Vandermonde MDS combinations over GF(p).

Combination ``i`` of symbols ``s_0..s_{m-1}`` is the polynomial
``sum_j s_j z_i**j`` evaluated at point ``z_i``. Any ``m`` combinations taken
at distinct points are jointly invertible.
"""

from __future__ import annotations

import numpy as np

from ..gf import DEFAULT_PRIME, poly_eval, vandermonde_solve


class MdsError(RuntimeError):
    pass


def mds_combine(symbols, count: int, p: int = DEFAULT_PRIME, start: int = 1) -> np.ndarray:
    """Combinations at points ``start, start+1, ..., start+count-1``."""
    symbols = np.asarray(symbols, dtype=np.int64)
    if start < 1 or start + count - 1 >= p:
        raise MdsError("combination points must be distinct nonzero field elements")
    points = np.arange(start, start + count, dtype=np.int64)
    if symbols.size == 0:
        return np.zeros(count, dtype=np.int64)
    return poly_eval(symbols[None, :], points, p)


def mds_recover(values, points, m: int, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Recover ``m`` symbols from any ``m`` received combinations."""
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    values = np.asarray(values, dtype=np.int64)[:m]
    points = np.asarray(points, dtype=np.int64)[:m] % p
    if len(values) < m:
        raise MdsError(f"need {m} combinations, got {len(values)}")
    if len(np.unique(points)) != m:
        raise MdsError("combination points repeat; system is singular")
    return vandermonde_solve(points[None, :], values[None, :], p)[0]


def combine_batch(coeffs: np.ndarray, gens: np.ndarray, points: np.ndarray,
                  p: int = DEFAULT_PRIME) -> np.ndarray:
    """One combination per entry: generation ``gens[i]`` at ``points[i]``."""
    if len(gens) == 0:
        return np.zeros(0, dtype=np.int64)
    return poly_eval(coeffs[gens], points, p)


def recover_batch(points: np.ndarray, values: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Row-wise recovery for a stack of generations of equal size."""
    if points.shape[0] == 0:
        return np.zeros(points.shape, dtype=np.int64)
    srt = np.sort(points, axis=1)
    if np.any(srt[:, 1:] == srt[:, :-1]):
        raise MdsError("combination points repeat within a generation")
    return vandermonde_solve(points, values, p)
