"""Arithmetic over a prime field GF(p) on numpy int64 arrays.

Values are kept in ``[0, p)``. Products of two reduced values must fit in
int64, so ``p`` is limited to 2**31.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_PRIME = 65537
_MAX_PRIME = 2**31
_TABLE_LIMIT = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not (2 <= p <= _MAX_PRIME) or not is_prime(p):
        raise ValueError(f"field order must be a prime <= 2**31, got {p}")
    return p


def _powmod(x: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


@lru_cache(maxsize=8)
def _inverse_table(p: int) -> np.ndarray:
    table = _powmod(np.arange(p, dtype=np.int64), p - 2, p)
    table.setflags(write=False)
    return table


def inv(x, p: int = DEFAULT_PRIME):
    """Multiplicative inverse, elementwise. Zero entries raise."""
    arr = np.asarray(x, dtype=np.int64) % p
    if np.any(arr == 0):
        raise ZeroDivisionError("inverse of zero in GF(p)")
    if p <= _TABLE_LIMIT:
        out = _inverse_table(p)[arr]
    else:
        out = _powmod(arr, p - 2, p)
    return out if out.ndim else int(out)


def matmul(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Matrix product mod p without int64 overflow for long inner dimensions."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    inner = a.shape[-1]
    # each partial sum holds at most `chunk` products below p**2
    chunk = max(1, (2**62) // ((p - 1) ** 2 + 1))
    if inner <= chunk:
        return (a @ b) % p
    out = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
    for start in range(0, inner, chunk):
        out = (out + a[..., start:start + chunk] @ b[start:start + chunk]) % p
    return out


def rref(mat: np.ndarray, p: int = DEFAULT_PRIME) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p). Returns (matrix, pivot columns)."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv(int(a[r, c]), p) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray, p: int = DEFAULT_PRIME) -> int:
    return len(rref(mat, p)[1])


def solve_targets(
    h: np.ndarray, targets: list[int], p: int = DEFAULT_PRIME
) -> tuple[np.ndarray, list[int]]:
    """Find which unknowns of ``y = h @ v`` are pinned down by the observations.

    Returns ``(d, solvable)`` where ``solvable`` lists the entries of
    ``targets`` that are determined by ``y`` and ``d`` has one row per solvable
    target with ``d @ h = e_target``.
    """
    h = np.asarray(h, dtype=np.int64) % p
    n_obs, n_var = h.shape
    reduced, pivots = rref(np.hstack([h, np.eye(n_obs, dtype=np.int64)]), p)
    rows = []
    solvable = []
    for target in targets:
        if target not in pivots:
            continue
        r = pivots.index(target)
        coeffs = reduced[r, :n_var].copy()
        coeffs[target] = 0
        if np.any(coeffs):
            continue
        rows.append(reduced[r, n_var:])
        solvable.append(target)
    d = np.array(rows, dtype=np.int64).reshape(len(rows), n_obs)
    return d, solvable


def vandermonde(points, size: int, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Rows ``[1, z, z**2, ..., z**(size-1)]`` for each point ``z``."""
    z = np.asarray(points, dtype=np.int64) % p
    out = np.ones(z.shape + (size,), dtype=np.int64)
    for i in range(1, size):
        out[..., i] = out[..., i - 1] * z % p
    return out


def poly_eval(coeffs: np.ndarray, points: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Evaluate polynomials (coefficients on the last axis, low degree first).

    ``coeffs`` and ``points`` broadcast over leading axes; Horner's rule.
    """
    coeffs = np.asarray(coeffs, dtype=np.int64)
    z = np.asarray(points, dtype=np.int64) % p
    acc = np.zeros(np.broadcast_shapes(coeffs.shape[:-1], z.shape), dtype=np.int64)
    for i in range(coeffs.shape[-1] - 1, -1, -1):
        acc = (acc * z + coeffs[..., i]) % p
    return acc


def vandermonde_solve(points: np.ndarray, values: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Solve ``V c = values`` for ``V[r, i] = points[r]**i``, batched on axis 0.

    Björck-Pereyra: divided differences then Newton-to-monomial conversion,
    O(n**2) per system. Points within a system must be distinct.
    """
    z = np.atleast_2d(np.asarray(points, dtype=np.int64) % p)
    c = np.atleast_2d(np.asarray(values, dtype=np.int64) % p).copy()
    n = z.shape[1]
    for k in range(n - 1):
        denom = (z[:, k + 1:] - z[:, : n - k - 1]) % p
        c[:, k + 1:] = (c[:, k + 1:] - c[:, k:n - 1]) % p * inv(denom, p) % p
    for k in range(n - 2, -1, -1):
        c[:, k:n - 1] = (c[:, k:n - 1] - z[:, k:k + 1] * c[:, k + 1:n]) % p
    return c
