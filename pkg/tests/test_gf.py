import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bursty_ic import gf
from bursty_ic.schemes import mds

P = gf.DEFAULT_PRIME


def brute_solve(a, b, p):
    """Gauss-Jordan on Python ints, the slow oracle."""
    n = len(a)
    m = [list(map(int, row)) + [int(v)] for row, v in zip(a, b)]
    for c in range(n):
        piv = next(r for r in range(c, n) if m[r][c] % p)
        m[c], m[piv] = m[piv], m[c]
        iv = pow(m[c][c], p - 2, p)
        m[c] = [x * iv % p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[c])]
    return [row[-1] for row in m]


def test_primes():
    assert gf.is_prime(65537) and not gf.is_prime(65535)
    with pytest.raises(ValueError):
        gf.check_prime(2**32 + 15)
    with pytest.raises(ZeroDivisionError):
        gf.inv(0)
    x = np.arange(1, 200)
    assert np.all(x * gf.inv(x) % P == 1)
    assert gf.inv(3, 7) == 5


def test_matmul_long_inner():
    rng = np.random.default_rng(1)
    a = rng.integers(0, P, (3, 5000))
    b = rng.integers(0, P, (5000, 2))
    ref = [[sum(int(x) * int(y) for x, y in zip(a[i], b[:, j])) % P for j in range(2)]
           for i in range(3)]
    assert gf.matmul(a, b).tolist() == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.sampled_from([7, 257, P]))
def test_vandermonde_solve_matches_brute_force(n, seed, p):
    if n > p - 1:
        return
    rng = np.random.default_rng(seed)
    pts = rng.choice(np.arange(1, p), size=n, replace=False)
    vals = rng.integers(0, p, n)
    got = gf.vandermonde_solve(pts, vals, p)[0]
    assert got.tolist() == brute_solve(gf.vandermonde(pts, n, p), vals, p)
    assert np.array_equal(gf.poly_eval(got, pts, p), vals % p)


def test_rref_and_rank():
    a = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    r, piv = gf.rref(a, 7)
    assert piv == [0, 1]
    assert r.tolist() == [[1, 0, 1], [0, 1, 1], [0, 0, 0]]
    assert gf.rank(np.eye(4, dtype=np.int64)) == 4


def test_solve_targets_partial():
    # y0 = v0 + v1, y1 = v1: both solvable; y = v0 + v1 alone: neither
    d, ok = gf.solve_targets(np.array([[1, 1], [0, 1]]), [0, 1], P)
    assert ok == [0, 1]
    h = np.array([[1, 1], [0, 1]])
    assert (d @ h % P).tolist() == [[1, 0], [0, 1]]
    d, ok = gf.solve_targets(np.array([[1, 1]]), [0, 1], P)
    assert ok == [] and d.shape == (0, 1)


def test_mds_all_subsets_of_five():
    syms = np.array([11, 22, 33])
    combos = mds.mds_combine(syms, 5)
    for sub in itertools.combinations(range(5), 3):
        pts = np.array(sub) + 1
        assert mds.mds_recover(combos[list(sub)], pts, 3).tolist() == syms.tolist()


def test_mds_edges():
    assert mds.mds_recover([], [], 0).size == 0
    assert mds.mds_combine([], 2).tolist() == [0, 0]
    c = mds.mds_combine([9], 1)
    assert mds.mds_recover(c, [1], 1).tolist() == [9]
    with pytest.raises(mds.MdsError):
        mds.mds_recover([1, 2], [1, 1], 2)
    with pytest.raises(mds.MdsError):
        mds.mds_recover([1], [1], 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_mds_recover_any_m(m, seed):
    rng = np.random.default_rng(seed)
    syms = rng.integers(0, P, m)
    count = m + int(rng.integers(0, 10))
    combos = mds.mds_combine(syms, count)
    pick = np.sort(rng.choice(count, m, replace=False))
    assert np.array_equal(mds.mds_recover(combos[pick], pick + 1, m), syms)
