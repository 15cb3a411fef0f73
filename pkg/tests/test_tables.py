"""Prime table, sparse pi table, and wheel against the oracle."""

import math

import numpy as np
import pytest

from combpi import oracle, tables


def test_build_prime_table_small():
    pt = tables.build_prime_table(10)
    assert list(pt.primes) == [2, 3, 5, 7]
    assert pt.a == 4
    assert pt.p(1) == 2 and pt.p(4) == 7


def test_build_prime_table_30():
    pt = tables.build_prime_table(30)
    assert pt.a == 10
    assert list(pt.primes) == list(oracle.sieve_range(0, 31).positions())


def test_build_prime_table_degenerate():
    pt = tables.build_prime_table(2)
    assert list(pt.primes) == [2]
    with pytest.raises(ValueError):
        tables.build_prime_table(1)


def test_sparse_pi_grid_values():
    pt = tables.build_prime_table(100)
    spt = tables.build_sparse_pi(pt)
    assert spt.d == 6
    assert spt.grid[0] == 0
    assert spt.grid[4] == oracle.pi_naive(24) == 9
    pt64 = tables.build_prime_table(64)
    spt64 = tables.build_sparse_pi(pt64)
    assert spt64.d == 6
    assert spt64.grid[10] == oracle.pi_naive(60) == 17


def test_sparse_pi_storage_bound():
    for y in [100, 1000, 65536, 10**6]:
        pt = tables.build_prime_table(y)
        spt = tables.build_sparse_pi(pt)
        d = max(2, int(math.log2(y)))
        assert spt.entries <= y // d + 1


def test_pi_lookup_exact_everywhere_small():
    pt = tables.build_prime_table(5000)
    spt = tables.build_sparse_pi(pt)
    bits = oracle.sieve_range(0, 5001).bits
    prefix = np.cumsum(bits)
    for y in range(0, 5001):
        assert tables.pi_lookup(spt, pt, y) == prefix[y]


def test_pi_lookup_examples():
    pt = tables.build_prime_table(100)
    spt = tables.build_sparse_pi(pt)
    assert tables.pi_lookup(spt, pt, 29) == 10
    assert tables.pi_lookup(spt, pt, 0) == 0
    assert tables.pi_lookup(spt, pt, 100) == 25
    with pytest.raises(ValueError):
        tables.pi_lookup(spt, pt, 101)


def test_pi_lookup_scan_bounds_and_mean():
    y = 10**6
    pt = tables.build_prime_table(y)
    spt = tables.build_sparse_pi(pt)
    rng = np.random.default_rng(7)
    ys = rng.integers(0, y + 1, size=10**5)
    total = 0
    worst = 0
    for v in ys:
        _, steps = tables.pi_lookup_scan(spt, pt, int(v))
        total += steps
        worst = max(worst, steps)
    assert worst <= spt.d
    assert total / len(ys) <= 2.0


def test_pi_lookup_vec_matches_scalar():
    pt = tables.build_prime_table(4096)
    spt = tables.build_sparse_pi(pt)
    rng = np.random.default_rng(3)
    ys = rng.integers(0, 4097, size=4000)
    vec = tables.pi_lookup_vec(spt, pt, ys)
    for v, got in zip(ys, vec):
        assert got == tables.pi_lookup(spt, pt, int(v))


def test_build_wheel_examples():
    w1 = tables.build_wheel(1)
    assert (w1.W, w1.phiW) == (2, 1)
    assert list(w1.cum[:2]) == [0, 1]
    w2 = tables.build_wheel(2)
    assert (w2.W, w2.phiW) == (6, 2)
    assert w2.cum[4] == 1
    w3 = tables.build_wheel(3)
    assert (w3.W, w3.phiW) == (30, 8)
    with pytest.raises(ValueError):
        tables.build_wheel(0)
    with pytest.raises(ValueError):
        tables.build_wheel(9)


def test_wheel_cum_structure():
    for c in range(1, 5):
        w = tables.build_wheel(c)
        assert w.cum[0] == 0
        assert w.cum[w.W] == w.phiW
        steps = np.diff(w.cum)
        assert set(steps.tolist()) <= {0, 1}


def test_phi_wheel_examples():
    w2 = tables.build_wheel(2)
    assert tables.phi_wheel(w2, 10) == 3  # {1, 5, 7}
    assert tables.phi_wheel(w2, 100) == 33
    w3 = tables.build_wheel(3)
    assert tables.phi_wheel(w3, 0) == 0


def test_phi_wheel_matches_oracle():
    rng = np.random.default_rng(11)
    for c in range(1, 7):
        w = tables.build_wheel(c)
        for m in rng.integers(0, 10**6, size=40):
            m = int(m)
            assert tables.phi_wheel(w, m) == oracle.phi_naive(m, c)


def test_phi_wheel_vec_matches_scalar():
    w = tables.build_wheel(4)
    ms = np.arange(0, 3000, dtype=np.int64)
    vec = tables.phi_wheel_vec(w, ms)
    for m in range(0, 3000, 97):
        assert vec[m] == tables.phi_wheel(w, m)


def test_wheel_slice_period():
    w = tables.build_wheel(3)
    sl = w.slice(17, 100)
    for i in range(100):
        n = 17 + i
        assert sl[i] == (1 if math.gcd(n, w.W) == 1 else 0)
