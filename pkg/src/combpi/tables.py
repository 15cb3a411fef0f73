"""Immutable lookup structures shared by the whole computation.

Three tables are built once per run and shared read-only across threads:

* ``PrimeTable``       -- the primes p_1..p_a with p_a <= y_max,
* ``SparsePiTable``    -- pi stored only at multiples of a stride d, giving
                          pi(y) for any y <= y_max in O(1) expected time and
                          O(pi(y_max)) space instead of a dense pi table,
* ``Wheel``            -- the period p_1*...*p_c residue table giving
                          phi(m, c) for any m in O(1) time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle


@dataclass(frozen=True)
class PrimeTable:
    """Primes p_1..p_a, 1-indexed: ``padded[b]`` is p_b and ``padded[0]`` is 0."""

    padded: np.ndarray
    y_max: int

    @property
    def a(self) -> int:
        return len(self.padded) - 1

    def p(self, b: int) -> int:
        if not 1 <= b <= self.a:
            raise IndexError(f"prime index {b} out of range 1..{self.a}")
        return int(self.padded[b])

    @property
    def primes(self) -> np.ndarray:
        """The primes without the index pad (ascending, p_1 = 2 first)."""
        return self.padded[1:]


def build_prime_table(y_max: int) -> PrimeTable:
    """Table of every prime <= y_max, via the brute-force sieve."""
    if y_max < 2:
        raise ValueError(f"y_max must be >= 2, got {y_max}")
    primes = oracle.sieve_range(0, y_max + 1).positions()
    padded = np.concatenate([np.zeros(1, dtype=np.int64), primes])
    return PrimeTable(padded=padded, y_max=y_max)


@dataclass(frozen=True)
class SparsePiTable:
    """pi at grid points 0, d, 2d, ...: ``grid[k] = pi(k*d)``.

    The grid plus a short forward scan of the prime table recovers pi(y)
    exactly for any y <= y_max; the scan can never exceed d steps because a
    longer scan would contradict the grid point below y being the closest.
    """

    d: int
    grid: np.ndarray
    y_max: int

    @property
    def entries(self) -> int:
        return len(self.grid)


def build_sparse_pi(pt: PrimeTable) -> SparsePiTable:
    if pt.y_max < 4:
        raise ValueError("y_max must be >= 4 so the stride is at least 2")
    d = max(2, int(math.log2(pt.y_max)))
    points = np.arange(0, pt.y_max + 1, d, dtype=np.int64)
    grid = np.searchsorted(pt.primes, points, side="right").astype(np.int64)
    return SparsePiTable(d=d, grid=grid, y_max=pt.y_max)


def pi_lookup(spt: SparsePiTable, pt: PrimeTable, y: int) -> int:
    """Exact pi(y) for 0 <= y <= y_max: grid value, then scan forward."""
    count, _ = pi_lookup_scan(spt, pt, y)
    return count


def pi_lookup_scan(spt: SparsePiTable, pt: PrimeTable, y: int) -> tuple[int, int]:
    """Like pi_lookup but also reports the number of scan iterations."""
    if y < 0 or y > spt.y_max:
        raise ValueError(f"y={y} outside [0, {spt.y_max}]")
    b = int(spt.grid[y // spt.d])
    padded = pt.padded
    a = pt.a
    steps = 0
    while b < a and padded[b + 1] <= y:
        b += 1
        steps += 1
    return b, steps


def pi_lookup_vec(spt: SparsePiTable, pt: PrimeTable, y: np.ndarray) -> np.ndarray:
    """Vectorised pi_lookup over an int64 array of values in [0, y_max].

    Runs the same grid-then-scan algorithm, advancing all lanes at once;
    the loop terminates within d rounds and usually within two.
    """
    y = np.asarray(y, dtype=np.int64)
    cnt = spt.grid[y // spt.d].copy()
    # Sentinel above the table end stops every lane at b = a.
    pad = np.concatenate([pt.padded, [np.iinfo(np.int64).max]])
    while True:
        step = pad[cnt + 1] <= y
        if not step.any():
            return cnt
        cnt += step


@dataclass(frozen=True)
class Wheel:
    """Residue tables modulo W = p_1 * ... * p_c.

    ``cum[r]`` counts 1 <= n <= r coprime to W, and ``pattern[r]`` flags the
    coprime residues, so phi(m, c) = (m // W) * phi(W) + cum[m % W] for any m.
    """

    c: int
    W: int
    phiW: int
    cum: np.ndarray
    pattern: np.ndarray  # uint8, length W

    def slice(self, lo: int, length: int) -> np.ndarray:
        """Coprimality flags for the consecutive values lo, lo+1, ...."""
        start = lo % self.W
        reps = (start + length + self.W - 1) // self.W
        tiled = np.tile(self.pattern, reps)
        return tiled[start : start + length]


def build_wheel(c: int) -> Wheel:
    if not 1 <= c <= 8:
        raise ValueError(f"wheel size must be in 1..8, got {c}")
    primes = [2, 3, 5, 7, 11, 13, 17, 19][:c]
    W = math.prod(primes)
    pattern = np.ones(W, dtype=np.uint8)
    pattern[0] = 0  # residue 0 shares every wheel prime
    for p in primes:
        pattern[p::p] = 0
    # cum[r] counts 1 <= n <= r coprime to W; residue W collapses to 0.
    cum = np.zeros(W + 1, dtype=np.int64)
    np.cumsum(pattern[1:], out=cum[1:W])
    cum[W] = cum[W - 1]
    phiW = int(cum[W])
    return Wheel(c=c, W=W, phiW=phiW, cum=cum, pattern=pattern)


def phi_wheel(w: Wheel, m: int) -> int:
    """phi(m, c) in O(1): whole periods plus the residue prefix."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    return (m // w.W) * w.phiW + int(w.cum[m % w.W])


def phi_wheel_vec(w: Wheel, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    return (m // w.W) * w.phiW + w.cum[m % w.W]
