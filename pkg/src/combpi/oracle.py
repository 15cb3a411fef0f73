"""Brute-force reference implementations.

Segmented Eratosthenes sieving, exact prime counting, the partial sieve
function phi(m, b) (integers in [1, m] coprime to the first b primes), and
the two-prime term P2.  Everything here favours obviousness over speed;
these functions seed the fast tables and act as ground truth in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Largest position a single oracle call will touch.  Keeps worst-case memory
# for one call around a couple hundred MB of bitmap.
ORACLE_CEILING = 2_000_000_000

_STRIP = 1 << 20


class ResourceLimitError(RuntimeError):
    """A brute-force call would exceed the oracle's configured ceiling."""


@dataclass(frozen=True)
class PrimalityBitmap:
    """Primality over [lo, lo + len(bits)): bits[i] is True iff lo + i is prime."""

    lo: int
    bits: np.ndarray

    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def positions(self) -> np.ndarray:
        """Absolute values of the primes marked in the bitmap."""
        return np.flatnonzero(self.bits) + self.lo


def _simple_primes(n: int) -> np.ndarray:
    """All primes <= n via a dense boolean sieve (n is expected small)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mark = np.ones(n + 1, dtype=bool)
    mark[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mark[p]:
            mark[p * p :: p] = False
    return np.flatnonzero(mark).astype(np.int64)


def sieve_range(lo: int, hi: int) -> PrimalityBitmap:
    """Mark exactly the primes in [lo, hi).

    Raises ValueError for an empty range and ResourceLimitError when hi is
    beyond the oracle ceiling.  Work proceeds in strips of 2**20 so memory
    stays flat regardless of the range length.
    """
    if lo < 0:
        raise ValueError(f"lo must be >= 0, got {lo}")
    if hi <= lo:
        raise ValueError(f"need hi > lo, got [{lo}, {hi})")
    if hi > ORACLE_CEILING:
        raise ResourceLimitError(f"hi={hi} exceeds oracle ceiling {ORACLE_CEILING}")

    bits = np.zeros(hi - lo, dtype=bool)
    base = _simple_primes(math.isqrt(hi - 1))
    for strip_lo in range(lo, hi, _STRIP):
        strip_hi = min(strip_lo + _STRIP, hi)
        n = strip_hi - strip_lo
        strip = np.ones(n, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((strip_lo + p - 1) // p) * p)
            if start >= strip_hi:
                continue
            strip[start - strip_lo :: p] = False
        # 0 and 1 are not prime; base primes below sqrt(hi) were skipped by
        # the p*p start and must stay marked.
        if strip_lo < 2:
            strip[: min(2 - strip_lo, n)] = False
        bits[strip_lo - lo : strip_hi - lo] = strip
    return PrimalityBitmap(lo=lo, bits=bits)


def pi_naive(x: int) -> int:
    """Exact count of primes <= x by direct sieving."""
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x < 2:
        return 0
    return sieve_range(0, x + 1).count()


# phi_naive uses a direct marking scan below this bound and the recurrence
# phi(m, b) = phi(m, b-1) - phi(m // p_b, b-1) with memoization above it.
_PHI_SCAN_LIMIT = 10_000_000

_small_primes_cache = _simple_primes(100)


def _nth_primes(count: int) -> np.ndarray:
    """At least `count` primes, growing an internal cache as needed."""
    global _small_primes_cache
    bound = 100
    while len(_small_primes_cache) < count:
        bound *= 4
        _small_primes_cache = _simple_primes(bound)
    return _small_primes_cache


def _phi_scan(m: int, b: int) -> int:
    primes = _nth_primes(b)
    mark = np.ones(m + 1, dtype=bool)
    mark[0] = False
    for p in primes[:b]:
        p = int(p)
        if p > m:
            break
        mark[p::p] = False
    return int(np.count_nonzero(mark))


def phi_naive(m: int, b: int) -> int:
    """Exact count of n in [1, m] with gcd(n, p_1 * ... * p_b) = 1."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if b < 0:
        raise ValueError(f"b must be >= 0, got {b}")
    if m > ORACLE_CEILING:
        raise ResourceLimitError(f"m={m} exceeds oracle ceiling {ORACLE_CEILING}")
    memo: dict[tuple[int, int], int] = {}

    def rec(mm: int, bb: int) -> int:
        if mm == 0:
            return 0
        if bb == 0:
            return mm
        if mm <= _PHI_SCAN_LIMIT:
            primes = _nth_primes(bb)
            # Trim levels whose prime already exceeds mm: they remove nothing.
            while bb > 0 and int(primes[bb - 1]) > mm:
                bb -= 1
            if bb == 0:
                return 1 if mm >= 1 else 0
            key = (mm, bb)
            got = memo.get(key)
            if got is None:
                got = memo[key] = _phi_scan(mm, bb)
            return got
        p = int(_nth_primes(b)[bb - 1])
        key = (mm, bb)
        got = memo.get(key)
        if got is None:
            got = memo[key] = rec(mm, bb - 1) - rec(mm // p, bb - 1)
        return got

    return rec(m, b)


def p2_naive(x: int, y: int) -> int:
    """Count of n <= x with n = p*q, p <= q, both primes > y.

    Equals sum over primes p in (y, sqrt(x)] of pi(x//p) - pi(p) + 1.
    """
    if x < 0 or y < 0:
        raise ValueError("x and y must be >= 0")
    r = math.isqrt(x)
    if y > r:
        return 0
    hi = x // max(y + 1, 2) + 1
    if hi > ORACLE_CEILING:
        raise ResourceLimitError(f"p2_naive needs pi up to {hi - 1}, over the ceiling")
    bmp = sieve_range(0, max(hi, r + 1))
    pi_prefix = np.cumsum(bmp.bits)
    total = 0
    for p in range(y + 1, r + 1):
        if bmp.bits[p]:
            total += int(pi_prefix[x // p]) - int(pi_prefix[p]) + 1
    return total
