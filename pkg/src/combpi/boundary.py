"""Bootstrap of phi(m0, b) for every wheel-level-and-up b at an arbitrary m0.

A sieve over [lo, hi) only reveals phi differences against phi(lo - 1, b);
starting a chunk anywhere but 1 therefore needs the absolute values
phi(m0, b) for all c <= b <= a, computed here without touching any other
chunk's state.  The recurrence

    phi(m, b) = phi(m, b - 1) - phi(m // p_b, b - 1)

is applied with a different evaluation of the subtrahend per regime:

* b = c, c + 1            wheel lookups only;
* larger b while p_{b-1}**2 <= m // p_b     a general recursive phi;
* otherwise, Legendre:   phi(m // p_b, b - 1) = pi(m // p_b) - b + 2, the
  pi value coming from the sparse table when the argument is below y_max
  and from an auxiliary count otherwise;
* above pi(sqrt(m0)) the chain closes in steps of exactly 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .phi_engine import Params, Tables, build_tables
from .tables import phi_wheel, pi_lookup

# Beyond this recursion depth the general phi falls back to the oracle.
_DEPTH_CAP = 8
_ORACLE_FALLBACK = 1_000_000


@dataclass(frozen=True)
class PhiBoundary:
    """phi(m0, b) for b in [c, a]: ``values[b - c]`` is phi(m0, b)."""

    m0: int
    c: int
    values: np.ndarray

    def value(self, b: int) -> int:
        return int(self.values[b - self.c])


class _PhiHelper:
    """General phi(u, s) for s >= c with memoization and Legendre cuts."""

    def __init__(self, params: Params, tb: Tables):
        self.params = params
        self.tb = tb
        self.pr = tb.pt.padded
        self.memo: dict[tuple[int, int], int] = {}
        self._aux_pi_cache: dict[int, int] = {}

    def pi_any(self, u: int) -> int:
        """pi(u) for arguments possibly above y_max (but at most z)."""
        if u <= self.tb.pt.y_max:
            return pi_lookup(self.tb.spt, self.tb.pt, u)
        got = self._aux_pi_cache.get(u)
        if got is None:
            got = self._aux_pi_cache[u] = _pi_medium(self.tb, u)
        return got

    def phi(self, u: int, s: int, depth: int = 0) -> int:
        params, pr = self.params, self.pr
        if u <= 0:
            return 0
        if s <= params.c:
            return phi_wheel(self.tb.wheel, u)
        if int(pr[s]) >= u:
            return 1
        # Legendre once no composite <= u survives the first s primes.
        if s + 1 <= params.a and int(pr[s + 1]) ** 2 > u:
            return self.pi_any(u) - s + 1
        if depth > _DEPTH_CAP:
            if u <= _ORACLE_FALLBACK:
                return oracle.phi_naive(u, s)
            raise oracle.ResourceLimitError(
                f"phi recursion budget exceeded at ({u}, {s})"
            )
        key = (u, s)
        got = self.memo.get(key)
        if got is None:
            # Unrolled recurrence: phi(u, s) = phi(u, c) - sum over
            # j = c+1..s of phi(u // p_j, j - 1); only the divided branch
            # deepens the recursion.
            got = phi_wheel(self.tb.wheel, u)
            for j in range(params.c + 1, s + 1):
                v = u // int(pr[j])
                if v == 0:
                    break
                got -= self.phi(v, j - 1, depth + 1)
            self.memo[key] = got
        return got


def _pi_medium(tb: Tables, u: int) -> int:
    """pi(u) for y_max < u, by counting primes in (y_max, u] locally."""
    pt = tb.pt
    if math.isqrt(u) > pt.y_max:
        # Argument too large for the local table: delegate to a fresh
        # top-level computation.
        from . import phi_engine

        return phi_engine.pi(u)
    count = pt.a
    lo = pt.y_max + 1
    step = 1 << 22
    for seg_lo in range(lo, u + 1, step):
        seg_hi = min(seg_lo + step - 1, u)
        mark = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        r = math.isqrt(seg_hi)
        for p in pt.primes:
            p = int(p)
            if p > r:
                break
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start <= seg_hi:
                mark[start - seg_lo :: p] = False
        count += int(np.count_nonzero(mark))
    return count


def phi_boundary(
    m0: int, params: Params, tables: Tables | None = None
) -> PhiBoundary:
    """Exact phi(m0, b) for every b in [c, a].

    m0 may be any value up to z = x // y_max; m0 = 0 gives all zeros.
    """
    tb = tables or build_tables(params)
    c, a = params.c, params.a
    if m0 < 0 or m0 > params.z:
        raise ValueError(f"m0={m0} outside [0, {params.z}]")
    values = np.zeros(a - c + 1, dtype=np.int64)
    if m0 == 0:
        return PhiBoundary(m0=0, c=c, values=values)
    pr = tb.pt.padded
    helper = _PhiHelper(params, tb)

    values[0] = phi_wheel(tb.wheel, m0)
    if a >= c + 1:
        values[1] = values[0] - phi_wheel(tb.wheel, m0 // int(pr[c + 1]))

    sq = pi_lookup(tb.spt, tb.pt, min(math.isqrt(m0), params.y_max))
    for b in range(c + 2, min(sq, a) + 1):
        u = m0 // int(pr[b])
        if int(pr[b - 1]) ** 2 <= u:
            sub = helper.phi(u, b - 1)
        else:
            sub = helper.pi_any(u) - b + 2
        values[b - c] = values[b - c - 1] - sub

    # Above pi(sqrt(m0)) each step subtracts exactly 1, bottoming out at 1
    # once b passes pi(m0) (only reachable when m0 < y_max).
    start = max(c + 2, sq + 1)
    if start <= a:
        steps = np.arange(1, a - start + 2, dtype=np.int64)
        chain = values[start - c - 1] - steps
        if m0 >= params.y_max:
            values[start - c :] = chain
        else:
            # The -1 chain reaches exactly 1 at b = pi(m0) and freezes there.
            values[start - c :] = np.maximum(chain, 1)
    return PhiBoundary(m0=m0, c=c, values=values)
