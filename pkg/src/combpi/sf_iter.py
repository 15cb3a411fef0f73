"""Enumeration of squarefree numbers whose prime factors all exceed p_b.

Rather than storing smallest-prime-factor and Mobius arrays up to y_max,
values are generated on demand as products p_{b1} * p_{b2} * ... * p_{bn}
with b < b1 < b2 < ... < bn, pruning each loop level as soon as the running
product exceeds the bound.  Every product is squarefree by construction and
its Mobius value is (-1)^n.

Two front ends share the scheme: a generator that yields items depth by
depth (depth 0 is the empty product m = 1), and a batch producer returning
numpy arrays for the hot paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .tables import PrimeTable


@dataclass(frozen=True)
class SquarefreeItem:
    """One enumerated value: m, mu = (-1)^depth, and the index of its
    smallest prime factor (b1 = 0 for m = 1)."""

    m: int
    mu: int
    b1: int
    depth: int


def max_depth(pt: PrimeTable, b: int, bound: int) -> int:
    """Largest n with p_{b+1} * p_{b+2} * ... * p_{b+n} <= bound."""
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    n = 0
    prod = 1
    while b + n + 1 <= pt.a:
        prod *= pt.p(b + n + 1)
        if prod > bound:
            break
        n += 1
    return n


def iterate_squarefree(
    pt: PrimeTable, b: int, m_lo: int, m_hi: int
) -> Iterator[SquarefreeItem]:
    """Yield every squarefree m in [m_lo, m_hi] whose prime factors all have
    index > b, exactly once, in depth-major then lexicographic order.

    m = 1 is included (depth 0, mu = +1, b1 = 0) when the range covers it.
    Subtrees are pruned only by the m_hi product bound; the m_lo restriction
    is applied at emission.
    """
    if not 1 <= m_lo <= m_hi:
        raise ValueError(f"need 1 <= m_lo <= m_hi, got [{m_lo}, {m_hi}]")
    if b >= pt.a:
        raise ValueError(f"b={b} must be below the table size a={pt.a}")
    if m_lo == 1:
        yield SquarefreeItem(m=1, mu=1, b1=0, depth=0)
    padded = pt.padded
    a = pt.a
    for depth in range(1, max_depth(pt, b, m_hi) + 1):
        # idx[i] = current prime index at loop level i,
        # prod[i] = product of the choices at levels < i.
        idx = [0] * depth
        prod = [1] * depth
        level = 0
        idx[0] = b + 1
        while level >= 0:
            j = idx[level]
            if j > a or prod[level] * padded[j] > m_hi:
                level -= 1
                if level >= 0:
                    idx[level] += 1
                continue
            if level == depth - 1:
                m = prod[level] * int(padded[j])
                if m >= m_lo:
                    yield SquarefreeItem(
                        m=m, mu=-1 if depth % 2 else 1, b1=idx[0], depth=depth
                    )
                idx[level] += 1
            else:
                prod[level + 1] = prod[level] * int(padded[j])
                level += 1
                idx[level] = j + 1


def squarefree_arrays(
    pt: PrimeTable,
    b: int,
    m_hi: int,
    depth_min: int = 1,
    depth_max: int | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch form of iterate_squarefree over (0, m_hi], depth-major order.

    Returns (m, mu, b1) int64 arrays covering depths depth_min..depth_max.
    Depth 0 (m = 1) is never part of the output; callers that need it add
    the term directly.
    """
    if m_hi < 1:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
        )
    pr = pt.padded
    a = pt.a
    cap = max_depth(pt, b, m_hi)
    if depth_max is not None:
        cap = min(cap, depth_max)

    # Frontier of products at the current depth; children extend each
    # product by one strictly larger prime index while staying <= m_hi.
    prod = np.empty(0, dtype=np.int64)
    last = np.empty(0, dtype=np.int64)
    b1 = np.empty(0, dtype=np.int64)

    out_m: list[np.ndarray] = []
    out_mu: list[int] = []
    out_b1: list[np.ndarray] = []

    for depth in range(1, cap + 1):
        if depth == 1:
            hi_idx = int(np.searchsorted(pr, m_hi, side="right")) - 1
            if hi_idx <= b:
                break
            prod = pr[b + 1 : hi_idx + 1].copy()
            last = np.arange(b + 1, hi_idx + 1, dtype=np.int64)
            b1 = last.copy()
        else:
            limit = m_hi // prod
            hi_idx = np.searchsorted(pr, limit, side="right") - 1
            counts = np.maximum(hi_idx - last, 0)
            total = int(counts.sum())
            if total == 0:
                break
            offsets = np.cumsum(counts)
            starts = np.repeat(offsets - counts, counts)
            idx = np.arange(total, dtype=np.int64) - starts + np.repeat(last + 1, counts)
            prod = np.repeat(prod, counts) * pr[idx]
            b1 = np.repeat(b1, counts)
            last = idx
        if depth >= depth_min:
            out_m.append(prod)
            out_mu.append(-1 if depth % 2 else 1)
            out_b1.append(b1)

    if not out_m:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
        )
    m = np.concatenate(out_m)
    mu = np.concatenate(
        [np.full(len(part), sign, dtype=np.int64) for part, sign in zip(out_m, out_mu)]
    )
    b1_all = np.concatenate(out_b1)
    return m, mu, b1_all
