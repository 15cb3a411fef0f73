"""The sparse pi table: O(1) expected lookups from a log-factor less memory.

A dense table of pi(y) for y <= y_max costs y_max words.  Storing pi only at
multiples of d = floor(log2 y_max) and scanning the prime table forward from
the grid value costs pi(y_max) + y_max/d words, and the scan almost always
stops immediately: the gap back to the grid point contains about one prime
on average.
"""

import numpy as np

from combpi.tables import (
    build_prime_table,
    build_sparse_pi,
    pi_lookup,
    pi_lookup_scan,
)

y_max = 1_000_000
pt = build_prime_table(y_max)
spt = build_sparse_pi(pt)

dense_words = y_max
sparse_words = pt.a + len(spt.grid)
print(f"y_max = {y_max:,}: dense table {dense_words:,} words, "
      f"primes + grid {sparse_words:,} words "
      f"({dense_words / sparse_words:.1f}x smaller)")

print(f"pi(999983) = {pi_lookup(spt, pt, 999983):,}")

rng = np.random.default_rng(1)
steps = [pi_lookup_scan(spt, pt, int(v))[1] for v in rng.integers(0, y_max, 100_000)]
hist = np.bincount(steps)
print(f"scan length over 100k random lookups: mean {np.mean(steps):.3f}, "
      f"max {max(steps)} (hard bound d = {spt.d})")
for k, n in enumerate(hist):
    print(f"  {k} steps: {n:>6} lookups")
