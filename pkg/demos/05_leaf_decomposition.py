"""How pi(x) decomposes: ordinary, trivial, easy, and hard leaves.

The identity pi(x) = phi(x, a) + a - 1 - P2 splits phi(x, a) into leaf sums.
Ordinary leaves need only the wheel; trivial leaves contribute exactly 1
each; easy leaves reduce to pi lookups by Legendre's formula; only the hard
leaves need the block sieve.  This demo shows the shares of each class and
checks the assembled value.
"""

import numpy as np

from combpi import phi_engine as pe
from combpi.phi_engine import LeafClass, classify_special_leaf

x = 10**8
params = pe.select_params(x)
tb = pe.build_tables(params)
print(f"x = {x:,}: y_max = {params.y_max}, a = {params.a}, "
      f"wheel c = {params.c}, sieve range z = {params.z:,}")

s0 = pe.ordinary_leaves(x, params, tb)
s_easy = pe.easy_leaves(x, params, tb)
zero = np.zeros(params.a - params.c + 1, dtype=np.int64)
out = pe.sieve_chunk(x, params, 1, params.z + 1, zero, tables=tb)
p2 = pe.p2_from_outcomes([out])

print(f"ordinary leaves  S0     = {s0:,}")
print(f"trivial + easy leaves   = {s_easy:,}")
print(f"hard leaves (sieved)    = {out.s_hard:,}")
print(f"two-prime term   P2     = {p2:,}")
total = s0 + s_easy + out.s_hard + params.a - 1 - p2
print(f"assembled pi(x)         = {total:,}")
assert total == 5761455

# Classifying a few individual special leaves:
print("\nsample special leaves (m, b) and their class:")
for m, b in [(101, 8), (401, 12), (4001, 100)]:
    try:
        cls = classify_special_leaf(m, b, x, params, tb)
    except ValueError as exc:
        print(f"  ({m}, {b}): not a special leaf ({exc})")
        continue
    z = x // (m * tb.pt.p(b))
    print(f"  ({m}, {b}): z = {z}  ->  {cls.value}")
