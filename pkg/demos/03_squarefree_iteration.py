"""Iterating squarefree numbers without smallest-factor or Mobius arrays.

The leaf sums need every squarefree m <= bound whose prime factors all
exceed p_b, together with mu(m).  Storing p_min and mu up to the bound costs
memory proportional to the bound; generating the values as products
p_{b1} p_{b2} ... with strictly increasing indices costs none, and mu falls
out as (-1)^(number of factors).
"""

from combpi.sf_iter import iterate_squarefree, max_depth
from combpi.tables import build_prime_table

pt = build_prime_table(10_000)

print("squarefree m <= 60 with all prime factors > p_2 = 3:")
for item in iterate_squarefree(pt, 2, 1, 60):
    factors = "1" if item.m == 1 else f"p_min index {item.b1}"
    print(f"  m = {item.m:>3}  mu = {item.mu:+d}  depth {item.depth}  ({factors})")

# The nesting depth is self-limiting: a product of n distinct primes above
# p_b outgrows any 64-bit bound before n reaches 16.
for bound in [10**2, 10**4, 10**8, 2**63]:
    print(f"max depth for bound {bound:.0e}: {max_depth(pt, 0, int(bound))}")
