"""Counting primes exactly, and what it costs.

pi(x) is the number of primes <= x.  Enumerating them (sieving) takes time
roughly proportional to x; the combinatorial method gets the same exact
answer in roughly x^(2/3) operations by never looking at most of the primes
it counts.  This demo computes a few values both ways and times them.
"""

import time

from combpi import oracle, pi

for x in [10**6, 10**7, 10**8]:
    t0 = time.perf_counter()
    fast = pi(x)
    t_fast = time.perf_counter() - t0

    t0 = time.perf_counter()
    slow = oracle.pi_naive(x)
    t_slow = time.perf_counter() - t0

    assert fast == slow
    print(f"pi({x:>12,}) = {fast:>12,}   combinatorial {t_fast*1e3:8.1f} ms"
          f"   sieve {t_slow*1e3:8.1f} ms")

# Beyond the reach of a desk-sized sieve the combinatorial method keeps going.
t0 = time.perf_counter()
v = pi(10**12)
print(f"pi(10^12)      = {v:,}   in {time.perf_counter()-t0:.2f} s")
