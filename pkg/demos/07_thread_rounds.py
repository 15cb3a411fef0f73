"""Shared-memory rounds: delta-phi blocks, tallies, and a barrier.

N consecutive blocks are sieved in parallel.  A block sieved out of order
cannot know its absolute phi bases, so every base-dependent contribution is
recorded in a per-level tally; after the round barrier the survivor counts
are folded in block order, the bases become exact, and the tallies resolve.
The result is bit-identical for every N and every scheduling.
"""

from combpi import jobs

x = 10**8
sheets = []
value = jobs.run_threads(x, N=4, sheets=sheets)
print(f"pi({x:,}) with 4 threads = {value:,}")

for N in (1, 2, 8):
    assert jobs.run_threads(x, N=N) == value
print("identical across N = 1, 2, 4, 8")

nonzero = [s for s in sheets if s.tally.any()]
print(f"\n{len(sheets)} blocks, {len(nonzero)} carried unresolved tallies")
s = nonzero[len(nonzero) // 2]
levels = [lev for lev, t in enumerate(s.tally) if t]
print(f"block at {s.block_lo:,}: partial sum {s.partial:,}, "
      f"tallies on levels {levels[:8]}{'...' if len(levels) > 8 else ''}")
