"""The combinatorial prime-counting core.

pi(x) is evaluated through the classical identity

    pi(x) = phi(x, a) + a - 1 - P2(x, a),        a = pi(y_max),

where phi(x, a) counts integers in [1, x] coprime to the first a primes and
P2 counts n <= x that are a product of exactly two primes > y_max.  The
recursion tree of phi(x, a) is truncated into leaves:

* ordinary leaves  mu(n) * phi(x // n, c) for squarefree n <= y_max with
                   p_min(n) > p_c, evaluated with the wheel;
* special leaves   -mu(m) * phi(x // (m * p_b), b - 1) for squarefree
                   m <= y_max < m * p_b with p_min(m) > p_b and c < b <= a,
                   subclassified by z = x // (m * p_b):
                     trivial  z < p_b          (the phi value is 1),
                     easy     z < p_b**2 and z <= y_max   (Legendre +
                              sparse-pi lookup),
                     hard     everything else  (needs the block sieve).

The block sieve walks [1, z], z = x // y_max, in blocks of 2**L positions,
maintaining presence under removal of prime multiples and answering the
hard-leaf prefix counts, while simultaneously sieving each block to full
primality to accumulate the P2 terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import oracle
from .sf_iter import squarefree_arrays
from .tables import (
    PrimeTable,
    SparsePiTable,
    Wheel,
    build_prime_table,
    build_sparse_pi,
    build_wheel,
    phi_wheel,
    phi_wheel_vec,
    pi_lookup,
    pi_lookup_vec,
)
from .counters import counter_init

# Below this the oracle is both simpler and faster than degenerate parameters.
SMALL_X_LIMIT = 10_000

# Internal arrays are int64; inputs whose intermediate products could leave
# the 63-bit range are refused with an explicit capacity error.
X_CAPACITY = 1 << 62

MAX_L = 26


class CapacityError(OverflowError):
    """x exceeds the configured integer width of the engine."""


class LeafClass(Enum):
    ORDINARY = "ordinary"
    TRIVIAL = "trivial"
    EASY = "easy"
    HARD = "hard"


def icbrt(n: int) -> int:
    """Integer cube root: largest r with r**3 <= n."""
    if n < 0:
        raise ValueError("icbrt of a negative number")
    if n == 0:
        return 0
    r = 1 << ((n.bit_length() + 2) // 3)
    while True:
        nr = (2 * r + n // (r * r)) // 3
        if nr >= r:
            break
        r = nr
    while r * r * r > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


@dataclass(frozen=True)
class Params:
    """All tuning constants of one computation, derived once from x."""

    x: int
    alpha: Fraction
    y_max: int
    a: int
    c: int
    L: int
    sqrt_x: int
    z: int
    threads: int = 1
    packed: bool = False

    @property
    def block(self) -> int:
        return 1 << self.L


def _default_alpha(x: int) -> Fraction:
    # Balances the O(a**2) easy-leaf enumeration against the O(z) sieve for
    # this implementation's constant factors; tunable via overrides/bench.
    return Fraction(max(1, round(1.8 * math.log(x) ** (2.0 / 3.0))))


def _default_L(x: int, z: int) -> int:
    # Block length grows like x**(1/3) (plus a constant-factor boost that
    # suits the vectorised sieve), but never so large that [1, z] has fewer
    # than ~8 blocks, which would starve job and thread splitting.
    want = (x.bit_length() + 2) // 3 + 4
    cap = (z // 8).bit_length() - 1 if z >= 8 * 64 else 6
    return min(max(6, min(want, cap)), 20)


def _ceil_alpha_cbrt(x: int, alpha: Fraction) -> int:
    """Smallest integer y with y >= alpha * x**(1/3), exactly."""
    p, q = alpha.numerator, alpha.denominator
    t = p * p * p * x
    y = icbrt(t) // q
    while (y * q) ** 3 < t:
        y += 1
    while y > 1 and ((y - 1) * q) ** 3 >= t:
        y -= 1
    return y


def select_params(
    x: int,
    *,
    alpha: Fraction | int | str | None = None,
    c: int | None = None,
    L: int | None = None,
    threads: int | None = None,
    packed: bool = False,
) -> Params:
    """Derive all tuning constants for computing pi(x).

    y_max is clamped into [ceil(x**(1/3)), isqrt(x)]; a = pi(y_max); the
    wheel size is capped below a.  Overrides that would violate the Params
    invariants raise ValueError.
    """
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    if alpha is None:
        alpha_f = _default_alpha(x)
    else:
        alpha_f = Fraction(alpha)
        if alpha_f <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")

    y_lo = icbrt(x)
    if y_lo**3 < x:
        y_lo += 1
    y_lo = max(2, y_lo)
    y_hi = max(2, math.isqrt(x))
    y = min(max(_ceil_alpha_cbrt(x, alpha_f), y_lo), y_hi)

    a = oracle.pi_naive(y)

    if c is not None and not 1 <= c <= 8:
        raise ValueError(f"wheel size c must be in 1..8, got {c}")
    c_eff = min(c if c is not None else 6, 8, a - 1)
    c_eff = max(c_eff, 0)

    if L is not None:
        if not 6 <= L <= MAX_L:
            raise ValueError(f"L must be in 6..{MAX_L}, got {L}")
        L_eff = L
    else:
        L_eff = _default_L(x, x // y)

    n_threads = threads if threads is not None else 1
    if n_threads < 1:
        raise ValueError(f"threads must be >= 1, got {n_threads}")

    return Params(
        x=x,
        alpha=alpha_f,
        y_max=y,
        a=a,
        c=c_eff,
        L=L_eff,
        sqrt_x=math.isqrt(x),
        z=x // y,
        threads=n_threads,
        packed=packed,
    )


@dataclass(frozen=True)
class Tables:
    """The three shared read-only lookup structures."""

    pt: PrimeTable
    spt: SparsePiTable
    wheel: Wheel


def build_tables(params: Params) -> Tables:
    pt = build_prime_table(params.y_max)
    spt = build_sparse_pi(pt)
    wheel = build_wheel(params.c)
    return Tables(pt=pt, spt=spt, wheel=wheel)


# ---------------------------------------------------------------------------
# Leaf sums that never touch the sieve
# ---------------------------------------------------------------------------


def ordinary_leaves(x: int, params: Params, tables: Tables | None = None) -> int:
    """S0 = sum of mu(n) * phi(x // n, c) over squarefree n <= y_max with
    p_min(n) > p_c (n = 1 included)."""
    tb = tables or build_tables(params)
    w = tb.wheel
    total = phi_wheel(w, x)  # the n = 1 term
    if params.y_max >= 2:
        m, mu, _ = squarefree_arrays(tb.pt, params.c, params.y_max)
        if len(m):
            vals = phi_wheel_vec(w, x // m)
            total += int((mu * vals).sum())
    return total


def _level_arrays(params: Params, tb: Tables):
    """Static per-level bounds for the special-leaf strata, levels c+1..a.

    Everything is a plain int64 vector indexed by b - (c+1).
    """
    x, y, c, a = params.x, params.y_max, params.c, params.a
    p = tb.pt.padded[c + 1 : a + 1]
    bs = np.arange(c + 1, a + 1, dtype=np.int64)
    A = x // (p * p)  # q <= A  <=>  z >= p_b (the leaf is not trivial)
    E = x // (p * (y + 1))  # q > E  <=>  z <= y
    icb = icbrt(x)
    F = np.zeros_like(p)
    small = p <= icb
    F[small] = x // (p[small] ** 3)  # q > F  <=>  z < p_b**2
    return bs, p, A, E, F


def easy_leaves(
    x: int,
    params: Params,
    tables: Tables | None = None,
    b_filter=None,
) -> int:
    """Sum of -mu(m) * v over special leaves classified trivial or easy.

    v = 1 for trivial leaves and pi(z) - b + 2 for easy ones, with pi taken
    from the sparse table.  ``b_filter`` restricts the sum to the given
    prime indices (None means every level in (c, a]).
    """
    tb = tables or build_tables(params)
    y, c, a = params.y_max, params.c, params.a
    if a <= c:
        return 0
    bs, p, A, E, F = _level_arrays(params, tb)

    if b_filter is None:
        keep = np.ones(len(bs), dtype=bool)
    else:
        wanted = np.asarray(sorted(set(int(b) for b in b_filter)), dtype=np.int64)
        keep = np.isin(bs, wanted)

    total = 0

    # Trivial leaves: q prime in (max(p_b, A), y]; each contributes +1.
    t = np.minimum(A, y)
    cnt = a - np.maximum(bs, pi_lookup_vec(tb.spt, tb.pt, t))
    total += int(np.maximum(cnt, 0)[keep].sum())

    # Easy leaves with prime m = q: q in (q_excl, q_hi] per level.
    primes = tb.pt.primes
    q_excl = np.maximum.reduce([p, y // p, E, F])
    q_hi = np.minimum(A, y)
    live = np.flatnonzero(keep & (q_hi > q_excl))
    for i in live:
        b = int(bs[i])
        pb = int(p[i])
        i1 = int(np.searchsorted(primes, int(q_excl[i]), side="right"))
        i2 = int(np.searchsorted(primes, int(q_hi[i]), side="right"))
        if i2 <= i1:
            continue
        q = primes[i1:i2]
        zv = x // (pb * q)
        v = pi_lookup_vec(tb.spt, tb.pt, zv) - b + 2
        total += int(v.sum())

    # Easy leaves with composite m: possible only while p_{b+1}**2 <= y.
    pr = tb.pt.padded
    for i in range(len(bs)):
        b = int(bs[i])
        if b + 1 > a or int(pr[b + 1]) ** 2 > y:
            break
        if not keep[i]:
            continue
        m_hi = int(q_hi[i])
        m_excl = int(q_excl[i])
        if m_hi <= m_excl:
            continue
        pb = int(p[i])
        m, mu, _ = squarefree_arrays(tb.pt, b, m_hi, depth_min=2)
        if not len(m):
            continue
        sel = m > m_excl
        m, mu = m[sel], mu[sel]
        if not len(m):
            continue
        zv = x // (pb * m)
        v = pi_lookup_vec(tb.spt, tb.pt, zv) - b + 2
        total += int((-mu * v).sum())

    return total


def classify_special_leaf(
    m: int, b: int, x: int, params: Params, tables: Tables | None = None
) -> LeafClass:
    """Classify the special leaf (m, b); raises if (m, b) is not one."""
    tb = tables or build_tables(params)
    c, a, y = params.c, params.a, params.y_max
    if not c < b <= a:
        raise ValueError(f"b={b} outside (c, a] = ({c}, {a}]")
    pb = tb.pt.p(b)
    if not (1 <= m <= y < m * pb):
        raise ValueError(f"m={m} violates m <= y_max < m * p_b")
    # squarefree with p_min(m) > p_b
    r = m
    for q in tb.pt.primes:
        q = int(q)
        if q * q > r:
            break
        if r % q == 0:
            if q <= pb:
                raise ValueError(f"m={m} has prime factor {q} <= p_b={pb}")
            r //= q
            if r % q == 0:
                raise ValueError(f"m={m} is not squarefree")
    if 1 < r <= pb:
        raise ValueError(f"m={m} has prime factor {r} <= p_b={pb}")
    z = x // (m * pb)
    if z < pb:
        return LeafClass.TRIVIAL
    if z < pb * pb and z <= y:
        return LeafClass.EASY
    return LeafClass.HARD


# ---------------------------------------------------------------------------
# The chunked hard-leaf sieve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChunkOutcome:
    """Everything a chunk contributes, sufficient for an exact merge.

    s_hard uses exact phi bases; C counts primes in [lo, hi); (H, S) are the
    hit count and chunk-local prime-prefix sum for positions x // p with p a
    prime in (y_max, sqrt(x)], and (G, T) the same for such p lying in the
    chunk itself.
    """

    lo: int
    hi: int
    s_hard: int
    C: int
    H: int
    S: int
    G: int
    T: int


@dataclass
class _BlockResult:
    """One block's contribution, computed without any phi or prime bases.

    ``tally[lev]`` accumulates -mu over hard leaves whose phi(block_lo - 1,
    lev) base was unknown while the block was sieved; ``delta_phi[lev]`` is
    the block's survivor count at each tracked level.  The P2 fields are
    block-local in the same way (H scales the unknown prime prefix).
    """

    s_local: int
    tally: np.ndarray
    delta_phi: np.ndarray
    C: int
    H: int
    S_local: int
    G: int
    T_local: int


class _ChunkCtx:
    """Immutable per-chunk state shared by every block task."""

    def __init__(
        self,
        x: int,
        params: Params,
        tb: Tables,
        lo: int,
        hi: int,
        counter_mode: bool = False,
    ):
        if x > X_CAPACITY:
            raise CapacityError(f"x={x} exceeds engine capacity 2**62")
        self.x = x
        self.params = params
        self.tb = tb
        self.lo = lo
        self.hi = hi
        self.counter_mode = counter_mode
        self.y = params.y_max
        self.c = params.c
        self.a = params.a
        self.isqrt_x = params.sqrt_x
        self.block = params.block
        self.bucket_shift = max(4, params.L - 12)
        pt = tb.pt
        self.pr = pt.padded
        self.primes = pt.primes

        bs, p, A, E, F = _level_arrays(params, tb)
        q_excl_easy = np.maximum.reduce([p, self.y // p, E, F])
        # Hard stratum: not trivial (m <= A) and not easy (m <= max(E, F)),
        # with m > max(y // p_b, p_b) from the special-leaf conditions.
        self.h_hi = np.minimum.reduce([np.full_like(p, self.y), A, np.maximum(E, F)])
        self.h_excl = np.maximum(self.y // p, p)
        nonempty = self.h_hi > self.h_excl
        self.hard_levels = bs[nonempty]
        self.b_track = int(self.hard_levels.max()) if len(self.hard_levels) else self.c
        self.levels_p = p
        self.bs = bs

        # Conservative z-extents per level for the per-block prefilter.
        self.z_lo_lvl = np.zeros(len(bs), dtype=np.int64)
        self.z_hi_lvl = np.zeros(len(bs), dtype=np.int64)
        self.z_lo_lvl[nonempty] = x // (p[nonempty] * self.h_hi[nonempty])
        self.z_hi_lvl[nonempty] = x // (p[nonempty] * (self.h_excl[nonempty] + 1))
        self.nonempty = nonempty

        # Composite hard leaves, resident per level, sorted by z and split
        # into the prime-state part (z < p_{b-1}**2) and the counter part.
        self.comp: dict[int, tuple] = {}
        for i in np.flatnonzero(nonempty):
            b = int(bs[i])
            if b + 1 > self.a or int(self.pr[b + 1]) ** 2 > self.y:
                break
            pb = int(p[i])
            m_hi = min(int(self.h_hi[i]), x // (pb * lo))
            m_excl = max(int(self.h_excl[i]), x // (pb * hi))
            if m_hi <= m_excl:
                continue
            m, mu, _ = squarefree_arrays(pt, b, m_hi, depth_min=2)
            if not len(m):
                continue
            sel = m > m_excl
            m, mu = m[sel], mu[sel]
            if not len(m):
                continue
            zv = x // (pb * m)
            order = np.argsort(zv, kind="stable")
            zv, mu = zv[order], mu[order]
            cut = int(np.searchsorted(zv, int(self.pr[b - 1]) ** 2))
            self.comp[b] = (zv[:cut], mu[:cut], zv[cut:], mu[cut:])

        # P2 preparation: primes p in (y, sqrt(x)] with x // p in the chunk,
        # found by an auxiliary local sieve; their hit positions arrive
        # ascending because x // p is non-increasing in p.
        p_lo = max(self.y + 1, x // hi + 1)
        p_hi = min(self.isqrt_x, x // lo)
        if p_lo <= p_hi:
            aux = _primes_in_range(pt, p_lo, p_hi)
            self.p2_zhits = (x // aux)[::-1].copy()
        else:
            self.p2_zhits = np.empty(0, dtype=np.int64)

    def levels_hitting(self, bl: int, bh: int) -> np.ndarray:
        """Hard levels whose z-extent intersects the block [bl, bh)."""
        mask = self.nonempty & (self.z_lo_lvl < bh) & (self.z_hi_lvl >= bl)
        return self.bs[mask]


def _primes_in_range(pt: PrimeTable, lo: int, hi: int) -> np.ndarray:
    """Primes in [lo, hi] via a local sieve with base primes from the table."""
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    r = math.isqrt(hi)
    if r > pt.y_max:
        raise ValueError("prime table too small to sieve the requested range")
    mark = np.ones(hi - lo + 1, dtype=bool)
    for p in pt.primes:
        p = int(p)
        if p > r:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start <= hi:
            mark[start - lo :: p] = False
    if lo <= 1:
        mark[: min(2 - lo, len(mark))] = False
    return np.flatnonzero(mark) + lo


def _prime_hard_slice(ctx: _ChunkCtx, b: int, bl: int, bh: int):
    """z values (ascending) of prime-m hard leaves at level b with z in
    [bl, bh), split into (prime-state part, counter part)."""
    i = b - ctx.c - 1
    pb = int(ctx.levels_p[i])
    q_ex = max(int(ctx.h_excl[i]), ctx.x // (pb * bh))
    q_hi = min(int(ctx.h_hi[i]), ctx.x // (pb * bl))
    if q_hi <= q_ex:
        return None
    i1 = int(np.searchsorted(ctx.primes, q_ex, side="right"))
    i2 = int(np.searchsorted(ctx.primes, q_hi, side="right"))
    if i2 <= i1:
        return None
    zv = ctx.x // (pb * ctx.primes[i1:i2][::-1])  # ascending in z
    cut = int(np.searchsorted(zv, int(ctx.pr[b - 1]) ** 2))
    return zv[:cut], zv[cut:]


_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U63 = np.uint64(63)


def _count_present_leq(
    q_loc: np.ndarray, bits: np.ndarray, word_cum: np.ndarray
) -> np.ndarray:
    """Present-position counts <= q for each local position: whole-word
    prefix totals plus a popcount of the masked final word."""
    w = q_loc >> 6
    mask = (_U2 << (q_loc.astype(np.uint64) & _U63)) - _U1
    part = np.bitwise_count(bits[w] & mask).astype(np.int64)
    return part + np.where(w > 0, word_cum[np.maximum(w - 1, 0)], 0)


def _process_block(ctx: _ChunkCtx, bl: int, bh: int) -> _BlockResult:
    """Sieve one block and collect its base-free contributions.

    Reads only the immutable chunk context: no state is shared with other
    blocks, which is what makes both the thread rounds and the distributed
    jobs communication-free.
    """
    x, y, c = ctx.x, ctx.y, ctx.c
    pr, primes = ctx.pr, ctx.primes
    B = bh - bl
    wheel_sl = ctx.tb.wheel.slice(bl, B)
    # Presence lives bit-packed in uint64 words (little-endian bit order);
    # per-word popcounts make prefix queries O(1) after a lazy cumsum.
    packed = np.packbits(wheel_sl, bitorder="little")
    nw = (B + 63) >> 6
    raw = np.zeros(nw * 8, dtype=np.uint8)
    raw[: len(packed)] = packed
    bits = raw.view(np.uint64)
    word_present = np.bitwise_count(bits).astype(np.int64)
    word_cum = np.cumsum(word_present)
    cum_dirty = False

    b_track = ctx.b_track
    tally = np.zeros(b_track + 2, dtype=np.int64)
    delta_phi = np.zeros(b_track + 2, dtype=np.int64)
    removed = np.zeros(b_track + 2, dtype=np.int64)
    s_local = 0

    sq = math.isqrt(bh - 1)
    LS = pi_lookup(ctx.tb.spt, ctx.tb.pt, min(sq, y))

    tree = None
    if ctx.counter_mode:
        flags = np.zeros(ctx.block, dtype=np.uint8)
        flags[:B] = wheel_sl
        tree = counter_init(ctx.params.L, flags)
        if ctx.params.packed:
            from .counters import counter_pack_roundtrip

            tree = counter_pack_roundtrip(tree)

    # Collect this block's hard-leaf queries, keyed by level for the counter
    # part; the prime-state part is answered after the block is fully sieved.
    level_queries: dict[int, list[tuple[np.ndarray, np.ndarray | None]]] = {}
    hp_z: list[np.ndarray] = []
    hp_lev: list[np.ndarray] = []
    hp_mu: list[np.ndarray] = []
    for b in ctx.levels_hitting(bl, bh):
        b = int(b)
        got = _prime_hard_slice(ctx, b, bl, bh)
        if got is not None:
            zp, zc = got
            if len(zc):
                level_queries.setdefault(b, []).append((zc, None))
            if len(zp):
                hp_z.append(zp)
                hp_lev.append(np.full(len(zp), b - 1, dtype=np.int64))
                hp_mu.append(np.full(len(zp), -1, dtype=np.int64))
        comp = ctx.comp.get(b)
        if comp is not None:
            zp, mup, zc, muc = comp
            j1, j2 = np.searchsorted(zc, (bl, bh))
            if j2 > j1:
                level_queries.setdefault(b, []).append((zc[j1:j2], muc[j1:j2]))
            j1, j2 = np.searchsorted(zp, (bl, bh))
            if j2 > j1:
                hp_z.append(zp[j1:j2])
                hp_lev.append(np.full(j2 - j1, b - 1, dtype=np.int64))
                hp_mu.append(mup[j1:j2])

    def answer_level(b: int) -> None:
        nonlocal s_local, cum_dirty, word_cum
        batch = level_queries.get(b)
        if not batch:
            return
        if cum_dirty:
            word_cum = np.cumsum(word_present)
            cum_dirty = False
        for zq, mu in batch:
            q_loc = zq - bl
            if tree is not None:
                cnt = tree.count_leq_batch(q_loc + 1)
            else:
                cnt = _count_present_leq(q_loc, bits, word_cum)
            if mu is None:
                s_local += int(cnt.sum())
                tally[b - 1] += len(cnt)
            else:
                s_local += int((-mu * cnt).sum())
                tally[b - 1] += int(-mu.sum())

    for b in range(c + 1, LS + 1):
        answer_level(b)
        p = int(pr[b])
        start = ((bl + p - 1) // p) * p - bl
        if start >= B:
            continue
        v = np.arange(start, B, p, dtype=np.int64)
        w = v >> 6
        sh = v.astype(np.uint64) & _U63
        alive = (bits[w] >> sh) & _U1
        keep = alive == 1
        if not keep.any():
            continue
        v, w, sh = v[keep], w[keep], sh[keep]
        if b <= b_track:
            removed[b] = len(v)
        # Per-word OR of the cleared bits: v is ascending, so equal words
        # form runs and one reduceat combines each run's mask.
        m = _U1 << sh
        run_starts = np.flatnonzero(np.diff(w)) + 1
        starts = np.concatenate([[0], run_starts])
        or_masks = np.bitwise_or.reduceat(m, starts)
        uw = w[starts]
        bits[uw] &= ~or_masks
        word_present[uw] -= np.bitwise_count(or_masks).astype(np.int64)
        cum_dirty = True
        if tree is not None:
            tree.remove_batch(v + 1)
    answer_level(LS + 1)
    # Counter-state queries can only exist up to level LS + 1: a query at
    # level b needs p_{b-1}**2 <= z < bh.
    assert all(b <= LS + 1 for b in level_queries), "unanswered counter query level"

    # Full primality for the block: survivors are 1 and the primes above
    # p_LS; primes at or below p_LS (and the wheel primes) come from the table.
    is_p = np.unpackbits(bits.view(np.uint8), bitorder="little", count=B)
    one_in = 1 if bl == 1 else 0
    if one_in:
        is_p[0] = 0
    j1 = int(np.searchsorted(primes, bl, side="left"))
    j2 = int(np.searchsorted(primes, bh, side="left"))
    back = max(c, LS)
    n_back = max(0, min(back, j2) - j1)
    if n_back:
        is_p[primes[j1 : j1 + n_back] - bl] = 1
    loc_pref = np.cumsum(is_p, dtype=np.int64)
    nprime = int(loc_pref[-1])

    # phi survivor deltas: exact counts for the sieved levels, and the
    # primes-plus-one closed form for tracked levels above the sieve bound
    # (at level b >= max(c, LS) the block's survivors are 1 and the primes
    # exceeding p_b).
    wheel_total = int(wheel_sl.sum(dtype=np.int64))
    delta_phi[c] = wheel_total
    top1 = min(LS, b_track)
    if top1 > c:
        delta_phi[c + 1 : top1 + 1] = wheel_total - np.cumsum(removed[c + 1 : top1 + 1])
    zone2_lo = max(LS, c) + 1
    if b_track >= zone2_lo:
        hb = np.arange(zone2_lo, b_track + 1, dtype=np.int64)
        idx_leq = np.clip(hb, j1, j2) - j1
        delta_phi[zone2_lo : b_track + 1] = one_in + nprime - idx_leq

    # P2 accumulation: hits x // p landing here, and qualifying primes here.
    zh = ctx.p2_zhits
    i1, i2 = np.searchsorted(zh, (bl, bh))
    H = int(i2 - i1)
    S_local = int(loc_pref[zh[i1:i2] - bl].sum()) if H else 0
    G = 0
    T_local = 0
    if bh > y + 1 and bl <= ctx.isqrt_x:
        pos = np.flatnonzero(is_p) + bl
        sel = (pos > y) & (pos <= ctx.isqrt_x)
        if sel.any():
            G = int(sel.sum())
            T_local = int(loc_pref[pos[sel] - bl].sum())

    # Prime-state hard leaves: phi(z, lev) locally is [1 in range] plus the
    # count of in-block primes above p_lev.
    if hp_z:
        zq = np.concatenate(hp_z) - bl
        lev = np.concatenate(hp_lev)
        mu = np.concatenate(hp_mu)
        plev = pr[lev]
        t = np.minimum(zq + bl, plev)
        cnt_small = np.maximum(
            np.searchsorted(primes, t, side="right") - j1, 0
        )
        val = one_in + loc_pref[zq] - cnt_small
        s_local += int((-mu * val).sum())
        np.subtract.at(tally, lev, mu)

    return _BlockResult(
        s_local=s_local,
        tally=tally,
        delta_phi=delta_phi,
        C=nprime,
        H=H,
        S_local=S_local,
        G=G,
        T_local=T_local,
    )


def _fold_block(
    res: _BlockResult, phi_run: np.ndarray, accum: dict
) -> None:
    """Resolve one block's tallies against the exact running bases, in block
    order; mutates phi_run and the accumulator."""
    contrib = res.s_local
    for lev in np.flatnonzero(res.tally):
        contrib += int(res.tally[lev]) * int(phi_run[lev])
    accum["s_hard"] += contrib
    phi_run += res.delta_phi
    accum["S"] += res.S_local + res.H * accum["C"]
    accum["T"] += res.T_local + res.G * accum["C"]
    accum["H"] += res.H
    accum["G"] += res.G
    accum["C"] += res.C


def sieve_chunk(
    x: int,
    params: Params,
    lo: int,
    hi: int,
    phi_base,
    *,
    tables: Tables | None = None,
    counter_mode: bool = False,
) -> ChunkOutcome:
    """Sieve [lo, hi) in blocks of 2**L and return the chunk's contributions.

    phi_base must supply exact phi(lo - 1, b) for every c <= b <= a (a
    sequence indexed from level c).  The outcome is independent of how the
    surrounding range is split across other chunks.
    """
    if not 1 <= lo < hi <= params.z + 1:
        raise ValueError(f"chunk [{lo}, {hi}) outside [1, {params.z + 1})")
    tb = tables or build_tables(params)
    base = np.asarray(phi_base, dtype=np.int64)
    if len(base) < params.a - params.c + 1:
        raise ValueError(
            f"phi_base must cover levels {params.c}..{params.a} "
            f"({params.a - params.c + 1} values), got {len(base)}"
        )
    ctx = _ChunkCtx(x, params, tb, lo, hi, counter_mode=counter_mode)
    phi_run = np.zeros(ctx.b_track + 2, dtype=np.int64)
    phi_run[params.c : ctx.b_track + 1] = base[: ctx.b_track - params.c + 1]
    accum = {"s_hard": 0, "C": 0, "H": 0, "S": 0, "G": 0, "T": 0}
    for bl in range(lo, hi, ctx.block):
        bh = min(bl + ctx.block, hi)
        _fold_block(_process_block(ctx, bl, bh), phi_run, accum)
    return ChunkOutcome(
        lo=lo,
        hi=hi,
        s_hard=accum["s_hard"],
        C=accum["C"],
        H=accum["H"],
        S=accum["S"],
        G=accum["G"],
        T=accum["T"],
    )


def p2_from_outcomes(outcomes) -> int:
    """Merge ordered chunk outcomes covering [1, z] into the exact P2 value:
    sum over primes p in (y_max, sqrt(x)] of pi(x // p) - pi(p) + 1."""
    if not outcomes:
        raise ValueError("no outcomes to merge")
    ordered = sorted(outcomes, key=lambda o: o.lo)
    if ordered[0].lo != 1:
        raise ValueError(f"coverage must start at 1, got {ordered[0].lo}")
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.lo != prev.hi:
            raise ValueError(f"gap or overlap at {prev.hi}..{cur.lo}")
    total = 0
    pref = 0
    for o in ordered:
        total += o.S + o.H * pref
        total -= o.T + o.G * pref
        total += o.G
        pref += o.C
    return total


def pi(x: int, params: Params | None = None, *, counter_mode: bool = False) -> int:
    """Exact pi(x).  Falls back to the brute-force oracle below the small-x
    threshold where the combinatorial parameters degenerate."""
    if x < 2:
        if x < 0:
            raise ValueError(f"x must be >= 0, got {x}")
        return 0
    if x < SMALL_X_LIMIT:
        return oracle.pi_naive(x)
    if params is None:
        params = select_params(x)
    if x > X_CAPACITY:
        raise CapacityError(f"x={x} exceeds engine capacity 2**62")
    tb = build_tables(params)
    s0 = ordinary_leaves(x, params, tb)
    s_et = easy_leaves(x, params, tb)
    zero_base = np.zeros(params.a - params.c + 1, dtype=np.int64)
    out = sieve_chunk(
        x, params, 1, params.z + 1, zero_base, tables=tb, counter_mode=counter_mode
    )
    p2 = p2_from_outcomes([out])
    return s0 + s_et + out.s_hard + params.a - 1 - p2
