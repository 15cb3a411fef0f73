"""Parallel execution: thread rounds over blocks, and distributed jobs that
exchange nothing but their final numbers.

A job owns a contiguous run of sieve blocks plus a round-robin share of the
easy-leaf levels.  It rebuilds every table locally, bootstraps its phi bases
with the boundary algorithm, and emits a small text file; merging the files
reproduces the monolithic result exactly.  Shared-memory mode keeps the same
block decomposition but runs N consecutive blocks per round, recording the
contributions that depend on unknown bases in tallies which are resolved at
the round barrier.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import phi_engine
from .boundary import phi_boundary
from .phi_engine import (
    ChunkOutcome,
    Params,
    _ChunkCtx,
    _fold_block,
    _process_block,
    build_tables,
    ordinary_leaves,
    easy_leaves,
    p2_from_outcomes,
    select_params,
)

MAX_THREADS = 64

FORMAT_VERSION = 1

_RESULT_KEYS = (
    "format",
    "x",
    "alpha_num",
    "alpha_den",
    "c",
    "L",
    "ymax",
    "job",
    "jobs",
    "lo",
    "hi",
    "s_ordinary",
    "s_easy",
    "s_hard",
    "C",
    "H",
    "S",
    "G",
    "T",
)


class IntegrityError(ValueError):
    """A job result file is corrupt or inconsistent with its peers."""


class IncompleteMergeError(ValueError):
    """Jobs are missing from a merge; ``missing`` lists their indices."""

    def __init__(self, missing: list[int]):
        super().__init__(f"missing job indices: {missing}")
        self.missing = missing


@dataclass(frozen=True)
class JobSpec:
    """One job's share of the work: a chunk of [1, z] plus an easy-leaf
    residue class (levels b in (c, a] with b % jobs == job)."""

    x: int
    params: Params
    job: int
    jobs: int
    lo: int
    hi: int

    def easy_levels(self) -> np.ndarray:
        c, a = self.params.c, self.params.a
        bs = np.arange(c + 1, a + 1, dtype=np.int64)
        return bs[bs % self.jobs == self.job]


@dataclass(frozen=True)
class JobResult:
    """The complete communication-free output of one job."""

    x: int
    alpha_num: int
    alpha_den: int
    c: int
    L: int
    ymax: int
    job: int
    jobs: int
    lo: int
    hi: int
    s_ordinary: int | None
    s_easy: int
    outcome: ChunkOutcome
    format_version: int = FORMAT_VERSION

    def lines(self) -> list[str]:
        out = [
            f"format = {self.format_version}",
            f"x = {self.x}",
            f"alpha_num = {self.alpha_num}",
            f"alpha_den = {self.alpha_den}",
            f"c = {self.c}",
            f"L = {self.L}",
            f"ymax = {self.ymax}",
            f"job = {self.job}",
            f"jobs = {self.jobs}",
            f"lo = {self.lo}",
            f"hi = {self.hi}",
        ]
        if self.s_ordinary is not None:
            out.append(f"s_ordinary = {self.s_ordinary}")
        out += [
            f"s_easy = {self.s_easy}",
            f"s_hard = {self.outcome.s_hard}",
            f"C = {self.outcome.C}",
            f"H = {self.outcome.H}",
            f"S = {self.outcome.S}",
            f"G = {self.outcome.G}",
            f"T = {self.outcome.T}",
        ]
        return out


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a; detects truncated or corrupted result files."""
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def write_job_result(res: JobResult, path: str | Path) -> None:
    body = "\n".join(res.lines()) + "\n"
    checksum = fnv1a64(body.encode())
    Path(path).write_text(body + f"checksum = {checksum}\n")


def read_job_result(path: str | Path) -> JobResult:
    """Parse and checksum-verify one result file (strict key = value lines)."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[-1].startswith("checksum = "):
        raise IntegrityError(f"{path}: missing checksum line")
    body = "\n".join(lines[:-1]) + "\n"
    try:
        stated = int(lines[-1].split(" = ", 1)[1])
    except (IndexError, ValueError) as exc:
        raise IntegrityError(f"{path}: malformed checksum line") from exc
    if fnv1a64(body.encode()) != stated:
        raise IntegrityError(f"{path}: checksum mismatch")
    fields: dict[str, int] = {}
    for ln in lines[:-1]:
        parts = ln.split(" = ")
        if len(parts) != 2 or not parts[0] or " " in parts[0]:
            raise IntegrityError(f"{path}: malformed line {ln!r}")
        key, val = parts
        if key not in _RESULT_KEYS:
            raise IntegrityError(f"{path}: unknown key {key!r}")
        if key in fields:
            raise IntegrityError(f"{path}: duplicate key {key!r}")
        try:
            fields[key] = int(val)
        except ValueError as exc:
            raise IntegrityError(f"{path}: non-integer value in {ln!r}") from exc
    required = set(_RESULT_KEYS) - {"s_ordinary"}
    missing = required - set(fields)
    if missing:
        raise IntegrityError(f"{path}: missing keys {sorted(missing)}")
    if fields["format"] != FORMAT_VERSION:
        raise IntegrityError(f"{path}: unsupported format {fields['format']}")
    outcome = ChunkOutcome(
        lo=fields["lo"],
        hi=fields["hi"],
        s_hard=fields["s_hard"],
        C=fields["C"],
        H=fields["H"],
        S=fields["S"],
        G=fields["G"],
        T=fields["T"],
    )
    return JobResult(
        x=fields["x"],
        alpha_num=fields["alpha_num"],
        alpha_den=fields["alpha_den"],
        c=fields["c"],
        L=fields["L"],
        ymax=fields["ymax"],
        job=fields["job"],
        jobs=fields["jobs"],
        lo=fields["lo"],
        hi=fields["hi"],
        s_ordinary=fields.get("s_ordinary"),
        s_easy=fields["s_easy"],
        outcome=outcome,
    )


def split_jobs(x: int, params: Params, J: int) -> list[JobSpec]:
    """Partition [1, z] into J chunks cut at block multiples, plus the
    easy-level residue classes."""
    if J < 1:
        raise ValueError(f"J must be >= 1, got {J}")
    z = params.z
    B = params.block
    if J > 1 and J * B > z:
        raise ValueError(
            f"J={J} jobs of at least one {B}-position block will not fit in z={z}"
        )
    n_blocks = (z + B - 1) // B
    base, extra = divmod(n_blocks, J)
    specs = []
    lo = 1
    for j in range(J):
        take = base + (1 if j < extra else 0)
        hi = min(lo + take * B, z + 1)
        specs.append(JobSpec(x=x, params=params, job=j, jobs=J, lo=lo, hi=hi))
        lo = hi
    return specs


def run_job(spec: JobSpec) -> JobResult:
    """Execute one job in isolation: all tables are rebuilt locally and the
    phi bases come from the boundary bootstrap, so nothing is read from any
    other job."""
    params = spec.params
    tb = build_tables(params)
    base = phi_boundary(spec.lo - 1, params, tb).values
    outcome = phi_engine.sieve_chunk(
        spec.x, params, spec.lo, spec.hi, base, tables=tb
    )
    s_easy = easy_leaves(spec.x, params, tb, b_filter=spec.easy_levels())
    s_ord = ordinary_leaves(spec.x, params, tb) if spec.job == 0 else None
    return JobResult(
        x=spec.x,
        alpha_num=params.alpha.numerator,
        alpha_den=params.alpha.denominator,
        c=params.c,
        L=params.L,
        ymax=params.y_max,
        job=spec.job,
        jobs=spec.jobs,
        lo=spec.lo,
        hi=spec.hi,
        s_ordinary=s_ord,
        s_easy=s_easy,
        outcome=outcome,
    )


def merge_results(results: list[JobResult]) -> int:
    """Combine a complete set of job results into exact pi(x).

    Input order is irrelevant; duplicates, echo mismatches, or missing jobs
    raise.  The sum is s_ordinary + sum(s_easy) + sum(s_hard) + a - 1 - P2.
    """
    if not results:
        raise IncompleteMergeError([0])
    first = results[0]
    J = first.jobs
    echo = ("x", "alpha_num", "alpha_den", "c", "L", "ymax", "jobs")
    for r in results:
        for key in echo:
            if getattr(r, key) != getattr(first, key):
                raise IntegrityError(
                    f"job {r.job}: {key} echo mismatch "
                    f"({getattr(r, key)} != {getattr(first, key)})"
                )
    seen: dict[int, JobResult] = {}
    for r in results:
        if r.job in seen:
            raise IntegrityError(f"duplicate job index {r.job}")
        if not 0 <= r.job < J:
            raise IntegrityError(f"job index {r.job} outside 0..{J - 1}")
        seen[r.job] = r
    missing = sorted(set(range(J)) - set(seen))
    if missing:
        raise IncompleteMergeError(missing)
    ordered = [seen[j] for j in range(J)]
    if ordered[0].s_ordinary is None:
        raise IntegrityError("job 0 is missing s_ordinary")

    from fractions import Fraction

    params = select_params(
        first.x,
        alpha=Fraction(first.alpha_num, first.alpha_den),
        c=first.c,
        L=first.L,
    )
    if params.y_max != first.ymax or params.c != first.c or params.L != first.L:
        raise IntegrityError(
            f"parameter echo (ymax={first.ymax}, c={first.c}, L={first.L}) "
            f"disagrees with derived ({params.y_max}, {params.c}, {params.L})"
        )
    p2 = p2_from_outcomes([r.outcome for r in ordered])
    total = ordered[0].s_ordinary + params.a - 1 - p2
    for r in ordered:
        total += r.s_easy + r.outcome.s_hard
    return total


@dataclass
class TallySheet:
    """Per-block record of base-dependent sums deferred to the round barrier:
    tally[lev] holds the summed -mu of hard leaves that needed
    phi(block_lo - 1, lev), and prime_hits scales the unknown prime prefix."""

    block_lo: int
    tally: np.ndarray
    prime_hits: int
    partial: int = 0


def run_threads(
    x: int,
    params: Params | None = None,
    N: int = 1,
    sheets: list[TallySheet] | None = None,
) -> int:
    """pi(x) with N block-sieving threads per round.

    Each round sieves N consecutive blocks in parallel against block-local
    state only; the barrier then folds survivor counts in block order to
    recover exact phi bases and resolves the recorded tallies.  The result
    is bit-identical to the sequential path for every N.  Passing ``sheets``
    collects the per-block tally records for inspection.
    """
    if N < 1 or N > MAX_THREADS:
        raise ValueError(f"N must be in 1..{MAX_THREADS}, got {N}")
    if x < 2:
        return 0
    if x < phi_engine.SMALL_X_LIMIT:
        from . import oracle

        return oracle.pi_naive(x)
    if params is None:
        params = select_params(x, threads=N)
    tb = build_tables(params)
    s0 = ordinary_leaves(x, params, tb)
    s_et = easy_leaves(x, params, tb)
    z = params.z
    ctx = _ChunkCtx(x, params, tb, 1, z + 1, counter_mode=False)
    phi_run = np.zeros(ctx.b_track + 2, dtype=np.int64)
    accum = {"s_hard": 0, "C": 0, "H": 0, "S": 0, "G": 0, "T": 0}
    blocks = [(bl, min(bl + ctx.block, z + 1)) for bl in range(1, z + 1, ctx.block)]

    def fold(bl: int, res) -> None:
        if sheets is not None:
            sheets.append(
                TallySheet(
                    block_lo=bl,
                    tally=res.tally.copy(),
                    prime_hits=res.H,
                    partial=res.s_local,
                )
            )
        _fold_block(res, phi_run, accum)

    if N == 1:
        for bl, bh in blocks:
            fold(bl, _process_block(ctx, bl, bh))
    else:
        with ThreadPoolExecutor(max_workers=N) as pool:
            for r0 in range(0, len(blocks), N):
                round_blocks = blocks[r0 : r0 + N]
                futs = [
                    pool.submit(_process_block, ctx, bl, bh)
                    for bl, bh in round_blocks
                ]
                # Round barrier: folding happens in block order regardless
                # of completion order.
                for (bl, _), fut in zip(round_blocks, futs):
                    fold(bl, fut.result())
    out = ChunkOutcome(
        lo=1,
        hi=z + 1,
        s_hard=accum["s_hard"],
        C=accum["C"],
        H=accum["H"],
        S=accum["S"],
        G=accum["G"],
        T=accum["T"],
    )
    p2 = p2_from_outcomes([out])
    return s0 + s_et + out.s_hard + params.a - 1 - p2
