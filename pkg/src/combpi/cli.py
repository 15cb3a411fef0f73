"""Command-line surface.

Subcommands: ``pi`` (compute pi(x)), ``job``/``merge`` (the distributed
workflow), ``verify`` (randomized oracle comparison under multiple parameter
sets), ``bench`` (timing and data-structure byte accounting), and ``li``
(the logarithmic integral).

The result value is the only thing printed to stdout; everything else goes
to stderr so the job/merge pipeline stays scriptable.  Exit codes: 0 ok,
1 usage or computation failure, 2 integrity, 3 incomplete merge.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction

from . import jobs, oracle, phi_engine
from .phi_engine import CapacityError, select_params

X_MAX = 1 << 86

# Euler-Mascheroni constant, 30 significant digits.
EULER_GAMMA = 0.577215664901532860606512090082


def li(x: float) -> float:
    """Logarithmic integral via the rapidly converging series
    li(x) = gamma + ln ln x + sum_{k>=1} (ln x)**k / (k * k!),
    with compensated summation; absolute truncation error below 1e-6."""
    if x <= 1:
        raise ValueError(f"li(x) requires x > 1, got {x}")
    lx = math.log(x)
    total = 0.0
    comp = 0.0
    term = 1.0
    k = 0
    while True:
        k += 1
        term *= lx / k
        add = term / k
        # Kahan step
        yv = add - comp
        t = total + yv
        comp = (t - total) - yv
        total = t
        if add < 1e-9 and k > lx:
            break
    return EULER_GAMMA + math.log(lx) + total


def parse_x(text: str) -> int:
    """Decimal, or the shorthands 10^n and 2^m."""
    text = text.strip()
    for base in (10, 2):
        prefix = f"{base}^"
        if text.startswith(prefix):
            return base ** int(text[len(prefix) :])
    return int(text)


def _params_from_args(x: int, args) -> phi_engine.Params:
    alpha = Fraction(args.alpha) if args.alpha is not None else None
    return select_params(
        x,
        alpha=alpha,
        c=args.wheel,
        L=args.block_log,
        threads=args.threads,
        packed=args.packed_counters,
    )


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alpha", help="y_max = alpha * x^(1/3); integer or p/q")
    sub.add_argument("--wheel", type=int, help="wheel size c (1..8)")
    sub.add_argument("--block-log", type=int, help="log2 of the sieve block length")
    sub.add_argument("--threads", type=int, help="sieving threads (env COMBPI_THREADS)")
    sub.add_argument(
        "--packed-counters",
        action="store_true",
        help="use the 2-bit-average packed counter layout",
    )


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="combpi", description="Exact prime counting, combinatorial method."
    )
    sp = ap.add_subparsers(dest="command", required=True)

    p_pi = sp.add_parser("pi", help="compute pi(x)")
    p_pi.add_argument("x", help="x as decimal, 10^n, or 2^m")
    p_pi.add_argument("--li", action="store_true", dest="with_li",
                      help="also print li(x) - pi(x) to 3 decimals")
    _add_param_flags(p_pi)

    p_job = sp.add_parser("job", help="run one distributed job, write its file")
    p_job.add_argument("x", help="x as decimal, 10^n, or 2^m")
    p_job.add_argument("--job", required=True, metavar="j/J",
                       help="job index and total, e.g. 0/4")
    p_job.add_argument("--out", help="output path (default combpi-job-<j>of<J>.txt)")
    _add_param_flags(p_job)

    p_merge = sp.add_parser("merge", help="merge job files, print pi(x)")
    p_merge.add_argument("files", nargs="+", help="job result files")

    p_ver = sp.add_parser("verify", help="randomized engine-vs-oracle check")
    p_ver.add_argument("limit", help="upper bound for random x")
    p_ver.add_argument("trials", type=int)
    p_ver.add_argument("--seed", type=int, default=0)

    p_bench = sp.add_parser("bench", help="time pi(x) and report structure bytes")
    p_bench.add_argument("xs", nargs="+", help="one or more x values")
    _add_param_flags(p_bench)

    p_li = sp.add_parser("li", help="logarithmic integral li(x)")
    p_li.add_argument("x", help="x as decimal, 10^n, or 2^m")
    return ap


def _cmd_pi(args) -> int:
    x = parse_x(args.x)
    if x < 2:
        print(f"pi requires x >= 2, got {x}", file=sys.stderr)
        return 1
    if x > X_MAX:
        print(f"x exceeds the supported bound 2^86", file=sys.stderr)
        return 1
    params = _params_from_args(x, args)
    if params.threads > 1:
        value = jobs.run_threads(x, params, N=params.threads)
    else:
        value = phi_engine.pi(x, params)
    print(value)
    if args.with_li:
        print(f"{li(x) - value:.3f}")
    return 0


def _cmd_job(args) -> int:
    x = parse_x(args.x)
    try:
        j_txt, J_txt = args.job.split("/")
        j, J = int(j_txt), int(J_txt)
    except ValueError:
        print(f"--job wants j/J, got {args.job!r}", file=sys.stderr)
        return 1
    if not 0 <= j < J:
        print(f"job index {j} outside 0..{J - 1}", file=sys.stderr)
        return 1
    params = _params_from_args(x, args)
    specs = jobs.split_jobs(x, params, J)
    result = jobs.run_job(specs[j])
    out = args.out or f"combpi-job-{j}of{J}.txt"
    jobs.write_job_result(result, out)
    print(f"wrote {out}", file=sys.stderr)
    return 0


def _cmd_merge(args) -> int:
    results = [jobs.read_job_result(p) for p in args.files]
    print(jobs.merge_results(results))
    return 0


def _cmd_verify(args) -> int:
    import random

    limit = parse_x(args.limit)
    if limit > oracle.ORACLE_CEILING:
        print(f"limit exceeds oracle ceiling {oracle.ORACLE_CEILING}", file=sys.stderr)
        return 1
    rng = random.Random(args.seed)
    triples = [
        {"alpha": Fraction(1), "c": 2, "L": 8},
        {"alpha": Fraction(2), "c": 6, "L": 10},
    ]
    failures = 0
    for t in range(args.trials):
        x = rng.randrange(2, max(limit, 2) + 1)
        want = oracle.pi_naive(x)
        for over in triples:
            if x < phi_engine.SMALL_X_LIMIT:
                got = phi_engine.pi(x)
            else:
                got = phi_engine.pi(x, select_params(x, **over))
            if got != want:
                failures += 1
                print(f"MISMATCH x={x} params={over}: {got} != {want}",
                      file=sys.stderr)
    status = "pass" if failures == 0 else f"FAIL ({failures} mismatches)"
    print(f"verify: {args.trials} trials <= {limit} under {len(triples)} "
          f"parameter sets: {status}", file=sys.stderr)
    return 0 if failures == 0 else 1


def structure_bytes(params: phi_engine.Params) -> dict[str, int]:
    """Analytic byte totals of the resident data structures."""
    d = max(2, int(math.log2(params.y_max)))
    counter_cells = 1 << params.L
    if params.packed:
        counters = ((2 * counter_cells - 1) + 7) // 8
    else:
        counters = counter_cells * 8
    wheel_w = math.prod([2, 3, 5, 7, 11, 13, 17, 19][: params.c])
    return {
        "prime_table": (params.a + 1) * 8,
        "sparse_pi": (params.y_max // d + 1) * 8,
        "wheel": (wheel_w + 1) * 8 + wheel_w,
        "counters": counters * params.threads,
    }


def _cmd_bench(args) -> int:
    print(f"{'x':>16} {'seconds':>9} {'pi(x)':>18} {'prime_t':>10} "
          f"{'sparse_pi':>10} {'wheel':>10} {'counters':>10} {'total':>11}",
          file=sys.stderr)
    for text in args.xs:
        x = parse_x(text)
        params = _params_from_args(x, args)
        t0 = time.perf_counter()
        if params.threads > 1:
            value = jobs.run_threads(x, params, N=params.threads)
        else:
            value = phi_engine.pi(x, params)
        dt = time.perf_counter() - t0
        sb = structure_bytes(params)
        total = sum(sb.values())
        print(f"{x:>16} {dt:>9.3f} {value:>18} {sb['prime_table']:>10} "
              f"{sb['sparse_pi']:>10} {sb['wheel']:>10} {sb['counters']:>10} "
              f"{total:>11}", file=sys.stderr)
        print(f"{x} {value} {dt:.3f}")
    return 0


def _cmd_li(args) -> int:
    x = parse_x(args.x)
    if x < 2:
        print(f"li requires x >= 2 here, got {x}", file=sys.stderr)
        return 1
    print(f"{li(x):.6f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    import os

    args = _build_parser().parse_args(argv)
    if getattr(args, "threads", None) is None and "COMBPI_THREADS" in os.environ:
        try:
            args.threads = int(os.environ["COMBPI_THREADS"])
        except ValueError:
            pass
    handlers = {
        "pi": _cmd_pi,
        "job": _cmd_job,
        "merge": _cmd_merge,
        "verify": _cmd_verify,
        "bench": _cmd_bench,
        "li": _cmd_li,
    }
    try:
        return handlers[args.command](args)
    except jobs.IncompleteMergeError as exc:
        print(f"incomplete merge: {exc}", file=sys.stderr)
        return 3
    except (jobs.IntegrityError, FileNotFoundError) as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, oracle.ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
