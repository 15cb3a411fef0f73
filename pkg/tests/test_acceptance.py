"""Acceptance gate: every criterion the package must meet, each printing one
pass/fail line (visible with pytest -s or on failure).

Criteria 1 and 2 check the CLI output strings against the published exact
values; the optional extended check (10^14, 10^15) is skipped unless
COMBPI_EXTENDED=1 is set.
"""

import math
import os
import random
import time

import numpy as np
import pytest

from combpi import cli, jobs, oracle, phi_engine as pe, tables
from combpi.boundary import phi_boundary
from combpi.counters import (
    PACKED,
    UNPACKED,
    counter_count_leq,
    counter_init,
    counter_pack_roundtrip,
    counter_remove,
)
from reference_values import LI_MINUS_PI, PI_POW10, PI_POW2

pytestmark = pytest.mark.acceptance


def report(criterion, ok, detail=""):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


def cli_pi(capsys, arg):
    code = cli.main(["pi", arg])
    out = capsys.readouterr().out
    assert code == 0
    return out


def test_criterion_1_powers_of_ten(capsys):
    t0 = time.time()
    for n in range(1, 14):
        out = cli_pi(capsys, f"10^{n}")
        assert out == f"{PI_POW10[n]}\n", f"pi(10^{n}) printed {out!r}"
    dt = time.time() - t0
    report(1, True, f"(pi(10^n) exact for n=1..13 in {dt:.1f}s)")


@pytest.mark.extended
@pytest.mark.skipif(
    os.environ.get("COMBPI_EXTENDED") != "1",
    reason="extended table rows; set COMBPI_EXTENDED=1",
)
def test_criterion_1_extended(capsys):
    for n in (14, 15):
        out = cli_pi(capsys, f"10^{n}")
        assert out == f"{PI_POW10[n]}\n"
    report("1-extended", True, "(n=14, 15)")


def test_criterion_2_powers_of_two(capsys):
    t0 = time.time()
    for m in range(1, 44):
        out = cli_pi(capsys, f"2^{m}")
        assert out == f"{PI_POW2[m]}\n", f"pi(2^{m}) printed {out!r}"
    dt = time.time() - t0
    report(2, True, f"(pi(2^m) exact for m=1..43 in {dt:.1f}s)")


def test_criterion_3_oracle_equivalence():
    rng = random.Random(2024)
    limit = 10**7
    bits = oracle.sieve_range(0, limit + 1).bits
    prefix = np.cumsum(bits)
    bad = []
    for _ in range(500):
        x = rng.randrange(2, limit + 1)
        if pe.pi(x) != int(prefix[x]):
            bad.append(x)
    report(3, not bad, f"(500 random x <= 1e7{'' if not bad else ': ' + str(bad[:5])})")


def test_criterion_4_parameter_invariance():
    targets = {10**6: 78498, 10**7: 664579, 2**26: 3957809}
    bad = []
    for x, want in targets.items():
        for alpha in (1, 2, 4):
            for c in (1, 3, 6):
                params = pe.select_params(x, alpha=alpha, c=c)
                if pe.pi(x, params) != want:
                    bad.append((x, alpha, c))
    report(4, not bad, f"(9 parameter combinations x 3 values{bad or ''})")


def test_criterion_5_split_invariance(tmp_path):
    bad = []
    for x in (10**6, 10**8, 10**9):
        params = pe.select_params(x)
        single = pe.pi(x, params)
        for J in (1, 2, 3, 8):
            results = [jobs.run_job(s) for s in jobs.split_jobs(x, params, J)]
            if jobs.merge_results(results) != single:
                bad.append((x, J))
    # byte-identical write/read/write round trip
    params = pe.select_params(10**6)
    res = jobs.run_job(jobs.split_jobs(10**6, params, 2)[1])
    p1, p2 = tmp_path / "r1.txt", tmp_path / "r2.txt"
    jobs.write_job_result(res, p1)
    jobs.write_job_result(jobs.read_job_result(p1), p2)
    roundtrip_ok = p1.read_bytes() == p2.read_bytes()
    report(5, not bad and roundtrip_ok,
           f"(J in 1,2,3,8 at 1e6/1e8/1e9; file round-trip byte-identical)")


def test_criterion_6_thread_determinism():
    x = 10**8
    want = 5761455
    bad = []
    for N in (1, 2, 4, 8):
        for rep in range(5):
            got = jobs.run_threads(x, N=N)
            if got != want:
                bad.append((N, rep, got))
    report(6, not bad, "(N in 1,2,4,8, 5 runs each, bit-identical)")


def test_criterion_7_boundary_bootstrap():
    rng = random.Random(77)
    bad = []
    for _ in range(200):
        y = rng.randrange(20, 501)
        params = pe.select_params(y**3, alpha=1)
        tb = pe.build_tables(params)
        m0 = rng.randrange(0, min(100_000, params.z) + 1)
        pb = phi_boundary(m0, params, tb)
        for b in range(params.c, params.a + 1):
            if pb.value(b) != oracle.phi_naive(m0, b):
                bad.append((y, m0, b))
                break
    report(7, not bad, f"(200 random (m0, y_max) pairs, all levels{bad[:3] or ''})")


def test_criterion_8_counter_equivalence():
    L = 10
    size = 1 << L
    rng = np.random.default_rng(88)
    shadow = np.ones(size, dtype=np.uint8)
    unpacked = counter_init(L, shadow)
    packed = counter_pack_roundtrip(unpacked)
    ops = 0
    while ops < 10_000:
        if rng.random() < 0.4 and shadow.any():
            pos = int(rng.choice(np.flatnonzero(shadow))) + 1
            counter_remove(unpacked, pos)
            counter_remove(packed, pos)
            shadow[pos - 1] = 0
        else:
            q = int(rng.integers(0, size + 1))
            want = int(shadow[:q].sum())
            assert counter_count_leq(unpacked, q) == want
            assert counter_count_leq(packed, q) == want
        ops += 1
    assert unpacked.mode == UNPACKED and packed.mode == PACKED
    payload_ok = packed.payload_bits <= 2 ** (L + 1)
    exact = packed.payload_bits == 2 ** (L + 1) - 1
    report(8, payload_ok and exact,
           f"(1e4 interleavings both modes; payload {packed.payload_bits} bits"
           f" <= 2^{L + 1})")


def test_criterion_9_sparse_pi():
    y = 10**6
    pt = tables.build_prime_table(y)
    spt = tables.build_sparse_pi(pt)
    bits = oracle.sieve_range(0, y + 1).bits
    prefix = np.cumsum(bits)
    ys = np.arange(0, y + 1, dtype=np.int64)
    exact = bool((tables.pi_lookup_vec(spt, pt, ys) == prefix[ys]).all())
    rng = np.random.default_rng(9)
    total = worst = 0
    for v in rng.integers(0, y + 1, size=10**5):
        _, steps = tables.pi_lookup_scan(spt, pt, int(v))
        total += steps
        worst = max(worst, steps)
    mean = total / 10**5
    report(9, exact and mean <= 2.0 and worst <= spt.d,
           f"(exact on all y <= 1e6; mean scan {mean:.3f} <= 2, worst {worst}"
           f" <= d={spt.d})")


def test_criterion_10_li_column():
    bad = []
    for n in range(1, 14):
        diff = cli.li(10.0**n) - PI_POW10[n]
        tol = 1e-3 if n <= 10 else 0.5
        if abs(diff - LI_MINUS_PI[n]) > tol:
            bad.append(n)
    report(10, not bad, "(li(10^n) - pi(10^n), +-0.001 to n=10, +-0.5 to n=13)")


def test_criterion_11_leaf_decomposition():
    from test_phi_engine import special_leaves_bruteforce

    cases = [(10**4, 1), (10**4, 3), (10**5, 2), (10**6, 1), (777777, 2)]
    bad = []
    for x, alpha in cases:
        params = pe.select_params(x, alpha=alpha)
        tb = pe.build_tables(params)
        total = pe.ordinary_leaves(x, params, tb)
        for m, b, mu, z in special_leaves_bruteforce(x, params, tb.pt):
            total += -mu * oracle.phi_naive(z, b - 1)
        if total != oracle.phi_naive(x, params.a):
            bad.append((x, alpha))
    report(11, not bad, f"({len(cases)} cases: S0 + special-leaf sum = phi(x, a))")
