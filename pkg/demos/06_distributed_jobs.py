"""The communication-free distributed workflow.

Splitting [1, z] at block boundaries gives jobs that never exchange a byte:
each one rebuilds the tables, bootstraps its own phi bases with the boundary
algorithm, sieves its chunk, and writes a small text file.  Summing the
files reproduces the monolithic answer exactly.

The same flow is available from the shell:

    combpi job 10^9 --job 0/3 --out j0.txt     # on machine A
    combpi job 10^9 --job 1/3 --out j1.txt     # on machine B
    combpi job 10^9 --job 2/3 --out j2.txt     # on machine C
    combpi merge j0.txt j1.txt j2.txt          # anywhere
"""

import tempfile
from pathlib import Path

from combpi import jobs, pi, select_params

x = 10**9
params = select_params(x)
specs = jobs.split_jobs(x, params, 3)
for s in specs:
    share = len(s.easy_levels())
    print(f"job {s.job}: chunk [{s.lo:,}, {s.hi:,}), {share} easy levels")

with tempfile.TemporaryDirectory() as d:
    paths = []
    for s in specs:
        res = jobs.run_job(s)
        path = Path(d) / f"job{s.job}.txt"
        jobs.write_job_result(res, path)
        paths.append(path)
        print(f"job {s.job}: s_hard = {res.outcome.s_hard:,}, "
              f"file {path.stat().st_size} bytes")
    merged = jobs.merge_results([jobs.read_job_result(p) for p in paths])

print(f"\nmerged pi({x:,}) = {merged:,}")
assert merged == pi(x)
print("matches the single-process value exactly")
