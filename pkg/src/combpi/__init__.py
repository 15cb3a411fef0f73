"""combpi: exact prime counting with the combinatorial method.

The package computes pi(x) through the Meissel-Lehmer family identity with
reduced-memory lookup structures, a block-parallel shared-memory mode, and a
communication-free distributed job workflow.  Counts are plain Python ints,
so results never overflow regardless of magnitude.
"""

from .phi_engine import (
    CapacityError,
    ChunkOutcome,
    LeafClass,
    Params,
    Tables,
    build_tables,
    classify_special_leaf,
    easy_leaves,
    ordinary_leaves,
    p2_from_outcomes,
    pi,
    select_params,
    sieve_chunk,
)
from .boundary import PhiBoundary, phi_boundary
from .jobs import (
    IncompleteMergeError,
    IntegrityError,
    JobResult,
    JobSpec,
    merge_results,
    read_job_result,
    run_job,
    run_threads,
    split_jobs,
    write_job_result,
)
from .cli import li

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ChunkOutcome",
    "IncompleteMergeError",
    "IntegrityError",
    "JobResult",
    "JobSpec",
    "LeafClass",
    "Params",
    "PhiBoundary",
    "Tables",
    "build_tables",
    "classify_special_leaf",
    "easy_leaves",
    "li",
    "merge_results",
    "ordinary_leaves",
    "p2_from_outcomes",
    "phi_boundary",
    "pi",
    "read_job_result",
    "run_job",
    "run_threads",
    "select_params",
    "sieve_chunk",
    "split_jobs",
    "write_job_result",
    "__version__",
]
