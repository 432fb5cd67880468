"""Persistent real-time deques and catenable deques."""

from ._core import (
    CSV_HEADER,
    Cadeque,
    Deque,
    RNumber,
    bin_of,
    gen_scenario,
    plan_operations,
    run_bench,
    run_fuzz,
    size_to_color,
    work_counter,
)

__all__ = [
    "CSV_HEADER",
    "Cadeque",
    "Deque",
    "RNumber",
    "bin_of",
    "gen_scenario",
    "plan_operations",
    "run_bench",
    "run_fuzz",
    "size_to_color",
    "work_counter",
]
