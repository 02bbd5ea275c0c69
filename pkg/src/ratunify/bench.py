"""Benchmark matrix over problem files: backend x occurs policy x minimize."""

from __future__ import annotations

import csv
import itertools
import time
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import Iterable, Optional

from .syntax import parse_problem
from .solve import solve

HEADER = ("problem", "backend", "occurs", "minimize", "ns", "unifications", "occurs_checks", "answers")


@dataclass
class BenchRecord:
    problem: str
    backend: str
    occurs: str
    minimize: bool
    ns: int
    unifications: int
    occurs_checks: int
    answers: int
    pruned_at_answer: int = 0

    def row(self):
        return astuple(self)[:len(HEADER)]


def suite_files(path) -> list[Path]:
    path = Path(path)
    if path.is_file():
        return [path]
    return sorted(path.glob("*.rat"))


def run_cell(text: str, name: str, backend: str, occurs: str, minimize: bool,
             answers: Optional[int] = 1, repeat: int = 1, warmup: int = 0,
             timeout_ms: Optional[int] = None) -> BenchRecord:
    timeout = None if timeout_ms is None else timeout_ms / 1000
    best = None
    sol = None
    for i in range(warmup + max(1, repeat)):
        pf = parse_problem(text, name)
        t0 = time.perf_counter_ns()
        sol = solve(pf, backend, occurs, minimize, answers, depth=0, timeout=timeout)
        elapsed = time.perf_counter_ns() - t0
        if sol.timed_out:
            best = -1
            break
        if i >= warmup:
            best = elapsed if best is None else min(best, elapsed)
    st = sol.stats
    return BenchRecord(name, backend, occurs, minimize, best, st.unifications, st.occurs_checks,
                       len(sol.answers), st.pruned_at_answer)


def bench(suite, backends: Iterable[str], occurs: Iterable[str], minimize: Iterable[bool] = (False,),
          answers: Optional[int] = 1, repeat: int = 1, warmup: int = 0,
          timeout_ms: Optional[int] = None) -> list[BenchRecord]:
    records = []
    configs = list(itertools.product(backends, occurs, minimize))
    for path in suite_files(suite):
        text = path.read_text(encoding="utf-8")
        for b, o, m in configs:
            records.append(run_cell(text, path.stem, b, o, m, answers, repeat, warmup, timeout_ms))
    return records


def write_csv(records: Iterable[BenchRecord], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow(["true" if x is True else "false" if x is False else x for x in r.row()])
