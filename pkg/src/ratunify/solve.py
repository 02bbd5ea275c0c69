"""Running problem files through the engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .engine import Engine, Stats, Timeout, conj, eq, neq
from .image import answer, image_to_depth
from .minimize import to_canonical
from .programs import RELATIONS
from .syntax import ProblemFile, format_term
from .terms import App, Mu, Var, expand_to_depth, iter_nodes


class SolveError(Exception):
    pass


@dataclass
class Solution:
    query: list
    answers: list = field(default_factory=list)  # one {Var: MuTree} per answer
    stats: Stats = field(default_factory=Stats)
    timed_out: bool = False

    @property
    def ok(self) -> bool:
        return bool(self.answers)


def _goal(pf: ProblemFile):
    goals = []
    for d in pf.directives:
        if d.kind == "eq":
            goals.append(eq(*d.args))
        elif d.kind == "neq":
            goals.append(neq(*d.args))
        elif d.kind == "call":
            call: App = d.args[0]
            rel = RELATIONS.get(call.ctor.name)
            if rel is None:
                raise SolveError(f"line {d.line}: unknown relation {call.ctor.name!r}")
            try:
                goals.append(rel(*call.args))
            except TypeError as e:
                raise SolveError(f"line {d.line}: {e}") from None
    return conj(*goals)


def solve(pf: ProblemFile, backend: str = "classical", occurs: str = "trivial",
          minimize: bool = False, answers: Optional[int] = 1, depth: int = 32,
          compress: bool = False, max_steps: Optional[int] = None,
          timeout: Optional[float] = None) -> Solution:
    if compress:
        if pf.uses_search():
            raise SolveError("--compress only supports plain unification problems")
        backend = "compress"
    engine = Engine(backend, occurs, max_steps=max_steps, timeout=timeout)
    raw = [d.args for d in pf.directives if d.kind == "raw"]
    state = engine.initial_state(next_id=pf.fresh.next_id)
    if raw:
        system = to_canonical(raw, pf.fresh, backend)
        state = state._replace(system=system, next_id=pf.fresh.next_id)
    sol = Solution(pf.query_vars, stats=engine.stats)
    try:
        found = engine.answers(_goal(pf), answers, state)
    except Timeout:
        sol.timed_out = True
        return sol
    for st in found:
        row = {}
        for q in pf.query_vars:
            t = answer(st.system, q, minimize)
            if depth and not minimize:
                # the mu-tree must unfold to the image it stands for
                if expand_to_depth(t, depth) is not image_to_depth(st.system, q, depth):
                    raise AssertionError(f"mu-image of {q} disagrees with its image")
            row[q] = t
        sol.answers.append(row)
    return sol


def reify(terms: list) -> dict:
    """Display names ``_.0``, ``_.1``, ... for unnamed variables, in order of appearance."""
    names: dict[Var, str] = {}
    for t in terms:
        for node in iter_nodes(t):
            v = node.var if isinstance(node, Mu) else node
            if isinstance(v, Var):
                if v not in names:
                    names[v] = v.name if v.name else f"_.{sum(1 for n in names if not n.name)}"
    return names


def render(sol: Solution) -> str:
    if not sol.answers:
        return "no\n"
    blocks = []
    for row in sol.answers:
        names = reify(list(row.values()))
        lines = []
        for q, t in row.items():
            lines.append(f"{q.name or format_term(q)} = {format_term(t, _names_for(t, names))}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _names_for(t, names):
    from .syntax import _display_names

    base = _display_names(t)
    out = {}
    for v, n in base.items():
        out[v] = names.get(v, n) if not v.name else n
    return out
