"""Occurs-check strategies.

``off``
    never check; cyclic answers come out as mu-trees.
``trivial``
    check every extension of the system, keeping it acyclic.
``simple``
    after every unification, search for cycles from the variables it bound.
``full``
    check the whole system once, before an answer is produced.
``mult``
    like full, plus a whole-system check every m unifications; m doubles.
``sqrt``
    like full, plus a check of the variables bound since the last check
    every m unifications; m becomes floor(sqrt(|dom|)) afterwards.

Cycles are searched on the class graph: one node per equivalence class and
an edge from a class to the class of each argument of its head.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .eqsystem import EqSystem
from .terms import App, Var

POLICIES = ("off", "trivial", "simple", "full", "mult", "sqrt")
CHECKING = POLICIES[1:]

_WHITE, _GREY, _BLACK = 0, 1, 2


def has_cycle(system: EqSystem, seeds: Optional[Iterable[Var]] = None) -> Optional[Var]:
    """Representative of a class on a head-argument cycle reachable from
    ``seeds`` (all classes when None), or None if there is no such cycle."""
    find = system.find
    if seeds is None:
        starts = [e.repr for e in system.equations()]
    else:
        starts = [find(s)[0] for s in seeds]
    color: dict[Var, int] = {}
    for s in starts:
        if color.get(s, _WHITE) != _WHITE:
            continue
        color[s] = _GREY
        stack = [(s, iter(_successors(system, s)))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                c = color.get(nxt, _WHITE)
                if c == _GREY:
                    return nxt
                if c == _WHITE:
                    color[nxt] = _GREY
                    stack.append((nxt, iter(_successors(system, nxt))))
                    break
            else:
                color[node] = _BLACK
                stack.pop()
    return None


def _successors(system: EqSystem, root: Var):
    head = system.find(root)[1]
    if head is None:
        return ()
    return [system.find(a)[0] for a in head.args]


def would_cycle(system: EqSystem, x: Var, head: App) -> bool:
    """Whether binding ``x`` to ``head`` would close a cycle."""
    return has_cycle(system.bind(x, head), {x}) is not None


@dataclass(frozen=True)
class OccursPolicy:
    tag: str = "trivial"
    since: int = 0
    m: int = 1
    recorded: frozenset = frozenset()

    def __post_init__(self):
        if self.tag not in POLICIES:
            raise ValueError(f"unknown occurs policy {self.tag!r}")

    @property
    def checks_on_extend(self) -> bool:
        return self.tag == "trivial"

    @property
    def checks_on_answer(self) -> bool:
        return self.tag in ("full", "mult", "sqrt")

    def after_unify(self, system: EqSystem, bound: Iterable[Var]):
        """Hook run after a successful top-level unification.

        Returns ``(allowed, policy, checked)``; a veto means the branch fails.
        """
        tag = self.tag
        if tag == "simple":
            return has_cycle(system, bound) is None, self, True
        if tag == "mult":
            since = self.since + 1
            if since < self.m:
                return True, replace(self, since=since), False
            ok = has_cycle(system) is None
            return ok, replace(self, since=0, m=self.m * 2), True
        if tag == "sqrt":
            since = self.since + 1
            recorded = self.recorded | frozenset(bound)
            if since < self.m:
                return True, replace(self, since=since, recorded=recorded), False
            ok = has_cycle(system, recorded) is None
            m = max(1, math.isqrt(len(system)))
            return ok, replace(self, since=0, m=m, recorded=frozenset()), True
        return True, self, False

    def before_answer(self, system: EqSystem) -> tuple[bool, bool]:
        """Returns ``(allowed, checked)``."""
        if self.checks_on_answer:
            return has_cycle(system) is None, True
        return True, False


def on_bind(policy: OccursPolicy, system: EqSystem, x: Var, head: App) -> bool:
    if not policy.checks_on_extend:
        return True
    return not would_cycle(system, x, head)


def on_unify_complete(policy: OccursPolicy, system: EqSystem, prefix_vars):
    return policy.after_unify(system, prefix_vars)


def on_answer(policy: OccursPolicy, system: EqSystem) -> bool:
    return policy.before_answer(system)[0]
