"""A small relational engine on top of rational unification.

Goals are plain data (:class:`Eq`, :class:`Neq`, :class:`Fresh`,
:class:`Conj`, :class:`Disj`, :class:`Delay`) interpreted by
:class:`Engine` with miniKanren-style interleaving streams.  A stream is
``None`` (empty), a ``(state, rest)`` pair, or a zero-argument callable
producing a stream.

Disequalities are stored as unification prefixes: the constraint holds as
long as at least one of the prefix bindings is not yet entailed.
"""

from __future__ import annotations

import functools
import inspect
import time
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .eqsystem import EqSystem
from .image import answer as extract_answer
from .occurs import OccursPolicy
from .terms import FreshSource, Mu, Var, iter_nodes
from .unify import unify, unify_many


# -- goals -------------------------------------------------------------------

@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Neq:
    left: object
    right: object


@dataclass(frozen=True)
class Fresh:
    arity: int
    body: Callable
    names: tuple = ()


@dataclass(frozen=True)
class Conj:
    goals: tuple


@dataclass(frozen=True)
class Disj:
    goals: tuple


@dataclass(frozen=True)
class Delay:
    thunk: Callable
    label: str = ""


SUCCEED = Conj(())
FAIL = Disj(())


def eq(a, b) -> Eq:
    for t in (a, b):
        if any(isinstance(n, Mu) for n in iter_nodes(t)):
            raise ValueError("goals take finite trees only")
    return Eq(a, b)


def neq(a, b) -> Neq:
    return Neq(a, b)


def conj(*goals):
    return goals[0] if len(goals) == 1 else Conj(tuple(goals))


def disj(*goals):
    return goals[0] if len(goals) == 1 else Disj(tuple(goals))


def conde(*clauses):
    return disj(*(conj(*c) if isinstance(c, (tuple, list)) else c for c in clauses))


def fresh(body: Callable) -> Fresh:
    """``fresh(lambda x, y: goal)`` introduces as many variables as parameters."""
    params = list(inspect.signature(body).parameters)
    return Fresh(len(params), body, tuple(params))


def relation(fn):
    """Decorator: calls build a delayed goal, so recursive relations are finite data."""

    @functools.wraps(fn)
    def call(*args):
        return Delay(lambda: fn(*args), fn.__name__)

    return call


# -- state and search --------------------------------------------------------

class State(NamedTuple):
    system: EqSystem
    next_id: int
    policy: OccursPolicy
    constraints: tuple = ()


class StepBudgetExceeded(Exception):
    pass


class Timeout(Exception):
    pass


@dataclass
class Stats:
    unifications: int = 0
    occurs_checks: int = 0
    steps: int = 0
    pruned_at_answer: int = 0
    pruned_in_search: int = 0
    max_steps: Optional[int] = None
    deadline: Optional[float] = None

    def step(self):
        self.steps += 1
        if self.max_steps is not None and self.steps > self.max_steps:
            raise StepBudgetExceeded(self.steps)
        if self.deadline is not None and self.steps % 64 == 0 and time.monotonic() > self.deadline:
            raise Timeout()


def _mplus(s1, s2):
    if s1 is None:
        return s2
    if callable(s1):
        return lambda: _mplus(s2, s1())
    head, rest = s1
    return head, (lambda: _mplus(rest, s2))


class Engine:
    def __init__(self, backend: str = "classical", occurs: str = "trivial",
                 max_steps: Optional[int] = None, timeout: Optional[float] = None):
        self.backend = backend
        self.occurs = occurs
        self.stats = Stats(max_steps=max_steps,
                           deadline=None if timeout is None else time.monotonic() + timeout)

    def initial_state(self, next_id: int = 0) -> State:
        return State(EqSystem(self.backend), next_id, OccursPolicy(self.occurs))

    # interpretation

    def solve(self, goal, state: State):
        if isinstance(goal, Eq):
            st = self._eq(state, [(goal.left, goal.right)])
            return None if st is None else (st, None)
        if isinstance(goal, Neq):
            st = self._neq(state, goal.left, goal.right)
            return None if st is None else (st, None)
        if isinstance(goal, Conj):
            if not goal.goals:
                return state, None
            s = self.solve(goal.goals[0], state)
            for g in goal.goals[1:]:
                s = self._bind(s, g)
            return s
        if isinstance(goal, Disj):
            s = None
            for g in reversed(goal.goals):
                s = _mplus(self.solve(g, state), s) if s is not None else self.solve(g, state)
            return s
        if isinstance(goal, Fresh):
            vs = [Var(state.next_id + i) for i in range(goal.arity)]
            return self.solve(goal.body(*vs), state._replace(next_id=state.next_id + goal.arity))
        if isinstance(goal, Delay):
            def expand():
                self.stats.step()
                return self.solve(goal.thunk(), state)
            return expand
        raise TypeError(f"not a goal: {goal!r}")

    def _bind(self, s, goal):
        if s is None:
            return None
        if callable(s):
            return lambda: self._bind(s(), goal)
        head, rest = s
        return _mplus(self.solve(goal, head), lambda: self._bind(rest, goal))

    def _eq(self, state: State, pairs) -> Optional[State]:
        stats = self.stats
        stats.step()
        stats.unifications += 1
        fs = FreshSource(state.next_id)
        res = unify_many(state.system, pairs, fs, state.policy)
        if res is None:
            return None
        stats.occurs_checks += res.checks
        bound = {v for v, _ in res.prefix} | {res.system.find(v)[0] for v in res.touched}
        ok, policy, checked = state.policy.after_unify(res.system, bound)
        stats.occurs_checks += checked
        if not ok:
            stats.pruned_in_search += 1
            return None
        constraints = []
        for c in state.constraints:
            chk = unify_many(res.system, c, FreshSource(fs.next_id), policy)
            if chk is None:
                continue
            if not chk.prefix:
                return None
            constraints.append(tuple(chk.prefix))
        return State(res.system, fs.next_id, policy, tuple(constraints))

    def _neq(self, state: State, a, b) -> Optional[State]:
        self.stats.step()
        res = unify(state.system, a, b, FreshSource(state.next_id), state.policy)
        if res is None:
            return state
        if not res.prefix:
            return None
        return state._replace(constraints=state.constraints + (tuple(res.prefix),))

    # running

    def states(self, goal, state: Optional[State] = None):
        """Generator over answer states (before the answer-time occurs check)."""
        s = self.solve(goal, self.initial_state() if state is None else state)
        while s is not None:
            if callable(s):
                s = s()
                continue
            head, s = s
            yield head

    def answers(self, goal, n: Optional[int], state: Optional[State] = None):
        """Up to ``n`` states that pass the answer-time occurs check.

        Stops quietly when the step budget runs out.
        """
        out = []
        if n is not None and n <= 0:
            return out
        try:
            for st in self.states(goal, state):
                ok, checked = st.policy.before_answer(st.system)
                self.stats.occurs_checks += checked
                if not ok:
                    self.stats.pruned_at_answer += 1
                    continue
                out.append(st)
                if n is not None and len(out) >= n:
                    break
        except StepBudgetExceeded:
            pass
        return out

    def run(self, n: Optional[int], query: Callable, minimize: bool = False):
        """Answers for the query variables of ``query`` (a function of them).

        One variable gives a list of mu-trees, several give tuples.
        """
        arity = len(inspect.signature(query).parameters)
        names = list(inspect.signature(query).parameters)
        qs = [Var(i, names[i]) for i in range(arity)]
        state = self.initial_state(next_id=arity)
        out = []
        for st in self.answers(query(*qs), n, state):
            vals = tuple(extract_answer(st.system, q, minimize) for q in qs)
            out.append(vals[0] if arity == 1 else vals)
        return out


def run(n: Optional[int], query: Callable, backend: str = "classical", occurs: str = "trivial",
        minimize: bool = False, max_steps: Optional[int] = None):
    return Engine(backend, occurs, max_steps).run(n, query, minimize)
