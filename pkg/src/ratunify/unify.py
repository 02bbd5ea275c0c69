"""Rational-tree unification over equation systems.

Complex trees are decomposed into head trees through fresh variables;
variables are unioned eagerly and, when both classes carried heads, those
heads are unified next.  There is no occurs check unless the policy asks
for one, and the procedure terminates on every input.
"""

from __future__ import annotations

from typing import Callable, Iterable, NamedTuple, Optional

from .eqsystem import EqSystem
from .terms import App, FreshSource, Mu, Var

Prefix = list  # list[tuple[Var, Tree]]


class Unified(NamedTuple):
    system: EqSystem
    prefix: Prefix
    steps: int
    checks: int = 0
    touched: frozenset = frozenset()


class _Run:
    def __init__(self, system: EqSystem, fresh: FreshSource, policy, observer):
        self.system = system
        self.fresh = fresh
        self.trivial = policy is not None and policy.checks_on_extend
        self.observer = observer
        self.steps = 0
        self.checks = 0
        self.touched: set[Var] = set()

    def _extended(self, root: Var) -> bool:
        if not self.trivial:
            return True
        from .occurs import has_cycle

        self.checks += 1
        return has_cycle(self.system, {root}) is None

    def run(self, pairs: Iterable) -> bool:
        stack = list(reversed(list(pairs)))
        while stack:
            a, b = stack.pop()
            if a is b or (isinstance(a, Var) and a == b):
                # trees are hash-consed, so equal trees are the same object
                continue
            if isinstance(a, Mu) or isinstance(b, Mu):
                raise TypeError("unify takes finite trees; mu-binders are not accepted")
            if isinstance(a, App) and isinstance(b, Var):
                a, b = b, a
            if isinstance(a, Var):
                sys = self.system
                if isinstance(b, Var):
                    self.touched.update((a, b, sys.find(a)[0], sys.find(b)[0]))
                    after, heads = sys.union(a, b)
                    self.steps += 1
                    if self.observer is not None:
                        self.observer(sys, after, a, b)
                    self.system = after
                    if after is not sys and not self._extended(after.find(a)[0]):
                        return False
                    if heads is not None:
                        stack.append(heads)
                    continue
                r, head = sys.find(a)
                self.touched.update((a, r))
                if head is not None:
                    # the input side stays on the left, as with decomposition below
                    stack.append((b, head))
                    continue
                ys = [self.fresh.var() for _ in b.args]
                self.system = sys.bind(r, App(b.ctor, ys))
                self.steps += 1
                if not self._extended(r):
                    return False
                # the input subtree goes on the left so that a user variable,
                # not the fresh one, represents a headless class
                stack.extend(reversed(list(zip(b.args, ys))))
                continue
            if a.ctor != b.ctor:
                return False
            stack.extend(reversed(list(zip(a.args, b.args))))
        return True


def _prefix(before: EqSystem, after: EqSystem, touched: set, watermark: int) -> Prefix:
    def user(v):
        return v.id < watermark

    users = sorted((v for v in touched if user(v)), key=lambda v: v.id)
    members: dict[Var, Var] = {}
    for v in users:
        members.setdefault(after.find(v)[0], v)

    def alias(v: Var, visiting: frozenset):
        r, head = after.find(v)
        if user(r):
            return r
        if r in members:
            return members[r]
        if head is None or r in visiting:
            return v
        return recompose(head, visiting | {r})

    def recompose(head: App, visiting: frozenset):
        return App(head.ctor, [a if user(a) else alias(a, visiting) for a in head.args])

    out = []
    for v in users:
        if before.find(v) != (v, None):
            continue
        r, head = after.find(v)
        if head is None:
            if r != v:
                out.append((v, r if user(r) else alias(r, frozenset())))
            continue
        out.append((v, recompose(head, frozenset({r}))))
    return out


def unify_many(system: EqSystem, pairs, fresh: FreshSource, policy=None,
               observer: Optional[Callable] = None) -> Optional[Unified]:
    """Unify each pair in order, threading the system; None on failure.

    ``policy`` may veto extensions (see :mod:`ratunify.occurs`); ``observer``
    is called as ``observer(before, after, x, y)`` after every union.
    """
    watermark = fresh.mark()
    run = _Run(system, fresh, policy, observer)
    if not run.run(pairs):
        return None
    prefix = _prefix(system, run.system, run.touched, watermark)
    return Unified(run.system, prefix, run.steps, run.checks, frozenset(run.touched))


def unify(system: EqSystem, t1, t2, fresh: FreshSource, policy=None,
          observer: Optional[Callable] = None) -> Optional[Unified]:
    return unify_many(system, [(t1, t2)], fresh, policy, observer)
