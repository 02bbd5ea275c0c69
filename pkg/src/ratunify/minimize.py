"""Canonical form and minimization of equation systems.

Once every right-hand side is a head tree, the subtrees of all images are
exactly the classes of the system, so minimization reduces to finding the
coarsest partition of classes that is stable under "same constructor and
blockwise-equal arguments" (Moore-style partition refinement).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

from .eqsystem import EqSystem
from .terms import App, FreshSource, Var, is_head


def to_canonical(equations: Union[EqSystem, Mapping, Iterable], fresh: FreshSource,
                 backend: str = "classical") -> EqSystem:
    """Turn ``{x: tree}`` equations with arbitrary finite right-hand sides
    into a system whose right-hand sides are head trees.

    Every non-variable argument ``t`` of a right-hand side is named by a
    fresh variable ``z`` with ``z == t``.  An EqSystem is already canonical
    and is returned unchanged.
    """
    if isinstance(equations, EqSystem):
        return equations
    items = list(equations.items()) if isinstance(equations, Mapping) else list(equations)
    seen = set()
    for x, _ in items:
        if x in seen:
            raise ValueError(f"{x} has two equations")
        seen.add(x)
    system = EqSystem(backend)
    aliases = []
    pending = list(reversed(items))
    while pending:
        x, t = pending.pop()
        if isinstance(t, Var):
            aliases.append((x, t))
            continue
        if not isinstance(t, App):
            raise TypeError(f"right-hand side of {x} is not a finite tree")
        args = []
        subs = []
        for a in t.args:
            if isinstance(a, Var):
                args.append(a)
            else:
                z = fresh.var(f"{x.name}'" if x.name else None)
                args.append(z)
                subs.append((z, a))
        system = system.bind(x, App(t.ctor, args))
        # children are named in order, before later equations
        pending.extend(reversed(subs))
    for x, y in aliases:
        system, heads = system.union(x, y)
        if heads is not None:
            raise ValueError(f"{x} == {y} joins two bound variables")
    return system


def _classes(system: EqSystem):
    eqs = system.equations()
    return {e.repr: e for e in eqs}


def coarsest_partition(system: EqSystem) -> list[frozenset]:
    """Blocks of class representatives with equal images (greatest fixpoint)."""
    classes = _classes(system)
    reps = sorted(classes, key=lambda v: v.id)
    find = system.find

    # headless classes stay apart: they are distinct free variables
    def initial(r):
        head = classes[r].head
        return ("ctor", head.ctor) if head is not None else ("free", r)

    keys: dict = {}
    block = {r: keys.setdefault(initial(r), len(keys)) for r in reps}
    while True:
        keys = {}
        new = {}
        for r in reps:
            head = classes[r].head
            if head is None:
                sig = (block[r],)
            else:
                # arguments outside the domain are free variables, keyed by identity
                sig = (block[r],) + tuple(block.get(find(a)[0], ("out", find(a)[0])) for a in head.args)
            new[r] = keys.setdefault(sig, len(keys))
        stable = len(set(new.values())) == len(set(block.values()))
        block = new
        if stable:
            break
    groups: dict[int, list] = {}
    for r in reps:
        groups.setdefault(block[r], []).append(r)
    return [frozenset(g) for g in groups.values()]


def minimize(system: EqSystem) -> EqSystem:
    """Merge all classes with equal images; the representative of a merged
    block is its smallest variable."""
    classes = _classes(system)
    for e in classes.values():
        if e.head is not None and not is_head(e.head):
            raise ValueError("system is not canonical")
    blocks = coarsest_partition(system)
    if len(blocks) == len(classes):
        return system
    eqs = []
    for b in blocks:
        members = frozenset().union(*(classes[r].vars for r in b))
        rep = min(members, key=lambda v: v.id)
        eqs.append((members, rep, classes[min(b, key=lambda v: v.id)].head))
    return EqSystem.from_equations(eqs, system.backend)


def bisimilar(system: EqSystem, a: Var, b: Var) -> bool:
    """Whether ``a`` and ``b`` have the same (possibly infinite) image.

    Decided by exploring pairs of classes reachable from ``(a, b)``; any
    pair with different constructors, or two distinct free variables,
    refutes equality.
    """
    seen = set()
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        rx, hx = system.find(x)
        ry, hy = system.find(y)
        if rx == ry or (rx, ry) in seen:
            continue
        seen.add((rx, ry))
        if hx is None or hy is None:
            return False
        if hx.ctor != hy.ctor:
            return False
        todo.extend(zip(hx.args, hy.args))
    return True

