"""Equation systems: the substitution replacement for rational unification.

An equation ``{x, u, ...} == x @ f(y1, ..., yn)`` is stored union-find style
in a persistent map: every non-representative member links to another
member of its class, and the representative maps to a root record holding
the optional head tree and a rank.  Systems are immutable values; every
operation returns a new system sharing structure with the old one.

Backends:

``classical``
    plain links, left-biased representative choice.
``rank``
    union by rank (ties go to the left class).
``varcmp``
    the representative is always the variable with the smallest id.
``compress``
    classical plus compression of the paths walked by ``bind``/``union``.
    Meant for standalone solving; ``find`` never mutates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import immutables

from .terms import App, Var, is_head

BACKENDS = ("classical", "rank", "varcmp")
ALL_BACKENDS = BACKENDS + ("compress",)


class _Root(NamedTuple):
    head: Optional[App]
    rank: int


@dataclass(frozen=True)
class Equation:
    vars: frozenset
    repr: Var
    head: Optional[App]


class EqSystem:
    __slots__ = ("backend", "_nodes")

    def __init__(self, backend: str = "classical", _nodes: Optional[immutables.Map] = None):
        if backend not in ALL_BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self._nodes = immutables.Map() if _nodes is None else _nodes

    # -- lookup -------------------------------------------------------------

    def _root(self, x: Var):
        node = self._nodes.get(x)
        if node is None:
            return x, None
        while isinstance(node, Var):
            x = node
            node = self._nodes[x]
        return x, node

    def _path(self, x: Var) -> list[Var]:
        path = []
        node = self._nodes.get(x)
        while isinstance(node, Var):
            path.append(x)
            x = node
            node = self._nodes[x]
        return path

    def find(self, x: Var) -> tuple[Var, Optional[App]]:
        r, node = self._root(x)
        return r, (node.head if node is not None else None)

    def __contains__(self, x: Var) -> bool:
        return x in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def dom(self) -> frozenset:
        return frozenset(self._nodes.keys())

    def roots(self, scope: Iterable[Var]) -> set:
        return {x for x in scope if self._root(x)[0] == x}

    def chain_length(self, x: Var) -> int:
        return len(self._path(x))

    def rank(self, x: Var) -> int:
        node = self._root(x)[1]
        return node.rank if node is not None else 0

    # -- updates ------------------------------------------------------------

    def _compressed(self, mm, *starts: Var):
        if self.backend != "compress":
            return
        for s in starts:
            path = self._path(s)
            if len(path) > 1:
                root = self._root(s)[0]
                for v in path:
                    mm[v] = root

    def bind(self, x: Var, head: App) -> "EqSystem":
        if not is_head(head):
            raise ValueError("bind expects a head tree")
        r, node = self._root(x)
        with self._nodes.mutate() as mm:
            mm[r] = _Root(head, node.rank if node is not None else 0)
            self._compressed(mm, x)
            nodes = mm.finish()
        return EqSystem(self.backend, nodes)

    def union(self, x: Var, y: Var) -> tuple["EqSystem", Optional[tuple[App, App]]]:
        if x == y:
            return self, None
        rx, nx = self._root(x)
        ry, ny = self._root(y)
        if rx == ry:
            return self, None
        if nx is None and ny is not None:
            # only y's class is in the domain: absorb x into it
            rx, nx, ry, ny = ry, ny, rx, nx
        h1 = nx.head if nx is not None else None
        h2 = ny.head if ny is not None else None
        head = h1 if h1 is not None else h2
        r1 = nx.rank if nx is not None else 0
        r2 = ny.rank if ny is not None else 0
        keep, drop = rx, ry
        rank = max(r1, r2)
        if self.backend == "rank":
            if r2 > r1:
                keep, drop = ry, rx
            elif r1 == r2:
                rank = r1 + 1
        elif self.backend == "varcmp":
            if ry.id < rx.id:
                keep, drop = ry, rx
        with self._nodes.mutate() as mm:
            mm[drop] = keep
            mm[keep] = _Root(head, rank)
            self._compressed(mm, x, y)
            nodes = mm.finish()
        out = EqSystem(self.backend, nodes)
        if h1 is not None and h2 is not None:
            return out, (h1, h2)
        return out, None

    # -- inspection ---------------------------------------------------------

    def equations(self) -> list[Equation]:
        classes: dict[Var, list[Var]] = {}
        for v in self._nodes.keys():
            classes.setdefault(self._root(v)[0], []).append(v)
        out = []
        for r, members in classes.items():
            out.append(Equation(frozenset(members), r, self._nodes[r].head))
        out.sort(key=lambda e: min(v.id for v in e.vars))
        return out

    def classes(self) -> set[frozenset]:
        return {e.vars for e in self.equations()}

    def class_of(self, x: Var) -> frozenset:
        r = self._root(x)[0]
        if x not in self._nodes:
            return frozenset({x})
        return frozenset(v for v in self._nodes.keys() if self._root(v)[0] == r)

    def validate(self) -> None:
        """Raise AssertionError if a structural invariant is broken."""
        sizes: dict[Var, int] = {}
        for v in self._nodes.keys():
            seen = {v}
            x, node = v, self._nodes[v]
            while isinstance(node, Var):
                assert node in self._nodes, f"dangling link {x} -> {node}"
                assert node not in seen, f"circular links through {v}"
                seen.add(node)
                x, node = node, self._nodes[node]
            assert isinstance(node, _Root)
            assert node.head is None or is_head(node.head)
            sizes[x] = sizes.get(x, 0) + 1
        if self.backend == "rank":
            import math

            for v in self._nodes.keys():
                r = self._root(v)[0]
                assert self.chain_length(v) <= math.log2(sizes[r]) + 1
        if self.backend == "varcmp":
            for e in self.equations():
                assert e.repr == min(e.vars, key=lambda u: u.id), f"{e.repr} is not the minimum of its class"

    @classmethod
    def from_equations(cls, equations: Iterable[tuple[Iterable[Var], Var, Optional[App]]],
                       backend: str = "classical") -> "EqSystem":
        """Build a system with every member linked straight to its representative."""
        with immutables.Map().mutate() as mm:
            for vars_, rep, head in equations:
                vars_ = set(vars_)
                if rep not in vars_:
                    raise ValueError("representative must belong to its class")
                for v in vars_:
                    if v in mm:
                        raise ValueError(f"{v} occurs in two left-hand sides")
                    mm[v] = rep
                mm[rep] = _Root(head, 1 if len(vars_) > 1 else 0)
            nodes = mm.finish()
        return cls(backend, nodes)

    def with_backend(self, backend: str) -> "EqSystem":
        return EqSystem.from_equations(((e.vars, e.repr, e.head) for e in self.equations()), backend)

    def format(self) -> str:
        from .syntax import format_term

        lines = []
        for e in self.equations():
            members = ", ".join(format_term(v) for v in sorted(e.vars, key=lambda u: u.id))
            rhs = format_term(e.head) if e.head is not None else "_"
            lines.append(f"{{{members}}} == {format_term(e.repr)} @ {rhs}")
        return "\n".join(lines)

    def __repr__(self):
        return f"EqSystem({self.backend!r}, {len(self)} vars)"


def empty(backend: str = "classical") -> EqSystem:
    return EqSystem(backend)


def find(system: EqSystem, x: Var):
    return system.find(x)


def bind(system: EqSystem, x: Var, head: App) -> EqSystem:
    return system.bind(x, head)


def union(system: EqSystem, x: Var, y: Var):
    return system.union(x, y)


def dom(system: EqSystem) -> frozenset:
    return system.dom()


def roots(system: EqSystem, scope: Iterable[Var]) -> set:
    return system.roots(scope)
