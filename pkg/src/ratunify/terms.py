"""Finite trees, mu-trees and depth-bounded witnesses of rational trees.

Constructor applications and mu-binders are hash-consed: building the same
node twice returns the same object, so structural equality is identity and
trees with heavy sharing (for example deep truncated images) compare in
time proportional to their DAG size rather than their unfolded size.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class Var:
    """A logic variable.  Identity is the numeric id; the name is cosmetic."""

    __slots__ = ("id", "name")

    def __init__(self, id: int, name: Optional[str] = None):
        self.id = id
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Var) and other.id == self.id

    def __hash__(self):
        return hash(self.id)

    def __lt__(self, other: "Var") -> bool:
        return self.id < other.id

    def __repr__(self):
        if self.name is not None:
            return f"{self.name}#{self.id}"
        return f"_.{self.id}"


@dataclass(frozen=True)
class Ctor:
    name: str
    arity: int

    def __str__(self):
        return f"{self.name}/{self.arity}"


class App:
    """Constructor application ``ctor(args...)``; interned."""

    __slots__ = ("ctor", "args", "__weakref__")
    _table: "weakref.WeakValueDictionary[tuple, App]" = weakref.WeakValueDictionary()

    def __new__(cls, ctor: Ctor, args=()):
        args = tuple(args)
        # names are part of the key so a cached node never renames a variable
        key = (ctor, args, tuple(a.name if isinstance(a, Var) else None for a in args))
        node = cls._table.get(key)
        if node is not None:
            return node
        if len(args) != ctor.arity:
            raise ValueError(f"{ctor} applied to {len(args)} arguments")
        for a in args:
            if not isinstance(a, (Var, App, Mu, _Cut)):
                raise TypeError(f"not a term: {a!r}")
        node = object.__new__(cls)
        node.ctor = ctor
        node.args = args
        cls._table[key] = node
        return node

    def __reduce__(self):
        return (App, (self.ctor, self.args))

    def __repr__(self):
        from .syntax import format_term

        return f"App<{format_term(self)}>"


class Mu:
    """mu-binder ``mu var . body``; interned."""

    __slots__ = ("var", "body", "__weakref__")
    _table: "weakref.WeakValueDictionary[tuple, Mu]" = weakref.WeakValueDictionary()

    def __new__(cls, var: Var, body):
        key = (var, var.name, body)
        node = cls._table.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.var = var
        node.body = body
        cls._table[key] = node
        return node

    def __reduce__(self):
        return (Mu, (self.var, self.body))

    def __repr__(self):
        from .syntax import format_term

        return f"Mu<{format_term(self)}>"


class _Cut:
    __slots__ = ()

    def __repr__(self):
        return "CUT"

    def __reduce__(self):
        return "CUT"


#: Leaf standing for the part of an infinite tree below the expansion bound.
CUT = _Cut()

Tree = Union[Var, App]
MuTree = Union[Var, App, Mu]
DepthTree = Union[Var, App, _Cut]


def app(name: str, *args) -> App:
    return App(Ctor(name, len(args)), args)


def is_head(t) -> bool:
    """A head tree is a constructor applied to variables only."""
    return isinstance(t, App) and all(isinstance(a, Var) for a in t.args)


class FreshSource:
    """Monotone variable allocator.

    ``watermark`` splits variables into those that existed before the current
    top-level unification (``id < watermark``) and those it introduced.
    """

    __slots__ = ("next_id", "watermark")

    def __init__(self, next_id: int = 0):
        self.next_id = next_id
        self.watermark = next_id

    def var(self, name: Optional[str] = None) -> Var:
        v = Var(self.next_id, name)
        self.next_id += 1
        return v

    def vars(self, names: str) -> list[Var]:
        return [self.var(n) for n in names.split()]

    def mark(self) -> int:
        self.watermark = self.next_id
        return self.watermark

    def is_fresh(self, v: Var) -> bool:
        return v.id >= self.watermark

    def __repr__(self):
        return f"FreshSource(next_id={self.next_id}, watermark={self.watermark})"


# ---------------------------------------------------------------------------
# traversals


def iter_nodes(t) -> Iterator:
    """Pre-order syntactic traversal (binders included)."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, App):
            stack.extend(reversed(node.args))
        elif isinstance(node, Mu):
            stack.append(node.body)


def size(t) -> int:
    return sum(1 for _ in iter_nodes(t))


def height(t) -> int:
    """Constructor nesting depth; variables have height 0."""
    if isinstance(t, App):
        return 1 + max((height(a) for a in t.args), default=0)
    if isinstance(t, Mu):
        return height(t.body)
    return 0


def variables(t) -> set[Var]:
    return {n for n in iter_nodes(t) if isinstance(n, Var)}


def free_vars(t) -> set[Var]:
    out: set[Var] = set()

    def walk(node, bound):
        if isinstance(node, Var):
            if node not in bound:
                out.add(node)
        elif isinstance(node, App):
            for a in node.args:
                walk(a, bound)
        elif isinstance(node, Mu):
            walk(node.body, bound | {node.var})

    walk(t, frozenset())
    return out


def is_finite_tree(t) -> bool:
    return not any(isinstance(n, (Mu, _Cut)) for n in iter_nodes(t))


# ---------------------------------------------------------------------------
# well-formedness, substitution, unfolding


def well_formed(t) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, App):
        return all(well_formed(a) for a in t.args)
    if isinstance(t, Mu):
        return isinstance(t.body, App) and well_formed(t.body)
    return False


def substitute(t, x: Var, r):
    """``t[x := r]`` with renaming of binders that would capture free vars of r."""
    r_free = free_vars(r)
    next_id = [max((v.id for v in variables(t) | variables(r) | {x}), default=-1) + 1]

    def go(node):
        if isinstance(node, Var):
            return r if node == x else node
        if isinstance(node, App):
            return App(node.ctor, [go(a) for a in node.args])
        if isinstance(node, Mu):
            y, body = node.var, node.body
            if y == x or x not in free_vars(body):
                return node
            if y in r_free:
                z = Var(next_id[0], y.name)
                next_id[0] += 1
                body = substitute(body, y, z)
                y = z
            return Mu(y, go(body))
        return node

    return go(t)


def unfold_step(t):
    """Unfold every binder that is not nested under another binder, once."""
    if isinstance(t, App):
        return App(t.ctor, [unfold_step(a) for a in t.args])
    if isinstance(t, Mu):
        return substitute(t.body, t.var, t)
    return t


# ---------------------------------------------------------------------------
# graph view of a mu-tree


class MuGraph:
    """Occurrence graph of a well-formed mu-tree.

    Every syntactic occurrence is a node.  Bound variable occurrences point at
    their binder, binders point at their body, so resolving a node always
    lands on a constructor node or a free variable.
    """

    def __init__(self, t):
        if not well_formed(t):
            raise ValueError("mu-tree is not well-formed")
        self.kind: list[str] = []
        self.label: list = []
        self.children: list[tuple[int, ...]] = []
        self.root = self._build(t, {})
        self._resolved = [self._resolve(i) for i in range(len(self.kind))]

    def _add(self, kind, label, children=()):
        self.kind.append(kind)
        self.label.append(label)
        self.children.append(tuple(children))
        return len(self.kind) - 1

    def _build(self, t, env):
        if isinstance(t, Var):
            if t in env:
                return self._add("ref", env[t])
            return self._add("var", t)
        if isinstance(t, App):
            ids = [self._build(a, env) for a in t.args]
            return self._add("app", t.ctor, ids)
        node = self._add("mu", None)
        body = self._build(t.body, {**env, t.var: node})
        self.label[node] = body
        return node

    def _resolve(self, i):
        seen = set()
        while self.kind[i] in ("ref", "mu"):
            if i in seen:
                raise ValueError("binder cycle without constructor")
            seen.add(i)
            i = self.label[i]
        return i

    def __len__(self):
        return len(self.kind)

    def resolve(self, i: int) -> int:
        return self._resolved[i]

    def expand(self, k: int):
        memo: dict[tuple[int, int], object] = {}

        def go(i, depth):
            i = self._resolved[i]
            if self.kind[i] == "var":
                return self.label[i]
            if depth >= k:
                return CUT
            key = (i, depth)
            hit = memo.get(key)
            if hit is None:
                hit = App(self.label[i], [go(c, depth + 1) for c in self.children[i]])
                memo[key] = hit
            return hit

        return go(self.root, 0)


def expand_to_depth(t, k: int):
    """Prefix of the unfolding of ``t``; constructors below depth k become CUT."""
    return MuGraph(t).expand(k)


def mu_equal(a, b, modulo_renaming: bool = False, stats: Optional[dict] = None) -> bool:
    """Equality of the rational trees represented by two well-formed mu-trees.

    Decided by exploring pairs of resolved occurrence nodes (a bisimulation).
    With ``modulo_renaming`` free variables may differ by a bijection.
    """
    ga, gb = MuGraph(a), MuGraph(b)
    fuel = len(ga) * len(gb)
    fwd: dict[Var, Var] = {}
    bwd: dict[Var, Var] = {}
    seen = set()
    todo = [(ga.resolve(ga.root), gb.resolve(gb.root))]
    while todo:
        i, j = todo.pop()
        if (i, j) in seen:
            continue
        seen.add((i, j))
        assert len(seen) <= fuel, "bisimulation exceeded its state bound"
        ka, kb = ga.kind[i], gb.kind[j]
        if ka == "var" or kb == "var":
            if ka != kb:
                return False
            va, vb = ga.label[i], gb.label[j]
            if not modulo_renaming:
                if va != vb:
                    return False
                continue
            if fwd.setdefault(va, vb) != vb or bwd.setdefault(vb, va) != va:
                return False
            continue
        if ga.label[i] != gb.label[j]:
            return False
        for ci, cj in zip(ga.children[i], gb.children[j]):
            todo.append((ga.resolve(ci), gb.resolve(cj)))
    if stats is not None:
        stats["pairs"] = len(seen)
        stats["bound"] = fuel
    return True


def trees_equal_modulo_renaming(a, b) -> bool:
    """Syntactic equality of finite (possibly shared) trees up to a bijection on free variables."""
    fwd: dict[Var, Var] = {}
    bwd: dict[Var, Var] = {}
    seen = set()
    todo = [(a, b)]
    while todo:
        x, y = todo.pop()
        if (id(x), id(y)) in seen:
            continue
        seen.add((id(x), id(y)))
        if isinstance(x, Var) or isinstance(y, Var):
            if not (isinstance(x, Var) and isinstance(y, Var)):
                return False
            if fwd.setdefault(x, y) != y or bwd.setdefault(y, x) != x:
                return False
        elif isinstance(x, App) and isinstance(y, App):
            if x.ctor != y.ctor:
                return False
            todo.extend(zip(x.args, y.args))
        elif isinstance(x, Mu) and isinstance(y, Mu):
            # binders: compare bodies with the bound variables paired up
            if fwd.setdefault(x.var, y.var) != y.var or bwd.setdefault(y.var, x.var) != x.var:
                return False
            todo.append((x.body, y.body))
        elif x is not y:
            return False
    return True
