"""Concrete syntax for terms and problem files.

Grammar::

    term  := VAR | ctor '(' [term (',' term)*] ')' | 'mu' VAR '.' term | '#' DIGITS
    VAR   := [A-Z][A-Za-z0-9_']* | '_.' DIGITS
    ctor  := [a-z][A-Za-z0-9_']*

``#N`` is sugar for the little-endian binary numeral of N built from
``nil()``, ``cons(H, T)``, ``b0()`` and ``b1()``.

Problem files hold one directive per line (``%`` starts a comment)::

    T1 = T2            unify
    T1 =/= T2          disequality
    X == T             raw equation, loaded as an equation system
    call rel(T, ...)   invoke a named demo relation
    query X, Y         variables whose answers are printed
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .terms import CUT, App, Ctor, FreshSource, Mu, Var, app, free_vars, iter_nodes


class ParseError(Exception):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<var>_\.\d+|[A-Z][A-Za-z0-9_']*)
  | (?P<ident>[a-z][A-Za-z0-9_']*)
  | (?P<num>\#\d+)
  | (?P<op>=/=|==|[(),.=])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1) -> list[_Tok]:
    toks = []
    pos = 0
    col_base = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col_base + 1)
        kind = m.lastgroup
        if kind == "ws":
            for i, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line += 1
                    col_base = i + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - col_base + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - col_base + 1))
    return toks


def numeral(n: int):
    """Little-endian binary numeral as a cons list of bits (0 is ``nil()``)."""
    if n < 0:
        raise ValueError("negative numeral")
    bits = []
    while n:
        bits.append(app("b1") if n & 1 else app("b0"))
        n >>= 1
    out = app("nil")
    for b in reversed(bits):
        out = app("cons", b, out)
    return out


def decode_numeral(t) -> Optional[int]:
    """Inverse of :func:`numeral`; None if ``t`` is not a ground numeral."""
    value, weight = 0, 1
    while isinstance(t, App) and t.ctor == Ctor("cons", 2):
        bit = t.args[0]
        if bit == app("b1"):
            value += weight
        elif bit != app("b0"):
            return None
        weight <<= 1
        t = t.args[1]
    if t != app("nil"):
        return None
    return value


class _Parser:
    def __init__(self, toks, scope: dict, fresh: FreshSource, allow_mu: bool):
        self.toks = toks
        self.i = 0
        self.scope = scope
        self.fresh = fresh
        self.allow_mu = allow_mu
        self.bound: list[tuple[str, Var]] = []

    def peek(self, off=0) -> _Tok:
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text:
            where = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise ParseError(f"expected {text!r}, found {where}", tok.line, tok.col)
        return tok

    def variable(self, name: str) -> Var:
        for bname, bvar in reversed(self.bound):
            if bname == name:
                return bvar
        if name.startswith("_."):
            key = name
            if key not in self.scope:
                self.scope[key] = Var(int(name[2:]))
                self.fresh.next_id = max(self.fresh.next_id, int(name[2:]) + 1)
            return self.scope[key]
        if name not in self.scope:
            self.scope[name] = self.fresh.var(name)
        return self.scope[name]

    def term(self):
        tok = self.next()
        if tok.kind == "var":
            return self.variable(tok.text)
        if tok.kind == "num":
            return numeral(int(tok.text[1:]))
        if tok.kind == "ident":
            if tok.text == "mu" and self.peek().kind == "var":
                if not self.allow_mu:
                    raise ParseError("mu-binders are not allowed in problem input", tok.line, tok.col)
                vtok = self.next()
                name = vtok.text
                v = Var(self.fresh.next_id, None if name.startswith("_.") else name)
                self.fresh.next_id += 1
                self.expect(".")
                self.bound.append((name, v))
                body = self.term()
                self.bound.pop()
                return Mu(v, body)
            self.expect("(")
            args = []
            if self.peek().text != ")":
                args.append(self.term())
                while self.peek().text == ",":
                    self.next()
                    args.append(self.term())
            self.expect(")")
            return App(Ctor(tok.text, len(args)), args)
        where = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"expected a term, found {where}", tok.line, tok.col)

    def done(self):
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)


def parse_term(text: str, scope: Optional[dict] = None, fresh: Optional[FreshSource] = None,
               allow_mu: bool = True, line: int = 1):
    """Parse one term.  Variables with the same name share one :class:`Var` via ``scope``."""
    scope = {} if scope is None else scope
    if fresh is None:
        # new names must not collide with variables already in scope
        fresh = FreshSource(max((v.id for v in scope.values()), default=-1) + 1)
    p = _Parser(_tokenize(text, line), scope, fresh, allow_mu)
    t = p.term()
    p.done()
    return t


# ---------------------------------------------------------------------------
# printing


def _display_names(t) -> dict[Var, str]:
    """Pick unique display names; clashing names get ``_N`` suffixes."""
    names: dict[Var, str] = {}
    taken: set[str] = set()
    ordered = []
    for node in iter_nodes(t):
        if isinstance(node, Var):
            ordered.append(node)
        elif isinstance(node, Mu):
            ordered.append(node.var)
    # free variables claim their names first so binders are the ones renamed
    free = free_vars(t)
    ordered.sort(key=lambda v: (v not in free,))
    for v in ordered:
        if v in names:
            continue
        base = v.name if v.name else f"_.{v.id}"
        name = base
        k = 1
        while name in taken:
            k += 1
            name = f"{base}_{k}"
        names[v] = name
        taken.add(name)
    return names


def format_term(t, names: Optional[dict] = None) -> str:
    if names is None:
        names = _display_names(t)
    parts: list[str] = []
    stack: list = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, str):
            parts.append(node)
        elif isinstance(node, Var):
            parts.append(names.get(node) or (node.name or f"_.{node.id}"))
        elif node is CUT:
            parts.append("✂")
        elif isinstance(node, Mu):
            vname = names.get(node.var) or (node.var.name or f"_.{node.var.id}")
            parts.append(f"mu {vname} . ")
            stack.append(node.body)
        elif isinstance(node, App):
            parts.append(node.ctor.name + "(")
            stack.append(")")
            for k, a in enumerate(reversed(node.args)):
                stack.append(a)
                if k != len(node.args) - 1:
                    stack.append(", ")
        else:
            raise TypeError(f"not a term: {node!r}")
    return "".join(parts)


# ---------------------------------------------------------------------------
# problem files


@dataclass
class Directive:
    kind: str  # "eq", "neq", "raw", "call", "query"
    args: tuple
    line: int


@dataclass
class ProblemFile:
    directives: list[Directive] = field(default_factory=list)
    scope: dict = field(default_factory=dict)
    fresh: FreshSource = field(default_factory=FreshSource)
    name: str = "problem"

    @property
    def query_vars(self) -> list[Var]:
        out = []
        for d in self.directives:
            if d.kind == "query":
                out.extend(d.args)
        return out

    def uses_search(self) -> bool:
        return any(d.kind in ("neq", "call") for d in self.directives)


def _split_top(text: str, sep: str) -> Optional[tuple[str, str]]:
    depth = 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            # "=" must not be part of "==" or "=/="
            if sep == "=" and (text.startswith("==", i) or text.startswith("=/=", i)
                               or (i > 0 and text[i - 1] in "=/")):
                i += 1
                continue
            return text[:i], text[i + len(sep):]
        i += 1
    return None


def parse_problem(text: str, name: str = "problem") -> ProblemFile:
    pf = ProblemFile(name=name)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        col0 = raw.index(line[0]) + 1

        def term(s, offset):
            try:
                return parse_term(s, pf.scope, pf.fresh, allow_mu=False, line=lineno)
            except ParseError as e:
                col = e.column + offset if e.line == lineno else e.column
                raise ParseError(e.message, e.line, col) from None

        if re.match(r"query\b", line):
            names = [n.strip() for n in line[len("query"):].split(",")]
            vs = []
            for n in names:
                if not re.fullmatch(r"_\.\d+|[A-Z][A-Za-z0-9_']*", n):
                    raise ParseError(f"bad query variable {n!r}", lineno, col0)
                vs.append(parse_term(n, pf.scope, pf.fresh))
            pf.directives.append(Directive("query", tuple(vs), lineno))
            continue
        if re.match(r"call\b", line):
            body = line[len("call"):].strip()
            goal = term(body, col0 + line.index(body) - 1)
            if not isinstance(goal, App):
                raise ParseError("call expects a relation application", lineno, col0)
            pf.directives.append(Directive("call", (goal,), lineno))
            continue
        for op, kind in (("=/=", "neq"), ("==", "raw"), ("=", "eq")):
            parts = _split_top(line, op)
            if parts is not None:
                lhs, rhs = parts
                left = term(lhs.strip(), col0 - 1)
                right = term(rhs.strip(), col0 + len(lhs) + len(op) - 1 + (len(rhs) - len(rhs.lstrip())))
                if kind == "raw" and not isinstance(left, Var):
                    raise ParseError("left side of == must be a variable", lineno, col0)
                pf.directives.append(Directive(kind, (left, right), lineno))
                break
        else:
            raise ParseError(f"unrecognised directive {line!r}", lineno, col0)
    if not pf.query_vars:
        raise ParseError("problem has no query variable", max(1, len(text.splitlines())), 1)
    return pf
