"""Demo relations: lists, binary arithmetic, STLC typing and a divergent goal.

Numbers are little-endian bit lists over ``b0()``/``b1()`` with no
trailing zero (``nil()`` is 0), as in the classic relational arithmetic.
"""

from __future__ import annotations

from .engine import FAIL, SUCCEED, conde, conj, disj, eq, fresh, neq, relation
from .syntax import decode_numeral, numeral
from .terms import app

NIL = app("nil")
B0 = app("b0")
B1 = app("b1")
ONE = numeral(1)


def cons(h, t):
    return app("cons", h, t)


def lst(*items, tail=None):
    out = NIL if tail is None else tail
    for x in reversed(items):
        out = cons(x, out)
    return out


# -- lists -------------------------------------------------------------------

@relation
def appendo(xs, ys, zs):
    return conde(
        (eq(xs, NIL), eq(ys, zs)),
        fresh(lambda h, t, r: conj(
            eq(xs, cons(h, t)),
            eq(zs, cons(h, r)),
            appendo(t, ys, r))),
    )


@relation
def membero(x, xs):
    return fresh(lambda h, t: conj(
        eq(xs, cons(h, t)),
        conde(eq(x, h), membero(x, t))))


# -- binary arithmetic ---------------------------------------------------------

def poso(n):
    return fresh(lambda a, d: eq(n, cons(a, d)))


def gt1o(n):
    return fresh(lambda a, ad, dd: eq(n, cons(a, cons(ad, dd))))


_FULL_ADDER = [
    (B0, B0, B0, B0, B0),
    (B1, B0, B0, B1, B0),
    (B0, B1, B0, B1, B0),
    (B1, B1, B0, B0, B1),
    (B0, B0, B1, B1, B0),
    (B1, B0, B1, B0, B1),
    (B0, B1, B1, B0, B1),
    (B1, B1, B1, B1, B1),
]


def full_addero(b, x, y, r, c):
    return disj(*(conj(eq(b, rb), eq(x, rx), eq(y, ry), eq(r, rr), eq(c, rc))
                  for rb, rx, ry, rr, rc in _FULL_ADDER))


@relation
def addero(d, n, m, r):
    return conde(
        (eq(d, B0), eq(m, NIL), eq(n, r)),
        (eq(d, B0), eq(n, NIL), eq(m, r), poso(m)),
        (eq(d, B1), eq(m, NIL), addero(B0, n, ONE, r)),
        (eq(d, B1), eq(n, NIL), poso(m), addero(B0, ONE, m, r)),
        (eq(n, ONE), eq(m, ONE),
         fresh(lambda a, c: conj(eq(r, lst(a, c)), full_addero(d, B1, B1, a, c)))),
        (eq(n, ONE), gen_addero(d, n, m, r)),
        (eq(m, ONE), gt1o(n), gt1o(r), addero(d, ONE, n, r)),
        (gt1o(n), gen_addero(d, n, m, r)),
    )


@relation
def gen_addero(d, n, m, r):
    return fresh(lambda a, b, c, e, x, y, z: conj(
        eq(n, cons(a, x)),
        eq(m, cons(b, y)), poso(y),
        eq(r, cons(c, z)), poso(z),
        full_addero(d, a, b, c, e),
        addero(e, x, y, z)))


def pluso(n, m, k):
    return addero(B0, n, m, k)


@relation
def mulo(n, m, p):
    return conde(
        (eq(n, NIL), eq(p, NIL)),
        (poso(n), eq(m, NIL), eq(p, NIL)),
        (eq(n, ONE), poso(m), eq(m, p)),
        (gt1o(n), eq(m, ONE), eq(n, p)),
        fresh(lambda x, z: conj(
            eq(n, cons(B0, x)), poso(x),
            eq(p, cons(B0, z)), poso(z),
            gt1o(m),
            mulo(x, m, z))),
        fresh(lambda x, y: conj(
            eq(n, cons(B1, x)), poso(x),
            eq(m, cons(B0, y)), poso(y),
            mulo(m, n, p))),
        fresh(lambda x, y: conj(
            eq(n, cons(B1, x)), poso(x),
            eq(m, cons(B1, y)), poso(y),
            odd_mulo(x, n, m, p))),
    )


def odd_mulo(x, n, m, p):
    return fresh(lambda q: conj(
        bound_mulo(q, p, n, m),
        mulo(x, m, q),
        pluso(cons(B0, q), m, p)))


@relation
def bound_mulo(q, p, n, m):
    return conde(
        (eq(q, NIL), poso(p)),
        fresh(lambda a0, a1, a2, a3, x, y, z: conj(
            eq(q, cons(a0, x)),
            eq(p, cons(a1, y)),
            conde(
                (eq(n, NIL), eq(m, cons(a2, z)), bound_mulo(x, y, z, NIL)),
                (eq(n, cons(a3, z)), bound_mulo(x, y, z, m))))),
    )


@relation
def expo(b, e, r):
    """``b ** e == r`` by recursion on the bits of the exponent:
    b^0 = 1, b^(2k) = (b^k)^2, b^(2k+1) = b * (b^k)^2."""
    return conde(
        (eq(e, NIL), eq(r, ONE)),
        fresh(lambda k, h: conj(
            eq(e, cons(B0, k)), poso(k),
            expo(b, k, h),
            mulo(h, h, r))),
        fresh(lambda k, h, h2: conj(
            eq(e, cons(B1, k)),
            expo(b, k, h),
            mulo(h, h, h2),
            mulo(b, h2, r))),
    )


# -- simply typed lambda calculus ---------------------------------------------

def arrow(a, b):
    return app("arrow", a, b)


@relation
def lookupo(env, x, t):
    return fresh(lambda y, ty, rest: conj(
        eq(env, cons(app("pair", y, ty), rest)),
        conde(
            (eq(x, y), eq(t, ty)),
            (neq(x, y), lookupo(rest, x, t)))))


@relation
def typeo(env, term, t):
    """Typing for terms built from ``var(N)``, ``lam(N, Body)``, ``app(M, N)``."""
    return conde(
        fresh(lambda x: conj(eq(term, app("var", x)), lookupo(env, x, t))),
        fresh(lambda x, body, a, b: conj(
            eq(term, app("lam", x, body)),
            eq(t, arrow(a, b)),
            typeo(cons(app("pair", x, a), env), body, b))),
        fresh(lambda m, n, a: conj(
            eq(term, app("app", m, n)),
            typeo(env, m, arrow(a, t)),
            typeo(env, n, a))),
    )


def lam(name: str, body):
    return app("lam", app(name), body)


def var(name: str):
    return app("var", app(name))


def apply(m, n):
    return app("app", m, n)


SELF_APPLICATION = lam("x", apply(var("x"), var("x")))
IDENTITY = lam("x", var("x"))


# -- divergence --------------------------------------------------------------

@relation
def loopo():
    """Succeeds infinitely often without binding anything."""
    return disj(SUCCEED, loopo())


@relation
def divergeo():
    """Never succeeds and never finishes."""
    return conj(divergeo())


RELATIONS = {
    "appendo": appendo,
    "membero": membero,
    "pluso": pluso,
    "mulo": mulo,
    "expo": expo,
    "typeo": typeo,
    "lookupo": lookupo,
    "loopo": loopo,
    "divergeo": divergeo,
}

__all__ = [
    "FAIL", "RELATIONS", "appendo", "membero", "pluso", "mulo", "expo", "typeo", "lookupo",
    "loopo", "divergeo", "numeral", "decode_numeral", "lst", "cons", "arrow", "lam", "var",
    "apply", "SELF_APPLICATION", "IDENTITY",
]
