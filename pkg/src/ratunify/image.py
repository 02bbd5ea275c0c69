"""Reading equation systems back as trees.

``image_to_depth`` truncates the (possibly infinite) image of a variable;
``mu_image`` produces a finite mu-tree for it by tracking which class
representatives are on the current path and wrapping a binder around those
that were reached again from below.
"""

from __future__ import annotations

from .eqsystem import EqSystem
from .terms import CUT, App, Mu, Var


def image_to_depth(system: EqSystem, x: Var, k: int, memo: dict | None = None):
    """Image of ``x`` with constructors at depth ``k`` replaced by CUT.

    Headless classes resolve to their representative without consuming depth.
    Shared subterms are built once, so the result is a DAG of size
    O(|dom| * k) even when the unfolded tree is exponential.
    """
    memo = {} if memo is None else memo

    def go(v, depth):
        r, head = system.find(v)
        if head is None:
            return r
        if depth >= k:
            return CUT
        key = (r, depth)
        hit = memo.get(key)
        if hit is None:
            hit = App(head.ctor, [go(a, depth + 1) for a in head.args])
            memo[key] = hit
        return hit

    return go(x, 0)


_FALSE, _TRUE = False, True


def mu_image(system: EqSystem, x: Var, visited: dict | None = None):
    """mu-tree whose unfolding is the image of ``x``.

    ``visited`` maps representatives to False (on the path once) or True
    (reached again); absence means not encountered.  It is threaded through
    children left to right and restored on exit, so a caller-supplied map
    comes back unchanged.
    """
    vis = {} if visited is None else visited
    # explicit stack: ("enter", var) or ("exit", rep, ctor, n_children)
    out: list = []
    stack: list = [("enter", x)]
    while stack:
        frame = stack.pop()
        if frame[0] == "enter":
            r, head = system.find(frame[1])
            if head is None:
                out.append(r)
                continue
            if vis.get(r) is not None:
                vis[r] = _TRUE
                out.append(r)
                continue
            vis[r] = _FALSE
            stack.append(("exit", r, head.ctor, len(head.args)))
            for a in reversed(head.args):
                stack.append(("enter", a))
        else:
            _, r, ctor, n = frame
            children = out[len(out) - n:] if n else []
            del out[len(out) - n:]
            node = App(ctor, children)
            if vis[r] is _TRUE:
                node = Mu(r, node)
            del vis[r]
            out.append(node)
    assert len(out) == 1
    return out[0]


def answer(system: EqSystem, q: Var, minimize: bool = False):
    if minimize:
        from .minimize import minimize as _minimize

        system = _minimize(system)
    return mu_image(system, q)
