import random

import pytest
from hypothesis import given, settings, strategies as st

from gen import random_pair
from reference import robinson, walk_star_depth
from ratunify.eqsystem import BACKENDS, EqSystem
from ratunify.image import image_to_depth
from ratunify.occurs import OccursPolicy
from ratunify.syntax import parse_term
from ratunify.terms import (CUT, App, Ctor, FreshSource, Var, height, is_head, size,
                            trees_equal_modulo_renaming)
from ratunify.unify import unify, unify_many


def problem(*texts):
    scope, fs = {}, FreshSource()
    terms = [parse_term(t, scope, fs) for t in texts]
    return scope, fs, terms


def test_example1_system():
    scope, fs, (a, b) = problem("f(X, g())", "f(U, V)")
    r = unify(EqSystem(), a, b, fs)
    X, U, V = scope["X"], scope["U"], scope["V"]
    eqs = {e.vars: (e.repr, e.head) for e in r.system.equations()}
    assert eqs == {frozenset({X, U}): (X, None), frozenset({V}): (V, App(Ctor("g", 0), ()))}


def test_example2_system():
    scope, fs, (a, b) = problem("X", "f(g(X))")
    r = unify(EqSystem(), a, b, fs)
    X = scope["X"]
    eqs = r.system.equations()
    assert len(eqs) == 2
    (ex,) = [e for e in eqs if X in e.vars]
    assert ex.repr == X and ex.head.ctor.name == "f" and len(ex.vars) == 2
    f, g = Ctor("f", 1), Ctor("g", 1)
    assert image_to_depth(r.system, X, 4) is App(f, [App(g, [App(f, [App(g, [CUT])])])])


def test_example3_system():
    scope, fs, (a, b) = problem("f(X, g(X))", "f(g(g(X)), X)")
    r = unify(EqSystem(), a, b, fs)
    (e,) = r.system.equations()
    assert e.repr == scope["X"] and len(e.vars) == 3 and e.head.ctor.name == "g"


def test_clash_fails():
    _, fs, (a, b) = problem("f()", "g()")
    assert unify(EqSystem(), a, b, fs) is None
    _, fs, (a, b) = problem("f(X)", "f(X, Y)")
    assert unify(EqSystem(), a, b, fs) is None


def test_unify_many():
    scope, fs, (x, u, g, v) = problem("X", "U", "g()", "V")
    r = unify_many(EqSystem(), [], fs)
    assert r.system.classes() == set() and r.prefix == []
    r = unify_many(EqSystem(), [(x, u), (g, v)], fs)
    assert r.system.classes() == {frozenset({x, u}), frozenset({v})}
    _, fs, (f, g2) = problem("f()", "g()")
    assert unify_many(EqSystem(), [(f, f), (f, g2)], fs) is None


def test_prefix_example():
    scope, fs, (a, b) = problem("_.1", "f(g(_.2))")
    r = unify(EqSystem(), a, b, FreshSource(3))
    assert r.prefix == [(Var(1), parse_term("f(g(_.2))"))]


def test_prefix_has_no_fresh_variables_on_acyclic_problems():
    rng = random.Random(3)
    for _ in range(500):
        fs, vs, a, b = random_pair(rng)
        watermark = fs.next_id
        r = unify(EqSystem(), a, b, fs, OccursPolicy("trivial"))
        if r is None:
            continue
        for v, t in r.prefix:
            assert v.id < watermark
            stack = [t]
            while stack:
                u = stack.pop()
                if isinstance(u, Var):
                    assert u.id < watermark
                else:
                    stack.extend(u.args)


def test_mu_inputs_are_rejected():
    with pytest.raises(TypeError):
        unify(EqSystem(), Var(0), parse_term("mu X . f(X)"), FreshSource(5))


def test_trivial_policy_rejects_cycles():
    scope, fs, (a, b) = problem("X", "f(X)")
    assert unify(EqSystem(), a, b, fs, OccursPolicy("trivial")) is None
    assert unify(EqSystem(), a, b, fs, OccursPolicy("off")) is not None
    scope, fs, (a, b) = problem("f(X, Y)", "f(Y, g(X))")
    assert unify(EqSystem(), a, b, fs, OccursPolicy("trivial")) is None


def test_failure_leaves_input_system_untouched():
    scope, fs, (a, b, c) = problem("X", "f(Y)", "g(Z)")
    r = unify(EqSystem(), a, b, fs)
    before = r.system.format()
    assert unify(r.system, a, c, fs) is None
    assert r.system.format() == before


def test_canonical_form_is_preserved():
    rng = random.Random(9)
    for _ in range(300):
        fs, vs, a, b = random_pair(rng)
        r = unify(EqSystem(), a, b, fs)
        if r is not None:
            assert all(e.head is None or is_head(e.head) for e in r.system.equations())


def _expand_leaves(t, system, k, depth=0):
    """Re-expand every variable leaf of a depth tree under ``system``."""
    if t is CUT:
        return CUT
    if isinstance(t, Var):
        return image_to_depth(system, t, k - depth)
    return App(t.ctor, [_expand_leaves(a, system, k, depth + 1) for a in t.args])


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_composition_property(seed):
    rng = random.Random(seed)
    fs, vs, a, b = random_pair(rng, 4, 5)
    r1 = unify(EqSystem(), a, b, fs)
    if r1 is None:
        return
    fs2, vs2, c, d = random_pair(random.Random(seed + 1), 4, 5)
    r2 = unify(r1.system, c, d, FreshSource(max(fs.next_id, fs2.next_id)))
    if r2 is None:
        return
    for x in r1.system.dom():
        for k in (1, 5, 12):
            assert _expand_leaves(image_to_depth(r1.system, x, k), r2.system, k) is \
                image_to_depth(r2.system, x, k)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_prefix_soundness(seed):
    rng = random.Random(seed)
    fs, vs, a, b = random_pair(rng, 5, 6)
    r = unify(EqSystem(), a, b, fs, OccursPolicy("trivial"))
    if r is None:
        return
    replay = unify_many(EqSystem(), r.prefix, FreshSource(fs.next_id))
    assert replay is not None
    # free variables may be represented by different members of one class
    tup = Ctor("t", len(vs))
    assert trees_equal_modulo_renaming(App(tup, [image_to_depth(r.system, v, 32) for v in vs]),
                                       App(tup, [image_to_depth(replay.system, v, 32) for v in vs]))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_step_count_within_fuel(seed):
    rng = random.Random(seed)
    fs, vs, a, b = random_pair(rng)
    r = unify(EqSystem(), a, b, fs)
    if r is None:
        return
    h = max(height(a), height(b))
    fuel = (len(vs) + 1) * (h + 1) * (size(a) + size(b) + 1)
    assert r.steps <= fuel


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(BACKENDS))
def test_agrees_with_oracle_on_every_backend(seed, backend):
    rng = random.Random(seed)
    fs, vs, a, b = random_pair(rng)
    r = unify(EqSystem(backend), a, b, fs, OccursPolicy("trivial"))
    s = robinson(a, b)
    assert (r is None) == (s is None)
    if r is None:
        return
    tup = Ctor("t", len(vs))
    assert trees_equal_modulo_renaming(App(tup, [image_to_depth(r.system, v, 32) for v in vs]),
                                       App(tup, [walk_star_depth(v, s, 32) for v in vs]))
