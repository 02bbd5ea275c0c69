import itertools

import pytest

from reference import RefEngine
from ratunify import programs as P
from ratunify.engine import (FAIL, SUCCEED, Conj, Delay, Disj, Engine, Eq, Fresh, Neq, Stats,
                             StepBudgetExceeded, Timeout, conde, conj, disj, eq, fresh, neq,
                             relation, run)
from ratunify.syntax import numeral, parse_term
from ratunify.terms import App, Ctor, Var, app, mu_equal, trees_equal_modulo_renaming

F0, G0 = app("f"), app("g")


def test_goal_constructors():
    x = Var(0)
    assert isinstance(eq(x, F0), Eq) and isinstance(neq(x, F0), Neq)
    assert isinstance(conj(eq(x, F0), eq(x, F0)), Conj)
    assert isinstance(disj(eq(x, F0), eq(x, G0)), Disj)
    assert isinstance(fresh(lambda a, b: eq(a, b)), Fresh)
    assert isinstance(P.appendo(x, x, x), Delay)
    with pytest.raises(ValueError):
        eq(x, parse_term("mu X . f(X)"))


def test_run_simple():
    assert run(1, lambda q: eq(q, F0)) == [F0]
    assert run(1, lambda q: eq(F0, G0)) == []
    assert run(None, lambda q: disj(eq(q, F0), eq(q, G0))) == [F0, G0]
    assert run(0, lambda q: eq(q, F0)) == []
    assert run(1, lambda q: SUCCEED) == [Var(0, "q")]
    assert run(1, lambda q: FAIL) == []


def test_cyclic_answers_depend_on_policy():
    f = Ctor("f", 1)
    (ans,) = run(1, lambda q: eq(q, App(f, [q])), occurs="off")
    assert mu_equal(ans, parse_term("mu X . f(X)"))
    (ans,) = run(1, lambda q: eq(q, parse_term("f(g(_.0))")), occurs="off")
    assert mu_equal(ans, parse_term("mu X . f(g(X))"))
    for tag in ("trivial", "simple", "full", "mult", "sqrt"):
        assert run(1, lambda q: eq(q, App(f, [q])), occurs=tag) == []


def test_several_query_variables():
    out = run(None, lambda a, b: conj(eq(a, F0), disj(eq(b, a), eq(b, G0))))
    assert out == [(F0, F0), (F0, G0)]


def test_disequality_examples():
    assert run(1, lambda x: conj(neq(x, F0), eq(x, F0))) == []
    assert run(1, lambda x: conj(neq(x, F0), eq(x, G0))) == [G0]
    assert run(1, lambda x: conj(eq(x, F0), neq(x, F0))) == []
    assert run(1, lambda x: neq(F0, G0)) == [Var(0, "x")]

    def q(x, y):
        return conj(neq(app("h", x), app("h", y)), eq(x, y))

    assert run(1, q) == []


def test_disequality_is_narrowed_not_dropped():
    def q(x, y):
        return conj(neq(app("p", x, y), app("p", F0, G0)), eq(x, F0), eq(y, G0))

    assert run(1, q) == []

    def q2(x, y):
        return conj(neq(app("p", x, y), app("p", F0, G0)), eq(x, F0), eq(y, F0))

    assert run(1, q2) == [(F0, F0)]


def _ground(depth):
    if depth == 0:
        return [app("a"), app("b")]
    smaller = _ground(depth - 1)
    out = list(smaller)
    out += [app("s", t) for t in smaller]
    out += [app("p", t, u) for t in smaller[:3] for u in smaller[:3]]
    return list(dict.fromkeys(out))


def test_disequality_against_enumeration():
    terms = _ground(2)
    for t1, t2 in itertools.product(terms[:12], repeat=2):
        got = run(1, lambda x, y: conj(neq(app("f", x), app("f", y)), eq(x, t1), eq(y, t2)))
        assert bool(got) == (t1 != t2)


@pytest.mark.parametrize("t1,t2", [("f(a())", "f(a())"), ("f(a())", "f(b())"), ("a()", "g(a())")])
def test_eq_neq_duality(t1, t2):
    a, b = parse_term(t1), parse_term(t2)
    assert bool(run(1, lambda q: eq(a, b))) != bool(run(1, lambda q: neq(a, b)))


def test_constraint_recheck_soundness():
    engine = Engine("classical", "trivial")

    def q(x, y, z):
        return conj(neq(app("p", x, y), app("p", z, z)), eq(x, F0), disj(eq(y, F0), eq(y, G0)))

    from ratunify.unify import unify_many
    from ratunify.terms import FreshSource

    for st in engine.states(fresh(q)):
        for c in st.constraints:
            assert c
            res = unify_many(st.system, c, FreshSource(st.next_id))
            assert res is None or res.prefix


def test_interleaving_is_fair():
    out = Engine("classical", "trivial", max_steps=1000).run(1, lambda q: disj(P.divergeo(), eq(q, F0)))
    assert out == [F0]
    out = Engine("classical", "trivial", max_steps=1000).run(2, lambda q: disj(P.loopo(), eq(q, F0)))
    assert F0 in out and Var(0, "q") in out


def test_loop_caveat_under_full_policy():
    f = Ctor("f", 1)
    engine = Engine("classical", "full", max_steps=100_000)
    out = engine.run(1, lambda x: conj(eq(x, App(f, [x])), P.loopo()))
    assert out == []
    assert engine.stats.pruned_at_answer > 0


def test_step_budget_and_timeout():
    st = Stats(max_steps=2)
    st.step()
    st.step()
    with pytest.raises(StepBudgetExceeded):
        st.step()
    engine = Engine("classical", "trivial", timeout=0.0)
    with pytest.raises(Timeout):
        engine.answers(P.divergeo(), 1)


def test_relation_decorator_delays():
    calls = []

    @relation
    def r(x):
        calls.append(x)
        return eq(x, F0)

    r(Var(0))
    assert calls == []
    assert run(1, lambda q: r(q)) == [F0]


def test_conde():
    out = run(None, lambda q: conde((eq(q, F0),), (eq(q, G0), SUCCEED), eq(q, app("h", F0))))
    assert out == [F0, G0, app("h", F0)]


def _same_answers(a, b):
    """Equal as multisets, each answer up to renaming of its variables."""
    def pack(x):
        x = x if isinstance(x, tuple) else (x,)
        return App(Ctor("t", len(x)), list(x))

    rest = [pack(y) for y in b]
    if len(a) != len(rest):
        return False
    for x in map(pack, a):
        hit = next((i for i, y in enumerate(rest) if trees_equal_modulo_renaming(x, y)), None)
        if hit is None:
            return False
        del rest[hit]
    return True


ABC = P.lst(app("a"), app("b"), app("c"))

ORACLE_SUITE = [
    ("appendo split", lambda xs, ys: P.appendo(xs, ys, ABC), None),
    ("appendo forward", lambda q: P.appendo(P.lst(app("a")), P.lst(app("b")), q), None),
    ("appendo open", lambda xs, ys, zs: P.appendo(xs, ys, zs), 6),
    ("membero", lambda q: P.membero(q, ABC), None),
    ("membero neq", lambda q: conj(P.membero(q, ABC), neq(q, app("b"))), None),
    ("pluso", lambda a, b: P.pluso(a, b, numeral(6)), None),
    ("mulo", lambda a, b: P.mulo(a, b, numeral(12)), 6),
    ("expo forward", lambda q: P.expo(numeral(3), numeral(5), q), 1),
    ("expo backward", lambda q: P.expo(numeral(3), q, numeral(243)), 1),
    ("typeo id", lambda t: P.typeo(P.NIL, P.IDENTITY, t), 1),
]


@pytest.mark.parametrize("name,query,n", ORACLE_SUITE, ids=[s[0] for s in ORACLE_SUITE])
def test_matches_reference_engine(name, query, n):
    mine = Engine("classical", "trivial", max_steps=200_000).run(n, query)
    ref = RefEngine(max_steps=200_000).run(n, query)
    assert mine, name
    assert _same_answers(mine, ref)


def test_expo_answers():
    from ratunify.syntax import decode_numeral

    assert [decode_numeral(t) for t in run(1, lambda q: P.expo(numeral(3), numeral(5), q))] == [243]
    assert [decode_numeral(t) for t in run(1, lambda q: P.expo(numeral(3), q, numeral(243)))] == [5]


def test_stlc():
    off = run(1, lambda t: P.typeo(P.NIL, P.SELF_APPLICATION, t), occurs="off", max_steps=100_000)
    assert mu_equal(off[0], parse_term("arrow(mu A . arrow(A, B), B)"), modulo_renaming=True)
    assert run(1, lambda t: P.typeo(P.NIL, P.SELF_APPLICATION, t), max_steps=100_000) == []
    for tag in ("off", "trivial", "simple", "full", "mult", "sqrt"):
        (t,) = run(1, lambda t: P.typeo(P.NIL, P.IDENTITY, t), occurs=tag)
        assert mu_equal(t, parse_term("arrow(A, A)"), modulo_renaming=True)


def test_minimize_flag():
    f2 = Ctor("f", 2)

    def q(x):
        return fresh(lambda y: conj(eq(x, App(f2, [x, y])), eq(y, App(f2, [x, y]))))

    (plain,) = run(1, q, occurs="off")
    (small,) = run(1, q, occurs="off", minimize=True)
    assert mu_equal(plain, small)
    assert mu_equal(small, parse_term("mu X . f(X, X)"))
