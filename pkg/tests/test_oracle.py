import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from echeck.core import (CIRCLE, EError, LINE, POINT, RIGHT_ANGLE, angle, circle, eq, lit, line,
                         metric, on, point, seg)
from echeck.diagram import rule_catalog
from echeck.oracle import (GroundTheory, InstanceTooLarge, Model, classical_entails,
                           clause_violations, full_decide, model_eval, random_instance,
                           random_model, restrict, truth_tables)

a, b, c, d = (point(n) for n in "abcd")
L = line("L")
alpha = circle("alpha")

# a = (0,0), b = (1,0), c = (2,0), d = (0,1); L is y = 0; alpha has center a, radius 1
M = Model(points={"a": (F(0), F(0)), "b": (F(1), F(0)), "c": (F(2), F(0)), "d": (F(0), F(1))},
          lines={"L": (F(0), F(1), F(0))},
          circles={"alpha": ((F(0), F(0)), F(1))})


def test_model_eval_diagram():
    assert model_eval([on(a, L), on(c, L), lit("between", a, b, c), on(b, alpha), on(d, alpha),
                       lit("center", a, alpha), lit("inside", a, alpha),
                       on(d, L, positive=False), eq(a, b, positive=False)], M)
    assert not model_eval([lit("between", b, a, c)], M)
    assert not model_eval([lit("same_side", d, c, L)], M)


def test_model_eval_metric():
    assert model_eval([metric("eq", seg(a, b) + seg(b, c), seg(a, c)),
                       metric("eq", seg(a, b), seg(a, d)),
                       metric("lt", seg(a, b), seg(b, d))], M)
    assert model_eval([metric("eq", angle(b, a, d), RIGHT_ANGLE),
                       metric("eq", angle(b, a, c), angle(c, a, b))], M)


def test_degenerate_line_is_an_error():
    bad = Model(points={"a": (F(0), F(0))}, lines={"L": (F(0), F(0), F(1))})
    with pytest.raises(EError, match="degenerate"):
        model_eval([on(a, L)], bad)


def test_classical_entailment():
    clauses = [["~A", "~B", "C"], ["~A", "B", "C"]]
    assert classical_entails(["A"], clauses, "C")
    assert not classical_entails([], clauses, "C")


def test_ground_theory():
    th = GroundTheory([a, b, c])
    assert th.entails([lit("between", a, b, c)], lit("between", c, b, a))
    assert not th.satisfiable([lit("between", a, b, c), lit("between", b, a, c)])
    closure, conflict = th.unit_closure([lit("between", a, b, c)])
    assert not conflict and eq(a, c, positive=False) in closure


def test_full_decide():
    assert full_decide([lit("between", a, b, c), metric("lt", seg(a, c), seg(a, b))]) == "inconsistent"
    assert full_decide([lit("between", a, b, c), metric("lt", seg(a, b), seg(a, c))]) == "consistent"
    many = [eq(point(f"p{i}"), point(f"p{i + 1}"), positive=False) for i in range(6)]
    with pytest.raises(InstanceTooLarge):
        full_decide(many)


def test_restrict():
    ls = [on(a, L), lit("between", a, b, c)]
    assert restrict(ls, [a, b, L]) == [on(a, L)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_axioms_hold_in_random_models(seed):
    m = random_model(random.Random(seed), n_points=4, n_lines=2, n_circles=2)
    tables = truth_tables(m)
    counts = {POINT: len(m.points), LINE: len(m.lines), CIRCLE: len(m.circles)}
    assert all(clause_violations(r, tables, counts) == 0 for r in rule_catalog())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_instances_are_true_in_their_model(seed):
    objects, gamma, m = random_instance(random.Random(seed), n_points=3, n_lines=1, n_circles=1)
    assert model_eval(gamma, m)
    assert GroundTheory(objects).satisfiable(gamma)
