from fractions import Fraction
from itertools import combinations

from hypothesis import assume, given, settings, strategies as st

from echeck.core import RIGHT_ANGLE, angle, area, eq, metric, point, seg
from echeck.metric import MetricContext, fm_feasible
from echeck.oracle import fm_oracle

a, b, c, d = (point(n) for n in "abcd")


def ctx(*lits, neqs=()):
    m = MetricContext()
    for l in lits:
        m.add(l)
    for x, y in neqs:
        m.add_point_neq(x, y)
    return m


def test_fm_basics():
    # x < y, y < x
    assert not fm_feasible([], [({0: 1, 1: -1}, 0, True), ({1: 1, 0: -1}, 0, True)])
    # x <= y, y <= x
    assert fm_feasible([], [({0: 1, 1: -1}, 0, False), ({1: 1, 0: -1}, 0, False)])
    # x = 1, x < 1
    assert not fm_feasible([({0: 1}, -1)], [({0: 1}, -1, True)])
    assert not fm_feasible([({}, 2)], [])
    assert fm_feasible([], [])


def test_transitivity_and_cancellation():
    m = ctx(metric("lt", seg(a, b), seg(b, c)), metric("lt", seg(b, c), seg(c, d)))
    assert m.entails(metric("lt", seg(a, b), seg(c, d)))
    assert not m.entails(metric("lt", seg(c, d), seg(a, b)))
    m = ctx(metric("eq", seg(a, b) + seg(c, d), seg(a, b) + seg(a, c)))
    assert m.entails(metric("eq", seg(d, c), seg(c, a)))


def test_magnitudes_are_nonnegative():
    m = MetricContext()
    assert m.entails(metric("lt", seg(a, b), seg(a, a), positive=False))
    assert m.entails(metric("eq", seg(a, a), seg(b, b)))
    m = ctx(neqs=[(a, b)])
    assert m.entails(metric("lt", seg(a, a), seg(a, b)))


def test_right_angle_and_areas():
    bound = metric("lt", angle(a, b, c), RIGHT_ANGLE + RIGHT_ANGLE + RIGHT_ANGLE)
    # angles are bounded by two right angles only when both arms are nondegenerate
    assert not MetricContext().entails(bound)
    m = ctx(neqs=[(a, b), (b, c)])
    assert m.entails(bound)
    assert m.entails(metric("eq", area(a, b, c), area(c, b, a)))


def test_inconsistency():
    m = ctx(metric("lt", seg(a, b), seg(c, d)), metric("lt", seg(c, d), seg(b, a)))
    assert not m.consistent()
    assert m.entails(metric("eq", seg(a, b), seg(a, c)))


def test_point_equalities():
    m = ctx(metric("eq", seg(a, b), seg(a, a)))
    assert m.entails(eq(a, b))
    m = ctx(metric("lt", seg(c, d), seg(a, b)))
    assert m.entails(eq(a, b, positive=False))
    assert m.derive_point_equality([(a, b), (c, d)]) == [eq(a, b, positive=False)]


def test_copy_is_independent():
    m = ctx(metric("lt", seg(a, b), seg(c, d)))
    n = m.copy()
    n.add(metric("lt", seg(c, d), seg(a, b)))
    assert m.consistent() and not n.consistent()


_coef = st.integers(-3, 3).map(Fraction)
_expr = st.tuples(st.dictionaries(st.integers(0, 3), _coef, max_size=4), _coef)


@settings(max_examples=300, deadline=None)
@given(st.lists(_expr, max_size=2), st.lists(st.tuples(_expr, st.booleans()), max_size=6))
def test_fm_agrees_with_oracle(eqs, ineqs):
    eqs = [({v: x for v, x in c.items() if x}, k) for c, k in eqs]
    ineqs = [({v: x for v, x in c.items() if x}, k, s) for (c, k), s in ineqs]
    assert fm_feasible(eqs, ineqs) == fm_oracle(eqs, ineqs)


_PTS = [a, b, c, d]
_SEGS = [seg(x, y) for x, y in combinations(_PTS, 2)]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["eq", "lt"]), st.sampled_from(_SEGS),
                          st.sampled_from(_SEGS), st.booleans()), min_size=1, max_size=4),
       st.tuples(st.sampled_from(["eq", "lt"]), st.sampled_from(_SEGS), st.sampled_from(_SEGS)),
       st.lists(st.integers(1, 4), min_size=6, max_size=6))
def test_entailment_sound_for_numeric_assignments(facts, goal, values):
    """If the facts hold under some positive lengths and entail the goal, the goal holds there."""
    val = dict(zip([str(s) for s in _SEGS], values))
    lits = [metric(r, x, y, positive=p) for r, x, y, p in facts]

    def true(l):
        x, y = val[str(l.atom.lhs)], val[str(l.atom.rhs)]
        v = x == y if l.atom.rel == "eq" else x < y
        return v == l.positive
    assume(all(true(l) for l in lits))
    m = ctx(*lits, neqs=combinations(_PTS, 2))
    g = metric(*goal)
    if m.entails(g):
        assert true(g)
