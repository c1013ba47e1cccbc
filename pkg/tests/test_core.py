import pytest
from hypothesis import given, strategies as st

from echeck.core import (EError, FALSITY, SortError, TheoremStatement, angle, area, circle, eq,
                         expand_defined, free_vars, intersects, line, lit, metric, negate,
                         normalize_literal, on, point, seg, substitute)

a, b, c, d = (point(n) for n in "abcd")
L, M = line("L"), line("M")
alpha = circle("alpha")


def test_negate_is_involutive():
    l = lit("between", a, b, c)
    assert negate(negate(l)) == l
    assert negate(l).positive is False


def test_falsity_has_no_negation():
    with pytest.raises(ValueError):
        negate(FALSITY)


def test_sort_errors():
    with pytest.raises(SortError):
        lit("between", a, b, L)
    with pytest.raises(SortError):
        on(a, b)
    with pytest.raises(SortError):
        eq(a, L)
    with pytest.raises(SortError):
        metric("eq", seg(a, b), angle(a, b, c))
    with pytest.raises(SortError):
        seg(a, b) + area(a, b, c)


def test_on_and_intersects_dispatch():
    assert on(a, L).atom.pred == "on_line"
    assert on(a, alpha).atom.pred == "on_circle"
    assert intersects(alpha, L) == intersects(L, alpha)
    assert intersects(L, M).atom.pred == "intersects_ll"


def test_rendering():
    assert str(eq(a, b, positive=False)) == "a != b"
    assert str(on(a, L)) == "on(a,L)"
    assert str(metric("lt", seg(a, b), seg(c, d), positive=False)) == "seg(c,d) <= seg(a,b)"
    assert str(FALSITY) == "contradiction"


def test_normalize_symmetries():
    x = normalize_literal(metric("eq", seg(b, a) + seg(d, c), seg(c, a)))
    y = normalize_literal(metric("eq", seg(c, d) + seg(a, b), seg(a, c)))
    assert x == y
    x = normalize_literal(metric("lt", angle(c, b, a), angle(a, d, c)))
    y = normalize_literal(metric("lt", angle(a, b, c), angle(c, d, a)))
    assert x == y
    # sides of an equation are put in a fixed order, those of < are not
    assert normalize_literal(metric("eq", seg(c, d), seg(a, b))) == \
        normalize_literal(metric("eq", seg(a, b), seg(c, d)))
    assert normalize_literal(metric("lt", seg(c, d), seg(a, b))) != \
        normalize_literal(metric("lt", seg(a, b), seg(c, d)))


def test_normalize_leaves_diagram_literals():
    l = lit("between", c, b, a)
    assert normalize_literal(l) is l


def test_expand_defined():
    assert expand_defined("diff_side", (a, b, L)) == [
        on(a, L, positive=False), on(b, L, positive=False), lit("same_side", a, b, L, positive=False)]
    assert expand_defined("outside", (a, alpha)) == [
        lit("inside", a, alpha, positive=False), on(a, alpha, positive=False)]
    assert expand_defined("seg_leq", (seg(a, b), seg(c, d))) == [
        metric("lt", seg(c, d), seg(a, b), positive=False)]
    with pytest.raises(EError):
        expand_defined("nearby", (a, b))


def test_substitute_and_free_vars():
    l = metric("eq", seg(a, b), seg(b, c))
    s = substitute(l, {a: d, b: a})
    assert s == metric("eq", seg(d, a), seg(a, c))
    assert free_vars(s) == {a, c, d}
    assert substitute(on(a, L), {L: M}) == on(a, M)


def test_theorem_statement_scoping():
    with pytest.raises(EError, match="existential"):
        TheoremStatement("T", (a,), (on(b, L),), existentials=(b, L))
    with pytest.raises(EError, match="undeclared"):
        TheoremStatement("T", (a,), (eq(a, b),))
    with pytest.raises(EError, match="conclusion"):
        TheoremStatement("T", (a,), (), conclusions=(eq(a, b),))
    t = TheoremStatement("T", (a, b), (eq(a, b, positive=False),), (c,), (FALSITY,))
    assert t.concludes_falsity


_pts = st.sampled_from([a, b, c, d])
_segs = st.builds(seg, _pts, _pts)


@given(st.lists(_segs, min_size=1, max_size=4), st.lists(_segs, min_size=1, max_size=4),
       st.randoms(use_true_random=False), st.booleans())
def test_normalization_invariant_under_reordering(xs, ys, rnd, swap_sides):
    def total(ts):
        out = ts[0]
        for t in ts[1:]:
            out = out + t
        return out

    def flip(t):
        p, q = t.summands[0].points
        return seg(q, p)
    l1 = metric("eq", total(xs), total(ys))
    xs2 = [flip(t) for t in xs]
    ys2 = [flip(t) for t in ys]
    rnd.shuffle(xs2)
    rnd.shuffle(ys2)
    l2 = metric("eq", total(ys2), total(xs2)) if swap_sides else metric("eq", total(xs2), total(ys2))
    assert normalize_literal(l1) == normalize_literal(l2)
    assert normalize_literal(normalize_literal(l1)) == normalize_literal(l1)
