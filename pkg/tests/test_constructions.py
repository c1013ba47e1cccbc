import pytest

from echeck.constructions import (ConstructionError, apply_construction, construction_catalog,
                                  instantiate, mentioned, output_sorts, resolve, rule_by_id)
from echeck.core import CIRCLE, LINE, POINT, circle, eq, line, metric, on, point, seg
from echeck.diagram import DiagramState
from echeck.metric import MetricContext
from echeck.oracle import full_decide

a, b, c, x, y = (point(n) for n in "abcxy")
L, M = line("L"), line("M")
alpha, beta = circle("alpha"), circle("beta")


def test_catalog():
    cat = construction_catalog()
    assert len(cat) == 20
    assert len({r.id for r in cat}) == 20
    assert rule_by_id("lines.1").keyword == "line_through"


def test_resolve_by_sorts():
    assert resolve("point_on", (L,))[0].id == "points.2"
    assert resolve("point_on", (alpha,))[0].id == "points.7"
    r, args = resolve("intersection_point", (alpha, L))
    assert r.id == "intersections.2" and args == (L, alpha)
    assert output_sorts("intersection_points", (L, alpha)) == (POINT, POINT)
    assert output_sorts("line_through", (a, b)) == (LINE,)
    assert output_sorts("circle", (a, b)) == (CIRCLE,)
    with pytest.raises(ConstructionError, match="unknown construction"):
        resolve("midpoint", (a, b))
    with pytest.raises(ConstructionError, match="expects"):
        resolve("line_through", (a, L))


def test_instantiate_and_distinct_from():
    r = rule_by_id("points.2")
    pre, concl = instantiate(r, (L,), (x,), distinct_from=(a, M))
    assert on(x, L) in concl
    assert eq(x, a, positive=False) in concl
    assert on(x, M, positive=False) in concl
    assert eq(L, M, positive=False) in pre
    with pytest.raises(ConstructionError, match="distinct_from"):
        instantiate(rule_by_id("lines.1"), (a, b), (L,), distinct_from=(c,))
    with pytest.raises(ConstructionError, match="introduces"):
        instantiate(rule_by_id("lines.1"), (a, b), (x,))


def test_apply_checks_prerequisites():
    d = DiagramState([a, b])
    with pytest.raises(ConstructionError, match="requires a != b"):
        apply_construction("line_through", (a, b), (L,), d)
    d.add([eq(a, b, positive=False)])
    rule, concl = apply_construction("line_through", (a, b), (L,), d)
    assert rule.id == "lines.1" and concl == [on(a, L), on(b, L)]
    with pytest.raises(ConstructionError, match="fresh"):
        apply_construction("line_through", (a, b), (a,), d)
    with pytest.raises(ConstructionError, match="unknown object"):
        apply_construction("line_through", (a, c), (L,), d)


def test_point_disequality_from_metric():
    d = DiagramState([a, b])
    m = MetricContext()
    m.add(metric("lt", seg(a, a), seg(a, b)))
    rule, _ = apply_construction("circle", (a, b), (alpha,), d, m)
    assert rule.id == "circles.1"


@pytest.mark.parametrize("rule", [r for r in construction_catalog() if len(mentioned(r)) <= 5],
                         ids=lambda r: r.id)
def test_conclusions_consistent_with_prerequisites(rule):
    """A construction never yields a configuration that no diagram realizes."""
    assert full_decide(list(rule.prerequisites) + list(rule.conclusions)) == "consistent"
