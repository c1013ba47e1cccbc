"""Construction rules: introduce new points, lines and circles."""
from __future__ import annotations

from dataclasses import dataclass

from .core import (CIRCLE, LINE, POINT, EError, Literal, ObjectVar, Sort, eq, free_vars,
                   on, substitute)
from .diagram import _clause


class ConstructionError(EError):
    pass


@dataclass(frozen=True)
class ConstructionRule:
    id: str
    keyword: str
    inputs: tuple[ObjectVar, ...]
    prerequisites: tuple[Literal, ...]
    outputs: tuple[ObjectVar, ...]
    conclusions: tuple[Literal, ...]
    # the line or circle the new point is placed on, if `distinct from` lists
    # of that sort require distinctness from it
    host: ObjectVar | None = None
    distinct_support: bool = False

    def __str__(self):
        ins = ", ".join(str(v) for v in self.inputs)
        outs = ", ".join(str(v) for v in self.outputs)
        pre = ", ".join(str(p) for p in self.prerequisites) or "-"
        con = ", ".join(str(c) for c in self.conclusions) or "-"
        return f"{self.id}: {self.keyword}({ins}) -> {outs} | requires {pre} | gives {con}"


_V = {n: ObjectVar(n, POINT) for n in "abcd"}
_V.update(L=ObjectVar("L", LINE), M=ObjectVar("M", LINE),
          alpha=ObjectVar("A", CIRCLE), beta=ObjectVar("B", CIRCLE))
a, b, c, d = (_V[n] for n in "abcd")
L, M, A, B = _V["L"], _V["M"], _V["alpha"], _V["beta"]


def _d(text: str) -> tuple[Literal, ...]:
    return _clause("", text).literals if text else ()


def _rules() -> list[ConstructionRule]:
    R = ConstructionRule
    return [
        R("points.1", "point", (), (), (a,), (), None, True),
        R("points.2", "point_on", (L,), (), (a,), _d("on(a,L)"), L, True),
        R("points.3", "point_between", (L, b, c), _d("on(b,L) on(c,L) ~eqp(b,c)"), (a,),
          _d("on(a,L) bt(b,a,c)"), L, True),
        R("points.4", "point_extending", (L, b, c), _d("on(b,L) on(c,L) ~eqp(b,c)"), (a,),
          _d("on(a,L) bt(b,c,a)"), L, True),
        R("points.5", "point_same_side", (L, b), _d("~on(b,L)"), (a,), _d("ss(a,b,L)"), None, True),
        R("points.6", "point_opposite_side", (L, b), _d("~on(b,L)"), (a,),
          _d("~on(a,L) ~ss(a,b,L)"), None, True),
        R("points.7", "point_on", (A,), (), (a,), _d("onc(a,A)"), A, True),
        R("points.8", "point_inside", (A,), (), (a,), _d("in(a,A)"), None, True),
        R("points.9", "point_outside", (A,), (), (a,), _d("~in(a,A) ~onc(a,A)"), None, True),
        R("lines.1", "line_through", (a, b), _d("~eqp(a,b)"), (L,), _d("on(a,L) on(b,L)")),
        R("circles.1", "circle", (a, b), _d("~eqp(a,b)"), (A,), _d("cen(a,A) onc(b,A)")),
        R("intersections.1", "intersection_point", (L, M), _d("ill(L,M)"), (a,), _d("on(a,L) on(a,M)")),
        R("intersections.2", "intersection_point", (L, A), _d("ilc(L,A)"), (a,), _d("onc(a,A) on(a,L)")),
        R("intersections.3", "intersection_points", (L, A), _d("ilc(L,A)"), (a, b),
          _d("onc(a,A) on(a,L) onc(b,A) on(b,L) ~eqp(a,b)")),
        R("intersections.4", "intersection_between", (L, A, b, c),
          _d("in(b,A) on(b,L) ~in(c,A) ~onc(c,A) on(c,L)"), (a,),
          _d("onc(a,A) on(a,L) bt(b,a,c)")),
        R("intersections.5", "intersection_extending", (L, A, c, b), _d("in(b,A) on(b,L) ~eqp(c,b) on(c,L)"),
          (a,), _d("onc(a,A) on(a,L) bt(a,b,c)")),
        R("intersections.6", "intersection_point", (A, B), _d("icc(A,B)"), (a,), _d("onc(a,A) onc(a,B)")),
        R("intersections.7", "intersection_points", (A, B), _d("icc(A,B)"), (a, b),
          _d("onc(a,A) onc(a,B) onc(b,A) onc(b,B) ~eqp(a,b)")),
        R("intersections.8", "intersection_same_side", (A, B, c, d, L, b),
          _d("icc(A,B) cen(c,A) cen(d,B) on(c,L) on(d,L) ~on(b,L)"), (a,),
          _d("onc(a,A) onc(a,B) ss(a,b,L)")),
        R("intersections.9", "intersection_opposite_side", (A, B, c, d, L, b),
          _d("icc(A,B) cen(c,A) cen(d,B) on(c,L) on(d,L) ~on(b,L)"), (a,),
          _d("onc(a,A) onc(a,B) ~ss(a,b,L) ~on(a,L)")),
    ]


_CATALOG = _rules()
_BY_ID = {r.id: r for r in _CATALOG}
KEYWORDS = sorted({r.keyword for r in _CATALOG})
# keywords whose line/circle arguments may be given in either order
_SYMMETRIC = {"intersection_point", "intersection_points"}


def construction_catalog() -> list[ConstructionRule]:
    return list(_CATALOG)


def rule_by_id(rid: str) -> ConstructionRule:
    try:
        return _BY_ID[rid]
    except KeyError:
        raise EError(f"unknown construction rule '{rid}'") from None


def resolve(keyword: str, args) -> tuple[ConstructionRule, tuple]:
    """Pick the rule for `keyword` from the argument sorts.

    Returns the rule and the arguments reordered to match its inputs.
    """
    cands = [r for r in _CATALOG if r.keyword == keyword]
    if not cands:
        raise ConstructionError(f"unknown construction '{keyword}'")
    sorts = tuple(x.sort for x in args)
    for r in cands:
        want = tuple(v.sort for v in r.inputs)
        if want == sorts:
            return r, tuple(args)
        if keyword in _SYMMETRIC and len(args) == 2 and want == sorts[::-1]:
            return r, tuple(args)[::-1]
    shapes = " or ".join("(" + ", ".join(v.sort.value for v in r.inputs) + ")" for r in cands)
    given = ", ".join(f"{x.sort.value} {x}" for x in args)
    raise ConstructionError(f"construction '{keyword}' expects {shapes}; got ({given})")


def output_sorts(keyword: str, args) -> tuple[Sort, ...]:
    r, _ = resolve(keyword, args)
    return tuple(v.sort for v in r.outputs)


def instantiate(rule: ConstructionRule, args, outputs, distinct_from=()):
    """Instantiated (prerequisites, conclusions) for one application of `rule`."""
    if len(args) != len(rule.inputs):
        raise ConstructionError(f"construction '{rule.keyword}' takes {len(rule.inputs)} "
                                f"arguments, got {len(args)}")
    if len(outputs) != len(rule.outputs):
        raise ConstructionError(f"construction '{rule.keyword}' introduces {len(rule.outputs)} "
                                f"object(s), got {len(outputs)} name(s)")
    inst = {}
    for v, x in zip(rule.inputs, args):
        if x.sort != v.sort:
            raise ConstructionError(f"construction '{rule.keyword}' expects a {v.sort.value} "
                                    f"where '{x}' was given")
        inst[v] = x
    for v, x in zip(rule.outputs, outputs):
        if x.sort != v.sort:
            raise ConstructionError(f"construction '{rule.keyword}' introduces a {v.sort.value}, "
                                    f"but '{x}' is a {x.sort.value}")
        inst[v] = x
    pre = [substitute(p, inst) for p in rule.prerequisites]
    concl = [substitute(p, inst) for p in rule.conclusions]
    if distinct_from:
        if not rule.distinct_support:
            raise ConstructionError(f"construction '{rule.keyword}' does not take 'distinct_from'")
        new = inst[rule.outputs[0]]
        host = inst.get(rule.host) if rule.host is not None else None
        for o in distinct_from:
            if o.sort == POINT:
                concl.append(eq(new, o, positive=False))
            else:
                concl.append(on(new, o, positive=False))
                if host is not None and o.sort == host.sort:
                    pre.append(eq(host, o, positive=False))
    return pre, concl


def apply_construction(keyword: str, args, outputs, diagram, metric_ctx=None, distinct_from=(),
                       prove=None) -> tuple[ConstructionRule, list[Literal]]:
    """Check the prerequisites of a construction and return its conclusions.

    `prove(literal)` decides whether a prerequisite is established; by default
    the diagram closure is used, plus the metric solver for point (dis)equalities.
    The new objects must not already be in the diagram.
    """
    rule, args = resolve(keyword, args)
    for o in outputs:
        if o.name in diagram.objects:
            raise ConstructionError(f"'{o.name}' is already in use; constructions need fresh names")
    for x in list(args) + list(distinct_from):
        if diagram.objects.get(x.name) != x:
            raise ConstructionError(f"unknown object '{x.name}'")
    pre, concl = instantiate(rule, args, outputs, distinct_from)
    if prove is None:
        def prove(l):
            if diagram.holds(l):
                return True
            return (metric_ctx is not None and l.atom.pred == "eq_point"
                    and metric_ctx.entails(l))
    for p in pre:
        if not prove(p):
            raise ConstructionError(f"construction '{keyword}' requires {p}: "
                                    f"not a direct consequence")
    return rule, concl


def mentioned(rule: ConstructionRule) -> set[ObjectVar]:
    out = set()
    for l in rule.prerequisites + rule.conclusions:
        out |= free_vars(l)
    return out
