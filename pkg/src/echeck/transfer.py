"""Transfer inferences between diagram facts and metric facts."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (POINT, RIGHT_ANGLE, EError, Literal, MagSort, ObjectVar, angle, area,
                   free_vars, metric, normalize_literal, seg, substitute, zero)
from .diagram import DiagramState, _clause
from .metric import MetricContext


class TransferError(EError):
    pass


@dataclass(frozen=True)
class TransferRule:
    id: str
    diagram_hyps: tuple[Literal, ...]
    metric_hyps: tuple[Literal, ...]
    conclusion: Literal
    auto: bool = False

    def variables(self) -> list[ObjectVar]:
        vs = set()
        for l in self.diagram_hyps + self.metric_hyps + (self.conclusion,):
            vs |= free_vars(l)
        return sorted(vs, key=ObjectVar.key)

    def __str__(self):
        hyps = ", ".join(str(h) for h in self.diagram_hyps + self.metric_hyps)
        return f"{self.id}: {hyps} => {self.conclusion}"


def _d(text: str) -> tuple[Literal, ...]:
    return _clause("", text).literals


_P = {n: ObjectVar(n, POINT) for n in ["a", "b", "c", "d", "e", "b2", "c2"]}
a, b, c, d, e, b2, c2 = (_P[n] for n in ["a", "b", "c", "d", "e", "b2", "c2"])
_ZERO_A = zero(MagSort.ANGLE)
_ZERO_AR = zero(MagSort.AREA)

_ANGLE1 = "~eqp(a,b) ~eqp(a,c) on(a,L) on(b,L)"
_ANGLE2 = "on(a,L) on(a,M) on(b,L) on(c,M) ~eqp(a,b) ~eqp(a,c) ~on(d,L) ~on(d,M) ~eql(L,M)"
_ANGLE3 = "on(a,L) on(b,L) bt(a,c,b) ~on(d,L)"
_ANGLE5 = "on(a,L) on(b,L) on(b,M) on(c,M) on(c,N) on(d,N) ~eqp(b,c) ss(a,d,N)"
_AREA2 = "on(a,L) on(b,L) on(c,L) ~eqp(a,b) ~eqp(a,c) ~eqp(b,c) ~on(d,L)"

_SEG_SUM = metric("eq", seg(a, b) + seg(b, c), seg(a, c))
_ANGLE_SUM = metric("eq", angle(b, a, c), angle(b, a, d) + angle(d, a, c))
_ANGLE5_M = metric("lt", angle(a, b, c) + angle(b, c, d), RIGHT_ANGLE + RIGHT_ANGLE)
_AREA_SUM = metric("eq", area(a, c, d) + area(d, c, b), area(a, d, b))


def _rules() -> list[TransferRule]:
    return [
        TransferRule("seg.1", _d("bt(a,b,c)"), (), _SEG_SUM, auto=True),
        TransferRule("seg.2", _d("cen(a,A) cen(a,B) onc(b,A) onc(c,B)"),
                     (metric("eq", seg(a, b), seg(a, c)),), _d("eqc(A,B)")[0]),
        TransferRule("seg.3->", _d("cen(a,A) onc(b,A)"), (metric("eq", seg(a, c), seg(a, b)),),
                     _d("onc(c,A)")[0]),
        TransferRule("seg.3<-", _d("cen(a,A) onc(b,A) onc(c,A)"), (),
                     metric("eq", seg(a, c), seg(a, b)), auto=True),
        TransferRule("seg.4->", _d("cen(a,A) onc(b,A)"), (metric("lt", seg(a, c), seg(a, b)),),
                     _d("in(c,A)")[0]),
        TransferRule("seg.4<-", _d("cen(a,A) onc(b,A) in(c,A)"), (),
                     metric("lt", seg(a, c), seg(a, b))),
        TransferRule("angle.1->", _d(_ANGLE1 + " on(c,L) ~bt(b,a,c)"), (),
                     metric("eq", angle(b, a, c), _ZERO_A)),
        TransferRule("angle.1<-a", _d(_ANGLE1), (metric("eq", angle(b, a, c), _ZERO_A),),
                     _d("on(c,L)")[0]),
        TransferRule("angle.1<-b", _d(_ANGLE1), (metric("eq", angle(b, a, c), _ZERO_A),),
                     _d("~bt(b,a,c)")[0]),
        TransferRule("angle.2->", _d(_ANGLE2 + " ss(b,d,M) ss(c,d,L)"), (), _ANGLE_SUM, auto=True),
        TransferRule("angle.2<-a", _d(_ANGLE2), (_ANGLE_SUM,), _d("ss(b,d,M)")[0]),
        TransferRule("angle.2<-b", _d(_ANGLE2), (_ANGLE_SUM,), _d("ss(c,d,L)")[0]),
        TransferRule("angle.3->", _d(_ANGLE3), (metric("eq", angle(a, c, d), angle(d, c, b)),),
                     metric("eq", angle(a, c, d), RIGHT_ANGLE)),
        TransferRule("angle.3<-", _d(_ANGLE3), (metric("eq", angle(a, c, d), RIGHT_ANGLE),),
                     metric("eq", angle(a, c, d), angle(d, c, b))),
        TransferRule("angle.4",
                     _d("on(a,L) on(b,L) on(b2,L) on(a,M) on(c,M) on(c2,M) ~eqp(b,a) ~eqp(b2,a) "
                        "~eqp(c,a) ~eqp(c2,a) ~bt(b,a,b2) ~bt(c,a,c2)"), (),
                     metric("eq", angle(b, a, c), angle(b2, a, c2)), auto=True),
        TransferRule("angle.5a", _d(_ANGLE5), (_ANGLE5_M,), _d("ill(L,N)")[0]),
        TransferRule("angle.5b", _d(_ANGLE5 + " on(e,L) on(e,N)"), (_ANGLE5_M,),
                     _d("ss(e,a,M)")[0]),
        TransferRule("area.1->", _d("on(a,L) on(b,L) ~eqp(a,b) on(c,L)"), (),
                     metric("eq", area(a, b, c), _ZERO_AR)),
        TransferRule("area.1<-", _d("on(a,L) on(b,L) ~eqp(a,b)"),
                     (metric("eq", area(a, b, c), _ZERO_AR),), _d("on(c,L)")[0]),
        TransferRule("area.2->", _d(_AREA2 + " bt(a,c,b)"), (), _AREA_SUM, auto=True),
        TransferRule("area.2<-", _d(_AREA2), (_AREA_SUM,), _d("bt(a,c,b)")[0]),
    ]


_CATALOG = _rules()


def transfer_catalog() -> list[TransferRule]:
    return list(_CATALOG)


def rule_by_id(rid: str) -> TransferRule:
    for r in _CATALOG:
        if r.id == rid:
            return r
    raise EError(f"unknown transfer rule '{rid}'")


def _instantiate(l: Literal, inst: dict) -> Literal:
    return substitute(l, inst)


def apply_transfer(rule: TransferRule, inst: dict, diagram: DiagramState,
                   metric_ctx: MetricContext) -> Literal:
    """Check every hypothesis of `rule` under `inst` and return the conclusion."""
    for v in rule.variables():
        o = inst.get(v)
        if o is None:
            raise TransferError(f"{rule.id}: no object given for '{v}'")
        if o.sort != v.sort:
            raise TransferError(f"{rule.id}: '{v}' needs a {v.sort.value}, got '{o}'")
    for h in rule.diagram_hyps:
        hi = _instantiate(h, inst)
        if not diagram.holds(hi):
            raise TransferError(f"{rule.id} requires {hi}: not a direct consequence")
    for h in rule.metric_hyps:
        hi = _instantiate(h, inst)
        if not metric_ctx.entails(hi):
            raise TransferError(f"{rule.id} requires {hi}: not a metric consequence")
    return _instantiate(rule.conclusion, inst)


def _bindings(rule: TransferRule, diagram: DiagramState, partial: dict):
    """Object assignments (schematic var -> ObjectVar) satisfying the diagram hypotheses."""
    start = {v.name: o.name for v, o in partial.items()}
    vars_ = {v.name: v for v in rule.variables()}
    for bnd in diagram.match(rule.diagram_hyps, start):
        inst = {}
        for n, v in vars_.items():
            if n in bnd:
                inst[v] = diagram.objects[bnd[n]]
        # variables only in metric hypotheses or conclusion stay unbound; none exist in the catalog
        if len(inst) == len(vars_):
            yield inst


def auto_transfer_pass(diagram: DiagramState, metric_ctx: MetricContext | None = None,
                       rules=None) -> list[Literal]:
    """Conclusions of the auto rules over the current diagram closure."""
    if diagram.inconsistent:
        return []
    out, seen = [], set()
    for rule in rules or _CATALOG:
        if not rule.auto:
            continue
        for inst in _bindings(rule, diagram, {}):
            concl = normalize_literal(_instantiate(rule.conclusion, inst))
            at = concl.atom
            if at.lhs == at.rhs or concl in seen:
                continue
            seen.add(concl)
            out.append(concl)
    return out


def find_transfer(goal: Literal, diagram: DiagramState, metric_ctx: MetricContext):
    """Search for one rule application whose conclusion is `goal`.

    Returns (rule, instantiation) or None. Conclusion variables are unified
    with the goal's objects; the rest are found by matching diagram hypotheses.
    """
    target = normalize_literal(goal)
    goal_objs = sorted(free_vars(goal), key=ObjectVar.key)
    for rule in _CATALOG:
        c = rule.conclusion
        if c.positive != goal.positive or type(c.atom) is not type(goal.atom):
            continue
        if c.is_diagram and c.atom.pred != goal.atom.pred:
            continue
        if c.is_metric and c.atom.rel != goal.atom.rel:
            continue
        cvars = sorted(free_vars(c), key=ObjectVar.key)
        choices = [[o for o in goal_objs if o.sort == v.sort] for v in cvars]
        for combo in product(*choices):
            partial = dict(zip(cvars, combo))
            if normalize_literal(_instantiate(c, partial)) != target:
                continue
            for inst in _bindings(rule, diagram, partial):
                if all(metric_ctx.entails(_instantiate(h, inst)) for h in rule.metric_hyps):
                    return rule, inst
    return None


def rule_instance_literals(rule: TransferRule, inst: dict):
    """Instantiated (hypotheses, conclusion) for a rule; used by model-based tests."""
    hyps = [_instantiate(h, inst) for h in rule.diagram_hyps + rule.metric_hyps]
    return hyps, _instantiate(rule.conclusion, inst)
