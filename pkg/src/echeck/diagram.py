"""Direct diagrammatic consequence: clause catalog and forward-chaining saturation.

Each clause {l1, ..., ln} is compiled into n Horn variants: the negations of
any n-1 literals license the remaining one. Facts are kept as tuples
(code, arg names...) where code encodes predicate and sign; joins run over
per-position indexes, and only facts new since the last fixpoint trigger
rule applications.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from operator import itemgetter

from .core import (CIRCLE, EQ_PRED, LINE, POINT, PREDICATES, DiagramAtom, EError, Literal,
                   ObjectVar, Sort, render_diagram_atom)


@dataclass(frozen=True)
class RuleClause:
    id: str
    literals: tuple[Literal, ...]

    def __str__(self):
        return f"{self.id}: {{{', '.join(str(l) for l in self.literals)}}}"


_ABBR = {"on": "on_line", "onc": "on_circle", "in": "inside", "cen": "center", "bt": "between",
         "ss": "same_side", "ill": "intersects_ll", "ilc": "intersects_lc",
         "icc": "intersects_cc", "eqp": "eq_point", "eql": "eq_line", "eqc": "eq_circle"}
_LIT_RE = re.compile(r"(~?)(\w+)\(([^)]*)\)")


def _clause(rid: str, text: str) -> RuleClause:
    lits = []
    sorts: dict[str, Sort] = {}
    for sign, name, args in _LIT_RE.findall(text):
        pred = _ABBR.get(name, name)
        names = [a.strip() for a in args.split(",")]
        vs = []
        for n, s in zip(names, PREDICATES[pred]):
            if sorts.setdefault(n, s) != s:
                raise AssertionError(f"{rid}: variable {n} used at two sorts")
            vs.append(ObjectVar(n, s))
        lits.append(Literal(sign != "~", DiagramAtom(pred, tuple(vs))))
    return RuleClause(rid, tuple(lits))


_GEOMETRY = [
    ("generality.1", "eqp(a,b) ~on(a,L) ~on(b,L) ~on(a,M) ~on(b,M) eql(L,M)"),
    ("generality.2", "~cen(a,A) ~cen(b,A) eqp(a,b)"),
    ("generality.3", "~cen(a,A) in(a,A)"),
    ("generality.4", "~in(a,A) ~onc(a,A)"),
    ("between.1a", "~bt(a,b,c) bt(c,b,a)"),
    ("between.1b", "~bt(a,b,c) ~eqp(a,b)"),
    ("between.1c", "~bt(a,b,c) ~eqp(a,c)"),
    ("between.1d", "~bt(a,b,c) ~bt(b,a,c)"),
    ("between.2", "~bt(a,b,c) ~on(a,L) ~on(b,L) on(c,L)"),
    ("between.3", "~bt(a,b,c) ~on(a,L) ~on(c,L) on(b,L)"),
    ("between.4", "~bt(a,b,c) ~bt(a,d,b) bt(a,d,c)"),
    ("between.5", "~bt(a,b,c) ~bt(b,c,d) bt(a,b,d)"),
    ("between.6", "~on(a,L) ~on(b,L) ~on(c,L) eqp(a,b) eqp(b,c) eqp(a,c) "
                  "bt(a,b,c) bt(b,a,c) bt(a,c,b)"),
    ("between.7", "~bt(a,b,c) ~bt(a,b,d) ~bt(c,b,d)"),
    ("same_side.1", "on(a,L) ss(a,a,L)"),
    ("same_side.2", "~ss(a,b,L) ss(b,a,L)"),
    ("same_side.3", "~ss(a,b,L) ~on(a,L)"),
    ("same_side.4", "~ss(a,b,L) ~ss(a,c,L) ss(b,c,L)"),
    ("same_side.5", "on(a,L) on(b,L) on(c,L) ss(a,b,L) ss(a,c,L) ss(b,c,L)"),
    ("pasch.1", "~bt(a,b,c) ~ss(a,c,L) ss(a,b,L)"),
    ("pasch.2", "~bt(a,b,c) ~on(a,L) on(b,L) ss(b,c,L)"),
    ("pasch.3", "~bt(a,b,c) ~on(b,L) ~ss(a,c,L)"),
    ("pasch.4", "~on(b,L) ~on(b,M) eql(L,M) ~on(a,M) ~on(c,M) eqp(a,c) eqp(a,b) eqp(c,b) "
                "ss(a,c,L) bt(a,b,c)"),
]
_TRIPLE_BASE = "~on(a,L) ~on(a,M) ~on(a,N) ~on(b,L) ~on(c,M) ~on(d,N) ~ss(c,d,L) "
_GEOMETRY += [
    ("triple.1", _TRIPLE_BASE + "~ss(b,c,N) ~ss(b,d,M)"),
    ("triple.2", _TRIPLE_BASE + "ss(b,d,M) on(d,M) eqp(b,a) ss(b,c,N)"),
    ("triple.3", _TRIPLE_BASE + "~ss(b,c,N) ~ss(d,e,M) ~ss(c,e,N) ss(c,e,L)"),
    ("circle.1", "~on(a,L) ~on(b,L) ~on(c,L) ~in(a,A) ~onc(b,A) ~onc(c,A) eqp(b,c) bt(b,a,c)"),
]
_ON_OR_IN = [("in", "in"), ("in", "onc"), ("onc", "in"), ("onc", "onc")]
for _k, (_x, _y) in zip("abcd", _ON_OR_IN):
    _GEOMETRY.append((f"circle.2{_k}", f"~{_x}(a,A) ~{_y}(b,A) ~bt(a,c,b) in(c,A)"))
for _k, (_x, _z) in zip("abcd", _ON_OR_IN):
    _GEOMETRY.append((f"circle.3{_k}", f"~{_x}(a,A) in(c,A) ~bt(a,c,b) ~{_z}(b,A)"))
_GEOMETRY += [
    ("circle.4", "eqc(A,B) ~onc(c,A) ~onc(c,B) ~onc(d,A) ~onc(d,B) eqp(c,d) ~cen(a,A) "
                 "~cen(b,B) ~on(a,L) ~on(b,L) ~ss(c,d,L)"),
    ("intersection.1", "on(a,L) on(b,L) ss(a,b,L) ~on(a,M) ~on(b,M) ill(L,M)"),
]
for _k, (_x, _y) in zip("abcd", _ON_OR_IN):
    _GEOMETRY.append((f"intersection.2{_k}",
                      f"~{_x}(a,A) ~{_y}(b,A) on(a,L) on(b,L) ss(a,b,L) ilc(L,A)"))
_GEOMETRY.append(("intersection.3", "~in(a,A) ~on(a,L) ilc(L,A)"))
# a merely inside alpha is not enough: beta may lie wholly inside alpha
for _k, _y in zip("ab", ["in", "onc"]):
    _GEOMETRY.append((f"intersection.4{_k}",
                      f"~onc(a,A) ~{_y}(b,A) ~in(a,B) in(b,B) onc(b,B) icc(A,B)"))
_GEOMETRY += [
    ("intersection.5", "~onc(a,A) ~in(b,A) ~in(a,B) ~onc(b,B) icc(A,B)"),
    ("intersection.sym_ll", "~ill(L,M) ill(M,L)"),
    ("intersection.sym_cc", "~icc(A,B) icc(B,A)"),
    ("equality.1p", "eqp(x,x)"),
    ("equality.1l", "eql(x,x)"),
    ("equality.1c", "eqc(x,x)"),
]


def _substitution_clauses():
    out = []
    names = {POINT: "xyzuvw", LINE: "XYZUVW", CIRCLE: "ABCDEF"}
    for pred, sig in PREDICATES.items():
        for pos, s in enumerate(sig):
            eqp = EQ_PRED[s]
            fresh = {k: list(v[2:]) for k, v in names.items()}
            x, y = names[s][0], names[s][1]
            before = []
            for i, si in enumerate(sig):
                before.append(x if i == pos else fresh[si].pop(0))
            after = [y if i == pos else v for i, v in enumerate(before)]
            out.append((f"equality.2.{pred}.{pos + 1}",
                        f"~{eqp}({x},{y}) ~{pred}({','.join(before)}) {pred}({','.join(after)})"))
    return out


@lru_cache(maxsize=None)
def _catalog() -> tuple[RuleClause, ...]:
    return tuple(_clause(rid, text) for rid, text in _GEOMETRY + _substitution_clauses())


def rule_catalog() -> list[RuleClause]:
    """All diagram axioms as clauses (deterministic order)."""
    return list(_catalog())


# -- compilation ----------------------------------------------------------------

@dataclass
class _Variant:
    rule_id: str
    nvars: int
    var_names: tuple
    premises: tuple  # (code, var index tuple)
    concl: tuple     # (code, var index tuple)
    rest: dict       # trigger premise index -> the other premises
    open_vars: tuple = ()  # (var index, sort) of conclusion variables no premise binds
    plans: dict = field(default_factory=dict)  # (premises left, vars bound) -> plan
    cmask: int = -1  # variables of the conclusion, or -1 when some are open
    cpre: tuple = ()
    cget: object = None  # binding -> conclusion arguments


class RuleSet:
    """Clauses compiled to Horn variants over a fixed predicate signature.

    `signature` maps a predicate name to its argument sorts (any hashable
    sort labels). Raw clauses are (rule id, [(positive, pred, var names)]).
    """

    def __init__(self, signature: dict, raw_clauses):
        self.signature = dict(signature)
        self.pred_index = {p: i for i, p in enumerate(self.signature)}
        self.preds = list(self.signature)
        self.raw = list(raw_clauses)
        self.variants: list[_Variant] = []
        self.unit_variants: list[_Variant] = []
        self.open_variants: list[_Variant] = []
        self.by_trigger: dict[int, list] = {}
        for rid, lits in self.raw:
            self._compile(rid, lits)

    def code(self, pred: str, positive: bool) -> int:
        return 2 * self.pred_index[pred] + (0 if positive else 1)

    def _compile(self, rid, lits):
        var_ids: dict[str, int] = {}
        enc = []
        for positive, pred, args in lits:
            idx = tuple(var_ids.setdefault(a, len(var_ids)) for a in args)
            enc.append((self.code(pred, positive), idx))
        names = tuple(sorted(var_ids, key=var_ids.get))
        for i, (ccode, cvars) in enumerate(enc):
            prem = tuple((c ^ 1, v) for j, (c, v) in enumerate(enc) if j != i)
            pvars = {v for _, vs in prem for v in vs}
            csig = self.signature[lits[i][1]]
            open_vars = tuple(sorted({(v, csig[pos]) for pos, v in enumerate(cvars)
                                      if v not in pvars}))
            var = _Variant(rid, len(var_ids), names, prem, (ccode, cvars), {}, open_vars)
            if not open_vars:
                var.cmask = sum(1 << v for v in set(cvars))
            var.cpre, var.cget = (ccode,), _getter(cvars)
            if not prem:
                self.unit_variants.append(var)
                continue
            for t in range(len(prem)):
                tv = prem[t][1]
                # positive facts are usually much rarer than negative ones, so premises
                # needing them fail fastest; among equals prefer those the trigger binds
                var.rest[t] = tuple(sorted(prem[:t] + prem[t + 1:],
                                           key=lambda p: (p[0] & 1,
                                                          -sum(v in tv for v in p[1]) / max(1, len(p[1])))))
                dup = len(set(tv)) < len(tv)
                todo = ((1 << len(prem)) - 1) & ~(1 << t)
                bound = sum(1 << v for v in set(tv))
                self.by_trigger.setdefault(prem[t][0], []).append(
                    (var, t, tv, dup, self._gates(var, var.rest[t], tv), todo, bound))
            if open_vars:
                var.rest[None] = prem
                self.open_variants.append(var)
            self.variants.append(var)


    @staticmethod
    def plan(var: _Variant, todo: int, bound: int):
        """How to match the premises in `todo` when the variables in `bound` are set.

        Returns (tests, choices, done, ready): the fully bound premises as
        ((code,), value getter), the others as (premise bit, code, index key
        prefix or None, getter for the bound values, free (position,
        variable) pairs, variables they bind), the bit mask of the tests, and
        whether the conclusion is fully bound.
        """
        tests, choices, done = [], [], 0
        order = sorted((i for i in range(len(var.premises)) if todo >> i & 1),
                       key=lambda i: (var.premises[i][0] & 1,
                                      -sum(bound >> v & 1 for v in var.premises[i][1])
                                      / max(1, len(var.premises[i][1])), i))
        for i in order:
            code, vs = var.premises[i]
            bpos = tuple(p for p, v in enumerate(vs) if bound >> v & 1)
            if len(bpos) == len(vs):
                tests.append(((code,), _getter(vs)))
                done |= 1 << i
                continue
            free = tuple((p, v) for p, v in enumerate(vs) if not bound >> v & 1)
            choices.append((1 << i, code, (code, bpos) if bpos else None,
                            _getter(tuple(vs[p] for p in bpos)), free,
                            sum(1 << v for _, v in free)))
        ready = var.cmask >= 0 and not var.cmask & ~bound
        return tuple(tests), tuple(choices), done, ready

    @staticmethod
    def _gates(var, rest, tv):
        """Lookups computed straight from a trigger fact that must all succeed.

        Each is (code, bound positions, trigger positions, fully bound) for a
        remaining premise sharing variables with the trigger. When the trigger
        binds the whole conclusion a final entry with code None asks that the
        conclusion be new.
        """
        out = []
        for code, vs in rest:
            bpos, tpos = [], []
            for pos, v in enumerate(vs):
                if v in tv:
                    bpos.append(pos)
                    tpos.append(tv.index(v) + 1)
            if bpos:
                out.append((code, tuple(bpos), tuple(tpos), len(bpos) == len(vs)))
        ccode, cvars = var.concl
        if not var.open_vars and all(v in tv for v in cvars):
            out.append((None, ccode, tuple(tv.index(v) + 1 for v in cvars), True))
        return tuple(out)


def _getter(vs):
    """binding -> tuple of the values of variables vs."""
    if len(vs) == 1:
        v = vs[0]
        return lambda b: (b[v],)
    if not vs:
        return lambda b: ()
    return itemgetter(*vs)


def _geometry_raw():
    raw = []
    for rc in _catalog():
        raw.append((rc.id, [(l.positive, l.atom.pred, tuple(a.name for a in l.atom.args))
                            for l in rc.literals]))
    return raw


@lru_cache(maxsize=None)
def geometry_rules() -> RuleSet:
    return RuleSet({p: s for p, s in PREDICATES.items()}, _geometry_raw())


# -- saturation -------------------------------------------------------------------

class Saturator:
    """Fact store plus incremental fixpoint computation for one RuleSet."""

    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.facts: set = set()
        self.index: dict = {}
        self.by_code: dict = {}
        self.domain: dict = {}  # sort label -> list of object names
        self.origin: dict = {}  # fact -> (rule id, binding, premises) or None for given
        self.queue: deque = deque()
        self.clash = None
        # unit clauses without variables hold outright
        for var in rules.unit_variants:
            if not var.open_vars:
                self._emit(var, [None] * var.nvars, ())

    def copy(self) -> "Saturator":
        s = Saturator.__new__(Saturator)
        s.rules = self.rules
        s.facts = set(self.facts)
        s.index = {k: set(v) for k, v in self.index.items()}
        s.by_code = {k: set(v) for k, v in self.by_code.items()}
        s.domain = {k: list(v) for k, v in self.domain.items()}
        s.origin = dict(self.origin)
        s.queue = deque(self.queue)
        s.clash = self.clash
        return s

    @property
    def inconsistent(self) -> bool:
        return self.clash is not None

    def add_object(self, name: str, sort):
        dom = self.domain.setdefault(sort, [])
        if name in dom:
            return
        dom.append(name)
        for var in self.rules.unit_variants:
            if any(s == sort for _, s in var.open_vars):
                self._emit(var, [None] * var.nvars, (), only=(name, sort))
        for var in self.rules.open_variants:
            if any(s == sort for _, s in var.open_vars):
                matches = []
                self._join(var, (1 << len(var.premises)) - 1, 0, [None] * var.nvars, [], matches)
                for b, used in matches:
                    self._emit(var, b, used, only=(name, sort))

    def _emit(self, var, b, used, only=None):
        """Insert the conclusion of `var` under binding b, ranging open variables over the domain."""
        ccode, cvars = var.concl
        choices = []
        for v, s in var.open_vars:
            choices.append((v, list(self.domain.get(s, ()))))
        for combo in _product([c for _, c in choices]):
            if only is not None and not any(val == only[0] and s == only[1]
                                            for val, (_, s) in zip(combo, var.open_vars)):
                continue
            for (v, _), val in zip(choices, combo):
                b[v] = val
            concl = (ccode,) + tuple(b[v] for v in cvars)
            if concl not in self.facts:
                names = {var.var_names[i]: b[i] for i in range(var.nvars)}
                self.insert(concl, (var.rule_id, names, tuple(used)))

    def insert(self, fact: tuple, why=None) -> bool:
        if fact in self.facts:
            return False
        self.facts.add(fact)
        self.origin[fact] = why
        code = fact[0]
        self.by_code.setdefault(code, set()).add(fact)
        idx = self.index
        for ps in _SUBSETS[len(fact) - 1]:
            key = (code, ps) + tuple(fact[p + 1] for p in ps)
            s = idx.get(key)
            if s is None:
                idx[key] = {fact}
            else:
                s.add(fact)
        if self.clash is None:
            comp = (code ^ 1,) + fact[1:]
            if comp in self.facts:
                self.clash = (comp, fact) if code & 1 else (fact, comp)
        self.queue.append(fact)
        return True

    def run(self):
        rules = self.rules
        by_trigger = rules.by_trigger
        facts, index = self.facts, self.index
        while self.queue and self.clash is None:
            fact = self.queue.popleft()
            for var, t, tvars, dup, gates, todo, bound in by_trigger.get(fact[0], ()):
                ok = True
                for gcode, gpos, tpos, full in gates:
                    vals = tuple([fact[i] for i in tpos])
                    if gcode is None:
                        ok = (gpos,) + vals not in facts
                    elif full:
                        ok = (gcode,) + vals in facts
                    else:
                        ok = (gcode, gpos) + vals in index
                    if not ok:
                        break
                if not ok:
                    continue
                binding = [None] * var.nvars
                if dup:
                    ok = True
                    for pos, v in enumerate(tvars):
                        val = fact[pos + 1]
                        if binding[v] is None:
                            binding[v] = val
                        elif binding[v] != val:
                            ok = False
                            break
                    if not ok:
                        continue
                else:
                    for pos, v in enumerate(tvars):
                        binding[v] = fact[pos + 1]
                matches = []
                self._join(var, todo, bound, binding, [fact], matches)
                ccode, cvars = var.concl
                for b, used in matches:
                    if var.open_vars:
                        self._emit(var, b, used)
                    else:
                        concl = (ccode,) + tuple(b[v] for v in cvars)
                        if concl not in self.facts:
                            names = {var.var_names[i]: b[i] for i in range(var.nvars)}
                            self.insert(concl, (var.rule_id, names, tuple(used)))
                    if self.clash is not None:
                        return

    def _join(self, var, todo, bound, binding, used, out):
        """Extend binding to match the premises of `var` in `todo`; append
        (binding, facts used) to out.

        Fully bound premises are membership tests. Of the others, the one
        with the fewest candidate facts is expanded next. Any premise
        without candidates ends the branch, and so does a bound conclusion
        that is already known.
        """
        plan = var.plans.get((todo, bound))
        if plan is None:
            plan = var.plans[(todo, bound)] = RuleSet.plan(var, todo, bound)
        tests, choices, done, ready = plan
        facts = self.facts
        if ready and var.cpre + var.cget(binding) in facts:
            return
        n_used = len(used)
        for pre, get in tests:
            f = pre + get(binding)
            if f not in facts:
                del used[n_used:]
                return
            used.append(f)
        if not choices:
            out.append((list(binding), list(used)))
        else:
            self._expand(var, todo & ~done, bound, choices, binding, used, out)
        del used[n_used:]

    def _expand(self, var, todo, bound, choices, binding, used, out):
        """Branch on the cheapest premise in `choices`. The next level's tests
        and conclusion check run inline so that leaves cost no call."""
        index, by_code, facts = self.index, self.by_code, self.facts
        best = best_c = None
        for ch in choices:
            if ch[2] is not None:
                cands = index.get(ch[2] + ch[3](binding))
            else:
                cands = by_code.get(ch[1])
            if not cands:
                return
            if best_c is None or len(cands) < len(best_c):
                best, best_c = ch, cands
        bit, _, _, _, free, vmask = best
        todo &= ~bit
        bound |= vmask
        plan = var.plans.get((todo, bound))
        if plan is None:
            plan = var.plans[(todo, bound)] = RuleSet.plan(var, todo, bound)
        tests, nchoices, done, ready = plan
        todo &= ~done
        cpre, cget = var.cpre, var.cget
        n_used = len(used)
        for f in best_c:
            ok = True
            for pos, v in free:
                x = binding[v]
                if x is None:
                    binding[v] = f[pos + 1]
                elif x != f[pos + 1]:
                    ok = False
                    break
            if ok and ready:
                ok = cpre + cget(binding) not in facts
            if ok:
                used.append(f)
                for pre, get in tests:
                    g = pre + get(binding)
                    if g not in facts:
                        ok = False
                        break
                    used.append(g)
                if ok:
                    if nchoices:
                        self._expand(var, todo, bound, nchoices, binding, used, out)
                    else:
                        out.append((list(binding), list(used)))
                del used[n_used:]
            for _, v in free:
                binding[v] = None


# nonempty proper subsets of argument positions, by arity
_SUBSETS = {n: [tuple(i for i in range(n) if m >> i & 1) for m in range(1, (1 << n) - 1)]
            for n in range(4)}


def _product(lists):
    if not lists:
        yield ()
        return
    for x in lists[0]:
        for rest in _product(lists[1:]):
            yield (x,) + rest


# -- literal-level state -------------------------------------------------------------

def _lit_fact(rules: RuleSet, l: Literal) -> tuple:
    a = l.atom
    return (rules.code(a.pred, l.positive),) + tuple(x.name for x in a.args)


class DiagramState:
    """A set of diagram literals over registered objects, kept saturated."""

    def __init__(self, objects=(), facts=(), rules: RuleSet | None = None):
        self.rules = rules or geometry_rules()
        self.sat = Saturator(self.rules)
        self.objects: dict[str, ObjectVar] = {}
        for o in objects:
            self.add_object(o)
        self.add(facts)

    def copy(self) -> "DiagramState":
        d = DiagramState.__new__(DiagramState)
        d.rules = self.rules
        d.sat = self.sat.copy()
        d.objects = dict(self.objects)
        return d

    def add_object(self, o: ObjectVar):
        prev = self.objects.get(o.name)
        if prev is not None and prev.sort != o.sort:
            raise EError(f"object '{o.name}' already registered as a {prev.sort.value}")
        self.objects[o.name] = o
        self.sat.add_object(o.name, o.sort)

    def _check_known(self, l: Literal):
        if not l.is_diagram:
            raise EError(f"not a diagrammatic literal: {l}")
        for x in l.atom.args:
            if self.objects.get(x.name) != x:
                raise EError(f"unknown object '{x.name}'")

    def add(self, lits, saturate: bool = True):
        for l in lits:
            self._check_known(l)
            self.sat.insert(_lit_fact(self.rules, l), None)
        if saturate:
            self.sat.run()
        return self

    def saturate(self) -> "DiagramState":
        self.sat.run()
        return self

    @property
    def inconsistent(self) -> bool:
        return self.sat.inconsistent

    def holds(self, l: Literal) -> bool:
        self._check_known(l)
        self.sat.run()
        return self.sat.inconsistent or _lit_fact(self.rules, l) in self.sat.facts

    def literal_of(self, fact: tuple) -> Literal:
        pred = self.rules.preds[fact[0] >> 1]
        sig = self.rules.signature[pred]
        args = tuple(ObjectVar(n, s) for n, s in zip(fact[1:], sig))
        return Literal(not fact[0] & 1, DiagramAtom(pred, args))

    @property
    def facts(self) -> set[Literal]:
        self.sat.run()
        return {self.literal_of(f) for f in self.sat.facts}

    def fact_count(self) -> int:
        return len(self.sat.facts)

    def sorted_lines(self) -> list[str]:
        """Closure rendered one literal per line in a stable order."""
        self.sat.run()
        rows = []
        for f in self.sat.facts:
            pred = self.rules.preds[f[0] >> 1]
            rows.append((pred, f[0] & 1, f[1:], _render_fact(pred, f[0] & 1, f[1:])))
        rows.sort()
        return [r[3] for r in rows]

    def match(self, patterns, binding=None):
        """Yield variable bindings under which every schematic literal holds.

        `patterns` is a sequence of Literals over schematic ObjectVars; the
        binding maps schematic names to object names.
        """
        self.sat.run()
        pats = []
        for l in patterns:
            pats.append((_lit_fact_schematic(self.rules, l)))
        yield from self._match(pats, dict(binding or {}))

    def _match(self, pats, binding):
        if not pats:
            yield dict(binding)
            return
        # pick the pattern with the most bound arguments
        best_i, best_score = 0, -1
        for i, (code, names) in enumerate(pats):
            score = sum(n in binding for n in names) / max(1, len(names))
            if score > best_score:
                best_i, best_score = i, score
        code, names = pats[best_i]
        rest = pats[:best_i] + pats[best_i + 1:]
        bound = [(pos, binding[n]) for pos, n in enumerate(names) if n in binding]
        if len(bound) == len(names):
            if (code,) + tuple(binding[n] for n in names) in self.sat.facts:
                yield from self._match(rest, binding)
            return
        if bound:
            key = (code, tuple(p for p, _ in bound)) + tuple(v for _, v in bound)
            cands = self.sat.index.get(key, set())
        else:
            cands = self.sat.by_code.get(code, set())
        for f in sorted(cands):
            new = dict(binding)
            ok = True
            for pos, n in enumerate(names):
                v = f[pos + 1]
                if new.setdefault(n, v) != v:
                    ok = False
                    break
            if ok:
                yield from self._match(rest, new)


def _lit_fact_schematic(rules, l: Literal):
    a = l.atom
    return (rules.code(a.pred, l.positive), tuple(x.name for x in a.args))


def _render_fact(pred, negated, names) -> str:
    s = render_diagram_atom(pred, list(names))
    if not negated:
        return s
    if pred.startswith("eq_"):
        return f"{names[0]} != {names[1]}"
    return "not " + s


# -- module-level operations -----------------------------------------------------------

def saturate(state: DiagramState) -> DiagramState:
    """Return a saturated copy of `state`."""
    out = state.copy()
    out.saturate()
    return out


def is_direct_consequence(state: DiagramState, goal: Literal) -> bool:
    return state.holds(goal)


@dataclass(frozen=True)
class TraceStep:
    rule_id: str
    binding: dict
    literal: Literal
    premises: tuple = ()

    def __str__(self):
        b = ", ".join(f"{k}->{v}" for k, v in sorted(self.binding.items()))
        return f"({self.rule_id}, {{{b}}}, {self.literal})"

    def __hash__(self):
        return hash((self.rule_id, self.literal))


def explain(state: DiagramState, goal: Literal) -> list[TraceStep]:
    """Derivation of `goal` as rule applications in dependency order."""
    if not state.holds(goal):
        raise EError(f"{goal} is not a direct consequence")
    sat = state.sat
    target = _lit_fact(state.rules, goal)
    if target not in sat.facts:
        # only derivable through inconsistency: explain the clash
        steps = []
        for f in sat.clash:
            steps.extend(_trace(state, f, set()))
        steps.append(TraceStep("inconsistent", {}, goal, tuple(state.literal_of(f) for f in sat.clash)))
        return steps
    return _trace(state, target, set())


def _trace(state, fact, seen) -> list[TraceStep]:
    out = []
    stack = [(fact, False)]
    while stack:
        f, expanded = stack.pop()
        if f in seen:
            continue
        why = state.sat.origin.get(f)
        if why is None:
            seen.add(f)
            continue
        rid, binding, prem = why
        if expanded:
            seen.add(f)
            out.append(TraceStep(rid, dict(binding), state.literal_of(f),
                                 tuple(state.literal_of(p) for p in prem)))
            continue
        stack.append((f, True))
        for p in reversed(prem):
            if p not in seen:
                stack.append((p, False))
    return out


# -- generic helpers for non-geometric clause sets ------------------------------------------

def propositional_rules(clauses) -> RuleSet:
    """Compile clauses over nullary atoms: each clause is a list of strings like 'A' / '~B'."""
    names = sorted({s.lstrip("~") for c in clauses for s in c})
    raw = [(f"r{i + 1}", [(not s.startswith("~"), s.lstrip("~"), ()) for s in c])
           for i, c in enumerate(clauses)]
    return RuleSet({n: () for n in names}, raw)


def saturate_propositional(clauses, facts) -> tuple[set[str], bool]:
    """Closure of a set of signed nullary atoms; returns (literals, inconsistent)."""
    rules = propositional_rules(list(clauses))
    sat = Saturator(rules)
    for s in facts:
        name = s.lstrip("~")
        if name not in rules.pred_index:
            rules.signature[name] = ()
            rules.pred_index[name] = len(rules.preds)
            rules.preds.append(name)
        sat.insert((rules.code(name, not s.startswith("~")),))
    sat.run()
    out = {("~" if f[0] & 1 else "") + rules.preds[f[0] >> 1] for f in sat.facts}
    return out, sat.inconsistent
