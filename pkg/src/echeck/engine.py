"""Sequent-level proof checking: runs a proof body against its theorem statement."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import constructions
from .core import (FALSITY, LINE, POINT, EError, Literal, ObjectVar, TheoremStatement, angle, eq,
                   free_vars, metric, negate, normalize_literal, on, seg, substitute)
from .diagram import DiagramState, explain
from .library import ASSUMED, FAILED, PROVED, Library, LibraryEntry
from .metric import MetricContext
from .parser import QED, Apply, Cases, Construct, Have, Suppose, Superpose, TheoremDecl
from .transfer import auto_transfer_pass, find_transfer


class CheckError(EError):
    """A rejected proof step."""

    def __init__(self, message, line=None, col=None, filename=None, step=""):
        super().__init__(message, line, col, filename)
        self.step = step


# -- proof state ------------------------------------------------------------------------

class ProofState:
    """Γ ∪ Δ for one theorem, split into a diagram closure and a metric context."""

    def __init__(self, theorem: TheoremStatement):
        self.theorem = theorem
        self.scope: dict[str, ObjectVar] = {}
        self.diagram = DiagramState()
        self.metric = MetricContext()
        self.delta: list[Literal] = []
        self.established: set[Literal] = set()
        self.stack: list[Literal] = []
        self.absurd = False
        self.log: list[str] = []
        self._derived_key = None

    def copy(self) -> "ProofState":
        s = ProofState.__new__(ProofState)
        s.theorem = self.theorem
        s.scope = dict(self.scope)
        s.diagram = self.diagram.copy()
        s.metric = self.metric.copy()
        s.delta = list(self.delta)
        s.established = set(self.established)
        s.stack = list(self.stack)
        s.absurd = self.absurd
        s.log = list(self.log)
        s._derived_key = self._derived_key
        return s

    # objects and facts
    def add_object(self, o: ObjectVar):
        prev = self.scope.get(o.name)
        if prev is not None:
            raise EError(f"'{o.name}' is already in use; pick a fresh name")
        self.scope[o.name] = o
        self.diagram.add_object(o)

    def check_scope(self, l: Literal):
        for v in free_vars(l):
            o = self.scope.get(v.name)
            if o is None:
                raise EError(f"unknown object '{v.name}'")
            if o.sort != v.sort:
                raise EError(f"'{v.name}' is a {o.sort.value}, not a {v.sort.value}")

    def assert_literal(self, l: Literal, record=True):
        """Add an established literal to both contexts (no checking)."""
        if l.is_falsity:
            self.absurd = True
            self.metric.add(FALSITY)
        elif l.is_diagram:
            self.diagram.add([l], saturate=False)
        else:
            self.metric.add(l)
        n = normalize_literal(l)
        if record and n not in self.established:
            self.established.add(n)
            self.delta.append(n)

    @property
    def inconsistent(self) -> bool:
        if self.absurd:
            return True
        self.sync()
        return self.diagram.inconsistent or not self.metric.consistent()

    def sync(self):
        """Bring the diagram closure, auto transfers and the metric context to a joint fixpoint."""
        d, m = self.diagram, self.metric
        for _ in range(20):
            d.saturate()
            if d.inconsistent or self.absurd:
                return
            rules = d.rules
            for positive, add in ((True, m.add_point_eq), (False, m.add_point_neq)):
                for f in d.sat.by_code.get(rules.code("eq_point", positive), ()):
                    add(self.scope[f[1]], self.scope[f[2]])
            for l in auto_transfer_pass(d):
                m.add(l)
            if not m.consistent():
                return
            new = [l for l in self._metric_point_facts() if not d.holds(l)]
            if not new:
                return
            d.add(new, saturate=False)

    def _metric_point_facts(self) -> list[Literal]:
        """Point (dis)equalities forced by the metric facts, for points sharing a segment."""
        m = self.metric
        key = (len(m.facts), len(m.point_eqs), len(m.point_neqs))
        if key == self._derived_key:
            return []
        self._derived_key = key
        pairs = set()
        for f in m.facts:
            for t in (f.atom.lhs, f.atom.rhs):
                for s in t.summands:
                    if s.kind == "seg" and s.points[0] != s.points[1]:
                        pairs.add(tuple(sorted(s.points, key=ObjectVar.key)))
        d = self.diagram
        cands = []
        for x, y in sorted(pairs, key=lambda p: (p[0].name, p[1].name)):
            if d.holds(eq(x, y)) or d.holds(eq(x, y, positive=False)):
                continue
            cands.append((x, y))
        return m.derive_point_equality(cands)

    # establishing literals
    def holds_direct(self, l: Literal) -> bool:
        """Diagram closure or metric entailment, without a transfer step."""
        self.check_scope(l)
        if self.inconsistent:
            return True
        if l.is_falsity:
            return False
        if l.is_diagram:
            if self.diagram.holds(l):
                return True
            return l.atom.pred == "eq_point" and self.metric.entails(l)
        return self.metric.entails(l)

    def establish(self, l: Literal):
        """How `l` follows: ('diagram'|'metric'|'inconsistent', None) or ('transfer', (rule, inst)).

        Returns None if it does not follow.
        """
        self.check_scope(l)
        if self.inconsistent:
            return ("inconsistent", None)
        if l.is_falsity:
            return None
        if l.is_diagram and self.diagram.holds(l):
            return ("diagram", None)
        if l.is_metric or l.atom.pred == "eq_point":
            if self.metric.entails(l):
                return ("metric", None)
        hit = find_transfer(l, self.diagram, self.metric)
        if hit is not None:
            return ("transfer", hit)
        return None


# -- steps ---------------------------------------------------------------------------------

def begin(theorem: TheoremStatement) -> ProofState:
    """Initial state: the universals in scope and Γ established."""
    ex = set(theorem.existentials)
    for h in theorem.hypotheses:
        if free_vars(h) & ex:
            raise EError(f"theorem '{theorem.name}': existential variable occurs in a hypothesis")
    st = ProofState(theorem)
    for o in theorem.universals:
        st.add_object(o)
    for h in theorem.hypotheses:
        st.check_scope(h)
        st.assert_literal(h)
    st.sync()
    return st


def _not_a_consequence(st: ProofState, l: Literal) -> str:
    if l.is_falsity:
        return "contradiction: the facts established so far are consistent"
    if l.is_diagram:
        tried = "not in the diagram closure"
        if l.atom.pred == "eq_point":
            tried += ", not a metric consequence"
        return f"{l}: {tried}, and no single transfer rule gives it"
    return f"{l}: not a metric consequence, and no single transfer rule gives it"


def step_have(st: ProofState, l: Literal) -> str:
    how = st.establish(l)
    if how is None:
        raise EError(_not_a_consequence(st, l))
    kind, info = how
    note = kind
    if kind == "transfer":
        rule, inst = info
        b = ", ".join(f"{k}->{v}" for k, v in sorted((k.name, v.name) for k, v in inst.items()))
        note = f"transfer {rule.id} {{{b}}}"
    st.assert_literal(l)
    st.sync()
    return note


def step_construct(st: ProofState, step: Construct) -> str:
    for o in step.outputs:
        if o.name in st.scope:
            raise EError(f"'{o.name}' is already in use; constructions need fresh names")
    for x in list(step.args) + list(step.distinct_from):
        if st.scope.get(x.name) != x:
            raise EError(f"unknown object '{x.name}'")
    rule, args = constructions.resolve(step.keyword, step.args)
    pre, concl = constructions.instantiate(rule, args, step.outputs, step.distinct_from)
    for p in pre:
        if not st.holds_direct(p):
            raise EError(f"construction '{step.keyword}' requires {p}: not a direct consequence")
    for o in step.outputs:
        st.add_object(o)
    for c in concl:
        st.assert_literal(c)
    st.sync()
    return f"construction {rule.id}"


def step_apply(st: ProofState, step: Apply, library: Library) -> str:
    try:
        entry = library.lookup(step.theorem)
    except EError:
        raise EError(f"unknown theorem '{step.theorem}'") from None
    if entry.status == FAILED:
        raise EError(f"theorem '{step.theorem}' did not check and cannot be applied")
    th = entry.statement
    if len(step.args) != len(th.universals):
        raise EError(f"theorem '{th.name}' takes {len(th.universals)} objects "
                     f"({', '.join(v.name for v in th.universals)}), got {len(step.args)}")
    if len(step.outputs) != len(th.existentials):
        raise EError(f"theorem '{th.name}' introduces {len(th.existentials)} object(s); "
                     f"name them with 'let', got {len(step.outputs)}")
    ren = {}
    for v, x in zip(th.universals, step.args):
        o = st.scope.get(x.name)
        if o is None:
            raise EError(f"unknown object '{x.name}'")
        if o.sort != v.sort:
            raise EError(f"theorem '{th.name}': '{v.name}' is a {v.sort.value}, "
                         f"but '{x.name}' is a {o.sort.value}")
        ren[v] = o
    for v, x in zip(th.existentials, step.outputs):
        if x.name in st.scope:
            raise EError(f"'{x.name}' is already in use; pick a fresh name")
        if x.sort != v.sort:
            raise EError(f"theorem '{th.name}' introduces a {v.sort.value} for '{v.name}', "
                         f"but '{x.name}' is a {x.sort.value}")
        ren[v] = x
    for h in th.hypotheses:
        hr = substitute(h, ren)
        if not st.holds_direct(hr):
            raise EError(f"hypothesis {hr} of '{th.name}' is not established")
    concl = [c if c.is_falsity else substitute(c, ren) for c in th.conclusions]
    if step.selected is not None:
        avail = {normalize_literal(c) for c in concl}
        for s in step.selected:
            if normalize_literal(s) not in avail:
                raise EError(f"{s} is not a conclusion of '{th.name}' under this renaming")
        concl = list(step.selected)
    for o in step.outputs:
        st.add_object(o)
    for c in concl:
        st.assert_literal(c)
    st.sync()
    return f"theorem {th.name}"


class _Runner:
    def __init__(self, library: Library, filename=None, trace=False):
        self.library = library
        self.filename = filename
        self.trace = trace

    def fail(self, err: EError, step, kind):
        line = getattr(step, "line", None)
        col = getattr(step, "col", None)
        return CheckError(err.message, line, col, self.filename, kind)

    def run(self, st: ProofState, steps, top=False):
        for i, step in enumerate(steps):
            if isinstance(step, QED):
                if not top or i != len(steps) - 1:
                    raise self.fail(EError(f"'{step.mode}' may only end the proof"), step, "qed")
                return self.qed(st, step)
            self.one(st, step)
        if top:
            raise CheckError("proof does not end with 'qed' or 'qef'", filename=self.filename,
                             step="qed")
        return None

    def one(self, st: ProofState, step):
        kind = type(step).__name__.lower()
        try:
            if isinstance(step, Have):
                note = step_have(st, step.literal)
                if self.trace and note == "diagram" and not st.inconsistent:
                    note += "".join(f"\n      {t}" for t in explain(st.diagram, step.literal))
                self.log(st, step, f"{step.keyword} {step.literal}  [{note}]")
            elif isinstance(step, Construct):
                note = step_construct(st, step)
                outs = ", ".join(o.name for o in step.outputs)
                self.log(st, step, f"let {outs} = {step.keyword}(...)  [{note}]")
            elif isinstance(step, Apply):
                note = step_apply(st, step, self.library)
                self.log(st, step, f"by {step.theorem}  [{note}]")
            elif isinstance(step, Suppose):
                self.suppose(st, step)
            elif isinstance(step, Cases):
                self.cases(st, step)
            elif isinstance(step, Superpose):
                self.superpose(st, step)
            else:
                raise EError(f"unexpected step {step!r}")
        except CheckError:
            raise
        except EError as e:
            raise self.fail(e, step, kind) from None

    def log(self, st, step, text):
        st.log.append(f"{getattr(step, 'line', 0)}: {text}")

    # suppositions
    def _branch(self, st: ProofState, assumption: Literal, body) -> ProofState:
        st.check_scope(assumption)
        inner = st.copy()
        inner.stack.append(assumption)
        inner.assert_literal(assumption)
        inner.sync()
        self.run(inner, body)
        return inner

    def suppose(self, st: ProofState, step: Suppose):
        if not step.body or not (isinstance(step.body[-1], Have) and step.body[-1].literal.is_falsity):
            raise self.fail(EError("a 'suppose' block must end in 'contradiction'"), step, "suppose")
        inner = self._branch(st, step.assumption, step.body)
        if not inner.inconsistent:
            raise self.fail(EError("the 'suppose' block did not reach a contradiction"), step,
                            "suppose")
        st.log.extend(inner.log[len(st.log):])
        conclusion = negate(step.assumption)
        st.assert_literal(conclusion)
        st.sync()
        self.log(st, step, f"suppose {step.assumption} ... therefore {conclusion}")

    def cases(self, st: ProofState, step: Cases):
        s1 = self._branch(st, step.assumption, step.then)
        s2 = self._branch(st, negate(step.assumption), step.otherwise)
        inc1, inc2 = s1.inconsistent, s2.inconsistent
        if inc1 and inc2:
            st.assert_literal(FALSITY)
            self.log(st, step, f"case {step.assumption}: both branches contradictory")
            return
        if inc1 or inc2:
            keep = s2 if inc1 else s1
            keep.stack.pop()
            for k, v in vars(keep).items():
                setattr(st, k, v)
            self.log(st, step, f"case {step.assumption}: only the "
                               f"{'second' if inc1 else 'first'} branch is consistent")
            return
        old = dict(st.scope)
        new1 = {n: o for n, o in s1.scope.items() if n not in old}
        new2 = {n: o for n, o in s2.scope.items() if n not in old}
        for n in new1.keys() & new2.keys():
            if new1[n] != new2[n]:
                raise self.fail(EError(f"branch conclusion mismatch: '{n}' is a "
                                       f"{new1[n].sort.value} in one branch and a "
                                       f"{new2[n].sort.value} in the other"), step, "cases")
        common = {n: o for n, o in new1.items() if new2.get(n) == o}
        allowed = set(old.values()) | set(common.values())
        start = len(st.delta)
        export = []
        seen = set()
        for branch, other, label in ((s1, s2, "first"), (s2, s1, "second")):
            for l in branch.delta[start:]:
                if l in seen or not free_vars(l) <= allowed:
                    continue
                seen.add(l)
                witness = bool(free_vars(l) & set(common.values()))
                if other.holds_direct(l) or l in other.established:
                    export.append(l)
                elif witness:
                    raise self.fail(EError(f"branch conclusion mismatch: {l} holds in the {label} "
                                           f"branch only"), step, "cases")
        for n, o in common.items():
            st.add_object(o)
        for l in export:
            st.assert_literal(l)
        st.sync()
        self.log(st, step, f"case {step.assumption}: exported {len(export)} literal(s)")

    def superpose(self, st: ProofState, step: Superpose):
        a, b, c, d, g, L, h = step.args
        for x in step.args:
            if st.scope.get(x.name) != x:
                raise EError(f"unknown object '{x.name}'")
        need = [eq(a, b, False), eq(b, c, False), eq(a, c, False), on(d, L), on(g, L),
                on(h, L, False)]
        for p in need:
            if not st.holds_direct(p):
                raise self.fail(EError(f"superposition requires {p}: not established"), step,
                                "superpose")
        if not _noncollinear(st, a, b, c):
            raise self.fail(EError(f"superposition requires {a}, {b}, {c} to be noncollinear: "
                                   f"no line is known to contain two of them and miss the third"),
                            step, "superpose")
        a1, b1, c1 = step.primes
        inner = st.copy()
        for o in step.primes:
            if o.name in st.scope:
                raise self.fail(EError(f"'{o.name}' is already in use; pick a fresh name"), step,
                                "superpose")
            inner.add_object(o)
        pi = [eq(a1, d), on(b1, L), negate(_bt(b1, d, g)), _ss(c1, h, L)]
        if step.kind == "sas":
            pi.append(metric("eq", angle(a1, b1, c1), angle(a, b, c)))
        else:
            pi += [metric("eq", seg(a, b), seg(a1, b1)), metric("eq", seg(b, c), seg(b1, c1)),
                   metric("eq", seg(c, a), seg(c1, a1))]
        start = len(inner.delta)
        for p in pi:
            inner.assert_literal(p, record=False)
        inner.sync()
        self.run(inner, step.body)
        old = set(st.scope.values())
        if step.body and isinstance(step.body[-1], Have):
            last_line = step.body[-1].line
            for s in step.body:
                if isinstance(s, Have) and s.line == last_line and not s.literal.is_falsity:
                    bad = sorted(v.name for v in free_vars(s.literal) - old)
                    if bad:
                        raise self.fail(EError(f"superposition cannot export {s.literal}: it "
                                               f"mentions '{bad[0]}', which exists only inside "
                                               f"the superposition"), s, "superpose")
        if inner.inconsistent:
            st.assert_literal(FALSITY)
        else:
            for l in inner.delta[start:]:
                if free_vars(l) <= old:
                    st.assert_literal(l)
        st.sync()
        self.log(st, step, f"superpose-{step.kind} as {a1}, {b1}, {c1}")

    # final check
    def qed(self, st: ProofState, step: QED):
        try:
            f = qed_check(st)
        except EError as e:
            raise self.fail(e, step, "qed") from None
        m = ", ".join(f"{k}->{v}" for k, v in f.items())
        self.log(st, step, f"{step.mode}  [{m or 'no witnesses'}]")
        return f


def _bt(a, b, c) -> Literal:
    from .core import lit
    return lit("between", a, b, c)


def _ss(a, b, L) -> Literal:
    from .core import lit
    return lit("same_side", a, b, L)


def _noncollinear(st: ProofState, a, b, c) -> bool:
    for X in st.scope.values():
        if X.sort != LINE:
            continue
        for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
            if st.diagram.holds(on(p, X)) and st.diagram.holds(on(q, X)) \
                    and st.diagram.holds(on(r, X, False)):
                return True
    return False


def qed_check(st: ProofState, mode: str = "qed") -> dict[str, str]:
    """Find a map from the existential variables to objects in scope under
    which every conclusion is established. Returns it as name -> name."""
    th = st.theorem
    if th.concludes_falsity:
        if not st.inconsistent:
            raise EError("the theorem concludes a contradiction, but the facts established "
                         "are consistent")
        return {}
    if st.inconsistent:
        return {v.name: _any_of(st, v.sort).name for v in th.existentials}
    exs = list(th.existentials)
    metric_known = st.established

    def ok(l):
        if l.is_diagram:
            return st.diagram.holds(l)
        return normalize_literal(l) in metric_known

    # conclusions are checked as soon as all their variables are bound
    universal = {v: st.scope[v.name] for v in th.universals}
    pending = [(c, free_vars(c) & set(exs)) for c in th.conclusions]
    best = {"depth": -1, "lit": None}
    ordered = sorted(st.scope.values(), key=lambda o: -list(st.scope).index(o.name))

    def search(i, ren):
        if i == 0:
            ready = [c for c, vs in pending if not vs]
        else:
            bound = set(exs[:i])
            ready = [c for c, vs in pending if exs[i - 1] in vs and vs <= bound]
        for c in ready:
            cl = substitute(c, ren)
            if not ok(cl):
                if i > best["depth"]:
                    best["depth"], best["lit"] = i, cl
                return None
        if i == len(exs):
            return dict(ren)
        v = exs[i]
        for o in ordered:
            if o.sort != v.sort:
                continue
            ren[v] = o
            r = search(i + 1, ren)
            if r is not None:
                return r
            del ren[v]
        return None

    res = search(0, dict(universal))
    if res is None:
        what = best["lit"]
        if what is None:
            raise EError("no objects of the right sorts for the existential variables")
        raise EError(f"no witness mapping: conclusion {what} is not established")
    return {v.name: res[v].name for v in exs}


def _any_of(st, sort):
    for o in st.scope.values():
        if o.sort == sort:
            return o
    return ObjectVar("?", sort)


# -- drivers ---------------------------------------------------------------------------------

@dataclass
class Verdict:
    name: str
    ok: bool
    status: str
    error: CheckError | None = None
    seconds: float = 0.0
    trace: list[str] = field(default_factory=list)
    mapping: dict = field(default_factory=dict)
    filename: str = ""

    @property
    def step(self) -> str:
        return self.error.step if self.error else ""


def check_theorem(decl: TheoremDecl, library: Library, filename=None, trace=False) -> Verdict:
    st_ = decl.statement
    t0 = time.perf_counter()
    if decl.body is None:
        return Verdict(st_.name, True, ASSUMED, filename=filename or "")
    runner = _Runner(library, filename, trace)
    try:
        state = begin(st_)
        mapping = runner.run(state, decl.body, top=True)
    except CheckError as e:
        return Verdict(st_.name, False, FAILED, e, time.perf_counter() - t0, [],
                       filename=filename or "")
    except EError as e:
        err = CheckError(e.message, decl.line, decl.col, filename, "begin")
        return Verdict(st_.name, False, FAILED, err, time.perf_counter() - t0,
                       filename=filename or "")
    return Verdict(st_.name, True, PROVED, None, time.perf_counter() - t0, state.log,
                   mapping or {}, filename or "")


def check_script(script, library: Library | None = None, trace=False) -> list[Verdict]:
    """Check theorems in order, registering each for use by later ones."""
    library = library if library is not None else Library()
    out = []
    for decl in script.theorems:
        name = decl.statement.name
        if name in library:
            err = CheckError(f"duplicate theorem name '{name}'", decl.line, decl.col,
                             script.filename, "theorem")
            out.append(Verdict(name, False, FAILED, err, filename=script.filename))
            continue
        v = check_theorem(decl, library, script.filename, trace)
        library.register(LibraryEntry(decl.statement, v.status, f"{script.filename}:{decl.line}",
                                      decl.statement.note))
        out.append(v)
    return out
