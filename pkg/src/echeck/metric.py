"""Metric inferences: linear entailment over nonnegative magnitudes.

Every canonical atomic magnitude becomes a rational unknown. A goal is
entailed when the context together with the goal's negation is infeasible,
which is decided by Fourier-Motzkin elimination in exact arithmetic.
Disequalities are handled separately: a feasible convex system S stays
feasible under finitely many constraints d != 0 unless S already forces
one of the d to vanish.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .core import EError, Literal, Mag, MagnitudeTerm, ObjectVar, SortError, normalize_literal

# A linear expression is (coeffs: dict var -> Fraction, const: Fraction).
# Equalities are (coeffs, const) meaning sum(coeffs) + const = 0; inequalities
# are (coeffs, const, strict) meaning sum(coeffs) + const < 0, or <= 0 if not strict.

RIGHT = (0, ())


def _combine(c1, k1, a, c2, k2, b):
    """a*(c1 + k1) + b*(c2 + k2)"""
    out = {}
    for v, x in c1.items():
        out[v] = a * x
    for v, x in c2.items():
        y = out.get(v, 0) + b * x
        if y:
            out[v] = y
        else:
            out.pop(v, None)
    return out, a * k1 + b * k2


def _substitute(coeffs, const, var, repl, rconst):
    """Replace var by (repl + rconst) in coeffs + const."""
    x = coeffs.get(var)
    if not x:
        return coeffs, const
    rest = {v: c for v, c in coeffs.items() if v != var}
    return _combine(rest, const, Fraction(1), repl, rconst, x)


def _normal(coeffs, const, strict):
    """Scale so the leading (smallest) variable has coefficient +-1; return a dedup key."""
    lead = min(coeffs)
    s = abs(coeffs[lead])
    items = tuple(sorted((v, c / s) for v, c in coeffs.items()))
    return items, const / s, strict


def fm_feasible(eqs, ineqs) -> bool:
    """Feasibility of {e = 0 : eqs} and {i < 0 or i <= 0 : ineqs} over the rationals.

    eqs: list of (coeffs, const); ineqs: list of (coeffs, const, strict).
    """
    eqs = [(dict(c), Fraction(k)) for c, k in eqs]
    ineqs = [(dict(c), Fraction(k), s) for c, k, s in ineqs]
    # Gaussian elimination of equalities
    while eqs:
        c, k = eqs.pop()
        if not c:
            if k != 0:
                return False
            continue
        var = min(c)
        a = c[var]
        repl = {v: -x / a for v, x in c.items() if v != var}
        rk = -k / a
        eqs = [_substitute(ce, ke, var, repl, rk) for ce, ke in eqs]
        ineqs = [_substitute(ci, ki, var, repl, rk) + (si,) for ci, ki, si in ineqs]
    return all(_fm(part) for part in _components(ineqs))


def _components(ineqs):
    """Split constraints into groups with pairwise disjoint variables."""
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, _, _ in ineqs:
        vs = list(c)
        for v in vs[1:]:
            ra, rb = find(vs[0]), find(v)
            if ra != rb:
                parent[ra] = rb
    groups: dict = {}
    for con in ineqs:
        key = find(next(iter(con[0]))) if con[0] else None
        groups.setdefault(key, []).append(con)
    return list(groups.values())


def _fm(ineqs) -> bool:
    # keep the tightest constraint per normalized left-hand side
    def reduce(cons):
        best = {}
        for c, k, s in cons:
            if not c:
                if k > 0 or (k == 0 and s):
                    return None
                continue
            items, kk, ss = _normal(c, k, s)
            old = best.get(items)
            if old is None or kk > old[0] or (kk == old[0] and ss and not old[1]):
                best[items] = (kk, ss)
        return best

    best = reduce(ineqs)
    if best is None:
        return False
    while best:
        count_pos: dict = {}
        count_neg: dict = {}
        for items in best:
            for v, x in items:
                if x > 0:
                    count_pos[v] = count_pos.get(v, 0) + 1
                else:
                    count_neg[v] = count_neg.get(v, 0) + 1
        allvars = set(count_pos) | set(count_neg)
        var = min(allvars, key=lambda v: (count_pos.get(v, 0) * count_neg.get(v, 0), v))
        pos, negs, keep = [], [], []
        for items, (k, s) in best.items():
            d = dict(items)
            x = d.get(var)
            if x is None:
                keep.append((d, k, s))
            elif x > 0:
                pos.append((d, k, s, x))
            else:
                negs.append((d, k, s, x))
        new = keep
        for dp, kp, sp, xp in pos:
            for dn, kn, sn, xn in negs:
                c, k = _combine(dp, kp, -xn, dn, kn, xp)
                c.pop(var, None)
                new.append((c, k, sp or sn))
        best = reduce(new)
        if best is None:
            return False
    return True


class _UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.get(x, x)
        if p == x:
            return x
        r = self.find(p)
        self.parent[x] = r
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class MetricContext:
    """Metric literals plus the point (dis)equalities known from the diagram."""

    def __init__(self, facts=(), point_eqs=(), point_neqs=()):
        self.facts: list[Literal] = []
        self._fact_set: set = set()
        self.point_eqs: set = set()
        self.point_neqs: set = set()
        self.points: dict[str, ObjectVar] = {}
        self.absurd = False
        self._cache: dict = {}
        for f in facts:
            self.add(f)
        for a, b in point_eqs:
            self.add_point_eq(a, b)
        for a, b in point_neqs:
            self.add_point_neq(a, b)

    def copy(self) -> "MetricContext":
        m = MetricContext()
        m.facts = list(self.facts)
        m._fact_set = set(self._fact_set)
        m.point_eqs = set(self.point_eqs)
        m.point_neqs = set(self.point_neqs)
        m.points = dict(self.points)
        m.absurd = self.absurd
        return m

    def _reg(self, p: ObjectVar):
        self.points.setdefault(p.name, p)

    def add(self, lit: Literal):
        if lit.is_falsity:
            self.absurd = True
            self._cache.clear()
            return
        if not lit.is_metric:
            a = lit.atom
            if a.pred == "eq_point":
                x, y = a.args
                (self.add_point_eq if lit.positive else self.add_point_neq)(x, y)
                return
            raise EError(f"not a metric literal: {lit}")
        n = normalize_literal(lit)
        if n in self._fact_set:
            return
        for p in n.atom.lhs.points() | n.atom.rhs.points():
            self._reg(p)
        self._fact_set.add(n)
        self.facts.append(n)
        self._cache.clear()

    def add_point_eq(self, a: ObjectVar, b: ObjectVar):
        self._reg(a)
        self._reg(b)
        key = tuple(sorted((a.name, b.name)))
        if key[0] != key[1] and key not in self.point_eqs:
            self.point_eqs.add(key)
            self._cache.clear()

    def add_point_neq(self, a: ObjectVar, b: ObjectVar):
        self._reg(a)
        self._reg(b)
        key = tuple(sorted((a.name, b.name)))
        if key not in self.point_neqs:
            self.point_neqs.add(key)
            self._cache.clear()

    # -- system construction -------------------------------------------------------------

    def _build(self, extra_eq=None, extra_neq=None):
        """Translate into (eqs, ineqs, diseqs, var set, uf, contradiction flag)."""
        uf = _UF()
        for a, b in self.point_eqs:
            uf.union(a, b)
        if extra_eq:
            uf.union(*extra_eq)
        neqs = set(self.point_neqs)
        if extra_neq:
            neqs.add(tuple(sorted(extra_neq)))
        bad = any(uf.find(a) == uf.find(b) for a, b in neqs)
        sys = _System(uf)
        for f in self.facts:
            sys.add_literal(f)
        rep_neqs = {tuple(sorted((uf.find(a), uf.find(b)))) for a, b in neqs}
        return sys, rep_neqs, bad

    def _background(self, vars_, rep_neqs, have_right=False):
        """x >= 0 for each unknown, seg > 0 for distinct endpoints, angle <= 2 right
        when both arms are known nondegenerate, right > 0."""
        ineqs = []
        need_right = False
        for v in sorted(vars_):
            ineqs.append(({v: Fraction(-1)}, Fraction(0), v == RIGHT))
            kind, names = v
            if kind == 1 and tuple(sorted(names)) in rep_neqs:
                ineqs.append(({v: Fraction(-1)}, Fraction(0), True))
            if kind == 2:
                a, b, c = names
                if tuple(sorted((a, b))) in rep_neqs and tuple(sorted((b, c))) in rep_neqs:
                    need_right = True
                    ineqs.append(({v: Fraction(1), RIGHT: Fraction(-2)}, Fraction(0), False))
        if need_right and RIGHT not in vars_ and not have_right:
            ineqs.append(({RIGHT: Fraction(-1)}, Fraction(0), True))
        return ineqs, need_right

    def _closed(self, extra_eq=None, extra_neq=None):
        """The translated context with background constraints and axiom 9 applied.

        Returns (sys, rep_neqs, eqs, ineqs, diseqs, feasible) where feasible
        ignores the disequalities.
        """
        key = ("closed", extra_eq, extra_neq)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        sys, rep_neqs, bad = self._build(extra_eq, extra_neq)
        bg, need_right = self._background(sys.vars, rep_neqs)
        if need_right:
            sys.vars.add(RIGHT)
        eqs = list(sys.eqs)
        ineqs = list(sys.ineqs) + bg
        diseqs = list(sys.diseqs)
        ok = not bad and not self.absurd and fm_feasible(eqs, ineqs)
        if ok:
            self._axiom9(sys, eqs, ineqs, sorted(v for v in sys.vars if v[0] == 3))
        res = (sys, rep_neqs, eqs, ineqs, diseqs, ok)
        self._cache[key] = res
        return res

    def _axiom9(self, sys, eqs, ineqs, areas, fresh=None):
        """Add area(abc) = area(a'b'c') for congruent registered triangles, to a fixpoint.

        With `fresh`, only pairs involving one of those area unknowns are tried.
        """
        if len(areas) < 2:
            return
        # unknowns only bounded by the background constraints can take any value in an
        # open interval, so they are never forced equal to a different unknown
        fv = _fact_vars(sys)
        saved = set(sys.vars)

        def maybe_equal(x, y):
            return x == y or ((x is None or x in fv) and (y is None or y in fv))

        done = set()
        memo: dict = {}
        changed = True
        while changed:
            changed = False
            for i, v1 in enumerate(areas):
                for v2 in areas[i + 1:]:
                    if (v1, v2) in done or (fresh and v1 not in fresh and v2 not in fresh):
                        continue
                    a, b, c = v1[1]
                    for d, e, f in permutations(v2[1]):
                        conds = [(sys.seg_var(a, b), sys.seg_var(d, e)),
                                 (sys.seg_var(b, c), sys.seg_var(e, f)),
                                 (sys.seg_var(c, a), sys.seg_var(f, d)),
                                 (sys.angle_var(a, b, c), sys.angle_var(d, e, f)),
                                 (sys.angle_var(b, c, a), sys.angle_var(e, f, d)),
                                 (sys.angle_var(c, a, b), sys.angle_var(f, d, e))]
                        if not all(maybe_equal(x, y) for x, y in conds):
                            continue
                        ok = True
                        for x, y in conds:
                            if x == y:
                                continue
                            k = (x, y) if str(x) <= str(y) else (y, x)
                            if k not in memo:
                                memo[k] = _forces_zero(eqs, ineqs, _diff(x, y))
                            if not memo[k]:
                                ok = False
                                break
                        if ok:
                            eqs.append(_diff(v1, v2))
                            done.add((v1, v2))
                            memo.clear()
                            changed = True
                            break
        sys.vars.clear()
        sys.vars.update(saved)

    # -- queries ----------------------------------------------------------------------------

    def consistent(self) -> bool:
        key = ("consistent",)
        if key not in self._cache:
            sys, rep_neqs, eqs, ineqs, diseqs, ok = self._closed()
            self._cache[key] = ok and _feasible_with_diseqs(eqs, ineqs, diseqs)
        return self._cache[key]

    def entails(self, goal: Literal) -> bool:
        if goal.is_falsity:
            return not self.consistent()
        if not self.consistent():
            return True
        if goal.is_diagram:
            a = goal.atom
            if a.pred != "eq_point":
                raise EError(f"the metric solver cannot decide {goal}")
            x, y = a.args
            if x.name == y.name:
                return goal.positive
            pair = tuple(sorted((x.name, y.name)))
            if goal.positive:
                sys, rep_neqs, eqs, ineqs, diseqs, ok = self._closed(extra_neq=pair)
            else:
                sys, rep_neqs, eqs, ineqs, diseqs, ok = self._closed(extra_eq=pair)
            return not (ok and _feasible_with_diseqs(eqs, ineqs, diseqs))
        n = normalize_literal(goal)
        key = ("goal", n)
        if key in self._cache:
            return self._cache[key]
        sys, rep_neqs, eqs, ineqs, diseqs, ok = self._closed()
        before = set(sys.vars)
        ce, ck = sys.expr(n.atom.lhs, n.atom.rhs)
        new_vars = set(sys.vars) - before
        sys.vars.clear()
        sys.vars.update(before)
        eqs, ineqs, diseqs = list(eqs), list(ineqs), list(diseqs)
        if new_vars:
            bg, need_right = self._background(new_vars, rep_neqs, RIGHT in before)
            ineqs += bg
            new_areas = {v for v in new_vars if v[0] == 3}
            if new_areas:
                ext = _System(sys.uf)
                ext.vars = before | new_vars
                ext.eqs, ext.ineqs, ext.diseqs = sys.eqs, sys.ineqs, sys.diseqs
                self._axiom9(ext, eqs, ineqs, sorted(v for v in ext.vars if v[0] == 3),
                             fresh=new_areas)
        if n.atom.rel == "eq":
            if n.positive:
                diseqs.append((ce, ck))
            else:
                eqs.append((ce, ck))
        else:
            # goal lhs < rhs, i.e. (lhs - rhs) < 0
            if n.positive:
                ineqs.append(({v: -c for v, c in ce.items()}, -ck, False))
            else:
                ineqs.append((ce, ck, True))
        res = not _feasible_with_diseqs(eqs, ineqs, diseqs)
        self._cache[key] = res
        return res

    def derive_point_equality(self, candidates=None) -> list[Literal]:
        """Point (dis)equalities certified by axiom 1 over registered points."""
        from .core import eq
        out = []
        if candidates is None:
            names = sorted(self.points)
            candidates = [(self.points[a], self.points[b])
                          for i, a in enumerate(names) for b in names[i + 1:]]
        for x, y in candidates:
            key = tuple(sorted((x.name, y.name)))
            if key in self.point_eqs or key in self.point_neqs:
                continue
            if self.entails(eq(x, y)):
                out.append(eq(x, y))
            elif self.entails(eq(x, y, positive=False)):
                out.append(eq(x, y, positive=False))
        return out


class _System:
    """Linear constraints over canonical magnitude unknowns (points merged by uf)."""

    def __init__(self, uf):
        self.uf = uf
        self.vars: set = set()
        self.eqs: list = []
        self.ineqs: list = []
        self.diseqs: list = []

    def _var(self, m: Mag):
        if m.kind == "right_angle":
            self.vars.add(RIGHT)
            return RIGHT
        names = [self.uf.find(p.name) for p in m.points]
        return self._named(m.kind, names)

    def _named(self, kind, names):
        if kind == "seg":
            if names[0] == names[1]:
                return None
            key = (1, tuple(sorted(names)))
        elif kind == "angle":
            a, b, c = names
            key = (2, (a, b, c) if a <= c else (c, b, a))
        else:
            if len(set(names)) < 3:
                return None
            key = (3, tuple(sorted(names)))
        self.vars.add(key)
        return key

    def seg_var(self, a, b):
        return self._named("seg", [self.uf.find(a), self.uf.find(b)])

    def angle_var(self, a, b, c):
        return self._named("angle", [self.uf.find(a), self.uf.find(b), self.uf.find(c)])

    def expr(self, lhs: MagnitudeTerm, rhs: MagnitudeTerm):
        coeffs: dict = {}
        for s, sign in [(x, 1) for x in lhs.summands] + [(x, -1) for x in rhs.summands]:
            v = self._var(s)
            if v is None:
                continue
            y = coeffs.get(v, 0) + sign
            if y:
                coeffs[v] = Fraction(y)
            else:
                coeffs.pop(v, None)
        return coeffs, Fraction(0)

    def add_literal(self, n: Literal):
        c, k = self.expr(n.atom.lhs, n.atom.rhs)
        if n.atom.rel == "eq":
            (self.eqs if n.positive else self.diseqs).append((c, k))
        elif n.positive:
            self.ineqs.append((c, k, True))
        else:
            self.ineqs.append(({v: -x for v, x in c.items()}, -k, False))


def _fact_vars(sys) -> set:
    out = set()
    for c, _ in sys.eqs + sys.diseqs:
        out.update(c)
    for c, _, _ in sys.ineqs:
        out.update(c)
    return out


def _diff(x, y):
    c = {}
    if x is not None:
        c[x] = Fraction(1)
    if y is not None:
        c[y] = c.get(y, 0) - 1
        if not c[y]:
            del c[y]
    return c, Fraction(0)


def _forces_zero(eqs, ineqs, d) -> bool:
    """Whether eqs and ineqs force d = 0; the system itself must be feasible."""
    c, k = d
    if not c:
        return k == 0
    eqs, ineqs = _relevant(eqs, ineqs, set(c))
    return (not fm_feasible(eqs, ineqs + [(c, k, True)])
            and not fm_feasible(eqs, ineqs + [({v: -x for v, x in c.items()}, -k, True)]))


def _relevant(eqs, ineqs, seed):
    """The constraints connected to the variables in seed through shared variables."""
    cons = [(c, 0, x) for x, (c, _) in enumerate(eqs)] + \
        [(c, 1, x) for x, (c, _, _) in enumerate(ineqs)]
    reach = set(seed)
    taken = set()
    grew = True
    while grew:
        grew = False
        for c, kind, x in cons:
            if (kind, x) not in taken and any(v in reach for v in c):
                taken.add((kind, x))
                reach.update(c)
                grew = True
    return ([e for x, e in enumerate(eqs) if (0, x) in taken],
            [i for x, i in enumerate(ineqs) if (1, x) in taken])


def _feasible_with_diseqs(eqs, ineqs, diseqs) -> bool:
    if not fm_feasible(eqs, ineqs):
        return False
    for d in diseqs:
        if _forces_zero(eqs, ineqs, d):
            return False
    return True


def entails_metric(ctx: MetricContext, goal: Literal) -> bool:
    """True iff `goal` holds in every model of the magnitude axioms and ctx."""
    if goal.is_metric:
        a = goal.atom
        if a.lhs.sort != a.rhs.sort:
            raise SortError("sort mismatch")
    return ctx.entails(goal)


def derive_point_equality(ctx: MetricContext) -> list[Literal]:
    return ctx.derive_point_equality()
