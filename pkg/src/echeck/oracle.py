"""Brute-force checkers used to cross-examine the checker in tests.

* classical consequence over the ground instances of the diagram axioms,
  decided by a small DPLL search;
* the naive full decision procedure for diagram + metric + transfer
  literals over at most five objects;
* evaluation of literals in cartesian models with rational coordinates;
* a second Fourier-Motzkin implementation with a different elimination order.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .core import (CIRCLE, EQ_PRED, LINE, POINT, PREDICATES, DiagramAtom, EError, Literal,
                   MetricAtom, ObjectVar, free_vars, negate, substitute)
from .diagram import rule_catalog
from .metric import MetricContext


class InstanceTooLarge(EError):
    pass


MAX_DECIDE_OBJECTS = 5
MAX_GROUND_CLAUSES = 3_000_000
_SORTS = (POINT, LINE, CIRCLE)


# -- propositional search ---------------------------------------------------------------

class _Solver:
    """DPLL with two watched literals and chronological backtracking.

    Atoms are 0..n-1; literal 2*i is atom i true, 2*i + 1 is atom i false.
    """

    def __init__(self, natoms: int, clauses):
        self.n = natoms
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False
        self.watches: list[list[int]] = [[] for _ in range(2 * natoms)]
        for c in clauses:
            c = list(c)
            if not c:
                self.empty = True
            elif len(c) == 1:
                self.units.append(c[0])
            else:
                k = len(self.clauses)
                self.clauses.append(c)
                self.watches[c[0]].append(k)
                self.watches[c[1]].append(k)

    def _propagate(self, assign, trail, queue) -> bool:
        """Assign queued literals and everything unit propagation forces; False on conflict."""
        clauses, watches = self.clauses, self.watches
        i = 0
        while i < len(queue):
            l = queue[i]
            i += 1
            v = assign[l >> 1]
            if v >= 0:
                if v != (l & 1):
                    return False
                continue
            assign[l >> 1] = l & 1
            trail.append(l)
            false_lit = l ^ 1
            ws = watches[false_lit]
            j = 0
            while j < len(ws):
                k = ws[j]
                c = clauses[k]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                other = c[0]
                ov = assign[other >> 1]
                if ov >= 0 and ov == (other & 1):
                    j += 1
                    continue
                for m in range(2, len(c)):
                    x = c[m]
                    xv = assign[x >> 1]
                    if xv < 0 or xv == (x & 1):
                        c[1], c[m] = x, false_lit
                        watches[x].append(k)
                        ws[j] = ws[-1]
                        ws.pop()
                        break
                else:
                    j += 1
                    if ov < 0:
                        queue.append(other)
                    else:
                        return False
        return True

    def closure(self, assumptions) -> tuple[set[int], bool]:
        """Literals forced by unit propagation alone; (literals, conflict)."""
        assign = [-1] * self.n
        trail: list[int] = []
        ok = not self.empty and self._propagate(assign, trail, list(self.units) + list(assumptions))
        return set(trail), not ok

    def solve(self, assumptions=(), order=None, hook=None):
        """A satisfying total assignment (list of true literals) or None.

        `hook(trail, complete)` may reject a partial or total assignment.
        Decisions try the negative literal first.
        """
        if self.empty:
            return None
        assign = [-1] * self.n
        trail: list[int] = []
        if not self._propagate(assign, trail, list(self.units) + list(assumptions)):
            return None
        order = list(order) if order is not None else list(range(self.n))
        stack = []  # (trail length before decision, decision literal, flipped)
        ok = hook is None or hook(trail, False)
        while True:
            if ok:
                atom = next((a for a in order if assign[a] < 0), None)
                if atom is None:
                    if hook is None or hook(trail, True):
                        return list(trail)
                    ok = False
                    continue
                stack.append((len(trail), 2 * atom + 1, False))
                ok = self._propagate(assign, trail, [2 * atom + 1])
                if ok and hook is not None:
                    ok = hook(trail, False)
                continue
            # conflict: undo to the most recent unflipped decision
            while stack and stack[-1][2]:
                stack.pop()
            if not stack:
                return None
            size, lit_, _ = stack.pop()
            for l in trail[size:]:
                assign[l >> 1] = -1
            del trail[size:]
            stack.append((size, lit_ ^ 1, True))
            ok = self._propagate(assign, trail, [lit_ ^ 1])
            if ok and hook is not None:
                ok = hook(trail, False)


def _sign_code(item, atoms: dict) -> int:
    if isinstance(item, str):
        name = item.lstrip("~")
        return 2 * atoms.setdefault(name, len(atoms)) + item.startswith("~")
    if isinstance(item, Literal):
        key = item.atom
        return 2 * atoms.setdefault(key, len(atoms)) + (not item.positive)
    raise TypeError(f"cannot encode {item!r}")


def classical_entails(gamma, clauses, goal, max_atoms: int = 5000) -> bool:
    """Every assignment satisfying gamma and all clauses satisfies goal.

    Literals are strings ('A', '~A') or ground Literals; clauses are
    iterables of literals read disjunctively.
    """
    atoms: dict = {}
    cl = [[_sign_code(x, atoms) for x in c] for c in clauses]
    g = [_sign_code(x, atoms) for x in gamma]
    t = _sign_code(goal, atoms)
    if len(atoms) > max_atoms:
        raise InstanceTooLarge(f"{len(atoms)} atoms exceed the limit of {max_atoms}")
    cl = [sorted(set(c)) for c in cl]
    cl = [c for c in cl if not any(x ^ 1 in c for x in c if not x & 1)]
    s = _Solver(len(atoms), cl)
    return s.solve(g + [t ^ 1]) is None


# -- ground diagram theory ------------------------------------------------------------------

class _Layout:
    """Atom numbering for a given count of points, lines and circles."""

    def __init__(self, counts):
        self.counts = dict(zip(_SORTS, counts))
        self.offset = {}
        self.strides = {}
        n = 0
        for pred, sig in PREDICATES.items():
            dims = [self.counts[s] for s in sig]
            self.offset[pred] = n
            st, acc = [], 1
            for d in reversed(dims):
                st.append(acc)
                acc *= d
            self.strides[pred] = st[::-1]
            n += acc
        self.natoms = n

    def atom(self, pred, idx) -> int:
        return self.offset[pred] + sum(i * s for i, s in zip(idx, self.strides[pred]))

    def decode(self, a: int):
        for pred in reversed(list(PREDICATES)):
            off = self.offset[pred]
            if a >= off:
                rest, idx = a - off, []
                for s in self.strides[pred]:
                    idx.append(rest // s)
                    rest %= s
                return pred, tuple(idx)
        raise ValueError(a)


@lru_cache(maxsize=64)
def _ground(counts) -> tuple[_Layout, "_Solver"]:
    """Ground clauses for the given numbers of points, lines and circles, loaded in a solver.

    Solvers keep no state between searches, so one instance serves every
    query over the same object counts.
    """
    layout = _Layout(counts)
    out = []
    total = 0
    for s, n in zip(_SORTS, counts):
        for i in range(n):
            out.append([2 * layout.atom(EQ_PRED[s], (i, i))])
    for rc in rule_catalog():
        vars_: list[ObjectVar] = []
        for l in rc.literals:
            for v in l.atom.args:
                if v not in vars_:
                    vars_.append(v)
        dims = [layout.counts[v.sort] for v in vars_]
        if 0 in dims:
            continue
        grid = np.indices(dims).reshape(len(dims), -1) if dims else np.zeros((0, 1), int)
        cols = []
        for l in rc.literals:
            a = l.atom
            code = np.full(grid.shape[1], layout.offset[a.pred], dtype=np.int64)
            for v, s in zip(a.args, layout.strides[a.pred]):
                code += s * grid[vars_.index(v)]
            cols.append(2 * code + (0 if l.positive else 1))
        rows = np.sort(np.stack(cols, axis=1), axis=1)
        if rows.shape[1] > 1:
            lo, hi = rows[:, :-1], rows[:, 1:]
            taut = ((hi == lo + 1) & (lo % 2 == 0)).any(axis=1)
            rows = rows[~taut]
            dup = np.concatenate([np.zeros((rows.shape[0], 1), bool),
                                  rows[:, 1:] == rows[:, :-1]], axis=1)
        else:
            dup = np.zeros(rows.shape, bool)
        total += rows.shape[0]
        if total > MAX_GROUND_CLAUSES:
            raise InstanceTooLarge(f"more than {MAX_GROUND_CLAUSES} ground clauses")
        has_dup = dup.any(axis=1)
        for r, d, hd in zip(rows.tolist(), dup, has_dup):
            out.append([x for x, y in zip(r, d) if not y] if hd else r)
    return layout, _Solver(layout.natoms, out)


class GroundTheory:
    """All ground instances of the diagram axioms over a fixed object set."""

    def __init__(self, objects):
        objs = sorted(set(objects), key=ObjectVar.key)
        self.objects = objs
        self.by_sort = {s: [o for o in objs if o.sort == s] for s in _SORTS}
        self.index = {o: self.by_sort[o.sort].index(o) for o in objs}
        counts = tuple(len(self.by_sort[s]) for s in _SORTS)
        self.layout, self._solver = _ground(counts)

    @property
    def natoms(self) -> int:
        return self.layout.natoms

    @property
    def clauses(self) -> list:
        return self._solver.clauses

    def solver(self) -> _Solver:
        return self._solver

    def code(self, l: Literal) -> int:
        a = l.atom
        if not isinstance(a, DiagramAtom):
            raise EError(f"not a diagrammatic literal: {l}")
        idx = []
        for x in a.args:
            if x not in self.index:
                raise EError(f"unknown object '{x}'")
            idx.append(self.index[x])
        return 2 * self.layout.atom(a.pred, idx) + (0 if l.positive else 1)

    def literal(self, code: int) -> Literal:
        pred, idx = self.layout.decode(code >> 1)
        args = tuple(self.by_sort[s][i] for s, i in zip(PREDICATES[pred], idx))
        return Literal(not code & 1, DiagramAtom(pred, args))

    def unit_closure(self, gamma) -> tuple[set[Literal], bool]:
        lits, conflict = self.solver().closure([self.code(l) for l in gamma])
        return {self.literal(c) for c in lits}, conflict

    def entails(self, gamma, goal: Literal) -> bool:
        g = [self.code(l) for l in gamma]
        return self.solver().solve(g + [self.code(goal) ^ 1]) is None

    def satisfiable(self, gamma) -> bool:
        return self.solver().solve([self.code(l) for l in gamma]) is not None


def geometric_entails(objects, gamma, goal: Literal) -> bool:
    """Classical consequence of goal from gamma and the ground diagram axioms."""
    return GroundTheory(objects).entails(gamma, goal)


# -- full decision procedure -------------------------------------------------------------------

def _objects_of(lits) -> list[ObjectVar]:
    out = set()
    for l in lits:
        out |= free_vars(l)
    return sorted(out, key=ObjectVar.key)


def restrict(lits, objects) -> list[Literal]:
    """The literals that mention only the given objects."""
    keep = set(objects)
    return [l for l in lits if free_vars(l) <= keep]


@dataclass
class _TransferInstance:
    diagram: list  # literal codes that must be true
    metric_hyps: list
    conclusion: Literal
    concl_code: int | None  # for diagram conclusions


def _transfer_instances(theory: GroundTheory):
    from .transfer import transfer_catalog
    out = []
    for rule in transfer_catalog():
        vars_ = rule.variables()
        doms = [theory.by_sort[v.sort] for v in vars_]
        for combo in product(*doms):
            inst = dict(zip(vars_, combo))
            diag = [theory.code(substitute(h, inst)) for h in rule.diagram_hyps]
            mh = [substitute(h, inst) for h in rule.metric_hyps]
            c = substitute(rule.conclusion, inst)
            out.append(_TransferInstance(diag, mh, c, theory.code(c) if c.is_diagram else None))
    return out


def _metric_feasible(definite, disjunctions, point_lits) -> bool:
    ctx = MetricContext()
    for l in point_lits:
        ctx.add(l)
    for l in definite:
        ctx.add(l)
    if not ctx.consistent():
        return False
    if not disjunctions:
        return True
    (x, y), rest = disjunctions[0], disjunctions[1:]
    return any(_metric_feasible(definite + [c], rest, point_lits) for c in (x, y))


def full_decide(gamma, max_objects: int = MAX_DECIDE_OBJECTS) -> str:
    """'consistent' or 'inconsistent' for a set of diagram and metric literals.

    Searches total assignments to the diagram atoms over the objects of
    gamma. Under each assignment the transfer axioms reduce to metric
    constraints, some of them disjunctive, which the metric solver checks.
    """
    gamma = list(gamma)
    if any(l.is_falsity for l in gamma):
        return "inconsistent"
    objs = _objects_of(gamma)
    if len(objs) > max_objects:
        raise InstanceTooLarge(f"{len(objs)} objects exceed the limit of {max_objects}")
    theory = GroundTheory(objs)
    diag = [theory.code(l) for l in gamma if l.is_diagram]
    metric_given = [l for l in gamma if l.is_metric]
    insts = _transfer_instances(theory)
    solver = theory.solver()
    eqp = [(2 * theory.layout.atom("eq_point", (i, j)), x, y)
           for i, x in enumerate(theory.by_sort[POINT])
           for j, y in enumerate(theory.by_sort[POINT]) if i < j]
    last = {"n": -1}

    def hook(trail, complete):
        true = set(trail)
        definite, disj = list(metric_given), []
        for t in insts:
            if not all(d in true for d in t.diagram):
                continue
            if t.concl_code is None:
                if not t.metric_hyps:
                    definite.append(t.conclusion)
                elif complete:
                    disj.append((negate(t.metric_hyps[0]), t.conclusion))
            elif (t.concl_code ^ 1) in true:
                definite.append(negate(t.metric_hyps[0]))
        points = []
        for code, x, y in eqp:
            if code in true:
                points.append(Literal(True, DiagramAtom("eq_point", (x, y))))
            elif code + 1 in true:
                points.append(Literal(False, DiagramAtom("eq_point", (x, y))))
        key = len(definite) + len(points)
        if not complete and key == last["n"]:
            return True
        last["n"] = key
        return _metric_feasible(definite, disj if complete else [], points)

    return "consistent" if solver.solve(diag, hook=hook) is not None else "inconsistent"


# -- cartesian models -------------------------------------------------------------------------

@dataclass
class Model:
    """Rational coordinates for points, (A, B, C) for lines Ax + By + C = 0,
    and (center, squared radius) for circles."""
    points: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)
    circles: dict = field(default_factory=dict)

    def objects(self) -> list[ObjectVar]:
        out = [ObjectVar(n, POINT) for n in self.points]
        out += [ObjectVar(n, LINE) for n in self.lines]
        out += [ObjectVar(n, CIRCLE) for n in self.circles]
        return out


def _line_through(p, q):
    (x1, y1), (x2, y2) = p, q
    a, b = y2 - y1, x1 - x2
    return a, b, -(a * x1 + b * y1)


def _lval(L, p):
    return L[0] * p[0] + L[1] * p[1] + L[2]


def _d2(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def _sign(x):
    return (x > 0) - (x < 0)


def _between(a, b, c) -> bool:
    if a == b or b == c or a == c:
        return False
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if cross != 0:
        return False
    return (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) > 0


def atom_value(atom: DiagramAtom, m: Model) -> bool:
    p = atom.pred
    get = {POINT: m.points, LINE: m.lines, CIRCLE: m.circles}
    vals = []
    for x in atom.args:
        try:
            vals.append(get[x.sort][x.name])
        except KeyError:
            raise EError(f"the model does not interpret '{x}'") from None
    for x, v in zip(atom.args, vals):
        if x.sort == LINE and v[0] == 0 and v[1] == 0:
            raise EError(f"degenerate line coefficients for '{x}'")
    if p == "on_line":
        return _lval(vals[1], vals[0]) == 0
    if p == "same_side":
        L = vals[2]
        return _sign(_lval(L, vals[0])) * _sign(_lval(L, vals[1])) > 0
    if p == "between":
        return _between(*vals)
    if p == "on_circle":
        c, r2 = vals[1]
        return _d2(vals[0], c) == r2
    if p == "inside":
        c, r2 = vals[1]
        return _d2(vals[0], c) < r2
    if p == "center":
        return vals[0] == vals[1][0]
    if p == "intersects_ll":
        L, M = vals
        return L[0] * M[1] - L[1] * M[0] != 0
    if p == "intersects_lc":
        L, (c, r2) = vals
        return _lval(L, c) ** 2 < r2 * (L[0] ** 2 + L[1] ** 2)
    if p == "intersects_cc":
        (c1, r1), (c2, r2) = vals
        if c1 == c2:
            return False
        s = _d2(c1, c2) - r1 - r2
        return s * s < 4 * r1 * r2
    if p == "eq_point":
        return vals[0] == vals[1]
    if p == "eq_line":
        L, M = vals
        return (L[0] * M[1] == L[1] * M[0] and L[0] * M[2] == L[2] * M[0]
                and L[1] * M[2] == L[2] * M[1])
    if p == "eq_circle":
        return vals[0] == vals[1]
    raise EError(f"unknown predicate '{p}'")


METRIC_TOLERANCE = 1e-9


def _mag_value(mag, m: Model) -> float:
    if mag.kind == "right_angle":
        return 1.0
    pts = [tuple(float(c) for c in m.points[p.name]) for p in mag.points]
    if mag.kind == "seg":
        return math.dist(pts[0], pts[1])
    if mag.kind == "area":
        (ax, ay), (bx, by), (cx, cy) = (m.points[p.name] for p in mag.points)
        return float(abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))) / 2
    # exact cross and dot products; atan2 stays accurate near 0 and 2 right angles
    a, b, c = (m.points[p.name] for p in mag.points)
    u = (a[0] - b[0], a[1] - b[1])
    v = (c[0] - b[0], c[1] - b[1])
    if u == (0, 0) or v == (0, 0):
        return 0.0
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    # angles are measured in right angles
    return 2 * math.atan2(abs(float(cross)), float(dot)) / math.pi


def term_value(t, m: Model) -> float:
    return sum(_mag_value(s, m) for s in t.summands)


def literal_value(l: Literal, m: Model) -> bool:
    if l.is_falsity:
        return False
    a = l.atom
    if isinstance(a, MetricAtom):
        x, y = term_value(a.lhs, m), term_value(a.rhs, m)
        tol = METRIC_TOLERANCE * max(1.0, abs(x), abs(y))
        v = abs(x - y) <= tol if a.rel == "eq" else x < y - tol
        return v == l.positive
    return atom_value(a, m) == l.positive


def model_eval(literals, m: Model) -> bool:
    """Every literal holds in the cartesian model m.

    Diagram literals are evaluated exactly; metric ones in floating point
    with a relative tolerance, since lengths and angles are irrational in general.
    """
    return all(literal_value(l, m) for l in literals)


def true_literals(m: Model) -> list[Literal]:
    """Every ground diagram literal over the model's objects, with its sign in m."""
    objs = m.objects()
    by_sort = {s: [o for o in objs if o.sort == s] for s in _SORTS}
    out = []
    for pred, sig in PREDICATES.items():
        for args in product(*(by_sort[s] for s in sig)):
            a = DiagramAtom(pred, args)
            out.append(Literal(atom_value(a, m), a))
    return out


def _rand_frac(rng: random.Random):
    return Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))


def random_model(rng: random.Random, n_points=4, n_lines=2, n_circles=1, span=4) -> Model:
    """A random configuration with some forced incidences.

    Points lie on a small integer grid or on the line through two earlier
    points; lines pass through two points; circles are centered at a point
    and pass through another, so incidences and betweenness occur often.
    """
    m = Model()
    pts = []
    for i in range(n_points):
        if len(pts) >= 2 and rng.random() < 0.4:
            p, q = rng.sample(pts, 2)
            t = _rand_frac(rng)
            pt = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
        else:
            pt = (Fraction(rng.randint(0, span)), Fraction(rng.randint(0, span)))
        pts.append(pt)
        m.points[f"p{i}"] = pt
    distinct = sorted(set(pts))
    for i in range(n_lines):
        if len(distinct) >= 2:
            p, q = rng.sample(distinct, 2)
        else:
            p = distinct[0] if distinct else (Fraction(0), Fraction(0))
            q = (p[0] + 1, p[1] + rng.randint(-1, 1))
        m.lines[f"L{i}"] = _line_through(p, q)
    for i in range(n_circles):
        c = rng.choice(pts) if pts else (Fraction(0), Fraction(0))
        others = [p for p in distinct if p != c]
        r2 = _d2(c, rng.choice(others)) if others else Fraction(rng.randint(1, 4))
        m.circles[f"C{i}"] = (c, r2)
    return m


def random_instance(rng: random.Random, n_points=4, n_lines=2, n_circles=1, keep=0.3, span=4):
    """(objects, gamma, model): gamma is a random subset of the literals true in the model."""
    m = random_model(rng, n_points, n_lines, n_circles, span)
    gamma = [l for l in true_literals(m) if rng.random() < keep]
    return m.objects(), gamma, m


def truth_tables(m: Model) -> dict:
    """pred -> numpy boolean array over object indices (points, lines, circles in model order)."""
    objs = m.objects()
    by_sort = {s: [o for o in objs if o.sort == s] for s in _SORTS}
    out = {}
    for pred, sig in PREDICATES.items():
        dims = [len(by_sort[s]) for s in sig]
        arr = np.zeros(dims, dtype=bool)
        for idx in product(*(range(d) for d in dims)):
            args = tuple(by_sort[s][i] for s, i in zip(sig, idx))
            arr[idx] = atom_value(DiagramAtom(pred, args), m)
        out[pred] = arr
    return out


def clause_violations(clause, tables: dict, counts: dict) -> int:
    """Number of ground instances of a schematic clause false under the truth tables.

    `counts` maps each sort to its number of objects.
    """
    vars_: list[ObjectVar] = []
    for l in clause.literals:
        for v in l.atom.args:
            if v not in vars_:
                vars_.append(v)
    dims = [counts[v.sort] for v in vars_]
    if 0 in dims:
        return 0
    mesh = np.ix_(*[np.arange(d) for d in dims]) if dims else ()
    holds = np.zeros(dims, dtype=bool)
    for l in clause.literals:
        arr = tables[l.atom.pred][tuple(mesh[vars_.index(v)] for v in l.atom.args)]
        holds = holds | (arr if l.positive else ~arr)
    return int((~holds).sum())


# -- independent linear arithmetic -----------------------------------------------------------

def fm_oracle(eqs, ineqs) -> bool:
    """Feasibility by plain Fourier-Motzkin, eliminating the largest variable first.

    Equalities are split into two non-strict inequalities; no Gaussian step,
    no redundancy removal beyond exact duplicates.
    """
    cons = []
    for c, k in eqs:
        cons.append((dict(c), Fraction(k), False))
        cons.append(({v: -x for v, x in c.items()}, -Fraction(k), False))
    for c, k, s in ineqs:
        cons.append((dict(c), Fraction(k), s))
    while True:
        live = {v for c, _, _ in cons for v, x in c.items() if x}
        for c, k, s in cons:
            if not any(c.values()) and (k > 0 or (k == 0 and s)):
                return False
        if not live:
            return True
        var = max(live)
        pos, negs, rest = [], [], []
        for c, k, s in cons:
            x = c.get(var, 0)
            if x > 0:
                pos.append((c, k, s, x))
            elif x < 0:
                negs.append((c, k, s, x))
            elif any(c.values()):
                rest.append((c, k, s))
        seen = set()
        new = []
        for c, k, s in rest:
            key = (tuple(sorted((v, x) for v, x in c.items() if x)), k, s)
            if key not in seen:
                seen.add(key)
                new.append((c, k, s))
        for cp, kp, sp, xp in pos:
            for cn, kn, sn, xn in negs:
                comb = {}
                for v in set(cp) | set(cn):
                    if v == var:
                        continue
                    y = cp.get(v, 0) * -xn + cn.get(v, 0) * xp
                    if y:
                        comb[v] = y
                kk = kp * -xn + kn * xp
                if not comb:
                    if kk > 0 or (kk == 0 and (sp or sn)):
                        return False
                    continue
                key = (tuple(sorted(comb.items())), kk, sp or sn)
                if key not in seen:
                    seen.add(key)
                    new.append((comb, kk, sp or sn))
        cons = new
