"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

Run under pytest (the lines appear in the terminal summary) or directly with
`python tests/test_acceptance.py`.
"""
import random
import statistics
import sys
import time
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from echeck.core import CIRCLE, LINE, POINT, ObjectVar, eq, free_vars, metric, seg
from echeck.diagram import DiagramState, rule_catalog, saturate_propositional
from echeck.engine import begin, check_theorem, step_have
from echeck.library import ASSUMED, PROVED, Loader
from echeck.metric import MetricContext, fm_feasible
from echeck.oracle import (GroundTheory, classical_entails, clause_violations, fm_oracle,
                           full_decide, literal_value, random_instance, random_model, restrict,
                           truth_tables)
from echeck.parser import parse, parse_literal

sys.path.insert(0, str(Path(__file__).resolve().parent))
import mutants  # noqa: E402

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
BOOK1 = {"I.1", "Aux-I.1a", "Aux-I.1b", "I.2", "I.10", "I.12", "TP1", "TP2"}
ASSUMED_NAMES = {"I.3", "I.4", "I.8", "I.9", "I.15"}


def objs(text: str) -> dict:
    """'a b c : L M : alpha' -> name -> ObjectVar (points, then lines, then circles)."""
    out = {}
    for part, sort in zip(text.split(":"), (POINT, LINE, CIRCLE)):
        for n in part.split():
            out[n] = ObjectVar(n, sort)
    return out


def lits(text: str, env: dict) -> list:
    out = []
    for piece in text.split(";"):
        out.extend(parse_literal(piece.strip(), list(env.values())))
    return out


# -- 1 -------------------------------------------------------------------------------

def test_criterion_1_corpus(criterion):
    t0 = time.perf_counter()
    loader = Loader()
    loader.load(CORPUS / "book1.e")
    elapsed = time.perf_counter() - t0
    verdicts = {v.name: v for vs in loader.verdicts.values() for v in vs}
    bad = [f"{n}: {v.error}" for n, v in verdicts.items() if not v.ok]
    proved = {n for n, v in verdicts.items() if v.status == PROVED}
    assumed = {n for n, v in verdicts.items() if v.status == ASSUMED}
    ok = not bad and proved == BOOK1 and assumed == ASSUMED_NAMES and elapsed < 5
    criterion(ok, f"corpus: {len(proved)} proved, {len(assumed)} assumed, "
                  f"{len(bad)} failed in {elapsed:.2f} s")
    assert not bad, bad
    assert proved == BOOK1 and assumed == ASSUMED_NAMES
    assert elapsed < 5


# -- 2 -------------------------------------------------------------------------------

def _mutation_report(book1, assumed_library):
    """Run the three mutation classes over every corpus proof."""
    rep = {"delete": [], "swap": [], "weaken": []}
    for decl, lib in mutants.libraries(book1, assumed_library):
        name = decl.statement.name
        for line in mutants.have_lines(decl):
            v = check_theorem(mutants.delete_line(decl, line), lib, "book1.e")
            rep["delete"].append((name, line, v))
        for orig, mut, mdecl in mutants.swap_mutants(decl):
            v = check_theorem(mdecl, lib, "book1.e")
            rep["swap"].append((name, orig, mut, v))
        w = mutants.weaken_final(decl)
        if w is not None:
            line, wdecl = w
            v = check_theorem(wdecl, lib, "book1.e")
            redundant = check_theorem(mutants.delete_line(decl, line), lib, "book1.e").ok
            rep["weaken"].append((name, line, v, redundant))
    return rep


class _Reached(Exception):
    pass


def _prerequisites_hold(lib, decl, orig, mut):
    """Whether every prerequisite of the mutated construction holds where the original stood.

    The original proof is replayed up to that construction.
    """
    import echeck.engine as engine
    from echeck import constructions
    seen = {}
    saved = engine.step_construct

    def stop(st, step):
        if step is orig:
            rule, args = constructions.resolve(mut.keyword, mut.args)
            pre, _ = constructions.instantiate(rule, args, mut.outputs, mut.distinct_from)
            seen["ok"] = all(st.holds_direct(p) for p in pre)
            raise _Reached
        return saved(st, step)

    engine.step_construct = stop
    try:
        check_theorem(decl, lib, "book1.e")
    except _Reached:
        pass
    finally:
        engine.step_construct = saved
    return seen.get("ok")


def test_criterion_2_mutations(criterion, book1, assumed_library):
    rep = _mutation_report(book1, assumed_library)
    problems = []

    # (a) deletions: a rejected mutant must fail at a later step with a named kind
    rejected_a = [(n, line, v) for n, line, v in rep["delete"] if not v.ok]
    for n, line, v in rejected_a:
        if not (v.error.step and v.error.line and v.error.line > line):
            problems.append(f"(a) {n} line {line}: diagnostic at {v.error.line} [{v.error.step}]")
    i2 = [v for n, line, v in rep["delete"] if n == "I.2" and not v.ok
          and v.error.step == "construct"]
    if not any("inside(a,beta)" in v.error.message for v in i2):
        problems.append("(a) I.2 without inside(a,beta) did not fail at the construction")
    i1 = [v for n, line, v in rep["delete"] if n == "I.1" and line == 15]
    if not (i1 and not i1[0].ok and i1[0].error.step == "qed"
            and "seg(b,c) = seg(c,a)" in i1[0].error.message):
        problems.append("(a) I.1 without its final hence was not rejected at qed")

    # (b) swaps: a mutant whose own prerequisites fail must be rejected at that construction
    falsified = 0
    rejected_b = 0
    libs = {d.statement.name: (d, l) for d, l in mutants.libraries(book1, assumed_library)}
    for n, orig, mut, v in rep["swap"]:
        decl, lib = libs[n]
        holds = _prerequisites_hold(lib, decl, orig, mut)
        if not v.ok:
            rejected_b += 1
            if not (v.error.step and v.error.line >= orig.line):
                problems.append(f"(b) {n} line {orig.line}: diagnostic at {v.error.line}")
        if holds is False:
            falsified += 1
            if v.ok or v.error.line != orig.line or v.error.step != "construct":
                problems.append(f"(b) {n} line {orig.line}: falsified prerequisite not caught "
                                f"at the construction")
    if not falsified:
        problems.append("(b) no swap falsified a prerequisite")

    # (c) weakened final line: rejected unless the line was not needed at all
    rejected_c = 0
    for n, line, v, redundant in rep["weaken"]:
        if not v.ok:
            rejected_c += 1
            if not v.error.step:
                problems.append(f"(c) {n}: diagnostic names no step")
        elif not redundant:
            problems.append(f"(c) {n}: weakened line {line} accepted although it is needed")

    n_a, n_b, n_c = len(rep["delete"]), len(rep["swap"]), len(rep["weaken"])
    what = (f"mutants: deletions {len(rejected_a)}/{n_a} rejected, swaps {rejected_b}/{n_b} "
            f"rejected ({falsified} falsify their own prerequisites), weakenings "
            f"{rejected_c}/{n_c} rejected; {len(problems)} problem(s)")
    criterion(not problems, what)
    assert not problems, problems


# -- 3 -------------------------------------------------------------------------------

GENERALITY = """
theorem generality:
  point a, b, c, d, e
  line L, M
  assume a != b, on(a,L), on(b,L), on(c,M), on(d,M), not on(c,L), not on(d,L),
         not same_side(c,d,L), on(e,L), on(e,M)
  conclude between(c,e,d)
proof
  qed
"""


def test_criterion_3_generality(criterion):
    decl = parse(GENERALITY).theorems[0]
    st = begin(decl.statement)
    env = {n: o for n, o in st.scope.items()}

    def try_have(text):
        s = st.copy()
        try:
            step_have(s, lits(text, env)[0])
            return True
        except Exception:
            return False

    accepted = try_have("between(c,e,d)")
    pos = try_have("between(a,e,b)")
    negv = try_have("not between(a,e,b)")
    ok = accepted and not pos and not negv
    criterion(ok, f"between(c,e,d) accepted={accepted}; between(a,e,b) accepted={pos}; "
                  f"not between(a,e,b) accepted={negv}")
    assert accepted and not pos and not negv


# -- 4 -------------------------------------------------------------------------------

def test_criterion_4_chain(criterion):
    env = objs("a b c d e : L")
    d = DiagramState(env.values(), lits("on(a,L); on(b,L); between(a,c,b); between(a,d,c); "
                                        "between(c,e,b)", env))
    goal = lits("between(a,d,e)", env)[0]
    ok = d.holds(goal) and not d.inconsistent
    criterion(ok, f"between(a,d,e) in closure of the five-literal chain: {ok}")
    assert ok


# -- 5 -------------------------------------------------------------------------------

def test_criterion_5_direct_vs_classical(criterion):
    clauses = [["~A", "~B", "C"], ["~A", "B", "C"]]
    classical = classical_entails(["A"], clauses, "C")
    closure, _ = saturate_propositional(clauses, ["A"])
    direct = "C" in closure
    ok = classical is True and direct is False
    criterion(ok, f"classical_entails = {str(classical).lower()}, saturation = "
                  f"{str(direct).lower()}")
    assert classical is True
    assert direct is False


# -- 6 -------------------------------------------------------------------------------

def test_criterion_6_oracle_sweep(criterion):
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    n_inst = n_facts = extra = violations = 0
    for _ in range(1000):
        objects, gamma, model = random_instance(
            rng, rng.randint(2, 6), rng.randint(1, 3), rng.randint(0, 2),
            keep=rng.choice([0.05, 0.15, 0.3]))
        d = DiagramState(objects, gamma)
        theory = GroundTheory(objects)
        closure, conflict = theory.unit_closure(gamma)
        if d.inconsistent or conflict:
            violations += 1
            continue
        for f in d.facts:
            if f not in closure:
                extra += 1
                if not theory.entails(gamma, f):
                    violations += 1
            if not literal_value(f, model):
                violations += 1
        n_inst += 1
        n_facts += len(d.facts)
    # every rule instance under random coordinate models
    clause_bad = 0
    catalog = rule_catalog()
    n_models = 0
    for _ in range(1000):
        m = random_model(rng, rng.randint(2, 6), rng.randint(1, 3), rng.randint(0, 2))
        tables = truth_tables(m)
        counts = {POINT: len(m.points), LINE: len(m.lines), CIRCLE: len(m.circles)}
        clause_bad += sum(clause_violations(rc, tables, counts) for rc in catalog)
        n_models += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and clause_bad == 0 and n_inst >= 1000 and elapsed < 120
    criterion(ok, f"{n_inst} instances, {n_facts} derived literals, {violations} not entailed; "
                  f"{len(catalog)} rules x {n_models} models, {clause_bad} violated instances; "
                  f"{elapsed:.1f} s")
    assert violations == 0 and clause_bad == 0
    assert elapsed < 120


# -- 7 -------------------------------------------------------------------------------

def test_criterion_7_scaling(criterion):
    # the coordinate grid grows with the point count so that the share of
    # coincident points stays roughly fixed across sizes
    sizes = [(3 * k, k, max(1, k // 2)) for k in (2, 3, 4, 5, 6, 8, 10)]
    curve = []
    largest = []
    for p, l, c in sizes:
        times = []
        for seed in range(3):
            rng = random.Random(7919 * p + seed)
            objects, gamma, _ = random_instance(rng, p, l, c, keep=0.05, span=max(4, p // 3))
            t0 = time.perf_counter()
            DiagramState(objects, gamma).saturate()
            times.append(time.perf_counter() - t0)
        curve.append((p + l + c, statistics.median(times)))
        if (p, l, c) == (30, 10, 5):
            largest = times
    x = np.log([n for n, _ in curve])
    y = np.log([t for _, t in curve])
    slope = float(np.polyfit(x, y, 1)[0])
    ok = max(largest) < 10 and slope < 4
    criterion(ok, f"30/10/5 closure in {max(largest):.2f} s (worst of 3); fit exponent "
                  f"{slope:.2f} over {len(curve)} sizes")
    assert max(largest) < 10
    assert slope < 4


# -- 8 -------------------------------------------------------------------------------

def _ctx(text, env, point_eqs=(), point_neqs=()):
    m = MetricContext()
    for l in lits(text, env):
        m.add(l)
    for x, y in point_eqs:
        m.add_point_eq(env[x], env[y])
    for x, y in point_neqs:
        m.add_point_neq(env[x], env[y])
    return m


def _random_system(rng, nvars=3, ncons=4):
    eqs, ineqs = [], []
    for _ in range(ncons):
        coeffs = {f"x{i}": rng.randint(-3, 3) for i in range(nvars) if rng.random() < 0.7}
        coeffs = {v: c for v, c in coeffs.items() if c}
        const = rng.randint(-4, 4)
        if rng.random() < 0.2:
            eqs.append((coeffs, const))
        else:
            ineqs.append((coeffs, const, rng.random() < 0.5))
    return eqs, ineqs


_PAIRS = list(combinations("abcd", 2))


def _random_seg_literals(rng, n):
    env = objs("a b c d")
    out = []
    for _ in range(n):
        lhs = [seg(env[x], env[y]) for x, y in rng.sample(_PAIRS, rng.randint(1, 2))]
        rhs = [seg(env[x], env[y]) for x, y in rng.sample(_PAIRS, rng.randint(1, 2))]
        lt, rt = lhs[0], rhs[0]
        for t in lhs[1:]:
            lt = lt + t
        for t in rhs[1:]:
            rt = rt + t
        rel = rng.choice(["eq", "lt"])
        out.append(metric(rel, lt, rt, positive=rel == "eq" or rng.random() < 0.7))
    return env, out


def _translate(l):
    """(coeffs, const) of lhs - rhs over one unknown per unordered point pair."""
    c = {}
    for side, sign in ((l.atom.lhs, 1), (l.atom.rhs, -1)):
        for s in side.summands:
            v = "".join(sorted(p.name for p in s.points))
            c[v] = c.get(v, 0) + sign
    return {v: x for v, x in c.items() if x}, 0


def _oracle_feasible(facts, extra=()):
    eqs = []
    ineqs = [({"".join(p): -1}, 0, True) for p in _PAIRS]  # distinct points: positive lengths
    for l in list(facts) + list(extra):
        c, k = _translate(l)
        if l.atom.rel == "eq":
            eqs.append((c, k))
        elif l.positive:
            ineqs.append((c, k, True))
        else:
            ineqs.append(({v: -x for v, x in c.items()}, -k, False))
    return fm_oracle(eqs, ineqs)


def _oracle_entails(facts, goal):
    from echeck.core import negate
    if not _oracle_feasible(facts):
        return True
    if goal.atom.rel == "eq" and goal.positive:
        a = goal.atom
        return (not _oracle_feasible(facts, [metric("lt", a.lhs, a.rhs)])
                and not _oracle_feasible(facts, [metric("lt", a.rhs, a.lhs)]))
    return not _oracle_feasible(facts, [negate(goal)])


def test_criterion_8_metric(criterion):
    e = objs("a b c d f g")
    checks = {}
    checks["cancellation"] = _ctx("seg(a,b) + seg(c,d) = seg(a,b) + seg(f,g)", e).entails(
        lits("seg(c,d) = seg(f,g)", e)[0])
    checks["whole > part"] = _ctx("seg(a,c) = seg(a,b) + seg(b,c)", e,
                                  point_neqs=[("b", "c")]).entails(lits("seg(a,b) < seg(a,c)", e)[0])
    checks["symmetry"] = all(MetricContext().entails(l) for l in lits(
        "seg(a,b) = seg(b,a); angle(a,b,c) = angle(c,b,a); area(a,b,c) = area(c,a,b); "
        "area(a,b,c) = area(b,a,c)", e))
    base = _ctx("seg(a,b) + seg(c,d) < seg(f,g)", e)
    checks["AC normalization"] = base.entails(lits("seg(d,c) + seg(b,a) < seg(g,f)", e)[0])
    aux = _ctx("seg(a,b) = seg(b,c); seg(b,c) = seg(c,a)", e, point_eqs=[("c", "a")])
    checks["Aux-I.1"] = aux.entails(eq(e["a"], e["b"]))

    rng = random.Random(8)
    agree_fm = 0
    for _ in range(500):
        eqs, ineqs = _random_system(rng, rng.randint(1, 4), rng.randint(1, 6))
        agree_fm += fm_feasible(eqs, ineqs) == fm_oracle(eqs, ineqs)
    agree_ent = 0
    n_ent = 0
    for _ in range(500):
        env, ls = _random_seg_literals(rng, rng.randint(1, 4))
        facts, goal = ls[:-1], ls[-1]
        ctx = MetricContext()
        for x, y in _PAIRS:
            ctx.add_point_neq(env[x], env[y])
        for l in facts:
            ctx.add(l)
        n_ent += 1
        agree_ent += ctx.entails(goal) == _oracle_entails(facts, goal)
    ok = all(checks.values()) and agree_fm == 500 and agree_ent == n_ent
    failed = [k for k, v in checks.items() if not v]
    criterion(ok, f"entailment checks {len(checks) - len(failed)}/{len(checks)} "
                  f"{'(failed: ' + ', '.join(failed) + ')' if failed else ''}"
                  f"; oracle agreement: feasibility {agree_fm}/500, entailment "
                  f"{agree_ent}/{n_ent}")
    assert not failed, failed
    assert agree_fm == 500 and agree_ent == n_ent


# -- 9 -------------------------------------------------------------------------------

def test_criterion_9_full_decide(criterion, book1_loader):
    e = objs("a b c")
    example = full_decide(lits("between(a,b,c); seg(a,c) < seg(a,b)", e))
    results = {}
    for entry in book1_loader.library.entries():
        hyps = list(entry.statement.hypotheses)
        objects = sorted(set().union(*(free_vars(h) for h in hyps)) if hyps else set(),
                         key=ObjectVar.key)
        verdicts = {full_decide(restrict(hyps, sub))
                    for sub in combinations(objects, min(5, len(objects)))}
        results[entry.name] = verdicts
    inconsistent = [n for n, v in results.items() if v != {"consistent"}]
    ok = example == "inconsistent" and not inconsistent
    criterion(ok, f"example: {example}; {len(results) - len(inconsistent)}/{len(results)} "
                  f"hypothesis sets consistent on every 5-object restriction")
    assert example == "inconsistent"
    assert not inconsistent, inconsistent


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
