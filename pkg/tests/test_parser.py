from pathlib import Path

import pytest

from echeck.core import EError, lit, on, point, line
from echeck.parser import (Apply, Cases, Construct, Have, ParseError, QED, Suppose, format_script,
                           parse, parse_literal, render_diagnostic, scan_imports)

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

SMALL = """\
theorem T:
  point a, b
  line L
  assume on(a,L), a != b
  exists point c
  conclude between(a,b,c)
proof
  let c = point_extending(L, a, b)   -- a trailing comment
  have between(a,b,c)
  qed
"""


def test_parse_small_theorem():
    script = parse(SMALL)
    (th,) = script.theorems
    st = th.statement
    a, b, c, L = point("a"), point("b"), point("c"), line("L")
    assert st.universals == (a, b, L)
    assert st.existentials == (c,)
    assert st.hypotheses[0] == on(a, L)
    assert st.conclusions == (lit("between", a, b, c),)
    kinds = [type(s) for s in th.body]
    assert kinds == [Construct, Have, QED]
    assert th.body[0].line == 8 and th.body[1].line == 9


def test_commas_optional_and_contradiction_ends_a_step():
    text = """\
theorem U:
  point a, b
  assume a != b
  conclude a != b
proof
  suppose a = b {
    hence a = b
    contradiction
  }
  qed
"""
    (th,) = parse(text).theorems
    sup = th.body[0]
    assert isinstance(sup, Suppose)
    assert len(sup.body) == 2
    assert sup.body[1].literal.is_falsity


def test_case_split_and_apply():
    text = """\
theorem A:
  point a, b
  assume a != b
  conclude b != a
assumed

theorem B:
  point a, b
  assume a != b
  conclude b != a
proof
  case on(a,a) {
    hence b != a
  } else {
    hence b != a
  }
  qed
"""
    with pytest.raises(ParseError):
        parse(text)
    text = text.replace("on(a,a)", "a = b").replace("else {\n    hence b != a",
                                                       "else {\n    by A applied to a, b have b != a")
    script = parse(text)
    assert script.theorems[0].assumed
    cs = script.theorems[1].body[0]
    assert isinstance(cs, Cases)
    assert isinstance(cs.otherwise[0], Apply)
    assert cs.otherwise[0].selected is not None


@pytest.mark.parametrize("text,line,col,msg", [
    ("theorem X:\n  point a\n  conclude on(a,\nproof\n qed\n", 4, 1, "expected an object name"),
    ("theorem X:\n point a\n line L\n conclude on(L,a)\nassumed\n", 4, 11, "expects a line or circle"),
    ("theorem Y:\n point a\n conclude a = b\nassumed\n", 3, 15, "unknown object 'b'"),
])
def test_errors_carry_positions(text, line, col, msg):
    with pytest.raises(ParseError) as ei:
        parse(text, "x.e")
    e = ei.value
    assert (e.line, e.col) == (line, col)
    assert msg in e.message
    assert render_diagnostic(e).startswith(f"x.e:{line}:{col}: ")


def test_render_diagnostic_without_position():
    assert render_diagnostic(EError("boom"), "f.e") == "f.e: boom"


def test_parse_literal_and_defined_predicates():
    objs = [point("a"), point("b"), line("L")]
    out = parse_literal("diff_side(a,b,L)", objs)
    assert len(out) == 3 and all(not l.positive for l in out)
    (m,) = parse_literal("seg(a,b) + seg(b,a) < seg(a,a)", objs)
    assert m.is_metric


def test_scan_imports():
    assert scan_imports((CORPUS / "book1.e").read_text()) == ["assumed.e"]


@pytest.mark.parametrize("name", ["assumed.e", "book1.e"])
def test_format_round_trip(name, assumed_library):
    text = (CORPUS / name).read_text()
    env = None if name == "assumed.e" else assumed_library.statements()
    s1 = parse(text, name, env=env)
    printed = format_script(s1)
    s2 = parse(printed, name, env=env)
    assert s2 == s1
    assert format_script(s2) == printed


def test_state_block():
    s = parse((Path(__file__).parent / "data" / "chain.e").read_text())
    (st,) = s.states
    assert len(st.objects) == 6 and len(st.literals) == 5
