"""Proof-script language: tokenizer, recursive-descent parser, pretty-printer.

A script is a sequence of `import` lines, `theorem` blocks and (for the
closure/decide/explain tools) `state` blocks:

    import "assumed.e"

    theorem I.1:
      point a, b
      assume a != b
      exists point c
      conclude seg(a,b) = seg(b,c), seg(b,c) = seg(c,a)
    proof
      let alpha = circle(a, b)
      ...
      qef
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import constructions
from .core import (CIRCLE, FALSITY, LINE, POINT, EError, Literal, Mag, MagnitudeTerm, ObjectVar,
                   PREDICATES, RIGHT_ANGLE, Sort, SortError, TheoremStatement, eq, expand_defined,
                   intersects, lit, metric, negate, on)


class ParseError(EError):
    pass


# -- syntax tree -------------------------------------------------------------------------

@dataclass(frozen=True)
class Construct:
    keyword: str
    outputs: tuple[ObjectVar, ...]
    args: tuple[ObjectVar, ...]
    distinct_from: tuple[ObjectVar, ...] = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def rule_id(self) -> str:
        return constructions.resolve(self.keyword, self.args)[0].id


@dataclass(frozen=True)
class Have:
    literal: Literal
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)
    keyword: str = field(default="have", compare=False)


@dataclass(frozen=True)
class Apply:
    theorem: str
    args: tuple[ObjectVar, ...]
    outputs: tuple[ObjectVar, ...] = ()
    selected: tuple[Literal, ...] | None = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Suppose:
    assumption: Literal
    body: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Cases:
    assumption: Literal
    then: tuple
    otherwise: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Superpose:
    kind: str  # "sas" or "sss"
    args: tuple[ObjectVar, ...]  # a, b, c, d, g, L, h
    primes: tuple[ObjectVar, ...]  # a', b', c'
    body: tuple
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class QED:
    mode: str  # "qed" or "qef"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TheoremDecl:
    statement: TheoremStatement
    body: tuple | None  # None marks an assumed theorem
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def assumed(self) -> bool:
        return self.body is None


@dataclass(frozen=True)
class StateDecl:
    objects: tuple[ObjectVar, ...]
    literals: tuple[Literal, ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ProofScript:
    imports: tuple[str, ...] = ()
    theorems: tuple[TheoremDecl, ...] = ()
    states: tuple[StateDecl, ...] = ()
    filename: str = field(default="<string>", compare=False)


# -- tokens ------------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<string>"[^"\n]*")
  | (?P<num>\d+)
  | (?P<name>[^\W\d][\w']*(?:[.\-][\w']+)*)
  | (?P<op>!=|<=|[=<+(){},:])
""", re.VERBOSE)

KEYWORDS = {"theorem", "assume", "exists", "conclude", "proof", "let", "have", "hence",
            "suppose", "case", "else", "by", "applied", "to", "superpose-sas", "superpose-sss",
            "as", "contradiction", "qed", "qef", "assumed", "import", "state", "not",
            "distinct_from", "note", "point", "line", "circle"}
# words that start a new step or section and so end a literal list
_STOPS = KEYWORDS - {"not", "contradiction", "point", "line", "circle", "as", "to", "applied"}
_SORTS = {"point": POINT, "line": LINE, "circle": CIRCLE}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, filename: str = "<string>") -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                             filename)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# -- parser ------------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, filename: str, env):
        self.toks = tokenize(text, filename)
        self.i = 0
        self.filename = filename
        # known theorem statements, for the sorts of objects introduced by `by`
        self.env: dict[str, TheoremStatement] = dict(env or {})
        self.scope: dict[str, ObjectVar] = {}
        self.later: dict[str, TheoremStatement] = {}

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        t = tok or self.tok
        return ParseError(msg, t.line, t.col, self.filename)

    def at(self, *texts) -> bool:
        return self.tok.kind in ("name", "op", "num") and self.tok.text in texts

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected '{text}', found '{found}'")
        return self.next()

    def ident(self, what="a name") -> Token:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            found = t.text or "end of input"
            raise self.error(f"expected {what}, found '{found}'")
        return self.next()

    def obj(self, sort: Sort | None = None) -> ObjectVar:
        t = self.ident("an object name")
        o = self.scope.get(t.text)
        if o is None:
            raise self.error(f"unknown object '{t.text}'", t)
        if sort is not None and o.sort != sort:
            raise self.error(f"'{t.text}' is a {o.sort.value}, expected a {sort.value}", t)
        return o

    def objs(self) -> list[ObjectVar]:
        out = [self.obj()]
        while self.at(","):
            self.next()
            out.append(self.obj())
        return out

    # top level
    def script(self) -> ProofScript:
        imports, theorems, states, names = [], [], [], set()
        while self.tok.kind != "eof":
            if self.at("import"):
                self.next()
                t = self.tok
                if t.kind == "string":
                    imports.append(t.text[1:-1])
                elif t.kind == "name":
                    imports.append(t.text)
                else:
                    raise self.error("expected a file name after 'import'")
                self.next()
            elif self.at("theorem"):
                start = self.tok
                th = self.theorem()
                if th.statement.name in names:
                    raise self.error(f"duplicate theorem name '{th.statement.name}'", start)
                names.add(th.statement.name)
                self.env[th.statement.name] = th.statement
                theorems.append(th)
            elif self.at("state"):
                states.append(self.state())
            else:
                raise self.error(f"expected 'theorem', 'import' or 'state', found '{self.tok.text}'")
        return ProofScript(tuple(imports), tuple(theorems), tuple(states), self.filename)

    def decls(self, into: list, fresh=True):
        """`point a, b` / `line L` / `circle alpha` groups."""
        while self.at("point", "line", "circle") and self.peek().kind == "name" \
                and self.peek().text not in KEYWORDS:
            sort = _SORTS[self.next().text]
            while True:
                t = self.ident("an object name")
                if t.text in self.scope:
                    raise self.error(f"'{t.text}' is already declared", t)
                o = ObjectVar(t.text, sort)
                self.scope[t.text] = o
                into.append(o)
                if not self.at(","):
                    break
                self.next()

    def theorem(self) -> TheoremDecl:
        start = self.tok
        st = self.statement()
        if self.at("assumed"):
            self.next()
            return TheoremDecl(st, None, start.line, start.col)
        self.expect("proof")
        # the proof starts with only the universals in scope
        self.scope = {o.name: o for o in st.universals}
        body = self.steps(top=True)
        return TheoremDecl(st, tuple(body), start.line, start.col)

    def statement(self) -> TheoremStatement:
        start = self.expect("theorem")
        name = self.ident("a theorem name").text
        self.expect(":")
        self.scope = {}
        universals, existentials = [], []
        hyps, concls = [], []
        note = ""
        self.decls(universals)
        if self.at("assume"):
            self.next()
            hyps = self.literals()
        if self.at("exists"):
            self.next()
            if not self.at("point", "line", "circle"):
                raise self.error("expected a sort keyword after 'exists'")
            self.decls(existentials)
        if self.at("conclude"):
            self.next()
            concls = self.literals(allow_falsity=True)
        if self.at("note"):
            self.next()
            t = self.tok
            if t.kind != "string":
                raise self.error("expected a quoted note")
            note = t.text[1:-1]
            self.next()
        try:
            st = TheoremStatement(name, tuple(universals), tuple(hyps), tuple(existentials),
                                  tuple(concls), note)
        except EError as e:
            raise ParseError(e.message, start.line, start.col, self.filename) from None
        return st

    def prescan(self):
        """Statements of every theorem in the file, so that forward references
        parse and are reported by the checker instead."""
        for j, t in enumerate(self.toks):
            if t.kind == "name" and t.text == "theorem":
                self.i = j
                try:
                    st = self.statement()
                except EError:
                    continue
                self.later.setdefault(st.name, st)
        self.i = 0
        self.scope = {}

    def state(self) -> StateDecl:
        start = self.expect("state")
        self.expect("{")
        self.scope = {}
        objs, lits = [], []
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated state block")
            if self.at("point", "line", "circle"):
                self.decls(objs)
            else:
                lits.extend(self.literals(allow_falsity=False, stop_at_brace=True))
        self.next()
        return StateDecl(tuple(objs), tuple(lits), start.line, start.col)

    # steps
    def steps(self, top=False) -> list:
        out = []
        while True:
            t = self.tok
            if top and t.kind == "eof":
                raise self.error("proof does not end with 'qed' or 'qef'")
            if not top and self.at("}"):
                return out
            if not top and t.kind == "eof":
                raise self.error("missing '}'")
            step = self.step()
            out.extend(step)
            if top and isinstance(out[-1], QED):
                return out

    def step(self) -> list:
        t = self.tok
        if self.at("qed", "qef"):
            self.next()
            return [QED(t.text, t.line, t.col)]
        if self.at("contradiction"):
            self.next()
            return [Have(FALSITY, t.line, t.col, "contradiction")]
        if self.at("have", "hence"):
            kw = self.next().text
            return [Have(l, t.line, t.col, kw) for l in self.literals(allow_falsity=True)]
        if self.at("let"):
            return [self.construct()]
        if self.at("by"):
            return [self.apply()]
        if self.at("suppose"):
            self.next()
            a = self.single_literal()
            saved = dict(self.scope)
            body = self.block()
            self.scope = saved
            return [Suppose(a, tuple(body), t.line, t.col)]
        if self.at("case"):
            self.next()
            a = self.single_literal()
            saved = dict(self.scope)
            b1 = self.block()
            s1 = self.scope
            self.scope = dict(saved)
            self.expect("else")
            b2 = self.block()
            s2 = self.scope
            # names introduced in both branches with the same sort stay visible
            self.scope = dict(saved)
            for n, o in s1.items():
                if n not in saved and s2.get(n) == o:
                    self.scope[n] = o
            return [Cases(a, tuple(b1), tuple(b2), t.line, t.col)]
        if self.at("superpose-sas", "superpose-sss"):
            kind = self.next().text[-3:]
            args = self.objs()
            if [o.sort for o in args] != [POINT] * 5 + [LINE, POINT]:
                raise self.error(f"superpose-{kind} expects points a, b, c, d, g, a line L and "
                                 f"a point h", t)
            self.expect("as")
            saved = dict(self.scope)
            primes = []
            for k in range(3):
                if k:
                    self.expect(",")
                n = self.ident("a fresh point name")
                primes.append(ObjectVar(n.text, POINT))
                self.scope[n.text] = primes[-1]
            body = self.block()
            self.scope = saved
            return [Superpose(kind, tuple(args), tuple(primes), tuple(body), t.line, t.col)]
        found = t.text or "end of input"
        raise self.error(f"expected a proof step, found '{found}'")

    def block(self) -> list:
        self.expect("{")
        body = self.steps()
        self.expect("}")
        return body

    def construct(self) -> Construct:
        start = self.expect("let")
        names = [self.ident("a fresh name")]
        while self.at(","):
            self.next()
            names.append(self.ident("a fresh name"))
        self.expect("=")
        kt = self.tok
        if kt.kind != "name":
            raise self.error("expected a construction")
        kw = self.next().text
        if kw not in constructions.KEYWORDS:
            raise self.error(f"unknown construction '{kw}'", kt)
        self.expect("(")
        args = [] if self.at(")") else self.objs()
        self.expect(")")
        try:
            rule, _ = constructions.resolve(kw, args)
        except EError as e:
            raise self.error(e.message, kt) from None
        if len(names) != len(rule.outputs):
            raise self.error(f"construction '{kw}' introduces {len(rule.outputs)} object(s), "
                             f"got {len(names)} name(s)", start)
        outs = tuple(ObjectVar(n.text, v.sort) for n, v in zip(names, rule.outputs))
        distinct = []
        if self.at("distinct_from"):
            self.next()
            distinct = self.objs()
        for o in outs:
            self.scope[o.name] = o
        return Construct(kw, outs, tuple(args), tuple(distinct), start.line, start.col)

    def apply(self) -> Apply:
        start = self.expect("by")
        name = self.ident("a theorem name").text
        self.expect("applied")
        self.expect("to")
        args = self.objs()
        outs = []
        if self.at("let"):
            self.next()
            st = self.env.get(name) or self.later.get(name)
            k = 0
            while True:
                sort = None
                if self.at("point", "line", "circle") and self.peek().kind == "name":
                    sort = _SORTS[self.next().text]
                nt = self.ident("a fresh name")
                if sort is None:
                    if st is None or k >= len(st.existentials):
                        raise self.error(f"cannot tell the sort of '{nt.text}': theorem '{name}' "
                                         f"is not known here; write e.g. 'let point {nt.text}'", nt)
                    sort = st.existentials[k].sort
                outs.append(ObjectVar(nt.text, sort))
                k += 1
                if not self.at(","):
                    break
                self.next()
        selected = None
        if self.at("have") and self.tok.line == self.toks[self.i - 1].line:
            self.next()
            for o in outs:
                self.scope[o.name] = o
            selected = tuple(self.literals(allow_falsity=True))
        for o in outs:
            self.scope[o.name] = o
        return Apply(name, tuple(args), tuple(outs), selected, start.line, start.col)

    # literals
    def single_literal(self) -> Literal:
        t = self.tok
        lits = self.literal()
        if len(lits) != 1:
            raise self.error("a single literal is needed here, not a defined predicate", t)
        return lits[0]

    def literals(self, allow_falsity=False, stop_at_brace=False) -> list[Literal]:
        out = []
        while True:
            if self.at("contradiction"):
                t = self.next()
                if not allow_falsity:
                    raise self.error("'contradiction' is not allowed here", t)
                out.append(FALSITY)
            else:
                out.extend(self.literal())
            if self.at(","):
                self.next()
                continue
            # commas between literals are optional; a bare 'contradiction' starts its own step
            t = self.tok
            if t.kind == "eof" or self.at("}", "{", "contradiction") or \
                    (t.kind == "name" and t.text in _STOPS):
                return out
            if stop_at_brace and self.at("point", "line", "circle"):
                return out

    def literal(self) -> list[Literal]:
        positive = True
        if self.at("not"):
            self.next()
            positive = False
        t = self.tok
        if t.kind == "name" and self.peek().text == "(" and t.text not in ("seg", "angle", "area"):
            self.next()
            self.expect("(")
            args = [] if self.at(")") else self.objs()
            self.expect(")")
            return self.predicate(t, args, positive)
        lhs = self.operand()
        rt = self.tok
        if not self.at("=", "!=", "<", "<="):
            found = rt.text or "end of input"
            raise self.error(f"expected '=', '!=', '<' or '<=', found '{found}'")
        rel = self.next().text
        rhs = self.operand()
        if isinstance(lhs, ObjectVar) != isinstance(rhs, ObjectVar):
            raise self.error("cannot compare an object with a magnitude", rt)
        try:
            if not isinstance(lhs, ObjectVar):
                lhs, rhs = _resolve_zero(lhs, rhs)
            if isinstance(lhs, ObjectVar):
                if rel not in ("=", "!="):
                    raise self.error(f"'{rel}' compares magnitudes, not objects", rt)
                res = eq(lhs, rhs, positive=(rel == "="))
            elif rel in ("=", "!="):
                res = metric("eq", lhs, rhs, positive=(rel == "="))
            elif rel == "<":
                res = metric("lt", lhs, rhs)
            else:
                res = expand_defined("leq", (lhs, rhs))[0]
        except SortError as e:
            raise self.error(e.message, rt) from None
        return [res if positive else negate(res)]

    def predicate(self, t: Token, args, positive) -> list[Literal]:
        name = t.text
        try:
            if name in ("diff_side", "outside", "triangle"):
                if not positive:
                    raise self.error(f"cannot negate the defined predicate '{name}'", t)
                return self.defined(t, args)
            if name == "on":
                self._arity(t, name, args, 2, "point, line or circle")
                return [on(args[0], args[1], positive)]
            if name == "intersects":
                self._arity(t, name, args, 2, "line or circle")
                return [intersects(args[0], args[1], positive)]
            if name in PREDICATES and not name.startswith(("eq_", "intersects_", "on_")):
                sig = PREDICATES[name]
                kinds = {s.value for s in sig}
                what = f"{sig[0].value}" if len(kinds) == 1 else "object"
                self._arity(t, name, args, len(sig), what)
                return [lit(name, *args, positive=positive)]
        except SortError as e:
            raise self.error(e.message, t) from None
        raise self.error(f"unknown predicate '{name}'", t)

    def _arity(self, t, name, args, n, what):
        if len(args) != n:
            raise self.error(f"'{name}' expects {n} {what} arguments, got {len(args)}", t)

    def defined(self, t, args) -> list[Literal]:
        name = t.text
        if name == "triangle":
            self._arity(t, name, args, 6, "object")
            a, b, c, L, M, N = args
            if [o.sort for o in args] != [POINT] * 3 + [LINE] * 3:
                raise self.error("'triangle' expects three points and three lines", t)
            return [on(a, L), on(b, L), on(b, M), on(c, M), on(c, N), on(a, N),
                    on(c, L, False), on(a, M, False), on(b, N, False)]
        n = 3 if name == "diff_side" else 2
        self._arity(t, name, args, n, "object")
        sig = (POINT, POINT, LINE) if name == "diff_side" else (POINT, CIRCLE)
        if tuple(o.sort for o in args) != sig:
            raise self.error(f"'{name}' expects ({', '.join(s.value for s in sig)})", t)
        return expand_defined(name, args)

    def operand(self):
        """An object name or a magnitude term."""
        t = self.tok
        if t.kind == "name" and t.text not in ("seg", "angle", "area", "right_angle") \
                and self.peek().text != "(":
            return self.obj()
        summands = [self.summand()]
        while self.at("+"):
            self.next()
            summands.append(self.summand())
        sorts = {s.sort for s in summands if s is not None}
        if len(sorts) > 1:
            raise self.error("cannot add magnitudes of different sorts", t)
        if not sorts:
            # a bare 0 takes its sort from the other side; resolved by _zero_fix
            return _Zero()
        sort = sorts.pop()
        return MagnitudeTerm(sort, tuple(s for s in summands if s is not None))

    def summand(self):
        t = self.tok
        if t.kind == "num":
            if t.text != "0":
                raise self.error(f"only the constant 0 is allowed, found '{t.text}'")
            self.next()
            return None
        if self.at("right_angle"):
            self.next()
            return RIGHT_ANGLE.summands[0]
        if t.kind == "name" and t.text in ("seg", "angle", "area"):
            self.next()
            self.expect("(")
            args = self.objs()
            self.expect(")")
            try:
                return Mag(t.text, tuple(args))
            except SortError as e:
                raise self.error(e.message, t) from None
        found = t.text or "end of input"
        raise self.error(f"expected a magnitude, found '{found}'")


class _Zero:
    """Placeholder for a bare 0 before its magnitude sort is known."""


def _resolve_zero(lhs, rhs):
    if isinstance(lhs, _Zero) and isinstance(rhs, _Zero):
        raise SortError("cannot compare 0 with 0: no magnitude sort")
    if isinstance(lhs, _Zero):
        lhs = MagnitudeTerm(rhs.sort, ())
    if isinstance(rhs, _Zero):
        rhs = MagnitudeTerm(lhs.sort, ())
    return lhs, rhs


def parse(text: str, filename: str = "<string>", env=None) -> ProofScript:
    """Parse a script. `env` maps theorem names (e.g. from imports) to statements."""
    p = _Parser(text, filename, env)
    try:
        p.prescan()
        return p.script()
    except RecursionError:
        raise ParseError("nesting too deep", p.tok.line, p.tok.col, filename) from None


def scan_imports(text: str, filename: str = "<string>") -> list[str]:
    """The files named by top-level `import` lines."""
    toks = tokenize(text, filename)
    out = []
    for t, u in zip(toks, toks[1:]):
        if t.kind == "name" and t.text == "import" and u.kind in ("string", "name"):
            out.append(u.text[1:-1] if u.kind == "string" else u.text)
    return out


def parse_literal(text: str, objects) -> list[Literal]:
    """Parse a literal (or defined predicate) over the given objects."""
    p = _Parser(text, "<literal>", None)
    p.scope = {o.name: o for o in objects}
    lits = p.literal()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected '{p.tok.text}' after the literal")
    return lits


def render_diagnostic(err: EError, filename: str | None = None) -> str:
    fn = err.filename or filename or "<input>"
    if err.line is None:
        return f"{fn}: {err.message}"
    return f"{fn}:{err.line}:{err.col}: {err.message}"


# -- pretty-printer ----------------------------------------------------------------------

def _decl_lines(objs) -> list[str]:
    out, cur, names = [], None, []
    for o in objs:
        if o.sort != cur and names:
            out.append(f"{cur.value} {', '.join(names)}")
            names = []
        cur = o.sort
        names.append(o.name)
    if names:
        out.append(f"{cur.value} {', '.join(names)}")
    return out


def _lits(lits) -> str:
    return ", ".join(str(l) for l in lits)


def format_step(step, indent=1) -> list[str]:
    pad = "  " * indent
    if isinstance(step, QED):
        return [pad + step.mode]
    if isinstance(step, Have):
        if step.literal.is_falsity:
            return [pad + "contradiction"]
        return [f"{pad}{step.keyword if step.keyword != 'contradiction' else 'have'} {step.literal}"]
    if isinstance(step, Construct):
        s = f"{pad}let {', '.join(o.name for o in step.outputs)} = {step.keyword}(" \
            f"{', '.join(o.name for o in step.args)})"
        if step.distinct_from:
            s += " distinct_from " + ", ".join(o.name for o in step.distinct_from)
        return [s]
    if isinstance(step, Apply):
        s = f"{pad}by {step.theorem} applied to {', '.join(o.name for o in step.args)}"
        if step.outputs:
            s += " let " + ", ".join(f"{o.sort.value} {o.name}" for o in step.outputs)
        if step.selected is not None:
            s += " have " + _lits(step.selected)
        return [s]
    if isinstance(step, Suppose):
        return [f"{pad}suppose {step.assumption} {{"] + _body(step.body, indent) + [pad + "}"]
    if isinstance(step, Cases):
        return ([f"{pad}case {step.assumption} {{"] + _body(step.then, indent)
                + [pad + "} else {"] + _body(step.otherwise, indent) + [pad + "}"])
    if isinstance(step, Superpose):
        return ([f"{pad}superpose-{step.kind} {', '.join(o.name for o in step.args)} as "
                 f"{', '.join(o.name for o in step.primes)} {{"]
                + _body(step.body, indent) + [pad + "}"])
    raise TypeError(f"not a proof step: {step!r}")


def _body(steps, indent) -> list[str]:
    out = []
    for s in steps:
        out.extend(format_step(s, indent + 1))
    return out


def format_theorem(th: TheoremDecl) -> str:
    st = th.statement
    lines = [f"theorem {st.name}:"]
    lines += ["  " + d for d in _decl_lines(st.universals)]
    if st.hypotheses:
        lines.append("  assume " + _lits(st.hypotheses))
    if st.existentials:
        lines.append("  exists " + " ".join(_decl_lines(st.existentials)))
    if st.conclusions:
        lines.append("  conclude " + ", ".join("contradiction" if c.is_falsity else str(c)
                                               for c in st.conclusions))
    if st.note:
        lines.append(f'  note "{st.note}"')
    if th.body is None:
        lines.append("assumed")
    else:
        lines.append("proof")
        for s in th.body:
            lines.extend(format_step(s, 1))
    return "\n".join(lines) + "\n"


def format_state(sd: StateDecl) -> str:
    lines = ["state {"] + ["  " + d for d in _decl_lines(sd.objects)]
    lines += ["  " + str(l) for l in sd.literals]
    return "\n".join(lines + ["}"]) + "\n"


def format_script(script: ProofScript) -> str:
    parts = [f'import "{i}"\n' for i in script.imports]
    parts += [format_theorem(t) for t in script.theorems]
    parts += [format_state(s) for s in script.states]
    return "\n".join(parts)
