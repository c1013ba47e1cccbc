"""Object language of system E: sorted variables, atoms, magnitudes, literals."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable


class EError(Exception):
    """Base class for checker errors. Carries an optional source position."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None,
                 filename: str | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.filename = filename


class SortError(EError):
    pass


class Sort(Enum):
    POINT = "point"
    LINE = "line"
    CIRCLE = "circle"


POINT, LINE, CIRCLE = Sort.POINT, Sort.LINE, Sort.CIRCLE
_SORT_RANK = {POINT: 0, LINE: 1, CIRCLE: 2}


class MagSort(Enum):
    SEGMENT = "segment"
    ANGLE = "angle"
    AREA = "area"


@dataclass(frozen=True)
class ObjectVar:
    name: str
    sort: Sort

    def __str__(self):
        return self.name

    def key(self):
        return (_SORT_RANK[self.sort], self.name)


def point(name: str) -> ObjectVar:
    return ObjectVar(name, POINT)


def line(name: str) -> ObjectVar:
    return ObjectVar(name, LINE)


def circle(name: str) -> ObjectVar:
    return ObjectVar(name, CIRCLE)


# predicate name -> argument sorts
PREDICATES: dict[str, tuple[Sort, ...]] = {
    "on_line": (POINT, LINE),
    "same_side": (POINT, POINT, LINE),
    "between": (POINT, POINT, POINT),
    "on_circle": (POINT, CIRCLE),
    "inside": (POINT, CIRCLE),
    "center": (POINT, CIRCLE),
    "intersects_ll": (LINE, LINE),
    "intersects_lc": (LINE, CIRCLE),
    "intersects_cc": (CIRCLE, CIRCLE),
    "eq_point": (POINT, POINT),
    "eq_line": (LINE, LINE),
    "eq_circle": (CIRCLE, CIRCLE),
}

EQ_PRED = {POINT: "eq_point", LINE: "eq_line", CIRCLE: "eq_circle"}


@dataclass(frozen=True)
class DiagramAtom:
    pred: str
    args: tuple[ObjectVar, ...]

    def __post_init__(self):
        sig = PREDICATES.get(self.pred)
        if sig is None:
            raise SortError(f"unknown predicate '{self.pred}'")
        if len(sig) != len(self.args):
            raise SortError(f"'{self.pred}' expects {len(sig)} arguments, got {len(self.args)}")
        for want, arg in zip(sig, self.args):
            if not isinstance(arg, ObjectVar) or arg.sort != want:
                raise SortError(f"'{self.pred}' expects a {want.value} where '{arg}' was given")

    def __str__(self):
        return render_diagram_atom(self.pred, [a.name for a in self.args])


def render_diagram_atom(pred: str, names) -> str:
    if pred.startswith("eq_"):
        return f"{names[0]} = {names[1]}"
    if pred in ("on_line", "on_circle"):
        pred = "on"
    elif pred.startswith("intersects"):
        pred = "intersects"
    return f"{pred}({','.join(names)})"


# -- magnitudes ---------------------------------------------------------------

_KIND_SORT = {"seg": MagSort.SEGMENT, "angle": MagSort.ANGLE, "area": MagSort.AREA,
              "right_angle": MagSort.ANGLE}
_KIND_ARITY = {"seg": 2, "angle": 3, "area": 3, "right_angle": 0}
_KIND_RANK = {"right_angle": 0, "seg": 1, "angle": 2, "area": 3}


@dataclass(frozen=True)
class Mag:
    """Atomic magnitude: seg(a,b), angle(a,b,c), area(a,b,c) or right_angle."""
    kind: str
    points: tuple[ObjectVar, ...] = ()

    def __post_init__(self):
        if self.kind not in _KIND_ARITY:
            raise SortError(f"unknown magnitude '{self.kind}'")
        if len(self.points) != _KIND_ARITY[self.kind]:
            raise SortError(f"'{self.kind}' expects {_KIND_ARITY[self.kind]} point arguments, "
                            f"got {len(self.points)}")
        for p in self.points:
            if not isinstance(p, ObjectVar) or p.sort != POINT:
                raise SortError(f"'{self.kind}' expects points, got '{p}'")

    @property
    def sort(self) -> MagSort:
        return _KIND_SORT[self.kind]

    def key(self):
        return (_KIND_RANK[self.kind], tuple(p.name for p in self.points))

    def __str__(self):
        if self.kind == "right_angle":
            return "right_angle"
        return f"{self.kind}({','.join(p.name for p in self.points)})"


@dataclass(frozen=True)
class MagnitudeTerm:
    sort: MagSort
    summands: tuple[Mag, ...] = ()

    def __post_init__(self):
        for s in self.summands:
            if s.sort != self.sort:
                raise SortError(f"cannot add {s.sort.value} magnitude {s} to a {self.sort.value} term")

    def __add__(self, other: "MagnitudeTerm") -> "MagnitudeTerm":
        if other.sort != self.sort:
            raise SortError(f"cannot add {self.sort.value} and {other.sort.value} magnitudes")
        return MagnitudeTerm(self.sort, self.summands + other.summands)

    def points(self) -> set[ObjectVar]:
        return {p for s in self.summands for p in s.points}

    def __str__(self):
        if not self.summands:
            return "0"
        return " + ".join(str(s) for s in self.summands)


def term(m: Mag) -> MagnitudeTerm:
    return MagnitudeTerm(m.sort, (m,))


def seg(a, b) -> MagnitudeTerm:
    return term(Mag("seg", (a, b)))


def angle(a, b, c) -> MagnitudeTerm:
    return term(Mag("angle", (a, b, c)))


def area(a, b, c) -> MagnitudeTerm:
    return term(Mag("area", (a, b, c)))


RIGHT_ANGLE = term(Mag("right_angle"))


def zero(sort: MagSort) -> MagnitudeTerm:
    return MagnitudeTerm(sort, ())


def canonical_mag(m: Mag) -> Mag:
    if m.kind == "seg":
        a, b = m.points
        return m if a.name <= b.name else Mag("seg", (b, a))
    if m.kind == "angle":
        a, b, c = m.points
        return m if a.name <= c.name else Mag("angle", (c, b, a))
    if m.kind == "area":
        return Mag("area", tuple(sorted(m.points, key=lambda p: p.name)))
    return m


def normalize_magnitude(t: MagnitudeTerm) -> MagnitudeTerm:
    """Canonical form modulo AC of + and the seg/angle/area symmetries."""
    parts = sorted((canonical_mag(s) for s in t.summands), key=Mag.key)
    return MagnitudeTerm(t.sort, tuple(parts))


@dataclass(frozen=True)
class MetricAtom:
    rel: str  # "eq" or "lt"
    lhs: MagnitudeTerm
    rhs: MagnitudeTerm

    def __post_init__(self):
        if self.rel not in ("eq", "lt"):
            raise SortError(f"unknown metric relation '{self.rel}'")
        if self.lhs.sort != self.rhs.sort:
            raise SortError(f"cannot compare {self.lhs.sort.value} with {self.rhs.sort.value}")

    def __str__(self):
        return f"{self.lhs} {'=' if self.rel == 'eq' else '<'} {self.rhs}"


class Falsity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "FALSITY"

    def __str__(self):
        return "contradiction"

    def __reduce__(self):
        return (Falsity, ())


@dataclass(frozen=True)
class Literal:
    positive: bool
    atom: object  # DiagramAtom | MetricAtom | Falsity

    def __post_init__(self):
        if isinstance(self.atom, Falsity) and not self.positive:
            raise ValueError("falsity only appears positively")
        if not isinstance(self.atom, (DiagramAtom, MetricAtom, Falsity)):
            raise TypeError(f"not an atom: {self.atom!r}")

    @property
    def is_diagram(self) -> bool:
        return isinstance(self.atom, DiagramAtom)

    @property
    def is_metric(self) -> bool:
        return isinstance(self.atom, MetricAtom)

    @property
    def is_falsity(self) -> bool:
        return isinstance(self.atom, Falsity)

    def __str__(self):
        a = self.atom
        if self.positive:
            return str(a)
        if isinstance(a, DiagramAtom) and a.pred.startswith("eq_"):
            return f"{a.args[0]} != {a.args[1]}"
        if isinstance(a, MetricAtom):
            if a.rel == "eq":
                return f"{a.lhs} != {a.rhs}"
            return f"{a.rhs} <= {a.lhs}"
        return f"not {a}"


FALSITY = Literal(True, Falsity())


def negate(lit: Literal) -> Literal:
    if lit.is_falsity:
        raise ValueError("falsity has no negation in the object language")
    return Literal(not lit.positive, lit.atom)


def lit(pred: str, *args: ObjectVar, positive: bool = True) -> Literal:
    return Literal(positive, DiagramAtom(pred, tuple(args)))


def neg(pred: str, *args: ObjectVar) -> Literal:
    return lit(pred, *args, positive=False)


def eq(x: ObjectVar, y: ObjectVar, positive: bool = True) -> Literal:
    if x.sort != y.sort:
        raise SortError(f"cannot equate {x.sort.value} '{x}' with {y.sort.value} '{y}'")
    return lit(EQ_PRED[x.sort], x, y, positive=positive)


def on(x: ObjectVar, y: ObjectVar, positive: bool = True) -> Literal:
    """Incidence, dispatching on the sort of the second argument."""
    if y.sort == LINE:
        return lit("on_line", x, y, positive=positive)
    if y.sort == CIRCLE:
        return lit("on_circle", x, y, positive=positive)
    raise SortError(f"'on' expects a line or circle, got point '{y}'")


def intersects(x: ObjectVar, y: ObjectVar, positive: bool = True) -> Literal:
    sorts = (x.sort, y.sort)
    if sorts == (LINE, LINE):
        return lit("intersects_ll", x, y, positive=positive)
    if sorts == (LINE, CIRCLE):
        return lit("intersects_lc", x, y, positive=positive)
    if sorts == (CIRCLE, LINE):
        return lit("intersects_lc", y, x, positive=positive)
    if sorts == (CIRCLE, CIRCLE):
        return lit("intersects_cc", x, y, positive=positive)
    raise SortError(f"'intersects' expects lines or circles, got '{x}', '{y}'")


def metric(rel: str, lhs: MagnitudeTerm, rhs: MagnitudeTerm, positive: bool = True) -> Literal:
    return Literal(positive, MetricAtom(rel, lhs, rhs))


def normalize_literal(l: Literal) -> Literal:
    """Canonical literal: magnitudes normalized, sides of = put in canonical order."""
    if not l.is_metric:
        return l
    a = l.atom
    lhs, rhs = normalize_magnitude(a.lhs), normalize_magnitude(a.rhs)
    if a.rel == "eq" and _term_key(rhs) < _term_key(lhs):
        lhs, rhs = rhs, lhs
    return Literal(l.positive, MetricAtom(a.rel, lhs, rhs))


def _term_key(t: MagnitudeTerm):
    return tuple(s.key() for s in t.summands)


def expand_defined(name: str, args) -> list[Literal]:
    """Expand a defined predicate into its defining literals."""
    if name == "diff_side":
        a, b, L = args
        return [neg("on_line", a, L), neg("on_line", b, L), neg("same_side", a, b, L)]
    if name == "outside":
        a, alpha = args
        return [neg("inside", a, alpha), neg("on_circle", a, alpha)]
    if name in ("seg_leq", "angle_leq", "area_leq", "leq"):
        x, y = args
        return [metric("lt", y, x, positive=False)]
    raise EError(f"unknown defined predicate '{name}'")


def free_vars(l: Literal) -> set[ObjectVar]:
    a = l.atom
    if isinstance(a, DiagramAtom):
        return set(a.args)
    if isinstance(a, MetricAtom):
        return a.lhs.points() | a.rhs.points()
    return set()


def substitute(l: Literal, m: dict) -> Literal:
    """Rename object variables in a literal; unmapped variables are kept."""
    a = l.atom
    if isinstance(a, DiagramAtom):
        return Literal(l.positive, DiagramAtom(a.pred, tuple(m.get(x, x) for x in a.args)))
    if isinstance(a, MetricAtom):
        def sub_t(t):
            return MagnitudeTerm(t.sort, tuple(Mag(s.kind, tuple(m.get(p, p) for p in s.points))
                                               for s in t.summands))
        return Literal(l.positive, MetricAtom(a.rel, sub_t(a.lhs), sub_t(a.rhs)))
    return l


@dataclass(frozen=True)
class TheoremStatement:
    name: str
    universals: tuple[ObjectVar, ...]
    hypotheses: tuple[Literal, ...]
    existentials: tuple[ObjectVar, ...] = ()
    conclusions: tuple[Literal, ...] = ()
    note: str = field(default="", compare=False)

    def __post_init__(self):
        ex = set(self.existentials)
        for h in self.hypotheses:
            bad = free_vars(h) & ex
            if bad:
                raise EError(f"theorem '{self.name}': existential variable "
                             f"'{sorted(v.name for v in bad)[0]}' occurs in a hypothesis")
        allowed = set(self.universals) | ex
        for h in self.hypotheses:
            extra = free_vars(h) - allowed
            if extra:
                raise EError(f"theorem '{self.name}': undeclared variable "
                             f"'{sorted(v.name for v in extra)[0]}' in a hypothesis")
        for c in self.conclusions:
            extra = free_vars(c) - allowed
            if extra:
                raise EError(f"theorem '{self.name}': conclusion mentions undeclared variable "
                             f"'{sorted(v.name for v in extra)[0]}'")

    @property
    def concludes_falsity(self) -> bool:
        return any(c.is_falsity for c in self.conclusions)


def sort_key_literal(l: Literal):
    return (0 if l.is_diagram else 1, str(l))


def literal_vars_all(lits: Iterable[Literal]) -> set[ObjectVar]:
    out: set[ObjectVar] = set()
    for l in lits:
        out |= free_vars(l)
    return out
