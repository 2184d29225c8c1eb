"""Exact linear arithmetic over the rationals.

Linear forms with ``Fraction`` coefficients, literal-to-constraint
translation, Fourier-Motzkin elimination with disequality splitting, model
construction by back-substitution, and the interval/choice helpers the LRA
module decides with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence

from ..terms import (
    ARITH_OPS,
    BOOL,
    FALSE,
    RAT,
    TRUE,
    Assignment,
    BoolValue,
    RatValue,
    SymbolKind,
    Term,
    TermStore,
    evaluate,
)

LT, LE, EQ, NE = "<", "<=", "=", "!="


def is_variable(term: Term) -> bool:
    return term.sort == RAT and term.kind not in ARITH_OPS


def is_arith_atom(term: Term) -> bool:
    kind = term.kind
    if kind in (SymbolKind.LT, SymbolKind.LE):
        return True
    return kind is SymbolKind.EQ and term.args[0].sort == RAT


class LinearForm:
    """``sum(coeffs[v] * v) + const``, zero coefficients dropped."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Optional[Mapping[Term, Fraction]] = None, const=0):
        self.coeffs: Dict[Term, Fraction] = {
            v: Fraction(c) for v, c in (coeffs or {}).items() if c != 0
        }
        self.const = Fraction(const)

    @classmethod
    def var(cls, v: Term) -> "LinearForm":
        return cls({v: Fraction(1)})

    def __add__(self, other: "LinearForm") -> "LinearForm":
        coeffs = dict(self.coeffs)
        for v, c in other.coeffs.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
        return LinearForm(coeffs, self.const + other.const)

    def scale(self, k) -> "LinearForm":
        return LinearForm({v: c * k for v, c in self.coeffs.items()}, self.const * k)

    def __neg__(self) -> "LinearForm":
        return self.scale(-1)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def __eq__(self, other):
        return (
            isinstance(other, LinearForm)
            and self.coeffs == other.coeffs
            and self.const == other.const
        )

    def __hash__(self):
        return hash((frozenset((v.id, c) for v, c in self.coeffs.items()), self.const))

    def coeff(self, v: Term) -> Fraction:
        return self.coeffs.get(v, Fraction(0))

    def without(self, v: Term) -> "LinearForm":
        coeffs = dict(self.coeffs)
        coeffs.pop(v, None)
        return LinearForm(coeffs, self.const)

    @property
    def variables(self) -> List[Term]:
        return sorted(self.coeffs, key=lambda t: t.id)

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def value(self, values: Mapping[Term, Fraction]) -> Optional[Fraction]:
        total = self.const
        for v, c in self.coeffs.items():
            if v not in values:
                return None
            total += c * values[v]
        return total

    def substitute(self, v: Term, form: "LinearForm") -> "LinearForm":
        c = self.coeff(v)
        if c == 0:
            return self
        return self.without(v) + form.scale(c)

    def __repr__(self):
        parts = [f"{c}*{v}" for v, c in sorted(self.coeffs.items(), key=lambda p: p[0].id)]
        parts.append(str(self.const))
        return " + ".join(parts)


def linearize(term: Term) -> LinearForm:
    kind = term.kind
    if kind is SymbolKind.NUMERAL:
        return LinearForm(const=term.head.numeral)
    if kind is SymbolKind.ADD:
        out = LinearForm()
        for a in term.args:
            out = out + linearize(a)
        return out
    if kind is SymbolKind.SUB:
        if len(term.args) == 1:
            return -linearize(term.args[0])
        out = linearize(term.args[0])
        for a in term.args[1:]:
            out = out - linearize(a)
        return out
    if kind is SymbolKind.MUL:
        lhs, rhs = (linearize(a) for a in term.args)
        if lhs.is_constant:
            return rhs.scale(lhs.const)
        return lhs.scale(rhs.const)
    return LinearForm.var(term)


def form_to_term(store: TermStore, form: LinearForm) -> Term:
    """Canonical term for a linear form: a variable, a numeral or a sum."""
    parts = []
    for v in form.variables:
        c = form.coeffs[v]
        parts.append(v if c == 1 else store.mul(store.numeral(c), v))
    if form.const != 0 or not parts:
        parts.append(store.numeral(form.const))
    if len(parts) == 1:
        return parts[0]
    return store.add(*parts)


@dataclass(frozen=True)
class LinearConstraint:
    """``form rel 0`` with rel one of <, <=, =, !=."""

    form: LinearForm
    rel: str

    def holds(self, value: Fraction) -> bool:
        return {
            LT: value < 0,
            LE: value <= 0,
            EQ: value == 0,
            NE: value != 0,
        }[self.rel]

    @property
    def is_trivial(self) -> bool:
        return self.form.is_constant

    def __repr__(self):
        return f"{self.form!r} {self.rel} 0"


def constraints_of(assignment: Assignment) -> Optional[List[LinearConstraint]]:
    """Conjunction of constraints equivalent to an assignment, or None."""
    term, value = assignment.term, assignment.value
    if term.sort == RAT:
        return [LinearConstraint(linearize(term) - LinearForm(const=value.value), EQ)]
    if term.sort != BOOL:
        return None
    kind = term.kind
    if kind is SymbolKind.NOT:
        return constraints_of(Assignment(term.args[0], BoolValue(not value.value)))
    if (kind is SymbolKind.OR and value == FALSE) or (kind is SymbolKind.AND and value == TRUE):
        out = []
        for child in term.args:
            sub = constraints_of(Assignment(child, value))
            if sub is None:
                return None
            out.extend(sub)
        return out
    if not is_arith_atom(term):
        return None
    lhs, rhs = (linearize(a) for a in term.args)
    if kind is SymbolKind.EQ:
        return [LinearConstraint(lhs - rhs, EQ if value == TRUE else NE)]
    strict = kind is SymbolKind.LT
    if value == TRUE:
        return [LinearConstraint(lhs - rhs, LT if strict else LE)]
    return [LinearConstraint(rhs - lhs, LE if strict else LT)]


# ----------------------------------------------------------- elimination


def _split(constraints: Iterable[LinearConstraint]):
    ineqs, diseqs = [], []
    for c in constraints:
        if c.rel == EQ:
            ineqs.append(LinearConstraint(c.form, LE))
            ineqs.append(LinearConstraint(-c.form, LE))
        elif c.rel == NE:
            diseqs.append(c)
        else:
            ineqs.append(c)
    return ineqs, diseqs


def eliminate(ineqs: Sequence[LinearConstraint], v: Term) -> List[LinearConstraint]:
    """Project ``v`` out of a set of < / <= constraints."""
    uppers, lowers, rest = [], [], []
    for c in ineqs:
        a = c.form.coeff(v)
        if a > 0:
            uppers.append(c)
        elif a < 0:
            lowers.append(c)
        else:
            rest.append(c)
    seen = set()
    for up in uppers:
        for lo in lowers:
            form = up.form.scale(1 / up.form.coeff(v)) + lo.form.scale(1 / -lo.form.coeff(v))
            rel = LT if LT in (up.rel, lo.rel) else LE
            key = (form, rel)
            if key not in seen:
                seen.add(key)
                rest.append(LinearConstraint(form, rel))
    return rest


def _variables(constraints: Iterable[LinearConstraint]) -> List[Term]:
    seen = {}
    for c in constraints:
        for v in c.form.variables:
            seen.setdefault(v.id, v)
    return [seen[k] for k in sorted(seen)]


def _ground_ok(constraints: Iterable[LinearConstraint]) -> bool:
    return all(c.holds(c.form.const) for c in constraints if c.form.is_constant)


def _project(ineqs: List[LinearConstraint], order: Sequence[Term]):
    """Eliminate in order; returns the stages or None on a ground contradiction."""
    stages = [ineqs]
    current = ineqs
    for v in order:
        if not _ground_ok(current):
            return None
        current = eliminate(current, v)
        stages.append(current)
    if not _ground_ok(current):
        return None
    return stages


@dataclass
class Interval:
    lo: Optional[Fraction] = None
    lo_strict: bool = False
    hi: Optional[Fraction] = None
    hi_strict: bool = False

    def tighten_lower(self, q: Fraction, strict: bool) -> bool:
        if self.lo is None or q > self.lo or (q == self.lo and strict and not self.lo_strict):
            self.lo, self.lo_strict = q, strict
            return True
        return False

    def tighten_upper(self, q: Fraction, strict: bool) -> bool:
        if self.hi is None or q < self.hi or (q == self.hi and strict and not self.hi_strict):
            self.hi, self.hi_strict = q, strict
            return True
        return False

    @property
    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        return self.lo > self.hi or (self.lo == self.hi and (self.lo_strict or self.hi_strict))

    @property
    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi and not self.is_empty

    def contains(self, q: Fraction) -> bool:
        if self.lo is not None and (q < self.lo or (q == self.lo and self.lo_strict)):
            return False
        if self.hi is not None and (q > self.hi or (q == self.hi and self.hi_strict)):
            return False
        return True


def _candidates(iv: Interval, budget: int) -> Iterator[Fraction]:
    yield Fraction(0)
    if iv.lo is not None and iv.lo >= 0:
        start = Fraction(math.floor(iv.lo) + 1 if iv.lo_strict or iv.lo != int(iv.lo) else iv.lo)
        for k in range(budget):
            yield start + k
    elif iv.hi is not None and iv.hi <= 0:
        start = Fraction(math.ceil(iv.hi) - 1 if iv.hi_strict or iv.hi != int(iv.hi) else iv.hi)
        for k in range(budget):
            yield start - k
    else:
        for k in range(1, budget + 1):
            yield Fraction(k)
            yield Fraction(-k)
    if iv.lo is not None and iv.hi is not None:
        lo, hi = iv.lo, iv.hi
        for _ in range(budget):
            mid = (lo + hi) / 2
            yield mid
            hi = mid
        yield iv.lo
        yield iv.hi


def choose(iv: Interval, excluded: Iterable[Fraction] = ()) -> Optional[Fraction]:
    """A value in the interval avoiding ``excluded``.

    Zero when allowed, else the integer closest to zero inside the interval,
    else the midpoint (halved towards the lower end when excluded).
    """
    if iv.is_empty:
        return None
    excluded = set(excluded)
    for q in _candidates(iv, len(excluded) + 2):
        if iv.contains(q) and q not in excluded:
            return q
    return None


def _interval_for(v: Term, ineqs: Iterable[LinearConstraint], values: Mapping[Term, Fraction]) -> Interval:
    iv = Interval()
    for c in ineqs:
        a = c.form.coeff(v)
        if a == 0:
            continue
        rest = c.form.without(v).value(values)
        if rest is None:
            continue
        bound = -rest / a
        strict = c.rel == LT
        if a > 0:
            iv.tighten_upper(bound, strict)
        else:
            iv.tighten_lower(bound, strict)
    return iv


def _excluded_for(v: Term, diseqs: Iterable[LinearConstraint], values: Mapping[Term, Fraction]) -> List[Fraction]:
    out = []
    for c in diseqs:
        a = c.form.coeff(v)
        rest = c.form.without(v).value(values)
        if a != 0 and rest is not None and all(w in values or w is v for w in c.form.coeffs):
            out.append(-rest / a)
    return out


def _model_of(ineqs, diseqs, order) -> Optional[Dict[Term, Fraction]]:
    stages = _project(ineqs, order)
    if stages is None:
        return None
    values: Dict[Term, Fraction] = {}
    for depth in range(len(order) - 1, -1, -1):
        v = order[depth]
        iv = _interval_for(v, stages[depth], values)
        later = set(order[depth + 1 :])
        pinned = [c for c in diseqs if all(w in later or w is v for w in c.form.coeffs)]
        q = choose(iv, _excluded_for(v, pinned, values))
        if q is None:
            q = choose(iv)
        if q is None:
            return None
        values[v] = q
    return values


def find_model(constraints: Iterable[LinearConstraint]) -> Optional[Dict[Term, Fraction]]:
    """A rational model of the conjunction, or None when it is unsatisfiable."""
    constraints = list(constraints)
    ineqs, diseqs = _split(constraints)
    return _search(ineqs, diseqs, _variables(constraints))


def _search(ineqs, diseqs, order) -> Optional[Dict[Term, Fraction]]:
    model = _model_of(ineqs, diseqs, order)
    if model is None:
        return None
    broken = next((d for d in diseqs if d.form.value(model) == 0), None)
    if broken is None:
        return model
    remaining = [d for d in diseqs if d is not broken]
    for side in (LinearConstraint(broken.form, LT), LinearConstraint(-broken.form, LT)):
        found = _search(ineqs + [side], remaining, order)
        if found is not None:
            return found
    return None


def is_satisfiable(constraints: Iterable[LinearConstraint]) -> bool:
    return find_model(constraints) is not None


def assignments_satisfiable(assignments: Iterable[Assignment]) -> bool:
    """Satisfiability of the arithmetic content; untranslatable items are dropped."""
    constraints = []
    for a in assignments:
        sub = constraints_of(a)
        if sub is not None:
            constraints.extend(sub)
    return is_satisfiable(constraints)


def ground_value(term: Term) -> Fraction:
    value = evaluate(term, {})
    if not isinstance(value, RatValue):
        raise ValueError(f"{term} is not a ground rational term")
    return value.value
