"""Sorted multi-theory term algebra.

Terms are hash-consed in a ``TermStore``: structurally equal terms are the
same object and carry the same integer id. Formulas are simply terms of sort
``Bool``. Values (``BoolValue``, ``RatValue``, ``AbsValue``) are a separate
closed datatype: the numeral ``3`` is a constant symbol, the value ``3`` is
not.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import IllSorted, NonLinearTerm, NotBoolean


class TheoryId(str, Enum):
    BOOL = "Bool"
    EUF = "EUF"
    LRA = "LRA"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Sort:
    kind: str
    name: str

    def __str__(self):
        return self.name

    @property
    def is_uninterpreted(self) -> bool:
        return self.kind == "Uninterp"


BOOL = Sort("Bool", "Bool")
RAT = Sort("Rat", "Real")


def uninterpreted_sort(name: str) -> Sort:
    if name in ("Bool", "Real"):
        raise IllSorted(f"sort name {name} is built in")
    return Sort("Uninterp", name)


class SymbolKind(Enum):
    CONST = "const"
    FUN = "fun"
    NUMERAL = "numeral"
    TRUE = "true"
    FALSE = "false"
    NOT = "not"
    AND = "and"
    OR = "or"
    IMPLIES = "=>"
    EQ = "="
    ADD = "+"
    SUB = "-"
    MUL = "*"
    LT = "<"
    LE = "<="


CONNECTIVES = frozenset(
    {SymbolKind.NOT, SymbolKind.AND, SymbolKind.OR, SymbolKind.IMPLIES}
)
ARITH_OPS = frozenset(
    {SymbolKind.NUMERAL, SymbolKind.ADD, SymbolKind.SUB, SymbolKind.MUL}
)
ARITH_PREDICATES = frozenset({SymbolKind.LT, SymbolKind.LE})


@dataclass(frozen=True)
class Symbol:
    name: str
    arg_sorts: Tuple[Sort, ...]
    res_sort: Sort
    owner: TheoryId
    kind: SymbolKind
    variadic: bool = False
    numeral: Optional[Fraction] = None

    def __str__(self):
        return self.name

    @property
    def is_uninterpreted(self) -> bool:
        return self.kind in (SymbolKind.CONST, SymbolKind.FUN)


def _builtin(name, arg_sorts, res_sort, owner, kind, variadic=False):
    return Symbol(name, tuple(arg_sorts), res_sort, owner, kind, variadic)


TRUE_SYMBOL = _builtin("true", (), BOOL, TheoryId.BOOL, SymbolKind.TRUE)
FALSE_SYMBOL = _builtin("false", (), BOOL, TheoryId.BOOL, SymbolKind.FALSE)
NOT = _builtin("not", (BOOL,), BOOL, TheoryId.BOOL, SymbolKind.NOT)
AND = _builtin("and", (BOOL,), BOOL, TheoryId.BOOL, SymbolKind.AND, variadic=True)
OR = _builtin("or", (BOOL,), BOOL, TheoryId.BOOL, SymbolKind.OR, variadic=True)
IMPLIES = _builtin("=>", (BOOL, BOOL), BOOL, TheoryId.BOOL, SymbolKind.IMPLIES)
ADD = _builtin("+", (RAT,), RAT, TheoryId.LRA, SymbolKind.ADD, variadic=True)
SUB = _builtin("-", (RAT,), RAT, TheoryId.LRA, SymbolKind.SUB, variadic=True)
MUL = _builtin("*", (RAT, RAT), RAT, TheoryId.LRA, SymbolKind.MUL)
LT = _builtin("<", (RAT, RAT), BOOL, TheoryId.LRA, SymbolKind.LT)
LE = _builtin("<=", (RAT, RAT), BOOL, TheoryId.LRA, SymbolKind.LE)


@lru_cache(maxsize=None)
def eq_symbol(sort: Sort) -> Symbol:
    # rational equality belongs to LRA, every other sort to EUF
    owner = TheoryId.LRA if sort == RAT else TheoryId.EUF
    return Symbol("=", (sort, sort), BOOL, owner, SymbolKind.EQ)


@lru_cache(maxsize=None)
def numeral_symbol(q: Fraction) -> Symbol:
    q = Fraction(q)
    return Symbol(format_rational(q), (), RAT, TheoryId.LRA, SymbolKind.NUMERAL, numeral=q)


def uninterpreted_symbol(name: str, arg_sorts: Sequence[Sort], res_sort: Sort) -> Symbol:
    kind = SymbolKind.FUN if arg_sorts else SymbolKind.CONST
    return Symbol(name, tuple(arg_sorts), res_sort, TheoryId.EUF, kind)


def format_rational(q: Fraction) -> str:
    """SMT-LIB rendering of a rational numeral: ``3``, ``(- 3)``, ``(/ 1 2)``."""
    q = Fraction(q)
    magnitude = abs(q)
    if magnitude.denominator == 1:
        text = str(magnitude.numerator)
    else:
        text = f"(/ {magnitude.numerator} {magnitude.denominator})"
    return f"(- {text})" if q < 0 else text


@dataclass(frozen=True, eq=False)
class Term:
    """A hash-consed term node. Equality is identity, hashing is by id."""

    id: int
    head: Symbol
    args: Tuple["Term", ...] = ()

    def __hash__(self):
        return self.id

    @property
    def sort(self) -> Sort:
        return self.head.res_sort

    @property
    def kind(self) -> SymbolKind:
        return self.head.kind

    def __str__(self):
        return to_smtlib(self)

    def __repr__(self):
        return f"Term#{self.id}<{to_smtlib(self)}>"


def to_smtlib(term: Term) -> str:
    if term.kind is SymbolKind.NUMERAL:
        return format_rational(term.head.numeral)
    if not term.args:
        return term.head.name
    return "(" + " ".join([term.head.name] + [to_smtlib(a) for a in term.args]) + ")"


def subterms(term: Term) -> Iterator[Term]:
    """Pre-order walk, duplicates included."""
    stack = [term]
    while stack:
        t = stack.pop()
        yield t
        stack.extend(reversed(t.args))


def is_ground_arith(term: Term) -> bool:
    if term.kind is SymbolKind.NUMERAL:
        return True
    if term.kind in ARITH_OPS:
        return all(is_ground_arith(a) for a in term.args)
    return False


class TermStore:
    """Append-only table of interned terms.

    Interning is serialized by a lock; reads of already interned terms need
    no synchronisation.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._table: Dict[tuple, Term] = {}
        self._terms: List[Term] = []

    def __len__(self):
        return len(self._terms)

    def __getitem__(self, term_id: int) -> Term:
        return self._terms[term_id]

    def since(self, mark: int) -> List[Term]:
        return self._terms[mark:]

    def intern(self, head: Symbol, args: Sequence[Term] = ()) -> Term:
        args = tuple(args)
        _check_application(head, args)
        key = (head, tuple(a.id for a in args))
        term = self._table.get(key)
        if term is not None:
            return term
        with self._lock:
            term = self._table.get(key)
            if term is None:
                term = Term(len(self._terms), head, args)
                self._terms.append(term)
                self._table[key] = term
        return term

    def app(self, head: Symbol, *args: Term) -> Term:
        return self.intern(head, args)

    def numeral(self, q) -> Term:
        return self.intern(numeral_symbol(Fraction(q)))

    def true(self) -> Term:
        return self.intern(TRUE_SYMBOL)

    def false(self) -> Term:
        return self.intern(FALSE_SYMBOL)

    def eq(self, lhs: Term, rhs: Term) -> Term:
        return self.intern(eq_symbol(lhs.sort), (lhs, rhs))

    def not_(self, t: Term) -> Term:
        return self.intern(NOT, (t,))

    def or_(self, *ts: Term) -> Term:
        return self.intern(OR, ts)

    def and_(self, *ts: Term) -> Term:
        return self.intern(AND, ts)

    def implies(self, p: Term, q: Term) -> Term:
        return self.intern(IMPLIES, (p, q))

    def le(self, lhs: Term, rhs: Term) -> Term:
        return self.intern(LE, (lhs, rhs))

    def lt(self, lhs: Term, rhs: Term) -> Term:
        return self.intern(LT, (lhs, rhs))

    def add(self, *ts: Term) -> Term:
        return self.intern(ADD, ts)

    def sub(self, *ts: Term) -> Term:
        return self.intern(SUB, ts)

    def mul(self, lhs: Term, rhs: Term) -> Term:
        return self.intern(MUL, (lhs, rhs))


def _check_application(head: Symbol, args: Tuple[Term, ...]) -> None:
    if head.variadic:
        if not args:
            raise IllSorted(f"{head.name} needs at least one argument")
        expected = head.arg_sorts * len(args)
    else:
        expected = head.arg_sorts
        if len(args) != len(expected):
            raise IllSorted(
                f"{head.name} expects {len(expected)} arguments, got {len(args)}"
            )
    for arg, sort in zip(args, expected):
        if arg.sort != sort:
            raise IllSorted(
                f"argument {arg} of {head.name} has sort {arg.sort}, expected {sort}"
            )
    if head.kind is SymbolKind.MUL and not any(is_ground_arith(a) for a in args):
        raise NonLinearTerm(f"product of non-constant terms {args[0]} and {args[1]}")


# ---------------------------------------------------------------- values


@dataclass(frozen=True)
class BoolValue:
    value: bool

    @property
    def sort(self) -> Sort:
        return BOOL

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class RatValue:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def sort(self) -> Sort:
        return RAT

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class AbsValue:
    """An abstract element of an uninterpreted sort, distinct per index."""

    sort: Sort
    index: int

    def __str__(self):
        return f"(abs {self.sort.name} {self.index})"


Value = Union[BoolValue, RatValue, AbsValue]

TRUE = BoolValue(True)
FALSE = BoolValue(False)


def value_to_smtlib(value: Value) -> str:
    if isinstance(value, RatValue):
        return format_rational(value.value)
    return str(value)


def value_sort_key(value: Value) -> tuple:
    if isinstance(value, BoolValue):
        return (0, int(value.value))
    if isinstance(value, RatValue):
        return (1, value.value)
    return (2, value.sort.name, value.index)


@dataclass(frozen=True)
class Assignment:
    """``term <- value``; Boolean when the term is Bool-sorted."""

    term: Term
    value: Value

    def __post_init__(self):
        if self.value.sort != self.term.sort:
            raise IllSorted(
                f"cannot assign {self.value} of sort {self.value.sort} "
                f"to {self.term} of sort {self.term.sort}"
            )

    @property
    def is_boolean(self) -> bool:
        return self.term.sort == BOOL

    def flip(self) -> "Assignment":
        if not self.is_boolean:
            raise NotBoolean(f"{self} is a first-order assignment")
        return Assignment(self.term, BoolValue(not self.value.value))

    def sort_key(self) -> tuple:
        return (self.term.id, value_sort_key(self.value))

    def __str__(self):
        return f"{self.term}<-{self.value}"


def flip(a: Assignment) -> Assignment:
    return a.flip()


def sorted_assignments(assignments: Iterable[Assignment]) -> List[Assignment]:
    return sorted(assignments, key=Assignment.sort_key)


# ------------------------------------------------------------ evaluation


def apply_head(head: Symbol, values: Sequence[Optional[Value]]) -> Optional[Value]:
    """Value of ``head(values)`` or None when it is not determined."""
    kind = head.kind
    if kind is SymbolKind.NUMERAL:
        return RatValue(head.numeral)
    if kind is SymbolKind.TRUE:
        return TRUE
    if kind is SymbolKind.FALSE:
        return FALSE
    if kind is SymbolKind.NOT:
        v = values[0]
        return None if v is None else BoolValue(not v.value)
    if kind is SymbolKind.AND:
        if FALSE in values:
            return FALSE
        return TRUE if None not in values else None
    if kind is SymbolKind.OR:
        if TRUE in values:
            return TRUE
        return FALSE if None not in values else None
    if kind is SymbolKind.IMPLIES:
        p, q = values
        if p == FALSE or q == TRUE:
            return TRUE
        if p == TRUE and q == FALSE:
            return FALSE
        return None
    if kind is SymbolKind.EQ:
        lhs, rhs = values
        if lhs is None or rhs is None:
            return None
        return BoolValue(lhs == rhs)
    if None in values or head.is_uninterpreted:
        return None
    nums = [v.value for v in values]
    if kind is SymbolKind.ADD:
        return RatValue(sum(nums, Fraction(0)))
    if kind is SymbolKind.SUB:
        if len(nums) == 1:
            return RatValue(-nums[0])
        return RatValue(nums[0] - sum(nums[1:], Fraction(0)))
    if kind is SymbolKind.MUL:
        return RatValue(nums[0] * nums[1])
    if kind is SymbolKind.LT:
        return BoolValue(nums[0] < nums[1])
    if kind is SymbolKind.LE:
        return BoolValue(nums[0] <= nums[1])
    return None


def evaluate(term: Term, valuation: Mapping[Term, Value]) -> Optional[Value]:
    """Bottom-up evaluation under a partial valuation.

    Uninterpreted constants and applications are looked up in the valuation;
    every interpreted head is computed from its arguments.
    """
    if term.head.is_uninterpreted:
        return valuation.get(term)
    return apply_head(term.head, [evaluate(a, valuation) for a in term.args])


# -------------------------------------------------------------- problems


@dataclass
class Problem:
    """Declarations plus the ordered input assignments."""

    store: TermStore = field(default_factory=TermStore)
    sorts: Dict[str, Sort] = field(default_factory=dict)
    symbols: Dict[str, Symbol] = field(default_factory=dict)
    inputs: List[Assignment] = field(default_factory=list)

    def declare_sort(self, name: str) -> Sort:
        if name in self.sorts:
            raise IllSorted(f"sort {name} declared twice")
        sort = uninterpreted_sort(name)
        self.sorts[name] = sort
        return sort

    def declare_fun(self, name: str, arg_sorts: Sequence[Sort], res_sort: Sort) -> Symbol:
        if name in self.symbols:
            raise IllSorted(f"symbol {name} declared twice")
        for sort in (*arg_sorts, res_sort):
            if sort.is_uninterpreted and self.sorts.get(sort.name) != sort:
                raise IllSorted(f"sort {sort} is not declared")
        symbol = uninterpreted_symbol(name, arg_sorts, res_sort)
        self.symbols[name] = symbol
        return symbol

    def constant(self, name: str) -> Term:
        return self.store.intern(self.symbols[name])

    def apply(self, name: str, *args: Term) -> Term:
        return self.store.intern(self.symbols[name], args)

    def add_input(self, assignment: Assignment) -> Assignment:
        for t in subterms(assignment.term):
            if t.head.is_uninterpreted and self.symbols.get(t.head.name) != t.head:
                raise IllSorted(f"symbol {t.head.name} is not declared")
        if isinstance(assignment.value, AbsValue):
            if self.sorts.get(assignment.value.sort.name) != assignment.value.sort:
                raise IllSorted(f"sort {assignment.value.sort} is not declared")
        self.inputs.append(assignment)
        return assignment

    def assert_formula(self, formula: Term) -> Assignment:
        return self.add_input(Assignment(formula, TRUE))


class Basis:
    """Ordered set of the terms decisions and propagations range over.

    Starts with the pre-order subterms of the inputs, in input order, and
    grows with every term interned afterwards, in interning order.
    Terms interned after construction are "derived"; `is_derived` tells them
    apart from the terms the problem was stated with.
    """

    def __init__(self, problem: Problem):
        self._store = problem.store
        self._order: List[Term] = []
        self._seen = set()
        for assignment in problem.inputs:
            for t in subterms(assignment.term):
                self._add(t)
        self._mark = len(self._store)
        self._input_mark = self._mark

    def _add(self, term: Term) -> None:
        if term.id not in self._seen:
            self._seen.add(term.id)
            self._order.append(term)

    def is_derived(self, term: Term) -> bool:
        return term.id >= self._input_mark

    def refresh(self) -> None:
        if self._mark < len(self._store):
            for t in self._store.since(self._mark):
                self._add(t)
            self._mark = len(self._store)

    def __iter__(self) -> Iterator[Term]:
        self.refresh()
        return iter(list(self._order))

    def __len__(self):
        self.refresh()
        return len(self._order)

    def __contains__(self, term: Term) -> bool:
        self.refresh()
        return term.id in self._seen


def relevant_basis(problem: Problem) -> Basis:
    return Basis(problem)
