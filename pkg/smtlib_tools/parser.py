"""Reader for the QF_UFLRA subset of SMT-LIB, with the ``assign`` command.

Scripts are tokenized and built by pysmt's ``SmtLibParser``; the resulting
formulas are then interned into the problem's term store.

``(assert phi)`` becomes the input ``phi <- true``; ``(assign t v)`` becomes
``t <- v`` where ``v`` is a rational literal, ``true``/``false`` or
``(abs <Sort> <n>)``. ``>``, ``>=``, ``distinct`` and chained comparisons
are desugared while reading.
"""

from __future__ import annotations

import functools
import io
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Dict, List, Optional

from pysmt import operators as op
from pysmt.environment import Environment
from pysmt.exceptions import PysmtException, PysmtSyntaxError, PysmtTypeError, UnknownSmtLibCommandError
from pysmt.fnode import FNode
from pysmt.logics import QF_UFLRA
from pysmt.smtlib.parser import SmtLibParser, Tokenizer

from core.exceptions import IllSorted, NonLinearTerm
from core.terms import BOOL, FALSE, RAT, TRUE, AbsValue, Assignment, Problem, RatValue, Sort, Term

from .exceptions import ParseError, ScriptSyntaxError, SortError, UndeclaredSymbol, UnsupportedCommand

logger = logging.getLogger(__name__)

BUILTIN_SORTS = {"Bool": BOOL, "Real": RAT}

# recognised by SMT-LIB but outside the supported fragment
UNSUPPORTED_CONSTRUCTS = frozenset({"let", "ite", "forall", "exists", "!", "_", "xor", "to_real", "as"})


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple = ()


@dataclass
class Script:
    problem: Problem
    commands: List[Command] = field(default_factory=list)
    logic: Optional[str] = None

    def has(self, name: str) -> bool:
        return any(c.name == name for c in self.commands)

    @property
    def wants_model(self) -> bool:
        return self.has("get-model")

    @property
    def wants_proof(self) -> bool:
        return self.has("get-proof")


def position(tokens) -> tuple:
    """(line, col) of the token just consumed, 1-based lines."""
    info = tokens.pos_info
    if info is None:
        return 1, 0
    row, col = info
    # atoms are read together with the character after them; col 0 means it was a newline
    return max(row + 1 if col else row, 1), col


def is_numeral(token: str) -> bool:
    if not token[:1].isdigit():
        return False
    try:
        Decimal(token)
    except InvalidOperation:
        return False
    return True


class ScriptParser(SmtLibParser):
    """Builds a ``Script`` command by command; one parser per problem.

    Every parser owns a private pysmt environment, so declarations never leak
    between scripts. ``commands`` and ``interpreted`` are pysmt's dispatch
    tables, narrowed to the supported fragment.
    """

    def __init__(self, problem: Optional[Problem] = None):
        super().__init__(environment=Environment())
        self.problem = problem or Problem()
        self.store = self.problem.store
        self.script = Script(self.problem)
        self._done = False
        self._types: Dict[str, object] = {}
        self._terms: Dict[FNode, Term] = {}
        self.commands = {
            "set-logic": self._cmd_set_logic,
            "declare-sort": self._cmd_declare_sort,
            "declare-const": self._cmd_declare_const,
            "declare-fun": self._cmd_declare_fun,
            "assert": self._cmd_assert,
            "assign": self._cmd_assign,
            "check-sat": self._cmd_check_sat,
            "get-model": self._cmd_nullary,
            "get-proof": self._cmd_nullary,
            "exit": self._cmd_exit,
        }
        adapt = self._operator_adapter
        self.interpreted = {
            "not": adapt(self._op_not),
            "and": adapt(functools.partial(self._variadic, op.AND)),
            "or": adapt(functools.partial(self._variadic, op.OR)),
            "=>": adapt(self._op_implies),
            "=": adapt(functools.partial(self._chain, self._equals)),
            "distinct": adapt(self._op_distinct),
            "<": adapt(functools.partial(self._chain, lambda a, b: self._node(op.LT, a, b))),
            "<=": adapt(functools.partial(self._chain, lambda a, b: self._node(op.LE, a, b))),
            ">": adapt(functools.partial(self._chain, lambda a, b: self._node(op.LT, b, a))),
            ">=": adapt(functools.partial(self._chain, lambda a, b: self._node(op.LE, b, a))),
            "+": adapt(functools.partial(self._variadic, op.PLUS)),
            "-": adapt(self._op_minus),
            "*": adapt(self._op_times),
            "/": adapt(self._op_div),
        }

    def _reset(self):
        super()._reset()
        # numerals are Reals throughout the fragment, whatever set-logic says
        self.logic = QF_UFLRA

    # ------------------------------------------------------------ entry points

    def parse(self, text: str) -> Script:
        tokens = Tokenizer(io.StringIO(text))
        with self._positioned(tokens):
            for command in self.get_command(tokens):
                if command is not None:
                    self.script.commands.append(command)
                if self._done:
                    break
        logger.debug(
            "parsed %d commands, %d inputs", len(self.script.commands), len(self.problem.inputs)
        )
        return self.script

    def parse_term(self, text: str) -> Term:
        """A single term over the declarations read so far."""
        tokens = Tokenizer(io.StringIO(text))
        with self._positioned(tokens):
            return self._expression(tokens, "term")

    @contextmanager
    def _positioned(self, tokens):
        try:
            yield
        except ParseError:
            raise
        except UnknownSmtLibCommandError as exc:
            raise UnsupportedCommand(f"unsupported command {exc}", *position(tokens)) from exc
        except (PysmtTypeError, IllSorted) as exc:
            raise SortError(str(exc), *position(tokens)) from exc
        except (PysmtSyntaxError, NotImplementedError) as exc:
            raise ScriptSyntaxError(str(exc), *position(tokens)) from exc
        except PysmtException as exc:
            raise ScriptSyntaxError(str(exc), *position(tokens)) from exc

    # ---------------------------------------------------------------- commands

    def _symbol(self, tokens, command: str) -> str:
        token = self.parse_atom(tokens, command)
        if is_numeral(token):
            raise ScriptSyntaxError(f"expected a symbol, got {token}", *position(tokens))
        return token

    def _sort(self, tokens, command: str) -> Sort:
        name = tokens.consume(f"unexpected end of input in {command}")
        if name in BUILTIN_SORTS:
            return BUILTIN_SORTS[name]
        if name in self.problem.sorts:
            return self.problem.sorts[name]
        raise SortError(f"unknown sort {name}", *position(tokens))

    def _smt_type(self, sort: Sort):
        types = self.env.type_manager
        if sort == BOOL:
            return types.BOOL()
        if sort == RAT:
            return types.REAL()
        return self._types[sort.name]

    def _fresh_name(self, tokens, command: str) -> str:
        name = self._symbol(tokens, command)
        if name in self.interpreted or name in ("true", "false") or name in BUILTIN_SORTS:
            raise ScriptSyntaxError(f"{name} is reserved", *position(tokens))
        if name in self.problem.symbols or name in self.problem.sorts:
            raise ScriptSyntaxError(f"{name} is declared twice", *position(tokens))
        return name

    def _cmd_set_logic(self, current, tokens) -> Command:
        """(set-logic <symbol>)"""
        (self.script.logic,) = self.parse_atoms(tokens, current, 1)
        return Command(current, (self.script.logic,))

    def _cmd_declare_sort(self, current, tokens) -> Command:
        """(declare-sort <symbol> [0])"""
        name = self._fresh_name(tokens, current)
        arity = self.parse_atoms(tokens, current, 0, 1)
        if arity and arity[0] != "0":
            raise UnsupportedCommand("only sorts of arity 0 are supported", *position(tokens))
        sort = self.problem.declare_sort(name)
        types = self.env.type_manager
        self._types[name] = types.get_type_instance(types.Type(name, 0))
        return Command(current, (sort.name, 0))

    def _declare(self, name: str, arg_sorts: tuple, sort: Sort) -> None:
        self.problem.declare_fun(name, arg_sorts, sort)
        types = self.env.type_manager
        smt_type = self._smt_type(sort)
        if arg_sorts:
            smt_type = types.FunctionType(smt_type, [self._smt_type(s) for s in arg_sorts])
        symbol = self.env.formula_manager.Symbol(name, smt_type)
        if arg_sorts:
            self.cache.bind(name, functools.partial(self._function_call_helper, symbol))
        else:
            self.cache.bind(name, symbol)

    def _cmd_declare_const(self, current, tokens) -> Command:
        """(declare-const <symbol> <sort>)"""
        name = self._fresh_name(tokens, current)
        sort = self._sort(tokens, current)
        self.consume_closing(tokens, current)
        self._declare(name, (), sort)
        return Command(current, (name, sort))

    def _cmd_declare_fun(self, current, tokens) -> Command:
        """(declare-fun <symbol> (<sort>*) <sort>)"""
        name = self._fresh_name(tokens, current)
        if tokens.consume(f"unexpected end of input in {current}") != "(":
            raise ScriptSyntaxError(f"expected the argument sorts of {name}", *position(tokens))
        arg_sorts = []
        while True:
            token = tokens.consume(f"unexpected end of input in {current}")
            if token == ")":
                break
            tokens.add_extra_token(token)
            arg_sorts.append(self._sort(tokens, current))
        sort = self._sort(tokens, current)
        self.consume_closing(tokens, current)
        self._declare(name, tuple(arg_sorts), sort)
        return Command(current, (name, tuple(s.name for s in arg_sorts), sort))

    def _cmd_assert(self, current, tokens) -> Command:
        """(assert <term>)"""
        formula = self._expression(tokens, current)
        self.consume_closing(tokens, current)
        if formula.sort != BOOL:
            raise SortError(f"asserted term {formula} is not Boolean", *position(tokens))
        self.problem.assert_formula(formula)
        return Command(current, (formula,))

    def _cmd_assign(self, current, tokens) -> Command:
        """(assign <term> <value>)"""
        term = self._expression(tokens, current)
        value = self._value(tokens, current)
        self.consume_closing(tokens, current)
        try:
            self.problem.add_input(Assignment(term, value))
        except IllSorted as exc:
            raise SortError(str(exc), *position(tokens)) from exc
        return Command(current, (term, value))

    def _cmd_check_sat(self, current, tokens) -> Command:
        self.parse_atoms(tokens, current, 0)
        if self.script.has(current):
            raise ScriptSyntaxError("at most one check-sat is supported", *position(tokens))
        return Command(current)

    def _cmd_nullary(self, current, tokens) -> Command:
        self.parse_atoms(tokens, current, 0)
        return Command(current)

    def _cmd_exit(self, current, tokens) -> Command:
        self.parse_atoms(tokens, current, 0)
        self._done = True
        return Command(current)

    # ------------------------------------------------------------------ values

    def _value(self, tokens, command: str):
        token = tokens.consume(f"unexpected end of input in {command}")
        if token == "(":
            head = tokens.consume(f"unexpected end of input in {command}")
            if head == "abs":
                sort_name, index = self.parse_atoms(tokens, head, 2)
                if sort_name not in self.problem.sorts:
                    raise ScriptSyntaxError(f"unknown sort in (abs {sort_name} {index})", *position(tokens))
                if not index.isdigit():
                    raise ScriptSyntaxError(f"bad abstract index {index}", *position(tokens))
                return AbsValue(self.problem.sorts[sort_name], int(index))
            tokens.add_extra_token(token)
            tokens.add_extra_token(head)
        else:
            tokens.add_extra_token(token)
        node = self._formula(tokens, command)
        if node.is_bool_constant():
            return TRUE if node.is_true() else FALSE
        if node.is_real_constant() or node.is_int_constant():
            return RatValue(Fraction(node.constant_value()))
        raise ScriptSyntaxError(f"not a value literal: {node}", *position(tokens))

    # ------------------------------------------------------------------ terms

    def _scan(self, tokens, command: str) -> None:
        """Check the symbols of the next expression, then hand its tokens back."""
        collected = []
        depth = 0
        at_head = False
        while True:
            token = tokens.consume(f"unexpected end of input in {command}")
            collected.append(token)
            if token == "(":
                depth += 1
                at_head = True
                continue
            if token == ")":
                depth -= 1
                if depth < 0:
                    raise ScriptSyntaxError("unexpected ')'", *position(tokens))
            else:
                self._check_symbol(token, at_head, tokens)
            at_head = False
            if depth == 0:
                break
        for token in collected:
            tokens.add_extra_token(token)

    def _check_symbol(self, token: str, at_head: bool, tokens) -> None:
        if is_numeral(token) or token in ("true", "false"):
            return
        if at_head and token in self.interpreted:
            return
        if token in UNSUPPORTED_CONSTRUCTS:
            raise UnsupportedCommand(f"unsupported construct {token}", *position(tokens))
        symbol = self.problem.symbols.get(token)
        if symbol is None:
            kind = "function" if at_head else "symbol"
            raise UndeclaredSymbol(f"undeclared {kind} {token}", *position(tokens))
        if at_head and not symbol.arg_sorts:
            raise SortError(f"{token} is a constant, not a function", *position(tokens))
        if not at_head and symbol.arg_sorts:
            raise SortError(f"function {token} needs arguments", *position(tokens))

    def _formula(self, tokens, command: str) -> FNode:
        self._scan(tokens, command)
        return self.get_expression(tokens)

    def _expression(self, tokens, command: str) -> Term:
        return self._to_term(self._formula(tokens, command))

    def _to_term(self, node: FNode) -> Term:
        term = self._terms.get(node)
        if term is not None:
            return term
        kind = node.node_type()
        store = self.store
        if kind == op.SYMBOL:
            term = store.intern(self.problem.symbols[node.symbol_name()])
        elif kind == op.FUNCTION:
            symbol = self.problem.symbols[node.function_name().symbol_name()]
            term = store.intern(symbol, [self._to_term(a) for a in node.args()])
        elif kind == op.BOOL_CONSTANT:
            term = store.true() if node.is_true() else store.false()
        elif kind in (op.REAL_CONSTANT, op.INT_CONSTANT):
            term = store.numeral(Fraction(node.constant_value()))
        else:
            args = [self._to_term(a) for a in node.args()]
            if kind == op.NOT:
                term = store.not_(*args)
            elif kind == op.AND:
                term = store.and_(*args)
            elif kind == op.OR:
                term = store.or_(*args)
            elif kind == op.IMPLIES:
                term = store.implies(*args)
            elif kind in (op.IFF, op.EQUALS):
                term = store.eq(*args)
            elif kind == op.LT:
                term = store.lt(*args)
            elif kind == op.LE:
                term = store.le(*args)
            elif kind == op.PLUS:
                term = store.add(*args)
            elif kind == op.MINUS:
                term = store.sub(*args)
            elif kind == op.TIMES:
                term = args[0]
                for arg in args[1:]:
                    term = store.mul(term, arg)
            else:
                raise UnsupportedCommand(f"unsupported operator {op.op_to_str(kind)}")
        self._terms[node] = term
        return term

    # --------------------------------------------------------------- operators

    def _node(self, kind, *args: FNode) -> FNode:
        # create_node keeps the shape as written: no folding of not/and/or
        return self.env.formula_manager.create_node(node_type=kind, args=tuple(args))

    @staticmethod
    def _arity(name: str, args, at_least: int, at_most: Optional[int] = None) -> None:
        if len(args) < at_least or (at_most is not None and len(args) > at_most):
            raise PysmtSyntaxError(f"wrong number of arguments to {name}")

    def _equals(self, a: FNode, b: FNode) -> FNode:
        if self.env.stc.get_type(a).is_bool_type():
            return self._node(op.IFF, a, b)
        return self._node(op.EQUALS, a, b)

    def _variadic(self, kind, *args: FNode) -> FNode:
        self._arity(op.op_to_str(kind), args, 1)
        return self._node(kind, *args)

    def _chain(self, build, *args: FNode) -> FNode:
        self._arity("comparison", args, 2)
        links = [build(a, b) for a, b in zip(args, args[1:])]
        return links[0] if len(links) == 1 else self._node(op.AND, *links)

    def _op_not(self, *args: FNode) -> FNode:
        self._arity("not", args, 1, 1)
        return self._node(op.NOT, *args)

    def _op_implies(self, *args: FNode) -> FNode:
        self._arity("=>", args, 2)
        result = args[-1]
        for premise in reversed(args[:-1]):
            result = self._node(op.IMPLIES, premise, result)
        return result

    def _op_distinct(self, *args: FNode) -> FNode:
        self._arity("distinct", args, 2)
        pairs = [
            self._node(op.NOT, self._equals(a, b))
            for i, a in enumerate(args)
            for b in args[i + 1 :]
        ]
        return pairs[0] if len(pairs) == 1 else self._node(op.AND, *pairs)

    def _op_minus(self, *args: FNode) -> FNode:
        self._arity("-", args, 1)
        if len(args) == 1 and args[0].is_constant():
            return self.env.formula_manager.Real(-Fraction(args[0].constant_value()))
        return self._node(op.MINUS, *args)

    def _op_times(self, *args: FNode) -> FNode:
        self._arity("*", args, 2)
        return self._node(op.TIMES, *args)

    def _op_div(self, *args: FNode) -> FNode:
        self._arity("/", args, 2, 2)
        lhs, rhs = args
        if not rhs.is_constant() or Fraction(rhs.constant_value()) == 0:
            raise NonLinearTerm("division is only supported by a nonzero numeral")
        reciprocal = 1 / Fraction(rhs.constant_value())
        mgr = self.env.formula_manager
        if lhs.is_constant():
            return mgr.Real(Fraction(lhs.constant_value()) * reciprocal)
        return self._node(op.TIMES, mgr.Real(reciprocal), lhs)


def parse(text: str, problem: Optional[Problem] = None) -> Script:
    return ScriptParser(problem).parse(text)
