"""Brute-force ground truth for small problems.

Every oracle enumerates the polarities of the Boolean atoms and checks each
combination that satisfies the Boolean structure with a decision procedure
that shares nothing with the solver's search: plain truth tables,
Fourier-Motzkin elimination, or congruence closure.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterator, List

from core.exceptions import TooLarge
from core.terms import BOOL, FALSE, RAT, TRUE, AbsValue, Assignment, BoolValue, Problem, SymbolKind, Term, subterms
from core.theories.arith import constraints_of, is_arith_atom, is_satisfiable, is_variable
from core.theories.boolean import atoms_of, eval_connectives
from core.theories.congruence import CongruenceClosure

logger = logging.getLogger(__name__)

MAX_BOOL_ATOMS = 8
MAX_LRA_VARIABLES = 5
MAX_LRA_ATOMS = 12
MAX_EUF_TERMS = 6


def _split(problem: Problem):
    boolean = [a for a in problem.inputs if a.is_boolean]
    first_order = [a for a in problem.inputs if not a.is_boolean]
    return boolean, first_order


def _polarities(atoms: List[Term]) -> Iterator[Dict[Term, BoolValue]]:
    for bits in itertools.product((False, True), repeat=len(atoms)):
        yield {atom: BoolValue(bit) for atom, bit in zip(atoms, bits)}


def _endorsed(boolean: List[Assignment], polarity: Dict[Term, BoolValue]) -> bool:
    return all(eval_connectives(a.term, polarity) == a.value for a in boolean)


def _is_free_bool(term: Term) -> bool:
    return term.sort == BOOL and term.kind is SymbolKind.CONST


def bool_oracle(problem: Problem) -> str:
    boolean, first_order = _split(problem)
    atoms = atoms_of([a.term for a in boolean] + [a.term for a in first_order])
    if first_order or any(not _is_free_bool(t) for t in atoms):
        raise ValueError("not a propositional problem")
    if len(atoms) > MAX_BOOL_ATOMS:
        raise TooLarge(f"{len(atoms)} atoms, at most {MAX_BOOL_ATOMS}")
    for polarity in _polarities(atoms):
        if _endorsed(boolean, polarity):
            return "sat"
    return "unsat"


def lra_oracle(problem: Problem) -> str:
    boolean, first_order = _split(problem)
    atoms = atoms_of([a.term for a in boolean])
    if any(not (is_arith_atom(t) or _is_free_bool(t)) for t in atoms):
        raise ValueError("not a linear arithmetic problem")
    if any(a.term.sort != RAT for a in first_order):
        raise ValueError("first-order inputs must be rational")
    variables = {
        t.id
        for term in atoms + [a.term for a in first_order]
        for t in subterms(term)
        if is_variable(t)
    }
    arith = [t for t in atoms if is_arith_atom(t)]
    if len(variables) > MAX_LRA_VARIABLES:
        raise TooLarge(f"{len(variables)} variables, at most {MAX_LRA_VARIABLES}")
    if len(arith) > MAX_LRA_ATOMS:
        raise TooLarge(f"{len(arith)} atoms, at most {MAX_LRA_ATOMS}")
    fixed = [c for a in first_order for c in constraints_of(a)]
    for polarity in _polarities(atoms):
        if not _endorsed(boolean, polarity):
            continue
        constraints = list(fixed)
        for atom in arith:
            constraints.extend(constraints_of(Assignment(atom, polarity[atom])))
        if is_satisfiable(constraints):
            return "sat"
    return "unsat"


def _is_equality(term: Term) -> bool:
    return term.kind is SymbolKind.EQ and term.args[0].sort.is_uninterpreted


def euf_oracle(problem: Problem) -> str:
    boolean, first_order = _split(problem)
    atoms = atoms_of([a.term for a in boolean])
    if any(not (_is_equality(t) or _is_free_bool(t)) for t in atoms):
        raise ValueError("not an equality problem")
    if any(not isinstance(a.value, AbsValue) for a in first_order):
        raise ValueError("first-order inputs must assign abstract values")
    ground = {
        t.id: t
        for term in atoms + [a.term for a in first_order]
        for t in subterms(term)
        if t.sort != BOOL
    }
    if len(ground) > MAX_EUF_TERMS:
        raise TooLarge(f"{len(ground)} ground terms, at most {MAX_EUF_TERMS}")
    equalities = [t for t in atoms if _is_equality(t)]
    for polarity in _polarities(atoms):
        if not _endorsed(boolean, polarity):
            continue
        cc = CongruenceClosure()
        for t in ground.values():
            cc.add(t)
        for atom in equalities:
            if polarity[atom] == TRUE:
                cc.merge(atom.args[0], atom.args[1], frozenset())
        holders: Dict[AbsValue, Term] = {}
        for a in first_order:
            if a.value in holders:
                cc.merge(a.term, holders[a.value], frozenset())
            else:
                holders[a.value] = a.term
        values_apart = all(
            not cc.same(s, t)
            for v, s in holders.items()
            for w, t in holders.items()
            if v != w
        )
        diseqs_apart = all(
            not cc.same(*atom.args) for atom in equalities if polarity[atom] == FALSE
        )
        if values_apart and diseqs_apart:
            return "sat"
    return "unsat"


ORACLES = {
    "bool": bool_oracle,
    "lra": lra_oracle,
    "euf": euf_oracle,
}


def oracle(problem: Problem, family: str) -> str:
    """``sat`` or ``unsat`` by enumeration; TooLarge past the family's bounds."""
    if family not in ORACLES:
        raise ValueError(f"unknown family {family}")
    return ORACLES[family](problem)
