"""The propositional module: evaluation, clause propagation, phase-true decisions."""

from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterable, List, Optional

from ..terms import (
    BOOL,
    CONNECTIVES,
    FALSE,
    TRUE,
    Assignment,
    BoolValue,
    SymbolKind,
    Term,
    TheoryId,
    apply_head,
)
from .arith import is_arith_atom
from .base import EVALUATION, PROPAGATION, CandidateSet, Inference, TheoryModule, View

logger = logging.getLogger(__name__)

CONSTANTS = (SymbolKind.TRUE, SymbolKind.FALSE)

# truth tables beyond this many atoms are refused
MAX_TABLE_ATOMS = 20


def is_connective(term: Term) -> bool:
    return term.kind in CONNECTIVES


def atoms_of(terms: Iterable[Term]) -> List[Term]:
    """Maximal non-connective Boolean subterms, first occurrence order."""
    seen, out = set(), []
    stack = list(reversed(list(terms)))
    while stack:
        t = stack.pop()
        if is_connective(t):
            stack.extend(reversed(t.args))
        elif t.kind not in CONSTANTS and t.id not in seen:
            seen.add(t.id)
            out.append(t)
    return out


def eval_connectives(term: Term, atoms: Dict[Term, BoolValue]) -> Optional[BoolValue]:
    if term in atoms:
        return atoms[term]
    if is_connective(term):
        return apply_head(term.head, [eval_connectives(a, atoms) for a in term.args])
    if term.kind in CONSTANTS:
        return apply_head(term.head, [])
    return None


class BoolModule(TheoryModule):
    module_id = TheoryId.BOOL.value

    def understands(self, term: Term) -> bool:
        return term.sort == BOOL

    def infer(self, view: View) -> Optional[Inference]:
        trail = view.trail
        candidates = CandidateSet(trail)
        for index in view.indices:
            item = trail[index]
            if is_connective(item.term):
                for inference in self._propagate(item.assignment, trail):
                    candidates.offer(PROPAGATION, inference)
        if candidates.has_clash:
            return candidates.best
        for term in view.basis:
            if is_connective(term) or term.kind in CONSTANTS:
                inference = self._evaluate(term, trail)
                if inference is not None:
                    candidates.offer(EVALUATION, inference)
        return candidates.best

    def _evaluate(self, term: Term, trail) -> Optional[Inference]:
        kind = term.kind
        if kind in CONSTANTS:
            return self.inference("eval", (), Assignment(term, apply_head(term.head, [])))
        children = [
            None if trail.value_of(a) is None else Assignment(a, trail.value_of(a))
            for a in term.args
        ]
        values = [None if c is None else c.value for c in children]
        value = apply_head(term.head, values)
        if value is None:
            return None
        if kind is SymbolKind.NOT:
            premises = children
        elif kind in (SymbolKind.AND, SymbolKind.OR):
            decisive = FALSE if kind is SymbolKind.AND else TRUE
            if value == decisive:
                premises = [next(c for c in children if c is not None and c.value == decisive)]
            else:
                premises = children
        else:
            p, q = children
            if value == FALSE:
                premises = [p, q]
            elif p is not None and p.value == FALSE:
                premises = [p]
            else:
                premises = [q]
        return self.inference("eval", premises, Assignment(term, value))

    def _propagate(self, assignment: Assignment, trail) -> List[Inference]:
        term, value = assignment.term, assignment.value
        kind = term.kind
        out = []

        def forced(child: Term, child_value: BoolValue, extra=()):
            out.append(
                self.inference("propagate", (assignment, *extra), Assignment(child, child_value))
            )

        if kind is SymbolKind.NOT:
            forced(term.args[0], BoolValue(not value.value))
        elif kind is SymbolKind.IMPLIES:
            p, q = term.args
            if value == FALSE:
                forced(p, TRUE)
                forced(q, FALSE)
            else:
                if trail.value_of(p) == TRUE:
                    forced(q, TRUE, (Assignment(p, TRUE),))
                if trail.value_of(q) == FALSE:
                    forced(p, FALSE, (Assignment(q, FALSE),))
        else:
            # and/or: the absorbing value spreads to every child, otherwise unit rule
            absorbing = FALSE if kind is SymbolKind.OR else TRUE
            if value == absorbing:
                for child in dict.fromkeys(term.args):
                    forced(child, absorbing)
            else:
                children = list(dict.fromkeys(term.args))
                open_children = [c for c in children if trail.value_of(c) != absorbing]
                if len(open_children) == 1:
                    falsified = [Assignment(c, absorbing) for c in children if c is not open_children[0]]
                    forced(open_children[0], value, falsified)
        return out

    def decide(self, view: View) -> Optional[Assignment]:
        trail = view.trail
        basis = view.basis
        for term in basis:
            if (
                term.sort == BOOL
                and not is_connective(term)
                and term.kind not in CONSTANTS
                and not trail.is_assigned(term)
                # resolvents are valued by LRA evaluation, never guessed
                and not (is_arith_atom(term) and basis.is_derived(term))
            ):
                return Assignment(term, TRUE)
        return None

    def check_inference(self, premises: Iterable[Assignment], conclusion: Assignment) -> bool:
        premises = list(premises)
        if not conclusion.is_boolean or not all(p.is_boolean for p in premises):
            return False
        atoms = atoms_of([p.term for p in premises] + [conclusion.term])
        if len(atoms) > MAX_TABLE_ATOMS:
            logger.warning("truth table over %d atoms refused", len(atoms))
            return False
        for row in itertools.product((TRUE, FALSE), repeat=len(atoms)):
            valuation = dict(zip(atoms, row))
            if all(eval_connectives(p.term, valuation) == p.value for p in premises):
                if eval_connectives(conclusion.term, valuation) != conclusion.value:
                    return False
        return True
