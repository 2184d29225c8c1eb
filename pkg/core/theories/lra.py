"""Linear rational arithmetic as a model-constructing module.

Variables receive rational values by decision. When the literals that bound a
variable (all other variables valued) leave no room, the module eliminates
the variable and concludes the Fourier-Motzkin resolvent of the two bounds.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from ..terms import BOOL, RAT, TRUE, Assignment, BoolValue, RatValue, SymbolKind, Term, TheoryId
from ..trail import ConflictState
from .arith import (
    EQ,
    LT,
    NE,
    Interval,
    LinearConstraint,
    LinearForm,
    assignments_satisfiable,
    choose,
    constraints_of,
    form_to_term,
    is_arith_atom,
    is_variable,
    linearize,
)
from .base import EVALUATION, PROPAGATION, CandidateSet, Inference, TheoryModule, View

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bound:
    """``v >= form`` (lower) or ``v <= form`` (upper) from one literal."""

    form: LinearForm
    strict: bool
    source: Assignment


def bounds_on(v: Term, constraint: LinearConstraint, source: Assignment):
    """Split a constraint mentioning v into lower bounds, upper bounds and exclusions."""
    a = constraint.form.coeff(v)
    if a == 0:
        return [], [], []
    form = constraint.form.without(v).scale(-1 / a)
    rel = constraint.rel
    if rel == EQ:
        b = Bound(form, False, source)
        return [b], [b], []
    if rel == NE:
        return [], [], [Bound(form, False, source)]
    b = Bound(form, rel == LT, source)
    return ([], [b], []) if a > 0 else ([b], [], [])


def resolvent_atom(store, lower: Bound, upper: Bound) -> Term:
    lhs = form_to_term(store, lower.form)
    rhs = form_to_term(store, upper.form)
    return store.lt(lhs, rhs) if lower.strict or upper.strict else store.le(lhs, rhs)


class LraModule(TheoryModule):
    module_id = TheoryId.LRA.value

    def understands(self, term: Term) -> bool:
        return term.sort == RAT or is_arith_atom(term)

    def _literals(self, view: View) -> List[Tuple[Assignment, List[LinearConstraint]]]:
        out = []
        for a in view.assignments():
            if a.term.sort == BOOL:
                constraints = constraints_of(a)
                if constraints:
                    out.append((a, constraints))
        return out

    @staticmethod
    def _values(view: View) -> Dict[Term, Fraction]:
        return {
            a.term: a.value.value for a in view.assignments() if isinstance(a.value, RatValue)
        }

    def _unit_bounds(self, v: Term, literals, values):
        lowers, uppers, excluded = [], [], []
        for source, constraints in literals:
            for c in constraints:
                if any(w is not v and w not in values for w in c.form.coeffs):
                    continue
                lo, up, ex = bounds_on(v, c, source)
                lowers += lo
                uppers += up
                excluded += ex
        return lowers, uppers, excluded

    @staticmethod
    def _tightest(bounds: List[Bound], values, lower: bool) -> Optional[Tuple[Bound, Fraction]]:
        best = None
        for b in bounds:
            q = b.form.value(values)
            if best is None:
                best = (b, q)
                continue
            _, bq = best
            better = q > bq if lower else q < bq
            if better or (q == bq and b.strict and not best[0].strict):
                best = (b, q)
        return best

    def _interval(self, v, literals, values):
        lowers, uppers, excluded = self._unit_bounds(v, literals, values)
        lo = self._tightest(lowers, values, lower=True)
        hi = self._tightest(uppers, values, lower=False)
        iv = Interval()
        if lo is not None:
            iv.tighten_lower(lo[1], lo[0].strict)
        if hi is not None:
            iv.tighten_upper(hi[1], hi[0].strict)
        return iv, lo, hi, excluded

    def _unassigned_variables(self, view: View) -> List[Term]:
        trail = view.trail
        return [t for t in view.basis if is_variable(t) and not trail.is_assigned(t)]

    def infer(self, view: View) -> Optional[Inference]:
        trail = view.trail
        candidates = CandidateSet(trail)
        literals = self._literals(view)
        values = self._values(view)

        for v in self._unassigned_variables(view):
            iv, lo, hi, excluded = self._interval(v, literals, values)
            if iv.is_empty:
                atom = resolvent_atom(self.store, lo[0], hi[0])
                premises = {lo[0].source, hi[0].source}
                candidates.offer(PROPAGATION, self.inference("fm-resolve", premises, Assignment(atom, TRUE)))
            elif iv.is_point:
                hit = next((d for d in excluded if d.form.value(values) == iv.lo), None)
                if hit is not None:
                    d_term = form_to_term(self.store, hit.form)
                    split = self.store.or_(
                        self.store.lt(form_to_term(self.store, lo[0].form), d_term),
                        self.store.lt(d_term, form_to_term(self.store, hi[0].form)),
                    )
                    premises = {lo[0].source, hi[0].source, hit.source}
                    candidates.offer(PROPAGATION, self.inference("diseq-split", premises, Assignment(split, TRUE)))
        if candidates.has_clash:
            return candidates.best

        for atom in view.basis:
            if not is_arith_atom(atom):
                continue
            lhs, rhs = (linearize(a) for a in atom.args)
            diff = lhs - rhs
            q = diff.value(values)
            if q is None:
                continue
            if atom.kind is SymbolKind.LT:
                value = q < 0
            elif atom.kind is SymbolKind.LE:
                value = q <= 0
            else:
                value = q == 0
            premises = [Assignment(w, RatValue(values[w])) for w in diff.variables]
            candidates.offer(EVALUATION, self.inference("eval", premises, Assignment(atom, BoolValue(value))))
        return candidates.best

    def decide(self, view: View) -> Optional[Assignment]:
        variables = self._unassigned_variables(view)
        if not variables:
            return None
        literals = self._literals(view)
        values = self._values(view)
        v = variables[0]
        iv, _, _, excluded = self._interval(v, literals, values)
        q = choose(iv, [d.form.value(values) for d in excluded])
        if q is None:
            logger.warning("no admissible value for %s, deciding an interval end", v)
            q = iv.lo if iv.lo is not None else Fraction(0)
        return Assignment(v, RatValue(q))

    def explain_undo(self, view: View, conflict: ConflictState, decision_index: int) -> List[Inference]:
        trail = view.trail
        decision = trail[decision_index]
        v = decision.term
        if not is_variable(v):
            return []
        surviving = []
        for index in view.indices:
            item = trail[index]
            if item.level >= decision.level or item.term.sort != BOOL:
                continue
            for c in constraints_of(item.assignment) or ():
                lowers, uppers, _ = bounds_on(v, c, item.assignment)
                in_conflict = index in conflict.elems
                surviving.append((in_conflict, lowers, uppers))

        out: List[Inference] = []
        seen = set()
        for i, (in_left, lowers, _) in enumerate(surviving):
            for j, (in_right, _, uppers) in enumerate(surviving):
                if not (in_left or in_right):
                    continue
                for lo in lowers:
                    for up in uppers:
                        if lo.source == up.source:
                            continue
                        atom = resolvent_atom(self.store, lo, up)
                        if atom.id in seen or trail.value_of(atom) == TRUE:
                            continue
                        diff = lo.form - up.form
                        if diff.is_constant and (diff.const < 0 or (diff.const == 0 and not (lo.strict or up.strict))):
                            continue
                        seen.add(atom.id)
                        out.append(
                            self.inference("fm-resolve", {lo.source, up.source}, Assignment(atom, TRUE))
                        )
        return out

    def check_inference(self, premises: Iterable[Assignment], conclusion: Assignment) -> bool:
        if not conclusion.is_boolean or constraints_of(conclusion.flip()) is None:
            return False
        return not assignments_satisfiable(list(premises) + [conclusion.flip()])
