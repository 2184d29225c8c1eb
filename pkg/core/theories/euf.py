"""Equality with uninterpreted functions, the leading theory of the union.

The module sees every first-order assignment and every equality atom. Each
call rebuilds a congruence closure from the true equalities on the trail and
reads its propagations off the classes.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Tuple

from ..terms import (
    BOOL,
    FALSE,
    RAT,
    TRUE,
    AbsValue,
    Assignment,
    BoolValue,
    SymbolKind,
    Term,
    TheoryId,
)
from .base import EVALUATION, PROPAGATION, CandidateSet, Inference, TheoryModule, View
from .congruence import CongruenceClosure

logger = logging.getLogger(__name__)


def is_equality(term: Term) -> bool:
    return term.kind is SymbolKind.EQ


def in_signature(term: Term) -> bool:
    """Terms the closure tracks: uninterpreted sorts and applications plus their arguments."""
    return term.sort.is_uninterpreted or term.kind is SymbolKind.FUN


class _Closure:
    """Congruence closure plus the value and disequality facts of a trail."""

    def __init__(self, cc: CongruenceClosure):
        self.cc = cc
        self.values: Dict[Term, List[Assignment]] = defaultdict(list)
        self.diseqs: List[Assignment] = []

    def clone(self) -> "_Closure":
        other = _Closure(self.cc.clone())
        other.values = defaultdict(list, {k: list(v) for k, v in self.values.items()})
        other.diseqs = list(self.diseqs)
        return other

    def class_values(self, term: Term) -> List[Assignment]:
        out = []
        for member in self.cc.members(term):
            out.extend(self.values.get(member, ()))
        return out

    def value_clash(self) -> Optional[Tuple[Assignment, Assignment]]:
        for cls in self.cc.classes():
            vals = [a for m in cls for a in self.values.get(m, ())]
            for a in vals[1:]:
                if a.value != vals[0].value:
                    return vals[0], a
        return None

    def diseq_inside(self) -> Optional[Assignment]:
        for d in self.diseqs:
            lhs, rhs = d.term.args
            if self.cc.same(lhs, rhs):
                return d
        return None

    def separated(self, a: Term, b: Term) -> Optional[Tuple[Assignment, bool]]:
        """A disequality between the classes of a and b, and whether it is flipped."""
        for d in self.diseqs:
            lhs, rhs = d.term.args
            if self.cc.same(lhs, a) and self.cc.same(rhs, b):
                return d, False
            if self.cc.same(lhs, b) and self.cc.same(rhs, a):
                return d, True
        return None


def build_closure(
    terms: Iterable[Term], facts: Iterable[Assignment]
) -> _Closure:
    cc = CongruenceClosure()
    for t in terms:
        cc.add(t)
    closure = _Closure(cc)
    for fact in facts:
        term = fact.term
        if is_equality(term):
            lhs, rhs = term.args
            cc.add(lhs)
            cc.add(rhs)
            if fact.value == TRUE:
                cc.merge(lhs, rhs, frozenset({fact}))
            else:
                closure.diseqs.append(fact)
        elif term in cc:
            closure.values[term].append(fact)
    return closure


class EufModule(TheoryModule):
    module_id = TheoryId.EUF.value

    def understands(self, term: Term) -> bool:
        return term.sort != BOOL or is_equality(term) or term.kind is SymbolKind.FUN

    def _closure(self, view: View) -> _Closure:
        terms = []
        for t in view.basis:
            if in_signature(t):
                terms.append(t)
            elif is_equality(t) and t.args[0].sort != RAT:
                terms.extend(t.args)
        return build_closure(terms, view.assignments())

    def infer(self, view: View) -> Optional[Inference]:
        trail = view.trail
        closure = self._closure(view)
        cc = closure.cc
        candidates = CandidateSet(trail)
        equalities = [t for t in view.basis if is_equality(t) and t.args[0] in cc and t.args[1] in cc]

        # closure: sides already congruent
        for atom in equalities:
            lhs, rhs = atom.args
            if cc.same(lhs, rhs):
                premises = cc.explain(lhs, rhs)
                candidates.offer(PROPAGATION, self.inference("closure", premises, Assignment(atom, TRUE)))

        # a disequality between two classes falsifies every atom across them
        for atom in equalities:
            lhs, rhs = atom.args
            if cc.same(lhs, rhs):
                continue
            hit = closure.separated(lhs, rhs)
            if hit is None:
                continue
            diseq, flipped = hit
            d_lhs, d_rhs = diseq.term.args
            if flipped:
                d_lhs, d_rhs = d_rhs, d_lhs
            premises = cc.explain(lhs, d_lhs) | cc.explain(rhs, d_rhs) | {diseq}
            candidates.offer(PROPAGATION, self.inference("diseq", premises, Assignment(atom, FALSE)))
        if candidates.has_clash:
            return candidates.best

        # two members of one class holding different values
        clash = closure.value_clash()
        if clash is not None:
            first, second = clash
            s, t = first.term, second.term
            atom = self.store.eq(s, t)
            candidates.offer(PROPAGATION, self.inference("class-value", cc.explain(s, t), Assignment(atom, TRUE)))

        # equal values in different classes are merged by an explicit equality
        shared = {arg.id for t in cc.order if t.kind is SymbolKind.FUN for arg in t.args}
        valued: List[Assignment] = []
        for cls in cc.classes():
            for member in cls:
                if member.sort == BOOL:
                    continue
                if not member.sort.is_uninterpreted and member.id not in shared:
                    continue
                if closure.values.get(member):
                    valued.append(closure.values[member][0])
                    break
        for i, first in enumerate(valued):
            for second in valued[i + 1 :]:
                if first.value == second.value and not cc.same(first.term, second.term):
                    atom = self.store.eq(first.term, second.term)
                    candidates.offer(
                        PROPAGATION, self.inference("value-eq", (first, second), Assignment(atom, TRUE))
                    )

        # evaluation of equalities between valued non-arithmetic terms
        for atom in equalities:
            lhs, rhs = atom.args
            if lhs.sort == RAT:
                continue
            lv, rv = trail.value_of(lhs), trail.value_of(rhs)
            if lv is None or rv is None:
                continue
            inference = self.inference(
                "eval",
                (Assignment(lhs, lv), Assignment(rhs, rv)),
                Assignment(atom, BoolValue(lv == rv)),
            )
            candidates.offer(EVALUATION, inference)
        return candidates.best

    def decide(self, view: View) -> Optional[Assignment]:
        trail = view.trail
        closure = None
        for term in view.basis:
            if not term.sort.is_uninterpreted or trail.is_assigned(term):
                continue
            if closure is None:
                closure = self._closure(view)
            if term not in closure.cc:
                closure.cc.add(term)
            held = closure.class_values(term)
            if held:
                return Assignment(term, held[0].value)
            return Assignment(term, self._fresh_value(closure, term))
        return None

    def _fresh_value(self, closure: _Closure, term: Term) -> AbsValue:
        """Smallest abstract value whose classes can absorb ``term`` consistently."""
        index = 0
        while True:
            value = AbsValue(term.sort, index)
            holders = [
                t for t, facts in closure.values.items() if facts and facts[0].value == value
            ]
            if not holders:
                return value
            trial = closure.clone()
            for t in holders:
                trial.cc.merge(term, t, frozenset())
            if trial.diseq_inside() is None and trial.value_clash() is None:
                return value
            index += 1

    def check_inference(self, premises: Iterable[Assignment], conclusion: Assignment) -> bool:
        premises = list(premises)
        if not conclusion.is_boolean or not is_equality(conclusion.term):
            return False
        terms = []
        for a in premises + [conclusion]:
            if is_equality(a.term):
                terms.extend(a.term.args)
            else:
                terms.append(a.term)
        closure = build_closure(terms, premises)
        cc = closure.cc
        by_value: Dict[tuple, Term] = {}
        for term in list(closure.values):
            for fact in closure.values[term]:
                key = (str(fact.value.sort), str(fact.value))
                if key in by_value:
                    cc.merge(term, by_value[key], frozenset({fact}))
                else:
                    by_value[key] = term
        if closure.diseq_inside() is not None or closure.value_clash() is not None:
            return True
        lhs, rhs = conclusion.term.args
        if conclusion.value == TRUE:
            return cc.same(lhs, rhs)
        if closure.separated(lhs, rhs) is not None:
            return True
        lvals, rvals = closure.class_values(lhs), closure.class_values(rhs)
        return bool(lvals and rvals and lvals[0].value != rvals[0].value)
