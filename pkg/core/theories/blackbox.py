"""Black-box theory modules: a decision procedure wrapped as an inference system.

The adapter hands its view to an oracle answering Sat(model) or
Unsat(core). An unsatisfiable core surfaces on the trail as a Boolean
conflict: the latest Boolean element of the core is flipped, justified by
the rest of the core.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence

from ..exceptions import UnsupportedCore
from ..terms import RAT, Assignment, RatValue, Term
from .arith import constraints_of, find_model, is_arith_atom, is_variable
from .base import Inference, OracleSat, OracleUnsat, TheoryModule, View

logger = logging.getLogger(__name__)


class FmOracle:
    """Satisfiability of rational constraints by Fourier-Motzkin elimination."""

    name = "FM"

    def understands(self, term: Term) -> bool:
        return term.sort == RAT or is_arith_atom(term)

    def _constraints(self, assignments: Sequence[Assignment], keep: Iterable[int]):
        out = []
        for i in keep:
            out.extend(constraints_of(assignments[i]) or ())
        return out

    def query(self, assignments: Sequence[Assignment]):
        relevant = [i for i, a in enumerate(assignments) if constraints_of(a)]
        model = find_model(self._constraints(assignments, relevant))
        if model is not None:
            return OracleSat(model)
        # deletion-based minimisation, latest elements first
        core = list(relevant)
        for i in reversed(relevant):
            trial = [j for j in core if j != i]
            if find_model(self._constraints(assignments, trial)) is None:
                core = trial
        return OracleUnsat(frozenset(core))


class BlackBoxModule(TheoryModule):
    def __init__(self, store, oracle=None):
        super().__init__(store)
        self.oracle = oracle or FmOracle()
        self.module_id = f"BB-{self.oracle.name}"

    def understands(self, term: Term) -> bool:
        return self.oracle.understands(term)

    def explain_core(self, view: View, core: Iterable[int]) -> Inference:
        positions = sorted(view.indices[i] for i in core)
        boolean = [p for p in positions if view.trail[p].assignment.is_boolean]
        if not boolean:
            raise UnsupportedCore(
                "core has no Boolean element: "
                + ", ".join(str(view.trail[p].assignment) for p in positions)
            )
        pivot = view.trail[boolean[-1]].assignment
        premises = [view.trail[p].assignment for p in positions if view.trail[p].assignment != pivot]
        return self.inference("oracle-core", premises, pivot.flip())

    def infer(self, view: View) -> Optional[Inference]:
        verdict = self.oracle.query(view.assignments())
        if isinstance(verdict, OracleSat):
            return None
        try:
            return self.explain_core(view, verdict.core)
        except UnsupportedCore as exc:
            logger.warning("black box %s refused core: %s", self.module_id, exc)
            return None

    def decide(self, view: View) -> Optional[Assignment]:
        trail = view.trail
        pending = [t for t in view.basis if is_variable(t) and not trail.is_assigned(t)]
        if not pending:
            return None
        verdict = self.oracle.query(view.assignments())
        model: Dict[Term, Fraction] = verdict.model if isinstance(verdict, OracleSat) else {}
        v = pending[0]
        return Assignment(v, RatValue(model.get(v, Fraction(0))))

    def check_inference(self, premises: Iterable[Assignment], conclusion: Assignment) -> bool:
        if not conclusion.is_boolean or constraints_of(conclusion.flip()) is None:
            return False
        verdict = self.oracle.query(list(premises) + [conclusion.flip()])
        return isinstance(verdict, OracleUnsat)
