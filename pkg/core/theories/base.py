"""Protocol shared by the theory modules."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional

from ..terms import Assignment, Basis, Term, TermStore, sorted_assignments
from ..trail import ConflictState, Trail

logger = logging.getLogger(__name__)

# candidate tiers inside infer, lowest wins
CLASH = 0
PROPAGATION = 1
EVALUATION = 2


@dataclass(frozen=True)
class Inference:
    module: str
    rule: str
    premises: FrozenSet[Assignment]
    conclusion: Assignment

    def ordered_premises(self) -> List[Assignment]:
        return sorted_assignments(self.premises)

    def __str__(self):
        prem = ", ".join(str(p) for p in self.ordered_premises())
        return f"{self.module}/{self.rule}: {{{prem}}} |- {self.conclusion}"


@dataclass
class View:
    """The trail items a module understands, by trail index."""

    trail: Trail
    basis: Basis
    indices: List[int] = field(default_factory=list)

    def assignments(self) -> List[Assignment]:
        return [self.trail[i].assignment for i in self.indices]


@dataclass(frozen=True)
class OracleSat:
    model: Dict[Term, object]


@dataclass(frozen=True)
class OracleUnsat:
    core: FrozenSet[int]


class CandidateSet:
    """Collects inference candidates and keeps the one with best priority.

    A candidate is admissible when its conclusion is unassigned or its flip is
    on the trail; clashes outrank propagations, which outrank evaluations,
    and within a tier the first one offered wins.
    """

    def __init__(self, trail: Trail):
        self.trail = trail
        self.best: Optional[Inference] = None
        self._rank = None
        self._seq = 0

    def offer(self, tier: int, inference: Inference) -> None:
        value = self.trail.value_of(inference.conclusion.term)
        if value == inference.conclusion.value:
            return
        if value is not None:
            tier = CLASH
        self._seq += 1
        rank = (tier, self._seq)
        if self._rank is None or rank < self._rank:
            self.best, self._rank = inference, rank

    @property
    def has_clash(self) -> bool:
        return self._rank is not None and self._rank[0] == CLASH


class TheoryModule(ABC):
    """An inference system over the trail fragment it understands."""

    module_id: str = ""

    def __init__(self, store: TermStore):
        self.store = store

    @abstractmethod
    def understands(self, term: Term) -> bool:
        ...

    def view(self, trail: Trail, basis: Basis) -> View:
        indices = [i for i, item in enumerate(trail) if self.understands(item.term)]
        return View(trail, basis, indices)

    @abstractmethod
    def infer(self, view: View) -> Optional[Inference]:
        ...

    @abstractmethod
    def decide(self, view: View) -> Optional[Assignment]:
        ...

    def explain_undo(
        self, view: View, conflict: ConflictState, decision_index: int
    ) -> List[Inference]:
        return []

    @abstractmethod
    def check_inference(
        self, premises: Iterable[Assignment], conclusion: Assignment
    ) -> bool:
        ...

    def owns_decision(self, assignment: Assignment) -> bool:
        return self.understands(assignment.term)

    def inference(
        self, rule: str, premises: Iterable[Assignment], conclusion: Assignment
    ) -> Inference:
        return Inference(self.module_id, rule, frozenset(premises), conclusion)

    def __repr__(self):
        return f"<{type(self).__name__} {self.module_id}>"
