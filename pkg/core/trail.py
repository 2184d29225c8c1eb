"""The solver state: an ordered trail of assignments with provenance and levels."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .exceptions import (
    EmptyConflict,
    JustificationOutOfRange,
    NotBoolean,
    TermAlreadyAssigned,
)
from .terms import Assignment, Term, TheoryId, Value

logger = logging.getLogger(__name__)


class ProvenanceKind(Enum):
    INPUT = "input"
    DECISION = "decision"
    DEDUCTION = "deduction"


@dataclass(frozen=True)
class Provenance:
    kind: ProvenanceKind
    module: Optional[TheoryId] = None
    rule: Optional[str] = None
    justification: Tuple[int, ...] = ()

    @classmethod
    def input(cls) -> "Provenance":
        return cls(ProvenanceKind.INPUT)

    @classmethod
    def decision(cls, module) -> "Provenance":
        return cls(ProvenanceKind.DECISION, module=module)

    @classmethod
    def deduction(cls, module, rule: str, justification: Iterable[int]) -> "Provenance":
        return cls(
            ProvenanceKind.DEDUCTION,
            module=module,
            rule=rule,
            justification=tuple(sorted(set(justification))),
        )

    @property
    def is_input(self) -> bool:
        return self.kind is ProvenanceKind.INPUT

    @property
    def is_decision(self) -> bool:
        return self.kind is ProvenanceKind.DECISION

    @property
    def is_deduction(self) -> bool:
        return self.kind is ProvenanceKind.DEDUCTION


@dataclass(frozen=True)
class TrailItem:
    assignment: Assignment
    provenance: Provenance
    level: int
    proof: Any = None

    @property
    def term(self) -> Term:
        return self.assignment.term

    def __str__(self):
        return f"{self.assignment}@{self.level}"


class Trail:
    """Ordered assignments, at most one per term.

    Only the kernel mutates a trail. ``restrict_to`` builds a fresh trail and
    records in ``origin`` the index each kept item had before.
    """

    def __init__(self):
        self.items: List[TrailItem] = []
        self._by_term: Dict[int, int] = {}
        self._values: Dict[Term, Value] = {}
        self._max_level = 0
        self.origin: Tuple[int, ...] = ()

    def __len__(self):
        return len(self.items)

    def __getitem__(self, index: int) -> TrailItem:
        return self.items[index]

    def __iter__(self) -> Iterator[TrailItem]:
        return iter(self.items)

    @property
    def valuation(self) -> Mapping[Term, Value]:
        return MappingProxyType(self._values)

    def append(self, assignment: Assignment, provenance: Provenance, proof=None) -> int:
        """Push ``assignment`` and return its index."""
        term = assignment.term
        if term.id in self._by_term:
            raise TermAlreadyAssigned(term)
        index = len(self.items)
        if provenance.is_deduction:
            if not assignment.is_boolean:
                raise NotBoolean(f"deduction {assignment} is not Boolean")
            for j in provenance.justification:
                if not 0 <= j < index:
                    raise JustificationOutOfRange(
                        f"justification index {j} out of range for item {index}"
                    )
            level = max((self.items[j].level for j in provenance.justification), default=0)
        elif provenance.is_decision:
            level = self._max_level + 1
        else:
            level = 0
        self.items.append(TrailItem(assignment, provenance, level, proof))
        self._by_term[term.id] = index
        self._values[term] = assignment.value
        self._max_level = max(self._max_level, level)
        return index

    def restrict_to(self, m: int) -> "Trail":
        """A new trail with exactly the items of level <= m, order preserved."""
        kept = Trail()
        remap: Dict[int, int] = {}
        origin = []
        for index, item in enumerate(self.items):
            if item.level > m:
                continue
            prov = item.provenance
            if prov.justification:
                prov = Provenance(
                    prov.kind,
                    prov.module,
                    prov.rule,
                    tuple(remap[j] for j in prov.justification),
                )
            new_index = len(kept.items)
            kept.items.append(TrailItem(item.assignment, prov, item.level, item.proof))
            kept._by_term[item.term.id] = new_index
            kept._values[item.term] = item.assignment.value
            kept._max_level = max(kept._max_level, item.level)
            remap[index] = new_index
            origin.append(index)
        kept.origin = tuple(origin)
        return kept

    def remap(self, old_indices: Iterable[int]) -> Tuple[int, ...]:
        """Translate indices of the trail this one was restricted from."""
        inverse = {old: new for new, old in enumerate(self.origin)}
        return tuple(inverse[i] for i in old_indices)

    # queries

    def lookup(self, term: Term) -> Optional[TrailItem]:
        index = self._by_term.get(term.id)
        return None if index is None else self.items[index]

    def index_of(self, term: Term) -> Optional[int]:
        return self._by_term.get(term.id)

    def value_of(self, term: Term) -> Optional[Value]:
        return self._values.get(term)

    def is_assigned(self, term: Term) -> bool:
        return term.id in self._by_term

    def holds(self, assignment: Assignment) -> bool:
        return self._values.get(assignment.term) == assignment.value

    def index_of_assignment(self, assignment: Assignment) -> Optional[int]:
        index = self._by_term.get(assignment.term.id)
        if index is None or self.items[index].assignment.value != assignment.value:
            return None
        return index

    def flip_present(self, assignment: Assignment) -> bool:
        return assignment.is_boolean and self.holds(assignment.flip())

    def max_level(self) -> int:
        return self._max_level

    def level_of(self, indices: Iterable[int]) -> int:
        return max((self.items[i].level for i in indices), default=0)

    def latest_in(self, elems: Iterable[int]) -> int:
        elems = list(elems)
        if not elems:
            raise EmptyConflict("latest_in of an empty conflict")
        return max(elems)

    def check_levels(self) -> bool:
        """Full scan of the level laws and justification closure."""
        running_max = 0
        seen = set()
        for index, item in enumerate(self.items):
            if item.term.id in seen:
                return False
            seen.add(item.term.id)
            prov = item.provenance
            if prov.is_input:
                expected = 0
            elif prov.is_decision:
                expected = running_max + 1
            else:
                if any(j >= index or self.items[j].level > item.level for j in prov.justification):
                    return False
                expected = max((self.items[j].level for j in prov.justification), default=0)
            if item.level != expected:
                return False
            running_max = max(running_max, item.level)
        return True

    def digest(self) -> str:
        h = hashlib.blake2b(digest_size=16)
        for item in self.items:
            h.update(f"{item.term.id}:{item.assignment.value}:{item.level};".encode())
        return h.hexdigest()

    def __str__(self):
        return "[" + ", ".join(str(item) for item in self.items) + "]"


@dataclass(frozen=True)
class ConflictState:
    """E: a set of trail indices that is jointly unsatisfiable."""

    elems: frozenset
    level: int
    proof: Any = None

    @classmethod
    def of(cls, trail: Trail, elems: Iterable[int], proof=None) -> "ConflictState":
        elems = frozenset(elems)
        if not elems:
            raise EmptyConflict("a conflict needs at least one element")
        return cls(elems, trail.level_of(elems), proof)

    def assignments(self, trail: Trail) -> List[Assignment]:
        return [trail[i].assignment for i in sorted(self.elems)]

    def __len__(self):
        return len(self.elems)
