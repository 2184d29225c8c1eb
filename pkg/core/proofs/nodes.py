"""Proof terms: a DAG of five node kinds with computed conclusions.

A node concludes either an entailment ``J |- L`` or the unsatisfiability of
a set of assignments. Conclusions are recomputed from the children by the
``conclude_*`` functions; a node whose parts violate its rule cannot be
constructed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Union

from ..exceptions import MalformedNode
from ..terms import Assignment, sorted_assignments
from ..theories import inference_checker


@dataclass(frozen=True)
class Entails:
    premises: FrozenSet[Assignment]
    conclusion: Assignment

    def __str__(self):
        prem = ", ".join(str(p) for p in sorted_assignments(self.premises))
        return f"{{{prem}}} |- {self.conclusion}"


@dataclass(frozen=True)
class Refutes:
    elems: FrozenSet[Assignment]

    def __str__(self):
        return "unsat{" + ", ".join(str(e) for e in sorted_assignments(self.elems)) + "}"


Conclusion = Union[Entails, Refutes]


def conclude_input(assignment: Assignment) -> Entails:
    return Entails(frozenset(), assignment)


def conclude_theory(premises: Iterable[Assignment], conclusion: Assignment) -> Entails:
    if not conclusion.is_boolean:
        raise MalformedNode(f"theory conclusion {conclusion} is not Boolean")
    return Entails(frozenset(premises), conclusion)


def conclude_clash(inner: Optional[Conclusion], opposite: Assignment) -> Refutes:
    if not isinstance(inner, Entails):
        raise MalformedNode("clash needs an entailment")
    if not inner.conclusion.is_boolean or opposite != inner.conclusion.flip():
        raise MalformedNode(f"{opposite} is not the flip of {inner.conclusion}")
    return Refutes(inner.premises | {opposite})


def conclude_resolve(pivot: Assignment, left: Optional[Conclusion], right: Optional[Conclusion]) -> Refutes:
    if not pivot.is_boolean:
        raise MalformedNode(f"pivot {pivot} is not Boolean")
    if not isinstance(left, Refutes) or pivot not in left.elems:
        raise MalformedNode(f"pivot {pivot} is not in the refuted set")
    if not isinstance(right, Entails) or right.conclusion != pivot:
        raise MalformedNode(f"right premise does not conclude {pivot}")
    return Refutes((left.elems - {pivot}) | right.premises)


def conclude_entail(pivot: Assignment, inner: Optional[Conclusion]) -> Entails:
    if not pivot.is_boolean:
        raise MalformedNode(f"pivot {pivot} is not Boolean")
    if not isinstance(inner, Refutes) or pivot not in inner.elems:
        raise MalformedNode(f"pivot {pivot} is not in the refuted set")
    return Entails(inner.elems - {pivot}, pivot.flip())


@dataclass(frozen=True, eq=False)
class ProofNode:
    uid: int
    conclusion: Optional[Conclusion]

    def __hash__(self):
        return self.uid

    def children(self) -> List["ProofNode"]:
        return []


@dataclass(frozen=True, eq=False)
class InputNode(ProofNode):
    index: int
    assignment: Assignment


@dataclass(frozen=True, eq=False)
class TheoryNode(ProofNode):
    module: str
    rule: str
    premises: FrozenSet[Assignment]
    claim: Assignment


@dataclass(frozen=True, eq=False)
class ClashNode(ProofNode):
    inner: ProofNode
    opposite: Assignment

    def children(self):
        return [self.inner]


@dataclass(frozen=True, eq=False)
class ResolveNode(ProofNode):
    pivot: Assignment
    left: ProofNode
    right: ProofNode

    def children(self):
        return [self.left, self.right]


@dataclass(frozen=True, eq=False)
class EntailNode(ProofNode):
    pivot: Assignment
    inner: ProofNode

    def children(self):
        return [self.inner]


def recompute(node: ProofNode, child_conclusions: List[Optional[Conclusion]]) -> Conclusion:
    """Conclusion of ``node`` from the given child conclusions."""
    if isinstance(node, InputNode):
        return conclude_input(node.assignment)
    if isinstance(node, TheoryNode):
        return conclude_theory(node.premises, node.claim)
    if isinstance(node, ClashNode):
        return conclude_clash(child_conclusions[0], node.opposite)
    if isinstance(node, ResolveNode):
        return conclude_resolve(node.pivot, child_conclusions[0], child_conclusions[1])
    if isinstance(node, EntailNode):
        return conclude_entail(node.pivot, child_conclusions[0])
    raise MalformedNode(f"unknown proof node {node!r}")


def post_order(root: ProofNode) -> Iterator[ProofNode]:
    """Each node once, children before parents."""
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.uid in seen:
            continue
        if expanded:
            seen.add(node.uid)
            yield node
            continue
        stack.append((node, True))
        for child in reversed(node.children()):
            if child.uid not in seen:
                stack.append((child, False))


class ProofFactory:
    """Builds proof nodes, sharing structurally identical ones.

    ``construct`` enforces every side condition, theory steps included when
    ``check_theory`` is set; ``make_raw`` records whatever it is given so a
    checker can be run on proofs read from files.
    """

    def __init__(self, check_theory: bool = True, checker_for=None):
        self._lock = threading.Lock()
        self._memo: Dict[tuple, ProofNode] = {}
        self._next = 0
        self.check_theory = check_theory
        self._checker_for = checker_for

    def __len__(self):
        return len(self._memo)

    def _key(self, cls, fields) -> tuple:
        parts = []
        for f in fields:
            if isinstance(f, ProofNode):
                parts.append(("node", f.uid))
            elif isinstance(f, frozenset):
                parts.append(tuple(sorted_assignments(f)))
            else:
                parts.append(f)
        return (cls.__name__, tuple(parts))

    def _make(self, cls, conclusion, *fields, raw: bool = False) -> ProofNode:
        key = self._key(cls, fields)
        if raw:
            key = key + ("raw", conclusion)
        with self._lock:
            node = self._memo.get(key)
            if node is None:
                node = cls(self._next, conclusion, *fields)
                self._next += 1
                self._memo[key] = node
        return node

    def _validate_theory(self, module: str, premises, claim: Assignment) -> None:
        if not self.check_theory:
            return
        checker_for = self._checker_for or inference_checker
        if not checker_for(module).check_inference(premises, claim):
            raise MalformedNode(f"{module} rejects {{{', '.join(map(str, premises))}}} |- {claim}")

    # validated constructors

    def input(self, index: int, assignment: Assignment) -> InputNode:
        return self._make(InputNode, conclude_input(assignment), index, assignment)

    def theory(self, module: str, rule: str, premises: Iterable[Assignment], claim: Assignment) -> TheoryNode:
        premises = frozenset(premises)
        conclusion = conclude_theory(premises, claim)
        self._validate_theory(module, premises, claim)
        return self._make(TheoryNode, conclusion, str(module), rule, premises, claim)

    def clash(self, inner: ProofNode, opposite: Assignment) -> ClashNode:
        return self._make(ClashNode, conclude_clash(inner.conclusion, opposite), inner, opposite)

    def resolve(self, pivot: Assignment, left: ProofNode, right: ProofNode) -> ResolveNode:
        conclusion = conclude_resolve(pivot, left.conclusion, right.conclusion)
        return self._make(ResolveNode, conclusion, pivot, left, right)

    def entail(self, pivot: Assignment, inner: ProofNode) -> EntailNode:
        return self._make(EntailNode, conclude_entail(pivot, inner.conclusion), pivot, inner)

    def construct(self, kind: str, *parts) -> ProofNode:
        return getattr(self, kind)(*parts)

    # lenient constructor for proofs read back from text

    def make_raw(self, cls, *fields, conclusion: Optional[Conclusion] = None) -> ProofNode:
        if conclusion is None:
            try:
                children = [f.conclusion for f in fields if isinstance(f, ProofNode)]
                probe = cls(-1, None, *fields)
                conclusion = recompute(probe, children)
            except MalformedNode:
                conclusion = None
        return self._make(cls, conclusion, *fields, raw=True)
