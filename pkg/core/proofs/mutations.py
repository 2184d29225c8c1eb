"""Single-node corruptions of proof terms, for probing the checker.

A mutated DAG is rebuilt with ``make_raw`` in a fresh factory; every node,
the mutated one included, keeps the conclusion stored in the original.
"""

from __future__ import annotations

import dataclasses
import random
from typing import Dict, List, Optional, Tuple

from ..terms import Assignment, sorted_assignments
from .nodes import ClashNode, EntailNode, ProofFactory, ProofNode, ResolveNode, TheoryNode, post_order

PIVOT_SWAP = "pivot-swap"
PREMISE_DROP = "premise-drop"
CONCLUSION_FLIP = "conclusion-flip"

MUTATIONS = (PIVOT_SWAP, PREMISE_DROP, CONCLUSION_FLIP)


def _fields(node: ProofNode) -> List[object]:
    return [getattr(node, f.name) for f in dataclasses.fields(node)[2:]]


def _swapped_pivot(node: ProofNode) -> Optional[Assignment]:
    left = node.left if isinstance(node, ResolveNode) else node.inner
    elems = getattr(left.conclusion, "elems", frozenset())
    flipped = node.pivot.flip()
    if flipped not in elems:
        return flipped
    others = [a for a in sorted_assignments(elems) if a.is_boolean and a != node.pivot]
    outside = [a.flip() for a in others if a.flip() not in elems]
    return outside[0] if outside else None


def candidates(root: ProofNode, kind: str) -> List[Tuple[ProofNode, List[object]]]:
    """Nodes ``kind`` applies to, each with its corrupted fields."""
    out = []
    for node in post_order(root):
        fields = _fields(node)
        if kind == PIVOT_SWAP and isinstance(node, (ResolveNode, EntailNode)):
            pivot = _swapped_pivot(node)
            if pivot is not None:
                out.append((node, [pivot] + fields[1:]))
        elif kind == PREMISE_DROP and isinstance(node, TheoryNode) and node.premises:
            dropped = sorted_assignments(node.premises)[0]
            out.append((node, [node.module, node.rule, node.premises - {dropped}, node.claim]))
        elif kind == CONCLUSION_FLIP and isinstance(node, TheoryNode):
            out.append((node, [node.module, node.rule, node.premises, node.claim.flip()]))
        elif kind == CONCLUSION_FLIP and isinstance(node, ClashNode):
            out.append((node, [node.inner, node.opposite.flip()]))
    return out


def rebuild(root: ProofNode, target: ProofNode, fields: List[object]) -> ProofNode:
    """Copy of the DAG with ``target``'s fields replaced."""
    factory = ProofFactory(check_theory=False)
    copies: Dict[int, ProofNode] = {}
    for node in post_order(root):
        parts = fields if node is target else _fields(node)
        parts = [copies[p.uid] if isinstance(p, ProofNode) else p for p in parts]
        copies[node.uid] = factory.make_raw(type(node), *parts, conclusion=node.conclusion)
    return copies[root.uid]


def mutate(root: ProofNode, rng: random.Random, kinds=MUTATIONS) -> Optional[Tuple[str, ProofNode]]:
    """One random single-node mutation of ``root``, or None when none applies."""
    options = [(kind, node, fields) for kind in kinds for node, fields in candidates(root, kind)]
    if not options:
        return None
    kind, node, fields = rng.choice(options)
    return kind, rebuild(root, node, fields)
