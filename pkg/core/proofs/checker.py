"""Independent proof checker.

Replays a proof DAG bottom-up, recomputing every conclusion from scratch and
re-validating theory steps with a module instance that shares nothing with
the solver run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional

from ..exceptions import MalformedNode
from ..terms import Problem
from ..theories import inference_checker
from .nodes import (
    InputNode,
    ProofNode,
    Refutes,
    TheoryNode,
    post_order,
    recompute,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    node: Optional[int] = None
    message: str = ""

    def __str__(self):
        if self.accepted:
            return "accepted"
        where = "" if self.node is None else f" at node {self.node}"
        return f"rejected{where}: {self.message}"


def check(root: ProofNode, problem: Problem) -> CheckReport:
    inputs = problem.inputs
    input_set = set(inputs)
    computed: Dict[int, object] = {}
    for node in post_order(root):
        if isinstance(node, InputNode):
            if not 0 <= node.index < len(inputs) or inputs[node.index] != node.assignment:
                return CheckReport(False, node.uid, f"{node.assignment} is not input {node.index}")
        if isinstance(node, TheoryNode):
            try:
                checker = inference_checker(node.module)
            except KeyError:
                return CheckReport(False, node.uid, f"unknown theory module {node.module}")
            if not checker.check_inference(node.premises, node.claim):
                return CheckReport(False, node.uid, f"{node.module} rejects {node.rule} step concluding {node.claim}")
        try:
            conclusion = recompute(node, [computed[c.uid] for c in node.children()])
        except MalformedNode as exc:
            return CheckReport(False, node.uid, str(exc))
        if node.conclusion is not None and node.conclusion != conclusion:
            return CheckReport(
                False, node.uid, f"stored conclusion {node.conclusion} differs from {conclusion}"
            )
        computed[node.uid] = conclusion

    final = computed[root.uid]
    if not isinstance(final, Refutes):
        return CheckReport(False, root.uid, "root does not conclude unsatisfiability")
    extra = [a for a in final.elems if a not in input_set]
    if extra:
        return CheckReport(
            False, root.uid, "refuted set is not within the inputs: " + ", ".join(map(str, extra))
        )
    logger.debug("proof with root %d accepted", root.uid)
    return CheckReport(True)
