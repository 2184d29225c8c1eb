"""Runs a parsed script through the solver and renders the results."""

import logging
import time
from dataclasses import dataclass
from typing import Optional

from core.kernel import Config, ProofMode, Sat, Solver, Stats, Unsat, Verdict
from core.proofs import Thm, check, export_resolution, write_proof_terms, write_resolution
from core.proofs.nodes import ProofNode, Refutes
from core.terms import Problem

from .parser import Script
from .printer import model_to_smtlib

logger = logging.getLogger(__name__)

PROOF_FORMATS = ("none", "cdsat", "res")


@dataclass
class SolveOutcome:
    verdict: Verdict
    stats: Stats
    wall_millis: int
    proof_checked: bool = False
    lcf_peak: int = 0
    lcf_excess: int = 0

    @property
    def name(self) -> str:
        return self.verdict.name


def certify(verdict: Verdict, problem: Problem) -> bool:
    """Whether an unsat verdict carries a refutation of a subset of the inputs."""
    if not isinstance(verdict, Unsat):
        return False
    root = verdict.refutation.root
    if isinstance(root, ProofNode):
        report = check(root, problem)
        if not report.accepted:
            logger.error("solver produced a rejected proof: %s", report)
        return report.accepted
    if isinstance(root, Thm):
        conclusion = root.conclusion
        return isinstance(conclusion, Refutes) and conclusion.elems <= set(problem.inputs)
    return False


def solve_script(script: Script, config: Config) -> SolveOutcome:
    solver = Solver(script.problem, config)
    started = time.perf_counter()
    verdict = solver.run()
    wall_millis = int((time.perf_counter() - started) * 1000)
    outcome = SolveOutcome(verdict, solver.stats, wall_millis, lcf_excess=solver.lcf_excess)
    if config.proof_mode is ProofMode.LCF:
        outcome.lcf_peak = solver.proofs.kernel.peak
    if config.proof_mode is not ProofMode.NONE:
        outcome.proof_checked = certify(verdict, script.problem)
    logger.info(
        "%s after %d steps (%d decisions, %d conflicts) in %d ms",
        verdict.name,
        solver.stats.steps,
        solver.stats.decisions,
        solver.stats.conflicts,
        wall_millis,
    )
    return outcome


def model_text(outcome: SolveOutcome) -> Optional[str]:
    if isinstance(outcome.verdict, Sat):
        return model_to_smtlib(outcome.verdict.model)
    return None


def proof_text(outcome: SolveOutcome, problem: Problem, proof_format: str) -> Optional[str]:
    """The refutation in ``proof_format``; None without a proof term to render."""
    verdict = outcome.verdict
    if proof_format == "none" or not isinstance(verdict, Unsat):
        return None
    root = verdict.refutation.root
    if not isinstance(root, ProofNode):
        return None
    if proof_format == "cdsat":
        return write_proof_terms(root, verdict.refutation.conflict)
    if proof_format == "res":
        return write_resolution(export_resolution(root, problem))
    raise ValueError(f"unknown proof format {proof_format}")
