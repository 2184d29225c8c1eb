"""The transition system: search (deduce, decide) and conflict solving.

Conflict analysis picks exactly one rule from the latest element A of the
conflict E:

* level(E) = 0: Fail, after resolving every non-input element;
* A a Boolean deduction: Resolve;
* A a Boolean decision: Backjump, learning the flip of A;
* A a first-order decision: UndoClear, replaying the owner's explanations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Union

from .conf import solver_setting
from .exceptions import EndorsementFailure, KernelError
from .proofs.builders import LcfProofs, NoProofs, TermProofs
from .terms import FALSE, TRUE, Assignment, Problem, Term, Value, evaluate, relevant_basis
from .theories import Inference, build_modules, inference_checker
from .trail import ConflictState, Provenance, Trail

logger = logging.getLogger(__name__)


class ProofMode(str, Enum):
    NONE = "none"
    PROOF_TERMS = "proof-terms"
    LCF = "lcf"


@dataclass(frozen=True)
class TraceEvent:
    step: int
    rule: str
    module: Optional[str] = None
    assignment: Optional[Assignment] = None
    level: Optional[int] = None
    conflict_size: Optional[int] = None

    def to_line(self) -> str:
        fields = [self.step, self.rule, self.module, self.assignment, self.level, self.conflict_size]
        return "\t".join("-" if f is None else str(f) for f in fields)


@dataclass
class Config:
    max_steps: int = 20000
    proof_mode: ProofMode = ProofMode.PROOF_TERMS
    trace: Optional[Callable[[TraceEvent], None]] = None
    modules: Sequence[str] = ("Bool", "EUF", "LRA")
    debug: bool = False

    def __post_init__(self):
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        self.proof_mode = ProofMode(self.proof_mode)
        self.modules = tuple(self.modules)

    @classmethod
    def from_settings(cls, **overrides) -> "Config":
        values = {
            "max_steps": solver_setting("MAX_STEPS"),
            "proof_mode": solver_setting("PROOF_MODE"),
            "modules": solver_setting("MODULES"),
            "debug": solver_setting("DEBUG_CHECKS"),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class Stats:
    steps: int = 0
    decisions: int = 0
    conflicts: int = 0
    restrictions: int = 0


@dataclass(frozen=True)
class ProofArtifact:
    root: object
    conflict: FrozenSet[Assignment]
    mode: ProofMode


@dataclass(frozen=True)
class Sat:
    model: Dict[Term, Value]
    name = "sat"


@dataclass(frozen=True)
class Unsat:
    refutation: ProofArtifact
    name = "unsat"


@dataclass(frozen=True)
class Unknown:
    reason: str = "step-limit"
    name = "unknown"


Verdict = Union[Sat, Unsat, Unknown]


class Solver:
    """One run of the transition system on one problem.

    Not shareable while running; distinct solvers may run in parallel.
    """

    def __init__(self, problem: Problem, config: Optional[Config] = None):
        self.problem = problem
        self.config = config or Config()
        self.modules = build_modules(self.config.modules, problem.store)
        self._owner = {m.module_id: m for m in self.modules}
        if self.config.proof_mode is ProofMode.LCF:
            self.proofs = LcfProofs(problem.inputs)
        elif self.config.proof_mode is ProofMode.PROOF_TERMS:
            self.proofs = TermProofs(check_theory=self.config.debug)
        else:
            self.proofs = NoProofs()
        self.trail = Trail()
        self.basis = relevant_basis(problem)
        self.conflict: Optional[ConflictState] = None
        self.stats = Stats()
        self.lcf_excess = 0
        self._seen_states = set()

    # ------------------------------------------------------------ driver

    def run(self) -> Verdict:
        refuted = self._push_inputs()
        if refuted is not None:
            return refuted
        while True:
            if self.stats.steps >= self.config.max_steps:
                logger.info("step limit %d reached", self.config.max_steps)
                return Unknown("step-limit")
            if self.conflict is not None:
                verdict = self._analyze_conflict()
                if verdict is not None:
                    return verdict
            elif not self._deduce() and not self._decide():
                return self._extract_model()
            self._after_transition()

    def _after_transition(self) -> None:
        if isinstance(self.proofs, LcfProofs):
            bound = len(self.trail) + (len(self.conflict) if self.conflict else 0)
            self.lcf_excess = max(self.lcf_excess, self.proofs.kernel.live - bound)
        if not self.config.debug:
            return
        if not self.trail.check_levels():
            raise KernelError(f"level laws violated at step {self.stats.steps}")
        state = (
            self.trail.digest(),
            len(self.basis),
            None if self.conflict is None else tuple(sorted(self.conflict.elems)),
        )
        if state in self._seen_states:
            raise KernelError(f"state repeated at step {self.stats.steps}")
        self._seen_states.add(state)

    def _emit(self, rule, module=None, assignment=None, level=None, conflict_size=None) -> None:
        event = TraceEvent(self.stats.steps, rule, module, assignment, level, conflict_size)
        logger.debug("%s", event.to_line())
        if self.config.trace is not None:
            self.config.trace(event)

    # ------------------------------------------------------------ inputs

    def _push_inputs(self) -> Optional[Verdict]:
        for index, assignment in enumerate(self.problem.inputs):
            existing = self.trail.lookup(assignment.term)
            if existing is None:
                self.trail.append(assignment, Provenance.input(), self.proofs.input(index, assignment))
            elif existing.assignment != assignment:
                return self._refute_duplicate(existing.assignment, assignment)
        return None

    def _refute_duplicate(self, first: Assignment, second: Assignment) -> Unsat:
        """Two inputs assign different values to one term."""
        proofs = self.proofs
        if second.is_boolean:
            assumed = proofs.theory(Inference("Bool", "assumption", frozenset({second}), second))
            root = proofs.clash(assumed, first)
        else:
            term = second.term
            reflexive = self.problem.store.eq(term, term)
            holds = Assignment(reflexive, TRUE)
            single = proofs.theory(
                Inference("EUF", "single-value", frozenset({first, second}), Assignment(reflexive, FALSE))
            )
            refl = proofs.theory(Inference("EUF", "refl", frozenset(), holds))
            root = proofs.resolve(holds, proofs.clash(single, holds), refl)
        self.stats.steps += 1
        self.stats.conflicts += 1
        self._emit("fail", level=0, conflict_size=2)
        logger.info("inputs %s and %s disagree", first, second)
        return Unsat(ProofArtifact(root, frozenset({first, second}), self.config.proof_mode))

    # ------------------------------------------------------------ search

    def _deduce(self) -> bool:
        self.basis.refresh()
        for module in self.modules:
            inference = module.infer(module.view(self.trail, self.basis))
            if inference is None:
                continue
            if self.config.debug and not inference_checker(inference.module).check_inference(
                inference.premises, inference.conclusion
            ):
                raise KernelError(f"unsound inference {inference}")
            self.stats.steps += 1
            self._apply(inference)
            return True
        return False

    def _apply(self, inference: Inference) -> None:
        trail = self.trail
        premises = []
        for p in inference.premises:
            index = trail.index_of_assignment(p)
            if index is None:
                raise KernelError(f"premise {p} of {inference} is not on the trail")
            premises.append(index)
        conclusion = inference.conclusion
        flipped = trail.index_of_assignment(conclusion.flip())
        if flipped is not None:
            proof = self.proofs.clash(self.proofs.theory(inference), trail[flipped].assignment)
            self.conflict = ConflictState.of(trail, premises + [flipped], proof)
            self.stats.conflicts += 1
            logger.info("conflict from %s at level %d", inference, self.conflict.level)
            self._emit("conflict", inference.module, conclusion, self.conflict.level, len(self.conflict))
            return
        index = trail.append(
            conclusion,
            Provenance.deduction(inference.module, inference.rule, premises),
            self.proofs.theory(inference),
        )
        self._emit("deduce", inference.module, conclusion, trail[index].level)

    def _decide(self) -> bool:
        for module in self.modules:
            assignment = module.decide(module.view(self.trail, self.basis))
            if assignment is None:
                continue
            self.stats.steps += 1
            self.stats.decisions += 1
            index = self.trail.append(assignment, Provenance.decision(module.module_id))
            self._emit("decide", module.module_id, assignment, self.trail[index].level)
            return True
        return False

    def _extract_model(self) -> Sat:
        valuation = self.trail.valuation
        model = {t: valuation[t] for t in self.basis if t in valuation}
        for assignment in self.problem.inputs:
            value = evaluate(assignment.term, model)
            if value != assignment.value:
                raise EndorsementFailure(f"model gives {value} for input {assignment}")
        return Sat(model)

    # ---------------------------------------------------------- conflicts

    def _analyze_conflict(self) -> Optional[Verdict]:
        conflict = self.conflict
        if conflict.level == 0:
            return self._fail()
        latest = self.trail.latest_in(conflict.elems)
        item = self.trail[latest]
        provenance = item.provenance
        self.stats.steps += 1
        if provenance.is_deduction:
            self._resolve(latest)
        elif provenance.is_decision and item.assignment.is_boolean:
            self._backjump(latest)
        elif provenance.is_decision:
            self._undo_clear(latest)
        else:
            raise KernelError(f"no rule applies to conflict element {item}")
        return None

    def _resolve(self, index: int) -> None:
        conflict = self.conflict
        item = self.trail[index]
        justification = set(item.provenance.justification)
        if self.config.debug and any(j >= index for j in justification):
            raise KernelError(f"resolve on {item} does not decrease positions")
        elems = (conflict.elems - {index}) | justification
        proof = self.proofs.resolve(item.assignment, conflict.proof, item.proof)
        self.conflict = ConflictState.of(self.trail, elems, proof)
        self._emit("resolve", item.provenance.module, item.assignment, self.conflict.level, len(self.conflict))

    def _backjump(self, index: int) -> None:
        conflict = self.conflict
        decision = self.trail[index]
        rest = conflict.elems - {index}
        target = self.trail.level_of(rest)
        if self.config.debug and target >= self.trail.max_level():
            raise KernelError("backjump does not decrease the maximal level")
        learned = decision.assignment.flip()
        proof = self.proofs.entail(decision.assignment, conflict.proof)
        trail = self.trail.restrict_to(target)
        if trail.is_assigned(learned.term):
            raise KernelError(f"learned {learned} is assigned at level {target}")
        trail.append(
            learned,
            Provenance.deduction(decision.provenance.module, "backjump", trail.remap(sorted(rest))),
            proof,
        )
        self.trail = trail
        self.conflict = None
        self.stats.restrictions += 1
        self._emit("backjump", decision.provenance.module, learned, target, len(conflict))

    def _undo_clear(self, index: int) -> None:
        conflict = self.conflict
        decision = self.trail[index]
        owner = self._owner.get(decision.provenance.module)
        replay: List[Inference] = []
        if owner is not None:
            replay = owner.explain_undo(owner.view(self.trail, self.basis), conflict, index)
        self.trail = self.trail.restrict_to(decision.level - 1)
        self.conflict = None
        self.stats.restrictions += 1
        self._emit("undo", decision.provenance.module, decision.assignment, decision.level - 1, len(conflict))
        for inference in replay:
            if self.conflict is not None:
                break
            if self.trail.holds(inference.conclusion):
                continue
            if any(not self.trail.holds(p) for p in inference.premises):
                logger.warning("skipping replay of %s: premises did not survive", inference)
                continue
            self._apply(inference)

    def _fail(self) -> Unsat:
        trail = self.trail
        while True:
            pending = [i for i in self.conflict.elems if not trail[i].provenance.is_input]
            if not pending:
                break
            self.stats.steps += 1
            self._resolve(max(pending))
        conflict = self.conflict
        self.stats.steps += 1
        self._emit("fail", level=0, conflict_size=len(conflict))
        return Unsat(
            ProofArtifact(
                conflict.proof,
                frozenset(conflict.assignments(trail)),
                self.config.proof_mode,
            )
        )


def solve(problem: Problem, config: Optional[Config] = None) -> Verdict:
    return Solver(problem, config).run()
