"""Translation of checked proof terms into clausal resolution proofs.

A literal is a Boolean assignment. Theory steps become lemma clauses whose
first-order premises ride along as hypotheses; first-order inputs the
refutation depends on become global hypotheses. The line format::

    t <term-id> <term>
    h <term-id><-<value>
    u <clause-id> <lit>
    l <clause-id> <module> <rule> [hyp <term-id><-<value>]* : <lit>*
    r <clause-id> <left> <right> <pivot-lit> : <lit>*

A literal is ``+<term-id>`` for ``<-true`` and ``-<term-id>`` for ``<-false``.
The last line is a resolution step with an empty literal list.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from ..exceptions import ProofFormatError, UncheckedProof
from ..terms import (
    FALSE,
    TRUE,
    AbsValue,
    Assignment,
    BoolValue,
    Problem,
    RatValue,
    Term,
    Value,
    sorted_assignments,
)
from ..theories import inference_checker
from .checker import CheckReport, check
from .nodes import (
    ClashNode,
    EntailNode,
    InputNode,
    ProofNode,
    Refutes,
    ResolveNode,
    TheoryNode,
    post_order,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InputUnit:
    index: int


@dataclass(frozen=True)
class TheoryLemma:
    module: str
    rule: str
    hyps: Tuple[Assignment, ...] = ()


@dataclass(frozen=True)
class Res:
    left: int
    right: int
    pivot: Assignment


Origin = Union[InputUnit, TheoryLemma, Res]


@dataclass(frozen=True)
class Clause:
    id: int
    lits: Tuple[Assignment, ...]
    origin: Origin


@dataclass
class ResolutionProof:
    hyps: Tuple[Assignment, ...] = ()
    clauses: List[Clause] = field(default_factory=list)

    @property
    def final(self) -> Optional[Clause]:
        return self.clauses[-1] if self.clauses else None

    def __len__(self):
        return len(self.clauses)


def resolve_lits(left: Sequence[Assignment], right: Sequence[Assignment], pivot: Assignment) -> Optional[Tuple[Assignment, ...]]:
    """Resolvent of two clauses on ``pivot``, or None if the pivot does not clash.

    The pivot must occur in one parent and its flip in the other.
    """
    neg = pivot.flip()
    if pivot in right and neg in left:
        kept = [l for l in left if l != neg] + [l for l in right if l != pivot]
    elif pivot in left and neg in right:
        kept = [l for l in left if l != pivot] + [l for l in right if l != neg]
    else:
        return None
    return tuple(sorted_assignments(set(kept)))


class _Exporter:
    def __init__(self, problem: Problem):
        self.problem = problem
        self.proof = ResolutionProof()
        self.units: Dict[Assignment, int] = {}

    def add(self, lits, origin) -> int:
        cid = len(self.proof.clauses)
        self.proof.clauses.append(Clause(cid, tuple(lits), origin))
        return cid

    def unit(self, index: int, assignment: Assignment) -> int:
        if assignment not in self.units:
            self.units[assignment] = self.add((assignment,), InputUnit(index))
        return self.units[assignment]

    def resolve(self, left: int, right: int, pivot: Assignment) -> int:
        lits = resolve_lits(self.proof.clauses[left].lits, self.proof.clauses[right].lits, pivot)
        return self.add(lits, Res(left, right, pivot))

    def run(self, root: ProofNode, conflict: FrozenSet[Assignment]) -> ResolutionProof:
        clause_of: Dict[int, Optional[int]] = {}
        for node in post_order(root):
            if isinstance(node, InputNode):
                clause_of[node.uid] = self.unit(node.index, node.assignment) if node.assignment.is_boolean else None
            elif isinstance(node, TheoryNode):
                boolean = [p for p in sorted_assignments(node.premises) if p.is_boolean]
                hyps = tuple(p for p in sorted_assignments(node.premises) if not p.is_boolean)
                lits = [p.flip() for p in boolean] + [node.claim]
                clause_of[node.uid] = self.add(lits, TheoryLemma(node.module, node.rule, hyps))
            elif isinstance(node, (ClashNode, EntailNode)):
                clause_of[node.uid] = clause_of[node.inner.uid]
            elif isinstance(node, ResolveNode):
                clause_of[node.uid] = self.resolve(
                    clause_of[node.left.uid], clause_of[node.right.uid], node.pivot
                )
        current = clause_of[root.uid]
        inputs = self.problem.inputs
        for a in sorted_assignments(conflict):
            if a.is_boolean:
                unit = self.unit(inputs.index(a), a)
                current = self.resolve(current, unit, a)
        self.proof.hyps = tuple(a for a in sorted_assignments(conflict) if not a.is_boolean)
        return self.proof


def export_resolution(root: ProofNode, problem: Problem) -> ResolutionProof:
    report = check(root, problem)
    if not report.accepted:
        raise UncheckedProof(str(report))
    conclusion = root.conclusion
    if not isinstance(conclusion, Refutes):
        raise UncheckedProof("root does not conclude unsatisfiability")
    proof = _Exporter(problem).run(root, conclusion.elems)
    logger.debug("exported %d clauses", len(proof))
    return proof


def replay(proof: ResolutionProof, problem: Problem) -> CheckReport:
    """Re-derive every clause and check the refutation ends in the empty clause."""
    inputs = problem.inputs
    input_set = set(inputs)
    for h in proof.hyps:
        if h not in input_set:
            return CheckReport(False, None, f"hypothesis {h} is not an input")
    hyp_set = set(proof.hyps)
    seen: Dict[int, Tuple[Assignment, ...]] = {}
    for clause in proof.clauses:
        origin = clause.origin
        if clause.id in seen:
            return CheckReport(False, clause.id, "duplicate clause id")
        if isinstance(origin, InputUnit):
            if len(clause.lits) != 1 or not 0 <= origin.index < len(inputs) or inputs[origin.index] != clause.lits[0]:
                return CheckReport(False, clause.id, "unit clause is not an input")
        elif isinstance(origin, TheoryLemma):
            missing = [h for h in origin.hyps if h not in hyp_set]
            if missing:
                return CheckReport(False, clause.id, f"lemma hypothesis {missing[0]} is not global")
            if not clause.lits:
                return CheckReport(False, clause.id, "empty lemma")
            try:
                checker = inference_checker(origin.module)
            except KeyError:
                return CheckReport(False, clause.id, f"unknown theory module {origin.module}")
            premises = [l.flip() for l in clause.lits[:-1]] + list(origin.hyps)
            if not checker.check_inference(premises, clause.lits[-1]):
                return CheckReport(False, clause.id, f"{origin.module} rejects lemma {origin.rule}")
        else:
            if origin.left not in seen or origin.right not in seen:
                return CheckReport(False, clause.id, "resolution on an undefined clause")
            lits = resolve_lits(seen[origin.left], seen[origin.right], origin.pivot)
            if lits is None:
                return CheckReport(False, clause.id, f"pivot {origin.pivot} does not clash")
            if set(lits) != set(clause.lits):
                return CheckReport(False, clause.id, "resolvent differs from the stated clause")
        seen[clause.id] = clause.lits
    final = proof.final
    if final is None or final.lits or not isinstance(final.origin, Res):
        return CheckReport(False, None if final is None else final.id, "refutation does not end in the empty clause")
    return CheckReport(True)


# ------------------------------------------------------------ text format


def _lit(a: Assignment) -> str:
    return ("+" if a.value == TRUE else "-") + str(a.term.id)


def _value_token(value: Value) -> str:
    if isinstance(value, AbsValue):
        return f"abs:{value.sort.name}:{value.index}"
    return str(value)


def _hyp(a: Assignment) -> str:
    return f"{a.term.id}<-{_value_token(a.value)}"


def write_resolution(proof: ResolutionProof) -> str:
    terms: Dict[int, Term] = {}
    for h in proof.hyps:
        terms[h.term.id] = h.term
    for clause in proof.clauses:
        for a in clause.lits:
            terms[a.term.id] = a.term
        if isinstance(clause.origin, TheoryLemma):
            for h in clause.origin.hyps:
                terms[h.term.id] = h.term
    lines = [f"t {tid} {terms[tid]}" for tid in sorted(terms)]
    lines += [f"h {_hyp(h)}" for h in proof.hyps]
    for clause in proof.clauses:
        origin = clause.origin
        lits = " ".join(_lit(l) for l in clause.lits)
        if isinstance(origin, InputUnit):
            lines.append(f"u {clause.id} {lits}")
        elif isinstance(origin, TheoryLemma):
            hyps = "".join(f" hyp {_hyp(h)}" for h in origin.hyps)
            lines.append(f"l {clause.id} {origin.module} {origin.rule}{hyps} : {lits}".rstrip())
        else:
            head = f"r {clause.id} {origin.left} {origin.right} {_lit(origin.pivot)} :"
            lines.append(f"{head} {lits}".rstrip())
    return "\n".join(lines) + "\n"


def read_resolution(text: str, parse_term: Callable[[str], Term], problem: Problem) -> ResolutionProof:
    """Parse the line format; terms are interpreted by ``parse_term``."""
    terms: Dict[int, Term] = {}
    hyps: List[Assignment] = []
    clauses: List[Clause] = []

    def fail(lineno, message):
        raise ProofFormatError(f"line {lineno}: {message}")

    def term_of(lineno, tok):
        try:
            return terms[int(tok)]
        except (ValueError, KeyError):
            fail(lineno, f"unknown term id {tok}")

    def lit_of(lineno, tok):
        if len(tok) < 2 or tok[0] not in "+-":
            fail(lineno, f"bad literal {tok}")
        return Assignment(term_of(lineno, tok[1:]), TRUE if tok[0] == "+" else FALSE)

    def value_of(lineno, tok):
        if tok in ("true", "false"):
            return BoolValue(tok == "true")
        if tok.startswith("abs:"):
            _, name, index = tok.split(":", 2)
            if name not in problem.sorts or not index.isdigit():
                fail(lineno, f"bad abstract value {tok}")
            return AbsValue(problem.sorts[name], int(index))
        try:
            return RatValue(Fraction(tok))
        except (ValueError, ZeroDivisionError):
            fail(lineno, f"bad value {tok}")

    def hyp_of(lineno, tok):
        tid, sep, val = tok.partition("<-")
        if not sep:
            fail(lineno, f"bad hypothesis {tok}")
        return Assignment(term_of(lineno, tid), value_of(lineno, val))

    def int_of(lineno, tok):
        try:
            return int(tok)
        except ValueError:
            fail(lineno, f"expected a number, got {tok}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        kind, _, rest = line.partition(" ")
        if kind == "t":
            tid, _, body = rest.partition(" ")
            terms[int_of(lineno, tid)] = parse_term(body)
            continue
        if kind == "h":
            hyps.append(hyp_of(lineno, rest.strip()))
            continue
        head, colon, tail = rest.partition(" : ") if " : " in rest else rest.partition(" :")
        words = head.split()
        lits = tuple(lit_of(lineno, tok) for tok in tail.split())
        if kind == "u" and len(words) == 2:
            lits = (lit_of(lineno, words[1]),)
            index = next((i for i, a in enumerate(problem.inputs) if a == lits[0]), -1)
            clauses.append(Clause(int_of(lineno, words[0]), lits, InputUnit(index)))
        elif kind == "l" and colon and len(words) >= 3:
            rest_words = words[3:]
            if len(rest_words) % 2 or any(w != "hyp" for w in rest_words[::2]):
                fail(lineno, "malformed lemma hypotheses")
            lemma_hyps = tuple(hyp_of(lineno, w) for w in rest_words[1::2])
            clauses.append(Clause(int_of(lineno, words[0]), lits, TheoryLemma(words[1], words[2], lemma_hyps)))
        elif kind == "r" and colon and len(words) == 4:
            origin = Res(int_of(lineno, words[1]), int_of(lineno, words[2]), lit_of(lineno, words[3]))
            clauses.append(Clause(int_of(lineno, words[0]), lits, origin))
        else:
            fail(lineno, f"unrecognised line: {line}")
    return ResolutionProof(tuple(hyps), clauses)
