"""The ``cdsat-pt`` s-expression format for proof terms.

::

    (cdsat-pt
      (term <id> <term>)*
      (node <n> (input <i> (<id> <- <value>)))
      (node <n> (thy <module> <rule> (prem (<id> <- <value>)*) (concl (<id> <- <value>))))
      (node <n> (clash <n> (<id> <- <value>)))
      (node <n> (res (<id> <- <value>) <n> <n>))
      (node <n> (entail (<id> <- <value>) <n>))
      (refutation (inputs (<id> <- <value>)*) <n>))

Terms are referred to by their id in the header table; nodes are numbered
children first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Optional

from ..exceptions import ProofFormatError
from ..sexp import Atom, SexpError, SList, read_one, read_value, to_text
from ..terms import Assignment, Problem, Term, sorted_assignments, value_to_smtlib
from .nodes import (
    ClashNode,
    EntailNode,
    InputNode,
    ProofFactory,
    ProofNode,
    Refutes,
    ResolveNode,
    TheoryNode,
    post_order,
)


@dataclass(frozen=True)
class ProofDocument:
    root: ProofNode
    declared: FrozenSet[Assignment]


def _assignment(a: Assignment) -> str:
    return f"({a.term.id} <- {value_to_smtlib(a.value)})"


def _terms_of(root: ProofNode) -> Dict[int, Term]:
    terms: Dict[int, Term] = {}

    def note(assignments: Iterable[Assignment]):
        for a in assignments:
            terms.setdefault(a.term.id, a.term)

    for node in post_order(root):
        if isinstance(node, InputNode):
            note([node.assignment])
        elif isinstance(node, TheoryNode):
            note(node.premises)
            note([node.claim])
        elif isinstance(node, ClashNode):
            note([node.opposite])
        else:
            note([node.pivot])
    return terms


def write_proof_terms(root: ProofNode, declared: Optional[Iterable[Assignment]] = None) -> str:
    """Render the DAG rooted at ``root``, shared nodes once."""
    if declared is None:
        declared = root.conclusion.elems if isinstance(root.conclusion, Refutes) else ()
    declared = sorted_assignments(declared)
    terms = _terms_of(root)
    for a in declared:
        terms.setdefault(a.term.id, a.term)
    lines = ["(cdsat-pt"]
    lines += [f"  (term {tid} {terms[tid]})" for tid in sorted(terms)]
    number: Dict[int, int] = {}
    for node in post_order(root):
        n = number[node.uid] = len(number)
        if isinstance(node, InputNode):
            body = f"(input {node.index} {_assignment(node.assignment)})"
        elif isinstance(node, TheoryNode):
            prem = " ".join(_assignment(p) for p in sorted_assignments(node.premises))
            body = f"(thy {node.module} {node.rule} (prem {prem}) (concl {_assignment(node.claim)}))"
        elif isinstance(node, ClashNode):
            body = f"(clash {number[node.inner.uid]} {_assignment(node.opposite)})"
        elif isinstance(node, ResolveNode):
            body = f"(res {_assignment(node.pivot)} {number[node.left.uid]} {number[node.right.uid]})"
        else:
            body = f"(entail {_assignment(node.pivot)} {number[node.inner.uid]})"
        lines.append(f"  (node {n} {body.replace('(prem )', '(prem)')})")
    inputs = " ".join(_assignment(a) for a in declared)
    lines.append(f"  (refutation (inputs {inputs}) {number[root.uid]}))")
    return "\n".join(lines) + "\n"


class _Reader:
    def __init__(self, parse_term: Callable[[str], Term], problem: Problem):
        self.parse_term = parse_term
        self.problem = problem
        self.terms: Dict[int, Term] = {}
        self.nodes: Dict[int, ProofNode] = {}
        self.factory = ProofFactory(check_theory=False)

    def fail(self, sexp, message):
        raise ProofFormatError(f"{sexp.line}:{sexp.col}: {message}")

    def integer(self, sexp) -> int:
        if not isinstance(sexp, Atom) or not sexp.text.isdigit():
            self.fail(sexp, f"expected a number, got {to_text(sexp)}")
        return int(sexp.text)

    def symbol(self, sexp) -> str:
        if not isinstance(sexp, Atom):
            self.fail(sexp, f"expected a symbol, got {to_text(sexp)}")
        return sexp.text

    def node(self, sexp) -> ProofNode:
        n = self.integer(sexp)
        if n not in self.nodes:
            self.fail(sexp, f"node {n} is used before it is defined")
        return self.nodes[n]

    def assignment(self, sexp) -> Assignment:
        if not isinstance(sexp, SList) or len(sexp) != 3 or to_text(sexp[1]) != "<-":
            self.fail(sexp, f"expected (<id> <- <value>), got {to_text(sexp)}")
        tid = self.integer(sexp[0])
        if tid not in self.terms:
            self.fail(sexp, f"unknown term id {tid}")
        try:
            return Assignment(self.terms[tid], read_value(sexp[2], self.problem.sorts))
        except SexpError as exc:
            self.fail(sexp, str(exc))

    def body(self, sexp) -> ProofNode:
        if not isinstance(sexp, SList) or not len(sexp):
            self.fail(sexp, "expected a proof node")
        kind, parts, make = sexp.head(), sexp.items[1:], self.factory.make_raw
        if kind == "input" and len(parts) == 2:
            return make(InputNode, self.integer(parts[0]), self.assignment(parts[1]))
        if kind == "thy" and len(parts) == 4:
            prem, concl = parts[2], parts[3]
            if not isinstance(prem, SList) or prem.head() != "prem":
                self.fail(prem, "expected (prem ...)")
            if not isinstance(concl, SList) or concl.head() != "concl" or len(concl) != 2:
                self.fail(concl, "expected (concl ...)")
            premises = frozenset(self.assignment(p) for p in prem.items[1:])
            return make(
                TheoryNode, self.symbol(parts[0]), self.symbol(parts[1]), premises, self.assignment(concl[1])
            )
        if kind == "clash" and len(parts) == 2:
            return make(ClashNode, self.node(parts[0]), self.assignment(parts[1]))
        if kind == "res" and len(parts) == 3:
            return make(ResolveNode, self.assignment(parts[0]), self.node(parts[1]), self.node(parts[2]))
        if kind == "entail" and len(parts) == 2:
            return make(EntailNode, self.assignment(parts[0]), self.node(parts[1]))
        self.fail(sexp, f"unknown proof node {to_text(sexp)}")

    def read(self, text: str) -> ProofDocument:
        try:
            doc = read_one(text)
        except SexpError as exc:
            raise ProofFormatError(str(exc)) from exc
        if not isinstance(doc, SList) or doc.head() != "cdsat-pt":
            raise ProofFormatError("not a cdsat-pt proof")
        refutation = None
        for entry in doc.items[1:]:
            if not isinstance(entry, SList) or not len(entry):
                self.fail(entry, "expected an entry")
            head = entry.head()
            if head == "term" and len(entry) == 3:
                self.terms[self.integer(entry[1])] = self.parse_term(to_text(entry[2]))
            elif head == "node" and len(entry) == 3:
                n = self.integer(entry[1])
                if n in self.nodes:
                    self.fail(entry, f"node {n} defined twice")
                self.nodes[n] = self.body(entry[2])
            elif head == "refutation" and len(entry) == 3:
                inputs = entry[1]
                if not isinstance(inputs, SList) or inputs.head() != "inputs":
                    self.fail(inputs, "expected (inputs ...)")
                declared = frozenset(self.assignment(a) for a in inputs.items[1:])
                refutation = ProofDocument(self.node(entry[2]), declared)
            else:
                self.fail(entry, f"unknown entry {head}")
        if refutation is None:
            raise ProofFormatError("missing (refutation ...)")
        return refutation


def read_proof_terms(text: str, parse_term: Callable[[str], Term], problem: Problem) -> ProofDocument:
    """Parse a ``cdsat-pt`` file; nodes keep whatever conclusion their parts give."""
    return _Reader(parse_term, problem).read(text)
