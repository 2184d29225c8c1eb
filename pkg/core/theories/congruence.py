"""Congruence closure over hash-consed terms, with explanations.

Classes are kept with eager relabeling (every term points at its
representative) and a proof forest records why each merge happened, so
``explain`` can return the asserted reasons behind any derived equality.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, FrozenSet, Iterable, List, Set, Tuple, Union

from ..terms import Assignment, Term


@dataclass(frozen=True)
class Congruence:
    left: Term
    right: Term


Reason = Union[FrozenSet[Assignment], Congruence]


class CongruenceClosure:
    def __init__(self):
        self._rep: Dict[Term, Term] = {}
        self._members: Dict[Term, List[Term]] = {}
        self._uses: Dict[Term, List[Term]] = {}
        self._sig: Dict[tuple, Term] = {}
        self._forest: Dict[Term, Tuple[Term, Reason]] = {}
        self._pending: Deque[Tuple[Term, Term, Reason]] = deque()
        self.order: List[Term] = []

    def clone(self) -> "CongruenceClosure":
        other = CongruenceClosure()
        other._rep = dict(self._rep)
        other._members = {k: list(v) for k, v in self._members.items()}
        other._uses = {k: list(v) for k, v in self._uses.items()}
        other._sig = dict(self._sig)
        other._forest = dict(self._forest)
        other.order = list(self.order)
        return other

    def __contains__(self, term: Term) -> bool:
        return term in self._rep

    def add(self, term: Term) -> None:
        if term in self._rep:
            return
        for arg in term.args:
            self.add(arg)
        self._rep[term] = term
        self._members[term] = [term]
        self._uses.setdefault(term, [])
        self.order.append(term)
        if term.args:
            for arg in term.args:
                self._uses[self.find(arg)].append(term)
            key = self._signature(term)
            other = self._sig.get(key)
            if other is None:
                self._sig[key] = term
            else:
                self._pending.append((term, other, Congruence(term, other)))
                self._process()

    def find(self, term: Term) -> Term:
        return self._rep[term]

    def same(self, a: Term, b: Term) -> bool:
        return self._rep[a] is self._rep[b]

    def members(self, term: Term) -> List[Term]:
        return self._members[self.find(term)]

    def classes(self) -> List[List[Term]]:
        seen, out = set(), []
        for t in self.order:
            rep = self._rep[t]
            if rep.id not in seen:
                seen.add(rep.id)
                out.append(sorted(self._members[rep], key=self.order.index))
        return out

    def merge(self, a: Term, b: Term, reason: Reason) -> None:
        self.add(a)
        self.add(b)
        self._pending.append((a, b, reason))
        self._process()

    def _signature(self, term: Term) -> tuple:
        return (term.head, tuple(self._rep[arg].id for arg in term.args))

    def _process(self) -> None:
        while self._pending:
            a, b, reason = self._pending.popleft()
            ra, rb = self._rep[a], self._rep[b]
            if ra is rb:
                continue
            if len(self._members[ra]) > len(self._members[rb]):
                a, b, ra, rb = b, a, rb, ra
            self._reroot(a)
            self._forest[a] = (b, reason)
            moved = self._members.pop(ra)
            for m in moved:
                self._rep[m] = rb
            self._members[rb].extend(moved)
            for app in self._uses.pop(ra, []):
                key = self._signature(app)
                other = self._sig.get(key)
                if other is None:
                    self._sig[key] = app
                elif self._rep[other] is not self._rep[app]:
                    self._pending.append((app, other, Congruence(app, other)))
                self._uses[rb].append(app)

    def _reroot(self, node: Term) -> None:
        path = []
        while node in self._forest:
            parent, reason = self._forest[node]
            path.append((node, parent, reason))
            node = parent
        for child, parent, reason in path:
            self._forest[parent] = (child, reason)
        if path:
            del self._forest[path[0][0]]

    def _ancestors(self, node: Term) -> List[Tuple[Term, Reason]]:
        chain = []
        while node in self._forest:
            parent, reason = self._forest[node]
            chain.append((node, reason))
            node = parent
        chain.append((node, None))
        return chain

    def _path(self, a: Term, b: Term) -> List[Reason]:
        up_a = self._ancestors(a)
        position = {node.id: i for i, (node, _) in enumerate(up_a)}
        reasons = []
        node = b
        while node.id not in position:
            parent, reason = self._forest[node]
            reasons.append(reason)
            node = parent
        reasons.extend(reason for _, reason in up_a[: position[node.id]])
        return reasons

    def explain(self, a: Term, b: Term) -> Set[Assignment]:
        """Asserted reasons that force ``a`` and ``b`` into one class."""
        if not self.same(a, b):
            raise ValueError(f"{a} and {b} are not congruent")
        out: Set[Assignment] = set()
        todo = [(a, b)]
        done = set()
        while todo:
            x, y = todo.pop()
            if x is y or (x.id, y.id) in done:
                continue
            done.add((x.id, y.id))
            for reason in self._path(x, y):
                if isinstance(reason, Congruence):
                    todo.extend(zip(reason.left.args, reason.right.args))
                else:
                    out |= reason
        return out


def closure_terms(terms: Iterable[Term]) -> CongruenceClosure:
    cc = CongruenceClosure()
    for t in terms:
        cc.add(t)
    return cc
