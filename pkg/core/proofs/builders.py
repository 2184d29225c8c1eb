"""Proof construction back ends the kernel calls during transitions."""

from __future__ import annotations

from typing import Sequence

from ..terms import Assignment
from .lcf import LcfKernel
from .nodes import ProofFactory


class NoProofs:
    """Records nothing; every proof reference is None."""

    name = "none"

    def input(self, index: int, assignment: Assignment):
        return None

    def theory(self, inference):
        return None

    def clash(self, inner, opposite: Assignment):
        return None

    def resolve(self, pivot: Assignment, left, right):
        return None

    def entail(self, pivot: Assignment, inner):
        return None


class TermProofs(NoProofs):
    name = "proof-terms"

    def __init__(self, check_theory: bool = False):
        self.factory = ProofFactory(check_theory=check_theory)

    def input(self, index, assignment):
        return self.factory.input(index, assignment)

    def theory(self, inference):
        return self.factory.theory(
            inference.module, inference.rule, inference.premises, inference.conclusion
        )

    def clash(self, inner, opposite):
        return self.factory.clash(inner, opposite)

    def resolve(self, pivot, left, right):
        return self.factory.resolve(pivot, left, right)

    def entail(self, pivot, inner):
        return self.factory.entail(pivot, inner)


class LcfProofs(NoProofs):
    name = "lcf"

    def __init__(self, inputs: Sequence[Assignment]):
        self.kernel = LcfKernel(inputs)

    def input(self, index, assignment):
        return self.kernel.axiom(index)

    def theory(self, inference):
        return self.kernel.thy(
            inference.module, inference.rule, inference.premises, inference.conclusion
        )

    def clash(self, inner, opposite):
        return self.kernel.clash(inner, opposite)

    def resolve(self, pivot, left, right):
        return self.kernel.resolve(pivot, left, right)

    def entail(self, pivot, inner):
        return self.kernel.entail(pivot, inner)
