"""LCF-style trusted kernel.

A ``Thm`` carries only its conclusion and can be produced solely by the
kernel's primitive operations, each of which enforces the side condition of
its rule. Holding a ``Thm`` concluding ``unsat(E)`` is the refutation.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

from ..exceptions import LcfRejection, MalformedNode
from ..terms import Assignment
from ..theories import inference_checker
from .nodes import (
    Conclusion,
    conclude_clash,
    conclude_entail,
    conclude_input,
    conclude_resolve,
    conclude_theory,
)

_KERNEL_KEY = object()


class ThmCounter:
    """Live and peak number of theorems of one kernel."""

    def __init__(self):
        self._lock = threading.Lock()
        self.live = 0
        self.peak = 0

    def up(self):
        with self._lock:
            self.live += 1
            self.peak = max(self.peak, self.live)

    def down(self):
        with self._lock:
            self.live -= 1


class Thm:
    __slots__ = ("_conclusion", "_counter")

    def __init__(self, key, conclusion: Conclusion, counter: ThmCounter):
        if key is not _KERNEL_KEY:
            raise LcfRejection("theorems are only built by the kernel")
        self._conclusion = conclusion
        self._counter = counter
        counter.up()

    def __del__(self):
        counter = getattr(self, "_counter", None)
        if counter is not None:
            counter.down()

    @property
    def conclusion(self) -> Conclusion:
        return self._conclusion

    def __repr__(self):
        return f"Thm({self._conclusion})"


class LcfKernel:
    def __init__(self, inputs: Sequence[Assignment]):
        self._inputs = tuple(inputs)
        self._lock = threading.Lock()
        self.counter = ThmCounter()

    def _thm(self, build) -> Thm:
        with self._lock:
            try:
                conclusion = build()
            except MalformedNode as exc:
                raise LcfRejection(str(exc)) from exc
            return Thm(_KERNEL_KEY, conclusion, self.counter)

    def axiom(self, index: int) -> Thm:
        if not 0 <= index < len(self._inputs):
            raise LcfRejection(f"no input {index}")
        return self._thm(lambda: conclude_input(self._inputs[index]))

    def thy(self, module: str, rule: str, premises: Iterable[Assignment], conclusion: Assignment) -> Thm:
        premises = frozenset(premises)

        def build():
            if not inference_checker(module).check_inference(premises, conclusion):
                raise MalformedNode(f"{module} rejects {rule} step concluding {conclusion}")
            return conclude_theory(premises, conclusion)

        return self._thm(build)

    def clash(self, thm: Thm, opposite: Assignment) -> Thm:
        return self._thm(lambda: conclude_clash(thm.conclusion, opposite))

    def resolve(self, pivot: Assignment, left: Thm, right: Thm) -> Thm:
        return self._thm(lambda: conclude_resolve(pivot, left.conclusion, right.conclusion))

    def entail(self, pivot: Assignment, thm: Thm) -> Thm:
        return self._thm(lambda: conclude_entail(pivot, thm.conclusion))

    @property
    def live(self) -> int:
        return self.counter.live

    @property
    def peak(self) -> int:
        return self.counter.peak
