"""Theory module registry.

Modules are polled in registration order: Bool, EUF, LRA, then black-box
adapters.
"""

from functools import lru_cache
from typing import Iterable, List

from ..terms import TermStore
from .base import Inference, OracleSat, OracleUnsat, TheoryModule, View
from .blackbox import BlackBoxModule, FmOracle
from .boolean import BoolModule
from .euf import EufModule
from .lra import LraModule

MODULE_CLASSES = {
    BoolModule.module_id: BoolModule,
    EufModule.module_id: EufModule,
    LraModule.module_id: LraModule,
}

BLACK_BOX_ORACLES = {
    "BB-FM": FmOracle,
}

POLL_ORDER = ("Bool", "EUF", "LRA")


def build_module(name: str, store: TermStore) -> TheoryModule:
    if name in MODULE_CLASSES:
        return MODULE_CLASSES[name](store)
    if name in BLACK_BOX_ORACLES:
        return BlackBoxModule(store, BLACK_BOX_ORACLES[name]())
    raise KeyError(f"unknown theory module {name}")


def build_modules(names: Iterable[str], store: TermStore) -> List[TheoryModule]:
    names = list(dict.fromkeys(names))
    native = [n for n in POLL_ORDER if n in names]
    adapters = [n for n in names if n not in POLL_ORDER]
    return [build_module(n, store) for n in native + adapters]


@lru_cache(maxsize=None)
def inference_checker(module_id: str) -> TheoryModule:
    """Module instance, independent of any solver run, used to re-check inferences."""
    return build_module(module_id, TermStore())


__all__ = [
    "BlackBoxModule",
    "BoolModule",
    "EufModule",
    "FmOracle",
    "Inference",
    "LraModule",
    "OracleSat",
    "TheoryModule",
    "OracleUnsat",
    "View",
    "build_module",
    "build_modules",
    "inference_checker",
]
