"""Printing scripts back to SMT-LIB text."""

from typing import List, Tuple

from core.terms import AbsValue, BoolValue, RatValue, Sort, value_to_smtlib

from .parser import Command, Script


def _arg(arg) -> str:
    if isinstance(arg, tuple):
        return "(" + " ".join(str(a) for a in arg) + ")"
    if isinstance(arg, Sort):
        return arg.name
    if isinstance(arg, (BoolValue, RatValue, AbsValue)):
        return value_to_smtlib(arg)
    return str(arg)


def print_command(command: Command) -> str:
    return "(" + " ".join([command.name] + [_arg(a) for a in command.args]) + ")"


def print_script(script: Script) -> str:
    return "".join(print_command(c) + "\n" for c in script.commands)


def script_shape(script: Script) -> List[Tuple[str, ...]]:
    """Commands with their printed arguments; equal shapes mean structurally identical scripts."""
    return [(c.name, *(_arg(a) for a in c.args)) for c in script.commands]


def model_to_smtlib(model) -> str:
    """``(model (define <term> <value>) ...)`` over the uninterpreted terms of a model."""
    defines = [
        f"  (define {term} {value_to_smtlib(value)})"
        for term, value in sorted(model.items(), key=lambda kv: kv[0].id)
        if term.head.is_uninterpreted
    ]
    return "\n".join(["(model"] + defines) + ")"
