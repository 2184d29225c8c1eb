"""Seeded random problem families, written as SMT-LIB scripts.

The same seed, family, index and parameters always give the same bytes.
"""

from __future__ import annotations

import logging
import random
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

import yaml

from core.conf import solver_setting
from core.terms import format_rational

logger = logging.getLogger(__name__)

FAMILIES = ("bool", "lra", "euf")

DEFAULT_CONFIG = Path(__file__).resolve().parent / "config.yaml"

MANIFEST = "manifest.yaml"


def load_config(path=None) -> Dict[str, dict]:
    """Family parameters from ``path``, the GENERATOR_CONFIG setting or the bundled file."""
    path = path or solver_setting("GENERATOR_CONFIG") or DEFAULT_CONFIG
    with open(path) as f:
        return yaml.safe_load(f)


def _literal(rng: random.Random, atom: str) -> str:
    return atom if rng.random() < 0.5 else f"(not {atom})"


def _clause(rng: random.Random, pool: List[str], width: int) -> str:
    lits = [_literal(rng, rng.choice(pool)) for _ in range(width)]
    return lits[0] if len(lits) == 1 else "(or " + " ".join(lits) + ")"


def _clauses(rng: random.Random, pool: List[str], params: dict) -> List[str]:
    count = rng.randint(params["min_clauses"], params["max_clauses"])
    return [
        f"(assert {_clause(rng, pool, rng.randint(1, params['max_width']))})"
        for _ in range(count)
    ]


def generate_bool(rng: random.Random, params: dict) -> List[str]:
    atoms = [f"p{i}" for i in range(rng.randint(params["min_atoms"], params["max_atoms"]))]
    lines = ["(set-logic QF_UF)"]
    lines += [f"(declare-const {a} Bool)" for a in atoms]
    for line in _clauses(rng, atoms, params):
        if rng.random() < params["formula_ratio"]:
            a, b, c = (_literal(rng, rng.choice(atoms)) for _ in range(3))
            line = f"(assert (=> (and {a} {b}) {c}))"
        lines.append(line)
    return lines


def _linear_term(rng: random.Random, variables: List[str], params: dict) -> str:
    chosen = rng.sample(variables, rng.randint(1, min(2, len(variables))))
    parts = []
    for v in chosen:
        c = 0
        while c == 0:
            c = rng.randint(-params["max_coeff"], params["max_coeff"])
        parts.append(v if c == 1 else f"(* {format_rational(Fraction(c))} {v})")
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def generate_lra(rng: random.Random, params: dict) -> List[str]:
    variables = [f"x{i}" for i in range(rng.randint(params["min_vars"], params["max_vars"]))]
    pool = []
    for _ in range(rng.randint(2, params["max_atoms"])):
        rel = rng.choice(("<=", "<", "<=", "="))
        k = rng.randint(-params["max_const"], params["max_const"])
        pool.append(f"({rel} {_linear_term(rng, variables, params)} {format_rational(Fraction(k))})")
    lines = ["(set-logic QF_LRA)"]
    lines += [f"(declare-const {v} Real)" for v in variables]
    lines += _clauses(rng, pool, params)
    if rng.random() < params["assign_ratio"]:
        v = rng.choice(variables)
        q = Fraction(rng.randint(-2 * params["max_const"], 2 * params["max_const"]), 2)
        lines.append(f"(assign {v} {format_rational(q)})")
    return lines


def generate_euf(rng: random.Random, params: dict) -> List[str]:
    constants = [f"c{i}" for i in range(params["constants"])]
    terms = list(constants)
    while len(terms) < params["max_ground_terms"]:
        candidate = f"(f {rng.choice(terms)})"
        if candidate not in terms:
            terms.append(candidate)
    pool = [f"(= {a} {b})" for a, b in (rng.sample(terms, 2) for _ in range(len(terms) + 2))]
    lines = ["(set-logic QF_UF)", "(declare-sort U 0)"]
    lines += [f"(declare-const {c} U)" for c in constants]
    lines.append("(declare-fun f (U) U)")
    lines += _clauses(rng, pool, params)
    if rng.random() < params["assign_ratio"]:
        lines.append(f"(assign {rng.choice(constants)} (abs U {rng.randint(0, 1)}))")
    return lines


GENERATORS: Dict[str, Callable[[random.Random, dict], List[str]]] = {
    "bool": generate_bool,
    "lra": generate_lra,
    "euf": generate_euf,
}


def generate(family: str, seed: int, index: int, config: Optional[dict] = None) -> str:
    if family not in GENERATORS:
        raise ValueError(f"unknown family {family}")
    config = config or load_config()
    rng = random.Random(seed * 1_000_003 + index)
    lines = GENERATORS[family](rng, config[family])
    lines += ["(check-sat)", "(exit)"]
    return "\n".join(lines) + "\n"


def file_name(family: str, seed: int, index: int) -> str:
    return f"{family}-{seed}-{index:03d}.smt2"


def write_batch(family: str, seed: int, count: int, out_dir, config: Optional[dict] = None, verdict_of=None) -> dict:
    """Write ``count`` problems and a manifest; returns the manifest.

    ``verdict_of`` maps script text to the expected verdict, if given.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = config or load_config()
    files = {}
    for index in range(count):
        text = generate(family, seed, index, config)
        name = file_name(family, seed, index)
        (out / name).write_text(text, encoding="utf-8")
        files[name] = verdict_of(text) if verdict_of else None
    manifest = {"seed": seed, "family": family, "count": count, "files": files}
    with open(out / MANIFEST, "w") as f:
        yaml.safe_dump(manifest, f, sort_keys=True)
    logger.info("wrote %d %s problems to %s", count, family, out)
    return manifest
