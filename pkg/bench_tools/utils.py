import csv
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Dict, List, Optional

import yaml
from rich.console import Console
from rich.table import Table

from core.exceptions import CdsatError
from core.kernel import Config
from smtlib_tools.driver import solve_script
from smtlib_tools.exceptions import ParseError
from smtlib_tools.parser import parse

from .generator import MANIFEST

logger = logging.getLogger(__name__)


@dataclass
class BenchRow:
    """One solved file; field order is the CSV column order."""

    file: str
    verdict: str
    steps: int = 0
    decisions: int = 0
    conflicts: int = 0
    proof_checked: bool = False
    wall_millis: int = 0


CSV_HEADER = [f.name for f in fields(BenchRow)]


def solve_file(path: Path, config: Config) -> BenchRow:
    """Solve a single script file; parse and kernel failures become ``error`` rows."""
    try:
        script = parse(path.read_text(encoding="utf-8"))
        outcome = solve_script(script, config)
    except (OSError, ParseError) as e:
        logger.warning("skipping %s: %s", path.name, e)
        return BenchRow(path.name, "error")
    except CdsatError as e:
        logger.error("internal error on %s: %s", path.name, e)
        return BenchRow(path.name, "error")
    return BenchRow(
        path.name,
        outcome.name,
        outcome.stats.steps,
        outcome.stats.decisions,
        outcome.stats.conflicts,
        outcome.proof_checked,
        outcome.wall_millis,
    )


def run_bench(directory, config: Config, workers: int = 4) -> List[BenchRow]:
    """
    Solve every ``*.smt2`` file under ``directory``, one solver per file.

    Args:
        directory: Folder holding the scripts
        config: Solver configuration shared by all runs
        workers: Number of worker threads
    """
    files = sorted(Path(directory).glob("*.smt2"))
    rows = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(solve_file, path, config) for path in files]
        for future in as_completed(futures):
            rows.append(future.result())
    rows.sort(key=lambda r: r.file)
    return rows


def write_csv(rows: List[BenchRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(astuple(row))


def load_manifest(directory) -> Optional[dict]:
    path = Path(directory) / MANIFEST
    if not path.exists():
        return None
    with open(path) as f:
        return yaml.safe_load(f)


def compare_manifest(rows: List[BenchRow], manifest: dict) -> Dict[str, tuple]:
    """Files whose verdict disagrees with the manifest, as ``{file: (expected, got)}``.

    ``unknown`` and ``error`` rows are not counted as disagreements.
    """
    expected = manifest.get("files") or {}
    mismatches = {}
    for row in rows:
        want = expected.get(row.file)
        if want and row.verdict in ("sat", "unsat") and row.verdict != want:
            mismatches[row.file] = (want, row.verdict)
    return mismatches


def render_table(rows: List[BenchRow], console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(title="Benchmark results")
    for name in CSV_HEADER:
        table.add_column(name, justify="right" if name not in ("file", "verdict") else "left")
    for row in rows:
        table.add_row(*(str(v) for v in astuple(row)))
    console.print(table)
