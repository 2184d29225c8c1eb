import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import CdsatError
from core.kernel import Config, ProofMode
from core.theories import BLACK_BOX_ORACLES, MODULE_CLASSES
from smtlib_tools.driver import PROOF_FORMATS, model_text, proof_text, solve_script
from smtlib_tools.exceptions import ParseError
from smtlib_tools.parser import parse
from smtlib_tools.trace import TraceError, TraceFile

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
INTERNAL_ERROR = 2


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}", returncode=USAGE_ERROR) from exc


def parse_modules(value):
    if value is None:
        return None
    names = [n.strip() for n in value.split(",") if n.strip()]
    unknown = [n for n in names if n not in MODULE_CLASSES and n not in BLACK_BOX_ORACLES]
    if unknown or not names:
        raise CommandError(f"unknown theory modules: {', '.join(unknown) or value}", returncode=USAGE_ERROR)
    return names


class Command(BaseCommand):
    help = "Solve an SMT-LIB script; prints sat, unsat or unknown on the first line"

    def add_arguments(self, parser):
        parser.add_argument("file")
        parser.add_argument("--proof-format", choices=PROOF_FORMATS, default="cdsat")
        parser.add_argument("--mode", choices=[m.value for m in ProofMode])
        parser.add_argument("--proof-out")
        parser.add_argument("--trace")
        parser.add_argument("--max-steps", type=int)
        parser.add_argument("--modules", help="comma separated module names, e.g. Bool,EUF,BB-FM")
        parser.add_argument("--debug-checks", action="store_true")

    def handle(self, *args, **options):
        try:
            self.solve(options)
        except CommandError:
            raise
        except Exception as exc:
            logger.exception("internal error while solving %s", options["file"])
            raise CommandError(f"internal error: {exc}", returncode=INTERNAL_ERROR) from exc

    def solve(self, options):
        try:
            script = parse(read_text(options["file"]))
        except ParseError as exc:
            raise CommandError(f"{options['file']}:{exc}", returncode=USAGE_ERROR) from exc

        try:
            config = Config.from_settings(
                proof_mode=options["mode"],
                max_steps=options["max_steps"],
                modules=parse_modules(options["modules"]),
                debug=options["debug_checks"] or None,
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc

        proof_format = options["proof_format"]
        wants_proof = script.wants_proof or options["proof_out"]
        if wants_proof and proof_format != "none" and config.proof_mode is ProofMode.LCF:
            raise CommandError(
                "lcf mode keeps no proof structure; use --proof-format none", returncode=USAGE_ERROR
            )

        try:
            if options["trace"]:
                with TraceFile(options["trace"]) as sink:
                    config.trace = sink
                    outcome = solve_script(script, config)
            else:
                outcome = solve_script(script, config)
            proof = proof_text(outcome, script.problem, proof_format) if wants_proof else None
        except TraceError as exc:
            raise CommandError(str(exc), returncode=INTERNAL_ERROR) from exc
        except CdsatError as exc:
            logger.error("internal error while solving %s: %s", options["file"], exc)
            raise CommandError(f"internal error: {exc}", returncode=INTERNAL_ERROR) from exc

        self.stdout.write(outcome.name)
        if script.wants_model and model_text(outcome) is not None:
            self.stdout.write(model_text(outcome))
        if proof is not None:
            if options["proof_out"]:
                try:
                    Path(options["proof_out"]).write_text(proof, encoding="utf-8")
                except OSError as exc:
                    raise CommandError(f"cannot write proof: {exc}", returncode=INTERNAL_ERROR) from exc
            else:
                self.stdout.write(proof, ending="")
        elif wants_proof and proof_format != "none" and outcome.name == "unsat":
            self.stderr.write("no proof recorded in this proof mode")
