import logging

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import CdsatError, ProofFormatError
from core.proofs import CheckReport, check, read_proof_terms, read_resolution, replay
from core.proofs.nodes import Refutes
from smtlib_tools.exceptions import ParseError
from smtlib_tools.management.commands.solve import INTERNAL_ERROR, USAGE_ERROR, read_text
from smtlib_tools.parser import ScriptParser

logger = logging.getLogger(__name__)


def proof_format_of(text: str) -> str:
    """``cdsat`` for s-expression proofs, ``res`` for the line format."""
    for line in text.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith(";"):
            return "cdsat" if stripped.startswith("(") else "res"
    return "res"


class Command(BaseCommand):
    help = "Check a proof file against the problem it refutes"

    def add_arguments(self, parser):
        parser.add_argument("problem")
        parser.add_argument("proof")

    def handle(self, *args, **options):
        try:
            self.verify(options)
        except CommandError:
            raise
        except Exception as exc:
            logger.exception("internal error while checking %s", options["proof"])
            raise CommandError(f"internal error: {exc}", returncode=INTERNAL_ERROR) from exc

    def verify(self, options):
        reader = ScriptParser()
        try:
            reader.parse(read_text(options["problem"]))
        except ParseError as exc:
            raise CommandError(f"{options['problem']}:{exc}", returncode=USAGE_ERROR) from exc
        problem = reader.problem

        text = read_text(options["proof"])
        try:
            if proof_format_of(text) == "cdsat":
                document = read_proof_terms(text, reader.parse_term, problem)
                report = check(document.root, problem)
                conclusion = document.root.conclusion
                if report.accepted and (
                    not isinstance(conclusion, Refutes) or conclusion.elems != document.declared
                ):
                    report = CheckReport(False, None, "declared inputs differ from the refuted set")
            else:
                report = replay(read_resolution(text, reader.parse_term, problem), problem)
        except (ProofFormatError, ParseError) as exc:
            raise CommandError(f"{options['proof']}: {exc}", returncode=USAGE_ERROR) from exc
        except CdsatError as exc:
            # ill-sorted assignments and the like inside an otherwise readable file
            report = CheckReport(False, None, str(exc))

        self.stdout.write(str(report))
