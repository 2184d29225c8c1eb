import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError
from django.db import transaction
from rich.console import Console

from bench_tools.models import BenchRecord
from bench_tools.utils import compare_manifest, load_manifest, render_table, run_bench, write_csv
from core.conf import solver_setting
from core.kernel import Config, ProofMode
from smtlib_tools.management.commands.solve import INTERNAL_ERROR, USAGE_ERROR, parse_modules

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Solve every .smt2 file in a directory and report one row per file"

    def add_arguments(self, parser):
        parser.add_argument("dir")
        parser.add_argument("--csv", help="write the rows to this CSV file")
        parser.add_argument("--record", metavar="LABEL", help="store the rows as BenchRecords under LABEL")
        parser.add_argument("--workers", type=int)
        parser.add_argument("--mode", choices=[m.value for m in ProofMode])
        parser.add_argument("--modules")
        parser.add_argument("--max-steps", type=int)

    def handle(self, *args, **options):
        directory = Path(options["dir"])
        if not directory.is_dir():
            raise CommandError(f"{directory} is not a directory", returncode=USAGE_ERROR)
        try:
            config = Config.from_settings(
                proof_mode=options["mode"],
                max_steps=options["max_steps"],
                modules=parse_modules(options["modules"]),
            )
        except ValueError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        workers = options["workers"] or solver_setting("BENCH_WORKERS")

        rows = run_bench(directory, config, workers)
        render_table(rows, Console(file=self.stdout, width=120))

        if options["csv"]:
            try:
                write_csv(rows, options["csv"])
            except OSError as exc:
                raise CommandError(f"cannot write {options['csv']}: {exc}", returncode=INTERNAL_ERROR) from exc

        if options["record"]:
            with transaction.atomic():
                BenchRecord.objects.bulk_create(
                    BenchRecord(
                        run_label=options["record"],
                        file=row.file,
                        verdict=row.verdict,
                        steps=row.steps,
                        decisions=row.decisions,
                        conflicts=row.conflicts,
                        proof_checked=row.proof_checked,
                        wall_millis=row.wall_millis,
                    )
                    for row in rows
                )

        manifest = load_manifest(directory)
        if manifest:
            mismatches = compare_manifest(rows, manifest)
            for name, (expected, got) in sorted(mismatches.items()):
                self.stderr.write(f"{name}: expected {expected}, got {got}")
            if mismatches:
                raise CommandError(
                    f"{len(mismatches)} verdicts disagree with the manifest", returncode=INTERNAL_ERROR
                )
            self.stdout.write(self.style.SUCCESS(f"{len(rows)} files agree with the manifest"))
