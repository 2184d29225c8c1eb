import logging

from django.core.management.base import BaseCommand, CommandError

from bench_tools.generator import FAMILIES, load_config, write_batch
from bench_tools.oracle import oracle
from core.exceptions import TooLarge
from smtlib_tools.management.commands.solve import USAGE_ERROR
from smtlib_tools.parser import parse

logger = logging.getLogger(__name__)


def expected_verdict(family):
    def verdict_of(text):
        try:
            return oracle(parse(text).problem, family)
        except TooLarge as exc:
            logger.warning("no oracle verdict: %s", exc)
            return None

    return verdict_of


class Command(BaseCommand):
    help = "Write seeded random problems of one family, with oracle verdicts in manifest.yaml"

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, required=True)
        parser.add_argument("--family", choices=FAMILIES, required=True)
        parser.add_argument("--count", type=int, required=True)
        parser.add_argument("--out", required=True)
        parser.add_argument("--config", help="generator parameters (YAML)")

    def handle(self, *args, **options):
        if options["count"] < 0:
            raise CommandError("--count must not be negative", returncode=USAGE_ERROR)
        try:
            config = load_config(options["config"])
        except OSError as exc:
            raise CommandError(f"cannot read generator config: {exc}", returncode=USAGE_ERROR) from exc
        family = options["family"]
        try:
            manifest = write_batch(
                family,
                options["seed"],
                options["count"],
                options["out"],
                config,
                verdict_of=expected_verdict(family),
            )
        except OSError as exc:
            raise CommandError(f"cannot write to {options['out']}: {exc}", returncode=USAGE_ERROR) from exc
        self.stdout.write(self.style.SUCCESS(f"wrote {manifest['count']} {family} problems to {options['out']}"))
