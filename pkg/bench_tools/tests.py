import os
import random
import tempfile
import time
from io import StringIO
from pathlib import Path

import yaml
from django.contrib.auth.models import User
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from django.urls import reverse
from hypothesis import given, settings
from hypothesis import strategies as st
from rest_framework import status
from rest_framework.test import APIClient

from core.exceptions import TooLarge
from core.kernel import Config, Sat, Solver, Unsat
from core.proofs import check, export_resolution, replay
from core.proofs.mutations import mutate
from core.terms import evaluate
from smtlib_tools.driver import solve_script
from smtlib_tools.parser import parse

from .generator import FAMILIES, MANIFEST, file_name, generate, load_config, write_batch
from .models import BenchRecord
from .oracle import oracle
from .utils import CSV_HEADER, BenchRow, compare_manifest, run_bench

SEED = 20240601
SCALE = float(os.environ.get("CDSAT_SUITE_SCALE", "1.0"))
SUITE_SIZES = {"bool": 500, "lra": 300, "euf": 300}
MUTATIONS_PER_SUITE = 100
PROBLEM_SECONDS = 20.0


def suite_size(family):
    return max(1, int(SUITE_SIZES[family] * SCALE))


def problem_text(family, index):
    return generate(family, SEED, index, load_config())


class GeneratorTests(SimpleTestCase):
    def test_same_seed_same_bytes(self):
        for family in FAMILIES:
            with self.subTest(family):
                self.assertEqual(generate(family, 7, 3), generate(family, 7, 3))
                self.assertNotEqual(generate(family, 7, 3), generate(family, 8, 3))

    def test_generated_problems_fit_the_oracle(self):
        for family in FAMILIES:
            for index in range(20):
                with self.subTest(family=family, index=index):
                    script = parse(generate(family, SEED, index))
                    self.assertIn(oracle(script.problem, family), ("sat", "unsat"))

    def test_file_names(self):
        self.assertEqual(file_name("lra", 7, 4), "lra-7-004.smt2")

    def test_unknown_family(self):
        with self.assertRaises(ValueError):
            generate("bv", 1, 0)

    def test_batch_manifest(self):
        with tempfile.TemporaryDirectory() as out:
            manifest = write_batch("bool", 3, 4, out, verdict_of=lambda text: "sat")
            self.assertEqual(manifest["count"], 4)
            self.assertEqual(sorted(manifest["files"]), [file_name("bool", 3, i) for i in range(4)])
            with open(Path(out) / MANIFEST) as f:
                self.assertEqual(yaml.safe_load(f), manifest)


class OracleTests(SimpleTestCase):
    def test_examples(self):
        cases = [
            ("bool", "(declare-const A Bool)(declare-const B Bool)(assert (or A B))(assign A false)", "sat"),
            ("lra", "(declare-const x Real)(assert (<= 1 x))(assert (<= x 0))", "unsat"),
            ("lra", "(declare-const x Real)(assign x 3)(assert (= x 4))", "unsat"),
            ("lra", "(declare-const x Real)(assign x 3)(assert (= x 3))", "sat"),
            (
                "euf",
                "(declare-sort U 0)(declare-const a U)(declare-const b U)(declare-fun f (U) U)"
                "(assert (= a b))(assert (not (= (f a) (f b))))",
                "unsat",
            ),
            (
                "euf",
                "(declare-sort U 0)(declare-const a U)(declare-const b U)"
                "(assign a (abs U 0))(assign b (abs U 1))(assert (= a b))",
                "unsat",
            ),
        ]
        for family, text, expected in cases:
            with self.subTest(text):
                self.assertEqual(oracle(parse(text).problem, family), expected)

    def test_bounds(self):
        names = [f"p{i}" for i in range(9)]
        text = "".join(f"(declare-const {n} Bool)" for n in names)
        text += "(assert (or " + " ".join(names) + "))"
        with self.assertRaises(TooLarge):
            oracle(parse(text).problem, "bool")

    def test_wrong_family(self):
        with self.assertRaises(ValueError):
            oracle(parse("(declare-const x Real)(assert (< x 1))").problem, "bool")

    @given(st.sampled_from(FAMILIES), st.integers(0, 200), st.randoms(use_true_random=False))
    @settings(deadline=None, max_examples=60)
    def test_verdict_ignores_input_order(self, family, index, rng):
        lines = problem_text(family, index).splitlines()
        header = [l for l in lines if l.startswith(("(set-logic", "(declare"))]
        body = [l for l in lines if l.startswith(("(assert", "(assign"))]
        shuffled = list(body)
        rng.shuffle(shuffled)
        original = oracle(parse("\n".join(header + body)).problem, family)
        permuted = oracle(parse("\n".join(header + shuffled)).problem, family)
        self.assertEqual(original, permuted)


class DifferentialSuite:
    """Solver against oracle on one seeded family, with the proof, model and mode checks."""

    family = None
    modules = None

    def test_suite(self):
        refutations = []
        for index in range(suite_size(self.family)):
            text = problem_text(self.family, index)
            with self.subTest(file=file_name(self.family, SEED, index)):
                script = parse(text)
                problem = script.problem
                expected = oracle(problem, self.family)
                started = time.perf_counter()
                verdict = Solver(problem, Config()).run()
                self.assertLess(time.perf_counter() - started, PROBLEM_SECONDS)
                self.assertEqual(verdict.name, expected)
                if isinstance(verdict, Unsat):
                    root = verdict.refutation.root
                    self.assertTrue(check(root, problem).accepted)
                    self.assertTrue(replay(export_resolution(root, problem), problem).accepted)
                    refutations.append((problem, root))
                elif isinstance(verdict, Sat):
                    for a in problem.inputs:
                        self.assertEqual(evaluate(a.term, verdict.model), a.value)

                self.assertEqual(solve_script(parse(text), Config(proof_mode="none")).name, expected)
                lcf = Solver(parse(text).problem, Config(proof_mode="lcf"))
                self.assertEqual(lcf.run().name, expected)
                self.assertLessEqual(lcf.lcf_excess, 0)

        rng = random.Random(SEED)
        for _ in range(MUTATIONS_PER_SUITE if refutations else 0):
            problem, root = rng.choice(refutations)
            outcome = mutate(root, rng)
            if outcome is not None:
                kind, mutated = outcome
                self.assertFalse(check(mutated, problem).accepted, kind)


class BoolSuiteTests(DifferentialSuite, SimpleTestCase):
    family = "bool"


class LraSuiteTests(DifferentialSuite, SimpleTestCase):
    family = "lra"


class LraRegressionTests(SimpleTestCase):
    """Seeded LRA problems that once ran out of steps instead of answering."""

    cases = [(7, 34), (7, 235), (7, 255), (7, 267), (SEED, 83)]

    def test_pinned_problems(self):
        config = load_config()
        for seed, index in self.cases:
            with self.subTest(file=file_name("lra", seed, index)):
                problem = parse(generate("lra", seed, index, config)).problem
                expected = oracle(problem, "lra")
                started = time.perf_counter()
                verdict = Solver(problem, Config()).run()
                self.assertLess(time.perf_counter() - started, PROBLEM_SECONDS)
                self.assertEqual(verdict.name, expected)
                if isinstance(verdict, Unsat):
                    root = verdict.refutation.root
                    self.assertTrue(check(root, problem).accepted)
                    self.assertTrue(replay(export_resolution(root, problem), problem).accepted)
                else:
                    for a in problem.inputs:
                        self.assertEqual(evaluate(a.term, verdict.model), a.value)


class EufSuiteTests(DifferentialSuite, SimpleTestCase):
    family = "euf"


class BlackBoxParityTests(SimpleTestCase):
    def test_black_box_reproduces_native_verdicts(self):
        boxed_config = Config(modules=("Bool", "BB-FM"))
        for index in range(suite_size("lra")):
            text = problem_text("lra", index)
            with self.subTest(file=file_name("lra", SEED, index)):
                native = solve_script(parse(text), Config())
                script = parse(text)
                boxed = solve_script(script, boxed_config)
                self.assertEqual(boxed.name, native.name)
                if boxed.name == "unsat":
                    self.assertTrue(boxed.proof_checked)


class BenchUtilsTests(SimpleTestCase):
    def test_csv_header_follows_row_fields(self):
        self.assertEqual(
            CSV_HEADER, ["file", "verdict", "steps", "decisions", "conflicts", "proof_checked", "wall_millis"]
        )

    def test_compare_manifest(self):
        rows = [
            BenchRow("a.smt2", "sat"),
            BenchRow("b.smt2", "unsat"),
            BenchRow("c.smt2", "unknown"),
            BenchRow("d.smt2", "error"),
        ]
        manifest = {"files": {"a.smt2": "unsat", "b.smt2": "unsat", "c.smt2": "sat", "d.smt2": "sat"}}
        self.assertEqual(compare_manifest(rows, manifest), {"a.smt2": ("unsat", "sat")})

    def test_unreadable_scripts_become_error_rows(self):
        with tempfile.TemporaryDirectory() as out:
            Path(out, "broken.smt2").write_text("(assert (and p", encoding="utf-8")
            Path(out, "fine.smt2").write_text("(declare-const p Bool)(assert p)(check-sat)", encoding="utf-8")
            with self.assertLogs("bench_tools.utils", "WARNING"):
                rows = run_bench(out, Config(), workers=2)
        self.assertEqual([(r.file, r.verdict) for r in rows], [("broken.smt2", "error"), ("fine.smt2", "sat")])


class CommandTests(TestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.dir = Path(tmp.name)

    def run_command(self, *args, **options):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err, **options)
        return out.getvalue(), err.getvalue()

    def test_gen_is_reproducible(self):
        for run in ("first", "second"):
            self.run_command("gen", seed=7, family="bool", count=5, out=str(self.dir / run))
        first = sorted((self.dir / "first").iterdir())
        self.assertEqual(len([p for p in first if p.suffix == ".smt2"]), 5)
        for path in first:
            self.assertEqual(path.read_bytes(), (self.dir / "second" / path.name).read_bytes())
        with open(self.dir / "first" / MANIFEST) as f:
            manifest = yaml.safe_load(f)
        self.assertTrue(set(manifest["files"].values()) <= {"sat", "unsat"})

    def test_gen_needs_a_known_family(self):
        with self.assertRaises(CommandError):
            self.run_command("gen", seed=1, family="bv", count=1, out=str(self.dir))

    def test_bench_csv_record_and_manifest(self):
        self.run_command("gen", seed=11, family="lra", count=6, out=str(self.dir))
        csv_path = self.dir / "rows.csv"
        out, _ = self.run_command("bench", str(self.dir), csv=str(csv_path), record="nightly", workers=2)
        self.assertIn("Benchmark results", out)
        self.assertIn("6 files agree with the manifest", out)
        lines = csv_path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], ",".join(CSV_HEADER))
        self.assertEqual(len(lines), 7)
        records = BenchRecord.objects.filter(run_label="nightly")
        self.assertEqual(records.count(), 6)
        for record in records:
            if record.verdict == "unsat":
                self.assertTrue(record.proof_checked)

    def test_bench_reports_disagreements(self):
        Path(self.dir, "pair.smt2").write_text(
            "(declare-const p Bool)(assert p)(assert (not p))(check-sat)", encoding="utf-8"
        )
        with open(self.dir / MANIFEST, "w") as f:
            yaml.safe_dump({"files": {"pair.smt2": "sat"}}, f)
        with self.assertRaises(CommandError) as caught:
            self.run_command("bench", str(self.dir))
        self.assertEqual(caught.exception.returncode, 2)

    def test_bench_needs_a_directory(self):
        with self.assertRaises(CommandError) as caught:
            self.run_command("bench", str(self.dir / "missing"))
        self.assertEqual(caught.exception.returncode, 1)


class BenchRecordApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()
        self.client.force_authenticate(user=User.objects.create_user(username="bench"))
        BenchRecord.objects.create(run_label="a", file="x.smt2", verdict="sat", steps=4)
        BenchRecord.objects.create(run_label="b", file="y.smt2", verdict="unsat", proof_checked=True)

    def test_list_and_filter(self):
        url = reverse("bench_tools:benchrecord-list")
        response = self.client.get(url)
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["count"], 2)
        response = self.client.get(url, {"run": "b"})
        self.assertEqual([r["file"] for r in response.data["results"]], ["y.smt2"])
        self.assertTrue(response.data["results"][0]["proof_checked"])

    def test_read_only(self):
        response = self.client.post(reverse("bench_tools:benchrecord-list"), {"file": "z.smt2"})
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)
