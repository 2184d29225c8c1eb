import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.contrib.auth.models import User
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from django.urls import reverse
from pysmt.smtlib.parser import SmtLibParser
from rest_framework import status
from rest_framework.test import APIClient

from core.kernel import Config
from core.terms import FALSE, TRUE, AbsValue, RatValue

from .driver import certify, model_text, proof_text, solve_script
from .exceptions import ScriptSyntaxError, SortError, UndeclaredSymbol, UnsupportedCommand
from .models import SolveHistory
from .parser import ScriptParser, parse
from .printer import print_script, script_shape

PIGEON = """\
(set-logic QF_UF)
(declare-const a Bool)
(declare-const b Bool)
(assert (or a b))
(assert (or (not a) b))
(assert (or a (not b)))
(assert (or (not a) (not b)))
(check-sat)
(get-proof)
"""

ASSIGNED = """\
(set-logic QF_LRA)
(declare-const x Real)
(assign x 3)
(assert (= x 4))
(check-sat)
(get-proof)
"""

INTERVAL = """\
(set-logic QF_LRA)
(declare-const x Real)
(assert (< 0 x))
(assert (< x 1))
(check-sat)
(get-model)
"""

CONGRUENCE = """\
(set-logic QF_UF)
(declare-sort U 0)
(declare-const a U)
(declare-const b U)
(declare-fun f (U) U)
(assert (= a b))
(assert (distinct (f a) (f b)))
(check-sat)
(get-proof)
"""


class ParserTests(SimpleTestCase):
    def test_assert_and_assign_are_distinct_inputs(self):
        script = parse(
            "(declare-const x Real)(declare-const a Bool)(declare-const b Bool)"
            "(assert (or (not a) b))(assign x 3)(assert (= x 3))"
        )
        problem = script.problem
        self.assertEqual([str(a.term) for a in problem.inputs], ["(or (not a) b)", "x", "(= x 3)"])
        self.assertEqual(problem.inputs[0].value, TRUE)
        self.assertEqual(problem.inputs[1].value, RatValue(3))
        self.assertEqual(problem.inputs[2].value, TRUE)

    def test_value_literals(self):
        script = parse(
            "(declare-sort U 0)(declare-const u U)(declare-const y Real)(declare-const p Bool)"
            "(assign u (abs U 2))(assign y (- (/ 1 2)))(assign p false)"
        )
        values = [a.value for a in script.problem.inputs]
        self.assertEqual(values[0], AbsValue(script.problem.sorts["U"], 2))
        self.assertEqual(values[1].value * -2, 1)
        self.assertEqual(values[2], FALSE)

    def test_desugaring(self):
        script = parse(
            "(declare-const x Real)(declare-const y Real)"
            "(assert (> x y))(assert (>= x 1.5))(assert (distinct x y 0))(assert (<= 0 x y))"
        )
        texts = [str(a.term) for a in script.problem.inputs]
        self.assertEqual(texts[0], "(< y x)")
        self.assertEqual(texts[1], "(<= (/ 3 2) x)")
        self.assertEqual(texts[2], "(and (not (= x y)) (not (= x 0)) (not (= y 0)))")
        self.assertEqual(texts[3], "(and (<= 0 x) (<= x y))")

    def test_division_by_numeral(self):
        script = parse("(declare-const x Real)(assert (< (/ x 2) 1))")
        self.assertEqual(str(script.problem.inputs[0].term), "(< (* (/ 1 2) x) 1)")

    def test_errors_carry_positions(self):
        with self.assertRaises(UndeclaredSymbol) as caught:
            parse("(declare-const x Real)\n(assert (< x z))")
        self.assertEqual(caught.exception.line, 2)
        with self.assertRaises(ScriptSyntaxError) as caught:
            parse("(declare-const p Bool)\n(assert (and p")
        self.assertGreaterEqual(caught.exception.line, 1)
        self.assertIn(":", str(caught.exception))

    def test_sort_errors(self):
        for text in (
            "(declare-const p Bool)(assert (< p 1))",
            "(declare-const x Real)(assert x)",
            "(declare-const x Real)(declare-const y Real)(assert (< (* x y) 1))",
            "(declare-const x Real)(assign x true)",
            "(declare-const x Real)(assert (< (/ x 0) 1))",
            "(declare-const x Bogus)",
        ):
            with self.subTest(text):
                with self.assertRaises(SortError):
                    parse(text)

    def test_unsupported_commands(self):
        for text in ("(push 1)", "(set-option :produce-proofs true)", "(declare-sort S 1)"):
            with self.subTest(text):
                with self.assertRaises(UnsupportedCommand):
                    parse(text)

    def test_one_check_sat(self):
        with self.assertRaises(ScriptSyntaxError):
            parse("(check-sat)(check-sat)")

    def test_redeclaration(self):
        with self.assertRaises(ScriptSyntaxError):
            parse("(declare-const x Real)(declare-const x Real)")

    def test_exit_stops_reading(self):
        script = parse("(declare-const p Bool)(exit)(assert q)")
        self.assertEqual(script.commands[-1].name, "exit")
        self.assertEqual(len(script.problem.inputs), 0)

    def test_requests(self):
        script = parse(INTERVAL)
        self.assertTrue(script.wants_model)
        self.assertFalse(script.wants_proof)
        self.assertEqual(script.logic, "QF_LRA")

    def test_assign_is_a_registered_command(self):
        reader = ScriptParser()
        self.assertIsInstance(reader, SmtLibParser)
        self.assertIn("assign", reader.commands)
        self.assertNotIn("push", reader.commands)

    def test_terms_keep_their_written_shape(self):
        script = parse(
            "(declare-const p Bool)(declare-const x Real)"
            "(assert (not (not p)))(assert (and p))(assert (< (- x) (+ x)))"
        )
        texts = [str(a.term) for a in script.problem.inputs]
        self.assertEqual(texts, ["(not (not p))", "(and p)", "(< (- x) (+ x))"])

    def test_parse_term_finds_interned_terms(self):
        reader = ScriptParser()
        script = reader.parse("(declare-sort U 0)(declare-fun f (U) U)(declare-const u U)(assert (= (f u) u))")
        stated = script.problem.inputs[0].term
        self.assertIs(reader.parse_term(str(stated)), stated)
        self.assertEqual(str(reader.parse_term("(<= (- (/ 4 3)) 0)")), "(<= (- (/ 4 3)) 0)")
        with self.assertRaises(UndeclaredSymbol):
            reader.parse_term("(f w)")


class PrinterTests(SimpleTestCase):
    def test_round_trip_is_structurally_identical(self):
        for text in (PIGEON, ASSIGNED, INTERVAL, CONGRUENCE):
            with self.subTest(text.splitlines()[0]):
                script = parse(text)
                again = parse(print_script(script))
                self.assertEqual(script_shape(again), script_shape(script))
                self.assertEqual(print_script(again), print_script(script))


class DriverTests(SimpleTestCase):
    def test_certified_refutations(self):
        for text in (PIGEON, ASSIGNED, CONGRUENCE):
            with self.subTest(text.splitlines()[0]):
                script = parse(text)
                outcome = solve_script(script, Config())
                self.assertEqual(outcome.name, "unsat")
                self.assertTrue(outcome.proof_checked)
                self.assertTrue(certify(outcome.verdict, script.problem))

    def test_model_text(self):
        outcome = solve_script(parse(INTERVAL), Config())
        self.assertEqual(outcome.name, "sat")
        text = model_text(outcome)
        self.assertTrue(text.startswith("(model"))
        self.assertIn("(define x ", text)

    def test_proof_text_formats(self):
        script = parse(ASSIGNED)
        outcome = solve_script(script, Config())
        self.assertTrue(proof_text(outcome, script.problem, "cdsat").startswith("(cdsat-pt"))
        self.assertTrue(proof_text(outcome, script.problem, "res").startswith("t "))
        self.assertIsNone(proof_text(outcome, script.problem, "none"))

    def test_first_order_input_is_a_hypothesis(self):
        script = parse(ASSIGNED)
        outcome = solve_script(script, Config())
        x = script.problem.inputs[0].term
        lines = proof_text(outcome, script.problem, "res").splitlines()
        self.assertIn(f"h {x.id}<-3", lines)
        agreeing = parse(ASSIGNED.replace("(= x 4)", "(= x 3)"))
        self.assertEqual(solve_script(agreeing, Config()).name, "sat")

    def test_lcf_mode(self):
        script = parse(PIGEON)
        outcome = solve_script(script, Config(proof_mode="lcf"))
        self.assertEqual(outcome.name, "unsat")
        self.assertTrue(outcome.proof_checked)
        self.assertGreater(outcome.lcf_peak, 0)
        self.assertIsNone(proof_text(outcome, script.problem, "cdsat"))

    def test_no_proof_mode(self):
        outcome = solve_script(parse(PIGEON), Config(proof_mode="none"))
        self.assertEqual(outcome.name, "unsat")
        self.assertFalse(outcome.proof_checked)


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def script(self, text, name="problem.smt2"):
        path = self.dir / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    def run_command(self, *args, **options):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err, **options)
        return out.getvalue(), err.getvalue()


class SolveCommandTests(CommandTestCase):
    def test_unsat_with_proof_file(self):
        for proof_format in ("cdsat", "res"):
            with self.subTest(proof_format):
                problem = self.script(ASSIGNED)
                proof = str(self.dir / f"proof.{proof_format}")
                out, _ = self.run_command("solve", problem, proof_format=proof_format, proof_out=proof)
                self.assertEqual(out.splitlines()[0], "unsat")
                out, _ = self.run_command("check_proof", problem, proof)
                self.assertEqual(out.strip(), "accepted")

    def test_proof_on_stdout(self):
        out, _ = self.run_command("solve", self.script(CONGRUENCE))
        lines = out.splitlines()
        self.assertEqual(lines[0], "unsat")
        self.assertEqual(lines[1], "(cdsat-pt")

    def test_model_output(self):
        out, _ = self.run_command("solve", self.script(INTERVAL))
        lines = out.splitlines()
        self.assertEqual(lines[0], "sat")
        self.assertEqual(lines[1], "(model")

    def test_step_limit(self):
        out, _ = self.run_command("solve", self.script(PIGEON), max_steps=1)
        self.assertEqual(out.splitlines()[0], "unknown")

    def test_trace_file(self):
        problem = self.script(PIGEON)
        traces = []
        for run in range(2):
            trace = self.dir / f"trace{run}.tsv"
            self.run_command("solve", problem, proof_format="none", trace=str(trace))
            traces.append(trace.read_bytes())
        self.assertEqual(traces[0], traces[1])
        lines = traces[0].decode().splitlines()
        self.assertTrue(all(len(line.split("\t")) == 6 for line in lines))
        self.assertEqual(lines[-1].split("\t")[1], "fail")

    def test_black_box_modules(self):
        bounds = "(declare-const x Real)(assert (<= 1 x))(assert (<= x 0))(check-sat)"
        out, _ = self.run_command("solve", self.script(bounds), modules="Bool,BB-FM")
        self.assertEqual(out.splitlines()[0], "unsat")

    def test_usage_errors(self):
        cases = [
            (("solve", str(self.dir / "missing.smt2")), {}),
            (("solve", self.script("(assert (and p")), {}),
            (("solve", self.script(PIGEON)), {"modules": "Bool,Nope"}),
            (("solve", self.script(PIGEON)), {"mode": "lcf"}),
        ]
        for args, options in cases:
            with self.subTest(args=args, options=options):
                with self.assertRaises(CommandError) as caught:
                    self.run_command(*args, **options)
                self.assertEqual(caught.exception.returncode, 1)

    def test_lcf_without_proof_output(self):
        out, _ = self.run_command("solve", self.script(PIGEON), mode="lcf", proof_format="none")
        self.assertEqual(out.strip(), "unsat")

    def test_unwritable_trace_is_internal(self):
        with self.assertRaises(CommandError) as caught:
            self.run_command("solve", self.script(PIGEON), trace=str(self.dir / "no" / "such" / "trace"))
        self.assertEqual(caught.exception.returncode, 2)

    def test_unexpected_failure_is_internal(self):
        target = "smtlib_tools.management.commands.solve.solve_script"
        with mock.patch(target, side_effect=RuntimeError("boom")):
            with self.assertLogs("smtlib_tools.management.commands.solve", level="ERROR") as logs:
                with self.assertRaises(CommandError) as caught:
                    self.run_command("solve", self.script(PIGEON))
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn("boom", str(caught.exception))
        self.assertIn("Traceback", logs.output[0])


class CheckProofCommandTests(CommandTestCase):
    def test_tampered_proof_is_diagnosed(self):
        problem = self.script(ASSIGNED)
        proof = self.dir / "proof.cdsat"
        self.run_command("solve", problem, proof_out=str(proof))
        text = proof.read_text(encoding="utf-8")
        tampered = text.replace("<- true)))", "<- false)))", 1)
        self.assertNotEqual(tampered, text)
        proof.write_text(tampered, encoding="utf-8")
        out, _ = self.run_command("check_proof", problem, str(proof))
        self.assertTrue(out.startswith("rejected"))

    def test_truncated_resolution_proof(self):
        problem = self.script(PIGEON)
        proof = self.dir / "proof.res"
        self.run_command("solve", problem, proof_format="res", proof_out=str(proof))
        lines = proof.read_text(encoding="utf-8").splitlines()
        proof.write_text("\n".join(lines[:-1]) + "\n", encoding="utf-8")
        out, _ = self.run_command("check_proof", problem, str(proof))
        self.assertTrue(out.startswith("rejected"))

    def test_unreadable_proof(self):
        problem = self.script(PIGEON)
        with self.assertRaises(CommandError) as caught:
            self.run_command("check_proof", problem, self.script("(cdsat-pt (node 0", "bad.cdsat"))
        self.assertEqual(caught.exception.returncode, 1)

    def test_unexpected_failure_is_internal(self):
        problem = self.script(PIGEON)
        proof = self.dir / "proof.res"
        self.run_command("solve", problem, proof_format="res", proof_out=str(proof))
        target = "smtlib_tools.management.commands.check_proof.replay"
        with mock.patch(target, side_effect=RuntimeError("boom")):
            with self.assertLogs("smtlib_tools.management.commands.check_proof", level="ERROR"):
                with self.assertRaises(CommandError) as caught:
                    self.run_command("check_proof", problem, str(proof))
        self.assertEqual(caught.exception.returncode, 2)


class SolveApiTests(TestCase):
    def setUp(self):
        self.client = APIClient()
        self.user = User.objects.create_user(username="solver", password="unused-in-tests")
        self.client.force_authenticate(user=self.user)

    def test_solve_records_history(self):
        response = self.client.post(
            reverse("smtlib_tools:solve"), {"script": PIGEON, "name": "pigeon"}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["verdict"], "unsat")
        self.assertTrue(response.data["proof_checked"])
        self.assertTrue(response.data["proof"].startswith("(cdsat-pt"))
        run = SolveHistory.objects.get()
        self.assertEqual(run.name, "pigeon")
        self.assertEqual(run.verdict, "unsat")
        self.assertEqual(str(run), "pigeon - unsat")

    def test_model_in_response(self):
        response = self.client.post(reverse("smtlib_tools:solve"), {"script": INTERVAL}, format="json")
        self.assertEqual(response.data["verdict"], "sat")
        self.assertIn("(define x ", response.data["model"])
        self.assertIsNone(response.data["proof"])

    def test_parse_error_is_bad_request(self):
        response = self.client.post(
            reverse("smtlib_tools:solve"), {"script": "(declare-const x Real)\n(assert (< x z))"}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data["line"], 2)
        self.assertFalse(SolveHistory.objects.exists())

    def test_invalid_options(self):
        response = self.client.post(
            reverse("smtlib_tools:solve"), {"script": PIGEON, "proof_mode": "drat"}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_history_listing(self):
        self.client.post(reverse("smtlib_tools:solve"), {"script": INTERVAL}, format="json")
        response = self.client.get(reverse("smtlib_tools:solvehistory-list"))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["count"], 1)
        self.assertEqual(response.data["results"][0]["verdict"], "sat")

    def test_authentication_required(self):
        anonymous = APIClient()
        response = anonymous.post(reverse("smtlib_tools:solve"), {"script": PIGEON}, format="json")
        self.assertIn(response.status_code, (status.HTTP_401_UNAUTHORIZED, status.HTTP_403_FORBIDDEN))
