from django.conf import settings
from django.test import SimpleTestCase, override_settings

from core.kernel import Config, ProofMode, Sat, Solver, TraceEvent, Unknown, Unsat, solve
from core.proofs import Thm, check
from core.proofs.nodes import Refutes
from core.terms import evaluate

from . import problems

RULES = {"deduce", "decide", "conflict", "resolve", "backjump", "undo", "fail"}

UNSAT_PROBLEMS = {
    "chain": problems.chain_unsat,
    "all-signs": problems.all_sign_clauses,
    "bool-duplicate": problems.boolean_duplicate,
    "rat-duplicate": problems.rational_duplicate,
    "congruence": problems.congruence_unsat,
    "bounds": problems.bounds_unsat,
    "interval-split": problems.interval_split_unsat,
}

SAT_PROBLEMS = {
    "euf": problems.euf_sat,
    "open-interval": problems.open_interval,
    "two-variables": problems.two_variable_sat,
}


class ConfigTests(SimpleTestCase):
    def test_step_bound_must_be_positive(self):
        with self.assertRaises(ValueError):
            Config(max_steps=0)

    def test_proof_mode_from_text(self):
        self.assertIs(Config(proof_mode="lcf").proof_mode, ProofMode.LCF)
        with self.assertRaises(ValueError):
            Config(proof_mode="drat")

    @override_settings(CDSAT={"MAX_STEPS": 77, "PROOF_MODE": "none"})
    def test_from_settings(self):
        config = Config.from_settings(max_steps=None, debug=True)
        self.assertEqual(config.max_steps, 77)
        self.assertIs(config.proof_mode, ProofMode.NONE)
        self.assertTrue(config.debug)
        self.assertEqual(config.modules, ("Bool", "EUF", "LRA"))

    def test_every_app_has_a_logger(self):
        configured = settings.LOGGING["loggers"]
        for app in ("core", "smtlib_tools", "bench_tools"):
            with self.subTest(app):
                self.assertIn(app, settings.INSTALLED_APPS)
                self.assertIn("console", configured[app]["handlers"])

    def test_trace_line(self):
        event = TraceEvent(3, "decide", "Bool", None, 1)
        self.assertEqual(event.to_line(), "3\tdecide\tBool\t-\t1\t-")


class SolverTests(SimpleTestCase):
    def assert_refutation(self, problem, verdict):
        self.assertIsInstance(verdict, Unsat)
        self.assertTrue(verdict.refutation.conflict <= set(problem.inputs))
        report = check(verdict.refutation.root, problem)
        self.assertTrue(report.accepted, str(report))

    def test_unsat_problems_carry_checked_proofs(self):
        for name, build in UNSAT_PROBLEMS.items():
            with self.subTest(name):
                problem = build()
                self.assert_refutation(problem, solve(problem))

    def test_models_endorse_inputs(self):
        for name, build in SAT_PROBLEMS.items():
            with self.subTest(name):
                problem = build()
                verdict = solve(problem)
                self.assertIsInstance(verdict, Sat)
                for a in problem.inputs:
                    self.assertEqual(evaluate(a.term, verdict.model), a.value)

    def test_open_interval_value(self):
        problem = problems.open_interval()
        verdict = solve(problem)
        (x,) = [t for t in verdict.model if str(t) == "x"]
        self.assertTrue(0 < verdict.model[x].value < 1)

    def test_duplicate_inputs_are_refuted_at_ingestion(self):
        for build in (problems.boolean_duplicate, problems.rational_duplicate):
            with self.subTest(build.__name__):
                problem = build()
                solver = Solver(problem, Config())
                verdict = solver.run()
                self.assert_refutation(problem, verdict)
                self.assertEqual(solver.stats.steps, 1)
                self.assertEqual(verdict.refutation.conflict, frozenset(problem.inputs))

    def test_search_needs_decisions_and_backjumps(self):
        problem = problems.all_sign_clauses()
        solver = Solver(problem, Config())
        self.assert_refutation(problem, solver.run())
        self.assertGreaterEqual(solver.stats.decisions, 1)
        self.assertGreaterEqual(solver.stats.conflicts, 2)
        self.assertGreaterEqual(solver.stats.restrictions, 1)

    def test_step_limit(self):
        verdict = solve(problems.all_sign_clauses(), Config(max_steps=1))
        self.assertIsInstance(verdict, Unknown)
        self.assertEqual(verdict.reason, "step-limit")
        self.assertEqual(verdict.name, "unknown")

    def test_debug_checks_agree(self):
        for name, build in {**UNSAT_PROBLEMS, **SAT_PROBLEMS}.items():
            with self.subTest(name):
                plain = solve(build())
                checked = solve(build(), Config(debug=True))
                self.assertEqual(plain.name, checked.name)

    def test_trace_events(self):
        events = []
        problem = problems.all_sign_clauses()
        solve(problem, Config(trace=events.append))
        self.assertTrue(events)
        self.assertTrue({e.rule for e in events} <= RULES)
        self.assertEqual(events[-1].rule, "fail")
        steps = [e.step for e in events]
        self.assertEqual(steps, sorted(steps))
        for e in events:
            self.assertEqual(len(e.to_line().split("\t")), 6)

    def test_trace_is_deterministic(self):
        runs = []
        for _ in range(2):
            events = []
            solve(problems.interval_split_unsat(), Config(trace=events.append))
            runs.append([e.to_line() for e in events])
        self.assertEqual(runs[0], runs[1])

    def test_without_proofs(self):
        verdict = solve(problems.chain_unsat(), Config(proof_mode="none"))
        self.assertIsInstance(verdict, Unsat)
        self.assertIsNone(verdict.refutation.root)


class LcfModeTests(SimpleTestCase):
    def test_refutation_is_a_theorem(self):
        for name, build in UNSAT_PROBLEMS.items():
            with self.subTest(name):
                problem = build()
                solver = Solver(problem, Config(proof_mode="lcf"))
                verdict = solver.run()
                self.assertIsInstance(verdict, Unsat)
                root = verdict.refutation.root
                self.assertIsInstance(root, Thm)
                self.assertIsInstance(root.conclusion, Refutes)
                self.assertTrue(root.conclusion.elems <= set(problem.inputs))

    def test_live_theorems_stay_bounded(self):
        for name, build in UNSAT_PROBLEMS.items():
            with self.subTest(name):
                solver = Solver(build(), Config(proof_mode="lcf"))
                solver.run()
                self.assertLessEqual(solver.lcf_excess, 0)
                self.assertGreater(solver.proofs.kernel.peak, 0)

    def test_same_verdicts_as_proof_terms(self):
        for name, build in {**UNSAT_PROBLEMS, **SAT_PROBLEMS}.items():
            with self.subTest(name):
                self.assertEqual(
                    solve(build(), Config(proof_mode="lcf")).name,
                    solve(build()).name,
                )


class BlackBoxParityTests(SimpleTestCase):
    def test_arithmetic_through_the_black_box(self):
        for name, build in {
            "bounds": problems.bounds_unsat,
            "interval-split": problems.interval_split_unsat,
            "open-interval": problems.open_interval,
            "two-variables": problems.two_variable_sat,
        }.items():
            with self.subTest(name):
                problem = build()
                native = solve(build())
                boxed = solve(problem, Config(modules=("Bool", "BB-FM")))
                self.assertEqual(native.name, boxed.name)
                if isinstance(boxed, Unsat):
                    self.assertTrue(check(boxed.refutation.root, problem).accepted)
                else:
                    for a in problem.inputs:
                        self.assertEqual(evaluate(a.term, boxed.model), a.value)
