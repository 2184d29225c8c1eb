import random
import re

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import LcfRejection, MalformedNode, ProofFormatError, UncheckedProof
from core.kernel import solve
from core.proofs import (
    LcfKernel,
    ProofFactory,
    check,
    export_resolution,
    read_proof_terms,
    read_resolution,
    replay,
    write_proof_terms,
    write_resolution,
)
from core.proofs.lcf import Thm
from core.proofs.mutations import MUTATIONS, candidates, mutate, rebuild
from core.proofs.nodes import Entails, Refutes, conclude_clash
from core.terms import FALSE, TRUE, Assignment

from . import problems
from .test_kernel import UNSAT_PROBLEMS


def refuted(build):
    problem = build()
    return problem, solve(problem).refutation.root


def term_reader(problem):
    store = problem.store
    by_text = {str(store[i]): store[i] for i in range(len(store))}
    return by_text.__getitem__


class CheckerTests(SimpleTestCase):
    def setUp(self):
        self.problem, (self.p, self.q) = problems.propositional("p", "q")
        self.problem.assert_formula(self.p)
        self.factory = ProofFactory(check_theory=False)

    def test_nodes_are_shared(self):
        a = Assignment(self.p, TRUE)
        self.assertIs(self.factory.input(0, a), self.factory.input(0, a))

    def test_root_must_refute(self):
        node = self.factory.input(0, Assignment(self.p, TRUE))
        report = check(node, self.problem)
        self.assertFalse(report.accepted)
        self.assertIn("unsatisfiability", report.message)

    def test_input_must_match_the_problem(self):
        wrong = self.factory.input(0, Assignment(self.q, TRUE))
        assumed = self.factory.theory("Bool", "assumption", [Assignment(self.q, FALSE)], Assignment(self.q, FALSE))
        root = self.factory.resolve(Assignment(self.q, TRUE), self.factory.clash(assumed, Assignment(self.q, TRUE)), wrong)
        report = check(root, self.problem)
        self.assertFalse(report.accepted)
        self.assertEqual(report.node, wrong.uid)

    def test_theory_steps_are_revalidated(self):
        bogus = self.factory.theory("Bool", "guess", [], Assignment(self.q, TRUE))
        root = self.factory.clash(bogus, Assignment(self.q, FALSE))
        report = check(root, self.problem)
        self.assertFalse(report.accepted)
        self.assertIn("Bool rejects", report.message)

    def test_refutation_must_stay_within_inputs(self):
        assumed = self.factory.theory("Bool", "assumption", [Assignment(self.q, FALSE)], Assignment(self.q, FALSE))
        root = self.factory.clash(assumed, Assignment(self.q, TRUE))
        report = check(root, self.problem)
        self.assertFalse(report.accepted)
        self.assertIn("not within the inputs", report.message)

    def test_validating_factory_refuses_unsound_steps(self):
        strict = ProofFactory(check_theory=True)
        with self.assertRaises(MalformedNode):
            strict.theory("Bool", "guess", [], Assignment(self.q, TRUE))

    def test_side_conditions(self):
        with self.assertRaises(MalformedNode):
            conclude_clash(Entails(frozenset(), Assignment(self.p, TRUE)), Assignment(self.p, TRUE))
        with self.assertRaises(MalformedNode):
            conclude_clash(Refutes(frozenset()), Assignment(self.p, TRUE))

    def test_report_text(self):
        problem, root = refuted(problems.chain_unsat)
        self.assertEqual(str(check(root, problem)), "accepted")


class MutationTests(SimpleTestCase):
    def test_every_single_mutation_is_rejected(self):
        for name, build in UNSAT_PROBLEMS.items():
            problem, root = refuted(build)
            for kind in MUTATIONS:
                for node, fields in candidates(root, kind):
                    with self.subTest(problem=name, kind=kind, node=node.uid):
                        mutated = rebuild(root, node, fields)
                        self.assertFalse(check(mutated, problem).accepted)

    def test_some_mutation_applies(self):
        problem, root = refuted(problems.all_sign_clauses)
        self.assertTrue(any(candidates(root, kind) for kind in MUTATIONS))

    @given(st.integers(0, 10_000))
    @settings(deadline=None, max_examples=40)
    def test_random_mutations_are_rejected(self, seed):
        problem, root = refuted(problems.interval_split_unsat)
        outcome = mutate(root, random.Random(seed))
        self.assertIsNotNone(outcome)
        kind, mutated = outcome
        self.assertIn(kind, MUTATIONS)
        self.assertFalse(check(mutated, problem).accepted)

    def test_unmutated_rebuild_is_accepted(self):
        problem, root = refuted(problems.congruence_unsat)
        copy = rebuild(root, None, [])
        self.assertIsNot(copy, root)
        self.assertTrue(check(copy, problem).accepted)


class ProofTermFormatTests(SimpleTestCase):
    def test_round_trip(self):
        for name, build in UNSAT_PROBLEMS.items():
            with self.subTest(name):
                problem, root = refuted(build)
                text = write_proof_terms(root)
                self.assertTrue(text.startswith("(cdsat-pt"))
                document = read_proof_terms(text, term_reader(problem), problem)
                self.assertTrue(check(document.root, problem).accepted)
                self.assertEqual(document.declared, root.conclusion.elems)
                self.assertEqual(write_proof_terms(document.root, document.declared), text)

    def test_grammar_errors(self):
        problem, _ = refuted(problems.chain_unsat)
        reader = term_reader(problem)
        for text in (
            "(proof)",
            "(cdsat-pt (term 0 p))",
            "(cdsat-pt (node 0 (clash 3 (0 <- true))))",
            "(cdsat-pt (node 0 (input 0 (7 <- true))))",
            "(cdsat-pt (mystery))",
            "(cdsat-pt",
        ):
            with self.subTest(text):
                with self.assertRaises(ProofFormatError):
                    read_proof_terms(text, reader, problem)

    def test_tampered_text_is_rejected_by_the_checker(self):
        problem, root = refuted(problems.chain_unsat)
        text = re.sub(
            r"\(concl \((\d+) <- (true|false)\)\)",
            lambda m: f"(concl ({m[1]} <- {'false' if m[2] == 'true' else 'true'}))",
            write_proof_terms(root),
            count=1,
        )
        document = read_proof_terms(text, term_reader(problem), problem)
        self.assertFalse(check(document.root, problem).accepted)


class ResolutionTests(SimpleTestCase):
    def test_export_replays(self):
        for name, build in UNSAT_PROBLEMS.items():
            with self.subTest(name):
                problem, root = refuted(build)
                proof = export_resolution(root, problem)
                self.assertEqual(proof.final.lits, ())
                self.assertTrue(replay(proof, problem).accepted)

    def test_text_round_trip(self):
        for name, build in UNSAT_PROBLEMS.items():
            with self.subTest(name):
                problem, root = refuted(build)
                text = write_resolution(export_resolution(root, problem))
                proof = read_resolution(text, term_reader(problem), problem)
                self.assertTrue(replay(proof, problem).accepted)
                self.assertEqual(write_resolution(proof), text)

    def test_first_order_inputs_become_hypotheses(self):
        problem, root = refuted(problems.rational_duplicate)
        proof = export_resolution(root, problem)
        self.assertEqual(set(proof.hyps), set(problem.inputs))

    def test_truncated_proof_is_rejected(self):
        problem, root = refuted(problems.all_sign_clauses)
        proof = export_resolution(root, problem)
        proof.clauses.pop()
        self.assertFalse(replay(proof, problem).accepted)

    def test_rejected_proof_is_not_exported(self):
        problem, root = refuted(problems.chain_unsat)
        _, mutated = mutate(root, random.Random(0))
        with self.assertRaises(UncheckedProof):
            export_resolution(mutated, problem)

    def test_bad_lines(self):
        problem, _ = refuted(problems.chain_unsat)
        with self.assertRaises(ProofFormatError):
            read_resolution("x 1 2\n", term_reader(problem), problem)
        with self.assertRaises(ProofFormatError):
            read_resolution("u 0 +99\n", term_reader(problem), problem)


class LcfKernelTests(SimpleTestCase):
    def setUp(self):
        self.problem, (self.p, self.q) = problems.propositional("p", "q")
        self.problem.assert_formula(self.p)
        self.problem.add_input(Assignment(self.p, FALSE))
        self.kernel = LcfKernel(self.problem.inputs)

    def test_refutation_from_primitives(self):
        assumed = self.kernel.thy("Bool", "assumption", [Assignment(self.p, FALSE)], Assignment(self.p, FALSE))
        thm = self.kernel.clash(assumed, Assignment(self.p, TRUE))
        self.assertEqual(thm.conclusion, Refutes(frozenset(self.problem.inputs)))

    def test_theorems_cannot_be_forged(self):
        with self.assertRaises(LcfRejection):
            Thm(object(), Refutes(frozenset()), self.kernel.counter)

    def test_rules_are_enforced(self):
        with self.assertRaises(LcfRejection):
            self.kernel.axiom(5)
        with self.assertRaises(LcfRejection):
            self.kernel.thy("Bool", "guess", [], Assignment(self.q, TRUE))
        axiom = self.kernel.axiom(0)
        with self.assertRaises(LcfRejection):
            self.kernel.clash(axiom, Assignment(self.p, TRUE))

    def test_live_count(self):
        before = self.kernel.live
        axiom = self.kernel.axiom(0)
        self.assertEqual(self.kernel.live, before + 1)
        del axiom
        self.assertEqual(self.kernel.live, before)
        self.assertGreaterEqual(self.kernel.peak, before + 1)
