from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import UnsupportedCore
from core.terms import BOOL, FALSE, RAT, TRUE, AbsValue, Assignment, Basis, Problem, RatValue
from core.theories import (
    BlackBoxModule,
    BoolModule,
    EufModule,
    FmOracle,
    LraModule,
    OracleSat,
    OracleUnsat,
    build_module,
    build_modules,
)
from core.theories.arith import LE, LT, LinearConstraint, LinearForm, eliminate, find_model
from core.theories.congruence import CongruenceClosure
from core.trail import Provenance, Trail


def view_of(module, problem):
    """A view over a trail holding exactly the problem's inputs."""
    trail = Trail()
    for a in problem.inputs:
        trail.append(a, Provenance.input())
    return module.view(trail, Basis(problem))


class BoolModuleTests(SimpleTestCase):
    def setUp(self):
        self.problem = Problem()
        for name in ("p", "q", "r"):
            self.problem.declare_fun(name, (), BOOL)
        self.p, self.q, self.r = (self.problem.constant(n) for n in ("p", "q", "r"))
        self.store = self.problem.store
        self.module = BoolModule(self.store)

    def test_unit_propagation(self):
        clause = self.store.or_(self.p, self.q)
        self.problem.assert_formula(clause)
        self.problem.add_input(Assignment(self.p, FALSE))
        inference = self.module.infer(view_of(self.module, self.problem))
        self.assertEqual(inference.rule, "propagate")
        self.assertEqual(inference.conclusion, Assignment(self.q, TRUE))
        self.assertEqual(inference.premises, {Assignment(clause, TRUE), Assignment(self.p, FALSE)})

    def test_false_disjunction_spreads(self):
        clause = self.store.or_(self.p, self.q)
        self.problem.add_input(Assignment(clause, FALSE))
        inference = self.module.infer(view_of(self.module, self.problem))
        self.assertEqual(inference.conclusion, Assignment(self.p, FALSE))

    def test_clash_wins(self):
        self.problem.assert_formula(self.store.not_(self.p))
        self.problem.add_input(Assignment(self.p, TRUE))
        view = view_of(self.module, self.problem)
        inference = self.module.infer(view)
        self.assertEqual(inference.conclusion, Assignment(self.p, FALSE))
        self.assertTrue(view.trail.holds(inference.conclusion.flip()))

    def test_decides_first_open_atom_true(self):
        self.problem.assert_formula(self.store.or_(self.q, self.r))
        decision = self.module.decide(view_of(self.module, self.problem))
        self.assertEqual(decision, Assignment(self.q, TRUE))

    def test_derived_arithmetic_atoms_are_left_to_evaluation(self):
        self.problem.declare_fun("x", (), RAT)
        x = self.problem.constant("x")
        stated = self.store.le(self.store.numeral(1), x)
        self.problem.assert_formula(stated)
        view = view_of(self.module, self.problem)
        derived = self.store.lt(x, self.store.numeral(3))
        self.assertIn(derived, view.basis)
        self.assertTrue(view.basis.is_derived(derived))
        self.assertFalse(view.basis.is_derived(stated))
        self.assertIsNone(self.module.decide(view))

    def test_check_inference_by_truth_table(self):
        rule = Assignment(self.store.implies(self.p, self.q), TRUE)
        self.assertTrue(self.module.check_inference([rule, Assignment(self.p, TRUE)], Assignment(self.q, TRUE)))
        self.assertFalse(self.module.check_inference([rule], Assignment(self.q, TRUE)))
        self.assertFalse(self.module.check_inference([rule, Assignment(self.p, TRUE)], Assignment(self.q, FALSE)))

    def test_inconsistent_premises_entail_anything(self):
        self.assertTrue(
            self.module.check_inference([Assignment(self.p, TRUE), Assignment(self.p, FALSE)], Assignment(self.q, TRUE))
        )


class EufModuleTests(SimpleTestCase):
    def setUp(self):
        self.problem = Problem()
        self.u = self.problem.declare_sort("U")
        for name in ("a", "b", "c"):
            self.problem.declare_fun(name, (), self.u)
        self.problem.declare_fun("f", (self.u,), self.u)
        self.a, self.b, self.c = (self.problem.constant(n) for n in ("a", "b", "c"))
        self.store = self.problem.store
        self.fa = self.problem.apply("f", self.a)
        self.fb = self.problem.apply("f", self.b)
        self.module = EufModule(self.store)

    def test_congruence_checks(self):
        ab = Assignment(self.store.eq(self.a, self.b), TRUE)
        claim = Assignment(self.store.eq(self.fa, self.fb), TRUE)
        self.assertTrue(self.module.check_inference([ab], claim))
        self.assertFalse(self.module.check_inference([], claim))

    def test_disequality_checks(self):
        ab = Assignment(self.store.eq(self.a, self.b), TRUE)
        bc = Assignment(self.store.eq(self.b, self.c), FALSE)
        self.assertTrue(self.module.check_inference([ab, bc], Assignment(self.store.eq(self.a, self.c), FALSE)))
        self.assertFalse(self.module.check_inference([bc], Assignment(self.store.eq(self.a, self.c), FALSE)))

    def test_distinct_values_separate(self):
        va = Assignment(self.a, AbsValue(self.u, 0))
        vb = Assignment(self.b, AbsValue(self.u, 1))
        self.assertTrue(self.module.check_inference([va, vb], Assignment(self.store.eq(self.a, self.b), FALSE)))

    def test_congruence_conflict(self):
        ab = self.store.eq(self.a, self.b)
        fab = self.store.eq(self.fa, self.fb)
        self.problem.assert_formula(ab)
        self.problem.add_input(Assignment(fab, FALSE))
        view = view_of(self.module, self.problem)
        inference = self.module.infer(view)
        self.assertEqual(inference.rule, "closure")
        self.assertEqual(inference.conclusion, Assignment(fab, TRUE))
        self.assertEqual(inference.premises, {Assignment(ab, TRUE)})
        self.assertTrue(self.module.check_inference(inference.premises, inference.conclusion))

    def test_decides_abstract_values(self):
        self.problem.assert_formula(self.store.eq(self.a, self.b))
        decision = self.module.decide(view_of(self.module, self.problem))
        self.assertEqual(decision, Assignment(self.a, AbsValue(self.u, 0)))


class CongruenceClosureTests(SimpleTestCase):
    def setUp(self):
        problem = Problem()
        u = problem.declare_sort("U")
        for name in ("a", "b", "c"):
            problem.declare_fun(name, (), u)
        problem.declare_fun("f", (u,), u)
        self.problem = problem
        self.a, self.b, self.c = (problem.constant(n) for n in ("a", "b", "c"))
        self.fa, self.fc = problem.apply("f", self.a), problem.apply("f", self.c)

    def test_explanations_collect_reasons(self):
        store = self.problem.store
        first = Assignment(store.eq(self.a, self.b), TRUE)
        second = Assignment(store.eq(self.b, self.c), TRUE)
        cc = CongruenceClosure()
        cc.add(self.fa)
        cc.add(self.fc)
        self.assertFalse(cc.same(self.fa, self.fc))
        cc.merge(self.a, self.b, frozenset({first}))
        cc.merge(self.b, self.c, frozenset({second}))
        self.assertTrue(cc.same(self.fa, self.fc))
        self.assertEqual(cc.explain(self.a, self.c), {first, second})
        self.assertEqual(cc.explain(self.fa, self.fc), {first, second})
        self.assertEqual(cc.explain(self.a, self.b), {first})

    def test_explain_needs_congruent_terms(self):
        cc = CongruenceClosure()
        cc.add(self.a)
        cc.add(self.b)
        with self.assertRaises(ValueError):
            cc.explain(self.a, self.b)


class LraModuleTests(SimpleTestCase):
    def setUp(self):
        self.problem = Problem()
        self.problem.declare_fun("x", (), RAT)
        self.x = self.problem.constant("x")
        self.store = self.problem.store
        self.module = LraModule(self.store)

    def test_empty_interval_gives_resolvent(self):
        lower = self.store.le(self.store.numeral(1), self.x)
        upper = self.store.le(self.x, self.store.numeral(0))
        self.problem.assert_formula(lower)
        self.problem.assert_formula(upper)
        inference = self.module.infer(view_of(self.module, self.problem))
        self.assertEqual(inference.rule, "fm-resolve")
        self.assertEqual(inference.premises, {Assignment(lower, TRUE), Assignment(upper, TRUE)})
        self.assertEqual(
            inference.conclusion,
            Assignment(self.store.le(self.store.numeral(1), self.store.numeral(0)), TRUE),
        )
        self.assertTrue(self.module.check_inference(inference.premises, inference.conclusion))

    def test_decides_inside_bounds(self):
        self.problem.assert_formula(self.store.lt(self.store.numeral(2), self.x))
        decision = self.module.decide(view_of(self.module, self.problem))
        self.assertEqual(decision.term, self.x)
        self.assertGreater(decision.value.value, 2)

    def test_check_inference(self):
        lower = Assignment(self.store.le(self.store.numeral(1), self.x), TRUE)
        self.assertTrue(self.module.check_inference([lower], Assignment(self.store.le(self.x, self.store.numeral(0)), FALSE)))
        self.assertFalse(self.module.check_inference([lower], Assignment(self.store.le(self.x, self.store.numeral(2)), TRUE)))

    @given(st.integers(-5, 5), st.integers(-5, 5), st.booleans(), st.booleans())
    @settings(deadline=None)
    def test_resolvent_exactly_when_bounds_cross(self, lo, hi, lo_strict, hi_strict):
        problem = Problem()
        problem.declare_fun("x", (), RAT)
        store = problem.store
        x = problem.constant("x")
        lower = store.lt(store.numeral(lo), x) if lo_strict else store.le(store.numeral(lo), x)
        upper = store.lt(x, store.numeral(hi)) if hi_strict else store.le(x, store.numeral(hi))
        problem.assert_formula(lower)
        problem.assert_formula(upper)
        module = LraModule(store)
        inference = module.infer(view_of(module, problem))
        crossed = lo > hi or (lo == hi and (lo_strict or hi_strict))
        if crossed:
            self.assertEqual(inference.rule, "fm-resolve")
            self.assertTrue(module.check_inference(inference.premises, inference.conclusion))
        else:
            self.assertIsNone(inference)


coefficients = st.integers(-3, 3)
constraint_sets = st.lists(
    st.tuples(coefficients, coefficients, st.integers(-6, 6), st.booleans()), min_size=1, max_size=6
)


class FourierMotzkinTests(SimpleTestCase):
    def setUp(self):
        problem = Problem()
        problem.declare_fun("x", (), RAT)
        problem.declare_fun("y", (), RAT)
        self.x, self.y = problem.constant("x"), problem.constant("y")

    def constraints(self, rows):
        return [
            LinearConstraint(LinearForm({self.x: a, self.y: b}, c), LT if strict else LE)
            for a, b, c, strict in rows
        ]

    def test_unsatisfiable_pair(self):
        # x <= 0 and 1 - x <= 0
        rows = [(1, 0, 0, False), (-1, 0, 1, False)]
        self.assertIsNone(find_model(self.constraints(rows)))

    def test_strict_point_is_empty(self):
        # x < 1 and 1 - x <= 0
        rows = [(1, 0, -1, True), (-1, 0, 1, False)]
        self.assertIsNone(find_model(self.constraints(rows)))

    @given(constraint_sets)
    @settings(deadline=None)
    def test_models_satisfy_every_constraint(self, rows):
        constraints = self.constraints(rows)
        model = find_model(constraints)
        if model is not None:
            for c in constraints:
                value = c.form.value({self.x: model.get(self.x, Fraction(0)), self.y: model.get(self.y, Fraction(0))})
                self.assertTrue(c.holds(value), f"{c} fails under {model}")

    @given(constraint_sets)
    @settings(deadline=None)
    def test_projection_is_implied(self, rows):
        constraints = self.constraints(rows)
        model = find_model(constraints)
        if model is None:
            return
        values = {self.x: model.get(self.x, Fraction(0)), self.y: model.get(self.y, Fraction(0))}
        for c in eliminate(constraints, self.x):
            self.assertTrue(c.holds(c.form.value(values)))


class BlackBoxTests(SimpleTestCase):
    def setUp(self):
        self.problem = Problem()
        self.problem.declare_fun("x", (), RAT)
        self.x = self.problem.constant("x")
        self.store = self.problem.store
        self.module = BlackBoxModule(self.store, FmOracle())

    def test_oracle_verdicts(self):
        lower = Assignment(self.store.le(self.store.numeral(1), self.x), TRUE)
        upper = Assignment(self.store.le(self.x, self.store.numeral(0)), TRUE)
        oracle = FmOracle()
        self.assertIsInstance(oracle.query([lower]), OracleSat)
        self.assertEqual(oracle.query([lower, upper]), OracleUnsat(frozenset({0, 1})))

    def test_core_becomes_a_flip(self):
        lower = self.store.le(self.store.numeral(1), self.x)
        upper = self.store.le(self.x, self.store.numeral(0))
        self.problem.assert_formula(lower)
        self.problem.assert_formula(upper)
        inference = self.module.infer(view_of(self.module, self.problem))
        self.assertEqual(inference.module, "BB-FM")
        self.assertEqual(inference.premises, {Assignment(lower, TRUE)})
        self.assertEqual(inference.conclusion, Assignment(upper, FALSE))
        self.assertTrue(self.module.check_inference(inference.premises, inference.conclusion))

    def test_first_order_core_is_refused(self):
        self.problem.add_input(Assignment(self.x, RatValue(1)))
        self.problem.add_input(Assignment(self.store.add(self.x, self.store.numeral(1)), RatValue(0)))
        view = view_of(self.module, self.problem)
        with self.assertRaises(UnsupportedCore):
            self.module.explain_core(view, [0, 1])
        with self.assertLogs("core.theories.blackbox", "WARNING"):
            self.assertIsNone(self.module.infer(view))


class RegistryTests(SimpleTestCase):
    def test_poll_order(self):
        modules = build_modules(["BB-FM", "LRA", "Bool", "EUF"], Problem().store)
        self.assertEqual([m.module_id for m in modules], ["Bool", "EUF", "LRA", "BB-FM"])

    def test_unknown_module(self):
        with self.assertRaises(KeyError):
            build_module("NRA", Problem().store)
