from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import IllSorted, NonLinearTerm, NotBoolean
from core.terms import (
    BOOL,
    FALSE,
    RAT,
    TRUE,
    AbsValue,
    Assignment,
    Basis,
    BoolValue,
    Problem,
    RatValue,
    evaluate,
    format_rational,
    sorted_assignments,
    subterms,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def rat_problem(*names):
    problem = Problem()
    for name in names:
        problem.declare_fun(name, (), RAT)
    return problem


class TermStoreTests(SimpleTestCase):
    def setUp(self):
        self.problem = rat_problem("x", "y")
        self.store = self.problem.store
        self.x = self.problem.constant("x")
        self.y = self.problem.constant("y")

    def test_structurally_equal_terms_are_identical(self):
        a = self.store.le(self.store.add(self.x, self.y), self.store.numeral(1))
        b = self.store.le(self.store.add(self.x, self.y), self.store.numeral(Fraction(1)))
        self.assertIs(a, b)
        self.assertEqual(a.id, b.id)

    def test_argument_order_matters(self):
        self.assertIsNot(self.store.add(self.x, self.y), self.store.add(self.y, self.x))

    def test_ill_sorted_application(self):
        p = self.store.true()
        with self.assertRaises(IllSorted):
            self.store.le(p, self.x)
        with self.assertRaises(IllSorted):
            self.store.eq(self.x, p)

    def test_product_needs_a_ground_factor(self):
        with self.assertRaises(NonLinearTerm):
            self.store.mul(self.x, self.y)
        scaled = self.store.mul(self.store.numeral(3), self.x)
        self.assertEqual(scaled.sort, RAT)

    def test_non_linear_is_ill_sorted(self):
        self.assertTrue(issubclass(NonLinearTerm, IllSorted))

    def test_variadic_needs_arguments(self):
        with self.assertRaises(IllSorted):
            self.store.and_()

    def test_rendering(self):
        term = self.store.le(self.x, self.store.numeral(Fraction(-1, 2)))
        self.assertEqual(str(term), "(<= x (- (/ 1 2)))")

    def test_subterms_pre_order(self):
        term = self.store.add(self.x, self.y)
        self.assertEqual([t for t in subterms(term)], [term, self.x, self.y])


class FormatRationalTests(SimpleTestCase):
    def test_forms(self):
        self.assertEqual(format_rational(Fraction(3)), "3")
        self.assertEqual(format_rational(Fraction(-3)), "(- 3)")
        self.assertEqual(format_rational(Fraction(1, 2)), "(/ 1 2)")
        self.assertEqual(format_rational(Fraction(-7, 4)), "(- (/ 7 4))")
        self.assertEqual(format_rational(Fraction(0)), "0")


class AssignmentTests(SimpleTestCase):
    def setUp(self):
        self.problem = Problem()
        self.problem.declare_fun("p", (), BOOL)
        self.problem.declare_fun("x", (), RAT)
        self.p = self.problem.constant("p")
        self.x = self.problem.constant("x")

    def test_value_sort_must_match(self):
        with self.assertRaises(IllSorted):
            Assignment(self.p, RatValue(1))
        with self.assertRaises(IllSorted):
            Assignment(self.x, TRUE)

    def test_flip(self):
        a = Assignment(self.p, TRUE)
        self.assertEqual(a.flip(), Assignment(self.p, FALSE))
        self.assertEqual(a.flip().flip(), a)

    def test_first_order_flip_is_refused(self):
        with self.assertRaises(NotBoolean):
            Assignment(self.x, RatValue(2)).flip()

    def test_sorted_by_term_then_value(self):
        b = Assignment(self.x, RatValue(1))
        a = Assignment(self.p, FALSE)
        self.assertEqual(sorted_assignments([b, a]), [a, b])

    @given(st.booleans())
    def test_flip_is_an_involution(self, bit):
        a = Assignment(self.p, BoolValue(bit))
        self.assertEqual(a.flip().flip(), a)
        self.assertNotEqual(a.flip(), a)


class EvaluateTests(SimpleTestCase):
    def setUp(self):
        self.problem = rat_problem("x", "y")
        self.problem.declare_fun("p", (), BOOL)
        self.store = self.problem.store
        self.x = self.problem.constant("x")
        self.y = self.problem.constant("y")
        self.p = self.problem.constant("p")

    def test_linear_atom(self):
        atom = self.store.le(self.store.add(self.x, self.store.numeral(1)), self.y)
        valuation = {self.x: RatValue(1), self.y: RatValue(2)}
        self.assertEqual(evaluate(atom, valuation), TRUE)
        valuation[self.y] = RatValue(Fraction(3, 2))
        self.assertEqual(evaluate(atom, valuation), FALSE)

    def test_partial_valuation(self):
        atom = self.store.lt(self.x, self.y)
        self.assertIsNone(evaluate(atom, {self.x: RatValue(0)}))

    def test_connectives_short_circuit(self):
        atom = self.store.lt(self.x, self.y)
        disjunction = self.store.or_(atom, self.p)
        self.assertEqual(evaluate(disjunction, {self.p: TRUE}), TRUE)
        self.assertIsNone(evaluate(disjunction, {self.p: FALSE}))
        conjunction = self.store.and_(atom, self.p)
        self.assertEqual(evaluate(conjunction, {self.p: FALSE}), FALSE)
        self.assertEqual(evaluate(self.store.implies(self.p, atom), {self.p: FALSE}), TRUE)

    def test_abstract_values_compare_by_identity(self):
        problem = Problem()
        u = problem.declare_sort("U")
        problem.declare_fun("a", (), u)
        problem.declare_fun("b", (), u)
        a, b = problem.constant("a"), problem.constant("b")
        eq = problem.store.eq(a, b)
        self.assertEqual(evaluate(eq, {a: AbsValue(u, 0), b: AbsValue(u, 0)}), TRUE)
        self.assertEqual(evaluate(eq, {a: AbsValue(u, 0), b: AbsValue(u, 1)}), FALSE)

    @given(rationals, rationals)
    @settings(deadline=None)
    def test_comparisons_are_exact(self, a, b):
        valuation = {self.x: RatValue(a), self.y: RatValue(b)}
        self.assertEqual(evaluate(self.store.le(self.x, self.y), valuation), BoolValue(a <= b))
        self.assertEqual(evaluate(self.store.lt(self.x, self.y), valuation), BoolValue(a < b))
        self.assertEqual(evaluate(self.store.eq(self.x, self.y), valuation), BoolValue(a == b))

    @given(rationals, rationals, st.booleans())
    @settings(deadline=None)
    def test_defined_values_survive_extension(self, a, b, bit):
        formula = self.store.or_(self.store.lt(self.x, self.y), self.p)
        partial = {self.x: RatValue(a), self.y: RatValue(b)}
        before = evaluate(formula, partial)
        extended = {**partial, self.p: BoolValue(bit)}
        after = evaluate(formula, extended)
        self.assertIsNotNone(after)
        if before is not None:
            self.assertEqual(before, after)


class ProblemTests(SimpleTestCase):
    def test_duplicate_declarations(self):
        problem = Problem()
        problem.declare_sort("U")
        with self.assertRaises(IllSorted):
            problem.declare_sort("U")
        problem.declare_fun("c", (), BOOL)
        with self.assertRaises(IllSorted):
            problem.declare_fun("c", (), BOOL)

    def test_undeclared_sort(self):
        problem = Problem()
        other = Problem().declare_sort("V")
        with self.assertRaises(IllSorted):
            problem.declare_fun("f", (other,), BOOL)

    def test_builtin_sort_names_are_reserved(self):
        with self.assertRaises(IllSorted):
            Problem().declare_sort("Real")

    def test_assert_formula_needs_declared_symbols(self):
        problem = Problem()
        stranger = Problem()
        stranger.declare_fun("q", (), BOOL)
        with self.assertRaises(IllSorted):
            problem.assert_formula(stranger.constant("q"))

    def test_basis_follows_inputs_then_interning(self):
        problem = rat_problem("x", "y")
        store = problem.store
        x, y = problem.constant("x"), problem.constant("y")
        atom = store.le(x, y)
        problem.assert_formula(atom)
        basis = Basis(problem)
        self.assertEqual(list(basis), [atom, x, y])
        late = store.lt(y, x)
        self.assertIn(late, basis)
        self.assertEqual(list(basis)[-1], late)
