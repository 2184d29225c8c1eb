from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import EmptyConflict, JustificationOutOfRange, NotBoolean, TermAlreadyAssigned
from core.terms import BOOL, RAT, TRUE, Assignment, BoolValue, Problem, RatValue
from core.trail import ConflictState, Provenance, Trail


def atoms(count):
    problem = Problem()
    for i in range(count):
        problem.declare_fun(f"p{i}", (), BOOL)
    return [problem.constant(f"p{i}") for i in range(count)]


# (is_decision, raw justification indices, polarity)
steps = st.lists(
    st.tuples(st.booleans(), st.lists(st.integers(0, 50), max_size=3), st.booleans()),
    max_size=14,
)


def build(plan):
    terms = atoms(len(plan))
    trail = Trail()
    for index, (is_decision, raw, bit) in enumerate(plan):
        a = Assignment(terms[index], BoolValue(bit))
        if is_decision or index == 0:
            trail.append(a, Provenance.decision("Bool"))
        else:
            trail.append(a, Provenance.deduction("Bool", "test", {j % index for j in raw}))
    return trail


def shape(trail):
    return [(item.assignment, item.level, item.provenance.justification) for item in trail]


class TrailTests(SimpleTestCase):
    def setUp(self):
        self.p, self.q, self.r, self.s = atoms(4)

    def test_levels(self):
        trail = Trail()
        trail.append(Assignment(self.p, TRUE), Provenance.input())
        trail.append(Assignment(self.q, TRUE), Provenance.decision("Bool"))
        trail.append(Assignment(self.r, TRUE), Provenance.deduction("Bool", "t", [0]))
        trail.append(Assignment(self.s, TRUE), Provenance.deduction("Bool", "t", [0, 1]))
        self.assertEqual([item.level for item in trail], [0, 1, 0, 1])
        self.assertEqual(trail.max_level(), 1)
        self.assertTrue(trail.check_levels())

    def test_one_assignment_per_term(self):
        trail = Trail()
        trail.append(Assignment(self.p, TRUE), Provenance.input())
        with self.assertRaises(TermAlreadyAssigned):
            trail.append(Assignment(self.p, TRUE).flip(), Provenance.decision("Bool"))

    def test_justification_must_precede(self):
        trail = Trail()
        trail.append(Assignment(self.p, TRUE), Provenance.input())
        with self.assertRaises(JustificationOutOfRange):
            trail.append(Assignment(self.q, TRUE), Provenance.deduction("Bool", "t", [1]))

    def test_deductions_are_boolean(self):
        problem = Problem()
        problem.declare_fun("x", (), RAT)
        trail = Trail()
        with self.assertRaises(NotBoolean):
            trail.append(Assignment(problem.constant("x"), RatValue(1)), Provenance.deduction("LRA", "t", []))

    def test_restrict_remaps_justifications(self):
        trail = Trail()
        trail.append(Assignment(self.p, TRUE), Provenance.decision("Bool"))
        trail.append(Assignment(self.q, TRUE), Provenance.input())
        trail.append(Assignment(self.r, TRUE), Provenance.deduction("Bool", "t", [1]))
        kept = trail.restrict_to(0)
        self.assertEqual([item.term for item in kept], [self.q, self.r])
        self.assertEqual(kept[1].provenance.justification, (0,))
        self.assertEqual(kept.origin, (1, 2))
        self.assertEqual(kept.remap([1, 2]), (0, 1))
        self.assertFalse(kept.is_assigned(self.p))
        self.assertTrue(trail.is_assigned(self.p))

    def test_queries(self):
        trail = Trail()
        a = Assignment(self.p, TRUE)
        trail.append(a, Provenance.input())
        self.assertTrue(trail.holds(a))
        self.assertFalse(trail.holds(a.flip()))
        self.assertTrue(trail.flip_present(a.flip()))
        self.assertEqual(trail.index_of_assignment(a), 0)
        self.assertIsNone(trail.index_of_assignment(a.flip()))
        self.assertIsNone(trail.lookup(self.q))

    def test_conflict_state(self):
        trail = Trail()
        trail.append(Assignment(self.p, TRUE), Provenance.input())
        trail.append(Assignment(self.q, TRUE), Provenance.decision("Bool"))
        conflict = ConflictState.of(trail, [0, 1])
        self.assertEqual(conflict.level, 1)
        self.assertEqual(len(conflict), 2)
        self.assertEqual(trail.latest_in(conflict.elems), 1)
        with self.assertRaises(EmptyConflict):
            ConflictState.of(trail, [])

    def test_digest_tracks_content(self):
        one, two = Trail(), Trail()
        one.append(Assignment(self.p, TRUE), Provenance.input())
        two.append(Assignment(self.p, TRUE).flip(), Provenance.input())
        self.assertNotEqual(one.digest(), two.digest())
        self.assertEqual(one.digest(), one.restrict_to(0).digest())

    @given(steps)
    @settings(deadline=None)
    def test_level_laws_hold(self, plan):
        trail = build(plan)
        self.assertTrue(trail.check_levels())
        running = 0
        for item in trail:
            if item.provenance.is_decision:
                self.assertEqual(item.level, running + 1)
            running = max(running, item.level)

    @given(steps, st.integers(0, 8), st.integers(0, 8))
    @settings(deadline=None)
    def test_restrict_composes(self, plan, m, k):
        trail = build(plan)
        twice = trail.restrict_to(m).restrict_to(k)
        once = trail.restrict_to(min(m, k))
        self.assertEqual(shape(twice), shape(once))
        self.assertTrue(once.check_levels())
        self.assertTrue(all(item.level <= min(m, k) for item in once))
