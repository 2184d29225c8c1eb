"""Small hand-built problems shared by the kernel and proof tests."""

from core.terms import BOOL, FALSE, RAT, TRUE, Assignment, Problem, RatValue


def propositional(*names):
    problem = Problem()
    for name in names:
        problem.declare_fun(name, (), BOOL)
    return problem, [problem.constant(n) for n in names]


def all_sign_clauses():
    """The four binary clauses over p and q: unsat, needs a decision."""
    problem, (p, q) = propositional("p", "q")
    s = problem.store
    for a in (p, s.not_(p)):
        for b in (q, s.not_(q)):
            problem.assert_formula(s.or_(a, b))
    return problem


def chain_unsat():
    problem, (p, q) = propositional("p", "q")
    s = problem.store
    problem.assert_formula(p)
    problem.assert_formula(s.or_(s.not_(p), q))
    problem.assert_formula(s.not_(q))
    return problem


def boolean_duplicate():
    problem, (p,) = propositional("p")
    problem.add_input(Assignment(p, TRUE))
    problem.add_input(Assignment(p, FALSE))
    return problem


def rational_duplicate():
    problem = Problem()
    problem.declare_fun("x", (), RAT)
    x = problem.constant("x")
    problem.add_input(Assignment(x, RatValue(1)))
    problem.add_input(Assignment(x, RatValue(2)))
    return problem


def congruence_unsat():
    problem = Problem()
    u = problem.declare_sort("U")
    problem.declare_fun("a", (), u)
    problem.declare_fun("b", (), u)
    problem.declare_fun("f", (u,), u)
    s = problem.store
    a, b = problem.constant("a"), problem.constant("b")
    problem.assert_formula(s.eq(a, b))
    problem.assert_formula(s.not_(s.eq(problem.apply("f", a), problem.apply("f", b))))
    return problem


def euf_sat():
    problem = Problem()
    u = problem.declare_sort("U")
    for name in ("a", "b", "c"):
        problem.declare_fun(name, (), u)
    s = problem.store
    a, b, c = (problem.constant(n) for n in ("a", "b", "c"))
    problem.assert_formula(s.or_(s.eq(a, b), s.eq(b, c)))
    problem.assert_formula(s.not_(s.eq(a, c)))
    return problem


def bounds_unsat():
    problem = Problem()
    problem.declare_fun("x", (), RAT)
    s = problem.store
    x = problem.constant("x")
    problem.assert_formula(s.le(s.numeral(1), x))
    problem.assert_formula(s.le(x, s.numeral(0)))
    return problem


def open_interval():
    problem = Problem()
    problem.declare_fun("x", (), RAT)
    s = problem.store
    x = problem.constant("x")
    problem.assert_formula(s.lt(s.numeral(0), x))
    problem.assert_formula(s.lt(x, s.numeral(1)))
    return problem


def interval_split_unsat():
    """0 <= x <= 1 while x lies outside [0, 1]; the Boolean side must search."""
    problem = Problem()
    problem.declare_fun("x", (), RAT)
    s = problem.store
    x = problem.constant("x")
    problem.assert_formula(s.le(s.numeral(0), x))
    problem.assert_formula(s.le(x, s.numeral(1)))
    problem.assert_formula(s.or_(s.lt(x, s.numeral(0)), s.lt(s.numeral(1), x)))
    return problem


def two_variable_sat():
    problem = Problem()
    problem.declare_fun("x", (), RAT)
    problem.declare_fun("y", (), RAT)
    s = problem.store
    x, y = problem.constant("x"), problem.constant("y")
    problem.assert_formula(s.eq(s.add(x, y), s.numeral(2)))
    problem.assert_formula(s.lt(x, y))
    return problem
