from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from wzaccel.errors import NoSolution, VariableMismatch, ZeroDenominator
from wzaccel.exact import (
    Polynomial,
    RationalFunction,
    factor_list,
    poly_gcd,
    ratfunc_equal,
    ratfunc_normalize,
    solve_linear,
)

V = ("n", "k")
n = Polynomial.variable("n", V)
k = Polynomial.variable("k", V)


def test_normalize_common_factor():
    r = ratfunc_normalize(2 * n ** 2, 4 * n)
    assert r.num == n and r.den == Polynomial.constant(2, V)


def test_normalize_identity():
    assert ratfunc_normalize(n - k, n - k) == 1


def test_normalize_sign_lives_in_numerator():
    r = ratfunc_normalize(n, -k)
    assert r.den.leading_coefficient() > 0
    assert r == RationalFunction(-n, k)


def test_normalize_zero_denominator():
    with pytest.raises(ZeroDenominator):
        ratfunc_normalize(n, Polynomial(V))


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        n + Polynomial.variable("a", ("n", "a"))


def test_equal():
    assert ratfunc_equal(RationalFunction(n, Polynomial.constant(2, V)), RationalFunction(2 * n, Polynomial.constant(4, V)))
    assert not ratfunc_equal(RationalFunction(n), RationalFunction(k))


def test_gcd_and_factor():
    a = (n + 1) * (n - k) ** 2
    b = (n - k) * (k + 3)
    assert poly_gcd(a, b) == n - k or poly_gcd(a, b) == k - n
    c, facs = factor_list(6 * (n + 1) ** 2 * (2 * k + 1))
    assert c == 6
    assert sorted((str(f), e) for f, e in facs) == sorted([("n + 1", 2), ("2*k + 1", 1)])


def test_divmod_and_exquo():
    q, r = ((n + 1) * (n + k) + 3).divmod(n + k)
    assert q == n + 1 and r == 3
    assert ((n + 1) * (k - 2)).exquo(k - 2) == n + 1


def test_shift_and_substitute():
    p = n ** 2 + k
    assert p.shift("n", 1) == (n + 1) ** 2 + k
    assert p.evaluate({"n": 3, "k": Fraction(1, 2)}) == Fraction(19, 2)


def test_solve_identity():
    sol = solve_linear([[1, 0], [0, 1]], [3, 4])
    assert list(sol.values) == [3, 4] and not sol.underdetermined


def test_solve_underdetermined():
    sol = solve_linear([[1, 1]], [2])
    assert list(sol.values) == [2, 0] and sol.underdetermined


def test_solve_inconsistent():
    with pytest.raises(NoSolution):
        solve_linear([[1, 1], [2, 2]], [1, 3])


def test_solve_over_rational_functions():
    one = RationalFunction.constant(1, V)
    N = RationalFunction(n)
    zero = RationalFunction.constant(0, V)
    sol = solve_linear([[N, one], [one, -one]], [N + 1, zero], zero=zero)
    x, y = sol.values
    assert x == y
    assert x * (N + 1) == N + 1


small = st.integers(-4, 4)
poly = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), small), max_size=4).map(
    lambda ts: sum((Polynomial.constant(c, V) * n ** i * k ** j for i, j, c in ts), Polynomial(V))
)
nonzero = poly.filter(lambda p: not p.is_zero())


@settings(max_examples=60, deadline=None)
@given(poly, nonzero, nonzero)
def test_normalize_is_canonical(p, q, r):
    a = RationalFunction(p, q)
    b = RationalFunction(p * r, q * r)
    assert a == b
    assert (a.num, a.den) == (b.num, b.den)
    assert a.den.leading_coefficient() > 0


@settings(max_examples=60, deadline=None)
@given(poly, nonzero, st.integers(-3, 3), st.integers(-3, 3))
def test_rational_arithmetic_matches_points(p, q, x, y):
    pt = {"n": x, "k": y}
    a = RationalFunction(p, q)
    if q.evaluate(pt) == 0:
        return
    b = a * a - a + 1
    assert b.evaluate(pt) == a.evaluate(pt) ** 2 - a.evaluate(pt) + 1
