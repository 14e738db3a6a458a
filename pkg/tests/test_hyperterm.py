import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pairs import NK, lf, zeta3_entry, zeta3_pair
from wzaccel.errors import NonIntegerSubstitution, NotSimilar, PairFormatError, UndefinedTerm
from wzaccel.exact import Polynomial, RationalFunction
from wzaccel.hyperterm import (
    UNDEFINED,
    ZERO,
    LinearForm,
    ProperTerm,
    combine_similar,
    eval_exact,
    format_term,
    normal_form,
    shift_ratio,
    similarity_ratio,
    substitute_affine,
    term_from_json,
    term_to_json,
)

n = Polynomial.variable("n", NK)
k = Polynomial.variable("k", NK)
K = ("k",)


def F():
    return zeta3_entry().F


def val(T, **pt):
    return eval_exact(T, pt).as_fraction()


def test_eval_zeta3_f():
    assert val(F(), n=1, k=0) == Fraction(1, 64)


def test_eval_numerator_pole_is_undefined():
    assert eval_exact(F(), {"n": 0, "k": 0}) == UNDEFINED
    with pytest.raises(UndefinedTerm):
        eval_exact(F(), {"n": 0, "k": 0}).as_fraction()


def test_eval_denominator_pole_is_zero():
    T = ProperTerm(K, 5, factors=[(lf(-2, k=1), -1), (lf(k=1), 1)])
    assert eval_exact(T, {"k": 0}) == ZERO
    assert eval_exact(T, {"k": 2}).as_fraction() == 10


def test_zero_beats_undefined():
    T = ProperTerm(K, 1, factors=[(lf(-1, k=1), 1), (lf(-2, k=1), -1)])
    assert eval_exact(T, {"k": 0}) == ZERO


def test_shift_ratio_zeta3_f_in_k():
    expected = RationalFunction(-(k + 1) ** 3, (2 * n - k - 1) * (n + k + 2) ** 2)
    assert shift_ratio(F(), "k") == expected
    assert val(F(), n=1, k=1) / val(F(), n=1, k=0) == Fraction(-1, 9)


def test_shift_ratio_simple():
    kk = Polynomial.variable("k", K)
    assert shift_ratio(ProperTerm(K, factors=[(lf(k=1), 1)]), "k") == kk + 1
    assert shift_ratio(ProperTerm(K, geometric={"k": 2}), "k") == 2


def test_shift_ratio_matches_points():
    rng = random.Random(7)
    T = F()
    for var in ("n", "k"):
        r = shift_ratio(T, var)
        for _ in range(10):
            nn = rng.randint(2, 12)
            kk = rng.randint(0, 2 * nn - 3)
            pt = {"n": nn, "k": kk}
            nxt = dict(pt, **{var: pt[var] + 1})
            assert r.evaluate(pt) == val(T, **nxt) / val(T, **pt)


def test_substitute_factorial():
    T = ProperTerm(K, factors=[(lf(k=1), 1)])
    S = substitute_affine(T, {"k": lf(1, m=2)}, ("m",))
    assert S.factors == ((LinearForm({"m": 2}, 1), 1),)


def test_substitute_scales_linear_forms():
    S = substitute_affine(F(), {"n": lf(n=2)}, NK)
    assert LinearForm({"n": 4, "k": -1}, -1) in [f for f, _ in S.factors]


def test_substitute_formula1_summand():
    S = substitute_affine(F(), {"n": lf(1, m=1), "k": lf(m=1)}, ("m",))
    for m in range(6):
        assert val(S, m=m) == val(F(), n=m + 1, k=m)


def test_substitute_rejects_fractional():
    with pytest.raises(NonIntegerSubstitution):
        substitute_affine(F(), {"n": LinearForm({"n": Fraction(1, 2)})}, NK)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2), st.integers(0, 3), st.integers(1, 3), st.integers(0, 2))
def test_substitute_commutes_with_eval(a, b, j, m, x):
    T = F()
    S = substitute_affine(T, {"n": lf(b + a, m=a), "k": lf(j, m=1)}, ("m",))
    got = eval_exact(S, {"m": m})
    want = eval_exact(T, {"n": a * m + a + b, "k": m + j})
    assert got == want


def test_similarity_ratio():
    A = ProperTerm(("n",), factors=[(lf(1, n=1), 1)])
    B = ProperTerm(("n",), factors=[(lf(n=1), 1)])
    assert similarity_ratio(A, B) == Polynomial.variable("n", ("n",)) + 1
    with pytest.raises(NotSimilar):
        similarity_ratio(B, ProperTerm(("n",), geometric={"n": 2}))


def test_not_similar_n_vs_k():
    with pytest.raises(NotSimilar):
        similarity_ratio(ProperTerm(NK, factors=[(lf(n=1), 1)]), ProperTerm(NK, factors=[(lf(k=1), 1)]))


def test_companion_ratio_is_certificate():
    pair = zeta3_pair()
    R = similarity_ratio(pair.G, pair.F)
    for nn, kk in [(3, 1), (4, 2), (5, 0)]:
        assert R.evaluate({"n": nn, "k": kk}) == val(pair.G, n=nn, k=kk) / val(pair.F, n=nn, k=kk)


def test_combine_folds_prefactor():
    N = ("n",)
    nf = [(lf(n=1), 1)]
    T = combine_similar([ProperTerm(N, prefactor=Polynomial.variable("n", N), factors=nf), ProperTerm(N, factors=nf)])
    assert T == ProperTerm(N, factors=[(lf(1, n=1), 1)])


def test_combine_cancels():
    T = F()
    assert combine_similar([T, -T]).is_zero()


def test_combine_zeta3_staircase():
    pair = zeta3_pair()
    M = ("m",)
    a = substitute_affine(pair.F, {"n": lf(1, m=1), "k": lf(m=1)}, M)
    b = substitute_affine(pair.G, {"n": lf(m=1), "k": lf(m=1)}, M)
    T = combine_similar([a, b])
    mm = Polynomial.variable("m", M)
    want = ProperTerm(M, Fraction(1, 64), {"m": -1}, 205 * mm ** 2 + 250 * mm + 77,
                      [(lf(m=1), 10), (lf(1, m=2), -5)])
    assert T == want
    assert format_term(T) == "(-1)^m * (205*m^2 + 250*m + 77) * m!^10 / (64 * (2*m + 1)!^5)"


def test_normal_form_preserves_values():
    T = ProperTerm(("n",), prefactor=RationalFunction(Polynomial.linear({"n": 1}, 1, ("n",))),
                   factors=[(lf(n=1), 1), (lf(3, n=2), -1)])
    N = normal_form(T)
    for x in range(6):
        assert eval_exact(N, {"n": x}) == eval_exact(T, {"n": x})


def test_json_round_trip():
    T = F()
    assert term_from_json(term_to_json(T)) == T


def test_json_constant_term():
    assert term_from_json({"constant": "1", "factors": []}) == ProperTerm(NK)


def test_json_rejects_denormalized_rational():
    with pytest.raises(PairFormatError):
        term_from_json({"constant": "2/4"})


def test_json_rejects_unknown_field():
    with pytest.raises(PairFormatError):
        term_from_json({"constant": "1", "extra": 1})
