from fractions import Fraction

import pytest

from pairs import (
    NK,
    NKA,
    binomial_pair,
    bump,
    geometric_pair,
    grid_check,
    lf,
    mutations,
    zeta3_entry,
    zeta3_pair,
    potential_form3,
    potential_pair,
)
from wzaccel.errors import NoHypergeometricAntidifference, NotSimilarPair, ZeroTerm
from wzaccel.exact import Polynomial, RationalFunction
from wzaccel.hyperterm import ProperTerm, eval_exact, shift_ratio, similarity_ratio
from wzaccel.wz import (
    WZForm,
    WZForm3,
    find_companion,
    gosper,
    gosper_form,
    solve_gosper_equation,
    to_certificate_form,
    verify_wz,
    verify_wz3,
)

K = ("k",)
kk = Polynomial.variable("k", K)


def _check_certificate(H, S, var="k"):
    assert S.shift(var, 1) * shift_ratio(H, var) - S == 1


# -- verify_wz ------------------------------------------------------------------

def test_zeta3_pair_verifies():
    entry = zeta3_entry()
    assert entry.G is None
    G = find_companion(entry.F)
    check = verify_wz(entry.F, G)
    assert check.ok and check.form.verified
    R = similarity_ratio(G, entry.F)
    assert isinstance(R, RationalFunction)


def test_scaled_companion_fails_with_residue():
    pair = zeta3_pair()
    check = verify_wz(pair.F, pair.G.scaled(2))
    assert not check.ok
    assert not check.residue.is_zero()


def test_potential_pair_verifies_on_grid():
    pair = potential_pair()
    assert verify_wz(pair.F, pair.G).ok
    checked, failures = grid_check(pair, 8)
    assert checked == 81 and not failures


def test_g_exponent_bump_alone_is_not_similar():
    pair = zeta3_pair()
    with pytest.raises(NotSimilarPair):
        verify_wz(pair.F, bump(pair.G, lf(n=1)))


@pytest.mark.parametrize("make,form", [
    (zeta3_pair, lf(n=1)),
    (potential_pair, lf(k=1)),
    (geometric_pair, lf(n=1)),
])
def test_mutations_fail(make, form):
    for name, m in mutations(make(), form):
        check = verify_wz(m.F, m.G)
        assert not check.ok, name
        assert not check.residue.is_zero(), name


def _corpus():
    out = [("zeta3", zeta3_pair()), ("potential", potential_pair()), ("potential x3", potential_pair(3)),
           ("binomial", binomial_pair()), ("geometric", geometric_pair())]
    for make, form in ((zeta3_pair, lf(n=1)), (potential_pair, lf(k=1)), (geometric_pair, lf(n=1))):
        out.extend((f"{make.__name__}: {name}", m) for name, m in mutations(make(), form))
    return out


@pytest.mark.parametrize("name,pair", _corpus(), ids=lambda x: x if isinstance(x, str) else "")
def test_symbolic_agrees_with_grid(name, pair):
    symbolic = verify_wz(pair.F, pair.G).ok
    checked, failures = grid_check(pair, 10)
    assert checked > 0
    assert symbolic == (not failures)


# -- Gosper ---------------------------------------------------------------------------

def test_gosper_k_times_k_factorial():
    H = ProperTerm(K, prefactor=kk, factors=[(lf(k=1), 1)])
    S = gosper(H)
    assert S == RationalFunction(Polynomial.constant(1, K), kk)
    _check_certificate(H, S)


def test_gosper_geometric():
    H = ProperTerm(K, geometric={"k": 2})
    S = gosper(H)
    assert S == 1
    _check_certificate(H, S)


def test_gosper_harmonic_has_no_antidifference():
    H = ProperTerm(K, factors=[(lf(-1, k=1), 1), (lf(k=1), -1)])
    with pytest.raises(NoHypergeometricAntidifference):
        gosper(H)


def test_gosper_harmonic_exhaustive():
    # every degree up to well past the bound has no polynomial solution
    H = ProperTerm(K, factors=[(lf(-1, k=1), 1), (lf(k=1), -1)])
    r = shift_ratio(H, "k")
    a, b, c = gosper_form(r.num, r.den, "k")
    for d in range(8):
        assert solve_gosper_equation(a, b.shift("k", -1), c, "k", d) is None


def test_gosper_with_parameter():
    pair = potential_pair()
    delta = shift_ratio(pair.F, "n") - 1
    H = pair.F.times(delta)
    _check_certificate(H, gosper(H, "k"))


def test_companion_of_potential_f():
    pair = potential_pair()
    G = find_companion(pair.F)
    assert verify_wz(pair.F, G).ok
    assert grid_check(WZForm(pair.F, G), 6)[1] == []


def test_companion_of_zero_term():
    with pytest.raises(ZeroTerm):
        find_companion(ProperTerm.zero(NK))


# -- certificate form -------------------------------------------------------------------

def test_certificate_degenerate_pair():
    F = ProperTerm(NK, 5)
    check = verify_wz(F, F)
    assert check.ok
    cert = to_certificate_form(check.form)
    assert cert.P == cert.Q


def test_certificate_zeta3_pair():
    pair = zeta3_pair()
    cert = to_certificate_form(pair)
    assert RationalFunction(cert.Q, cert.P) == similarity_ratio(pair.G, pair.F)


def test_certificate_potential_grid():
    pair = verify_wz(potential_pair().F, potential_pair().G).form
    cert = to_certificate_form(pair)
    for n in range(7):
        for k in range(7):
            pt = {"n": n, "k": k}
            f = eval_exact(cert.f, pt)
            if f.is_finite:
                assert f.value * cert.P.evaluate(pt) == eval_exact(pair.F, pt).as_fraction()
                assert f.value * cert.Q.evaluate(pt) == eval_exact(pair.G, pt).as_fraction()


# -- three variables ------------------------------------------------------------------

def _grid3(form, size=5):
    def v(T, n, k, a):
        return eval_exact(T, {"n": n, "k": k, "a": a}).as_fraction()

    for n in range(size + 1):
        for k in range(size + 1):
            for a in range(size + 1):
                F, G, H = form.F, form.G, form.H
                assert v(F, n + 1, k, a) - v(F, n, k, a) == v(G, n, k + 1, a) - v(G, n, k, a)
                assert v(F, n, k, a + 1) - v(F, n, k, a) == v(H, n, k + 1, a) - v(H, n, k, a)
                assert v(G, n, k, a + 1) - v(G, n, k, a) == v(H, n + 1, k, a) - v(H, n, k, a)


def test_potential_form3_verifies():
    form = potential_form3()
    assert verify_wz3(form).ok
    _grid3(form)


def test_form3_perturbed_h():
    form = potential_form3()
    check = verify_wz3(WZForm3(form.F, form.G, form.H.scaled(2)))
    assert not check.ok
    assert any(not r.is_zero() for r in check.residues)


def test_form3_embedding():
    pair = potential_pair()
    F, G = pair.F.with_variables(NKA), pair.G.with_variables(NKA)
    assert verify_wz3(WZForm3(F, G, ProperTerm.zero(NKA))).ok
