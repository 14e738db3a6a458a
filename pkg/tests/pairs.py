"""Test corpus: shipped pair, potential-derived pairs, mutations, oracles."""

from fractions import Fraction
from math import factorial

from sympy import bernoulli

from wzaccel.catalog import shipped_entry, verified_pair
from wzaccel.exact import Polynomial
from wzaccel.hyperterm import LinearForm, ProperTerm, eval_exact
from wzaccel.wz import WZForm, WZForm3

NK = ("n", "k")
NKA = ("n", "k", "a")


def lf(const=0, **coeffs):
    return LinearForm(coeffs, const)


def zeta3_entry():
    return shipped_entry("zeta3-paper")


def zeta3_pair() -> WZForm:
    return verified_pair(zeta3_entry())


def potential_pair(scale=1) -> WZForm:
    """Gradient of phi = n! k! / (n+k+2)!: F = phi(n,k+1)-phi, G = phi(n+1,k)-phi."""
    facs = [(lf(n=1), 1), (lf(k=1), 1), (lf(3, n=1, k=1), -1)]
    F = ProperTerm(NK, -scale, prefactor=Polynomial.linear({"n": 1}, 2, NK), factors=facs)
    G = ProperTerm(NK, -scale, prefactor=Polynomial.linear({"k": 1}, 2, NK), factors=facs)
    return WZForm(F, G)


def binomial_pair() -> WZForm:
    """Gradient of phi = (n+k)!/(n! k!) (no decay; the row sums grow)."""
    # F = phi(n,k+1) - phi = (n+k)!/((n-1)!(k+1)!),  G = (n+k)!/((n+1)!(k-1)!)
    F = ProperTerm(NK, 1, factors=[(lf(n=1, k=1), 1), (lf(-1, n=1), -1), (lf(1, k=1), -1)])
    G = ProperTerm(NK, 1, factors=[(lf(n=1, k=1), 1), (lf(1, n=1), -1), (lf(-1, k=1), -1)])
    return WZForm(F, G)


def geometric_pair() -> WZForm:
    """F = 2^n 3^k, G = 2^n 3^k / 2: a pair with no factorials at all."""
    F = ProperTerm(NK, 1, geometric={"n": 2, "k": 3})
    G = ProperTerm(NK, Fraction(1, 2), geometric={"n": 2, "k": 3})
    return WZForm(F, G)


def potential_form3() -> WZForm3:
    """Gradient of phi = n! k! a! / (n+k+a+3)! in (n, k, a)."""
    facs = [(lf(n=1), 1), (lf(k=1), 1), (lf(a=1), 1), (lf(4, n=1, k=1, a=1), -1)]

    def comp(x, y):
        return ProperTerm(NKA, -1, prefactor=Polynomial.linear({x: 1, y: 1}, 3, NKA), factors=facs)

    return WZForm3(comp("n", "a"), comp("k", "a"), comp("n", "k"))


def bump(T: ProperTerm, form: LinearForm, by=1) -> ProperTerm:
    return ProperTerm(T.variables, T.constant, T.geometric_map(), T.prefactor,
                      list(T.factors) + [(form, by)])


def mutations(pair: WZForm, form: LinearForm):
    yield "G scaled by 2", WZForm(pair.F, pair.G.scaled(2))
    yield f"{form}! exponent bumped", WZForm(bump(pair.F, form), bump(pair.G, form))


def grid_check(pair: WZForm, size=10):
    """Pointwise WZ check on finite points; returns (checked, failures)."""
    checked, failures = 0, []
    for n in range(size + 1):
        for k in range(size + 1):
            vals = [eval_exact(T, {"n": a, "k": b}) for T, a, b in (
                (pair.F, n + 1, k), (pair.F, n, k), (pair.G, n, k + 1), (pair.G, n, k))]
            if not all(v.is_finite for v in vals):
                continue
            f1, f0, g1, g0 = (v.value for v in vals)
            checked += 1
            if f1 - f0 != g1 - g0:
                failures.append((n, k))
    return checked, failures


def zeta3_euler_maclaurin(N=1000, order=12) -> Fraction:
    """Exact rational approximation of sum n^-3: head to N-1, then the
    Euler-Maclaurin tail at N with Bernoulli terms up to B_order."""
    head = sum(Fraction(1, n ** 3) for n in range(1, N))
    tail = Fraction(1, 2 * N ** 2) + Fraction(1, 2 * N ** 3)
    for j in range(1, order // 2 + 1):
        p = 2 * j - 1
        # f^(p)(x) = (-1)^p (p+2)!/2 x^-(p+3)
        deriv = Fraction((-1) ** p * factorial(p + 2), 2 * N ** (p + 3))
        b = bernoulli(2 * j)
        tail -= Fraction(int(b.p), int(b.q)) / factorial(2 * j) * deriv
    return head + tail


def digits_of(x: Fraction, digits: int) -> str:
    """First ``digits`` significant digits of 1 <= x < 10, truncated."""
    scaled = x.numerator * 10 ** (digits - 1) // x.denominator
    s = str(scaled)
    return s[0] + "." + s[1:]
