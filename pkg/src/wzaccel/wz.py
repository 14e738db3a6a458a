"""WZ pairs: verification, Gosper's algorithm and companion certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import (
    NoHypergeometricAntidifference,
    NoSolution,
    NotSimilar,
    NotSimilarPair,
    VariableMismatch,
    ZeroTerm,
)
from .exact import (
    Polynomial,
    RationalFunction,
    factor_list,
    poly_gcd,
    solve_linear,
)
from .hyperterm import ProperTerm, normal_form, shift_ratio, similarity_ratio


@dataclass(frozen=True)
class WZForm:
    """The 1-form F dk + G dn."""

    F: ProperTerm
    G: ProperTerm
    verified: bool = False


@dataclass(frozen=True)
class WZForm3:
    """The 1-form F dk + G dn + H da in the variables (n, k, a)."""

    F: ProperTerm
    G: ProperTerm
    H: ProperTerm
    verified: bool = False


@dataclass(frozen=True)
class CertificateForm:
    f: ProperTerm
    P: Polynomial
    Q: Polynomial


class Verification(NamedTuple):
    ok: bool
    residues: tuple[Polynomial, ...]
    form: WZForm | WZForm3

    def __bool__(self):
        return self.ok

    @property
    def residue(self) -> Polynomial:
        for r in self.residues:
            if r:
                return r
        return self.residues[0]


def _ratio_to(term: ProperTerm, base: ProperTerm) -> RationalFunction:
    try:
        return similarity_ratio(term, base)
    except NotSimilar as exc:
        raise NotSimilarPair(str(exc)) from exc


def _closedness_residue(base, rp, x, rq, y) -> Polynomial:
    """Numerator of (P(x+1) - P) - (Q(y+1) - Q), everything divided by base.

    ``rp``/``rq`` are P/base and Q/base.
    """
    lhs = rp.shift(x, 1) * shift_ratio(base, x) - rp
    rhs = rq.shift(y, 1) * shift_ratio(base, y) - rq
    return (lhs - rhs).num


def verify_wz(F: ProperTerm, G: ProperTerm) -> Verification:
    """Check F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k) exactly."""
    if F.variables != G.variables:
        raise VariableMismatch(f"{F.variables} vs {G.variables}")
    if F.is_zero():
        raise ZeroTerm("F is identically zero")
    one = RationalFunction.constant(1, F.variables)
    R = _ratio_to(G, F)
    res = _closedness_residue(F, one, "n", R, "k")
    ok = res.is_zero()
    return Verification(ok, (res,), WZForm(F, G, ok))


def verify_wz3(form: WZForm3) -> Verification:
    """Check closedness of F dk + G dn + H da (three mixed-difference identities)."""
    F, G, H = form.F, form.G, form.H
    if not (F.variables == G.variables == H.variables):
        raise VariableMismatch("F, G, H live in different variables")
    base = next((t for t in (F, G, H) if not t.is_zero()), None)
    if base is None:
        raise ZeroTerm("all three components are zero")
    rF, rG, rH = (_ratio_to(t, base) for t in (F, G, H))
    residues = (
        _closedness_residue(base, rF, "n", rG, "k"),
        _closedness_residue(base, rF, "a", rH, "k"),
        _closedness_residue(base, rG, "a", rH, "n"),
    )
    ok = all(r.is_zero() for r in residues)
    return Verification(ok, residues, WZForm3(F, G, H, ok))


# -- Gosper -------------------------------------------------------------------

def _content_in(p: Polynomial, var: str) -> Polynomial:
    """gcd of the coefficients of p with respect to var (free of var)."""
    g = Polynomial(p.variables)
    for c in p.coeffs_in(var).values():
        g = poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def _dispersion_candidates(a: Polynomial, b: Polynomial, var: str) -> list[int]:
    """Nonnegative integers h for which a(var) and b(var + h) share a factor."""
    if a.degree(var) < 1 or b.degree(var) < 1:
        return []
    _, fa = factor_list(a)
    _, fb = factor_list(b)
    hs = set()
    for p, _ in fa:
        d = p.degree(var)
        if d < 1:
            continue
        pc = p.coeffs_in(var)
        for q, _ in fb:
            if q.degree(var) != d:
                continue
            qc = q.coeffs_in(var)
            zero = Polynomial(p.variables)
            h = (
                RationalFunction(pc.get(d - 1, zero), pc[d])
                - RationalFunction(qc.get(d - 1, zero), qc[d])
            ) / d
            if not h.is_constant():
                continue
            h = h.constant_value()
            if h.denominator != 1 or h < 0:
                continue
            h = int(h)
            if RationalFunction(q.shift(var, h), p).is_constant():
                hs.add(h)
    return sorted(hs)


def gosper_form(A: Polynomial, B: Polynomial, var: str):
    """Split A/B = (a/b) * c(var+1)/c(var) with gcd(a(var), b(var+h)) = 1 for h >= 0."""
    a, b = A, B
    c = Polynomial.constant(1, A.variables)
    for h in _dispersion_candidates(A, B, var):
        g = poly_gcd(a, b.shift(var, h))
        if g.is_constant():
            continue
        a = a.exquo(g)
        b = b.exquo(g.shift(var, -h))
        for i in range(1, h + 1):
            c = c * g.shift(var, -i)
    return a, b, c


def _degree_bound(p1: Polynomial, p0: Polynomial, rhs: Polynomial, var: str) -> int:
    """Degree bound for x in p1(k) x(k+1) - p0(k) x(k) = rhs(k)."""
    d1, d0, dc = p1.degree(var), p0.degree(var), rhs.degree(var)
    c1, c0 = p1.coeffs_in(var), p0.coeffs_in(var)
    lc1 = RationalFunction.from_polynomial(c1[d1])
    lc0 = RationalFunction.from_polynomial(c0[d0])
    if d1 != d0 or lc1 != lc0:
        return dc - max(d1, d0)
    d = d1
    D = dc - d + 1
    if d >= 1:
        zero = Polynomial(p1.variables)
        root = (
            RationalFunction.from_polynomial(c0.get(d - 1, zero))
            - RationalFunction.from_polynomial(c1.get(d - 1, zero))
        ) / lc1
        if root.is_constant():
            r = root.constant_value()
            if r.denominator == 1 and r >= 0:
                D = max(D, int(r))
    return D


def solve_gosper_equation(p1: Polynomial, p0: Polynomial, rhs: Polynomial, var: str, degree: int):
    """Polynomial x of degree <= ``degree`` in var with coefficients rational in
    the remaining variables, or None if there is none."""
    V = p1.variables
    if degree < 0:
        return None
    kvar = Polynomial.variable(var, V)
    shifted = kvar + 1
    columns = []
    for i in range(degree + 1):
        columns.append((p1 * shifted ** i - p0 * kvar ** i).coeffs_in(var))
    rc = rhs.coeffs_in(var)
    top = max([max(col, default=0) for col in columns] + [max(rc, default=0)])
    zero = RationalFunction.constant(0, V)
    zpoly = Polynomial(V)
    matrix = [
        [RationalFunction.from_polynomial(col.get(j, zpoly)) for col in columns] for j in range(top + 1)
    ]
    vec = [RationalFunction.from_polynomial(rc.get(j, zpoly)) for j in range(top + 1)]
    try:
        sol = solve_linear(matrix, vec, zero=zero)
    except NoSolution:
        return None
    x = zero
    for i, xi in enumerate(sol.values):
        if xi:
            x = x + xi * RationalFunction.from_polynomial(kvar ** i)
    return x


def gosper(H: ProperTerm, var: str = "k") -> RationalFunction:
    """Rational S with S(k+1) H(k+1) - S(k) H(k) = H(k).

    Other variables of ``H`` are treated as symbolic parameters.
    """
    if H.is_zero():
        raise ZeroTerm("Gosper's algorithm needs a nonzero term")
    r = shift_ratio(H, var)
    A, B = r.num, r.den
    ca, cb = _content_in(A, var), _content_in(B, var)
    A, B = A.exquo(ca), B.exquo(cb)
    a, b, c = gosper_form(A, B, var)
    # ca/cb is a unit in the parameters; clear it by multiplying through by cb
    b1 = b.shift(var, -1)
    p1, p0, rhs = ca * a, cb * b1, cb * c
    D = _degree_bound(p1, p0, rhs, var)
    x = solve_gosper_equation(p1, p0, rhs, var, D)
    if x is None:
        raise NoHypergeometricAntidifference(f"no polynomial solution up to degree {D}")
    S = RationalFunction.from_polynomial(b1) * x / RationalFunction.from_polynomial(c)
    check = S.shift(var, 1) * r - S
    if check != 1:
        raise AssertionError("Gosper certificate failed re-verification")
    return S


def find_companion(F: ProperTerm) -> ProperTerm:
    """G with F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k), via Gosper in k."""
    if F.is_zero():
        raise ZeroTerm("F is identically zero")
    rN = shift_ratio(F, "n")
    delta = rN - 1
    if delta.is_zero():
        G = ProperTerm.zero(F.variables)
    else:
        S = gosper(F.times(delta), "k")
        G = normal_form(F.times(S * delta))
    check = verify_wz(F, G)
    if not check.ok:
        raise AssertionError("companion failed WZ verification")
    return G


def to_certificate_form(pair: WZForm) -> CertificateForm:
    """F = f P, G = f Q with P, Q polynomials."""
    if not pair.verified:
        raise ValueError("certificate form requires a verified pair")
    R = similarity_ratio(pair.G, pair.F)
    P, Q = R.den, R.num
    f = pair.F.times(RationalFunction(Polynomial.constant(1, P.variables), P))
    return CertificateForm(f, P, Q)
