"""Series acceleration from WZ forms.

Given a WZ pair (F, G), the reparametrised forms

    F_{s,t}(n,k) = sum_{j<t} F(sn, tk+j),   G_{s,t}(n,k) = sum_{i<s} G(sn+i, tk)

are again WZ.  Walking the staircase (n,n) -> (n+1,n) -> (n+1,n+1) of such a
form rewrites sum_n G(n,0) as a series whose terms decay much faster.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Inapplicable, NotSimilar
from .hyperterm import (
    LinearForm,
    ProperTerm,
    combine_similar,
    eval_exact,
    format_rational,
    substitute_affine,
    term_to_json,
)
from .wz import WZForm, WZForm3, verify_wz, verify_wz3

M = "m"

ROW_SUM_OF_F = "RowSumOfF"
COL_SUM_OF_G = "ColSumOfG"


@dataclass(frozen=True)
class BoundaryDescriptor:
    """One limit term that the accelerated identity assumes vanishes.

    ``terms`` sum to the component being summed (F_{s,t}, F_{s,t,r} or
    G_{s,t,r}).  For two-variable terms the partial sum at index N is
    sum_{k=0}^{N-1} term(N, k).  For three-variable terms it is
    sum_{k=0}^{N+1} term(N+1, k, N) (RowSumOfF) or
    sum_{n=0}^{N+1} term(n, N+1, N) (ColSumOfG).
    """

    kind: str
    params: tuple[tuple[str, int], ...]
    terms: tuple[ProperTerm, ...]
    claimed_limit: Fraction = Fraction(0)

    def partial(self, N: int) -> Fraction:
        total = Fraction(0)
        for n, k, a in self._points(N):
            point = {"n": n, "k": k} if a is None else {"n": n, "k": k, "a": a}
            for t in self.terms:
                total += eval_exact(t, point).as_fraction()
        return total

    def _points(self, N):
        three = len(self.terms[0].variables) == 3
        if not three:
            return [(N, k, None) for k in range(N)]
        if self.kind == ROW_SUM_OF_F:
            return [(N + 1, k, N) for k in range(N + 2)]
        return [(n, N + 1, N) for n in range(N + 2)]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "terms": [term_to_json(t) for t in self.terms],
            "claimedLimit": format_rational(self.claimed_limit),
        }


@dataclass(frozen=True)
class SeriesSpec:
    """sum_{m >= start_index} sum_j summands[j](m), minus the boundary limits."""

    summands: tuple[ProperTerm, ...]
    start_index: int = 0
    boundary: tuple[BoundaryDescriptor, ...] = ()
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "summands": [term_to_json(t) for t in self.summands],
            "startIndex": self.start_index,
            "boundary": [b.to_json() for b in self.boundary],
            "provenance": dict(self.provenance),
        }


@dataclass(frozen=True)
class IdentitySpec:
    """sum_k F(0,k) - lim_n sum_{k<=n} F(n,k) = sum_n G(n,0) - lim_k sum_{n<=k} G(n,k)."""

    pair: WZForm

    def sides(self, N: int) -> tuple[Fraction, Fraction]:
        """Both sides truncated at N, the limits taken at index N+1.

        This truncation is the boundary of the square [0, N+1]^2, so for a
        WZ pair the two sides agree exactly.
        """
        F, G = self.pair.F, self.pair.G

        def val(T, n, k):
            return eval_exact(T, {"n": n, "k": k}).as_fraction()

        lhs = sum((val(F, 0, k) for k in range(N + 1)), Fraction(0))
        lhs -= sum((val(F, N + 1, k) for k in range(N + 1)), Fraction(0))
        rhs = sum((val(G, n, 0) for n in range(N + 1)), Fraction(0))
        rhs -= sum((val(G, n, N + 1) for n in range(N + 1)), Fraction(0))
        return lhs, rhs


def _positive(**params):
    for name, v in params.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def _require_verified(pair):
    if not pair.verified:
        raise ValueError("input form has not been verified")


def _combine_or_list(terms: list[ProperTerm]) -> tuple[ProperTerm, ...]:
    try:
        return (combine_similar(terms),)
    except NotSimilar:
        return tuple(terms)


def _combine(terms: list[ProperTerm]) -> ProperTerm:
    try:
        return combine_similar(terms)
    except NotSimilar as exc:
        raise AssertionError(f"reparametrised components are not similar: {exc}") from exc


def _lf(coeffs: dict, const: int = 0) -> LinearForm:
    return LinearForm(coeffs, const)


def build_omega_st(pair: WZForm, s: int, t: int) -> WZForm:
    _positive(s=s, t=t)
    _require_verified(pair)
    V = pair.F.variables
    Fst = _combine([
        substitute_affine(pair.F, {"n": _lf({"n": s}), "k": _lf({"k": t}, j)}, V) for j in range(t)
    ])
    Gst = _combine([
        substitute_affine(pair.G, {"n": _lf({"n": s}, i), "k": _lf({"k": t})}, V) for i in range(s)
    ])
    if Fst.is_zero():
        raise AssertionError("F_{s,t} vanishes identically")
    check = verify_wz(Fst, Gst)
    if not check.ok:
        raise AssertionError(f"reparametrised form failed verification (s={s}, t={t})")
    return check.form


def build_omega_s(pair: WZForm, s: int) -> WZForm:
    return build_omega_st(pair, s, 1)


def build_omega_str(form: WZForm3, s: int, t: int, r: int) -> WZForm3:
    _positive(s=s, t=t, r=r)
    _require_verified(form)
    V = form.F.variables
    base = {"n": _lf({"n": s}), "k": _lf({"k": t}), "a": _lf({"a": r})}

    def shifted(T, var, c, count):
        out = []
        for j in range(count):
            mp = dict(base)
            mp[var] = _lf({var: c}, j)
            out.append(substitute_affine(T, mp, V))
        return _combine(out)

    out = WZForm3(shifted(form.F, "k", t, t), shifted(form.G, "n", s, s), shifted(form.H, "a", r, r))
    check = verify_wz3(out)
    if not check.ok:
        raise AssertionError(f"reparametrised 3-form failed verification (s={s}, t={t}, r={r})")
    return check.form


def _univariate(T: ProperTerm, **images) -> ProperTerm:
    return substitute_affine(T, images, (M,))


def series_formula3(pair: WZForm, s: int, t: int) -> SeriesSpec:
    _positive(s=s, t=t)
    _require_verified(pair)
    F, G = pair.F, pair.G
    summands = [
        _univariate(F, n=_lf({M: s}, s), k=_lf({M: t}, j)) for j in range(t)
    ] + [
        _univariate(G, n=_lf({M: s}, i), k=_lf({M: t})) for i in range(s)
    ]
    Fst = build_omega_st(pair, s, t).F
    boundary = BoundaryDescriptor(ROW_SUM_OF_F, (("s", s), ("t", t)), (Fst,))
    return SeriesSpec(tuple(summands), 0, (boundary,), {"formula": 3, "s": s, "t": t})


def series_formula1(pair: WZForm, s: int) -> SeriesSpec:
    spec = series_formula3(pair, s, 1)
    return SeriesSpec(spec.summands, spec.start_index, spec.boundary, {"formula": 1, "s": s})


def series_formula4(form: WZForm3, s: int, t: int, r: int) -> SeriesSpec:
    _positive(s=s, t=t, r=r)
    _require_verified(form)
    F, G, H = form.F, form.G, form.H
    summands = (
        [_univariate(H, n=_lf({M: s}, s), k=_lf({M: t}, t), a=_lf({M: r}, u)) for u in range(r)]
        + [_univariate(F, n=_lf({M: s}, s), k=_lf({M: t}, j), a=_lf({M: r})) for j in range(t)]
        + [_univariate(G, n=_lf({M: s}, i), k=_lf({M: t}), a=_lf({M: r})) for i in range(s)]
    )
    omega = build_omega_str(form, s, t, r)
    params = (("s", s), ("t", t), ("r", r))
    boundary = (
        BoundaryDescriptor(ROW_SUM_OF_F, params, (omega.F,)),
        BoundaryDescriptor(COL_SUM_OF_G, params, (omega.G,)),
    )
    return SeriesSpec(tuple(summands), 0, boundary, {"formula": 4, "s": s, "t": t, "r": r})


def identity_formula2(pair: WZForm, probe: int = 6) -> IdentitySpec:
    """Formula relating the two axis sums; Inapplicable when either axis
    series has no finite leading terms."""
    _require_verified(pair)
    for name, T, pts in (
        ("F(0,k)", pair.F, [{"n": 0, "k": k} for k in range(probe)]),
        ("G(n,0)", pair.G, [{"n": n, "k": 0} for n in range(probe)]),
    ):
        if all(eval_exact(T, p).tag == "undefined" for p in pts):
            raise Inapplicable(f"{name} is undefined for all indices below {probe}")
    return IdentitySpec(pair)


def combine_to_closed_form(spec: SeriesSpec) -> ProperTerm:
    return combine_similar(list(spec.summands))
