"""High-precision evaluation of accelerated series.

Partial sums are accumulated in decimal fixed point (integers scaled by
10**wp).  Each summand is advanced by its exact rational shift ratio and
rounded half-to-even.  Summation stops once the tail bound is small enough.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .accel import IdentitySpec, SeriesSpec, build_omega_st, combine_to_closed_form, series_formula3
from .errors import NoConvergenceDetected, NotSimilar, UndefinedTerm, WZAccelError
from .hyperterm import ProperTerm, eval_exact, shift_ratio
from .wz import WZForm

DEFAULT_TERM_BUDGET = 10_000
SAFETY = 1.05
RATIO_WINDOW = 5


def term_budget() -> int:
    raw = os.environ.get("WZACCEL_TERM_BUDGET")
    if raw is None:
        return DEFAULT_TERM_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"WZACCEL_TERM_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("WZACCEL_TERM_BUDGET must be positive")
    return value


# -- fixed-point helpers -----------------------------------------------------

def _div_round(a: int, b: int) -> int:
    """a / b rounded to the nearest integer, ties to even."""
    if b < 0:
        a, b = -a, -b
    q, r = divmod(a, b)
    twice = 2 * r
    if twice > b or (twice == b and q & 1):
        q += 1
    return q


def _to_fixed(x: Fraction, scale: int) -> int:
    return _div_round(x.numerator * scale, x.denominator)


def _log10_abs(x) -> float:
    """log10 |x| for a nonzero int or Fraction of any size."""
    if isinstance(x, Fraction):
        return _log10_abs(x.numerator) - _log10_abs(x.denominator)
    return math.log10(abs(x))


def format_decimal(x: Fraction, digits: int) -> str:
    """x rounded half-even to ``digits`` significant digits.

    Plain ``d.ddd`` notation for |x| in [0.1, 10), scientific otherwise.
    """
    if x == 0:
        return "0." + "0" * max(digits - 1, 1)
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = math.floor(_log10_abs(x))
    # correct a possible off-by-one from floating point
    while x >= Fraction(10) ** (e + 1):
        e += 1
    while x < Fraction(10) ** e:
        e -= 1
    mant = _div_round(x.numerator * 10 ** max(digits - 1 - e, 0),
                      x.denominator * 10 ** max(e - digits + 1, 0))
    if mant >= 10 ** digits:
        mant = _div_round(mant, 10)
        e += 1
    s = str(mant)
    if 0 <= e < 1:
        return f"{sign}{s[0]}.{s[1:]}" if digits > 1 else f"{sign}{s}"
    if e == -1:
        return f"{sign}0.{s}"
    body = f"{s[0]}.{s[1:]}" if digits > 1 else s
    return f"{sign}{body}e{e:+d}"


def _format_bound(log10_bound: float) -> str:
    if log10_bound == -math.inf:
        return "0"
    e = math.floor(log10_bound)
    m = 10 ** (log10_bound - e)
    # round the mantissa up so the printed number stays an upper bound
    m = math.ceil(m * 100) / 100
    if m >= 10:
        m, e = m / 10, e + 1
    return f"{m:.2f}e{e:+d}"


# -- reports -----------------------------------------------------------------

@dataclass
class EvalReport:
    value: str
    terms_used: int
    tail_bound: str
    digits_per_term: str
    notes: str = ""
    digits: int = 0
    partial: Fraction | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "termsUsed": self.terms_used,
            "tailBound": self.tail_bound,
            "digitsPerTerm": self.digits_per_term,
            "digits": self.digits,
            "wallNotes": self.notes,
        }

    def to_text(self) -> str:
        rows = [
            ("value", self.value),
            ("termsUsed", str(self.terms_used)),
            ("tailBound", self.tail_bound),
            ("digitsPerTerm", self.digits_per_term),
            ("wallNotes", self.notes),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


@dataclass
class BoundaryCheckReport:
    samples: list[tuple[int, str]]
    monotone_from_index: int | None
    verdict: str

    def to_json(self) -> dict:
        return {
            "samples": [{"n": n, "magnitude": m} for n, m in self.samples],
            "monotoneFromIndex": self.monotone_from_index,
            "verdict": self.verdict,
        }


VANISHES = "VanishesNumerically"
INCONCLUSIVE = "Inconclusive"


# -- tail certification ----------------------------------------------------------

class _TailCertifier:
    """Decides when the remaining tail is provably (under the ratio
    hypothesis) below the target.

    Fed with log10 |a(m)| and sign of each accepted term, plus log10 of the
    ratio |a(m)/a(m-1)|.
    """

    def __init__(self):
        self.logs: list[float] = []
        self.signs: list[int] = []
        self.log_ratios: list[float] = []

    def push(self, log_abs: float, sign: int, log_ratio: float | None):
        self.logs.append(log_abs)
        self.signs.append(sign)
        if log_ratio is not None:
            self.log_ratios.append(log_ratio)

    def bound(self, next_log: float, next_sign: int) -> tuple[float, str] | None:
        """log10 of a bound for sum_{j>=m+1} a(j), given a(m+1), or None."""
        if len(self.log_ratios) < RATIO_WINDOW or not self.logs:
            return None
        recent = self.log_ratios[-RATIO_WINDOW:]
        worst = max(recent)
        if worst >= 0:
            return None
        signs = self.signs[-RATIO_WINDOW:] + [next_sign]
        alternating = all(a == -b for a, b in zip(signs, signs[1:]))
        decreasing = next_log < self.logs[-1] and all(r < 0 for r in recent)
        if alternating and decreasing:
            return next_log, "alternating"
        rho = min(SAFETY * 10 ** worst, (1 + 10 ** worst) / 2)
        if rho >= 1:
            return None
        return self.logs[-1] + math.log10(rho / (1 - rho)), "geometric"


# -- summand streams -----------------------------------------------------------

class _Stream:
    """Fixed-point values of one summand for m = m0, m0+1, ...

    Alongside the rounded value the stream tracks log10 |a(m)| and the sign
    from the exact ratios, so magnitudes never depend on rounding.
    """

    def __init__(self, T: ProperTerm, m0: int, scale: int):
        self.T = T
        self.var = T.variables[0]
        self.scale = scale
        r = shift_ratio(T, self.var)
        self.num = _int_coeffs(r.num)
        self.den = _int_coeffs(r.den)
        self.m = m0
        self._reset(m0)

    def _reset(self, m):
        tv = eval_exact(self.T, {self.var: m})
        if tv.tag == "undefined":
            raise UndefinedTerm(f"summand {self.T} is undefined at {self.var}={m}")
        x = tv.as_fraction()
        self.value = _to_fixed(x, self.scale)
        self.log = _log10_abs(x) if x else -math.inf
        self.sign = (x > 0) - (x < 0)

    def advance(self):
        m = self.m
        self.m += 1
        if self.sign:
            p, q = _horner(self.num, m), _horner(self.den, m)
            if p and q:
                self.value = _div_round(self.value * p, q)
                self.log += _log10_abs(Fraction(p, q))
                if (p < 0) != (q < 0):
                    self.sign = -self.sign
                return
        self._reset(self.m)


def _int_coeffs(p) -> list[int]:
    """Dense integer coefficients (low to high) of a univariate polynomial."""
    d = max((e[0] for e in p.terms), default=0)
    out = [0] * (d + 1)
    for (e,), c in p.terms.items():
        if c.denominator != 1:
            raise ValueError("expected integer coefficients")
        out[e] = c.numerator
    return out


def _horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _summands_of(obj) -> tuple[list[ProperTerm], int, str]:
    if isinstance(obj, ProperTerm):
        return [obj], 0, "closed form"
    if isinstance(obj, SeriesSpec):
        try:
            return [combine_to_closed_form(obj)], obj.start_index, "closed form"
        except NotSimilar:
            return list(obj.summands), obj.start_index, f"{len(obj.summands)} summands evaluated separately"
    raise TypeError(f"cannot evaluate {type(obj).__name__}")


def _target_log(digits: int, log_sum: float) -> float:
    return min(math.floor(log_sum), 0) - digits - 2


def eval_series(obj, digits: int, *, start: int | None = None, budget: int | None = None,
                method: str = "loop") -> EvalReport:
    """Evaluate a SeriesSpec or a univariate term to ``digits`` significant digits.

    ``method="binary"`` uses binary splitting over exact integers for a
    single closed-form summand and must reproduce the loop's digits.
    """
    if not isinstance(digits, int) or digits < 1:
        raise ValueError("digits must be a positive integer")
    if budget is None:
        budget = term_budget()
    terms, m0, note = _summands_of(obj)
    if start is not None:
        m0 = start
    terms = [t for t in terms if not t.is_zero()]
    if not terms:
        return EvalReport(format_decimal(Fraction(0), digits), 0, "0", "inf", "zero series", digits, Fraction(0))
    if method == "binary":
        if len(terms) != 1:
            raise ValueError("binary splitting needs a single closed-form summand")
        return _eval_binary(terms[0], m0, digits, budget, note)
    if method != "loop":
        raise ValueError(f"unknown method {method!r}")
    return _eval_loop(terms, m0, digits, budget, note)


def _first_log(terms, m0) -> float:
    for t in terms:
        v = eval_exact(t, {t.variables[0]: m0})
        if v.tag == "undefined":
            raise UndefinedTerm(f"summand {t} is undefined at {m0}")
        if v.tag == "finite" and v.value:
            return _log10_abs(v.value)
    return 0.0


def _working_precision(digits: int, budget: int, first_log: float) -> int:
    return digits + 10 + math.ceil(math.log10(budget + 1)) + max(0, -math.floor(first_log))


def _eval_loop(terms, m0, digits, budget, note) -> EvalReport:
    wp = _working_precision(digits, budget, _first_log(terms, m0))
    scale = 10 ** wp
    single = len(terms) == 1
    streams = [_Stream(t, m0, scale) for t in terms]
    cert = _TailCertifier()
    total = 0
    prev_exact_log = None
    used = 0
    log_sum = 0.0
    while True:
        a = sum(s.value for s in streams)
        if single:
            a_log, sign = streams[0].log, streams[0].sign
        else:
            a_log = _log10_abs(a) - wp if a else -math.inf
            sign = (a > 0) - (a < 0)
        if used and total:
            log_sum = _log10_abs(total) - wp
        if used >= RATIO_WINDOW + 1:
            b = cert.bound(a_log, sign)
            if b is not None and b[0] < _target_log(digits, log_sum):
                break
        if used >= budget:
            raise NoConvergenceDetected(f"tail not certified within {budget} terms")
        total += a
        log_ratio = None
        if prev_exact_log is not None and a_log != -math.inf and prev_exact_log != -math.inf:
            log_ratio = a_log - prev_exact_log
        cert.push(a_log, sign, log_ratio)
        prev_exact_log = a_log
        used += 1
        for s in streams:
            s.advance()
    bound_log, kind = b
    # rounding: each term carries at most ~used half-ulps; add them to the bound
    round_log = math.log10(used * (used + 1) + 1) - wp
    err_log = max(bound_log, round_log) + math.log10(2)
    value = Fraction(total, scale)
    return EvalReport(
        value=format_decimal(value, digits),
        terms_used=used,
        tail_bound=_format_bound(bound_log),
        digits_per_term=f"{_digits_per_term(cert.log_ratios):.4f}",
        notes=f"{note}; {kind} tail bound; working precision {wp} digits; "
              f"total error < {_format_bound(err_log)}",
        digits=digits,
        partial=value,
    )


def _digits_per_term(log_ratios: Sequence[float], window: int = 10) -> float:
    late = [r for r in log_ratios[-window:] if math.isfinite(r)]
    if not late:
        return float("nan")
    return -sum(late) / len(late)


def _eval_binary(T: ProperTerm, m0, digits, budget, note) -> EvalReport:
    var = T.variables[0]
    r = shift_ratio(T, var)
    P, Q = _int_coeffs(r.num), _int_coeffs(r.den)
    first = eval_exact(T, {var: m0})
    if first.tag == "undefined":
        raise UndefinedTerm(f"summand {T} is undefined at {var}={m0}")
    a0 = first.as_fraction()
    if a0 == 0:
        raise ValueError("binary splitting needs a nonzero leading term")
    # the same stopping rule as the loop, driven by exact ratio logarithms
    cert = _TailCertifier()
    a_log = _log10_abs(a0)
    sign = 1 if a0 > 0 else -1
    used = 0
    m = m0
    approx = _approx_partial()
    partial_log = 0.0
    while True:
        if used and approx.total:
            partial_log = approx.log10()
        if used >= RATIO_WINDOW + 1:
            b = cert.bound(a_log, sign)
            if b is not None and b[0] < _target_log(digits, partial_log):
                break
        if used >= budget:
            raise NoConvergenceDetected(f"tail not certified within {budget} terms")
        log_ratio = None if not cert.logs else a_log - cert.logs[-1]
        cert.push(a_log, sign, log_ratio)
        approx.add(sign, a_log)
        used += 1
        p, q = _horner(P, m), _horner(Q, m)
        if p == 0 or q == 0:
            raise ValueError("binary splitting needs a ratio without zeros or poles in range")
        a_log += _log10_abs(Fraction(p, q))
        sign *= 1 if (p > 0) == (q > 0) else -1
        m += 1
    Pp, Qq, Tt = _bsplit(P, Q, m0, m0 + used - 1)
    # sum_{j<used} a(m0+j) = a0 * (1 + Tt/Qq) where the split covers the ratios
    value = a0 * (1 + Fraction(Tt, Qq)) if used > 1 else a0
    bound_log, kind = b
    return EvalReport(
        value=format_decimal(value, digits),
        terms_used=used,
        tail_bound=_format_bound(bound_log),
        digits_per_term=f"{_digits_per_term(cert.log_ratios):.4f}",
        notes=f"{note}; {kind} tail bound; binary splitting (exact partial sum)",
        digits=digits,
        partial=value,
    )


class _approx_partial:
    """Low-precision running sum from (sign, log10 |term|) pairs."""

    def __init__(self):
        self.total = Decimal(0)

    def add(self, sign, log_abs):
        with localcontext() as ctx:
            ctx.prec = 30
            ctx.Emin, ctx.Emax = -10**8, 10**8
            self.total += sign * Decimal(10) ** Decimal(repr(log_abs))

    def log10(self) -> float:
        with localcontext() as ctx:
            ctx.prec = 30
            ctx.Emin, ctx.Emax = -10**8, 10**8
            return float(abs(self.total).log10())


def _bsplit(P, Q, a, b):
    """Over ratio indices j in [a, b): returns (prod p, prod q, T) with
    T/prod q = sum_{i=a}^{b-1} prod_{j=a}^{i} p(j)/q(j)."""
    if b - a == 1:
        p, q = _horner(P, a), _horner(Q, a)
        return p, q, p
    mid = (a + b) // 2
    p1, q1, t1 = _bsplit(P, Q, a, mid)
    p2, q2, t2 = _bsplit(P, Q, mid, b)
    return p1 * p2, q1 * q2, t1 * q2 + p1 * t2


# -- boundary limits --------------------------------------------------------------

def _decimal_str(x: Fraction, prec: int = 30) -> str:
    with localcontext() as ctx:
        ctx.prec = prec
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def check_boundary_vanishing(pair: WZForm, s: int, t: int, n_max: int) -> BoundaryCheckReport:
    """Sample |sum_{k<n} F_{s,t}(n,k)| for n = 1..n_max."""
    Fst = build_omega_st(pair, s, t).F
    samples = []
    mags = []
    for n in range(1, n_max + 1):
        total = Fraction(0)
        for k in range(n):
            total += eval_exact(Fst, {"n": n, "k": k}).as_fraction()
        mags.append(abs(total))
        samples.append((n, _decimal_str(abs(total))))
    return _verdict(samples, mags)


def _verdict(samples, mags, min_run: int = 3, threshold=Fraction(1, 10**10)) -> BoundaryCheckReport:
    if len(mags) < 2:
        return BoundaryCheckReport(samples, None, INCONCLUSIVE)
    start = len(mags) - 1
    while start > 0 and mags[start - 1] > mags[start]:
        start -= 1
    run = len(mags) - start
    monotone = samples[start][0] if run >= min_run else None
    ok = monotone is not None and mags[-1] < threshold
    return BoundaryCheckReport(samples, monotone, VANISHES if ok else INCONCLUSIVE)


def boundary_partials(spec: SeriesSpec, n_max: int) -> list[list[tuple[int, str]]]:
    """Partial values of every boundary descriptor of a series, N = 1..n_max."""
    out = []
    for desc in spec.boundary:
        out.append([(N, _decimal_str(desc.partial(N))) for N in range(1, n_max + 1)])
    return out


# -- identities ------------------------------------------------------------------

@dataclass
class IdentityReport:
    residual: Decimal
    lhs: Decimal
    rhs: Decimal
    truncation: int
    digits: int

    def to_json(self) -> dict:
        return {
            "residual": str(self.residual),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "truncation": self.truncation,
            "digits": self.digits,
        }


def verify_identity_numeric(spec: IdentitySpec, digits: int, truncation: int) -> IdentityReport:
    """|LHS - RHS| of the axis-sum identity, each term rounded to ``digits``."""
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    F, G = spec.pair.F, spec.pair.G
    N = truncation
    with localcontext() as ctx:
        ctx.prec = digits

        def dec(T, n, k):
            x = eval_exact(T, {"n": n, "k": k}).as_fraction()
            return Decimal(x.numerator) / Decimal(x.denominator)

        lhs = sum((dec(F, 0, k) for k in range(N + 1)), Decimal(0))
        lhs -= sum((dec(F, N + 1, k) for k in range(N + 1)), Decimal(0))
        rhs = sum((dec(G, n, 0) for n in range(N + 1)), Decimal(0))
        rhs -= sum((dec(G, n, N + 1) for n in range(N + 1)), Decimal(0))
        residual = abs(lhs - rhs)
    return IdentityReport(residual, lhs, rhs, truncation, digits)


# -- convergence table -------------------------------------------------------------

@dataclass
class GridRow:
    s: int
    t: int
    digits_per_term: float | None
    terms_for_100_digits: int | None
    value: str | None
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "digitsPerTerm": self.digits_per_term,
            "termsFor100Digits": self.terms_for_100_digits,
            "value": self.value,
            "error": self.error,
        }


def convergence_grid(pair: WZForm, s_range, t_range, digits: int) -> list[GridRow]:
    """Measured convergence of every (s, t) acceleration, in (s, t) order."""
    rows = []
    for s in s_range:
        for t in t_range:
            try:
                spec = series_formula3(pair, s, t)
                rep = eval_series(spec, digits)
                rep100 = rep if digits == 100 else eval_series(spec, 100)
                rows.append(GridRow(s, t, float(rep.digits_per_term), rep100.terms_used, rep.value))
            except (WZAccelError, ValueError) as exc:
                rows.append(GridRow(s, t, None, None, None, f"{type(exc).__name__}: {exc}"))
    return rows


def format_grid(rows: Sequence[GridRow]) -> str:
    header = ("s", "t", "digitsPerTerm", "termsFor100Digits", "value")
    lines = [header]
    for r in rows:
        if r.error:
            lines.append((str(r.s), str(r.t), "-", "-", r.error))
        else:
            lines.append((str(r.s), str(r.t), f"{r.digits_per_term:.4f}", str(r.terms_for_100_digits), r.value))
    widths = [max(len(line[i]) for line in lines) for i in range(4)]
    return "\n".join(
        "  ".join(c.rjust(w) for c, w in zip(line[:4], widths)) + "  " + line[4] for line in lines
    )
