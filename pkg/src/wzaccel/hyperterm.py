"""Proper hypergeometric terms.

A :class:`ProperTerm` is ``constant * prod(base**var) * prefactor *
prod(form! ** exponent)`` where each ``form`` is an integer-linear form in
the term's variables and ``prefactor`` is a rational function.

Evaluation follows the reciprocal-Gamma convention: a factorial in the
denominator at a negative integer makes the whole term zero, a factorial in
the numerator at a negative integer makes it undefined.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    NonIntegerSubstitution,
    NotSimilar,
    PairFormatError,
    UndefinedTerm,
    VariableMismatch,
    ZeroDenominator,
    ZeroTerm,
)
from .exact import (
    VARIABLE_ORDER,
    Polynomial,
    RationalFunction,
    primitive,
)


def _var_rank(v: str):
    return (VARIABLE_ORDER.index(v), v) if v in VARIABLE_ORDER else (len(VARIABLE_ORDER), v)


class LinearForm:
    """Integer-linear form ``sum(c_v * v) + const`` stored sparsely."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = (), const: int = 0):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean = []
        for v, c in items:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise NonIntegerSubstitution(f"non-integer coefficient {c} for {v}")
                c = c.numerator
            if not isinstance(c, int):
                raise NonIntegerSubstitution(f"non-integer coefficient {c!r} for {v}")
            if c:
                clean.append((v, c))
        if isinstance(const, Fraction):
            if const.denominator != 1:
                raise NonIntegerSubstitution(f"non-integer constant {const}")
            const = const.numerator
        if not isinstance(const, int):
            raise NonIntegerSubstitution(f"non-integer constant {const!r}")
        merged: dict[str, int] = {}
        for v, c in clean:
            merged[v] = merged.get(v, 0) + c
        self.coeffs = tuple(sorted(((v, c) for v, c in merged.items() if c), key=lambda vc: _var_rank(vc[0])))
        self.const = const

    @classmethod
    def var(cls, name: str, coeff: int = 1, const: int = 0) -> "LinearForm":
        return cls({name: coeff}, const)

    def coefficient(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    @property
    def direction(self) -> tuple[tuple[str, int], ...]:
        return self.coeffs

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def evaluate(self, point: Mapping[str, int]) -> int:
        return self.const + sum(c * point[v] for v, c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            return LinearForm(self.coeffs, self.const + other)
        if isinstance(other, LinearForm):
            return LinearForm(self.coeffs + other.coeffs, self.const + other.const)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return LinearForm(self.coeffs, self.const - other)
        if isinstance(other, LinearForm):
            return self + other * -1
        return NotImplemented

    def __mul__(self, k: int):
        return LinearForm([(v, c * k) for v, c in self.coeffs], self.const * k)

    __rmul__ = __mul__

    def substitute(self, mapping: Mapping[str, "LinearForm"]) -> "LinearForm":
        out = LinearForm((), self.const)
        for v, c in self.coeffs:
            out = out + (mapping[v] * c if v in mapping else LinearForm({v: c}))
        return out

    def shift(self, var: str, by: int) -> "LinearForm":
        return LinearForm(self.coeffs, self.const + by * self.coefficient(var))

    def to_polynomial(self, variables: Sequence[str]) -> Polynomial:
        return Polynomial.linear(dict(self.coeffs), self.const, variables)

    def sort_key(self):
        return (tuple((_var_rank(v), c) for v, c in self.coeffs), self.const)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs and self.const == other.const

    def __hash__(self):
        return hash((self.coeffs, self.const))

    def __str__(self):
        parts = []
        for v, c in self.coeffs:
            mag = abs(c)
            body = v if mag == 1 else f"{mag}*{v}"
            parts.append(("-" if c < 0 else "+", body))
        if self.const or not parts:
            parts.append(("-" if self.const < 0 else "+", str(abs(self.const))))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LinearForm({str(self)!r})"


class TermValue(NamedTuple):
    """Result of exact evaluation: ``tag`` is 'finite', 'zero' or 'undefined'."""

    tag: str
    value: Fraction | None = None

    @property
    def is_finite(self) -> bool:
        return self.tag == "finite"

    def as_fraction(self) -> Fraction:
        if self.tag == "undefined":
            raise UndefinedTerm("term is undefined at this point")
        if self.tag == "zero":
            return Fraction(0)
        return self.value


ZERO = TermValue("zero")
UNDEFINED = TermValue("undefined")


def Finite(x) -> TermValue:
    return TermValue("finite", Fraction(x))


class ProperTerm:
    """Immutable, canonicalised proper hypergeometric term."""

    __slots__ = ("variables", "constant", "geometric", "prefactor", "factors")

    def __init__(
        self,
        variables: Sequence[str],
        constant=1,
        geometric: Mapping[str, object] | None = None,
        prefactor: RationalFunction | Polynomial | None = None,
        factors: Iterable[tuple[LinearForm, int]] = (),
    ):
        variables = tuple(variables)
        constant = Fraction(constant)
        if prefactor is None:
            prefactor = RationalFunction.constant(1, variables)
        elif isinstance(prefactor, Polynomial):
            prefactor = RationalFunction.from_polynomial(prefactor)
        if prefactor.variables != variables:
            raise VariableMismatch(f"prefactor in {prefactor.variables}, term in {variables}")

        geo: dict[str, Fraction] = {}
        for v, b in (geometric or {}).items():
            b = Fraction(b)
            if b == 0:
                raise ValueError("geometric base must be nonzero")
            if v not in variables:
                raise VariableMismatch(f"geometric variable {v!r} not among {variables}")
            if b != 1:
                geo[v] = b

        merged: dict[LinearForm, int] = {}
        for form, e in factors:
            for v in form.variables():
                if v not in variables:
                    raise VariableMismatch(f"factor variable {v!r} not among {variables}")
            merged[form] = merged.get(form, 0) + int(e)
        facs = []
        for form, e in merged.items():
            if e == 0:
                continue
            if not form.coeffs and form.const >= 0:
                f = factorial(form.const)
                constant *= Fraction(f) ** e
                continue
            facs.append((form, e))

        if constant == 0 or prefactor.is_zero():
            constant = Fraction(0)
            prefactor = RationalFunction.constant(0, variables)
            geo = {}
            facs = []
        else:
            num, den = prefactor.num, prefactor.den
            pn, pd = primitive(num), primitive(den)
            constant *= num.leading_coefficient() / pn.leading_coefficient()
            constant /= den.leading_coefficient() / pd.leading_coefficient()
            prefactor = RationalFunction(pn, pd, _canonical=True)

        facs.sort(key=lambda fe: (fe[0].sort_key(), fe[1]))
        self.variables = variables
        self.constant = constant
        self.geometric = tuple(sorted(geo.items(), key=lambda vb: _var_rank(vb[0])))
        self.prefactor = prefactor
        self.factors = tuple(facs)

    # -- conveniences -------------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "ProperTerm":
        return cls(variables, 0)

    def is_zero(self) -> bool:
        return self.constant == 0

    def geometric_map(self) -> dict[str, Fraction]:
        return dict(self.geometric)

    def replace(self, **kw) -> "ProperTerm":
        args = dict(
            variables=self.variables,
            constant=self.constant,
            geometric=dict(self.geometric),
            prefactor=self.prefactor,
            factors=self.factors,
        )
        args.update(kw)
        return ProperTerm(**args)

    def scaled(self, c) -> "ProperTerm":
        return self.replace(constant=self.constant * Fraction(c))

    def __neg__(self):
        return self.scaled(-1)

    def times(self, r: RationalFunction | Polynomial) -> "ProperTerm":
        """Multiply the prefactor by a rational function."""
        if isinstance(r, Polynomial):
            r = RationalFunction.from_polynomial(r)
        return self.replace(prefactor=self.prefactor * r)

    def with_variables(self, variables: Sequence[str]) -> "ProperTerm":
        variables = tuple(variables)
        return self.replace(variables=variables, prefactor=self.prefactor.with_variables(variables))

    def __eq__(self, other):
        if not isinstance(other, ProperTerm):
            return NotImplemented
        return (
            self.variables == other.variables
            and self.constant == other.constant
            and self.geometric == other.geometric
            and self.prefactor == other.prefactor
            and self.factors == other.factors
        )

    def __hash__(self):
        return hash((self.variables, self.constant, self.geometric, self.prefactor, self.factors))

    def __call__(self, *args, **kwargs) -> TermValue:
        point = dict(zip(self.variables, args))
        point.update(kwargs)
        return eval_exact(self, point)

    def __str__(self):
        return format_term(self)

    def __repr__(self):
        return f"ProperTerm({format_term(self)!r})"


# -- evaluation ---------------------------------------------------------------

def eval_exact(T: ProperTerm, point: Mapping[str, int]) -> TermValue:
    missing = [v for v in T.variables if v not in point]
    if missing:
        raise VariableMismatch(f"no value for {missing}")
    if T.is_zero():
        return Finite(0)
    zero = undefined = False
    args = []
    for form, e in T.factors:
        x = form.evaluate(point)
        if x < 0:
            if e < 0:
                zero = True
            else:
                undefined = True
        args.append(x)
    if zero:
        return ZERO
    if undefined:
        return UNDEFINED
    den = T.prefactor.den.evaluate(point)
    if den == 0:
        return UNDEFINED
    value = T.constant * T.prefactor.num.evaluate(point) / den
    for v, b in T.geometric:
        value *= b ** point[v]
    num_int, den_int = 1, 1
    for x, (_, e) in zip(args, T.factors):
        f = factorial(x)
        if e > 0:
            num_int *= f ** e
        else:
            den_int *= f ** (-e)
    return Finite(value * Fraction(num_int, den_int))


# -- shift ratios -------------------------------------------------------------

def _rising(form: LinearForm, lo: int, hi: int, variables) -> Polynomial:
    """prod_{i=lo}^{hi} (form + i), empty product = 1."""
    p = Polynomial.constant(1, variables)
    base = form.to_polynomial(variables)
    for i in range(lo, hi + 1):
        p = p * (base + i)
    return p


def _factorial_ratio(form: LinearForm, delta: int, e: int, variables) -> tuple[Polynomial, Polynomial]:
    """((form + delta)! / form!) ** e as (numerator, denominator) polynomials."""
    one = Polynomial.constant(1, variables)
    if delta == 0 or e == 0:
        return one, one
    if delta > 0:
        p = _rising(form, 1, delta, variables)
        num, den = p, one
    else:
        p = _rising(form, delta + 1, 0, variables)
        num, den = one, p
    if e < 0:
        num, den = den, num
    return num ** abs(e), den ** abs(e)


def shift_ratio(T: ProperTerm, var: str) -> RationalFunction:
    """T(var + 1) / T as a canonical rational function."""
    if var not in T.variables:
        raise VariableMismatch(f"{var!r} not among {T.variables}")
    V = T.variables
    if T.is_zero():
        raise ZeroTerm("shift ratio of the zero term")
    num = T.prefactor.num.shift(var, 1) * T.prefactor.den
    den = T.prefactor.den.shift(var, 1) * T.prefactor.num
    base = T.geometric_map().get(var, Fraction(1))
    num = num.scale(base)
    for form, e in T.factors:
        p, q = _factorial_ratio(form, form.coefficient(var), e, V)
        num, den = num * p, den * q
    return RationalFunction(num, den)


# -- substitution -------------------------------------------------------------

def substitute_affine(
    T: ProperTerm, mapping: Mapping[str, LinearForm], variables: Sequence[str] | None = None
) -> ProperTerm:
    """Compose T with an integer-affine change of variables.

    ``mapping`` sends each old variable to a :class:`LinearForm` in the new
    variables; unmapped old variables are carried over unchanged.
    """
    mapping = {v: _as_form(f) for v, f in mapping.items()}
    if variables is None:
        names = {v for v in T.variables if v not in mapping}
        for f in mapping.values():
            names.update(f.variables())
        variables = tuple(sorted(names, key=_var_rank))
    variables = tuple(variables)
    for v in T.variables:
        if v not in mapping and v not in variables:
            raise VariableMismatch(f"{v!r} is neither mapped nor kept")
    for f in mapping.values():
        for v in f.variables():
            if v not in variables:
                raise VariableMismatch(f"image variable {v!r} not among {variables}")

    if T.is_zero():
        return ProperTerm.zero(variables)

    constant = T.constant
    geo: dict[str, Fraction] = {}
    for v, b in T.geometric:
        f = mapping.get(v, LinearForm.var(v))
        constant *= b ** f.const
        for w, c in f.coeffs:
            geo[w] = geo.get(w, Fraction(1)) * b ** c

    poly_map = {v: f.to_polynomial(variables) for v, f in mapping.items()}
    for v in T.variables:
        if v not in mapping:
            poly_map[v] = Polynomial.variable(v, variables)
    num = T.prefactor.num.substitute(poly_map, variables)
    den = T.prefactor.den.substitute(poly_map, variables)
    if den.is_zero():
        raise ZeroDenominator("prefactor denominator vanishes identically under the substitution")

    factors = [(form.substitute(mapping), e) for form, e in T.factors]
    return ProperTerm(variables, constant, geo, RationalFunction(num, den), factors)


def _as_form(f) -> LinearForm:
    if isinstance(f, LinearForm):
        return f
    if isinstance(f, int):
        return LinearForm((), f)
    if isinstance(f, str):
        return LinearForm.var(f)
    if isinstance(f, tuple) and len(f) == 2:
        return LinearForm(f[0], f[1])
    raise NonIntegerSubstitution(f"cannot interpret {f!r} as an integer-linear form")


# -- similarity and combination ---------------------------------------------

def _classes(entries: Iterable[tuple[LinearForm, int]]) -> dict[tuple, dict[int, int]]:
    """Group factor exponents by direction: direction -> {const: exponent}."""
    out: dict[tuple, dict[int, int]] = defaultdict(dict)
    for form, e in entries:
        d = out[form.direction]
        d[form.const] = d.get(form.const, 0) + e
    return out


def _class_to_base(direction, consts: Mapping[int, int], base: int, variables):
    """Rewrite prod (L+c)!^e as (L+base)!^E * num/den; return (num, den)."""
    L = LinearForm(direction, base)
    num = Polynomial.constant(1, variables)
    den = Polynomial.constant(1, variables)
    for c, e in consts.items():
        p, q = _factorial_ratio(L, c - base, e, variables)
        num, den = num * p, den * q
    return num, den


def similarity_ratio(A: ProperTerm, B: ProperTerm) -> RationalFunction:
    """A / B as a rational function, or raise :class:`NotSimilar`."""
    if A.variables != B.variables:
        raise VariableMismatch(f"{A.variables} vs {B.variables}")
    V = A.variables
    if B.is_zero():
        raise ZeroTerm("similarity ratio against the zero term")
    if A.is_zero():
        return RationalFunction.constant(0, V)
    if A.geometric != B.geometric:
        raise NotSimilar(f"geometric parts differ: {dict(A.geometric)} vs {dict(B.geometric)}")
    classes = _classes(list(A.factors) + [(f, -e) for f, e in B.factors])
    num = A.prefactor.num * B.prefactor.den
    den = A.prefactor.den * B.prefactor.num
    for direction, consts in classes.items():
        if sum(consts.values()) != 0:
            raise NotSimilar(f"factorials along {LinearForm(direction)} do not cancel")
        p, q = _class_to_base(direction, consts, min(consts), V)
        num, den = num * p, den * q
    c = A.constant / B.constant
    return RationalFunction(num.scale(c), den)


def normal_form(T: ProperTerm) -> ProperTerm:
    """Merge factorials along each direction into one and fold linear
    prefactor factors into them where possible.

    Within a direction the factor is first moved down as long as that
    cancels a denominator factor, then up as long as that cancels a
    numerator factor.
    """
    if T.is_zero():
        return T
    V = T.variables
    classes = _classes(T.factors)
    num, den = T.prefactor.num, T.prefactor.den
    single: list[tuple[tuple, int, int]] = []
    for direction in sorted(classes, key=lambda d: LinearForm(d).sort_key()):
        consts = classes[direction]
        total = sum(consts.values())
        base = min(consts)
        p, q = _class_to_base(direction, consts, base, V)
        num, den = num * p, den * q
        if total:
            single.append((direction, base, total))
    pref = RationalFunction(num, den)
    num, den = pref.num, pref.den
    folded = []
    for direction, base, total in single:
        E = abs(total)
        L = LinearForm(direction)
        # down: (L+c)!^e -> (L+c-1)!^e multiplies the rest by (L+c)^e
        while True:
            lin = (L + base).to_polynomial(V) ** E
            target = den if total > 0 else num
            q, r = target.divmod(lin)
            if r or not direction:
                break
            if total > 0:
                den = q
            else:
                num = q
            base -= 1
        # up: (L+c)!^e -> (L+c+1)!^e divides the rest by (L+c+1)^e
        while True:
            lin = (L + (base + 1)).to_polynomial(V) ** E
            target = num if total > 0 else den
            q, r = target.divmod(lin)
            if r or not direction:
                break
            if total > 0:
                num = q
            else:
                den = q
            base += 1
        folded.append((LinearForm(direction, base), total))
    return ProperTerm(V, T.constant, dict(T.geometric), RationalFunction(num, den), folded)


def combine_similar(terms: Sequence[ProperTerm]) -> ProperTerm:
    """Sum of pairwise similar terms as a single term in normal form."""
    if not terms:
        raise ValueError("combine_similar needs at least one term")
    V = terms[0].variables
    for t in terms:
        if t.variables != V:
            raise VariableMismatch(f"{t.variables} vs {V}")
    nonzero = [t for t in terms if not t.is_zero()]
    if not nonzero:
        return ProperTerm.zero(V)
    ref = nonzero[0]
    total = RationalFunction.constant(0, V)
    for t in nonzero:
        total = total + similarity_ratio(t, ref)
    if total.is_zero():
        return ProperTerm.zero(V)
    return normal_form(ref.times(total))


# -- printing -----------------------------------------------------------------

def _paren(s: str) -> str:
    return f"({s})" if any(ch in s for ch in " +-*/") else s


def format_term(T: ProperTerm) -> str:
    if T.is_zero():
        return "0"
    top, bottom = [], []
    c = T.constant
    sign = "-" if c < 0 else ""
    c = abs(c)
    for v, b in T.geometric:
        top.append(f"{_paren(str(b))}^{v}")
    for form, e in T.factors:
        s = f"{_paren(str(form))}!"
        (top if e > 0 else bottom).append(s if abs(e) == 1 else f"{s}^{abs(e)}")
    if not T.prefactor.num.is_constant() or T.prefactor.num.constant_value() != 1:
        top.insert(len(T.geometric), _paren(str(T.prefactor.num)))
    if not T.prefactor.den.is_constant() or T.prefactor.den.constant_value() != 1:
        bottom.insert(0, _paren(str(T.prefactor.den)))
    if c.numerator != 1 or not top:
        top.insert(0, str(c.numerator))
    if c.denominator != 1:
        bottom.insert(0, str(c.denominator))
    out = sign + " * ".join(top)
    if bottom:
        out += " / " + (bottom[0] if len(bottom) == 1 else "(" + " * ".join(bottom) + ")")
    return out


# -- serialisation ------------------------------------------------------------

def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rational(s, where: str) -> Fraction:
    if not isinstance(s, str):
        raise PairFormatError(f"{where}: expected a rational string like \"p/q\", got {s!r}")
    try:
        x = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise PairFormatError(f"{where}: {s!r} is not a rational number") from None
    if str(x) != s:
        raise PairFormatError(f"{where}: {s!r} is not in canonical form (expected {str(x)!r})")
    return x


def polynomial_to_json(p: Polynomial) -> list[dict]:
    return [
        {"exponents": list(e), "coeff": format_rational(p.terms[e])}
        for e in sorted(p.terms, key=lambda e: (sum(e), e), reverse=True)
    ]


def polynomial_from_json(obj, variables, where: str) -> Polynomial:
    if not isinstance(obj, list):
        raise PairFormatError(f"{where}: expected a list of monomials")
    terms = {}
    for i, mono in enumerate(obj):
        w = f"{where}[{i}]"
        if not isinstance(mono, dict) or set(mono) != {"exponents", "coeff"}:
            raise PairFormatError(f"{w}: expected {{exponents, coeff}}")
        exps = mono["exponents"]
        if (
            not isinstance(exps, list)
            or len(exps) != len(variables)
            or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in exps)
        ):
            raise PairFormatError(f"{w}.exponents: expected {len(variables)} nonnegative integers")
        c = parse_rational(mono["coeff"], f"{w}.coeff")
        if c == 0:
            raise PairFormatError(f"{w}.coeff: zero coefficients must be omitted")
        if tuple(exps) in terms:
            raise PairFormatError(f"{w}: repeated exponent vector")
        terms[tuple(exps)] = c
    return Polynomial(variables, terms)


def term_to_json(T: ProperTerm) -> dict:
    return {
        "variables": list(T.variables),
        "constant": format_rational(T.constant),
        "geometric": {v: format_rational(b) for v, b in T.geometric},
        "prefactor": {
            "num": polynomial_to_json(T.prefactor.num),
            "den": polynomial_to_json(T.prefactor.den),
        },
        "factors": [
            {"form": {"coeffs": dict(f.coeffs), "const": f.const}, "exp": e} for f, e in T.factors
        ],
    }


def _int(x, where):
    if not isinstance(x, int) or isinstance(x, bool):
        raise PairFormatError(f"{where}: expected an integer, got {x!r}")
    return x


def term_from_json(obj, where: str = "term", default_variables=("n", "k")) -> ProperTerm:
    if not isinstance(obj, dict):
        raise PairFormatError(f"{where}: expected an object")
    allowed = {"variables", "constant", "geometric", "prefactor", "factors"}
    extra = set(obj) - allowed
    if extra:
        raise PairFormatError(f"{where}: unknown fields {sorted(extra)}")
    variables = obj.get("variables", list(default_variables))
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise PairFormatError(f"{where}.variables: expected a list of names")
    if len(set(variables)) != len(variables):
        raise PairFormatError(f"{where}.variables: repeated names")
    variables = tuple(variables)
    constant = parse_rational(obj.get("constant", "1"), f"{where}.constant")
    geo_raw = obj.get("geometric", {})
    if not isinstance(geo_raw, dict):
        raise PairFormatError(f"{where}.geometric: expected an object")
    geo = {}
    for v, b in geo_raw.items():
        if v not in variables:
            raise PairFormatError(f"{where}.geometric: unknown variable {v!r}")
        geo[v] = parse_rational(b, f"{where}.geometric.{v}")
        if geo[v] == 0:
            raise PairFormatError(f"{where}.geometric.{v}: base must be nonzero")
    pref = obj.get("prefactor")
    if pref is None:
        prefactor = RationalFunction.constant(1, variables)
    else:
        if not isinstance(pref, dict) or set(pref) - {"num", "den"}:
            raise PairFormatError(f"{where}.prefactor: expected {{num, den}}")
        one = [{"exponents": [0] * len(variables), "coeff": "1"}]
        num = polynomial_from_json(pref.get("num", one), variables, f"{where}.prefactor.num")
        den = polynomial_from_json(pref.get("den", one), variables, f"{where}.prefactor.den")
        if den.is_zero():
            raise PairFormatError(f"{where}.prefactor.den: zero denominator")
        prefactor = RationalFunction(num, den)
    facs_raw = obj.get("factors", [])
    if not isinstance(facs_raw, list):
        raise PairFormatError(f"{where}.factors: expected a list")
    factors = []
    for i, fobj in enumerate(facs_raw):
        w = f"{where}.factors[{i}]"
        if not isinstance(fobj, dict) or set(fobj) != {"form", "exp"}:
            raise PairFormatError(f"{w}: expected {{form, exp}}")
        form = fobj["form"]
        if not isinstance(form, dict) or set(form) - {"coeffs", "const"}:
            raise PairFormatError(f"{w}.form: expected {{coeffs, const}}")
        coeffs = form.get("coeffs", {})
        if not isinstance(coeffs, dict):
            raise PairFormatError(f"{w}.form.coeffs: expected an object")
        for v, c in coeffs.items():
            if v not in variables:
                raise PairFormatError(f"{w}.form.coeffs: unknown variable {v!r}")
            _int(c, f"{w}.form.coeffs.{v}")
        const = _int(form.get("const", 0), f"{w}.form.const")
        e = _int(fobj["exp"], f"{w}.exp")
        if e == 0:
            raise PairFormatError(f"{w}.exp: exponent must be nonzero")
        factors.append((LinearForm(coeffs, const), e))
    return ProperTerm(variables, constant, geo, prefactor, factors)
