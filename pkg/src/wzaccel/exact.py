"""Exact polynomials and rational functions over Q.

Polynomials are sparse maps from exponent tuples to ``Fraction``.  The
variable tuple is part of the value: arithmetic between polynomials with
different variable tuples raises :class:`VariableMismatch`.  Monomials are
ordered graded-lexicographically with the variable order as given.

Multivariate gcd and factorisation are delegated to sympy's sparse
polynomial rings; everything else is done here.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import NoSolution, VariableMismatch, ZeroDenominator

#: canonical global variable order
VARIABLE_ORDER = ("n", "k", "a", "m")


def canonical_variables(names: Iterable[str]) -> tuple[str, ...]:
    names = set(names)
    known = [v for v in VARIABLE_ORDER if v in names]
    return tuple(known + sorted(names - set(VARIABLE_ORDER)))


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = Fraction(c)
                if c:
                    exps = tuple(exps)
                    if len(exps) != nv:
                        raise ValueError(f"exponent vector {exps} does not match {self.variables}")
                    clean[exps] = c
        self.terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        exps = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise VariableMismatch(f"{name!r} not among {variables}")
        return cls(variables, {exps: 1})

    @classmethod
    def linear(cls, coeffs: Mapping[str, int], const, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        terms = {(0,) * len(variables): Fraction(const)}
        for v, c in coeffs.items():
            if v not in variables:
                raise VariableMismatch(f"{v!r} not among {variables}")
            terms[tuple(1 if w == v else 0 for w in variables)] = Fraction(c)
        return cls(variables, terms)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str) -> int:
        if not self.terms:
            return -1
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def involves(self, var: str) -> bool:
        if var not in self.variables:
            return False
        i = self.variables.index(var)
        return any(e[i] for e in self.terms)

    def free_variables(self) -> tuple[str, ...]:
        return tuple(v for v in self.variables if self.involves(v))

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise VariableMismatch(f"{var!r} not among {self.variables}") from None

    def coeffs_in(self, var: str) -> dict[int, "Polynomial"]:
        """Coefficients with respect to ``var``; they stay in the same ring."""
        i = self._index(var)
        out: dict[int, dict] = {}
        for exps, c in self.terms.items():
            d = exps[i]
            rest = exps[:i] + (0,) + exps[i + 1:]
            out.setdefault(d, {})[rest] = c
        return {d: Polynomial(self.variables, t) for d, t in out.items()}

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        g = 0
        l = 1
        for c in self.terms.values():
            g = gcd(g, c.numerator)
            l = lcm(l, c.denominator)
        return Fraction(g, l)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.variables, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divmod(self, divisor: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Multivariate division by a single polynomial (grlex).

        The remainder is zero iff ``divisor`` divides ``self``.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDenominator("division by the zero polynomial")
        lt_e, lt_c = divisor.leading_term()
        p = dict(self.terms)
        quot: dict = {}
        rem: dict = {}
        while p:
            e = max(p, key=_grlex_key)
            c = p[e]
            if all(a >= b for a, b in zip(e, lt_e)):
                qe = tuple(a - b for a, b in zip(e, lt_e))
                qc = c / lt_c
                quot[qe] = quot.get(qe, 0) + qc
                for de, dc in divisor.terms.items():
                    te = tuple(a + b for a, b in zip(qe, de))
                    v = p.get(te, 0) - qc * dc
                    if v:
                        p[te] = v
                    else:
                        p.pop(te, None)
            else:
                rem[e] = c
                del p[e]
        return Polynomial(self.variables, quot), Polynomial(self.variables, rem)

    def exquo(self, divisor: "Polynomial") -> "Polynomial":
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def divides(self, other: "Polynomial") -> bool:
        return not other.divmod(self)[1]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [Fraction(point[v]) if self.involves(v) else Fraction(0) for v in self.variables]
        total = Fraction(0)
        for exps, c in self.terms.items():
            t = c
            for x, e in zip(vals, exps):
                if e:
                    t *= x ** e
            total += t
        return total

    def substitute(self, mapping: Mapping[str, "Polynomial"], variables: Sequence[str]) -> "Polynomial":
        """Replace each variable by a polynomial in ``variables``.

        Variables absent from ``mapping`` must belong to ``variables`` and are
        kept as they are.
        """
        variables = tuple(variables)
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                if img.variables != variables:
                    raise VariableMismatch(f"image of {v} lives in {img.variables}, expected {variables}")
            elif self.involves(v):
                img = Polynomial.variable(v, variables)
            else:
                img = None
            images.append(img)
        powers: list[dict[int, Polynomial]] = [{} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        result = Polynomial(variables)
        for exps, c in self.terms.items():
            t = Polynomial.constant(c, variables)
            for i, e in enumerate(exps):
                if e:
                    t = t * power(i, e)
            result = result + t
        return result

    def shift(self, var: str, by: int = 1) -> "Polynomial":
        """self with ``var`` replaced by ``var + by``."""
        if by == 0 or not self.involves(var):
            return self
        img = Polynomial.variable(var, self.variables) + by
        return self.substitute({var: img}, self.variables)

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-embed into a ring with a different variable tuple."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        for v in self.free_variables():
            if v not in variables:
                raise VariableMismatch(f"{v!r} not among {variables}")
        idx = [self.variables.index(v) if v in self.variables else None for v in variables]
        terms = {
            tuple(e[i] if i is not None else 0 for i in idx): c for e, c in self.terms.items()
        }
        return Polynomial(variables, terms)

    # -- printing -----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self.variables}, {str(self)!r})"


# -- sympy bridge -----------------------------------------------------------

@lru_cache(maxsize=None)
def _zz_ring(variables: tuple[str, ...]):
    from sympy.polys.domains import ZZ
    from sympy.polys.rings import ring

    return ring(list(variables), ZZ)[0]


def _integer_part(p: Polynomial) -> tuple[Fraction, dict]:
    """Return (scale, integer coefficient dict) with p = scale * poly(dict)."""
    c = p.content()
    return c, {e: int(v / c) for e, v in p.terms.items()}


def _to_sympy(p: Polynomial):
    R = _zz_ring(p.variables)
    scale, terms = _integer_part(p)
    return scale, R.from_dict(terms)


def _from_sympy(sp, variables) -> Polynomial:
    return Polynomial(variables, {tuple(e): int(c) for e, c in sp.items()})


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive gcd with integer coefficients and positive leading coefficient."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        return Polynomial(a.variables)
    if a.is_zero():
        return primitive(b)
    if b.is_zero():
        return primitive(a)
    if a.is_constant() or b.is_constant() or not a.variables:
        return Polynomial.constant(1, a.variables)
    _, sa = _to_sympy(a)
    _, sb = _to_sympy(b)
    return primitive(_from_sympy(sa.gcd(sb), a.variables))


def primitive(p: Polynomial) -> Polynomial:
    """p scaled to coprime integer coefficients with positive grlex leading coefficient."""
    if p.is_zero():
        return p
    c = p.content()
    if p.leading_coefficient() < 0:
        c = -c
    return p.scale(1 / c)


def factor_list(p: Polynomial) -> tuple[Fraction, list[tuple[Polynomial, int]]]:
    """Irreducible factorisation over Q: p = c * prod(f**e)."""
    if p.is_zero():
        raise ValueError("cannot factor zero")
    if p.is_constant() or not p.variables:
        return p.constant_value(), []
    scale, sp = _to_sympy(p)
    cont, facs = sp.factor_list()
    out = []
    c = scale * int(cont)
    for f, e in facs:
        fp = _from_sympy(f, p.variables)
        pp = primitive(fp)
        c *= (fp.leading_coefficient() / pp.leading_coefficient()) ** e
        out.append((pp, e))
    out.sort(key=lambda fe: (fe[0].total_degree(), str(fe[0]), fe[1]))
    return c, out


# -- rational functions -----------------------------------------------------

class RationalFunction:
    """Quotient of coprime polynomials in canonical form.

    Canonical form: numerator and denominator have integer coefficients with
    no common integer factor, no common polynomial factor, and the
    denominator's grlex leading coefficient is positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None, *, _canonical: bool = False):
        if den is None:
            den = Polynomial.constant(1, num.variables)
        if _canonical:
            self.num, self.den = num, den
        else:
            r = ratfunc_normalize(num, den)
            self.num, self.den = r.num, r.den

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    @classmethod
    def constant(cls, c, variables) -> "RationalFunction":
        c = Fraction(c)
        return cls(
            Polynomial.constant(c.numerator, variables),
            Polynomial.constant(c.denominator, variables),
            _canonical=True,
        )

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls(p, Polynomial.constant(1, p.variables))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num.scale(1 / self.den.constant_value())

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other
        if isinstance(other, Polynomial):
            return RationalFunction.from_polynomial(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RationalFunction.constant(0, self.variables)
        # cross-cancel first so the products stay small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        return RationalFunction(
            self.num.exquo(g1) * other.num.exquo(g2),
            self.den.exquo(g2) * other.den.exquo(g1),
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDenominator("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDenominator(f"pole of {self} at {dict(point)}")
        return self.num.evaluate(point) / d

    def substitute(self, mapping: Mapping[str, Polynomial], variables) -> "RationalFunction":
        den = self.den.substitute(mapping, variables)
        if den.is_zero():
            raise ZeroDenominator(f"denominator of {self} vanishes identically after substitution")
        return RationalFunction(self.num.substitute(mapping, variables), den)

    def shift(self, var: str, by: int = 1) -> "RationalFunction":
        if by == 0:
            return self
        return RationalFunction(self.num.shift(var, by), self.den.shift(var, by))

    def with_variables(self, variables) -> "RationalFunction":
        return RationalFunction(
            self.num.with_variables(variables), self.den.with_variables(variables), _canonical=True
        )

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1 or not self.den.is_constant() and self.den.leading_coefficient() != 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def ratfunc_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Canonical representative of num/den."""
    num._check(den)
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    variables = num.variables
    if num.is_zero():
        return RationalFunction(
            Polynomial(variables), Polynomial.constant(1, variables), _canonical=True
        )
    if not den.is_constant() and not num.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.exquo(g)
            den = den.exquo(g)
    # clear rational coefficients and common integer content
    cn, cd = num.content(), den.content()
    scale = Fraction(1) / cd
    num = num.scale(scale)
    den = den.scale(scale)
    # now den has coprime integer coefficients; num = (cn/cd) * primitive
    l = Fraction(cn / cd).denominator
    if l != 1:
        num = num.scale(l)
        den = den.scale(l)
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return RationalFunction(num, den, _canonical=True)


def ratfunc_equal(a: RationalFunction, b: RationalFunction) -> bool:
    if a.variables != b.variables:
        raise VariableMismatch(f"{a.variables} vs {b.variables}")
    return a.num * b.den == b.num * a.den


# -- linear algebra ---------------------------------------------------------

class LinearSolution(NamedTuple):
    values: list
    free: tuple[int, ...]

    @property
    def underdetermined(self) -> bool:
        return bool(self.free)


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence, zero=Fraction(0)) -> LinearSolution:
    """Solve ``matrix @ x = rhs`` exactly by Gauss-Jordan elimination.

    Entries may be any exact field elements (``Fraction`` or
    :class:`RationalFunction`).  Free variables are set to ``zero``.
    Raises :class:`NoSolution` when the system is inconsistent.
    """
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    if len(rows) != len(rhs):
        raise ValueError("matrix and rhs sizes differ")
    ncols = len(matrix[0]) if matrix else 0
    if any(len(r) != ncols + 1 for r in rows):
        raise ValueError("matrix is not rectangular")

    pivots = []
    r = 0
    for c in range(ncols):
        # prefer the structurally simplest pivot to limit expression swell
        best = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                size = _size(rows[i][c])
                if best is None or size < best[0]:
                    best = (size, i)
        if best is None:
            continue
        i = best[1]
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][-1]:
            raise NoSolution("inconsistent linear system")
    x = [zero] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    free = tuple(c for c in range(ncols) if c not in pivots)
    return LinearSolution(x, free)


def _size(x) -> int:
    if isinstance(x, RationalFunction):
        return len(x.num.terms) + len(x.den.terms)
    return 0
