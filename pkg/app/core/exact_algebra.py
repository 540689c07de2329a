"""
Exact arithmetic kernels: polynomials in q with rational coefficients,
dense truncated power series in t with integer coefficients, and the
rational closed forms t^a / prod(1 - t^k) they are compared against.
All values are immutable.
"""

import logging
from dataclasses import dataclass
from math import factorial, prod
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from sympy import QQ, Poly, Rational, Symbol

from app.core.errors import NegativeDimensionError, StrataArgumentError, TruncationError

logger = logging.getLogger(__name__)

q = Symbol("q")

Scalar = Union[int, Rational]


def _as_rational(value: Union[int, str, Rational]) -> Rational:
    return Rational(value)


def render_rational(value: Rational) -> str:
    """Exact "num/den" rendering; denominators are always shown."""
    value = Rational(value)
    return f"{value.p}/{value.q}"


# ---------------------------------------------------------------------------
# Polynomials in q
# ---------------------------------------------------------------------------

class QPolynomial:
    """
    A polynomial in q over QQ. Thin immutable wrapper around a sympy Poly
    so the rest of the code never has to think about gens or domains.
    """

    __slots__ = ("_poly",)

    def __init__(self, poly: Poly):
        self._poly = poly

    # construction ---------------------------------------------------------

    @classmethod
    def from_coefficients(cls, coefficients: Mapping[int, Union[int, str, Rational]]) -> "QPolynomial":
        rep = {}
        for exponent, value in coefficients.items():
            if exponent < 0:
                raise StrataArgumentError(f"negative exponent {exponent}")
            coeff = _as_rational(value)
            if coeff != 0:
                rep[(int(exponent),)] = coeff
        if not rep:
            return cls(Poly(0, q, domain=QQ))
        return cls(Poly.from_dict(rep, q, domain=QQ))

    @classmethod
    def constant(cls, value: Scalar) -> "QPolynomial":
        return cls(Poly(_as_rational(value), q, domain=QQ))

    @classmethod
    def zero(cls) -> "QPolynomial":
        return cls.constant(0)

    @classmethod
    def one(cls) -> "QPolynomial":
        return cls.constant(1)

    @classmethod
    def q_power(cls, k: int) -> "QPolynomial":
        return cls.from_coefficients({k: 1})

    @classmethod
    def geometric_sum(cls, k: int) -> "QPolynomial":
        """1 + q + ... + q^(k-1); zero for k = 0."""
        return cls.from_coefficients({i: 1 for i in range(k)})

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other: Union["QPolynomial", Scalar]) -> "QPolynomial":
        if isinstance(other, QPolynomial):
            return other
        return QPolynomial.constant(other)

    def __add__(self, other):
        return QPolynomial(self._poly + self._coerce(other)._poly)

    __radd__ = __add__

    def __sub__(self, other):
        return QPolynomial(self._poly - self._coerce(other)._poly)

    def __rsub__(self, other):
        return QPolynomial(self._coerce(other)._poly - self._poly)

    def __mul__(self, other):
        return QPolynomial(self._poly * self._coerce(other)._poly)

    __rmul__ = __mul__

    def __neg__(self):
        return QPolynomial(-self._poly)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise StrataArgumentError("negative powers are not polynomials")
        return QPolynomial(self._poly ** exponent)

    def exact_div(self, other: "QPolynomial") -> "QPolynomial":
        """Polynomial division that must leave no remainder."""
        quotient, remainder = self._poly.div(self._coerce(other)._poly)
        if not remainder.is_zero:
            raise StrataArgumentError(f"division is not exact (remainder {remainder.as_expr()})")
        return QPolynomial(quotient)

    # inspection -----------------------------------------------------------

    def coefficients(self) -> Dict[int, Rational]:
        """exponent -> coefficient, nonzero entries only."""
        return {
            monom[0]: Rational(coeff)
            for monom, coeff in self._poly.terms()
            if coeff != 0
        }

    def coefficient(self, k: int) -> Rational:
        return self.coefficients().get(k, Rational(0))

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def degree(self) -> Optional[int]:
        """Largest exponent with a nonzero coefficient; None for the zero polynomial."""
        if self.is_zero:
            return None
        return max(self.coefficients())

    def leading_term(self) -> Tuple[int, Rational]:
        if self.is_zero:
            raise StrataArgumentError("the zero polynomial has no leading term")
        k = self.degree
        return k, self.coefficient(k)

    def evaluate(self, x: Scalar) -> Rational:
        return Rational(self._poly.eval(_as_rational(x)))

    def evaluate_int(self, x: int) -> int:
        """Value at an integer, which must itself be an integer."""
        value = self.evaluate(x)
        if value.q != 1:
            raise StrataArgumentError(f"value at q={x} is {value}, not an integer")
        return int(value)

    def is_integer_valued(self, points: Iterable[int]) -> bool:
        return all(self.evaluate(x).q == 1 for x in points)

    # comparison / output --------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, QPolynomial):
            return self.coefficients() == other.coefficients()
        if isinstance(other, (int, Rational)):
            return self.coefficients() == QPolynomial.constant(other).coefficients()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coefficients().items())))

    def to_dict(self) -> Dict[str, str]:
        return {str(k): render_rational(c) for k, c in sorted(self.coefficients().items(), reverse=True)}

    def render(self) -> str:
        if self.is_zero:
            return "0"
        return str(self._poly.as_expr()).replace("**", "^")

    def __repr__(self) -> str:
        return f"QPolynomial({self.render()})"


def multiset_binomial(value: Union[int, QPolynomial], m: int) -> Union[int, QPolynomial]:
    """
    prod_{i<m} (value + i) / m!, the number of size-m multisets from `value`
    objects. Works on integers (exact, any sign) and on QPolynomials.
    """
    if not isinstance(m, int) or m < 0:
        raise StrataArgumentError(f"m must be a nonnegative integer, got {m!r}")
    if isinstance(value, QPolynomial):
        if m == 0:
            return QPolynomial.one()
        numerator = QPolynomial.one()
        for i in range(m):
            numerator = numerator * (value + i)
        return numerator * Rational(1, factorial(m))
    numerator = prod(value + i for i in range(m))
    # a product of m consecutive integers is divisible by m!
    return numerator // factorial(m)


# ---------------------------------------------------------------------------
# Truncated power series in t
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """
    Dense integer coefficients c_0..c_T of a power series known through t^T.

    Reading a coefficient above T raises TruncationError; it is never a
    silent zero.
    """

    coeffs: Tuple[int, ...]
    trunc: int

    def __post_init__(self):
        if self.trunc < 0:
            raise StrataArgumentError(f"truncation order must be >= 0, got {self.trunc}")
        if len(self.coeffs) != self.trunc + 1:
            raise StrataArgumentError(
                f"expected {self.trunc + 1} coefficients for trunc {self.trunc}, got {len(self.coeffs)}"
            )

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int) -> "TruncatedSeries":
        return cls((0,) * (trunc + 1), trunc)

    @classmethod
    def one(cls, trunc: int) -> "TruncatedSeries":
        return cls.monomial(0, trunc)

    @classmethod
    def monomial(cls, k: int, trunc: int, coeff: int = 1) -> "TruncatedSeries":
        coeffs = [0] * (trunc + 1)
        if 0 <= k <= trunc:
            coeffs[k] = coeff
        return cls(tuple(coeffs), trunc)

    @classmethod
    def from_dict(cls, terms: Mapping[int, int], trunc: int) -> "TruncatedSeries":
        coeffs = [0] * (trunc + 1)
        for k, c in terms.items():
            if k < 0:
                raise StrataArgumentError(f"negative degree {k}")
            if k <= trunc:
                coeffs[k] = int(c)
        return cls(tuple(coeffs), trunc)

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "TruncatedSeries":
        values = tuple(int(c) for c in coeffs)
        return cls(values, len(values) - 1)

    # reading --------------------------------------------------------------

    def coefficient(self, k: int) -> int:
        if k < 0:
            return 0
        if k > self.trunc:
            raise TruncationError(k, self.trunc)
        return self.coeffs[k]

    __getitem__ = coefficient

    def coefficients_to(self, trunc: int) -> Tuple[int, ...]:
        """c_0..c_trunc; raises TruncationError past the known range."""
        if trunc > self.trunc:
            raise TruncationError(trunc, self.trunc)
        return self.coeffs[: trunc + 1]

    def items(self) -> Iterator[Tuple[int, int]]:
        """(degree, coefficient) for nonzero coefficients."""
        return ((k, c) for k, c in enumerate(self.coeffs) if c)

    def lowest_degree(self) -> Optional[int]:
        """Least degree with a nonzero coefficient, None if zero through trunc."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def _valuation_floor(self) -> int:
        low = self.lowest_degree()
        return self.trunc + 1 if low is None else low

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    # arithmetic -----------------------------------------------------------

    def truncate(self, trunc: int) -> "TruncatedSeries":
        if trunc > self.trunc:
            raise TruncationError(trunc, self.trunc)
        return TruncatedSeries(self.coeffs[: trunc + 1], trunc)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        t = min(self.trunc, other.trunc)
        return TruncatedSeries(tuple(self.coeffs[k] + other.coeffs[k] for k in range(t + 1)), t)

    def sub(self, other: "TruncatedSeries", as_dimension: bool = False) -> "TruncatedSeries":
        """
        Coefficientwise difference. With as_dimension=True the caller asserts
        the result is a dimension series, and a negative coefficient raises.
        """
        t = min(self.trunc, other.trunc)
        values = tuple(self.coeffs[k] - other.coeffs[k] for k in range(t + 1))
        if as_dimension:
            for k, value in enumerate(values):
                if value < 0:
                    raise NegativeDimensionError(k, value)
        return TruncatedSeries(values, t)

    __sub__ = sub

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        # Known through min(T_a + v_b, T_b + v_a), v the valuation lower bound.
        t = min(self.trunc + other._valuation_floor(), other.trunc + self._valuation_floor())
        out = [0] * (t + 1)
        for i, a in enumerate(self.coeffs):
            if not a or i > t:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > t:
                    break
                if b:
                    out[i + j] += a * b
        return TruncatedSeries(tuple(out), t)

    def scale(self, factor: int) -> "TruncatedSeries":
        return TruncatedSeries(tuple(factor * c for c in self.coeffs), self.trunc)

    def shift(self, by: int) -> "TruncatedSeries":
        """Multiply by t^by (suspension). Negative shifts must drop only zeros."""
        if by >= 0:
            return TruncatedSeries((0,) * by + self.coeffs, self.trunc + by)
        drop = -by
        if drop > self.trunc:
            raise StrataArgumentError(f"cannot shift a series truncated at {self.trunc} by {by}")
        if any(self.coeffs[:drop]):
            raise StrataArgumentError(f"shift by {by} would discard nonzero low-degree terms")
        return TruncatedSeries(self.coeffs[drop:], self.trunc - drop)

    # comparison -----------------------------------------------------------

    def equal_through(self, other: "TruncatedSeries", rho: int) -> bool:
        return all(self.coefficient(k) == other.coefficient(k) for k in range(rho + 1))

    def first_difference(self, other: "TruncatedSeries") -> Optional[int]:
        t = min(self.trunc, other.trunc)
        for k in range(t + 1):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    def to_dict(self) -> Dict[str, object]:
        return {"trunc": self.trunc, "coeffs": [str(c) for c in self.coeffs]}

    def render(self) -> str:
        terms = []
        for k, c in self.items():
            mono = "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if c == 1:
                terms.append(mono)
            elif k == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}{mono}")
        body = "+".join(terms).replace("+-", "-") if terms else "0"
        return f"{body} + O(t^{self.trunc + 1})"


def tensor(*factors: TruncatedSeries) -> TruncatedSeries:
    """Tensor product of graded dimension series (coefficient convolution)."""
    if not factors:
        raise StrataArgumentError("tensor needs at least one factor")
    result = factors[0]
    for factor in factors[1:]:
        result = result * factor
    return result


def compare_series(a: TruncatedSeries, b: TruncatedSeries) -> Optional[int]:
    """First degree where a and b differ within their common truncation, else None."""
    return a.first_difference(b)


# ---------------------------------------------------------------------------
# Rational closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalFormSeries:
    """t^shift / prod_i (1 - t^{k_i})."""

    shift: int
    denominator_exponents: Tuple[int, ...]

    def __post_init__(self):
        if self.shift < 0:
            raise StrataArgumentError(f"shift must be >= 0, got {self.shift}")
        if any(k < 1 for k in self.denominator_exponents):
            raise StrataArgumentError(f"denominator exponents must be >= 1, got {self.denominator_exponents}")

    @classmethod
    def from_config(cls, entry: Mapping[str, object]) -> "RationalFormSeries":
        return cls(int(entry["shift"]), tuple(int(k) for k in entry["denominators"]))

    def expand(self, trunc: int) -> TruncatedSeries:
        """Exact expansion through t^trunc: divide by each (1 - t^k) as a strided prefix sum."""
        if trunc < 0:
            raise StrataArgumentError(f"order must be >= 0, got {trunc}")
        coeffs = [0] * (trunc + 1)
        if self.shift <= trunc:
            coeffs[self.shift] = 1
        for k in self.denominator_exponents:
            for i in range(k, trunc + 1):
                coeffs[i] += coeffs[i - k]
        return TruncatedSeries(tuple(coeffs), trunc)

    def denominator_polynomial(self) -> List[int]:
        """Coefficients of prod_i (1 - t^{k_i}), lowest degree first."""
        poly = [1]
        for k in self.denominator_exponents:
            nxt = poly + [0] * k
            for i, c in enumerate(poly):
                nxt[i + k] -= c
            poly = nxt
        return poly

    def long_division(self, trunc: int) -> TruncatedSeries:
        """Reference expansion by naive long division against the expanded denominator."""
        den = self.denominator_polynomial()
        out = [0] * (trunc + 1)
        for i in range(trunc + 1):
            acc = 1 if i == self.shift else 0
            for j in range(1, min(i, len(den) - 1) + 1):
                acc -= den[j] * out[i - j]
            out[i] = acc  # den[0] == 1
        return TruncatedSeries(tuple(out), trunc)

    def render(self) -> str:
        num = "1" if self.shift == 0 else f"t^{self.shift}"
        if not self.denominator_exponents:
            return num
        factors = "".join(f"(1-t^{k})" for k in self.denominator_exponents)
        if len(self.denominator_exponents) == 1:
            return f"{num}/{factors}"
        return f"{num}/({factors})"


def expand_rational_form(form: RationalFormSeries, trunc: int) -> TruncatedSeries:
    """Expansion of a registered closed form through t^trunc; the entry point the graded engine uses."""
    return form.expand(trunc)
