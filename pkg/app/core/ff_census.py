"""
Counting shadow of the stratification of Poly_{d,n} by factorization type.

The same recursion runs over two value kinds:
  - QPolynomial: |Irr_{d,n}(F_q)| as an exact polynomial in q;
  - int: compactly supported Euler characteristics over C.
Stratum values are products of multiset coefficients of lower-degree
irreducible values; Irr is solved for as the singleton stratum.
"""

import logging
import threading
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, Generic, List, Optional, Tuple, TypeVar

from sympy import Rational, divisors, isprime, mobius

from app.core import config
from app.core.errors import StrataArgumentError
from app.core.exact_algebra import QPolynomial, multiset_binomial, render_rational
from app.core.parallel import ordered_map
from app.core.partitions import Partition, enumerate_partitions

logger = logging.getLogger(__name__)

V = TypeVar("V")


def monomial_count(d: int, n: int) -> int:
    """B(d, n) = C(d+n, n), monomials of degree <= d in n variables; B(0, n) = 1."""
    return comb(d + n, n)


def _check_dn(d: int, n: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise StrataArgumentError(f"d must be a positive integer, got {d!r}")
    if not isinstance(n, int) or n < 1:
        raise StrataArgumentError(f"n must be a positive integer, got {n!r}")


# ---------------------------------------------------------------------------
# Generic recursion
# ---------------------------------------------------------------------------

@dataclass
class StratificationRecursion(Generic[V]):
    """
    Memoised Irr values for one n. `ambient(d)` is the value of the whole of
    Poly_{d,n}; `one` is the empty product. The memo is a single-writer-per-key
    cache: a racing fill computes the same value, the first write wins.
    """

    n: int
    ambient: Callable[[int], V]
    one: V
    memo: Dict[int, V] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def irr(self, d: int) -> V:
        with self._lock:
            if d in self.memo:
                return self.memo[d]
        value = self.ambient(d)
        if d > 1:
            for lam in enumerate_partitions(d, 2):
                value = value - self.stratum(lam)
        with self._lock:
            return self.memo.setdefault(d, value)

    def stratum(self, lam: Partition) -> V:
        value = self.one
        for j, m in sorted(lam.multiplicities.items()):
            value = value * multiset_binomial(self.irr(j), m)
        return value


@dataclass
class CountContext:
    """Exact point counts for fixed n, memoised over d."""

    n: int
    recursion: StratificationRecursion = None

    def __post_init__(self):
        _check_dn(1, self.n)
        if self.recursion is None:
            self.recursion = StratificationRecursion(
                n=self.n,
                ambient=lambda d: poly_exact_count(d, self.n),
                one=QPolynomial.one(),
            )

    @property
    def memo(self) -> Dict[int, QPolynomial]:
        return self.recursion.memo

    def irr_count(self, d: int) -> QPolynomial:
        return self.recursion.irr(d)

    def stratum_count(self, lam: Partition) -> QPolynomial:
        return self.recursion.stratum(lam)


@dataclass
class EulerContext:
    """Compactly supported Euler characteristics for fixed n, memoised over d."""

    n: int
    recursion: StratificationRecursion = None

    def __post_init__(self):
        _check_dn(1, self.n)
        if self.recursion is None:
            self.recursion = StratificationRecursion(
                n=self.n,
                ambient=lambda d: poly_exact_euler(d, self.n),
                one=1,
            )

    def euler_char(self, d: int) -> int:
        return self.recursion.irr(d)


_count_contexts: Dict[int, CountContext] = {}
_euler_contexts: Dict[int, EulerContext] = {}
_contexts_lock = threading.Lock()


def count_context(n: int) -> CountContext:
    with _contexts_lock:
        if n not in _count_contexts:
            _count_contexts[n] = CountContext(n)
        return _count_contexts[n]


def euler_context(n: int) -> EulerContext:
    with _contexts_lock:
        if n not in _euler_contexts:
            _euler_contexts[n] = EulerContext(n)
        return _euler_contexts[n]


# ---------------------------------------------------------------------------
# Counts
# ---------------------------------------------------------------------------

def poly_exact_count(d: int, n: int) -> QPolynomial:
    """
    |Poly_{d,n}(F_q)| = (q^B(d,n) - q^B(d-1,n)) / (q - 1), by exact division.

    Raises:
        StrataArgumentError: for d < 1 or n < 1.
    """
    _check_dn(d, n)
    numerator = QPolynomial.q_power(monomial_count(d, n)) - QPolynomial.q_power(monomial_count(d - 1, n))
    return numerator.exact_div(QPolynomial.from_coefficients({1: 1, 0: -1}))


def poly_exact_euler(d: int, n: int) -> int:
    """χ_c(Poly_{d,n}(C)) = C(d+n-1, n-1)."""
    _check_dn(d, n)
    return comb(d + n - 1, n - 1)


def irr_count(d: int, n: int) -> QPolynomial:
    """|Irr_{d,n}(F_q)| as an exact polynomial in q."""
    _check_dn(d, n)
    return count_context(n).irr_count(d)


def stratum_count(lam: Partition, n: int) -> QPolynomial:
    """|T_{λ,n}(F_q)| = prod_j multiset(|Irr_{j,n}|, m_j(λ))."""
    _check_dn(lam.d, n)
    return count_context(n).stratum_count(lam)


def euler_char(d: int, n: int) -> int:
    """χ_c(Irr_{d,n}(C)) via the stratification recursion over integers."""
    _check_dn(d, n)
    return euler_context(n).euler_char(d)


def necklace_count(d: int) -> QPolynomial:
    """(1/d) Σ_{e | d} μ(e) q^{d/e}: monic irreducibles of degree d in one variable."""
    _check_dn(d, 1)
    terms: Dict[int, Rational] = {}
    for e in divisors(d):
        mu = int(mobius(e))
        if mu:
            terms[d // e] = terms.get(d // e, Rational(0)) + Rational(mu, d)
    return QPolynomial.from_coefficients(terms)


# ---------------------------------------------------------------------------
# Property reports
# ---------------------------------------------------------------------------

def partition_of_unity(d: int, n: int) -> Dict[str, object]:
    """Σ_λ stratum_count(λ, n) against poly_exact_count(d, n)."""
    total = QPolynomial.zero()
    for lam in enumerate_partitions(d):
        total = total + stratum_count(lam, n)
    expected = poly_exact_count(d, n)
    return {"d": d, "n": n, "holds": total == expected, "sum": total, "expected": expected}


def integer_valuedness_report(d: int, n: int, points: Tuple[int, ...] = config.INTEGER_SAMPLE_POINTS) -> Dict[str, object]:
    poly = irr_count(d, n)
    values = {x: poly.evaluate(x) for x in points}
    return {
        "d": d,
        "n": n,
        "values": values,
        "integer_valued": all(v.q == 1 for v in values.values()),
    }


def euler_table(d_max: int, n_max: int, threads: Optional[int] = None) -> List[Dict[str, int]]:
    """χ_c(Irr_{d,n}) for 1 <= d <= d_max, 1 <= n <= n_max, row-major in (d, n)."""
    _check_dn(d_max, n_max)
    grid = [(d, n) for d in range(1, d_max + 1) for n in range(1, n_max + 1)]
    values = ordered_map(lambda dn: euler_char(*dn), grid, threads)
    return [{"d": d, "n": n, "chi": chi} for (d, n), chi in zip(grid, values)]


# ---------------------------------------------------------------------------
# Carlitz ratios
# ---------------------------------------------------------------------------

def carlitz_limit(q: int) -> Rational:
    """1 + 1/q + 1/q^2 + ... = q / (q - 1)."""
    return Rational(q, q - 1)


@dataclass(frozen=True)
class CarlitzRow:
    d: int
    count: int
    ratio: Rational

    @property
    def decimal(self) -> str:
        return str(self.ratio.evalf(15))

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "count": str(self.count),
            "ratio": render_rational(self.ratio),
            "decimal": self.decimal,
        }


def carlitz_table(q: int, n: int, d_max: int, threads: Optional[int] = None) -> List[CarlitzRow]:
    """
    |Irr_{d,n}(F_q)| / q^{B(d,n)-1} for d = 1..d_max, as exact rationals.

    Raises:
        StrataArgumentError: if q is not prime or n < 2 (the limit needs n > 1).
    """
    if not isinstance(q, int) or not isprime(q):
        raise StrataArgumentError(f"q must be a prime, got {q!r}")
    if not isinstance(n, int) or n < 2:
        raise StrataArgumentError(
            f"the Carlitz limit 1 + 1/q + 1/q^2 + ... holds only for n > 1, got n={n}"
        )
    _check_dn(d_max, n)

    def row(d: int) -> CarlitzRow:
        count = irr_count(d, n).evaluate_int(q)
        return CarlitzRow(d, count, Rational(count, q ** (monomial_count(d, n) - 1)))

    # warm the memo in order; rows are then cheap and parallel-safe
    irr_count(d_max, n)
    return ordered_map(row, range(1, d_max + 1), threads)


# ---------------------------------------------------------------------------
# Hyde stabilization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HydeResult:
    d: int
    window: int
    n_max: int
    n0: Optional[int]
    coefficients: Optional[Tuple[Rational, ...]]
    rows: Tuple[Tuple[int, Tuple[Rational, ...]], ...]

    @property
    def found(self) -> bool:
        return self.n0 is not None

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "window": self.window,
            "n_max": self.n_max,
            "found": self.found,
            "n0": self.n0,
            "coefficients": None if self.coefficients is None else [render_rational(c) for c in self.coefficients],
            "rows": [
                {"n": n, "coefficients": [render_rational(c) for c in coeffs]}
                for n, coeffs in self.rows
            ],
        }


def hyde_stabilization(d: int, window: int, n_max: int, threads: Optional[int] = None) -> HydeResult:
    """
    Coefficients of q^0..q^window of |Irr_{d,n}| for n = d..n_max; n0 is the
    least n whose window agrees for HYDE_AGREEMENT_RUN consecutive n. A
    missing n0 is reported as not found, never guessed.
    """
    _check_dn(d, 1)
    if not isinstance(window, int) or window < 0:
        raise StrataArgumentError(f"coefficient window must be >= 0, got {window!r}")
    n_values = list(range(d, n_max + 1))

    def coefficients_for(n: int) -> Tuple[Rational, ...]:
        poly = irr_count(d, n)
        return tuple(poly.coefficient(k) for k in range(window + 1))

    rows = tuple(zip(n_values, ordered_map(coefficients_for, n_values, threads)))
    run = config.HYDE_AGREEMENT_RUN
    n0 = None
    stable = None
    for i in range(len(rows) - run + 1):
        block = [coeffs for _, coeffs in rows[i:i + run]]
        if all(coeffs == block[0] for coeffs in block):
            n0, stable = rows[i][0], block[0]
            break

    if n0 is None:
        logger.warning("hyde_stabilization | not found | d=%s window=%s n_max=%s", d, window, n_max)
    else:
        logger.info("hyde_stabilization | found | d=%s window=%s n0=%s", d, window, n0)
    return HydeResult(d, window, n_max, n0, stable, rows)
