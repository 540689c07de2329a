"""
Ground truth over small prime fields.

Polynomials in n variables of degree <= d are dense coefficient vectors over
the graded-lex monomial basis. Because that basis lists monomials by total
degree first, the basis for degree a is a prefix of the basis for any larger
degree, so a single base-p index

    index(f) = Σ_i c_i p^i

identifies a polynomial whatever cap it was built with. A polynomial is
normalized when its graded-lex-largest nonzero coefficient is 1; the
normalized polynomials of exact degree d are then exactly the indices in
[p^L, 2 p^L) for L over the degree-d positions of the basis.

The sieve never factors: it marks every product of two normalized
polynomials of positive degree and counts what is left.
"""

import csv
import io
import itertools
import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from sympy import isprime
from sympy.polys.orderings import grlex

from app.core import config
from app.core.errors import BudgetExceededError, InternalConsistencyError, StrataArgumentError
from app.core.ff_census import irr_count, stratum_count
from app.core.parallel import ordered_map
from app.core.partitions import Partition, enumerate_partitions

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


# ---------------------------------------------------------------------------
# Monomial basis
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> Tuple[Exponent, ...]:
    """Exponent vectors of total degree <= d in n variables, graded-lex ascending."""
    if n < 1 or d < 0:
        raise StrataArgumentError(f"need n >= 1 and d >= 0, got n={n} d={d}")
    exponents = (e for e in itertools.product(range(d + 1), repeat=n) if sum(e) <= d)
    return tuple(sorted(exponents, key=grlex))


@lru_cache(maxsize=None)
def _positions(n: int, d: int) -> Dict[Exponent, int]:
    return {e: i for i, e in enumerate(monomial_basis(n, d))}


def basis_size(d: int, n: int) -> int:
    return comb(d + n, n)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FFPolynomial:
    """A polynomial over F_p with coefficients on monomial_basis(n, d)."""

    p: int
    n: int
    d: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != basis_size(self.d, self.n):
            raise StrataArgumentError(
                f"expected {basis_size(self.d, self.n)} coefficients, got {len(self.coeffs)}"
            )
        if any(not 0 <= c < self.p for c in self.coeffs):
            raise StrataArgumentError(f"coefficients must lie in [0, {self.p})")

    @classmethod
    def from_index(cls, index: int, p: int, n: int, d: int) -> "FFPolynomial":
        coeffs = []
        for _ in range(basis_size(d, n)):
            index, c = divmod(index, p)
            coeffs.append(c)
        if index:
            raise StrataArgumentError(f"index does not fit a degree-{d} polynomial")
        return cls(p, n, d, tuple(coeffs))

    @classmethod
    def from_terms(cls, terms: Dict[Exponent, int], p: int, n: int, d: int) -> "FFPolynomial":
        positions = _positions(n, d)
        coeffs = [0] * basis_size(d, n)
        for exponent, value in terms.items():
            if exponent not in positions:
                raise StrataArgumentError(f"monomial {exponent} is not in the degree-{d} basis")
            coeffs[positions[exponent]] = value % p
        return cls(p, n, d, tuple(coeffs))

    @property
    def index(self) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * self.p + c
        return value

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lead_position(self) -> Optional[int]:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return None

    def terms(self) -> Dict[Exponent, int]:
        basis = monomial_basis(self.n, self.d)
        return {basis[i]: c for i, c in enumerate(self.coeffs) if c}

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        pieces = []
        for exponent, c in sorted(self.terms().items(), key=lambda item: grlex(item[0]), reverse=True):
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exponent) if e
            )
            if not mono:
                pieces.append(str(c))
            else:
                pieces.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(pieces)


def degree(f: FFPolynomial) -> Optional[int]:
    """Exact total degree; None for the zero polynomial."""
    lead = f.lead_position()
    if lead is None:
        return None
    return sum(monomial_basis(f.n, f.d)[lead])


def scale(f: FFPolynomial, c: int) -> FFPolynomial:
    return FFPolynomial(f.p, f.n, f.d, tuple((c * x) % f.p for x in f.coeffs))


def normalize(f: FFPolynomial) -> FFPolynomial:
    """Scale so the graded-lex-largest nonzero coefficient is 1."""
    lead = f.lead_position()
    if lead is None:
        raise StrataArgumentError("the zero polynomial has no normalized form")
    return scale(f, pow(f.coeffs[lead], -1, f.p))


def multiply(f: FFPolynomial, g: FFPolynomial) -> FFPolynomial:
    """f·g on the basis of degree f.d + g.d."""
    if (f.p, f.n) != (g.p, g.n):
        raise StrataArgumentError("cannot multiply polynomials over different rings")
    p, n, cap = f.p, f.n, f.d + g.d
    positions = _positions(n, cap)
    out = [0] * basis_size(cap, n)
    g_terms = list(g.terms().items())
    for ea, ca in f.terms().items():
        for eb, cb in g_terms:
            pos = positions[tuple(x + y for x, y in zip(ea, eb))]
            out[pos] = (out[pos] + ca * cb) % p
    return FFPolynomial(p, n, cap, tuple(out))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _check_brute(d: int, n: int, p: int) -> None:
    if not isinstance(d, int) or d < 1 or not isinstance(n, int) or n < 1:
        raise StrataArgumentError(f"d and n must be positive integers, got d={d!r} n={n!r}")
    if p not in config.BRUTE_PRIMES or not isprime(p):
        raise StrataArgumentError(f"p must be one of {config.BRUTE_PRIMES}, got {p!r}")
    states = p ** basis_size(d, n)
    if states > config.STRATA_BRUTE_STATE_CAP:
        raise BudgetExceededError(states, config.STRATA_BRUTE_STATE_CAP)


def normalized_indices(d: int, n: int, p: int) -> Iterable[int]:
    """Indices of the normalized polynomials of exact degree d, ordered by lead position."""
    for lead in range(basis_size(d - 1, n), basis_size(d, n)):
        start = p ** lead
        yield from range(start, 2 * start)


def enumerate_normalized(d: int, n: int, p: int) -> List[FFPolynomial]:
    """
    All normalized polynomials of exact degree d over F_p.

    Raises:
        BudgetExceededError: if p^B(d,n) exceeds STRATA_BRUTE_STATE_CAP.
    """
    _check_brute(d, n, p)
    return [FFPolynomial.from_index(i, p, n, d) for i in normalized_indices(d, n, p)]


def normalized_count(d: int, n: int, p: int) -> int:
    return (p ** basis_size(d, n) - p ** basis_size(d - 1, n)) // (p - 1)


# ---------------------------------------------------------------------------
# Sieve and census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveResult:
    d: int
    n: int
    p: int
    total: int
    irreducible: int
    census: Dict[Partition, int]

    def rows(self) -> List[Dict[str, object]]:
        return [
            {"p": self.p, "n": self.n, "d": self.d, "partition": str(lam), "count": count}
            for lam, count in self.census.items()
        ]


_irreducible_memo: Dict[Tuple[int, int, int], Tuple[FFPolynomial, ...]] = {}
_memo_lock = threading.Lock()


def _products(polys_a: Sequence[FFPolynomial], polys_b: Sequence[FFPolynomial]) -> Set[int]:
    # products of normalized polynomials are normalized: leading monomials
    # multiply under a monomial order and 1 * 1 = 1
    return {multiply(f, g).index for f in polys_a for g in polys_b}


def irreducibles(d: int, n: int, p: int, threads: Optional[int] = None) -> Tuple[FFPolynomial, ...]:
    """Normalized irreducible polynomials of exact degree d, in enumeration order."""
    key = (d, n, p)
    with _memo_lock:
        if key in _irreducible_memo:
            return _irreducible_memo[key]
    _check_brute(d, n, p)
    marked = _reducible_indices(d, n, p, threads)
    found = tuple(
        FFPolynomial.from_index(i, p, n, d)
        for i in normalized_indices(d, n, p)
        if i not in marked
    )
    with _memo_lock:
        return _irreducible_memo.setdefault(key, found)


def _normalized_by_degree(a: int, n: int, p: int) -> List[FFPolynomial]:
    return [FFPolynomial.from_index(i, p, n, a) for i in normalized_indices(a, n, p)]


def _reducible_indices(d: int, n: int, p: int, threads: Optional[int]) -> Set[int]:
    splits = [(a, d - a) for a in range(1, d // 2 + 1)]
    if not splits:
        return set()
    marks = bytearray(p ** basis_size(d, n))

    def mark_split(split: Tuple[int, int]) -> Set[int]:
        a, b = split
        return _products(_normalized_by_degree(a, n, p), _normalized_by_degree(b, n, p))

    for found in ordered_map(mark_split, splits, threads):
        for index in found:
            marks[index] = 1
    return {i for i, flag in enumerate(marks) if flag}


def _stratum_products(lam: Partition, n: int, p: int, threads: Optional[int]) -> List[int]:
    """Indices of all products of a multiset of irreducibles with factor degrees λ."""
    per_part = []
    for j, m in sorted(lam.multiplicities.items()):
        pool = irreducibles(j, n, p, threads)
        per_part.append(list(itertools.combinations_with_replacement(pool, m)))
    products = []
    for choice in itertools.product(*per_part):
        factors = [f for group in choice for f in group]
        result = factors[0]
        for f in factors[1:]:
            result = multiply(result, f)
        products.append(result.index)
    return products


def irr_sieve(d: int, n: int, p: int, threads: Optional[int] = None) -> SieveResult:
    """
    Irreducible count and factorization-type census of the normalized
    degree-d polynomials over F_p.

    Raises:
        BudgetExceededError: above the state cap.
        InternalConsistencyError: if the census products collide or fail to
            cover the reducible polynomials exactly.
    """
    _check_brute(d, n, p)
    total = normalized_count(d, n, p)
    irr = irreducibles(d, n, p, threads)
    reducible = _reducible_indices(d, n, p, threads)

    census: Dict[Partition, int] = {}
    seen: Set[int] = set()
    for lam in enumerate_partitions(d):
        if lam.is_singleton:
            census[lam] = len(irr)
            continue
        products = _stratum_products(lam, n, p, threads)
        distinct = set(products)
        if len(distinct) != len(products) or distinct & seen:
            raise InternalConsistencyError(f"factorization products collide in stratum {lam} (d={d} n={n} p={p})")
        seen |= distinct
        census[lam] = len(products)

    if seen != reducible:
        raise InternalConsistencyError(
            f"census covers {len(seen)} reducibles but the sieve marked {len(reducible)} (d={d} n={n} p={p})"
        )
    if sum(census.values()) != total:
        raise InternalConsistencyError(f"census sums to {sum(census.values())}, expected {total}")

    logger.info("irr_sieve | done | d=%s n=%s p=%s irreducible=%s", d, n, p, len(irr))
    return SieveResult(d, n, p, total, len(irr), census)


# ---------------------------------------------------------------------------
# Cross-validation and export
# ---------------------------------------------------------------------------

def cross_validate(
    params: Sequence[Tuple[int, int, int]],
    threads: Optional[int] = None,
) -> Dict[str, object]:
    """Sieve results against the counting polynomials evaluated at q = p."""
    for d, n, p in params:
        _check_brute(d, n, p)

    def check(dnp: Tuple[int, int, int]) -> Dict[str, object]:
        d, n, p = dnp
        sieve = irr_sieve(d, n, p)
        expected = irr_count(d, n).evaluate_int(p)
        comparisons = [{
            "partition": str(Partition.of(d)),
            "kind": "irreducible",
            "sieve": str(sieve.irreducible),
            "formula": str(expected),
            "pass": sieve.irreducible == expected,
        }]
        for lam, count in sieve.census.items():
            if lam.is_singleton:
                continue
            formula = stratum_count(lam, n).evaluate_int(p)
            comparisons.append({
                "partition": str(lam),
                "kind": "stratum",
                "sieve": str(count),
                "formula": str(formula),
                "pass": count == formula,
            })
        return {
            "d": d,
            "n": n,
            "p": p,
            "pass": all(c["pass"] for c in comparisons),
            "comparisons": comparisons,
            "census": sieve.rows(),
        }

    rows = ordered_map(check, list(params), threads)
    passed = all(row["pass"] for row in rows)
    if not passed:
        logger.warning("cross_validate | mismatch | params=%s", [(r["d"], r["n"], r["p"]) for r in rows if not r["pass"]])
    return {"pass": passed, "results": rows}


CENSUS_COLUMNS = ("p", "n", "d", "partition", "count")


def census_csv(rows: Iterable[Dict[str, object]]) -> str:
    """Census rows (SieveResult.rows() or cross_validate census lists) as CSV, in input order."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CENSUS_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()
