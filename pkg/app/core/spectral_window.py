"""
E1 windows of the stable stratification spectral sequence for Red_d, and the
bookkeeping that turns them into stable Betti numbers of Irr_d.

Conventions used throughout:
  - column p holds the strata T_λ with |λ| = d - p, 0 <= p <= d - 2;
  - cells are addressed by (p, k) with k the total degree;
  - the page-r differential goes (p, k) -> (p + r, k + 1);
  - b_{k+1}(d) = Σ_p E_∞(p, k) (connecting isomorphism Red -> Irr).

Differentials are never guessed: either a DifferentialRule covers one, or
its rank is carried as an interval and the affected outputs degrade to
intervals too.
"""

import logging
from dataclasses import dataclass, field
from math import comb, ceil
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import Rational

from app.core import config
from app.core.errors import RuleContradiction, StrataArgumentError, UnsupportedInputError
from app.core.exact_algebra import TruncatedSeries, render_rational
from app.core.graded_engine import SymConvention, stable_irr_series, stable_stratum_series
from app.core.parallel import ordered_map
from app.core.partitions import (
    Partition,
    non_singleton_partitions,
    partitions_with_size,
    r_of_degree,
    r_of_partition,
)

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DifferentialRule:
    """Declarative knowledge about one family of differentials, with its citation."""

    page: int
    p: int
    degree_low: int
    degree_high: Optional[int]
    kind: str
    provenance: str = ""

    def __post_init__(self):
        if self.kind not in (config.KNOWN_INJECTIVE, config.KNOWN_ZERO):
            raise StrataArgumentError(f"unknown rule kind {self.kind!r}")
        if self.page < 1 or self.p < 0:
            raise StrataArgumentError(f"rule page must be >= 1 and column >= 0, got page={self.page} p={self.p}")

    @classmethod
    def from_config(cls, entry: Mapping[str, object]) -> "DifferentialRule":
        low, high = entry["degrees"]
        return cls(
            page=int(entry["page"]),
            p=int(entry["p"]),
            degree_low=int(low),
            degree_high=None if high is None else int(high),
            kind=str(entry["kind"]),
            provenance=str(entry.get("provenance", "")),
        )

    def covers(self, page: int, p: int, k: int) -> bool:
        if page != self.page or p != self.p or k < self.degree_low:
            return False
        return self.degree_high is None or k <= self.degree_high

    def to_dict(self) -> Dict[str, object]:
        return {
            "page": self.page,
            "p": self.p,
            "degrees": [self.degree_low, self.degree_high],
            "kind": self.kind,
            "provenance": self.provenance,
        }


def shipped_rules(d: int) -> List[DifferentialRule]:
    """The rule set shipped for d, empty when none is recorded."""
    return [DifferentialRule.from_config(entry) for entry in config.SHIPPED_DIFFERENTIAL_RULES.get(d, [])]


# ---------------------------------------------------------------------------
# E1 windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class E1Window:
    d: int
    max_total_degree: int
    convention: str
    entries: Dict[Cell, Tuple[Tuple[Partition, int], ...]]

    @property
    def columns(self) -> List[int]:
        return list(range(0, self.d - 1))

    def dim(self, p: int, k: int) -> int:
        return sum(dim for _, dim in self.entries.get((p, k), ()))

    def cells(self) -> List[Cell]:
        return [(p, k) for p in self.columns for k in range(self.max_total_degree + 1)]

    def to_dict(self) -> Dict[str, object]:
        columns = []
        for p in self.columns:
            rows = []
            for k in range(self.max_total_degree + 1):
                for lam, dim in self.entries.get((p, k), ()):
                    rows.append({"degree": k, "partition": str(lam), "dim": dim})
            columns.append({"p": p, "entries": rows})
        return {
            "d": self.d,
            "max_total_degree": self.max_total_degree,
            "convention": self.convention,
            "columns": columns,
        }


def _check_window_d(d: int) -> None:
    if not isinstance(d, int) or d < 2:
        raise StrataArgumentError(f"Red_d is empty for d < 2, got d={d!r}")
    if d > config.WINDOW_MAX_DEGREE_D:
        raise UnsupportedInputError(
            f"no stable input series for d={d}; windows are available for d <= {config.WINDOW_MAX_DEGREE_D}"
        )


def e1_window(
    d: int,
    max_total_degree: int,
    conv: SymConvention | str = SymConvention.KOSZUL,
    threads: Optional[int] = None,
) -> E1Window:
    """
    Stable E1 page of Red_d through total degree max_total_degree: column p
    is ⊕_{|λ| = d-p} H^*_c(T_λ), each summand from stable_stratum_series.
    """
    _check_window_d(d)
    if not isinstance(max_total_degree, int) or max_total_degree < 0:
        raise StrataArgumentError(f"max total degree must be >= 0, got {max_total_degree!r}")
    conv = SymConvention.parse(conv)

    def column(p: int) -> Dict[Cell, Tuple[Tuple[Partition, int], ...]]:
        strata = partitions_with_size(d, d - p)
        series = [(lam, stable_stratum_series(lam, max_total_degree, conv)) for lam in strata]
        cells = {}
        for k in range(max_total_degree + 1):
            row = tuple((lam, s[k]) for lam, s in series)
            if any(dim for _, dim in row):
                cells[(p, k)] = row
        return cells

    entries: Dict[Cell, Tuple[Tuple[Partition, int], ...]] = {}
    for part in ordered_map(column, range(0, d - 1), threads):
        entries.update(part)
    return E1Window(d, max_total_degree, conv.value, entries)


# ---------------------------------------------------------------------------
# Resolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def to_json(self) -> object:
        if self.exact:
            return str(self.lo)
        return [str(self.lo), str(self.hi)]

    def __str__(self) -> str:
        return str(self.lo) if self.exact else f"[{self.lo}, {self.hi}]"


ZERO = Interval(0, 0)


@dataclass(frozen=True)
class DifferentialRecord:
    page: int
    source: Cell
    target: Cell
    rank: Interval
    rule: Optional[str]

    def to_dict(self) -> Dict[str, object]:
        return {
            "page": self.page,
            "source": list(self.source),
            "target": list(self.target),
            "rank": self.rank.to_json(),
            "rule": self.rule,
        }


@dataclass(frozen=True)
class ResolvedWindow:
    window: E1Window
    report_through: int
    pages: Tuple[Dict[Cell, Interval], ...]
    differentials: Tuple[DifferentialRecord, ...]
    uncovered: Tuple[DifferentialRecord, ...]

    @property
    def e_infinity(self) -> Dict[Cell, Interval]:
        return self.pages[-1]

    @property
    def complete(self) -> bool:
        return not self.uncovered

    def total(self, page_index: int, k: int) -> Interval:
        page = self.pages[page_index]
        result = ZERO
        for p in self.window.columns:
            result = result + page.get((p, k), ZERO)
        return result


def resolve_window(
    window: E1Window,
    rules: Optional[Sequence[DifferentialRule]] = None,
    report_through: Optional[int] = None,
) -> ResolvedWindow:
    """
    Run the pages E_1 .. E_{d-1} over the window. A differential's rank is
    exact when a rule covers it or either end is zero, and an interval
    [0, min(src, tgt)] otherwise. Targets beyond the window are unknown.

    Raises:
        RuleContradiction: when the rules force a negative dimension.
    """
    d = window.d
    rules = list(shipped_rules(d) if rules is None else rules)
    top = window.max_total_degree
    report_through = top if report_through is None else report_through
    current: Dict[Cell, Interval] = {
        cell: Interval(window.dim(*cell), window.dim(*cell)) for cell in window.cells()
    }
    pages = [current]
    records: List[DifferentialRecord] = []
    uncovered: List[DifferentialRecord] = []

    for r in range(1, d - 1):
        out_rank: Dict[Cell, Interval] = {}
        in_rank: Dict[Cell, Interval] = {}
        killed = set()
        for (p, k) in window.cells():
            target = (p + r, k + 1)
            if target[0] > d - 2:
                continue
            src = current[(p, k)]
            tgt = current.get(target) if target[1] <= top else None
            rule = next((rule for rule in rules if rule.covers(r, p, k)), None)
            if rule is not None and rule.kind == config.KNOWN_ZERO:
                rank = ZERO
            elif rule is not None:
                if tgt is not None and src.lo > tgt.hi:
                    raise RuleContradiction(
                        f"rule on page {r} says d({p},{k}) is injective but source dim {src.lo} "
                        f"exceeds target dim {tgt.hi}"
                    )
                rank = src
                killed.add((p, k))
            elif src.hi == 0 or (tgt is not None and tgt.hi == 0):
                rank = ZERO
            else:
                cap = src.hi if tgt is None else min(src.hi, tgt.hi)
                rank = Interval(0, cap)
            record = DifferentialRecord(r, (p, k), target, rank, None if rule is None else rule.kind)
            if rank != ZERO or rule is not None:
                records.append(record)
            if rule is None and rank != ZERO and k <= report_through:
                uncovered.append(record)
            out_rank[(p, k)] = rank
            if target[1] <= top:
                in_rank[target] = rank

        following: Dict[Cell, Interval] = {}
        for cell, value in current.items():
            incoming = in_rank.get(cell, ZERO)
            if cell in killed:
                if incoming.lo > 0:
                    raise RuleContradiction(
                        f"cell {cell} on page {r} has an injective outgoing differential "
                        f"but a nonzero incoming image"
                    )
                following[cell] = ZERO
                continue
            outgoing = out_rank.get(cell, ZERO)
            hi = value.hi - outgoing.lo - incoming.lo
            if hi < 0:
                raise RuleContradiction(f"rules force dimension {hi} at cell {cell} on page {r + 1}")
            following[cell] = Interval(max(0, value.lo - outgoing.hi - incoming.hi), hi)
        current = following
        pages.append(current)

    return ResolvedWindow(window, report_through, tuple(pages), tuple(records), tuple(uncovered))


def euler_consistency(resolved: ResolvedWindow) -> Dict[str, object]:
    """
    Rank bookkeeping over the reported degrees: for each total degree k,
    dim E1(k) - dim E∞(k) equals the ranks of all differentials leaving or
    entering degree k; the alternating sum telescopes to the ranks leaving
    the top reported degree.
    """
    last = len(resolved.pages) - 1
    rows = []
    exact = True
    holds = True
    alternating = 0
    boundary = 0
    top = resolved.report_through
    for k in range(top + 1):
        e1 = resolved.total(0, k)
        einf = resolved.total(last, k)
        touching = [
            rec.rank for rec in resolved.differentials
            if rec.source[1] == k or rec.target[1] == k
        ]
        ranks = sum((rank for rank in touching), ZERO)
        row_exact = e1.exact and einf.exact and ranks.exact
        exact = exact and row_exact
        row_holds = (e1.lo - einf.lo == ranks.lo) if row_exact else None
        if row_holds is False:
            holds = False
        if row_exact:
            alternating += (-1) ** k * (e1.lo - einf.lo)
        rows.append({
            "degree": k,
            "e1": e1.to_json(),
            "e_infinity": einf.to_json(),
            "differential_rank": ranks.to_json(),
            "holds": row_holds,
        })
    for rec in resolved.differentials:
        if rec.source[1] == top and rec.rank.exact:
            boundary += rec.rank.lo
    alternating_holds = (alternating == (-1) ** top * boundary) if exact else None
    return {
        "exact": exact,
        "holds": holds if exact else None,
        "alternating_holds": alternating_holds,
        "rows": rows,
        "column_alternating": column_alternating_sum(resolved),
    }


def column_alternating_sum(resolved: ResolvedWindow) -> Dict[str, object]:
    """
    Σ_p (-1)^p (column-p series), graded by q = k - p, on E1 and on E2.
    A page-1 differential (p, k) -> (p+1, k+1) keeps q and flips the sign,
    so the two sums agree degree by degree. For d <= 3, E2 is E∞.

    Only q with every column inside the window is compared.
    """
    window = resolved.window
    first = resolved.pages[0]
    second = resolved.pages[1] if len(resolved.pages) > 1 else first
    q_low = -(window.d - 2)
    q_top = window.max_total_degree - (window.d - 2)
    rows = []
    exact = True
    holds = True
    for q in range(q_low, q_top + 1):
        before = 0
        after_lo = after_hi = 0
        for p in window.columns:
            sign = (-1) ** p
            before += sign * first.get((p, p + q), ZERO).lo
            value = second.get((p, p + q), ZERO)
            lo, hi = (value.lo, value.hi) if sign > 0 else (-value.hi, -value.lo)
            after_lo += lo
            after_hi += hi
        if not before and not after_lo and not after_hi:
            continue
        row_exact = after_lo == after_hi
        exact = exact and row_exact
        row_holds = (before == after_lo) if row_exact else None
        if row_holds is False:
            holds = False
        rows.append({
            "q": q,
            "e1": before,
            "e2": str(after_lo) if row_exact else [str(after_lo), str(after_hi)],
            "holds": row_holds,
        })
    return {"exact": exact, "holds": holds if exact else None, "rows": rows}


# ---------------------------------------------------------------------------
# Stable Betti numbers
# ---------------------------------------------------------------------------

@dataclass
class BettiResult:
    d: int
    max_degree: int
    convention: str
    values: Dict[int, Interval]
    resolved: ResolvedWindow
    rules: Tuple[DifferentialRule, ...]
    divergence: Optional[Dict[str, object]] = None
    consistency: Dict[str, object] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(v.exact for v in self.values.values())

    def value(self, i: int) -> Interval:
        return self.values[i]

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "max_degree": self.max_degree,
            "convention": self.convention,
            "exact": self.exact,
            "betti": {str(i): v.to_json() for i, v in sorted(self.values.items())},
            "rules": [rule.to_dict() for rule in self.rules],
            "uncovered_differentials": [rec.to_dict() for rec in self.resolved.uncovered],
            "euler_consistency": self.consistency,
            "convention_divergence": self.divergence,
        }


def _betti(d: int, max_degree: int, conv: SymConvention, rules: Optional[Sequence[DifferentialRule]]) -> BettiResult:
    if not isinstance(max_degree, int) or max_degree < 0:
        raise StrataArgumentError(f"max degree must be >= 0, got {max_degree!r}")
    rules = tuple(shipped_rules(d) if rules is None else rules)
    max_red = max_degree - 1
    # the differentials of later pages reach up to d - 2 degrees past the report
    window = e1_window(d, max(0, max_red) + d - 1, conv)
    resolved = resolve_window(window, rules, report_through=max(max_red, 0))
    values = {0: ZERO}
    for i in range(1, max_degree + 1):
        values[i] = resolved.total(len(resolved.pages) - 1, i - 1)
    result = BettiResult(d, max_degree, conv.value, values, resolved, rules)
    result.consistency = euler_consistency(resolved)
    if not result.exact:
        logger.warning(
            "stable_betti_window | interval output | d=%s max_degree=%s uncovered=%s",
            d, max_degree, len(resolved.uncovered),
        )
    return result


def stable_betti_window(
    d: int,
    max_degree: int,
    conv: SymConvention | str = SymConvention.KOSZUL,
    rules: Optional[Sequence[DifferentialRule]] = None,
) -> BettiResult:
    """
    b_i(d) for 0 <= i <= max_degree, d in {2, 3, 4}. Point values when every
    differential in the window is covered, intervals otherwise. A koszul
    result always carries its comparison against the naive convention.
    """
    _check_window_d(d)
    conv = SymConvention.parse(conv)
    result = _betti(d, max_degree, conv, rules)
    if conv is SymConvention.KOSZUL:
        result.divergence = convention_divergence(d, max_degree, rules, koszul=result)
    logger.info("stable_betti_window | done | d=%s max_degree=%s convention=%s", d, max_degree, conv.value)
    return result


def convention_divergence(
    d: int,
    max_degree: int,
    rules: Optional[Sequence[DifferentialRule]] = None,
    koszul: Optional[BettiResult] = None,
) -> Dict[str, object]:
    """Degrees where the naive and koszul Betti windows disagree."""
    _check_window_d(d)
    naive = _betti(d, max_degree, SymConvention.NAIVE, rules)
    koszul = koszul or _betti(d, max_degree, SymConvention.KOSZUL, rules)
    differing = [
        {"degree": i, "naive": naive.values[i].to_json(), "koszul": koszul.values[i].to_json()}
        for i in range(max_degree + 1)
        if naive.values[i] != koszul.values[i]
    ]
    if differing:
        logger.warning(
            "convention_divergence | conventions disagree | d=%s degrees=%s",
            d, [row["degree"] for row in differing],
        )
    return {"d": d, "max_degree": max_degree, "diverges": bool(differing), "degrees": differing}


# ---------------------------------------------------------------------------
# Bounds and dimensions
# ---------------------------------------------------------------------------

def _check_dn(d: int, n: int) -> None:
    if not isinstance(d, int) or d < 1 or not isinstance(n, int) or n < 1:
        raise StrataArgumentError(f"d and n must be positive integers, got d={d!r} n={n!r}")


def _largest_below(bound: Rational) -> int:
    """Largest integer i with i < bound."""
    return int(ceil(bound)) - 1


def stable_homology_rank(i: int) -> int:
    """Rank of H_i of the stable Irr_{d,n}(C): that of CP^∞."""
    return 1 if i >= 0 and i % 2 == 0 else 0


def bounds_report(d: int, n: int) -> Dict[str, object]:
    """Every threshold formula for (d, n), as exact numbers."""
    _check_dn(d, n)
    report: Dict[str, object] = {"d": d, "n": n}

    low = 2 * (comb(d + n - 1, n - 1) - n - 1)
    report["low_stability"] = {
        "max_i": low,
        "valid": n > 1,
        "statement": f"H^i_c(Irr) ≅ H^i_c(Poly) for i <= {low}",
    }

    if d > 1:
        high = Rational(2 * n, d - 1) - Rational((d - 2) * (d - 3), 2) - 1
        stratum = Rational(2 * n, d - 1) - Rational((d - 2) * (d - 3), 2) + d - 4
        report["high_stability"] = {
            "bound": render_rational(high),
            "strict": True,
            "max_i": _largest_below(high),
            "statement": f"H_i(Irr_{{d,n}}) stabilizes for i < {high}",
        }
        report["stratum_stability"] = {
            "bound": render_rational(stratum),
            "strict": True,
            "max_i": _largest_below(stratum),
        }
    else:
        report["high_stability"] = None
        report["stratum_stability"] = None

    red = 2 * (comb(d + n - 1, n) + n) - 1
    report["red_vanishing"] = {
        "min_i": red,
        "statement": f"H^i_c(Red_{{d,n}}) = 0 for i >= {red}",
    }
    report["vanishing_range"] = {
        "max_k": 2 * d,
        "valid": d > 1 and n > 1,
        "statement": f"H^k_c(Irr_{{d,n}}) = 0 for k <= {2 * d}",
    }
    iso = 2 * comb(n + d - 1, n) - 1
    report["connecting_iso"] = {
        "bound": iso,
        "strict": True,
        "statement": f"H^i_c(Red) ≅ H^{{i+1}}_c(Irr) for i < {iso}",
    }
    report["poly_dimension"] = comb(d + n, n) - 1
    stable_through = None if report["high_stability"] is None else report["high_stability"]["max_i"]
    report["homology_rank"] = {
        "valid_through": stable_through,
        "ranks": [] if stable_through is None else [stable_homology_rank(i) for i in range(stable_through + 1)],
    }
    return report


def stratum_dimension(lam: Partition, n: int) -> int:
    """dim_C T_{λ,n} = Σ_j m_j(λ) [C(j+n, n) - 1]."""
    _check_dn(lam.d, n)
    return sum(m * (comb(j + n, n) - 1) for j, m in lam.multiplicities.items())


def dim_bound_check(d: int, n: int) -> Dict[str, object]:
    """
    Every non-singleton stratum against C(d+n-1, n) + n - 1. Equality is
    expected only at 1 + (d-1) when n > 1.
    """
    _check_dn(d, n)
    bound = comb(d + n - 1, n) + n - 1
    rows = []
    for lam in non_singleton_partitions(d):
        dim = stratum_dimension(lam, n)
        rows.append({"partition": str(lam), "dimension": dim, "within": dim <= bound, "equal": dim == bound})
    tight = [row["partition"] for row in rows if row["equal"]]
    expected = [str(Partition.of(d - 1, 1))] if d > 1 and n > 1 else None
    return {
        "d": d,
        "n": n,
        "bound": bound,
        "holds": all(row["within"] for row in rows),
        "tight_at": tight,
        "tight_only_at_expected": None if expected is None else tight == expected,
        "rows": rows,
    }


def window_irr_series(d: int, trunc: int, conv: SymConvention | str = SymConvention.KOSZUL) -> Tuple[TruncatedSeries, bool]:
    """
    Stable series of Irr_d through t^trunc read off the Betti window, with
    the exact flag. Interval coefficients are replaced by their upper ends,
    which bounds every symmetric power and tensor product built from it
    coefficientwise from above.
    """
    _check_window_d(d)
    result = _betti(d, trunc, SymConvention.parse(conv), None)
    coeffs = tuple(result.values[i].hi for i in range(trunc + 1))
    return TruncatedSeries(coeffs, trunc), result.exact


def vanishing_audit(d_max: int) -> Dict[str, object]:
    """
    For 2 <= d <= d_max: every stable stratum series vanishes below r(λ),
    so b_k(d) = 0 for k <= 2d. Parts of size 4 take their series from the
    quartic Betti window; strata with a larger part are listed as
    unverifiable, and any unverifiable row leaves `holds` undecided.
    """
    if not isinstance(d_max, int) or not 2 <= d_max <= 6:
        raise StrataArgumentError(f"d_max must be between 2 and 6, got {d_max!r}")
    top_trunc = 3 * d_max + 2
    supplied_by_conv: Dict[SymConvention, Dict[int, TruncatedSeries]] = {conv: {} for conv in SymConvention}
    supplied_exact: Dict[SymConvention, bool] = {}
    if d_max >= config.WINDOW_MAX_DEGREE_D + 1:
        for conv in SymConvention:
            series, exact = window_irr_series(config.WINDOW_MAX_DEGREE_D, top_trunc, conv)
            supplied_by_conv[conv][config.WINDOW_MAX_DEGREE_D] = series
            supplied_exact[conv] = exact
    rows = []
    violations = []
    for d in range(2, d_max + 1):
        trunc = 3 * d + 2
        checked = []
        unverifiable = []
        from_window = set()
        lowest_red: Optional[int] = None
        for lam in non_singleton_partitions(d):
            if max(lam.parts) > config.WINDOW_MAX_DEGREE_D:
                unverifiable.append(str(lam))
                continue
            if max(lam.parts) > config.STABLE_SERIES_MAX_PART:
                from_window.add(str(lam))
            r = r_of_partition(lam)
            for conv in SymConvention:
                low = stable_stratum_series(lam, trunc, conv, supplied=supplied_by_conv[conv]).lowest_degree()
                ok = low is None or low >= r
                checked.append({"partition": str(lam), "convention": conv.value, "r": r, "lowest_degree": low, "ok": ok})
                if not ok:
                    violations.append({"d": d, "partition": str(lam), "degree": low, "r": r})
                if low is not None and (lowest_red is None or low < lowest_red):
                    lowest_red = low
        complete = not unverifiable
        # H^k_c(Red) = 0 below lowest_red, so b_k = 0 through lowest_red
        through = (trunc if lowest_red is None else lowest_red) if complete else None
        first_nonzero = None
        if d <= config.STABLE_SERIES_MAX_PART:
            first_nonzero = stable_irr_series(d, trunc, SymConvention.KOSZUL).lowest_degree()
        rows.append({
            "d": d,
            "r_d": r_of_degree(d),
            "complete": complete,
            "strata": checked,
            "unverifiable": unverifiable,
            "from_quartic_window": sorted(from_window),
            "betti_zero_through": through,
            "betti_vanishing_holds": None if through is None else through >= 2 * d,
            "first_nonzero_betti": first_nonzero,
        })
    if violations:
        logger.warning("vanishing_audit | violations | count=%s", len(violations))
    if violations or any(row["betti_vanishing_holds"] is False for row in rows):
        holds: Optional[bool] = False
    elif all(row["complete"] for row in rows):
        holds = True
    else:
        holds = None
        logger.warning(
            "vanishing_audit | incomplete | d=%s",
            [row["d"] for row in rows if not row["complete"]],
        )
    return {
        "d_max": d_max,
        "holds": holds,
        "quartic_window_exact": {conv.value: exact for conv, exact in supplied_exact.items()},
        "violations": violations,
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _cell_text(entries: Iterable[Tuple[Partition, int]]) -> str:
    parts = [f"{dim}·[{lam}]" for lam, dim in entries if dim]
    return " + ".join(parts) if parts else "0"


def render_e1_grid(window: E1Window) -> str:
    """Markdown grid: rows q = k - p from the top down, columns p."""
    columns = window.columns
    qs = [k - p for (p, k) in window.entries]
    lines = [f"E1 page, d={window.d}, {window.convention} convention, total degree <= {window.max_total_degree}", ""]
    header = "| q \\ p | " + " | ".join(str(p) for p in columns) + " |"
    lines.append(header)
    lines.append("|" + "---|" * (len(columns) + 1))
    if not qs:
        lines.append("| (empty) |" + " |" * len(columns))
        return "\n".join(lines) + "\n"
    for q in range(max(qs), min(qs) - 1, -1):
        cells = []
        for p in columns:
            k = p + q
            if k > window.max_total_degree:
                cells.append("·")
            else:
                cells.append(_cell_text(window.entries.get((p, k), ())))
        lines.append(f"| {q} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
