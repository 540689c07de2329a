"""
Poincaré-series calculus for graded vector spaces.

A graded space is represented only by its dimension series (a
TruncatedSeries with nonnegative coefficients). Symmetric powers are taken
under one of two conventions:
  - koszul: odd-degree classes anticommute, so they enter exterior-style;
  - naive: every class is treated as even.
The stable series of Irr_1, Irr_2, Irr_3 are built from the single input
P_1 = t^2/(1-t^2); stable series for d >= 4 come only out of the spectral
window, never from here.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Dict, List, Mapping, Optional, Tuple

from app.core import config
from app.core.errors import InjectivityViolation, StrataArgumentError, UnsupportedInputError
from app.core.exact_algebra import RationalFormSeries, TruncatedSeries, expand_rational_form, tensor
from app.core.partitions import Partition, parse_partition

logger = logging.getLogger(__name__)


class SymConvention(str, Enum):
    KOSZUL = "koszul"
    NAIVE = "naive"

    @classmethod
    def parse(cls, value) -> "SymConvention":
        if isinstance(value, SymConvention):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise StrataArgumentError(
                f"unknown convention {value!r}; expected one of {[c.value for c in cls]}"
            ) from None


def default_convention() -> SymConvention:
    return SymConvention.parse(config.STRATA_DEFAULT_CONVENTION)


def _check_dims(series: TruncatedSeries) -> None:
    if not series.is_nonnegative():
        raise StrataArgumentError("a graded dimension series must have nonnegative coefficients")


# ---------------------------------------------------------------------------
# Symmetric powers
# ---------------------------------------------------------------------------

def _generator_factor(a: int, k: int, conv: SymConvention, m: int) -> List[int]:
    """
    z-coefficients of the factor contributed by a generators in degree k:
    (1 - z t^k)^{-a} gives C(a+j-1, j); for odd k under koszul,
    (1 + z t^k)^{a} gives C(a, j). Entry j multiplies t^{jk}.
    """
    if conv is SymConvention.KOSZUL and k % 2 == 1:
        return [comb(a, j) for j in range(m + 1)]
    return [comb(a + j - 1, j) for j in range(m + 1)]


def sym_m(series: TruncatedSeries, m: int, conv: SymConvention | str = SymConvention.KOSZUL) -> TruncatedSeries:
    """
    Dimension series of the m-th symmetric power: the z^m coefficient of
    prod_k (generator factor in degree k), expanded degree by degree in t and
    truncated at the input truncation.
    """
    conv = SymConvention.parse(conv)
    if not isinstance(m, int) or m < 0:
        raise StrataArgumentError(f"m must be a nonnegative integer, got {m!r}")
    _check_dims(series)
    trunc = series.trunc
    # layers[j][k]: dimension in z-degree j, t-degree k
    layers = [[0] * (trunc + 1) for _ in range(m + 1)]
    layers[0][0] = 1
    for k, a in series.items():
        factor = _generator_factor(a, k, conv, m)
        nxt = [[0] * (trunc + 1) for _ in range(m + 1)]
        for j, row in enumerate(layers):
            if not any(row):
                continue
            for extra in range(0, m - j + 1):
                weight = factor[extra]
                offset = extra * k
                if not weight or offset > trunc:
                    continue
                target = nxt[j + extra]
                for deg in range(trunc + 1 - offset):
                    if row[deg]:
                        target[deg + offset] += weight * row[deg]
        layers = nxt
    return TruncatedSeries(tuple(layers[m]), trunc)


def invariant_dims(
    series: TruncatedSeries,
    m: int,
    trunc: int,
    conv: SymConvention | str = SymConvention.KOSZUL,
) -> List[int]:
    """
    Brute-force count of degree-graded monomials of length m in the free
    graded-commutative algebra on series[k] generators per degree k
    (squarefree in odd generators under koszul), for every degree <= trunc.
    """
    conv = SymConvention.parse(conv)
    if trunc > series.trunc:
        raise StrataArgumentError(f"degree {trunc} is above the series truncation {series.trunc}")
    generators: List[Tuple[int, int]] = []
    for k in range(0, trunc + 1):
        generators.extend((k, label) for label in range(series[k]))
    counts = [0] * (trunc + 1)

    def walk(start: int, remaining: int, degree: int, used_odd: frozenset) -> None:
        if remaining == 0:
            counts[degree] += 1
            return
        for idx in range(start, len(generators)):
            k, label = generators[idx]
            if degree + k * remaining > trunc:
                break  # generators are sorted by degree
            odd = conv is SymConvention.KOSZUL and k % 2 == 1
            if odd and (k, label) in used_odd:
                continue
            walk(idx, remaining - 1, degree + k, used_odd | {(k, label)} if odd else used_odd)

    walk(0, m, 0, frozenset())
    return counts


def invariant_dim_oracle(
    series: TruncatedSeries,
    m: int,
    degree: int,
    conv: SymConvention | str = SymConvention.KOSZUL,
) -> int:
    """Single-degree entry point of invariant_dims."""
    if degree < 0:
        return 0
    return invariant_dims(series, m, degree, conv)[degree]


# ---------------------------------------------------------------------------
# Cokernels
# ---------------------------------------------------------------------------

def cokernel_subtract(target: TruncatedSeries, source: TruncatedSeries, shift_of_source: int) -> TruncatedSeries:
    """
    target_k - source_{k - shift} under the caller's assertion that the map
    source -> target (raising degree by shift) is injective.

    Raises:
        InjectivityViolation: at the first degree where the result is negative.
    """
    trunc = min(target.trunc, source.trunc + shift_of_source)
    if trunc < 0:
        raise StrataArgumentError("no degree is covered by both series")
    values = []
    for k in range(trunc + 1):
        src = source.coefficient(k - shift_of_source) if k - shift_of_source >= 0 else 0
        value = target[k] - src
        if value < 0:
            raise InjectivityViolation(k, value)
        values.append(value)
    return TruncatedSeries(tuple(values), trunc)


# ---------------------------------------------------------------------------
# Stable series of Irr_d and of strata
# ---------------------------------------------------------------------------

def p1_form() -> RationalFormSeries:
    return RationalFormSeries.from_config(config.STABLE_INPUT_FORMS[1])


def stable_irr_series(d: int, trunc: int, conv: SymConvention | str = SymConvention.KOSZUL) -> TruncatedSeries:
    """
    Stable Poincaré series of H^*_c(Irr_d) through t^trunc, d in {1, 2, 3}.

      d=1: t^2/(1-t^2).
      d=2: s^1 Sym^2(P_1)  (Red_2 = Sym^2 Irr_1, then the connecting shift).
      d=3: s^1 coker( s^1 Sym^3(P_1) -> P_2 ⊗ P_1 ), the transfer being injective.
    """
    conv = SymConvention.parse(conv)
    if not isinstance(d, int) or d < 1:
        raise StrataArgumentError(f"d must be a positive integer, got {d!r}")
    if trunc < 0:
        raise StrataArgumentError(f"order must be >= 0, got {trunc}")
    p1 = expand_rational_form(p1_form(), trunc)
    if d == 1:
        return p1
    if d == 2:
        return sym_m(p1, 2, conv).shift(1).truncate(trunc)
    if d == 3:
        p2 = stable_irr_series(2, trunc, conv)
        red3 = cokernel_subtract(tensor(p2, p1), sym_m(p1, 3, conv), 1)
        return red3.shift(1).truncate(trunc)
    raise UnsupportedInputError(
        f"stable series of Irr_{d} is not a registry input (only d <= {config.STABLE_SERIES_MAX_PART}); "
        f"use the spectral window for d = 4"
    )


def stable_stratum_series(
    lam: Partition | str,
    trunc: int,
    conv: SymConvention | str = SymConvention.KOSZUL,
    supplied: Optional[Mapping[int, TruncatedSeries]] = None,
) -> TruncatedSeries:
    """
    ⊗_j Sym^{m_j(λ)}(P_j): the stable H^*_c of the stratum T_λ.

    Raises:
        UnsupportedInputError: for a part above 3 without a supplied series.
    """
    if isinstance(lam, str):
        lam = parse_partition(lam)
    conv = SymConvention.parse(conv)
    supplied = supplied or {}
    factors = []
    for j, m in sorted(lam.multiplicities.items()):
        if j in supplied:
            base = supplied[j]
            if base.trunc < trunc:
                raise StrataArgumentError(f"supplied series for part {j} is truncated below t^{trunc}")
            base = base.truncate(trunc)
        elif j <= config.STABLE_SERIES_MAX_PART:
            base = stable_irr_series(j, trunc, conv)
        else:
            raise UnsupportedInputError(
                f"no stable series for part {j} of {lam}; supply one explicitly"
            )
        factors.append(sym_m(base, m, conv))
    return tensor(*factors).truncate(trunc)


# ---------------------------------------------------------------------------
# Reports against the printed closed forms and asserted dimensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FormComparison:
    d: int
    trunc: int
    convention: str
    printed: str
    computed: TruncatedSeries
    expected: TruncatedSeries
    first_deviation: Optional[int]

    @property
    def agrees(self) -> bool:
        return self.first_deviation is None

    def to_dict(self) -> Dict[str, object]:
        return {
            "d": self.d,
            "trunc": self.trunc,
            "convention": self.convention,
            "printed_form": self.printed,
            "computed": self.computed.to_dict(),
            "printed_expansion": self.expected.to_dict(),
            "agrees": self.agrees,
            "first_deviation": self.first_deviation,
        }


def printed_form_comparison(d: int, trunc: int, conv: SymConvention | str = SymConvention.KOSZUL) -> FormComparison:
    """Pipeline output against the closed form as printed; flags the first deviating degree."""
    conv = SymConvention.parse(conv)
    entry = config.PRINTED_CLOSED_FORMS.get(d)
    if entry is None:
        raise UnsupportedInputError(f"no printed closed form recorded for d={d}")
    computed = stable_irr_series(d, trunc, conv)
    expected = expand_rational_form(RationalFormSeries.from_config(entry), trunc)
    deviation = computed.first_difference(expected)
    if deviation is not None:
        logger.warning(
            "printed_form_comparison | deviation | d=%s degree=%s computed=%s printed=%s",
            d, deviation, computed[deviation], expected[deviation],
        )
    return FormComparison(d, trunc, conv.value, entry["printed"], computed, expected, deviation)


# Stratum groups asserted in prose about the d=4 window: (partition, degree, asserted dimension).
ASSERTED_STRATUM_DIMENSIONS = (
    ("1+1+1+1", 8, 1),
    ("1+1+1+1", 10, 1),
    ("2+1+1", 11, 1),
    ("2+2", 10, 1),
)


def stratum_assertion_audit(trunc: int = 12) -> List[Dict[str, object]]:
    """Engine values for each asserted stratum group under both conventions; recorded, not suppressed."""
    rows = []
    for text, degree, asserted in ASSERTED_STRATUM_DIMENSIONS:
        lam = parse_partition(text)
        values = {
            conv.value: stable_stratum_series(lam, trunc, conv)[degree]
            for conv in SymConvention
        }
        rows.append({
            "partition": str(lam),
            "degree": degree,
            "asserted": asserted,
            "koszul": values["koszul"],
            "naive": values["naive"],
            "matches_naive": values["naive"] == asserted,
            "matches_koszul": values["koszul"] == asserted,
        })
    return rows
