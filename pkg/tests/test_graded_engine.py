"""
Unit tests for the graded engine: symmetric powers, cokernels and the
stable series of Irr_1, Irr_2, Irr_3.
"""

import pytest

from app.core.errors import InjectivityViolation, StrataArgumentError, UnsupportedInputError
from app.core.exact_algebra import RationalFormSeries, TruncatedSeries, tensor
from app.core.graded_engine import (
    SymConvention,
    cokernel_subtract,
    invariant_dim_oracle,
    invariant_dims,
    printed_form_comparison,
    stable_irr_series,
    stable_stratum_series,
    stratum_assertion_audit,
    sym_m,
)

CONVENTIONS = [SymConvention.KOSZUL, SymConvention.NAIVE]


def _p1(trunc):
    return RationalFormSeries(2, (2,)).expand(trunc)


def test_convention_parsing():
    assert SymConvention.parse("Naive") is SymConvention.NAIVE
    assert SymConvention.parse(SymConvention.KOSZUL) is SymConvention.KOSZUL
    with pytest.raises(StrataArgumentError):
        SymConvention.parse("bogus")


@pytest.mark.parametrize("conv", CONVENTIONS)
def test_first_two_stable_series_match_closed_forms(conv):
    assert stable_irr_series(1, 40, conv) == _p1(40)
    assert stable_irr_series(2, 40, conv) == RationalFormSeries(5, (2, 4)).expand(40)


@pytest.mark.parametrize("conv", CONVENTIONS)
def test_third_stable_series_low_terms(conv):
    p3 = stable_irr_series(3, 14, conv)
    assert dict(p3.items()) == {10: 1, 12: 2, 14: 3}
    assert p3.trunc == 14


def test_third_stable_series_equals_reduced_closed_form():
    expected = RationalFormSeries(10, (2, 2, 6)).expand(30)
    assert stable_irr_series(3, 30) == expected


def test_printed_third_form_first_deviates_at_twelve():
    comparison = printed_form_comparison(3, 20)
    assert not comparison.agrees
    assert comparison.first_deviation == 12
    assert comparison.computed[12] == 2
    assert comparison.expected[12] == 1
    assert comparison.to_dict()["first_deviation"] == 12


def test_printed_second_form_agrees():
    assert printed_form_comparison(2, 40).agrees


def test_conventions_agree_on_even_input():
    p1 = _p1(30)
    for m in range(1, 5):
        assert sym_m(p1, m, "koszul") == sym_m(p1, m, "naive")


@pytest.mark.parametrize("conv", CONVENTIONS)
def test_symmetric_powers_match_the_monomial_oracle(conv):
    p2 = stable_irr_series(2, 20, conv)
    assert list(sym_m(p2, 2, conv).coeffs) == invariant_dims(p2, 2, 20, conv)
    p1 = _p1(30)
    assert list(sym_m(p1, 3, conv).coeffs) == invariant_dims(p1, 3, 30, conv)


@pytest.mark.parametrize("conv", CONVENTIONS)
def test_every_small_symmetric_power_matches_the_oracle(conv):
    inputs = {"P1": _p1(24), "P2": stable_irr_series(2, 24, conv)}
    for name, series in inputs.items():
        for m in range(1, 5):
            assert list(sym_m(series, m, conv).coeffs) == invariant_dims(series, m, 24, conv), f"{name}, m={m}"


@pytest.mark.parametrize("conv", CONVENTIONS)
def test_symmetric_power_starts_no_lower_than_m_times_the_input(conv):
    for d in (1, 2, 3):
        series = stable_irr_series(d, 40, conv)
        low = series.lowest_degree()
        for m in range(1, 5):
            power_low = sym_m(series, m, conv).lowest_degree()
            assert power_low is None or power_low >= m * low, f"d={d}, m={m}"


def test_agreement_through_a_degree_survives_sym_and_tensor():
    rho = 15
    p2 = stable_irr_series(2, 24)
    perturbed = TruncatedSeries.from_list(
        [c + 1 if k > rho else c for k, c in enumerate(p2.coeffs)]
    )
    assert p2.equal_through(perturbed, rho)
    assert not p2.equal_through(perturbed, rho + 1)
    for conv in CONVENTIONS:
        for m in range(1, 5):
            assert sym_m(p2, m, conv).equal_through(sym_m(perturbed, m, conv), rho)
    p1 = _p1(24)
    assert tensor(p2, p1).equal_through(tensor(perturbed, p1), rho)


def test_odd_classes_square_to_zero_only_under_koszul():
    p2 = stable_irr_series(2, 12)
    assert sym_m(p2, 2, "koszul")[10] == 0
    assert sym_m(p2, 2, "naive")[10] == 1
    assert invariant_dim_oracle(p2, 2, 10, "koszul") == 0
    assert invariant_dim_oracle(p2, 2, 10, "naive") == 1


def test_third_series_pipeline_against_oracle_symmetric_cube():
    trunc = 30
    p1 = _p1(trunc)
    p2 = stable_irr_series(2, trunc)
    oracle_cube = TruncatedSeries.from_list(invariant_dims(p1, 3, trunc))
    rebuilt = cokernel_subtract(tensor(p2, p1), oracle_cube, 1).shift(1).truncate(trunc)
    assert rebuilt == stable_irr_series(3, trunc)


def test_sym_rejects_negative_input():
    with pytest.raises(StrataArgumentError):
        sym_m(TruncatedSeries.from_list([0, -1]), 2)


def test_cokernel_subtract_reports_failing_degree():
    target = TruncatedSeries.from_list([0, 0, 1, 0])
    source = TruncatedSeries.from_list([0, 2, 0])
    with pytest.raises(InjectivityViolation) as excinfo:
        cokernel_subtract(target, source, 1)
    assert excinfo.value.degree == 2


def test_fourth_series_is_not_an_input():
    with pytest.raises(UnsupportedInputError):
        stable_irr_series(4, 10)


@pytest.mark.parametrize("d", [0, -1])
def test_nonpositive_degree_is_an_argument_error(d):
    with pytest.raises(StrataArgumentError) as excinfo:
        stable_irr_series(d, 10)
    assert "positive" in str(excinfo.value)


def test_stratum_series_for_all_ones():
    s = stable_stratum_series("1+1+1+1", 10, "naive")
    assert dict(s.items()) == {8: 1, 10: 1}


def test_stratum_with_large_part_needs_a_supplied_series():
    with pytest.raises(UnsupportedInputError):
        stable_stratum_series("4+1", 12)
    supplied = {4: TruncatedSeries.zero(12)}
    assert stable_stratum_series("4+1", 12, supplied=supplied) == TruncatedSeries.zero(12)


def test_asserted_stratum_groups_are_audited_not_hidden():
    rows = {(row["partition"], row["degree"]): row for row in stratum_assertion_audit()}
    assert rows[("1+1+1+1", 8)]["matches_naive"]
    assert rows[("2+1+1", 11)]["naive"] == 2
    assert not rows[("2+1+1", 11)]["matches_naive"]
    assert rows[("2+2", 10)]["naive"] == 1
    assert rows[("2+2", 10)]["koszul"] == 0
