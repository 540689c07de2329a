"""
Unit tests for E1 windows, differential resolution, stable Betti windows and
the bounds calculators.
"""

import pytest

from app.core import config
from app.core.errors import RuleContradiction, StrataArgumentError, UnsupportedInputError
from app.core.graded_engine import stable_irr_series
from app.core.partitions import Partition
from app.core.spectral_window import (
    ZERO,
    DifferentialRule,
    Interval,
    bounds_report,
    dim_bound_check,
    e1_window,
    euler_consistency,
    render_e1_grid,
    resolve_window,
    shipped_rules,
    stable_betti_window,
    stratum_dimension,
    vanishing_audit,
)


def _all_zero_below(result, degree):
    return all(result.values[i] == ZERO for i in range(degree))


def test_shipped_rules_load_from_config():
    assert shipped_rules(2) == []
    assert len(shipped_rules(3)) == 1
    kinds = [rule.kind for rule in shipped_rules(4)]
    assert kinds == [config.KNOWN_INJECTIVE, config.KNOWN_ZERO]
    assert shipped_rules(4)[1].covers(1, 1, 9)
    assert not shipped_rules(4)[1].covers(1, 1, 11)


def test_rule_rejects_unknown_kind():
    with pytest.raises(StrataArgumentError):
        DifferentialRule(1, 0, 0, None, "maybe")


def test_e1_window_for_quartics_naive():
    window = e1_window(4, 10, "naive")
    assert window.columns == [0, 1, 2]
    assert window.dim(0, 8) == 1
    assert window.dim(0, 10) == 1
    assert window.dim(1, 9) == 1
    assert window.dim(2, 10) == 1
    assert window.entries[(2, 10)] == ((Partition.of(3, 1), 0), (Partition.of(2, 2), 1))
    occupied = {cell for cell in window.entries}
    assert occupied == {(0, 8), (0, 10), (1, 9), (2, 10)}


def test_e1_window_for_quartics_koszul_drops_the_two_two_class():
    window = e1_window(4, 10, "koszul")
    assert window.dim(2, 10) == 0
    assert window.dim(1, 9) == 1


def test_e1_window_for_quadrics_is_the_symmetric_square():
    window = e1_window(2, 8)
    assert window.columns == [0]
    assert {k: window.dim(0, k) for k in range(9) if window.dim(0, k)} == {4: 1, 6: 1, 8: 2}


def test_window_degree_range():
    with pytest.raises(UnsupportedInputError):
        e1_window(5, 10)
    with pytest.raises(StrataArgumentError):
        e1_window(1, 10)
    with pytest.raises(UnsupportedInputError):
        stable_betti_window(5, 10)


def test_quartic_betti_window_naive_has_class_in_degree_eleven():
    result = stable_betti_window(4, 11, "naive")
    assert result.exact
    assert _all_zero_below(result, 11)
    assert result.value(11) == Interval(1, 1)
    assert result.resolved.uncovered == ()
    assert result.divergence is None


def test_quartic_betti_window_koszul_vanishes_and_reports_divergence():
    result = stable_betti_window(4, 11, "koszul")
    assert result.exact
    assert result.value(11) == ZERO
    assert result.divergence["diverges"]
    assert result.divergence["degrees"] == [{"degree": 11, "naive": "1", "koszul": "0"}]


def test_quadric_betti_window_matches_stable_series():
    result = stable_betti_window(2, 15)
    expected = stable_irr_series(2, 15)
    assert result.exact
    for i in range(1, 16):
        assert result.value(i) == Interval(expected[i], expected[i])


@pytest.mark.parametrize("conv", ["koszul", "naive"])
def test_cubic_betti_window_matches_cokernel_pipeline(conv):
    result = stable_betti_window(3, 20, conv)
    expected = stable_irr_series(3, 20, conv)
    assert result.exact
    for i in range(1, 21):
        assert result.value(i).lo == expected[i], f"b_{i}"


def test_without_rules_uncovered_differentials_become_intervals():
    result = stable_betti_window(3, 12, "naive", rules=[])
    assert not result.exact
    assert result.value(7) == Interval(0, 1)
    sources = {rec.source for rec in result.resolved.uncovered}
    assert (0, 6) in sources
    payload = result.to_dict()
    assert payload["betti"]["7"] == ["0", "1"]
    assert payload["uncovered_differentials"]


def test_contradictory_rule_is_reported():
    window = e1_window(4, 12, "koszul")
    bad = [DifferentialRule(1, 1, 9, 9, config.KNOWN_INJECTIVE)]
    with pytest.raises(RuleContradiction):
        resolve_window(window, bad)


def test_rank_bookkeeping_holds_where_exact():
    for d, conv in [(3, "koszul"), (4, "naive"), (4, "koszul")]:
        result = stable_betti_window(d, 11, conv)
        check = result.consistency
        assert check["exact"]
        assert check["holds"]
        assert check["alternating_holds"]


def test_euler_consistency_on_a_bare_window():
    resolved = resolve_window(e1_window(2, 10))
    check = euler_consistency(resolved)
    assert check["exact"] and check["holds"]
    # quadrics have a single column, so E1 = E∞
    assert all(row["e1"] == row["e_infinity"] for row in check["rows"])


@pytest.mark.parametrize("conv", ["koszul", "naive"])
def test_column_alternating_sum_survives_the_cubic_differential(conv):
    result = stable_betti_window(3, 20, conv)
    column = result.consistency["column_alternating"]
    assert column["exact"]
    assert column["holds"]
    assert column["rows"]
    for row in column["rows"]:
        assert str(row["e1"]) == row["e2"]


def test_column_alternating_sum_is_interval_without_rules():
    result = stable_betti_window(3, 12, "naive", rules=[])
    column = result.consistency["column_alternating"]
    assert not column["exact"]
    assert column["holds"] is None


def test_high_stability_bound_is_strict():
    report = bounds_report(4, 30)
    assert report["high_stability"]["bound"] == "18/1"
    assert report["high_stability"]["max_i"] == 17
    assert report["high_stability"]["strict"]
    assert report["high_stability"]["statement"].endswith("i < 18")


def test_stable_homology_ranks_cover_the_high_stability_range():
    ranks = bounds_report(4, 30)["homology_rank"]
    assert ranks["valid_through"] == 17
    assert ranks["ranks"] == [1, 0] * 9
    assert bounds_report(4, 2)["homology_rank"] == {"valid_through": -1, "ranks": []}
    assert bounds_report(1, 3)["homology_rank"] == {"valid_through": None, "ranks": []}


def test_red_vanishing_and_low_stability():
    assert bounds_report(2, 2)["red_vanishing"]["min_i"] == 9
    assert bounds_report(4, 2)["low_stability"]["max_i"] == 4
    assert bounds_report(1, 3)["high_stability"] is None
    assert bounds_report(3, 2)["vanishing_range"]["max_k"] == 6


def test_fractional_high_bound_rounds_down():
    report = bounds_report(3, 2)
    # 2*2/2 - 0 - 1 = 1, so only i = 0 is covered
    assert report["high_stability"]["bound"] == "1/1"
    assert report["high_stability"]["max_i"] == 0
    assert bounds_report(4, 2)["high_stability"]["bound"] == "-2/3"


def test_stratum_dimensions():
    assert stratum_dimension(Partition.of(1, 1), 2) == 4
    assert stratum_dimension(Partition.of(1, 1, 1), 2) == 6
    assert stratum_dimension(Partition.of(3), 2) == 9


def test_dimension_bound_is_tight_only_at_one_plus_rest():
    for d in range(2, 7):
        for n in range(2, 7):
            check = dim_bound_check(d, n)
            assert check["holds"], f"d={d}, n={n}"
            assert check["tight_at"] == [str(Partition.of(d - 1, 1))], f"d={d}, n={n}"
            assert check["tight_only_at_expected"]


def test_vanishing_audit_through_quartics():
    audit = vanishing_audit(4)
    assert audit["holds"]
    assert audit["violations"] == []
    rows = {row["d"]: row for row in audit["rows"]}
    assert rows[2]["betti_zero_through"] == 4
    assert rows[3]["betti_zero_through"] == 6
    assert rows[4]["betti_zero_through"] == 8
    assert rows[3]["first_nonzero_betti"] == 10
    assert rows[4]["r_d"] == 9


def test_vanishing_audit_uses_the_quartic_window_for_parts_of_four():
    audit = vanishing_audit(5)
    rows = {row["d"]: row for row in audit["rows"]}
    assert rows[5]["complete"]
    assert rows[5]["unverifiable"] == []
    assert rows[5]["from_quartic_window"] == ["4+1"]
    checked = {entry["partition"] for entry in rows[5]["strata"]}
    assert "4+1" in checked
    assert all(entry["ok"] for entry in rows[5]["strata"])
    assert rows[5]["betti_vanishing_holds"] is True
    assert audit["holds"] is True
    assert set(audit["quartic_window_exact"]) == {"koszul", "naive"}


def test_vanishing_audit_is_undecided_when_a_row_is_incomplete():
    audit = vanishing_audit(6)
    rows = {row["d"]: row for row in audit["rows"]}
    assert not rows[6]["complete"]
    assert rows[6]["unverifiable"] == ["5+1"]
    assert rows[6]["betti_zero_through"] is None
    assert rows[6]["betti_vanishing_holds"] is None
    assert audit["holds"] is None
    with pytest.raises(StrataArgumentError):
        vanishing_audit(7)


def test_e1_grid_rendering():
    grid = render_e1_grid(e1_window(4, 10, "naive"))
    assert "| q \\ p | 0 | 1 | 2 |" in grid
    assert "1·[2+2]" in grid
    assert "1·[1+1+1+1]" in grid
