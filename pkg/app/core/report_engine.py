"""
Document builders shared by the CLI and the HTTP routes, plus JSON / CSV /
markdown renderers.

Every document carries "command" and "schema_version". Counts and other
unbounded integers are emitted as decimal strings, rationals as "num/den".
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import jsonschema
from sympy import Rational, factorint

from app.core import config
from app.core.brute_oracle import CENSUS_COLUMNS, census_csv, cross_validate
from app.core.errors import StrataArgumentError, UnsupportedInputError
from app.core.exact_algebra import QPolynomial, TruncatedSeries, render_rational
from app.core.ff_census import (
    carlitz_limit,
    carlitz_table,
    euler_char,
    euler_table,
    hyde_stabilization,
    integer_valuedness_report,
    irr_count,
    necklace_count,
    partition_of_unity,
    stratum_count,
)
from app.core.graded_engine import (
    SymConvention,
    printed_form_comparison,
    stable_irr_series,
    stable_stratum_series,
    stratum_assertion_audit,
)
from app.core.partitions import (
    enumerate_partitions,
    parse_partition,
    r_minimiser_count,
    r_minimizers,
    r_of_degree,
    refinement_covers,
)
from app.core.spectral_window import (
    bounds_report,
    dim_bound_check,
    e1_window,
    render_e1_grid,
    stable_betti_window,
    vanishing_audit,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"
FORMATS = ("json", "csv", "md")


@dataclass
class Report:
    """One emitted document: the JSON payload and its tabular view."""

    command: str
    payload: Dict[str, Any]
    columns: Tuple[str, ...] = ()
    rows: List[Dict[str, Any]] = field(default_factory=list)
    ok: bool = True
    title: str = ""
    markdown_extra: str = ""
    csv_renderer: Optional[Callable[[List[Dict[str, Any]]], str]] = None

    def document(self) -> Dict[str, Any]:
        doc = {"command": self.command, "schema_version": SCHEMA_VERSION, "ok": self.ok}
        doc.update(self.payload)
        return doc


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _json_default(value: Any) -> Any:
    if isinstance(value, Rational):
        return render_rational(value)
    if isinstance(value, QPolynomial):
        return value.to_dict()
    if isinstance(value, TruncatedSeries):
        return value.to_dict()
    raise TypeError(f"cannot serialise {type(value).__name__}")


JSON_SAFE_INT = 2 ** 53


def _json_safe(value: Any) -> Any:
    """Integers outside the exactly-representable double range become strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) > JSON_SAFE_INT else value
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def render_json(report: Report) -> str:
    return json.dumps(_json_safe(report.document()), sort_keys=True, indent=2, ensure_ascii=False, default=_json_default) + "\n"


def render_csv(report: Report) -> str:
    if report.csv_renderer is not None:
        return report.csv_renderer(report.rows)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(report.columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    writer.writerows(report.rows)
    return buffer.getvalue()


def render_markdown(report: Report) -> str:
    lines = [f"# {report.title or report.command}", ""]
    if report.columns:
        lines.append("| " + " | ".join(report.columns) + " |")
        lines.append("|" + "---|" * len(report.columns))
        for row in report.rows:
            lines.append("| " + " | ".join(str(row.get(col, "")) for col in report.columns) + " |")
        lines.append("")
    if report.markdown_extra:
        lines.append(report.markdown_extra.rstrip("\n"))
        lines.append("")
    return "\n".join(lines)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "csv":
        return render_csv(report)
    if fmt == "md":
        return render_markdown(report)
    raise StrataArgumentError(f"unknown format {fmt!r}; expected one of {FORMATS}")


@lru_cache(maxsize=None)
def load_schema(command: str) -> Dict[str, Any]:
    path = SCHEMA_DIR / f"{command}.json"
    if not path.exists():
        raise StrataArgumentError(f"no schema shipped for command {command!r}")
    return json.loads(path.read_text(encoding="utf-8"))


def validate_document(document: Dict[str, Any]) -> None:
    """Raises jsonschema.ValidationError if the document breaks its command's schema."""
    jsonschema.validate(instance=document, schema=load_schema(document["command"]))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def _is_prime_power(q: int) -> bool:
    return isinstance(q, int) and q >= 2 and len(factorint(q)) == 1


def count_report(d: int, n: int, q: Optional[int] = None, symbolic: bool = True) -> Report:
    """|Irr_{d,n}(F_q)| and every stratum count, symbolically and/or at q."""
    if q is not None and not _is_prime_power(q):
        raise StrataArgumentError(f"q must be a prime power, got {q!r}")
    poly = irr_count(d, n)
    rows = []
    strata = []
    for lam in enumerate_partitions(d):
        value = stratum_count(lam, n)
        entry = {"partition": str(lam), "polynomial": value.render()}
        if q is not None:
            entry["value"] = str(value.evaluate_int(q))
        strata.append(entry)
        rows.append(entry)
    unity = partition_of_unity(d, n)
    integral = integer_valuedness_report(d, n)
    payload: Dict[str, Any] = {
        "d": d,
        "n": n,
        "q": q,
        "irreducible": {
            "polynomial": poly.render(),
            "coefficients": poly.to_dict() if symbolic else None,
            "value": None if q is None else str(poly.evaluate_int(q)),
            "value_at_1": render_rational(poly.evaluate(1)),
        },
        "strata": strata,
        "partition_of_unity": unity["holds"],
        "integer_valued": integral["integer_valued"],
        "euler_matches_q1": poly.evaluate(1) == euler_char(d, n),
    }
    if n == 1:
        payload["necklace_agrees"] = poly == necklace_count(d)
    ok = payload["partition_of_unity"] and payload["integer_valued"] and payload["euler_matches_q1"]
    columns = ("partition", "polynomial") + (("value",) if q is not None else ())
    return Report("count", payload, columns, rows, ok=ok, title=f"Irr_{{{d},{n}}} point counts")


def euler_report(d_max: int, n_max: int, threads: Optional[int] = None) -> Report:
    table = euler_table(d_max, n_max, threads)
    rows = [{"d": r["d"], "n": r["n"], "chi": str(r["chi"])} for r in table]
    # χ_c(Irr_{1,n}) = n, and 0 for every d >= 2
    ok = all((r["chi"] == r["n"]) if r["d"] == 1 else (r["chi"] == 0) for r in table)
    payload = {"d_max": d_max, "n_max": n_max, "table": rows, "vanishing_holds": ok}
    return Report("euler", payload, ("d", "n", "chi"), rows, ok=ok, title="Compactly supported Euler characteristics")


def carlitz_report(q: int, n: int, d_max: int, threads: Optional[int] = None) -> Report:
    table = carlitz_table(q, n, d_max, threads)
    limit = carlitz_limit(q)
    rows = [row.to_dict() for row in table]
    ratios = [row.ratio for row in table if row.d >= 2]
    increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
    gap = abs(limit - table[-1].ratio)
    payload = {
        "q": q,
        "n": n,
        "d_max": d_max,
        "limit": render_rational(limit),
        "rows": rows,
        "increasing_from_d2": increasing,
        "final_gap": render_rational(gap),
        "final_gap_decimal": str(gap.evalf(15)),
    }
    return Report("carlitz", payload, ("d", "count", "ratio", "decimal"), rows, title=f"Carlitz ratios, q={q}, n={n}")


def hyde_report(d: int, window: int, n_max: int, threads: Optional[int] = None) -> Report:
    result = hyde_stabilization(d, window, n_max, threads)
    rows = [
        {"n": n, **{f"q^{k}": render_rational(c) for k, c in enumerate(coeffs)}}
        for n, coeffs in result.rows
    ]
    columns = ("n",) + tuple(f"q^{k}" for k in range(window + 1))
    return Report("hyde", result.to_dict(), columns, rows, ok=result.found, title=f"Low coefficients of Irr_{{{d},n}}")


def series_report(
    d: Optional[int],
    order: int,
    conv: SymConvention | str,
    partition: Optional[str] = None,
) -> Report:
    conv = SymConvention.parse(conv)
    if partition is not None:
        lam = parse_partition(partition)
        series = stable_stratum_series(lam, order, conv)
        payload = {"partition": str(lam), "order": order, "convention": conv.value, "series": series.to_dict(), "rendered": series.render()}
        rows = [{"degree": k, "dim": str(c)} for k, c in enumerate(series.coeffs)]
        return Report("series", payload, ("degree", "dim"), rows, title=f"Stable H^*_c(T_{lam})")
    if d is None:
        raise StrataArgumentError("give either -d or --partition")
    if d > config.STABLE_SERIES_MAX_PART:
        raise UnsupportedInputError(
            f"no stable series pipeline for d={d}; use `betti -d {d}` for the spectral-window result (d <= 4)"
        )
    series = stable_irr_series(d, order, conv)
    comparison = printed_form_comparison(d, order, conv)
    payload = {
        "d": d,
        "order": order,
        "convention": conv.value,
        "series": series.to_dict(),
        "rendered": series.render(),
        "printed_comparison": comparison.to_dict(),
    }
    rows = [
        {"degree": k, "dim": str(c), "printed": str(comparison.expected[k])}
        for k, c in enumerate(series.coeffs)
    ]
    return Report("series", payload, ("degree", "dim", "printed"), rows, title=f"Stable Poincaré series P_{d}")


def betti_report(d: int, max_degree: int, conv: SymConvention | str) -> Report:
    result = stable_betti_window(d, max_degree, conv)
    rows = [{"degree": i, "betti": str(v)} for i, v in sorted(result.values.items())]
    return Report("betti", result.to_dict(), ("degree", "betti"), rows, title=f"Stable Betti numbers b_i({d})")


def e1_report(d: int, max_total_degree: int, conv: SymConvention | str) -> Report:
    window = e1_window(d, max_total_degree, conv)
    betti = stable_betti_window(d, max_total_degree + 1, conv)
    payload = window.to_dict()
    payload["rules"] = [rule.to_dict() for rule in betti.rules]
    payload["betti"] = {str(i): v.to_json() for i, v in sorted(betti.values.items())}
    rows = [
        {"p": p, "degree": k, "partition": str(lam), "dim": dim}
        for (p, k), entries in sorted(window.entries.items())
        for lam, dim in entries
    ]
    covers = refinement_covers(d)
    poset = "Refinement covers (finer < coarser):\n\n" + "\n".join(f"- {lam} < {mu}" for lam, mu in covers)
    return Report(
        "e1",
        payload,
        ("p", "degree", "partition", "dim"),
        rows,
        title=f"E1 window for d={d}",
        markdown_extra=render_e1_grid(window) + "\n" + poset + "\n",
    )


def bounds_document(d: int, n: int) -> Report:
    report = bounds_report(d, n)
    rows = []
    for key, value in report.items():
        if key in ("d", "n"):
            continue
        if isinstance(value, dict):
            shown = value.get("statement") or value.get("bound") or value.get("ranks")
        else:
            shown = value
        rows.append({"name": key, "value": "" if shown is None else str(shown)})
    return Report("bounds", report, ("name", "value"), rows, title=f"Thresholds for d={d}, n={n}")


def brute_report(params: Sequence[Tuple[int, int, int]], threads: Optional[int] = None) -> Report:
    outcome = cross_validate(params, threads)
    rows = [row for result in outcome["results"] for row in result["census"]]
    for row in rows:
        row["count"] = str(row["count"])
    payload = {"params": [list(t) for t in params], "pass": outcome["pass"], "results": outcome["results"]}
    return Report(
        "brute", payload, CENSUS_COLUMNS, rows,
        ok=outcome["pass"], title="Brute-force census", csv_renderer=census_csv,
    )


def audit_report(d_max: int = 4, r_max: int = 50) -> Report:
    vanishing = vanishing_audit(d_max)
    r_rows = []
    for d in range(1, r_max + 1):
        # explicit minimiser lists only where enumerating partitions is cheap
        minimizers = [str(m) for m in r_minimizers(d)] if d <= 12 else None
        all_ones = ["+".join(["1"] * d)] if d > 1 else []
        r_rows.append({
            "d": d,
            "r": r_of_degree(d),
            "closed_form": 2 * d + 1 if d > 1 else 2,
            "minimizers": r_minimiser_count(d),
            "unique_all_ones": None if minimizers is None else minimizers == all_ones,
        })
    r_ok = all(row["r"] == row["closed_form"] and (row["d"] == 1 or row["minimizers"] == 1) for row in r_rows)
    assertions = stratum_assertion_audit()
    payload = {
        "vanishing": vanishing,
        "r_function": {"holds": r_ok, "rows": r_rows},
        "stratum_assertions": assertions,
    }
    ok = bool(vanishing["holds"]) and r_ok
    return Report("audit", payload, ("d", "r", "closed_form", "minimizers"), r_rows, ok=ok, title="Vanishing and r-function audit")


def dims_report(d: int, n: int) -> Report:
    check = dim_bound_check(d, n)
    return Report(
        "dims",
        check,
        ("partition", "dimension", "within", "equal"),
        check["rows"],
        ok=check["holds"] and check["tight_only_at_expected"] is not False,
        title=f"Stratum dimensions for d={d}, n={n}",
    )
