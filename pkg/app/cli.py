"""
Command-line surface. One subcommand per computation; every run emits a
single document (json, csv or md) on stdout or to --out, logs go to stderr.

Exit status: 0 on success, 1 when a verification fails, 2 on bad arguments
or requests outside what the engine supports.
"""

import logging
import sys
from typing import Callable, List, Tuple

import click

from app import configure_logging
from app.core import config
from app.core.errors import StrataArgumentError, StrataError
from app.core.report_engine import (
    FORMATS,
    Report,
    audit_report,
    betti_report,
    bounds_document,
    brute_report,
    carlitz_report,
    count_report,
    dims_report,
    e1_report,
    euler_report,
    hyde_report,
    render,
    series_report,
)

logger = logging.getLogger(__name__)

convention_option = click.option(
    "--convention",
    type=click.Choice(config.CONVENTIONS),
    default=config.STRATA_DEFAULT_CONVENTION,
    show_default=True,
    help="Symmetric-power sign convention (naive reproduces the d=4 diagram).",
)


def _run(ctx: click.Context, build: Callable[[], Report], strict: bool = True) -> None:
    """Build, render and emit a report; map engine errors onto exit codes."""
    try:
        report = build()
        text = render(report, ctx.obj["format"])
    except ValueError as e:
        # argument, unsupported-input and budget errors all derive from ValueError
        raise click.UsageError(str(e), ctx) from e
    except StrataError as e:
        logger.error("%s | failed | %s", ctx.info_name, e)
        raise click.ClickException(str(e)) from e

    with click.open_file(ctx.obj["out"], "w", encoding="utf-8") as sink:
        sink.write(text)
    if strict and not report.ok:
        logger.warning("%s | verification failed", ctx.info_name)
        ctx.exit(1)


@click.group()
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default="-", help="Output file (default stdout).")
@click.pass_context
def cli(ctx: click.Context, fmt: str, out: str) -> None:
    """Stable cohomology and point counts of spaces of irreducible polynomials."""
    configure_logging(sys.stderr)
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ctx.obj["out"] = out


@cli.command()
@click.option("-d", "d", type=int, required=True)
@click.option("-n", "n", type=int, required=True)
@click.option("--q", "q", type=int, default=None, help="Evaluate at this prime power.")
@click.option("--symbolic/--no-symbolic", default=True, show_default=True, help="Include exact coefficients.")
@click.pass_context
def count(ctx, d, n, q, symbolic):
    """|Irr_{d,n}(F_q)| as a polynomial in q, with every stratum count."""
    _run(ctx, lambda: count_report(d, n, q, symbolic))


@cli.command()
@click.option("--d-max", type=int, default=8, show_default=True)
@click.option("--n-max", type=int, default=6, show_default=True)
@click.pass_context
def euler(ctx, d_max, n_max):
    """Compactly supported Euler characteristics of Irr_{d,n}(C)."""
    _run(ctx, lambda: euler_report(d_max, n_max))


@cli.command()
@click.option("--q", "q", type=int, default=2, show_default=True)
@click.option("-n", "n", type=int, default=2, show_default=True)
@click.option("--d-max", type=int, default=10, show_default=True)
@click.pass_context
def carlitz(ctx, q, n, d_max):
    """Exact ratios |Irr_{d,n}(F_q)| / q^{B(d,n)-1} against q/(q-1)."""
    _run(ctx, lambda: carlitz_report(q, n, d_max))


@cli.command()
@click.option("-d", "d", type=int, required=True)
@click.option("--window", type=int, default=6, show_default=True, help="Highest power of q compared.")
@click.option("--n-max", type=int, default=12, show_default=True)
@click.pass_context
def hyde(ctx, d, window, n_max):
    """Detect where the low coefficients of |Irr_{d,n}| stop depending on n."""
    _run(ctx, lambda: hyde_report(d, window, n_max))


@cli.command()
@click.option("-d", "d", type=int, required=True)
@click.option("--max-degree", type=int, default=11, show_default=True)
@convention_option
@click.pass_context
def betti(ctx, d, max_degree, convention):
    """Stable Betti numbers b_i(d), i <= max-degree, for d <= 4."""
    _run(ctx, lambda: betti_report(d, max_degree, convention), strict=False)


@cli.command()
@click.option("-d", "d", type=int, required=True)
@click.option("--max-degree", type=int, default=10, show_default=True, help="Highest total degree in the window.")
@convention_option
@click.pass_context
def e1(ctx, d, max_degree, convention):
    """E1 window of the stratification spectral sequence."""
    _run(ctx, lambda: e1_report(d, max_degree, convention), strict=False)


@cli.command()
@click.option("-d", "d", type=int, required=True)
@click.option("-n", "n", type=int, required=True)
@click.pass_context
def bounds(ctx, d, n):
    """Every stability, vanishing and dimension threshold for (d, n)."""
    _run(ctx, lambda: bounds_document(d, n))


def _parse_params(values: Tuple[str, ...]) -> List[Tuple[int, int, int]]:
    params = []
    for raw in values:
        pieces = raw.replace(" ", "").split(",")
        if len(pieces) != 3:
            raise StrataArgumentError(f"--params expects d,n,p triples, got {raw!r}")
        try:
            params.append(tuple(int(x) for x in pieces))
        except ValueError:
            raise StrataArgumentError(f"--params expects integers, got {raw!r}") from None
    return params


DEFAULT_BRUTE_PARAMS = ("2,2,2", "3,2,2", "2,2,3", "2,3,2")


@cli.command()
@click.option("--params", "raw_params", multiple=True, default=DEFAULT_BRUTE_PARAMS, show_default=True, help="d,n,p triple; repeatable.")
@click.option("--verify/--no-verify", default=True, show_default=True, help="Exit 1 if any comparison fails.")
@click.pass_context
def brute(ctx, raw_params, verify):
    """Brute-force sieve over F_p, cross-validated against the counting polynomials."""
    _run(ctx, lambda: brute_report(_parse_params(raw_params)), strict=verify)


@cli.command()
@click.option("-d", "d", type=int, default=None)
@click.option("--partition", default=None, help='Stratum instead of Irr_d, e.g. "2+1+1".')
@click.option("--order", type=int, default=20, show_default=True)
@convention_option
@click.pass_context
def series(ctx, d, partition, order, convention):
    """Stable Poincaré series of Irr_d (d <= 3) or of a stratum."""
    _run(ctx, lambda: series_report(d, order, convention, partition), strict=False)


@cli.command()
@click.option("--d-max", type=int, default=4, show_default=True)
@click.option("--r-max", type=int, default=50, show_default=True)
@click.pass_context
def audit(ctx, d_max, r_max):
    """Vanishing below r(λ), the r-function closed form and the stratum assertions."""
    _run(ctx, lambda: audit_report(d_max, r_max))


@cli.command()
@click.option("-d", "d", type=int, required=True)
@click.option("-n", "n", type=int, required=True)
@click.pass_context
def dims(ctx, d, n):
    """Complex dimensions of the strata against the dimension bound."""
    _run(ctx, lambda: dims_report(d, n))


def main() -> None:
    cli(obj={})
