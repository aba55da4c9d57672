"""Command-line front door.

Subcommands: an (complexity + witness), price (European/American), table
(static-vs-dynamic values), trend (per-expiry summary), run-option (exact
price and policy simulation), perturb (Hamming-ball sweep), serve (HTTP API),
bench (kernel comparison).

Exit codes: 0 success, 2 usage error, 3 over a resource limit.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click

from complexopt import complexity, kernel, nfa, pricing, robustness, run_option
from complexopt.complexity import ComplexityCache, LimitExceeded
from complexopt.pricing import MarketParams, format_decimal, truncate_decimal

EXIT_LIMIT = 3


def _cache_from(path: str | None) -> ComplexityCache:
    if path:
        return ComplexityCache(path)
    return complexity.default_cache()


def _params_from(rate, p, u, d) -> MarketParams:
    try:
        if u is not None or d is not None:
            if u is None or d is None:
                raise click.UsageError("--u and --d must be given together")
            return MarketParams.from_factors(rate, u, d)
        return MarketParams(Fraction(str(rate)), Fraction(str(p)))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _echo_rows(rows: list[dict], fmt: str, columns: list[str]) -> None:
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
        click.echo(buf.getvalue().rstrip("\n"))
    else:
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in columns}
        click.echo("  ".join(c.ljust(widths[c]) for c in columns))
        for r in rows:
            click.echo("  ".join(str(r[c]).ljust(widths[c]) for c in columns))


format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json", "csv"]), default="table", show_default=True
)
cache_option = click.option(
    "--cache", "cache_path", envvar=complexity.CACHE_PATH_ENV, default=None,
    help="Complexity memo file (created if missing).",
)


@click.group()
@click.version_option()
def main():
    """Complexity options toolkit: automatic complexity, deficiency pricing,
    run options, and perturbation reports."""


@main.command("an")
@click.argument("string")
@format_option
@cache_option
@click.option("--limit", type=int, default=complexity.DEFAULT_SEARCH_LIMIT, show_default=True,
              help="Longest string the search will accept.")
def cmd_an(string: str, fmt: str, cache_path: str | None, limit: int):
    """Complexity, deficiency, and witness automaton of STRING (0/1 or H/T)."""
    try:
        bits = complexity.normalize_ticks(string)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        complexity.ensure_within_limit(len(bits), limit)
    except LimitExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_LIMIT)
    result = complexity.an_complexity(bits, _cache_from(cache_path))
    if fmt == "json":
        click.echo(json.dumps(result.to_json_dict(), indent=2))
        return
    d = complexity.deficiency(bits)
    click.echo(f"string      {bits}")
    click.echo(f"complexity  {result.complexity}")
    click.echo(f"bound       {d.bound}")
    click.echo(f"deficiency  {d.deficiency}")
    click.echo(f"witness     {' '.join(str(s) for s in result.witness)}")
    click.echo(f"automaton   {nfa.to_text(result.witness_automaton)}")


@main.command("price")
@click.option("--style", type=click.Choice(["european", "american"]), required=True)
@click.option("--n", "expiry", type=int, required=True)
@click.option("--rate", default="0", show_default=True)
@click.option("--p", default="0.5", show_default=True, help="Risk-neutral up probability.")
@click.option("--u", type=str, default=None, help="Up factor (with --d, overrides --p).")
@click.option("--d", type=str, default=None, help="Down factor.")
@click.option("--tree", is_flag=True, help="Emit the full node tree (american only).")
@click.option("--precision", type=int, default=6, show_default=True)
@format_option
@cache_option
@click.option("--limit", type=int, default=complexity.DEFAULT_TREE_LIMIT, show_default=True)
def cmd_price(style, expiry, rate, p, u, d, tree, precision, fmt, cache_path, limit):
    """Price the deficiency option of expiry N."""
    if expiry < 0:
        raise click.UsageError("--n must be nonnegative")
    params = _params_from(rate, p, u, d)
    cache = _cache_from(cache_path)
    try:
        if style == "european":
            value = pricing.european_price(expiry, params, cache, limit=limit)
            payload = {
                "style": style,
                "n": expiry,
                "rate": str(params.rate),
                "p": str(params.up_prob),
                "value": format_decimal(value, precision),
                "value_exact": str(value),
            }
        else:
            price_tree = pricing.american_price(expiry, params, cache, limit=limit)
            payload = price_tree.to_json_dict(precision)
            if not tree:
                payload.pop("nodes")
    except LimitExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_LIMIT)
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(payload["value"])
        if tree and "nodes" in payload:
            for prefix, node in payload["nodes"].items():
                label = prefix or "(root)"
                flag = " exercise" if node["exercise"] else ""
                click.echo(f"  {label:{expiry}}  value {node['value']}{flag}")


@main.command("table")
@click.option("--max-n", type=int, default=12, show_default=True)
@click.option("--precision", type=int, default=3, show_default=True,
              help="Digits kept (by truncation, as the reference table prints).")
@format_option
@cache_option
@click.option("--limit", type=int, default=complexity.DEFAULT_TREE_LIMIT, show_default=True)
def cmd_table(max_n, precision, fmt, cache_path, limit):
    """Static vs dynamic exercise values for even expiries at zero rate."""
    cache = _cache_from(cache_path)
    try:
        rows = pricing.static_table(max_n, cache, limit=limit)
    except LimitExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_LIMIT)
    printable = [
        {
            "n": r["n"],
            "expected_deficiency": truncate_decimal(r["expected_deficiency"], precision),
            "relation": r["relation"],
            "american": truncate_decimal(r["american"], precision),
        }
        for r in rows
    ]
    _echo_rows(printable, fmt, ["n", "expected_deficiency", "relation", "american"])


@main.command("trend")
@click.option("--max-n", type=int, default=12, show_default=True)
@click.option("--rate", default="0", show_default=True)
@click.option("--p", default="0.5", show_default=True)
@click.option("--precision", type=int, default=6, show_default=True)
@format_option
@cache_option
@click.option("--limit", type=int, default=complexity.DEFAULT_TREE_LIMIT, show_default=True)
def cmd_trend(max_n, rate, p, precision, fmt, cache_path, limit):
    """Expiry-by-expiry summary (n, mean deficiency, European, American) for
    inspecting growth at zero rate or the finite trend at positive rates."""
    params = _params_from(rate, p, None, None)
    cache = _cache_from(cache_path)
    try:
        rows = []
        for n, american in pricing.trend_report(max_n, params, cache, limit=limit):
            rows.append(
                {
                    "n": n,
                    "expected_deficiency": format_decimal(
                        pricing.expected_deficiency(n, cache), precision
                    ),
                    "european": format_decimal(
                        pricing.european_price(n, params, cache), precision
                    ),
                    "american": format_decimal(american, precision),
                }
            )
    except LimitExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_LIMIT)
    _echo_rows(rows, fmt, ["n", "expected_deficiency", "european", "american"])


@main.command("run-option")
@click.option("--N", "horizon", type=int, required=True)
@click.option("--t", "slack", default="auto", show_default=True,
              help="Slack below the expected longest run; 'auto' scans for the best.")
@click.option("--rate", default="0", show_default=True)
@click.option("--p", default="0.5", show_default=True)
@click.option("--samples", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
def cmd_run_option(horizon, slack, rate, p, samples, seed, fmt):
    """Exact run-option price, slack choice, and simulated policy value."""
    if horizon < 16:
        raise click.UsageError("--N must be at least 16 for the slack machinery")
    if slack != "auto":
        try:
            slack = int(slack)
        except ValueError:
            raise click.UsageError("--t must be an integer or 'auto'") from None
    params = _params_from(rate, p, None, None)
    row = run_option.run_option_report(
        horizon, params, slack=None if slack == "auto" else slack, samples=samples, seed=seed
    )
    columns = list(row.keys())
    _echo_rows([{k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in row.items()}], fmt, columns)


@main.command("perturb")
@click.argument("string")
@click.option("--measure", type=click.Choice(list(robustness.MEASURES)), default="an", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@format_option
@cache_option
@click.option("--limit", type=int, default=complexity.DEFAULT_SEARCH_LIMIT, show_default=True)
def cmd_perturb(string, measure, threads, fmt, cache_path, limit):
    """Evaluate the measure across the radius-1 Hamming ball of STRING."""
    try:
        bits = complexity.normalize_ticks(string)
        if not bits:
            raise ValueError("need a nonempty string")
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    try:
        report = robustness.hamming_sweep(
            bits, measure, cache=_cache_from(cache_path), limit=limit, threads=threads
        )
    except LimitExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_LIMIT)
    if fmt == "json":
        click.echo(json.dumps(report.to_json_dict(), indent=2))
        return
    rows = [
        {"position": e.position, "string": e.string, "value": e.value}
        for e in report.entries
    ]
    _echo_rows(rows, fmt, ["position", "string", "value"])
    if fmt == "table":
        click.echo(
            f"base {report.base_value}; ball min {report.min_value} "
            f"max {report.max_value} mean {float(report.mean_value):.3f}"
        )


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--limit", type=int, default=complexity.DEFAULT_TREE_LIMIT, show_default=True,
              help="Largest expiry/price tree the API will compute.")
@click.option("--search-limit", type=int, default=complexity.DEFAULT_SEARCH_LIMIT, show_default=True)
@cache_option
@click.option("--frontend", "frontend_dir", default=None, help="Static UI directory to mount at /.")
def cmd_serve(host, port, limit, search_limit, cache_path, frontend_dir):
    """Run the HTTP service (complexity lookups, pricing, game sessions)."""
    import uvicorn

    from complexopt.service import create_app

    app = create_app(
        tree_limit=limit,
        search_limit=search_limit,
        cache=_cache_from(cache_path),
        frontend_dir=frontend_dir,
    )
    uvicorn.run(app, host=host, port=port)


@main.command("bench")
@click.option("--lengths", default="14,16,18", show_default=True,
              help="Comma-separated string lengths to benchmark.")
@click.option("--per-length", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
def cmd_bench(lengths, per_length, seed, fmt):
    """Compare the compiled and pure-Python search kernels."""
    try:
        sizes = [int(s) for s in lengths.split(",") if s]
    except ValueError:
        raise click.UsageError("--lengths must be comma-separated integers") from None
    rows = kernel.benchmark(sizes, per_length=per_length, seed=seed)
    printable = [
        {
            "string": r["string"],
            "value": r["value"],
            "pure_ms": f"{r['pure_ms']:.2f}",
            "compiled_ms": "-" if r["compiled_ms"] is None else f"{r['compiled_ms']:.2f}",
            "speedup": "-" if r["speedup"] is None else f"{r['speedup']:.1f}x",
        }
        for r in rows
    ]
    _echo_rows(printable, fmt, ["string", "value", "pure_ms", "compiled_ms", "speedup"])
    if not kernel.COMPILED:
        click.echo("compiled kernel not built; showing pure-python timings only", err=True)
