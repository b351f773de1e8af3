"""Command line entry point: ``gaussnm analyze | sweep | validate | export``."""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click
import numpy as np

from .config import AnalysisConfig, ConfigError, build_family, load_config
from .divisibility import total_nm
from .models import QuadratureError
from .tables import (
    TableError,
    read_channel_table,
    sample_family,
    validate_channel_table,
    write_channel_table,
    write_report_csv,
    write_svg,
)

EXIT_MARKOVIAN = 0
EXIT_ERROR = 1
EXIT_NON_MARKOVIAN = 3

_FAILURES = (ConfigError, TableError, QuadratureError, ValueError, OSError)


def _fail(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_ERROR)


def _load(config: str, rate_tol, eps0, points) -> AnalysisConfig:
    cfg = load_config(config)
    return cfg.with_overrides(rate_tol=rate_tol, eps0=eps0, n_points=points)


def _common(f):
    f = click.option("--points", type=int, default=None, help="Grid points (odd, >= 3).")(f)
    f = click.option("--eps0", type=float, default=None, help="Largest step for the rate extrapolation.")(f)
    f = click.option("--rate-tol", type=float, default=None, help="F(t) threshold for Markovianity.")(f)
    f = click.option("--config", "config", required=True, help="key = value configuration file.")(f)
    return f


@click.group()
def main():
    """Divisibility-based non-Markovianity of Gaussian channels."""


@main.command()
@_common
@click.option("--svg", is_flag=True, help="Also write report.svg.")
def analyze(config, rate_tol, eps0, points, svg):
    """Compute F(t) and N_total; exit 0 if Markovian, 3 if not."""
    try:
        cfg = _load(config, rate_tol, eps0, points)
        fam = build_family(cfg)
        report = total_nm(fam, cfg.t_start, cfg.t_end, cfg.n_points, cfg.eps0)
        out = cfg.output_path
        out.mkdir(parents=True, exist_ok=True)
        write_report_csv(report, out / "report.csv")
        summary = f"N_total = {report.total!r}"
        (out / "summary.txt").write_text(summary + "\n", encoding="utf-8")
        if svg:
            write_svg(report, out / "report.svg", fam.coefficients, title=fam.name)
    except _FAILURES as exc:
        _fail(str(exc))
    for w in report.warnings:
        click.echo(f"warning: {w}", err=True)
    click.echo(summary)
    markovian = report.is_markovian(cfg.rate_tol)
    click.echo("markovian" if markovian else "non-markovian")
    sys.exit(EXIT_MARKOVIAN if markovian else EXIT_NON_MARKOVIAN)


@main.command()
@_common
def sweep(config, rate_tol, eps0, points):
    """Tabulate N_total and the non-Markovian window over the configured x_values."""
    try:
        cfg = _load(config, rate_tol, eps0, points)
        if cfg.model != "qbm-ohmic":
            raise ConfigError("sweep needs model = qbm-ohmic")
        if len(cfg.x_values) < 2:
            raise ConfigError("sweep needs at least two x_values")
        rows = []
        for x in cfg.x_values:
            report = total_nm(build_family(cfg, x), cfg.t_start, cfg.t_end, cfg.n_points, cfg.eps0)
            length, first, last = report.window(cfg.rate_tol)
            rows.append((x, report.total, length, first, last))
        out = cfg.output_path
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "N_total", "window_length", "window_start", "window_end"])
            for row in rows:
                writer.writerow([repr(float(v)) for v in row])
    except _FAILURES as exc:
        _fail(str(exc))
    for x, total, length, first, last in rows:
        click.echo(f"x = {x:g}: N_total = {total!r}, window length = {length:g}")
    totals = [r[1] for r in rows]
    if all(a > b for a, b in zip(totals, totals[1:])):
        click.echo("N_total decreases with x")
    elif all(a < b for a, b in zip(totals, totals[1:])):
        click.echo("N_total increases with x")
    else:
        click.echo("N_total is not monotone in x")


@main.command()
@click.argument("table_file")
@click.option("--tol", type=float, default=1e-10, show_default=True, help="CP tolerance.")
def validate(table_file, tol):
    """Check a tabulated family file row by row; exit 0 if every row passes."""
    try:
        table = read_channel_table(table_file, strict=False)
    except _FAILURES as exc:
        _fail(str(exc))
    results = validate_channel_table(table, tol)
    for row, t, ok, msg in results:
        click.echo(f"row {row} t = {t!r}: {'pass' if ok else 'FAIL'}" + ("" if ok else f" ({msg})"))
    bad = [r for r in results if not r[2]]
    if bad:
        click.echo(f"{len(bad)} of {len(results)} rows failed", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(f"all {len(results)} rows pass")


@main.command()
@click.option("--config", "config", required=True, help="key = value configuration file.")
@click.option("--rows", type=int, default=2001, show_default=True, help="Number of table rows on [0, t_end].")
@click.argument("out_file")
def export(config, rows, out_file):
    """Write the configured family as a tabulated family CSV."""
    try:
        cfg = load_config(config)
        if rows < 2:
            raise ConfigError("rows must be >= 2")
        fam = build_family(cfg)
        table = sample_family(fam, np.linspace(0.0, cfg.t_end, rows))
        write_channel_table(table, out_file, comment=f"{fam.name} family, n_modes = {fam.n_modes}")
    except _FAILURES as exc:
        _fail(str(exc))
    click.echo(f"wrote {rows} rows to {Path(out_file)}")


if __name__ == "__main__":
    main()
