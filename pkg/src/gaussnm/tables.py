"""CSV files: tabulated channel families and analysis reports."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .channels import GaussianChannel, is_cp
from .divisibility import ChannelFamily, NMReport

__all__ = [
    "TableError",
    "ChannelTable",
    "column_names",
    "read_channel_table",
    "write_channel_table",
    "sample_family",
    "tabulated_family",
    "validate_channel_table",
    "write_report_csv",
    "write_svg",
]

TABLE_TOL = 1e-9


class TableError(ValueError):
    pass


def fmt(v: float) -> str:
    return repr(float(v))


def column_names(n_modes: int) -> list[str]:
    dim = 2 * n_modes
    idx = [f"{i}_{j}" for i in range(1, dim + 1) for j in range(1, dim + 1)]
    return ["t"] + [f"x_{k}" for k in idx] + [f"y_{k}" for k in idx]


@dataclass(frozen=True)
class ChannelTable:
    """Rows of ``(t, X(t,0), Y(t,0))`` as read from or written to CSV."""

    n_modes: int
    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def channel(self, row: int) -> GaussianChannel:
        return GaussianChannel(self.xs[row], self.ys[row])


def _data_lines(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            yield lineno, stripped


def read_channel_table(path, strict: bool = True) -> ChannelTable:
    """Parse a tabulated family file.

    Malformed content raises :class:`TableError` naming the data row (0-based)
    and file line. With ``strict`` the family invariants (increasing times
    from 0, identity first row, symmetric ``Y``) are also enforced.
    """
    path = Path(path)
    lines = list(_data_lines(path))
    if not lines:
        raise TableError(f"{path}: no header row")
    header_line, header = lines[0]
    names = [c.strip() for c in next(csv.reader([header]))]
    n_cols = len(names) - 1
    n_modes = int(round(math.sqrt(n_cols / 8.0))) if n_cols > 0 else 0
    if n_modes < 1 or names != column_names(n_modes):
        raise TableError(f"{path}: line {header_line}: header must be t, x_i_j..., y_i_j... for some number of modes")
    dim = 2 * n_modes
    times, xs, ys = [], [], []
    for row, (lineno, line) in enumerate(lines[1:]):
        cells = next(csv.reader([line]))
        if len(cells) != len(names):
            raise TableError(f"row {row} (line {lineno}): expected {len(names)} columns, got {len(cells)}")
        try:
            vals = np.array([float(c) for c in cells])
        except ValueError as exc:
            raise TableError(f"row {row} (line {lineno}): {exc}") from None
        if not np.all(np.isfinite(vals)):
            raise TableError(f"row {row} (line {lineno}): non-finite entry")
        times.append(vals[0])
        xs.append(vals[1 : 1 + dim * dim].reshape(dim, dim))
        ys.append(vals[1 + dim * dim :].reshape(dim, dim))
    if not times:
        raise TableError(f"{path}: no data rows")
    table = ChannelTable(n_modes, np.array(times), np.array(xs), np.array(ys))
    if strict:
        _raise_first(table)
    return table


def table_invariant_problems(table: ChannelTable) -> list[tuple[int, str]]:
    """``(row, message)`` for every violated family invariant, ordered by row."""
    problems = []
    dim = 2 * table.n_modes
    if table.times[0] != 0.0:
        problems.append((0, f"first time must be 0, got {table.times[0]!r}"))
    if np.max(np.abs(table.xs[0] - np.eye(dim))) > TABLE_TOL or np.max(np.abs(table.ys[0])) > TABLE_TOL:
        problems.append((0, "channel at t = 0 is not the identity"))
    for row in range(1, table.times.size):
        if not table.times[row] > table.times[row - 1]:
            problems.append((row, "times must be strictly increasing"))
    for row, y in enumerate(table.ys):
        if np.max(np.abs(y - y.T)) > TABLE_TOL:
            problems.append((row, "Y is not symmetric"))
    return sorted(problems, key=lambda p: p[0])


def _raise_first(table: ChannelTable):
    problems = table_invariant_problems(table)
    if problems:
        row, msg = problems[0]
        raise TableError(f"row {row}: {msg}")


def validate_channel_table(table: ChannelTable, tol: float = 1e-10) -> list[tuple[int, float, bool, str]]:
    """Per-row check: ``(row, t, ok, message)``; each row's map from time 0 must be CP."""
    problems: dict[int, list[str]] = {}
    for row, msg in table_invariant_problems(table):
        problems.setdefault(row, []).append(msg)
    out = []
    for row, t in enumerate(table.times):
        msgs = list(problems.get(row, []))
        if not any("symmetric" in m for m in msgs):
            y = 0.5 * (table.ys[row] + table.ys[row].T)
            if not is_cp(GaussianChannel(table.xs[row], y), tol):
                msgs.append("map from t = 0 is not completely positive")
        out.append((row, float(t), not msgs, "; ".join(msgs) if msgs else "ok"))
    return out


def sample_family(fam: ChannelFamily, times) -> ChannelTable:
    times = np.asarray(times, dtype=float)
    chans = [fam.eval(float(t)) for t in times]
    return ChannelTable(fam.n_modes, times, np.array([c.x for c in chans]), np.array([c.y for c in chans]))


def write_channel_table(table: ChannelTable, path, comment: str | None = None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(column_names(table.n_modes))
        for t, x, y in zip(table.times, table.xs, table.ys):
            writer.writerow([fmt(t)] + [fmt(v) for v in x.ravel()] + [fmt(v) for v in y.ravel()])


def tabulated_family(table: ChannelTable, name: str = "tabulated") -> ChannelFamily:
    """Family interpolating each entry of ``X`` and ``Y`` with a cubic spline in ``t``."""
    if table.times.size < 2:
        raise TableError("a tabulated family needs at least two rows")
    _raise_first(table)
    n = table.times.size
    x_spline = CubicSpline(table.times, table.xs.reshape(n, -1), axis=0)
    y_spline = CubicSpline(table.times, table.ys.reshape(n, -1), axis=0)
    dim = 2 * table.n_modes

    def func(t: float) -> GaussianChannel:
        y = y_spline(t).reshape(dim, dim)
        return GaussianChannel(x_spline(t).reshape(dim, dim), 0.5 * (y + y.T))

    return ChannelFamily(table.n_modes, float(table.times[-1]), func, name=name)


def write_report_csv(report: NMReport, path):
    """Columns ``t, nu_1..nu_2N, f_1..f_2N, F``."""
    dim = report.samples[0].eigenvalues.size
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"nu_{k}" for k in range(1, dim + 1)] + [f"f_{k}" for k in range(1, dim + 1)] + ["F"])
        for s in report.samples:
            writer.writerow([fmt(s.t)] + [fmt(v) for v in s.eigenvalues] + [fmt(v) for v in s.f] + [fmt(s.big_f)])


def write_svg(report: NMReport, path, coefficients=None, title: str = ""):
    """Plot ``F(t)``; with a coefficient table, add ``Delta`` and ``gamma`` in a lower panel."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n_panels = 2 if coefficients is not None else 1
    fig, axes = plt.subplots(n_panels, 1, figsize=(6, 2.8 * n_panels), sharex=True, squeeze=False)
    ax = axes[0, 0]
    ax.plot(report.grid, report.big_f, lw=1.2)
    ax.set_ylabel("F(t)")
    if title:
        ax.set_title(title)
    if coefficients is not None:
        low = axes[1, 0]
        low.plot(report.grid, coefficients.delta(report.grid), lw=1.0, ls="-.", label="Delta")
        low.plot(report.grid, coefficients.gamma(report.grid), lw=1.0, label="gamma")
        low.axhline(0.0, color="0.6", lw=0.5)
        low.legend(frameon=False)
    axes[-1, 0].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
