"""Secular quantum Brownian motion (single mode, interaction picture rates).

For damping rate ``gamma(t)`` and diffusion ``Delta(t)`` the channel from
time 0 is ``X = exp(-Gamma/2) R(omega0 t)`` and ``Y = exp(-Gamma) Dtilde I``
with ``Gamma = 2 int gamma`` and ``Dtilde = int exp(Gamma(s)) Delta(s) ds``.
Only the bounded product ``P = exp(-Gamma) Dtilde`` is ever stored; it obeys
``P' = -2 gamma P + Delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from ..channels import GaussianChannel
from ..divisibility import ChannelFamily
from ._quad import QuadratureError

__all__ = [
    "QBMModel",
    "CoefficientTable",
    "rotation",
    "qbm_channel",
    "qbm_family",
    "qbm_F_closed_form",
    "default_nodes",
]


@dataclass(frozen=True)
class QBMModel:
    """``coeffs(t)`` returns ``(gamma(t), Delta(t))``."""

    omega0: float
    coeffs: Callable[[float], tuple[float, float]]

    def __post_init__(self):
        if not self.omega0 > 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]])


def qbm_channel(omega0: float, t: float, big_gamma: float, damped_diffusion: float) -> GaussianChannel:
    return GaussianChannel(
        math.exp(-0.5 * big_gamma) * rotation(omega0 * t),
        damped_diffusion * np.eye(2),
    )


@dataclass(frozen=True)
class CoefficientTable:
    """Rates and their running integrals on a strictly increasing grid.

    ``big_gamma`` and ``damped_diffusion`` are interpolated with cubic Hermite
    splines whose node slopes are the exact derivatives ``2 gamma`` and
    ``-2 gamma P + Delta``; the rates use their own slopes when provided and
    a cubic spline otherwise.
    """

    times: np.ndarray
    gamma_values: np.ndarray
    delta_values: np.ndarray
    big_gamma: np.ndarray
    damped_diffusion: np.ndarray
    gamma_slopes: np.ndarray | None = None
    delta_slopes: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be a strictly increasing 1-D grid")
        for name in ("gamma_values", "delta_values", "big_gamma", "damped_diffusion"):
            if np.shape(getattr(self, name)) != t.shape:
                raise ValueError(f"{name} must match the time grid")
        g = np.asarray(self.gamma_values, dtype=float)
        d = np.asarray(self.delta_values, dtype=float)
        big_g = np.asarray(self.big_gamma, dtype=float)
        p = np.asarray(self.damped_diffusion, dtype=float)
        splines = {
            "_big_gamma": CubicHermiteSpline(t, big_g, 2.0 * g),
            "_damped": CubicHermiteSpline(t, p, -2.0 * g * p + d),
            "_gamma": CubicHermiteSpline(t, g, self.gamma_slopes) if self.gamma_slopes is not None else CubicSpline(t, g),
            "_delta": CubicHermiteSpline(t, d, self.delta_slopes) if self.delta_slopes is not None else CubicSpline(t, d),
        }
        for key, value in splines.items():
            object.__setattr__(self, key, value)

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    def gamma(self, t):
        return self._gamma(t)

    def delta(self, t):
        return self._delta(t)

    def big_gamma_at(self, t):
        return self._big_gamma(t)

    def damped_diffusion_at(self, t):
        return self._damped(t)


def default_nodes(t_max: float, omega0: float, min_nodes: int = 801) -> np.ndarray:
    """Node grid with spacing at most 0.0025 and at most 0.0125/omega0.

    Rates come from differences of the interpolant over steps far below the
    spacing, so the O(h^3) slope error of the cubic Hermite interpolant sets
    the accuracy of ``F``; this spacing keeps it near 1e-6 relative.
    """
    h = min(0.0025, 0.0125 / omega0)
    n = max(min_nodes, int(math.ceil(t_max / h)) + 1)
    return np.linspace(0.0, t_max, n)


def solve_table(rhs, y0, nodes: np.ndarray) -> np.ndarray:
    """Integrate ``y' = rhs(t, y)`` onto ``nodes`` with an adaptive 8th-order Runge-Kutta scheme."""
    sol = solve_ivp(rhs, (nodes[0], nodes[-1]), y0, method="DOP853", t_eval=nodes, rtol=1e-12, atol=1e-14)
    if sol.status != 0:
        raise QuadratureError(f"coefficient integration failed: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise QuadratureError("coefficient integration produced non-finite values")
    return sol.y


def qbm_family(m: QBMModel, T: float, nodes: np.ndarray | None = None) -> ChannelFamily:
    """Channel family for supplied rates ``gamma(t)``, ``Delta(t)`` on ``[0, T]``."""
    if not T > 0.0:
        raise ValueError(f"T must be positive, got {T}")
    if nodes is None:
        nodes = default_nodes(T, m.omega0)

    def rhs(t, y):
        g, d = m.coeffs(t)
        return [2.0 * g, -2.0 * g * y[1] + d]

    big_g, p = solve_table(rhs, [0.0, 0.0], nodes)
    rates = np.array([m.coeffs(t) for t in nodes])
    table = CoefficientTable(nodes, rates[:, 0], rates[:, 1], big_g, p)
    return table_family(table, m.omega0, name="qbm")


def table_family(table: CoefficientTable, omega0: float, name: str = "qbm") -> ChannelFamily:
    def func(t: float) -> GaussianChannel:
        return qbm_channel(omega0, t, float(table.big_gamma_at(t)), float(table.damped_diffusion_at(t)))

    return ChannelFamily(1, table.t_max, func, name=name, coefficients=table)


def qbm_F_closed_form(gamma, delta):
    """``(|Delta - gamma| + |Delta + gamma|)/2 - Delta``; zero iff ``Delta >= |gamma|``."""
    gamma = np.asarray(gamma, dtype=float)
    delta = np.asarray(delta, dtype=float)
    # same quantity as max(|Delta|, |gamma|) - Delta, which is exact in floating point
    out = np.maximum(np.abs(delta), np.abs(gamma)) - delta
    return out if out.ndim else float(out)
