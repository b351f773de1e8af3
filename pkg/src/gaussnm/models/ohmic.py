"""Ohmic bath with exponential cut-off, ``J(w) = w exp(-w/wc)``, at second order.

Kernels (coupling ``alpha^2`` folded in)::

    mu(s)    = alpha^2 int_0^inf J(w) sin(w s) dw
    kappa(s) = alpha^2 int_0^inf J(w) c(w, T) cos(w s) dw

with ``c = coth(w / 2T)``, replaced by ``2T / w`` in the high-temperature
regime. The secular rates are ``gamma(t) = int_0^t mu(s) sin(w0 s) ds`` and
``Delta(t) = int_0^t kappa(s) cos(w0 s) ds``.

Closed forms in ``u = wc s``::

    mu(s)            = 2 alpha^2 wc^2 u / (1 + u^2)^2
    kappa_high(s)    = 2 alpha^2 T wc / (1 + u^2)
    kappa_zero_T(s)  = alpha^2 wc^2 (1 - u^2) / (1 + u^2)^2

At finite low temperature ``coth = 1 + 2 n(w)`` and the Bose factor is
expanded as ``sum_k exp(-k w / T)``; each term integrates to
``Re 1/(a_k - i s)^2`` with ``a_k = 1/wc + k/T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..divisibility import ChannelFamily
from ._quad import quad
from .qbm import CoefficientTable, default_nodes, solve_table, table_family

__all__ = [
    "OhmicBath",
    "DEFAULT_TEMPERATURE",
    "dissipation_kernel",
    "noise_kernel",
    "ohmic_coefficients",
    "ohmic_coefficient_table",
    "ohmic_qbm_family",
]

DEFAULT_TEMPERATURE = {"high": 100.0, "low": 0.0}
_BOSE_TERMS = 400


@dataclass(frozen=True)
class OhmicBath:
    """Ohmic bath parameters.

    Args:
        coupling: alpha^2, folded into the spectral density.
        x: cut-off ratio wc / w0.
        temperature_regime: ``"high"`` or ``"low"``.
        temperature: in units of wc; defaults to 100 (high) or 0 (low).
    """

    coupling: float = 0.01
    x: float = 0.1
    temperature_regime: str = "high"
    temperature: float | None = None

    def __post_init__(self):
        if self.temperature_regime not in DEFAULT_TEMPERATURE:
            raise ValueError(f"temperature_regime must be 'high' or 'low', got {self.temperature_regime!r}")
        if self.temperature is None:
            object.__setattr__(self, "temperature", DEFAULT_TEMPERATURE[self.temperature_regime])
        if not self.coupling > 0.0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")
        if not self.x > 0.0:
            raise ValueError(f"x must be positive, got {self.x}")
        if not self.temperature >= 0.0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.temperature_regime == "high" and self.temperature == 0.0:
            raise ValueError("the high-temperature regime needs a positive temperature")


def dissipation_kernel(b: OhmicBath, s, omega_c: float = 1.0):
    u = omega_c * np.asarray(s, dtype=float)
    return b.coupling * 2.0 * omega_c**2 * u / (1.0 + u * u) ** 2


def _thermal_correction(s: np.ndarray, omega_c: float, temp: float) -> np.ndarray:
    """``2 int J(w) n(w) cos(w s) dw`` for temperature ``temp`` in frequency units."""
    beta = 1.0 / temp
    k = np.arange(1, _BOSE_TERMS + 1)[:, None]
    a = 1.0 / omega_c + k * beta
    s2 = s[None, :] ** 2
    head = np.sum((a * a - s2) / (a * a + s2) ** 2, axis=0)
    # Euler-Maclaurin tail of sum_{k > K} Re (a_k - i s)^-2, anchored at k = K
    z = 1.0 / omega_c + _BOSE_TERMS * beta - 1j * s
    tail = np.real(1.0 / (beta * z) - 0.5 / z**2 + beta / (6.0 * z**3) - beta**3 / (30.0 * z**5))
    return 2.0 * (head + tail)


def noise_kernel(b: OhmicBath, s, omega_c: float = 1.0):
    s_arr = np.asarray(s, dtype=float)
    u = omega_c * s_arr
    temp = b.temperature * omega_c
    if b.temperature_regime == "high":
        out = 2.0 * temp * omega_c / (1.0 + u * u)
    else:
        out = omega_c**2 * (1.0 - u * u) / (1.0 + u * u) ** 2
        if temp > 0.0:
            out = out + _thermal_correction(np.atleast_1d(s_arr), omega_c, temp).reshape(s_arr.shape)
    return b.coupling * out


def ohmic_coefficients(b: OhmicBath, omega0: float, t: float) -> tuple[float, float]:
    """``(gamma(t), Delta(t))`` for system frequency ``omega0`` (so ``wc = x * omega0``).

    Computed by adaptive oscillatory quadrature of the kernels over ``[0, t]``.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    if not omega0 > 0.0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    omega_c = b.x * omega0
    gamma = quad(lambda s: float(dissipation_kernel(b, s, omega_c)), 0.0, t, weight="sin", wvar=omega0)
    delta = quad(lambda s: float(noise_kernel(b, s, omega_c)), 0.0, t, weight="cos", wvar=omega0)
    return gamma, delta


def ohmic_coefficient_table(b: OhmicBath, T_end: float, nodes: np.ndarray | None = None) -> CoefficientTable:
    """Rates and running integrals in reduced time ``tau = wc t`` (``wc = 1``, ``w0 = 1/x``)."""
    if not T_end > 0.0:
        raise ValueError(f"T_end must be positive, got {T_end}")
    omega0 = 1.0 / b.x
    if nodes is None:
        nodes = default_nodes(T_end, omega0)

    def rhs(tau, y):
        g, d, _, p = y
        return [
            float(dissipation_kernel(b, tau)) * math.sin(omega0 * tau),
            float(noise_kernel(b, tau)) * math.cos(omega0 * tau),
            2.0 * g,
            -2.0 * g * p + d,
        ]

    g, d, big_g, p = solve_table(rhs, [0.0, 0.0, 0.0, 0.0], nodes)
    return CoefficientTable(
        nodes,
        g,
        d,
        big_g,
        p,
        gamma_slopes=dissipation_kernel(b, nodes) * np.sin(omega0 * nodes),
        delta_slopes=noise_kernel(b, nodes) * np.cos(omega0 * nodes),
    )


def ohmic_qbm_family(b: OhmicBath, T_end: float, nodes: np.ndarray | None = None) -> ChannelFamily:
    """QBM family in reduced time for the given bath."""
    table = ohmic_coefficient_table(b, T_end, nodes)
    return table_family(table, 1.0 / b.x, name=f"qbm-ohmic[{b.temperature_regime}, x={b.x:g}]")
