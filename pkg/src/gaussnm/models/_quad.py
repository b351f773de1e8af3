from __future__ import annotations

import warnings

from scipy import integrate


class QuadratureError(RuntimeError):
    """An adaptive integration did not reach its requested tolerance."""


def quad(f, a: float, b: float, epsabs: float = 1e-12, epsrel: float = 1e-12, limit: int = 500, **kw) -> float:
    """``scipy.integrate.quad`` that raises instead of warning on non-convergence."""
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=limit, **kw)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {exc}") from exc
    return float(value)
