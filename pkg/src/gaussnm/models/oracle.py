"""Fixed-step RK4 integration of the covariance equations of motion.

Used only to cross-check the closed-form channel families:

* damping: ``sigma' = -2 alpha gamma (sigma - I/2)``
* secular QBM (lab frame): ``sigma' = w0 (O sigma + sigma O^T) - 2 gamma sigma + Delta I``
  where ``O`` is the one-mode symplectic form, the generator of the rotation.
"""

from __future__ import annotations

import numpy as np

from ..channels import CovarianceState
from ..linalg import symplectic_form
from .damping import DampingModel
from .qbm import QBMModel

__all__ = ["ode_oracle"]


def _rhs(generator):
    eye = np.eye(2)
    if isinstance(generator, DampingModel):
        a = generator.alpha

        def f(t, s):
            return -2.0 * a * generator.gamma(t) * (s - 0.5 * eye)

    elif isinstance(generator, QBMModel):
        w0 = generator.omega0
        om = symplectic_form(1)

        def f(t, s):
            g, d = generator.coeffs(t)
            return w0 * (om @ s + s @ om.T) - 2.0 * g * s + d * eye

    else:
        raise TypeError(f"unsupported generator {type(generator).__name__}")
    return f


def _rk4(f, s0: np.ndarray, t: float, steps: int) -> np.ndarray:
    h = t / steps
    s = s0.copy()
    for i in range(steps):
        ti = i * h
        k1 = f(ti, s)
        k2 = f(ti + 0.5 * h, s + 0.5 * h * k1)
        k3 = f(ti + 0.5 * h, s + 0.5 * h * k2)
        k4 = f(ti + h, s + h * k3)
        s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return s


def ode_oracle(generator, sigma0: CovarianceState, t: float, steps: int = 2000, tol: float = 1e-7) -> CovarianceState:
    """Integrate ``sigma0`` to time ``t``.

    Raises ``ValueError`` when the RK4 error, estimated by comparison with a
    run at half the step count, exceeds ``tol``.
    """
    if steps < 100:
        raise ValueError(f"steps must be >= 100, got {steps}")
    if sigma0.n_modes != 1:
        raise ValueError("the bundled generators are single-mode")
    f = _rhs(generator)
    s0 = np.array(sigma0.sigma)
    fine = _rk4(f, s0, t, steps)
    coarse = _rk4(f, s0, t, steps // 2)
    err = float(np.max(np.abs(fine - coarse))) / 15.0
    if err > tol:
        raise ValueError(f"{steps} steps give an estimated error {err:.2e} > {tol:.1e}; increase steps")
    return CovarianceState(0.5 * (fine + fine.T), check_physical=False)
