"""Divisibility test and non-Markovianity measure for Gaussian channel families.

Given a family ``t -> (X(t,0), Y(t,0))`` the map over ``[t, t+eps]`` is
recovered as ``X(t+eps,0) X(t,0)^+`` and ``Y(t+eps,0) - X_int Y(t,0) X_int^T``.
The family is divisible at ``t`` iff that map is completely positive. The
punctual measure is the rate at which the intermediate map's CP matrix
acquires negative spectrum,

    f_k(t) = lim_{eps -> 0+} max(0, -nu_k(t+eps, t)) / eps,

and ``F(t) = sum_k f_k(t)``; its time integral is the total measure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .channels import GaussianChannel, cp_matrix, identity_channel
from .linalg import HermitianMatrix, hermitian_eigenvalues, pseudo_inverse

__all__ = [
    "IllConditionedWarning",
    "ChannelFamily",
    "IntermediateMap",
    "NegativitySample",
    "NMReport",
    "default_eps0",
    "intermediate_map",
    "nm_matrix",
    "negativity_rate",
    "total_nm",
    "is_markovian",
]

CONDITION_WARN = 1e12
DOMAIN_SLACK = 1e-12


class IllConditionedWarning(RuntimeWarning):
    """X(t, 0) is close to singular; the intermediate map relies on the pseudo-inverse."""


@dataclass(frozen=True)
class ChannelFamily:
    """A dynamical map ``t -> GaussianChannel`` on ``[0, t_max]``, starting at the identity.

    ``func`` must be reentrant. ``coefficients`` optionally carries whatever
    rate table the family was built from, for reporting.
    """

    n_modes: int
    t_max: float
    func: Callable[[float], GaussianChannel]
    name: str = "family"
    coefficients: object = None

    def __post_init__(self):
        if not self.t_max > 0.0 or not math.isfinite(self.t_max):
            raise ValueError(f"t_max must be positive and finite, got {self.t_max}")
        c0 = self.func(0.0)
        ident = identity_channel(self.n_modes)
        if c0.n_modes != self.n_modes:
            raise ValueError(f"family returns {c0.n_modes}-mode channels, declared {self.n_modes}")
        if np.max(np.abs(c0.x - ident.x)) > 1e-9 or np.max(np.abs(c0.y)) > 1e-9:
            raise ValueError("family does not start at the identity channel")

    def eval(self, t: float) -> GaussianChannel:
        if not (-DOMAIN_SLACK <= t <= self.t_max * (1.0 + DOMAIN_SLACK) + DOMAIN_SLACK):
            raise ValueError(f"t = {t} outside the family domain [0, {self.t_max}]")
        return self.func(min(max(t, 0.0), self.t_max))


@dataclass(frozen=True)
class IntermediateMap:
    """Map over ``[t, t+epsilon]``.

    ``roundoff`` bounds the absolute rounding error of the CP-matrix
    eigenvalues, which come from differences of O(|X_int|^2 |Y|) terms.
    """

    t: float
    epsilon: float
    channel: GaussianChannel
    x_condition_number: float
    roundoff: float = 0.0


@dataclass(frozen=True)
class NegativitySample:
    """Negativity rates at one time.

    ``eigenvalues`` are those of the CP matrix of the map over ``[t, t+epsilon]``
    at the finest step used; ``f`` are the extrapolated rates in the same order.
    """

    t: float
    epsilon: float
    eigenvalues: np.ndarray
    f: np.ndarray
    big_f: float
    residual: float
    x_condition_number: float


@dataclass
class NMReport:
    grid: np.ndarray
    samples: list[NegativitySample]
    total: float
    warnings: list[str] = field(default_factory=list)

    @property
    def big_f(self) -> np.ndarray:
        return np.array([s.big_f for s in self.samples])

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([s.eigenvalues for s in self.samples])

    @property
    def f(self) -> np.ndarray:
        return np.array([s.f for s in self.samples])

    @property
    def max_condition_number(self) -> float:
        return max(s.x_condition_number for s in self.samples)

    @property
    def max_residual_ratio(self) -> float:
        """Largest ``|r(eps/4) - r(eps/2)| / eps`` over the grid."""
        return max(s.residual / s.epsilon for s in self.samples)

    def is_markovian(self, rate_tol: float = 1e-8) -> bool:
        return bool(np.all(self.big_f <= rate_tol))

    def window(self, rate_tol: float = 1e-8) -> tuple[float, float, float]:
        """(length, first, last) of the grid region where ``F > rate_tol``.

        Length is the grid spacing times the number of flagged points;
        ``first``/``last`` are NaN when nothing is flagged.
        """
        mask = self.big_f > rate_tol
        if not mask.any():
            return 0.0, math.nan, math.nan
        h = float(self.grid[1] - self.grid[0])
        length = h * float(np.count_nonzero(mask))
        hits = self.grid[mask]
        return length, float(hits[0]), float(hits[-1])


def default_eps0(t: float) -> float:
    return 1e-4 * max(1.0, t)


def _check_step(fam: ChannelFamily, t: float, eps: float):
    if not eps > 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    if t < 0.0 or t + eps > fam.t_max * (1.0 + DOMAIN_SLACK) + DOMAIN_SLACK:
        raise ValueError(f"[{t}, {t + eps}] is outside the family domain [0, {fam.t_max}]")


def intermediate_map(fam: ChannelFamily, t: float, eps: float, cutoff_rel: float = 1e-12) -> IntermediateMap:
    """Channel over ``[t, t+eps]`` implied by the family.

    The recorded condition number is ``max(1, |X|) / sigma_min(X)``, measured
    against the unit scale of the identity map at ``t = 0``, so that a
    uniformly shrunk ``X`` such as ``exp(-30) I`` is reported as ill-conditioned.
    """
    _check_step(fam, t, eps)
    c_t = fam.eval(t)
    c_te = fam.eval(t + eps)
    x_pinv, _ = pseudo_inverse(c_t.x, cutoff_rel)
    sv = np.linalg.svd(c_t.x, compute_uv=False)
    cond = max(1.0, sv[0]) / sv[-1] if sv[-1] > 0.0 else math.inf
    if cond > CONDITION_WARN:
        warnings.warn(
            f"X({t:g}, 0) has condition number {cond:.3g}; using the pseudo-inverse",
            IllConditionedWarning,
            stacklevel=2,
        )
    x_int = c_te.x @ x_pinv
    y_int = c_te.y - x_int @ c_t.y @ x_int.T
    y_int = 0.5 * (y_int + y_int.T)
    gain = float(np.max(np.abs(x_int))) ** 2
    dim = x_int.shape[0]
    scale = float(np.max(np.abs(c_te.y))) + gain * (float(np.max(np.abs(c_t.y))) + 1.0) + 1.0
    roundoff = 4.0 * dim * dim * np.finfo(float).eps * scale
    return IntermediateMap(t, eps, GaussianChannel(x_int, y_int), cond, roundoff)


def nm_matrix(fam: ChannelFamily, t: float, eps: float) -> HermitianMatrix:
    """CP matrix of the map over ``[t, t+eps]``; a negative eigenvalue witnesses non-Markovianity."""
    return cp_matrix(intermediate_map(fam, t, eps).channel)


def _richardson(r_half: np.ndarray, r_quarter: np.ndarray) -> np.ndarray:
    # extrapolate only where both rates sit on the same side of the kink at zero
    same_side = (r_half > 0.0) == (r_quarter > 0.0)
    out = np.where(same_side, 2.0 * r_quarter - r_half, r_quarter)
    return np.maximum(out, 0.0)


def _sample(fam: ChannelFamily, t: float, eps0: float, backward: bool) -> NegativitySample:
    rates = []
    conds = []
    nu = None
    for eps in (eps0, eps0 / 2.0, eps0 / 4.0):
        start = t - eps if backward else t
        im = intermediate_map(fam, start, eps)
        nu = hermitian_eigenvalues(cp_matrix(im.channel))
        # eigenvalues within rounding of zero carry no sign information
        rates.append(np.where(nu < -im.roundoff, -nu, 0.0) / eps)
        conds.append(im.x_condition_number)
    f = _richardson(rates[1], rates[2])
    residual = float(np.max(np.abs(rates[2] - rates[1])))
    return NegativitySample(
        t=float(t),
        epsilon=eps0 / 4.0,
        eigenvalues=nu,
        f=f,
        big_f=float(np.sum(f)),
        residual=residual,
        x_condition_number=max(conds),
    )


def negativity_rate(fam: ChannelFamily, t: float, eps0: float | None = None) -> NegativitySample:
    """Extrapolated negativity rates ``f_k(t)`` and their sum ``F(t)``.

    Rates ``max(0, -nu_k)/eps`` are formed at ``eps0``, ``eps0/2`` and
    ``eps0/4``; the two finest are combined by two-point Richardson
    extrapolation and clamped at zero. Eigenvalues are paired by sorted order.
    Negative eigenvalues no larger than the rounding bound of the intermediate
    map are treated as zero.
    """
    if eps0 is None:
        eps0 = default_eps0(t)
    _check_step(fam, t, eps0)
    return _sample(fam, t, eps0, backward=False)


def _grid(fam: ChannelFamily, t_start: float, t_end: float, n_points: int) -> np.ndarray:
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError(f"n_points must be odd and >= 3, got {n_points}")
    if not 0.0 <= t_start < t_end:
        raise ValueError(f"invalid interval [{t_start}, {t_end}]")
    if t_end > fam.t_max * (1.0 + DOMAIN_SLACK) + DOMAIN_SLACK:
        raise ValueError(f"t_end = {t_end} beyond the family domain [0, {fam.t_max}]")
    return np.linspace(t_start, t_end, n_points)


def total_nm(
    fam: ChannelFamily,
    t_start: float,
    t_end: float,
    n_points: int = 201,
    eps0: float | None = None,
    residual_warn: float = 1e3,
) -> NMReport:
    """Sample ``F`` on a uniform grid and integrate it with composite Simpson.

    Near the right end of the family domain, where ``[t, t+eps]`` would leave
    it, the intermediate maps are taken over ``[t-eps, t]`` instead.
    """
    grid = _grid(fam, t_start, t_end, n_points)
    samples = []
    ill = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditionedWarning)
        for t in grid:
            e0 = default_eps0(t) if eps0 is None else eps0
            backward = t + e0 > fam.t_max
            if backward and t - e0 < 0.0:
                raise ValueError(f"eps0 = {e0} too large for the family domain at t = {t}")
            s = _sample(fam, float(t), e0, backward)
            ill += s.x_condition_number > CONDITION_WARN
            samples.append(s)
    big_f = np.array([s.big_f for s in samples])
    total = max(0.0, float(simpson(big_f, x=grid)))
    report = NMReport(grid, samples, total)
    if ill:
        report.warnings.append(
            f"ill-conditioned X(t,0) at {ill} grid point(s), max condition number {report.max_condition_number:.3g}"
        )
    ratio = report.max_residual_ratio
    if ratio > residual_warn:
        report.warnings.append(f"extrapolation residual / eps reached {ratio:.3g} (threshold {residual_warn:g})")
    return report


def is_markovian(
    fam: ChannelFamily,
    t_start: float,
    t_end: float,
    n_points: int = 201,
    rate_tol: float = 1e-8,
    eps0: float | None = None,
) -> bool:
    """True iff ``F(t) <= rate_tol`` at every grid point."""
    return total_nm(fam, t_start, t_end, n_points, eps0).is_markovian(rate_tol)
