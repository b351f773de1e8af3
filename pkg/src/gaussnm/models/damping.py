"""Single-mode pure damping with a time-dependent rate.

With ``Gamma(t) = 2 alpha int_0^t gamma(s) ds`` the channel from time 0 is
``X = exp(-Gamma/2) I`` and ``Y = (1 - exp(-Gamma)) I/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..channels import GaussianChannel
from ..divisibility import ChannelFamily
from ._quad import quad

__all__ = ["DampingModel", "damping_channel", "damping_family", "damping_nm_closed_form"]


@dataclass(frozen=True)
class DampingModel:
    alpha: float
    gamma: Callable[[float], float]

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def big_gamma(self, t: float) -> float:
        """``2 alpha int_0^t gamma(s) ds``."""
        return 2.0 * self.alpha * quad(self.gamma, 0.0, t, epsabs=1e-13, epsrel=1e-13)


def damping_channel(big_gamma: float) -> GaussianChannel:
    """Damping channel with integrated rate ``big_gamma`` (may be negative, i.e. amplifying)."""
    decay = math.exp(-big_gamma)
    return GaussianChannel(math.sqrt(decay) * np.eye(2), 0.5 * (1.0 - decay) * np.eye(2))


def damping_family(m: DampingModel, T: float) -> ChannelFamily:
    def func(t: float) -> GaussianChannel:
        return damping_channel(m.big_gamma(t))

    return ChannelFamily(1, T, func, name="damping")


def damping_nm_closed_form(m: DampingModel, t_start: float, t_end: float) -> float:
    """``2 alpha int max(0, -gamma(t)) dt`` over the interval, i.e. over the sub-intervals where gamma < 0."""
    if not t_end >= t_start:
        raise ValueError(f"invalid interval [{t_start}, {t_end}]")
    return 2.0 * m.alpha * quad(lambda s: max(0.0, -m.gamma(s)), t_start, t_end, epsabs=1e-12, epsrel=1e-10)
