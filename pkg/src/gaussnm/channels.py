"""Gaussian channels acting on covariance matrices.

A channel is the pair ``(X, Y)`` acting as ``sigma -> X sigma X^T + Y``. The
vacuum has covariance ``I/2`` (hbar = 1), and the symplectic form is the
mode-ordered one from :func:`gaussnm.linalg.symplectic_form`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import HermitianMatrix, as_real_matrix, is_psd, symplectic_form

__all__ = [
    "CovarianceState",
    "GaussianChannel",
    "AugmentedMap",
    "vacuum",
    "identity_channel",
    "apply",
    "compose",
    "cp_matrix",
    "is_cp",
    "vectorize",
    "devectorize",
    "to_augmented",
    "augmented_compose",
]

SYMMETRY_TOL = 1e-10
PHYSICAL_TOL = 1e-10


def _modes_from_dim(dim: int, what: str) -> int:
    if dim % 2:
        raise ValueError(f"{what} must be 2N x 2N, got dimension {dim}")
    return dim // 2


def _symmetry_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.T))) / max(1.0, float(np.max(np.abs(a))))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CovarianceState:
    """Second moments of an N-mode Gaussian state.

    Args:
        sigma: Symmetric 2N x 2N covariance matrix.
        check_physical: Also require ``sigma + (i/2) Omega >= 0``.
    """

    sigma: np.ndarray
    check_physical: bool = True

    def __post_init__(self):
        sigma = as_real_matrix(self.sigma, "sigma")
        if sigma.shape[0] != sigma.shape[1]:
            raise ValueError(f"sigma must be square, got {sigma.shape}")
        _modes_from_dim(sigma.shape[0], "sigma")
        if _symmetry_defect(sigma) > SYMMETRY_TOL:
            raise ValueError("sigma is not symmetric")
        object.__setattr__(self, "sigma", _frozen(sigma))
        if self.check_physical and not self.is_physical():
            raise ValueError("sigma violates the uncertainty relation sigma + (i/2) Omega >= 0")

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        sym = 0.5 * (self.sigma + self.sigma.T)
        return is_psd(HermitianMatrix(sym, 0.5 * symplectic_form(self.n_modes)), tol)


@dataclass(frozen=True)
class GaussianChannel:
    """The map ``sigma -> X sigma X^T + Y`` with real 2N x 2N ``X`` and symmetric ``Y``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = as_real_matrix(self.x, "x")
        y = as_real_matrix(self.y, "y")
        if x.shape != y.shape or x.shape[0] != x.shape[1]:
            raise ValueError(f"x and y must be square with equal shapes, got {x.shape} and {y.shape}")
        _modes_from_dim(x.shape[0], "x")
        if _symmetry_defect(y) > SYMMETRY_TOL:
            raise ValueError("y is not symmetric")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    @property
    def n_modes(self) -> int:
        return self.x.shape[0] // 2


@dataclass(frozen=True)
class AugmentedMap:
    """Channel as a (4N^2 + 1)-square matrix acting on augmented vectorized states.

    Layout::

        [[kron(X, X), vec(Y)],
         [0 ... 0,    1     ]]
    """

    m: np.ndarray

    def __post_init__(self):
        m = as_real_matrix(self.m, "m")
        size = m.shape[0]
        if m.shape[1] != size:
            raise ValueError(f"m must be square, got {m.shape}")
        side = int(round(np.sqrt(size - 1)))
        if side * side != size - 1 or side % 2:
            raise ValueError(f"m must have size 4N^2 + 1, got {size}")
        if np.any(m[-1, :-1] != 0.0) or m[-1, -1] != 1.0:
            raise ValueError("last row of an augmented map must be (0, ..., 0, 1)")
        object.__setattr__(self, "m", _frozen(m))

    @property
    def n_modes(self) -> int:
        return int(round(np.sqrt(self.m.shape[0] - 1))) // 2

    def __matmul__(self, other):
        if isinstance(other, AugmentedMap):
            return augmented_compose(self, other)
        return self.m @ np.asarray(other, dtype=float)


def vacuum(n_modes: int = 1) -> CovarianceState:
    return CovarianceState(0.5 * np.eye(2 * n_modes))


def identity_channel(n_modes: int = 1) -> GaussianChannel:
    dim = 2 * n_modes
    return GaussianChannel(np.eye(dim), np.zeros((dim, dim)))


def _check_modes(a, b):
    if a.n_modes != b.n_modes:
        raise ValueError(f"mode mismatch: {a.n_modes} vs {b.n_modes}")


def apply(c: GaussianChannel, s: CovarianceState) -> CovarianceState:
    """Return ``X sigma X^T + Y``.

    The output is symmetrized but not checked for physicality; a non-CP
    channel may legitimately produce an unphysical matrix.
    """
    _check_modes(c, s)
    out = c.x @ s.sigma @ c.x.T + c.y
    return CovarianceState(0.5 * (out + out.T), check_physical=False)


def compose(c2: GaussianChannel, c1: GaussianChannel) -> GaussianChannel:
    """Channel that applies ``c1`` first and then ``c2``: ``(X2 X1, X2 Y1 X2^T + Y2)``."""
    _check_modes(c2, c1)
    y = c2.x @ c1.y @ c2.x.T + c2.y
    return GaussianChannel(c2.x @ c1.x, 0.5 * (y + y.T))


def cp_matrix(c: GaussianChannel) -> HermitianMatrix:
    """``Y - (i/2) Omega + (i/2) X Omega X^T``, positive semidefinite iff ``c`` is CP."""
    omega = symplectic_form(c.n_modes)
    im = 0.5 * (c.x @ omega @ c.x.T - omega)
    # exact antisymmetry, regardless of rounding in the products
    im = 0.5 * (im - im.T)
    re = 0.5 * (c.y + c.y.T)
    return HermitianMatrix(re, im)


def is_cp(c: GaussianChannel, tol: float = 1e-10) -> bool:
    return is_psd(cp_matrix(c), tol)


def vectorize(s: CovarianceState | np.ndarray) -> np.ndarray:
    """Row-major flattening of sigma with a trailing 1 appended (length 4N^2 + 1)."""
    sigma = s.sigma if isinstance(s, CovarianceState) else as_real_matrix(s, "sigma")
    return np.append(sigma.ravel(), 1.0)


def devectorize(v, n_modes: int) -> CovarianceState:
    v = np.asarray(v, dtype=float)
    dim = 2 * n_modes
    if v.shape != (dim * dim + 1,):
        raise ValueError(f"expected a vector of length {dim * dim + 1}, got shape {v.shape}")
    if abs(v[-1] - 1.0) > 1e-12:
        raise ValueError(f"trailing entry must be 1, got {v[-1]!r}")
    return CovarianceState(v[:-1].reshape(dim, dim), check_physical=False)


def to_augmented(c: GaussianChannel) -> AugmentedMap:
    d2 = c.x.shape[0] ** 2
    m = np.zeros((d2 + 1, d2 + 1))
    m[:d2, :d2] = np.kron(c.x, c.x)
    m[:d2, d2] = c.y.ravel()
    m[d2, d2] = 1.0
    return AugmentedMap(m)


def augmented_compose(a2: AugmentedMap, a1: AugmentedMap) -> AugmentedMap:
    """Matrix product ``a2 @ a1``: ``a1`` acts first."""
    if a2.m.shape != a1.m.shape:
        raise ValueError(f"size mismatch: {a2.m.shape} vs {a1.m.shape}")
    return AugmentedMap(a2.m @ a1.m)
