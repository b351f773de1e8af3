"""Small dense linear algebra used throughout the package.

Real matrices are plain ``numpy`` float arrays. Hermitian matrices are kept
as a pair of real arrays (symmetric real part, antisymmetric imaginary part)
so that the rest of the code never has to carry complex dtypes around.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "HermitianMatrix",
    "as_real_matrix",
    "symplectic_form",
    "kron",
    "hermitian_eigenvalues",
    "pseudo_inverse",
    "is_psd",
]

HERMITIAN_RTOL = 1e-12


def as_real_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-D float array, raising ``ValueError`` otherwise."""
    arr = np.array(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def _scale(*arrays: np.ndarray) -> float:
    return max(1.0, *(float(np.max(np.abs(a))) if a.size else 0.0 for a in arrays))


@dataclass(frozen=True)
class HermitianMatrix:
    """The Hermitian matrix ``re + i*im``.

    ``re`` must be symmetric and ``im`` antisymmetric, to a relative tolerance
    of 1e-12; together these are exactly the Hermiticity condition.
    """

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = as_real_matrix(self.re, "re")
        im = as_real_matrix(self.im, "im")
        if re.shape != im.shape or re.shape[0] != re.shape[1]:
            raise ValueError(f"re/im must be square with equal shapes, got {re.shape} and {im.shape}")
        tol = HERMITIAN_RTOL * _scale(re, im)
        if np.max(np.abs(re - re.T)) > tol:
            raise ValueError("real part is not symmetric")
        if np.max(np.abs(im + im.T)) > tol:
            raise ValueError("imaginary part is not antisymmetric")
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def dim(self) -> int:
        return self.re.shape[0]

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def norm(self) -> float:
        """Spectral norm."""
        return float(np.linalg.norm(self.to_complex(), 2))


def symplectic_form(n_modes: int) -> np.ndarray:
    """Mode-ordered symplectic form: the direct sum of ``n_modes`` blocks [[0, 1], [-1, 0]]."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def kron(a, b) -> np.ndarray:
    return np.kron(as_real_matrix(a, "a"), as_real_matrix(b, "b"))


def hermitian_eigenvalues(h: HermitianMatrix) -> np.ndarray:
    """Eigenvalues of ``h`` in ascending order.

    Uses the real symmetric embedding [[re, -im], [im, re]], whose spectrum is
    that of ``h`` with every eigenvalue doubled; every second value of the
    sorted embedding spectrum is kept.
    """
    if not isinstance(h, HermitianMatrix):
        raise TypeError("expected a HermitianMatrix")
    embedding = np.block([[h.re, -h.im], [h.im, h.re]])
    # eigvalsh only reads one triangle; symmetrize so the result is backward stable
    embedding = 0.5 * (embedding + embedding.T)
    doubled = np.linalg.eigvalsh(embedding)
    return np.ascontiguousarray(doubled[::2])


def pseudo_inverse(x, cutoff_rel: float = 1e-12) -> tuple[np.ndarray, float]:
    """Moore-Penrose pseudo-inverse of a square matrix via SVD.

    Singular values below ``cutoff_rel * sigma_max`` are treated as zero.

    Returns:
        The pseudo-inverse and the 2-norm condition number ``sigma_max/sigma_min``
        (``inf`` for a singular or zero matrix).
    """
    x = as_real_matrix(x, "x")
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    if not 0.0 < cutoff_rel < 1.0:
        raise ValueError(f"cutoff_rel must lie in (0, 1), got {cutoff_rel}")
    u, s, vt = np.linalg.svd(x)
    smax = s[0]
    if smax == 0.0:
        return np.zeros_like(x.T), float("inf")
    keep = s >= cutoff_rel * smax
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    pinv = (vt.T * s_inv) @ u.T
    cond = float(smax / s[-1]) if s[-1] > 0.0 else float("inf")
    return pinv, cond


def is_psd(h: HermitianMatrix, tol: float = 1e-10) -> bool:
    """True iff the smallest eigenvalue of ``h`` is >= ``-tol * max(1, ||h||)``."""
    values = hermitian_eigenvalues(h)
    return bool(values[0] >= -tol * max(1.0, h.norm()))
