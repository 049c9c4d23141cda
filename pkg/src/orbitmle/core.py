"""Model-independent machinery for Gaussian group models.

A Gaussian group model given by a group ``G`` of invertible ``m x m``
matrices consists of the concentration matrices ``g.T @ g`` for ``g`` in
``G``. Maximizing the log-likelihood

    l(Psi) = log det(Psi) - tr(Psi S)

over the model is the same as minimizing ``||g . Y||^2 / n - log det(g.T g)``
over the group, and that splits into an inner norm minimization over the
determinant-one part of ``G`` (the capacity) and a scalar problem in
``lambda`` that has a closed-form solution. This module holds the pieces
shared by the matrix normal and graphical model code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import LinAlgError, cho_factor

__all__ = [
    "NotPositiveDefiniteError",
    "CapacityResult",
    "as_real_matrix",
    "as_sample_tuple",
    "check_pos_def",
    "sample_covariance",
    "log_likelihood",
    "orbit_norm_sq",
    "lambda_star",
    "outer_objective",
    "circle_quadratic_min",
    "quadratic_form_from_function",
]

SYMMETRY_RTOL = 1e-12


class NotPositiveDefiniteError(ValueError):
    """Raised when a matrix that must be positive definite is not."""


@dataclass(frozen=True)
class CapacityResult:
    """Capacity of a sample tuple together with the optimal scalar.

    Attributes
    ----------
    capacity : float
        Infimum of the squared norm over the determinant-one orbit.
    lambda_star : float
        Minimizer of the outer scalar problem, ``dim * n / capacity``;
        ``inf`` when the capacity is zero.
    attained : bool
        Whether the infimum is attained by a group element.
    minimizer : tuple of ndarray, optional
        The minimizing group element (or pair of factors), if known.
    """

    capacity: float
    lambda_star: float
    attained: bool
    minimizer: Optional[Tuple[NDArray, ...]] = None


def as_real_matrix(a: ArrayLike, name: str = "matrix") -> NDArray:
    """Return ``a`` as a finite 2-d float array."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_sample_tuple(Y: ArrayLike) -> NDArray:
    """Validate a tuple of ``n`` real ``m1 x m2`` matrices; returns shape ``(n, m1, m2)``.

    A single 2-d matrix is treated as a tuple with one element.
    """
    arr = np.asarray(Y, dtype=float)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3:
        raise ValueError(
            f"sample tuple must have shape (n, m1, m2), got {arr.shape}"
        )
    if arr.shape[0] < 1 or arr.shape[1] < 1 or arr.shape[2] < 1:
        raise ValueError(f"sample tuple has an empty dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sample tuple has non-finite entries")
    return arr


def check_pos_def(psi: ArrayLike, name: str = "Psi") -> NDArray:
    """Return ``psi`` as an array after checking symmetry and positive definiteness.

    Symmetry is checked to a relative tolerance of ``1e-12``; definiteness by
    attempting a Cholesky factorization.
    """
    psi = as_real_matrix(psi, name)
    if psi.shape[0] != psi.shape[1]:
        raise ValueError(f"{name} must be square, got {psi.shape}")
    scale = max(np.max(np.abs(psi)), np.finfo(float).tiny)
    if np.max(np.abs(psi - psi.T)) > SYMMETRY_RTOL * scale:
        raise NotPositiveDefiniteError(f"{name} is not symmetric")
    try:
        cho_factor(psi, lower=True)
    except LinAlgError as exc:
        raise NotPositiveDefiniteError(f"{name} is not positive definite") from exc
    return psi


def sample_covariance(Y: ArrayLike) -> NDArray:
    """Sample covariance ``(1/n) sum_i y_i y_i^T`` of ``n`` vectors.

    Parameters
    ----------
    Y : array_like, shape (n, m)
        One sample per row.

    Returns
    -------
    ndarray, shape (m, m)
        Positive semidefinite and exactly symmetric.
    """
    try:
        Y = np.asarray(Y, dtype=float)
    except ValueError as exc:
        raise ValueError("samples have mismatched dimensions") from exc
    if Y.ndim != 2 or Y.shape[0] < 1:
        raise ValueError(f"expected n >= 1 samples as an (n, m) array, got {Y.shape}")
    n = Y.shape[0]
    S = Y.T @ Y / n
    return (S + S.T) / 2


def log_likelihood(Psi: ArrayLike, S: ArrayLike) -> float:
    """Gaussian log-likelihood ``log det(Psi) - tr(Psi S)`` without constants.

    Raises
    ------
    NotPositiveDefiniteError
        If ``Psi`` does not admit a Cholesky factorization.
    """
    S = as_real_matrix(S, "S")
    Psi = check_pos_def(Psi)
    if Psi.shape != S.shape:
        raise ValueError(f"shape mismatch: Psi {Psi.shape} vs S {S.shape}")
    c, _ = cho_factor(Psi, lower=True)
    logdet = 2.0 * float(np.sum(np.log(np.diag(c))))
    return logdet - float(np.sum(Psi * S.T))


def orbit_norm_sq(g: ArrayLike, S: ArrayLike, n: int) -> float:
    """Squared norm ``||g . Y||^2 = n tr(g^T g S_Y)`` from the sample covariance."""
    g = as_real_matrix(g, "g")
    S = as_real_matrix(S, "S")
    if g.shape[1] != S.shape[0] or S.shape[0] != S.shape[1]:
        raise ValueError(f"shape mismatch: g {g.shape} vs S {S.shape}")
    return n * float(np.trace(g.T @ g @ S))


def outer_objective(lam: float, capacity: float, dim: int, n: int) -> float:
    """The scalar objective ``(lam/n) * capacity - dim * log(lam)``."""
    return lam / n * capacity - dim * math.log(lam)


def lambda_star(capacity: float, dim: int, n: int) -> Tuple[float, float]:
    """Optimal scalar for the outer problem and the optimal objective value.

    Minimizes ``(lam/n) * capacity - dim * log(lam)`` over ``lam > 0``.

    Returns
    -------
    lam : float
        ``dim * n / capacity``.
    value : float
        ``dim * (1 + log(capacity / (n * dim)))``; its negative is the
        supremum of the log-likelihood.

    Raises
    ------
    ValueError
        If ``capacity <= 0``. A zero capacity means the likelihood is
        unbounded and there is nothing to optimize.
    """
    if not capacity > 0:
        raise ValueError("capacity must be positive; zero capacity means unbounded likelihood")
    if dim < 1 or n < 1:
        raise ValueError("dim and n must be positive")
    lam = dim * n / capacity
    value = dim * (1.0 + math.log(capacity / (n * dim)))
    return lam, value


def circle_quadratic_min(Q: ArrayLike) -> float:
    """Minimum of ``(a, b) Q (a, b)^T`` over the unit circle ``a^2 + b^2 = 1``.

    This is the smallest eigenvalue of the symmetric ``2 x 2`` matrix ``Q``.
    """
    Q = as_real_matrix(Q, "Q")
    if Q.shape != (2, 2):
        raise ValueError(f"Q must be 2 x 2, got {Q.shape}")
    if abs(Q[0, 1] - Q[1, 0]) > SYMMETRY_RTOL * max(np.max(np.abs(Q)), 1.0):
        raise ValueError("Q must be symmetric")
    return float(np.linalg.eigvalsh(Q)[0])


def quadratic_form_from_function(f) -> NDArray:
    """Recover the symmetric matrix of a binary quadratic form ``f(a, b)`` by polarization."""
    q11 = f(1.0, 0.0)
    q22 = f(0.0, 1.0)
    q12 = (f(1.0, 1.0) - q11 - q22) / 2.0
    return np.array([[q11, q12], [q12, q22]])
