"""Matrix normal models: flip-flop scaling and stability classification.

Samples are tuples ``Y = (Y_1, ..., Y_n)`` of real ``m1 x m2`` matrices,
stored as an array of shape ``(n, m1, m2)``. The model consists of
concentration matrices ``Psi1 (x) Psi2`` and ``SL(m1) x SL(m2)`` acts by
``(g1, g2) . Y = (g1 Y_i g2^T)_i``.

The flip-flop algorithm alternately maximizes the likelihood in ``Psi1``
and ``Psi2``. Read through the group action it is operator scaling: the
tuple ``(Psi1^(1/2), Psi2^(1/2)) . Y`` is driven towards a zero of the
moment map, and the four ways this can go (a singular update, the norm
collapsing to zero, convergence, or convergence of the norm with
diverging factors) correspond to the four stability classes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .core import CapacityResult, NotPositiveDefiniteError, as_sample_tuple, check_pos_def, lambda_star

__all__ = [
    "Classification",
    "ConcentrationPair",
    "FlipFlopConfig",
    "StabilityReport",
    "ZeroTupleError",
    "mn_log_likelihood",
    "moment_residual",
    "capacity_estimate",
    "capacity_result",
    "flip_flop",
    "stabilizer_lie_dim",
    "classify",
]


class Classification(str, enum.Enum):
    UNSTABLE = "Unstable"
    SEMISTABLE_NOT_POLYSTABLE = "SemistableNotPolystable"
    POLYSTABLE = "Polystable"
    STABLE = "Stable"
    UNDETERMINED = "Undetermined"


class ZeroTupleError(ValueError):
    """The moment residual is undefined for the zero tuple."""


@dataclass(frozen=True)
class ConcentrationPair:
    """Positive definite factors of a Kronecker concentration matrix ``psi1 (x) psi2``."""

    psi1: NDArray
    psi2: NDArray

    def __post_init__(self):
        object.__setattr__(self, "psi1", check_pos_def(self.psi1, "psi1"))
        object.__setattr__(self, "psi2", check_pos_def(self.psi2, "psi2"))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.psi1.shape[0], self.psi2.shape[0]

    def kron(self) -> NDArray:
        return np.kron(self.psi1, self.psi2)


@dataclass(frozen=True)
class FlipFlopConfig:
    """Stopping and decision thresholds for :func:`flip_flop`.

    Parameters
    ----------
    max_iter : int
        Maximum number of full (two half-step) iterations.
    tol_residual : float
        Convergence when the moment residual of the scaled tuple drops below this.
    tol_singular : float
        An update matrix counts as singular when its smallest eigenvalue is at
        most ``tol_singular`` times its largest.
    divergence_bound : float
        Bound on ``log cond(Psi1) + log cond(Psi2)`` beyond which the factors
        are considered to diverge.
    instability_threshold : float
        The tuple is declared unstable once the capacity estimate falls below
        this fraction of ``||Y||^2``.
    """

    max_iter: int = 4000
    tol_residual: float = 1e-9
    tol_singular: float = 1e-12
    divergence_bound: float = 8.0
    instability_threshold: float = 1e-9

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        for name in ("tol_residual", "tol_singular", "divergence_bound", "instability_threshold"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class StabilityReport:
    """Outcome of flip-flop scaling and stability classification.

    ``trace`` holds one ``(log_likelihood, moment_residual)`` pair per full
    iteration. ``stop_reason`` is one of ``"converged"``, ``"singular"``,
    ``"capacity_vanished"``, ``"max_iter"`` or ``"zero_tuple"``.
    """

    classification: Classification
    capacity_estimate: float
    moment_residual: float
    stabilizer_dim: Optional[int]
    mle: Optional[ConcentrationPair]
    iterations: int
    trace: List[Tuple[float, float]] = field(default_factory=list)
    stop_reason: str = ""
    log_condition: float = 0.0

    def to_dict(self) -> dict:
        out = {
            "classification": self.classification.value,
            "capacity_estimate": self.capacity_estimate,
            "moment_residual": self.moment_residual,
            "stabilizer_dim": self.stabilizer_dim,
            "iterations": self.iterations,
            "stop_reason": self.stop_reason,
            "log_condition": self.log_condition,
            "mle": None,
            "trace": [{"log_likelihood": ll, "residual": r} for ll, r in self.trace],
        }
        if self.mle is not None:
            out["mle"] = {"psi1": self.mle.psi1.tolist(), "psi2": self.mle.psi2.tolist()}
        return out


def _logdet_pd(a: NDArray) -> float:
    sign, ld = np.linalg.slogdet(a)
    if sign <= 0:
        raise NotPositiveDefiniteError("matrix is not positive definite")
    return float(ld)


def _check_pair(Y: NDArray, psi1: NDArray, psi2: NDArray) -> None:
    _, m1, m2 = Y.shape
    if psi1.shape != (m1, m1) or psi2.shape != (m2, m2):
        raise ValueError(
            f"factor shapes {psi1.shape}, {psi2.shape} do not match samples of shape ({m1}, {m2})"
        )


def _row_gram(Y: NDArray, psi2: NDArray) -> NDArray:
    """sum_i Y_i psi2 Y_i^T"""
    return np.einsum("nij,jk,nlk->il", Y, psi2, Y)


def _col_gram(Y: NDArray, psi1: NDArray) -> NDArray:
    """sum_i Y_i^T psi1 Y_i"""
    return np.einsum("nji,jk,nkl->il", Y, psi1, Y)


def mn_log_likelihood(Y: ArrayLike, pair: ConcentrationPair) -> float:
    """Matrix normal log-likelihood, up to additive and multiplicative constants.

    ``m2 log det Psi1 + m1 log det Psi2 - (1/n) tr(Psi1 sum_i Y_i Psi2 Y_i^T)``
    """
    Y = as_sample_tuple(Y)
    n, m1, m2 = Y.shape
    _check_pair(Y, pair.psi1, pair.psi2)
    return _mn_ll(Y, pair.psi1, pair.psi2)


def _mn_ll(Y: NDArray, psi1: NDArray, psi2: NDArray) -> float:
    n, m1, m2 = Y.shape
    quad = float(np.sum(psi1 * _row_gram(Y, psi2)))
    return m2 * _logdet_pd(psi1) + m1 * _logdet_pd(psi2) - quad / n


def moment_residual(Y: ArrayLike) -> Tuple[float, float, float]:
    """Relative deviation of ``Y`` from a zero of the ``SL x SL`` moment map.

    Returns ``(residual, c1, c2)`` with ``c1 = ||Y||^2 / m1`` and
    ``c2 = ||Y||^2 / m2``. The residual is the larger of
    ``||sum Y_i Y_i^T - c1 I|| / ||Y||^2`` and
    ``||sum Y_i^T Y_i - c2 I|| / ||Y||^2`` (Frobenius norms), so it is zero
    exactly when ``Y`` has minimal norm in its orbit.

    Raises
    ------
    ZeroTupleError
        If ``Y`` is the zero tuple.
    """
    Y = as_sample_tuple(Y)
    _, m1, m2 = Y.shape
    norm_sq = float(np.sum(Y * Y))
    if norm_sq == 0.0:
        raise ZeroTupleError("moment residual is undefined for the zero tuple")
    c1 = norm_sq / m1
    c2 = norm_sq / m2
    left = np.einsum("nij,nkj->ik", Y, Y)
    right = np.einsum("nji,njk->ik", Y, Y)
    r1 = np.linalg.norm(left - c1 * np.eye(m1))
    r2 = np.linalg.norm(right - c2 * np.eye(m2))
    return float(max(r1, r2) / norm_sq), c1, c2


def _capacity_from_pair(Y: NDArray, psi1: NDArray, psi2: NDArray) -> float:
    _, m1, m2 = Y.shape
    quad = float(np.sum(psi1 * _row_gram(Y, psi2)))
    scale = math.exp(-_logdet_pd(psi1) / m1 - _logdet_pd(psi2) / m2)
    return scale * quad


def capacity_estimate(Y: ArrayLike, pair: ConcentrationPair) -> float:
    """Squared norm of ``Y`` after scaling by the determinant-one parts of the pair.

    With ``h_k = Psi_k^(1/2) / det(Psi_k)^(1/(2 m_k))`` this is
    ``||(h_1, h_2) . Y||^2``, an upper bound on the ``SL x SL`` capacity
    that is tight at an MLE.
    """
    Y = as_sample_tuple(Y)
    _check_pair(Y, pair.psi1, pair.psi2)
    return _capacity_from_pair(Y, pair.psi1, pair.psi2)


def _sqrtm_pd(a: NDArray) -> NDArray:
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def _log_cond(a: NDArray) -> float:
    w = np.linalg.eigvalsh(a)
    return float(math.log(w[-1]) - math.log(w[0]))


def _is_singular(a: NDArray, tol: float) -> bool:
    w = np.linalg.eigvalsh(a)
    return not (w[-1] > 0 and w[0] > tol * w[-1])


def _invert_sym(a: NDArray) -> NDArray:
    inv = np.linalg.inv(a)
    return (inv + inv.T) / 2


def flip_flop(Y: ArrayLike, cfg: FlipFlopConfig = FlipFlopConfig()) -> StabilityReport:
    """Run the flip-flop algorithm and classify the outcome.

    Starting from ``Psi2 = I`` each iteration sets

        Psi1 = ((1/(n m2)) sum_i Y_i Psi2 Y_i^T)^(-1)
        Psi2 = ((1/(n m1)) sum_i Y_i^T Psi1 Y_i)^(-1)

    Each half-step is an exact coordinate maximization, so the
    log-likelihood recorded in ``trace`` never decreases.

    The stopping rules map to classifications as follows. A singular
    update matrix or a capacity estimate below
    ``cfg.instability_threshold * ||Y||^2`` gives ``Unstable`` with no MLE.
    A moment residual below ``cfg.tol_residual`` gives ``Polystable`` with
    the MLE ``(Psi1, Psi2)``. Reaching ``max_iter`` while the factors keep
    diverging past ``cfg.divergence_bound`` and the capacity estimate has
    levelled off gives ``SemistableNotPolystable``; anything else is
    ``Undetermined``. Stability refinement is left to :func:`classify`.
    """
    Y = as_sample_tuple(Y)
    n, m1, m2 = Y.shape
    norm_sq = float(np.sum(Y * Y))
    if norm_sq == 0.0:
        return StabilityReport(
            Classification.UNSTABLE, 0.0, float("nan"), None, None, 0, [], "zero_tuple", 0.0
        )

    psi1 = np.eye(m1)
    psi2 = np.eye(m2)
    trace: List[Tuple[float, float]] = []
    caps: List[float] = []
    conds: List[float] = []
    residual = moment_residual(Y)[0]
    cap = norm_sq

    def unstable(reason: str, it: int) -> StabilityReport:
        return StabilityReport(
            Classification.UNSTABLE,
            0.0 if reason == "singular" else cap,
            residual,
            None,
            None,
            it,
            trace,
            reason,
            conds[-1] if conds else 0.0,
        )

    for it in range(1, cfg.max_iter + 1):
        a1 = _row_gram(Y, psi2) / (n * m2)
        if _is_singular(a1, cfg.tol_singular):
            return unstable("singular", it)
        psi1 = _invert_sym(a1)
        a2 = _col_gram(Y, psi1) / (n * m1)
        if _is_singular(a2, cfg.tol_singular):
            return unstable("singular", it)
        psi2 = _invert_sym(a2)

        ll = _mn_ll(Y, psi1, psi2)
        Z = np.einsum("ij,njk,kl->nil", _sqrtm_pd(psi1), Y, _sqrtm_pd(psi2))
        residual = moment_residual(Z)[0]
        cap = _capacity_from_pair(Y, psi1, psi2)
        trace.append((ll, residual))
        caps.append(cap)
        conds.append(_log_cond(psi1) + _log_cond(psi2))

        if residual < cfg.tol_residual:
            return StabilityReport(
                Classification.POLYSTABLE,
                cap,
                residual,
                None,
                ConcentrationPair(psi1, psi2),
                it,
                trace,
                "converged",
                conds[-1],
            )
        if cap < cfg.instability_threshold * norm_sq:
            return unstable("capacity_vanished", it)

    mid = len(caps) // 2
    diverging = conds[-1] > cfg.divergence_bound and conds[-1] > conds[mid] + 0.5
    levelled = caps[-1] > 0.5 * caps[mid]
    label = (
        Classification.SEMISTABLE_NOT_POLYSTABLE
        if diverging and levelled
        else Classification.UNDETERMINED
    )
    return StabilityReport(label, cap, residual, None, None, cfg.max_iter, trace, "max_iter", conds[-1])


def stabilizer_lie_dim(Y: ArrayLike, rtol: float = 1e-10) -> int:
    """Dimension of the Lie algebra of the ``SL x SL`` stabilizer of ``Y``.

    Counts pairs ``(A, B)`` of traceless matrices with
    ``A Y_i + Y_i B^T = 0`` for every ``i``. The stabilizer is finite
    exactly when this is zero.
    """
    Y = as_sample_tuple(Y)
    n, m1, m2 = Y.shape
    norm = np.linalg.norm(Y)
    if norm > 0:
        Y = Y / norm  # the solution space is scale invariant; keeps rtol meaningful
    n_unknowns = m1 * m1 + m2 * m2
    blocks = []
    eye1, eye2 = np.eye(m1), np.eye(m2)
    for Yi in Y:
        # row-major vec: vec(A Yi) = (I (x) Yi^T) vec(A), vec(Yi B^T) = (Yi (x) I)-ish via permutation
        left = np.kron(eye1, Yi.T)
        right = np.einsum("ik,jl->ijlk", Yi, eye2).reshape(m1 * m2, m2 * m2)
        blocks.append(np.hstack([left, right]))
    trace_rows = np.zeros((2, n_unknowns))
    trace_rows[0, : m1 * m1] = eye1.ravel()
    trace_rows[1, m1 * m1 :] = eye2.ravel()
    M = np.vstack(blocks + [trace_rows])
    s = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(s > rtol * s[0]))
    return n_unknowns - rank


def capacity_result(Y: ArrayLike, report: StabilityReport) -> CapacityResult:
    """Package the capacity information of a flip-flop report.

    When the MLE was reached, the minimizer is the pair of determinant-one
    factors ``(h1, h2)`` with ``h_k^T h_k = Psi_k / det(Psi_k)^(1/m_k)``, and
    ``lambda_star = m1 m2 n / capacity``.
    """
    Y = as_sample_tuple(Y)
    n, m1, m2 = Y.shape
    cap = report.capacity_estimate
    attained = report.mle is not None
    lam = math.inf
    if cap > 0:
        lam = lambda_star(cap, m1 * m2, n)[0]
    minimizer = None
    if attained:
        psi1, psi2 = report.mle.psi1, report.mle.psi2
        h1 = _sqrtm_pd(psi1 / math.exp(_logdet_pd(psi1) / m1))
        h2 = _sqrtm_pd(psi2 / math.exp(_logdet_pd(psi2) / m2))
        minimizer = (h1, h2)
    return CapacityResult(cap, lam, attained, minimizer)


def classify(Y: ArrayLike, cfg: FlipFlopConfig = FlipFlopConfig()) -> StabilityReport:
    """Classify ``Y`` as unstable, semistable, polystable or stable.

    Runs :func:`flip_flop`, records the stabilizer dimension, and upgrades a
    polystable outcome to ``Stable`` when the stabilizer is finite. A
    stable tuple has a unique MLE; a polystable one may have one or many.
    """
    Y = as_sample_tuple(Y)
    report = flip_flop(Y, cfg)
    report.stabilizer_dim = stabilizer_lie_dim(Y)
    if report.classification is Classification.POLYSTABLE and report.stabilizer_dim == 0:
        report.classification = Classification.STABLE
    return report
