"""Maximum likelihood thresholds for matrix normal models.

``mlt_b(m1, m2)`` is the smallest sample size ``n`` at which the matrix
normal log-likelihood is bounded for generic data. Equivalently it is the
smallest ``n`` for which the null cone of the left-right
``SL(m1) x SL(m2)`` action does not fill ``(R^{m1 x m2})^n``. Whether the
null cone fills is decided by cut-and-paste ranks, which are generic
ranks of sums of Kronecker products and are evaluated here by exact
integer elimination at random integer points.

Ranks evaluated at random points can only under-estimate the generic
rank; the error is one-sided.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterator, List, Optional

import numpy as np

from .exact import bareiss_rank

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_TRIALS",
    "DEFAULT_ENTRY_BOUND",
    "CpRankQuery",
    "MltBounds",
    "cp_rank",
    "null_cone_fills",
    "lower_bound",
    "alpha_bound",
    "simple_upper_bound",
    "mlt_bounds",
    "mlt_table",
    "format_table",
]

DEFAULT_SEED = 0
DEFAULT_TRIALS = 3
DEFAULT_ENTRY_BOUND = 1000


@dataclass(frozen=True)
class CpRankQuery:
    """Parameters of a randomized cut-and-paste rank evaluation.

    ``X_i`` are ``c x a`` and ``Y_i`` are ``d x b``; the rank of
    ``sum_i X_i (x) Y_i`` is maximized over ``trials`` random integer points
    with entries in ``[-entry_bound, entry_bound]``.
    """

    a: int
    b: int
    c: int
    d: int
    n: int
    trials: int = DEFAULT_TRIALS
    entry_bound: int = DEFAULT_ENTRY_BOUND
    seed: Optional[int] = DEFAULT_SEED

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d, self.n) < 0:
            raise ValueError("dimensions and n must be nonnegative")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.entry_bound < 2:
            raise ValueError("entry_bound must be at least 2")


@dataclass(frozen=True)
class MltBounds:
    """One row of the threshold table: ``L <= mlt_b <= alpha <= U``."""

    m1: int
    m2: int
    lower_L: int
    exact_mltb: int
    alpha_upper: int
    simple_upper_U: int

    def to_dict(self) -> dict:
        return asdict(self)


def cp_rank(q: CpRankQuery) -> int:
    """Cut-and-paste rank ``cp^(n)(a, b, c, d)``, evaluated exactly at random integer points.

    Returns 0 when ``a*b == 0`` or ``c*d == 0`` (the matrix is empty).
    """
    a, b, c, d, n = q.a, q.b, q.c, q.d, q.n
    if a * b == 0 or c * d == 0 or n == 0:
        return 0
    cap = min(a * b, c * d)
    rng = np.random.default_rng(q.seed)
    best = 0
    for _ in range(q.trials):
        X = rng.integers(-q.entry_bound, q.entry_bound + 1, size=(n, c, a), dtype=np.int64)
        Yb = rng.integers(-q.entry_bound, q.entry_bound + 1, size=(n, d, b), dtype=np.int64)
        # entries are bounded by n * entry_bound^2, far inside int64
        M = np.zeros((c * d, a * b), dtype=np.int64)
        for Xi, Yi in zip(X, Yb):
            M += np.kron(Xi, Yi)
        best = max(best, bareiss_rank(M.tolist()))
        if best == cap:
            break
    return best


def null_cone_fills(
    m1: int,
    m2: int,
    n: int,
    trials: int = DEFAULT_TRIALS,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
    seed: Optional[int] = DEFAULT_SEED,
) -> bool:
    """Whether every tuple in ``(R^{m1 x m2})^n`` has unbounded likelihood.

    Inputs with ``m1 < m2`` are transposed. For ``n * m2 < m1`` the answer is
    always yes. Otherwise the null cone fills the space iff for some
    ``k in 1..m2``, with ``l = ceil(m1 k / m2) - 1`` and
    ``(a, b, c, d) = (m2 - k, k, m1 - l, n k - l)``, both ``c <= n a`` and
    ``cp^(n)(a, b, c, d) = c d`` hold.
    """
    if m1 < 1 or m2 < 1 or n < 0:
        raise ValueError("m1, m2 must be positive and n nonnegative")
    if m1 < m2:
        m1, m2 = m2, m1
    if n * m2 < m1:
        return True
    for k in range(1, m2 + 1):
        l = -(-m1 * k // m2) - 1
        a, b, c, d = m2 - k, k, m1 - l, n * k - l
        if c > n * a:
            continue
        # rank never exceeds a*b, so cd > ab rules the rank condition out
        if a * b < c * d:
            continue
        if cp_rank(CpRankQuery(a, b, c, d, n, trials, entry_bound, seed)) == c * d:
            return True
    return False


def lower_bound(m1: int, m2: int) -> int:
    """``ceil(m1 / m2)``"""
    return -(-m1 // m2)


def alpha_bound(m1: int, m2: int) -> int:
    """``floor(max_k (l/k + (m2 - k)/(m1 - l))) + 1`` with ``l = ceil(m1 k/m2) - 1``, in exact arithmetic."""
    best = None
    for k in range(1, m2 + 1):
        l = -(-m1 * k // m2) - 1
        val = Fraction(l, k) + Fraction(m2 - k, m1 - l)
        if best is None or val > best:
            best = val
    return math.floor(best) + 1


def simple_upper_bound(m1: int, m2: int) -> int:
    """``ceil(m1/m2 + m2/m1)``"""
    return math.ceil(Fraction(m1, m2) + Fraction(m2, m1))


def mlt_bounds(
    m1: int,
    m2: int,
    trials: int = DEFAULT_TRIALS,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
    seed: Optional[int] = DEFAULT_SEED,
) -> MltBounds:
    """Bounds and exact value of the boundedness threshold for shape ``(m1, m2)``.

    The exact threshold is the smallest ``n`` in ``[L, alpha]`` at which the
    null cone stops filling the space; at ``n = alpha`` it never fills, so the
    search always terminates inside the range.
    """
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be positive")
    if m1 < m2:
        m1, m2 = m2, m1
    L = lower_bound(m1, m2)
    alpha = alpha_bound(m1, m2)
    U = simple_upper_bound(m1, m2)
    exact = alpha
    for n in range(L, alpha):
        if not null_cone_fills(m1, m2, n, trials, entry_bound, seed):
            exact = n
            break
    return MltBounds(m1, m2, L, exact, alpha, U)


def _table_shapes(max_m1: int) -> Iterator[tuple]:
    for m1 in range(2, max_m1 + 1):
        for m2 in range(2, m1 + 1):
            yield m1, m2


def mlt_table(
    max_m1: int,
    trials: int = DEFAULT_TRIALS,
    entry_bound: int = DEFAULT_ENTRY_BOUND,
    seed: Optional[int] = DEFAULT_SEED,
) -> List[MltBounds]:
    """Rows for ``2 <= m2 <= m1 <= max_m1``, ordered by ``m1`` then ``m2``."""
    if max_m1 < 2:
        raise ValueError("max_m1 must be at least 2")
    return [mlt_bounds(m1, m2, trials, entry_bound, seed) for m1, m2 in _table_shapes(max_m1)]


def format_table(rows: List[MltBounds]) -> str:
    """Column-aligned text rendering of threshold rows."""
    header = ("m1", "m2", "L", "mlt_b", "alpha", "U")
    body = [
        (r.m1, r.m2, r.lower_L, r.exact_mltb, r.alpha_upper, r.simple_upper_U) for r in rows
    ]
    widths = [max(len(str(x)) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(str(x).rjust(w) for x, w in zip(row, widths)) for row in [header, *body]]
    return "\n".join(lines)
