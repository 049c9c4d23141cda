"""Gaussian graphical models on transitive DAGs.

For a DAG ``G`` the matrices ``g`` with ``g[i, j] = 0`` whenever ``i != j``
and ``j -> i`` is not an edge form a group exactly when ``G`` is transitive,
and then the structural equation model ``Y = Lambda Y + eps`` is the
Gaussian group model of that group. The MLE given a sample matrix exists
iff no row of the sample matrix is a linear combination of its parents'
rows, and then it is obtained by regressing each row on its parents.

Nodes carry arbitrary hashable labels. A sample matrix has one row per
node, in the order of :attr:`Dag.nodes`, and one column per observation.
"""

from __future__ import annotations

import enum
import graphlib
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exact import as_fraction_rows, bareiss_rank, integer_rows

__all__ = [
    "NotTransitiveError",
    "MleDoesNotExistError",
    "Dag",
    "MleExistence",
    "ExistenceResult",
    "TdagMle",
    "is_transitive",
    "group_pattern_holds",
    "mle_exists",
    "mlt_tdag",
    "unshielded_colliders",
    "null_cone_zariski_closed",
    "mle_tdag",
    "tdag_log_likelihood",
]

FLOAT_RANK_RTOL = 1e-10


class NotTransitiveError(ValueError):
    """The graph is not transitive, so its model is not a Gaussian group model."""


class MleDoesNotExistError(ValueError):
    """The likelihood is unbounded for the given samples."""


def _sort_key(label):
    return (0, label, "") if isinstance(label, (int, np.integer)) else (1, 0, str(label))


class Dag:
    """A directed acyclic graph on labelled nodes.

    Parameters
    ----------
    nodes : iterable
        Node labels. Labels appearing only in ``edges`` are added.
    edges : iterable of (j, i)
        Directed edges ``j -> i``.

    Raises
    ------
    ValueError
        On self-loops or directed cycles.
    """

    def __init__(self, nodes: Iterable[Hashable] = (), edges: Iterable[Tuple[Hashable, Hashable]] = ()):
        edges = [tuple(e) for e in edges]
        labels = list(dict.fromkeys(nodes))
        seen = set(labels)
        extra = []
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"edge must be a pair, got {e!r}")
            for v in e:
                if v not in seen:
                    seen.add(v)
                    extra.append(v)
        if extra:
            labels = labels + sorted(extra, key=_sort_key) if labels else sorted(extra, key=_sort_key)
        self.nodes: Tuple[Hashable, ...] = tuple(labels)
        self.index: Dict[Hashable, int] = {v: k for k, v in enumerate(self.nodes)}
        m = len(self.nodes)
        adj = np.zeros((m, m), dtype=bool)  # adj[i, j] <=> j -> i
        for j, i in edges:
            if j == i:
                raise ValueError(f"self-loop at node {j!r}")
            adj[self.index[i], self.index[j]] = True
        self._adj = adj
        self.edges = frozenset((self.nodes[j], self.nodes[i]) for i, j in zip(*np.nonzero(adj)))
        self._parents = [tuple(int(j) for j in np.flatnonzero(adj[i])) for i in range(m)]
        self._topo = self._toposort()

    def _toposort(self) -> List[int]:
        ts = graphlib.TopologicalSorter({i: self._parents[i] for i in range(self.m)})
        try:
            return list(ts.static_order())
        except graphlib.CycleError:
            raise ValueError("graph has a directed cycle") from None

    @property
    def m(self) -> int:
        return len(self.nodes)

    @property
    def adjacency(self) -> NDArray:
        """Boolean matrix with ``[i, j]`` true iff ``j -> i``."""
        return self._adj.copy()

    def parent_indices(self, i: int) -> Tuple[int, ...]:
        return self._parents[i]

    def parents(self, label) -> List[Hashable]:
        """Parents of the node with the given label, in node order."""
        return [self.nodes[j] for j in self._parents[self.index[label]]]

    def has_edge(self, j, i) -> bool:
        return bool(self._adj[self.index[i], self.index[j]])

    def in_degree(self) -> int:
        return max((len(p) for p in self._parents), default=0)

    def topological_order(self) -> List[Hashable]:
        return [self.nodes[i] for i in self._topo]

    def __repr__(self) -> str:
        es = sorted(self.edges, key=lambda e: (_sort_key(e[0]), _sort_key(e[1])))
        return f"Dag(nodes={list(self.nodes)!r}, edges={es!r})"


def is_transitive(g: Dag) -> bool:
    """True iff ``k -> j`` and ``j -> i`` always imply ``k -> i``."""
    a = g._adj.astype(np.int64)
    two_step = (a @ a) > 0
    return not np.any(two_step & ~g._adj)


def _require_transitive(g: Dag) -> None:
    if not is_transitive(g):
        raise NotTransitiveError(
            "graph is not transitive; its pattern matrices do not form a group"
        )


def group_pattern_holds(g: Dag, mat: ArrayLike, rtol: float = 1e-12) -> bool:
    """Whether ``mat`` is invertible and zero off the edge pattern of ``g``.

    Entry ``[i, j]`` with ``i != j`` may be nonzero only if ``j -> i``. Together
    with transitivity of ``g`` this certifies membership in the group of the
    model.
    """
    mat = np.asarray(mat)
    if mat.shape != (g.m, g.m):
        raise ValueError(f"expected a {g.m} x {g.m} matrix, got {mat.shape}")
    allowed = g._adj | np.eye(g.m, dtype=bool)
    if np.any(mat[~allowed] != 0):
        return False
    if mat.dtype == object:
        return bareiss_rank(integer_rows(as_fraction_rows(mat))) == g.m
    s = np.linalg.svd(mat.astype(float), compute_uv=False)
    return bool(s.size == 0 or s[-1] > rtol * s[0])


class MleExistence(str, enum.Enum):
    EXISTS = "Exists"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class ExistenceResult:
    """Outcome of :func:`mle_exists`; ``witness`` is the first offending node label."""

    status: MleExistence
    witness: Optional[Hashable] = None

    @property
    def exists(self) -> bool:
        return self.status is MleExistence.EXISTS


def _as_samples(g: Dag, Y, exact: bool):
    if exact:
        rows = as_fraction_rows(Y)
        if len(rows) != g.m or len({len(r) for r in rows}) > 1:
            raise ValueError(f"sample matrix must have {g.m} rows of equal length")
        if rows and len(rows[0]) < 1:
            raise ValueError("sample matrix needs at least one column")
        return rows
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != g.m or Y.shape[1] < 1:
        raise ValueError(f"sample matrix must have shape ({g.m}, n), got {Y.shape}")
    if not np.all(np.isfinite(Y)):
        raise ValueError("sample matrix has non-finite entries")
    return Y


def _float_rank(rows: NDArray) -> int:
    if rows.shape[0] == 0:
        return 0
    norms = np.linalg.norm(rows, axis=1)
    nz = norms > 0
    if not np.any(nz):
        return 0
    unit = rows[nz] / norms[nz, None]
    s = np.linalg.svd(unit, compute_uv=False)
    return int(np.sum(s > FLOAT_RANK_RTOL * s[0]))


def _row_dependent(Y, i: int, parents: Sequence[int], exact: bool) -> bool:
    if exact:
        ri = Y[i]
        if all(x == 0 for x in ri):
            return True
        if not parents:
            return False
        base = integer_rows([Y[p] for p in parents])
        return bareiss_rank(base + integer_rows([ri])) == bareiss_rank(base)
    ri = Y[i]
    if not np.any(ri):
        return True
    if not parents:
        return False
    P = Y[list(parents)]
    return _float_rank(np.vstack([P, ri])) == _float_rank(P)


def mle_exists(g: Dag, Y, exact: Optional[bool] = None) -> ExistenceResult:
    """Decide whether the MLE given the sample matrix ``Y`` exists.

    The likelihood is unbounded iff some row ``r_i`` is a linear combination
    of the rows of the parents of ``i`` (a zero row always counts);
    otherwise the MLE exists.

    Parameters
    ----------
    g : Dag
        Must be transitive.
    Y : array_like, shape (m, n)
        Row ``i`` holds the observations of ``g.nodes[i]``.
    exact : bool, optional
        Use rational arithmetic. By default exact arithmetic is used for
        integer arrays and nested lists of ints or Fractions, and a
        singular value test with relative tolerance ``1e-10`` otherwise.
    """
    _require_transitive(g)
    if exact is None:
        exact = _is_exact_input(Y)
    Ys = _as_samples(g, Y, exact)
    for i in g._topo:
        if _row_dependent(Ys, i, g.parent_indices(i), exact):
            return ExistenceResult(MleExistence.UNBOUNDED, g.nodes[i])
    return ExistenceResult(MleExistence.EXISTS)


def _is_exact_input(Y) -> bool:
    from fractions import Fraction

    if isinstance(Y, np.ndarray):
        if np.issubdtype(Y.dtype, np.integer):
            return True
        if Y.dtype == object:
            return all(isinstance(x, (int, Fraction, np.integer)) for x in Y.ravel())
        return False
    try:
        flat = [x for row in Y for x in row]
    except TypeError:
        return False
    return all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in flat)


def mlt_tdag(g: Dag) -> int:
    """Maximum likelihood threshold of a TDAG model: in-degree plus one."""
    _require_transitive(g)
    return g.in_degree() + 1


def unshielded_colliders(g: Dag) -> List[Tuple[Hashable, Hashable, Hashable]]:
    """All triples ``(j, i, k)`` with ``j -> i <- k``, ``j`` before ``k``, and ``j``, ``k`` non-adjacent.

    "Before" refers to the node order of ``g``.
    """
    out = []
    adj = g._adj
    for i in range(g.m):
        pa = g.parent_indices(i)
        for x, j in enumerate(pa):
            for k in pa[x + 1 :]:
                if not adj[j, k] and not adj[k, j]:
                    out.append((g.nodes[j], g.nodes[i], g.nodes[k]))
    return out


def null_cone_zariski_closed(g: Dag, n: int) -> bool:
    """Whether the set of samples with unbounded likelihood is Zariski closed.

    Valid for ``n >= mlt_tdag(g)``: closed iff ``g`` has no unshielded colliders.
    """
    mlt = mlt_tdag(g)
    if n < mlt:
        raise ValueError(
            f"criterion needs n >= mlt = {mlt}, got n = {n}"
        )
    return not unshielded_colliders(g)


@dataclass(frozen=True)
class TdagMle:
    """MLE in structural-equation form.

    ``Lambda`` holds regression coefficients (``Lambda[i, j]`` nonzero only
    for ``j -> i``), ``Omega`` the diagonal residual variances, and
    ``Psi = (I - Lambda)^T Omega^{-1} (I - Lambda)`` the concentration matrix.
    """

    Lambda: NDArray
    Omega: NDArray
    Psi: NDArray

    def to_dict(self) -> dict:
        return {
            "Lambda": self.Lambda.tolist(),
            "Omega": np.diag(self.Omega).tolist(),
            "Psi": self.Psi.tolist(),
        }


def assemble_psi(Lambda: NDArray, omega: NDArray) -> NDArray:
    """``(I - Lambda)^T diag(omega)^{-1} (I - Lambda)``"""
    B = np.eye(Lambda.shape[0]) - Lambda
    return B.T @ (B / omega[:, None])


def mle_tdag(g: Dag, Y: ArrayLike, exact: Optional[bool] = None) -> TdagMle:
    """MLE of the TDAG model by per-node least squares.

    Each row is regressed on its parents' rows; when the parent rows are
    linearly dependent the minimum-norm coefficients are used, which picks
    one representative among infinitely many MLEs. Residual variances are
    ``||residual||^2 / n``.

    Raises
    ------
    MleDoesNotExistError
        If the likelihood is unbounded for ``Y``.
    """
    res = mle_exists(g, Y, exact)
    if not res.exists:
        raise MleDoesNotExistError(
            f"likelihood is unbounded: row of node {res.witness!r} lies in the span of its parents"
        )
    Yf = np.array([[float(x) for x in row] for row in Y]) if not isinstance(Y, np.ndarray) else Y.astype(float)
    m, n = Yf.shape
    Lambda = np.zeros((m, m))
    omega = np.empty(m)
    for i in range(m):
        pa = list(g.parent_indices(i))
        ri = Yf[i]
        if pa:
            coef, *_ = np.linalg.lstsq(Yf[pa].T, ri, rcond=None)
            Lambda[i, pa] = coef
            resid = ri - coef @ Yf[pa]
        else:
            resid = ri
        omega[i] = float(resid @ resid) / n
    Psi = assemble_psi(Lambda, omega)
    return TdagMle(Lambda, np.diag(omega), (Psi + Psi.T) / 2)


def tdag_log_likelihood(Lambda: NDArray, omega: NDArray, S: NDArray) -> float:
    """``log det Psi - tr(Psi S)`` in ``(Lambda, omega)`` coordinates.

    ``det(I - Lambda) = 1`` for a DAG, so ``log det Psi = -sum(log omega)``.
    """
    Psi = assemble_psi(Lambda, omega)
    return -float(np.sum(np.log(omega))) - float(np.sum(Psi * S))
