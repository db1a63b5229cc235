"""Correspondence-maximized dot product between attributed graphs.

The similarity of two graphs is the maximum, over one-to-one node
correspondences, of the summed dot products between corresponding node and
induced edge attributes. Two solvers are provided: exhaustive permutation
enumeration (exact, small orders) and graduated assignment (heuristic, any
order). Values returned to callers are always recomputed from the hard
correspondence, never taken from solver internals.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
import numpy as np

from .exceptions import CapacityError, SizeError, ValidationError
from .graphs import AttributedGraph, Representation, to_representation

DEFAULT_EXACT_MAX_ORDER = 8
_HARD_ENUM_LIMIT = 9  # 9! permutations is the most the enumerator will materialize

# Count of hard matching problems actually solved (enumeration or annealing).
# Identity self-products are closed-form and do not count. Not thread-safe;
# intended for sequential accounting in experiments.
_SOLVER_CALLS = 0


def matcher_call_count() -> int:
    return _SOLVER_CALLS


def reset_matcher_call_count() -> None:
    global _SOLVER_CALLS
    _SOLVER_CALLS = 0


def _note_solver_call() -> None:
    global _SOLVER_CALLS
    _SOLVER_CALLS += 1


class MatchMatrix:
    """One-to-one node correspondence between an m-node and an n-node graph.

    `pairs` lists the assigned (row, col) couples; every row and column appears
    at most once and exactly min(m, n) pairs are assigned.
    """

    __slots__ = ("rows", "cols", "pairs")

    def __init__(self, rows: int, cols: int, pairs):
        rows, cols = int(rows), int(cols)
        if rows < 0 or cols < 0:
            raise ValidationError("match dimensions must be non-negative")
        pairs = tuple(sorted((int(i), int(r)) for i, r in pairs))
        if len(pairs) != min(rows, cols):
            raise ValidationError(
                f"a match between {rows} and {cols} nodes must assign {min(rows, cols)} pairs, "
                f"got {len(pairs)}"
            )
        seen_i = set()
        seen_r = set()
        for i, r in pairs:
            if not (0 <= i < rows and 0 <= r < cols):
                raise ValidationError(f"pair ({i},{r}) out of range for a {rows}x{cols} match")
            if i in seen_i or r in seen_r:
                raise ValidationError(f"pair ({i},{r}) violates the one-to-one constraints")
            seen_i.add(i)
            seen_r.add(r)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, name, value):
        raise AttributeError("MatchMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "MatchMatrix":
        return cls(n, n, [(i, i) for i in range(n)])

    def as_array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int8)
        for i, r in self.pairs:
            out[i, r] = 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MatchMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.pairs) == (other.rows, other.cols, other.pairs)

    def __repr__(self):
        return f"MatchMatrix({self.rows}x{self.cols}, pairs={list(self.pairs)})"


@dataclass(frozen=True)
class GaParams:
    """Annealing schedule and normalization knobs for graduated assignment."""

    beta_start: float = 0.5
    beta_rate: float = 1.075
    beta_max: float = 10.0
    sinkhorn_max_iters: int = 30
    sinkhorn_tol: float = 0.005
    assignment_rounds_max: int = 4

    def __post_init__(self):
        if self.beta_start <= 0:
            raise ValidationError("beta_start must be positive")
        if self.beta_rate <= 1:
            raise ValidationError("beta_rate must exceed 1")
        if self.beta_max <= self.beta_start:
            raise ValidationError("beta_max must exceed beta_start")
        if self.sinkhorn_max_iters < 1 or self.assignment_rounds_max < 1:
            raise ValidationError("iteration counts must be at least 1")
        if self.sinkhorn_tol <= 0:
            raise ValidationError("sinkhorn_tol must be positive")


@dataclass(frozen=True)
class MatcherConfig:
    """Solver selection: exact enumeration under a node-count cap, or graduated assignment."""

    method: str = "exact"
    exact_max_order: int = DEFAULT_EXACT_MAX_ORDER
    ga_params: GaParams = field(default_factory=GaParams)

    def __post_init__(self):
        if self.method not in ("exact", "graduated"):
            raise ValidationError(f"unknown matcher method {self.method!r}")
        if self.exact_max_order < 1:
            raise ValidationError("exact_max_order must be at least 1")

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "exact_max_order": self.exact_max_order,
            "ga_params": {
                "beta_start": self.ga_params.beta_start,
                "beta_rate": self.ga_params.beta_rate,
                "beta_max": self.ga_params.beta_max,
                "sinkhorn_max_iters": self.ga_params.sinkhorn_max_iters,
                "sinkhorn_tol": self.ga_params.sinkhorn_tol,
                "assignment_rounds_max": self.ga_params.assignment_rounds_max,
            },
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MatcherConfig":
        ga = doc.get("ga_params", {})
        return cls(
            method=doc.get("method", "exact"),
            exact_max_order=int(doc.get("exact_max_order", DEFAULT_EXACT_MAX_ORDER)),
            ga_params=GaParams(**ga) if ga else GaParams(),
        )


@dataclass(frozen=True)
class MatchResult:
    """A feasible correspondence plus its recomputed objective value."""

    value: float
    match: MatchMatrix
    exact: bool


def kernel_value(rx: Representation, ry: Representation, match: MatchMatrix) -> float:
    """Objective of one fixed correspondence: sum over assigned pairs (i->r, j->s)
    of dot(x_ij, y_rs), including diagonal node terms and both orientations of
    each undirected edge pair.

    Summed with `math.fsum`, so the value does not depend on pair enumeration
    order.
    """
    if match.rows != rx.order or match.cols != ry.order:
        raise SizeError(
            f"match is {match.rows}x{match.cols} but representations have orders "
            f"{rx.order} and {ry.order}"
        )
    cx, cy = rx.cells, ry.cells
    pairs = match.pairs
    terms = [
        float(np.dot(cx[i, j], cy[r, s]))
        for i, r in pairs
        for j, s in pairs
    ]
    return math.fsum(terms)


@lru_cache(maxsize=16)
def _permutations(n: int) -> np.ndarray:
    """All permutations of 0..n-1 in lexicographic order, one per row."""
    if n > _HARD_ENUM_LIMIT:
        raise CapacityError(f"will not enumerate permutations beyond order {_HARD_ENUM_LIMIT}")
    if n == 0:
        return np.zeros((1, 0), dtype=np.intp)
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def _pad_cells(cells: np.ndarray, n: int) -> np.ndarray:
    m, _, d = cells.shape
    if m == n:
        return cells
    out = np.zeros((n, n, d))
    out[:m, :m] = cells
    return out


def _best_permutation(cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """Lexicographically smallest permutation maximizing sum_ij dot(x_ij, y_p(i)p(j)).

    Both cell arrays must share the same order. Counts as one solver call.
    """
    _note_solver_call()
    n = cx.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.intp)
    compat = np.tensordot(cx, cy, axes=([2], [2]))  # compat[i, j, r, s] = dot(x_ij, y_rs)
    perms = _permutations(n)
    ii = np.arange(n).reshape(1, n, 1)
    jj = np.arange(n).reshape(1, 1, n)
    best_score = -np.inf
    best_perm = perms[0]
    chunk = 5040
    for start in range(0, perms.shape[0], chunk):
        block = perms[start : start + chunk]
        scores = compat[ii, jj, block[:, :, None], block[:, None, :]].sum(axis=(1, 2))
        k = int(np.argmax(scores))
        if scores[k] > best_score:
            best_score = float(scores[k])
            best_perm = block[k]
    return best_perm


def _restrict_to_real(perm: np.ndarray, m: int, n: int):
    """Drop padded rows/cols from a full permutation over the common order."""
    return tuple((i, int(perm[i])) for i in range(m) if perm[i] < n)


def exact_sdp(x: AttributedGraph, y: AttributedGraph, max_order: int = DEFAULT_EXACT_MAX_ORDER) -> MatchResult:
    """Exact dot product by enumerating all node correspondences.

    The smaller graph is padded with isolated zero nodes to the larger order,
    every permutation of that order is scored, and the lexicographically
    smallest maximizer wins ties.
    """
    if x.attr_dim != y.attr_dim:
        raise ValidationError(f"attribute dimensions differ: {x.attr_dim} vs {y.attr_dim}")
    n = max(x.order, y.order)
    if n > max_order:
        raise CapacityError(
            f"orders ({x.order}, {y.order}) exceed the exact cap {max_order}; "
            "use the graduated matcher"
        )
    rx, ry = to_representation(x), to_representation(y)
    cx = _pad_cells(rx.cells, n)
    cy = _pad_cells(ry.cells, n)
    perm = _best_permutation(cx, cy)
    match = MatchMatrix(x.order, y.order, _restrict_to_real(perm, x.order, y.order))
    return MatchResult(kernel_value(rx, ry, match), match, True)


def _ga_soft_pairs(cx: np.ndarray, cy: np.ndarray, params: GaParams):
    """Graduated assignment core on raw cell arrays; returns assigned (row, col) pairs.

    Softassign with one slack row and one slack column: compatibilities
    Q_ir = sum_js M_js dot(x_ij, y_rs) + dot(x_ii, y_rr) are exponentiated at
    inverse temperature beta, row/column-balanced by Sinkhorn iterations over the
    real rows and columns, and beta grows geometrically. The final soft matrix is
    discretized by greedy maximum selection down to min(m, n) pairs.
    """
    _note_solver_call()
    m, n = cx.shape[0], cy.shape[0]
    if min(m, n) == 0:
        return ()
    compat = np.tensordot(cx, cy, axes=([2], [2]))  # (m, m, n, n)
    node_comp = np.einsum("iirr->ir", compat)
    soft = np.full((m + 1, n + 1), 1.0 / (max(m, n) + 1.0))
    beta = params.beta_start
    while beta <= params.beta_max * (1 + 1e-12):
        for _ in range(params.assignment_rounds_max):
            q = np.einsum("ijrs,js->ir", compat, soft[:m, :n]) + node_comp
            shift = max(float(q.max()), 0.0)
            work = np.empty((m + 1, n + 1))
            work[:m, :n] = np.exp(beta * (q - shift))
            slack = math.exp(-beta * shift) if beta * shift < 700 else 0.0
            work[m, :] = slack
            work[:, n] = slack
            np.maximum(work, 1e-300, out=work)
            for _ in range(params.sinkhorn_max_iters):
                work[:m] /= work[:m].sum(axis=1, keepdims=True)
                work[:, :n] /= work[:, :n].sum(axis=0, keepdims=True)
                row_err = np.abs(work[:m].sum(axis=1) - 1.0).max(initial=0.0)
                col_err = np.abs(work[:, :n].sum(axis=0) - 1.0).max(initial=0.0)
                if max(row_err, col_err) <= params.sinkhorn_tol:
                    break
            soft = work
        beta *= params.beta_rate
    pick = soft[:m, :n].copy()
    pairs = []
    for _ in range(min(m, n)):
        i, r = np.unravel_index(int(np.argmax(pick)), pick.shape)
        pairs.append((int(i), int(r)))
        pick[i, :] = -np.inf
        pick[:, r] = -np.inf
    return tuple(sorted(pairs))


def ga_sdp(x: AttributedGraph, y: AttributedGraph, params: GaParams | None = None) -> MatchResult:
    """Heuristic dot product via graduated assignment.

    Always returns a feasible correspondence, so the value is a lower bound on
    the exact optimum; it is recomputed from the hard match.
    """
    params = params or GaParams()
    if x.attr_dim != y.attr_dim:
        raise ValidationError(f"attribute dimensions differ: {x.attr_dim} vs {y.attr_dim}")
    rx, ry = to_representation(x), to_representation(y)
    if not (np.isfinite(rx.cells).all() and np.isfinite(ry.cells).all()):
        raise ValidationError("graph attributes must be finite")
    pairs = _ga_soft_pairs(rx.cells, ry.cells, params)
    match = MatchMatrix(x.order, y.order, pairs)
    return MatchResult(kernel_value(rx, ry, match), match, False)


def _identity_self_product(x: AttributedGraph) -> MatchResult:
    rep = to_representation(x)
    match = MatchMatrix.identity(x.order)
    return MatchResult(kernel_value(rep, rep, match), match, True)


def sdp(x: AttributedGraph, y: AttributedGraph, cfg: MatcherConfig | None = None) -> MatchResult:
    """Dot product dispatch: exact under the order cap, graduated otherwise.

    The self-product of a graph with itself (same object) is closed-form: the
    identity correspondence is optimal, so no matching problem is solved.
    """
    cfg = cfg or MatcherConfig()
    if x.attr_dim != y.attr_dim:
        raise ValidationError(f"attribute dimensions differ: {x.attr_dim} vs {y.attr_dim}")
    if x is y:
        return _identity_self_product(x)
    if cfg.method == "exact":
        return exact_sdp(x, y, cfg.exact_max_order)
    return ga_sdp(x, y, cfg.ga_params)


def optimal_align(rw: Representation, x: AttributedGraph, cfg: MatcherConfig | None = None) -> Representation:
    """Representation of `x` in the index space of `rw`, optimally aligned with it.

    The result has the order of `rw`: if `x` is smaller it is padded with zero
    nodes, if larger only the best-matching nodes are kept. The flattened dot
    product of `rw` with the result equals the (dispatched) dot product value.
    """
    cfg = cfg or MatcherConfig()
    rx = to_representation(x)
    if rw.attr_dim != rx.attr_dim:
        raise ValidationError(f"attribute dimensions differ: {rw.attr_dim} vs {rx.attr_dim}")
    nw, nx = rw.order, rx.order
    n = max(nw, nx)
    if n == 0:
        return Representation.zeros(0, rw.attr_dim)
    if cfg.method == "exact":
        if n > cfg.exact_max_order:
            raise CapacityError(
                f"orders ({nw}, {nx}) exceed the exact cap {cfg.exact_max_order}; "
                "use the graduated matcher"
            )
        cw = _pad_cells(rw.cells, n)
        cxp = _pad_cells(rx.cells, n)
        perm = _best_permutation(cw, cxp)
        rows = perm[:nw]
        return Representation(cxp[np.ix_(rows, rows)])
    if not (np.isfinite(rw.cells).all() and np.isfinite(rx.cells).all()):
        raise ValidationError("attributes must be finite")
    pairs = _ga_soft_pairs(rw.cells, rx.cells, cfg.ga_params)
    aligned = np.zeros((nw, nw, rw.attr_dim))
    if pairs:
        rows = np.array([i for i, _ in pairs], dtype=np.intp)
        cols = np.array([r for _, r in pairs], dtype=np.intp)
        aligned[np.ix_(rows, rows)] = rx.cells[np.ix_(cols, cols)]
    return Representation(aligned)


def induced_distance(x: AttributedGraph, y: AttributedGraph, cfg: MatcherConfig | None = None) -> float:
    """Distance sqrt(x.x - 2 x.y + y.y) induced by the dot product.

    With exact matching this is the minimal Euclidean distance between
    representations of the two graphs after padding the smaller to the larger
    order: a metric on isomorphism classes of each fixed order. Because padding
    is pairwise, chains through an intermediate graph strictly larger than both
    endpoints can violate the triangle inequality when attribute dot products
    go negative. With the graduated matcher the cross term is a lower bound, so
    the radicand may be biased upward; it is clamped at zero either way.
    """
    cfg = cfg or MatcherConfig()
    sxx = sdp(x, x, cfg).value
    syy = sdp(y, y, cfg).value
    sxy = sdp(x, y, cfg).value
    return math.sqrt(max(0.0, sxx - 2.0 * sxy + syy))
