"""Attributed graphs, their matrix representations, and the node-relabeling action.

A graph stores one real vector of a fixed dimension per node and per undirected
edge. A representation is the dense, symmetric matrix-of-vectors encoding of a
graph under one particular node ordering; relabeling the nodes permutes the
representation without changing the graph.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Tuple

import numpy as np

from .exceptions import SizeError, ValidationError

EdgeKey = Tuple[int, int]


def _canonical_edge(i, j) -> EdgeKey:
    if i == j:
        raise ValidationError(f"self-loop on node {i} is not allowed")
    return (i, j) if i < j else (j, i)


class AttributedGraph:
    """Undirected graph whose nodes and edges carry real vectors of one dimension.

    Edges are stored sparsely under canonical (i, j) keys with i < j. A stored
    edge whose attribute is the zero vector is indistinguishable from a missing
    edge once the graph is written as a dense representation; such graphs are
    accepted here but rejected by :func:`to_representation`, and can be repaired
    with :func:`attach_edge_flag`.
    """

    __slots__ = ("node_attrs", "edge_attrs", "label")

    def __init__(self, node_attrs, edges=(), label=None):
        nodes = np.asarray(node_attrs, dtype=np.float64)
        if nodes.ndim != 2:
            raise ValidationError(
                f"node attributes must be a 2-D (order x attr_dim) array, got shape {nodes.shape}"
            )
        if nodes.shape[1] < 1:
            raise ValidationError("attribute dimension must be at least 1")
        order, dim = nodes.shape

        items: Iterable
        if isinstance(edges, Mapping):
            items = ((i, j, vec) for (i, j), vec in edges.items())
        else:
            items = edges
        stored = {}
        for i, j, vec in items:
            i, j = int(i), int(j)
            if not (0 <= i < order and 0 <= j < order):
                raise ValidationError(f"edge ({i},{j}) references a node outside 0..{order - 1}")
            key = _canonical_edge(i, j)
            v = np.asarray(vec, dtype=np.float64)
            if v.shape != (dim,):
                raise ValidationError(
                    f"edge {key} attribute has shape {v.shape}, expected ({dim},)"
                )
            if key in stored:
                if not np.array_equal(stored[key], v):
                    raise ValidationError(f"conflicting attributes for undirected edge {key}")
                continue
            v.flags.writeable = False
            stored[key] = v

        nodes = nodes.copy()
        nodes.flags.writeable = False
        object.__setattr__(self, "node_attrs", nodes)
        object.__setattr__(self, "edge_attrs", stored)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("AttributedGraph is immutable")

    @classmethod
    def empty(cls, attr_dim: int, order: int = 0, label=None) -> "AttributedGraph":
        """Graph with `order` zero-attribute nodes and no edges."""
        return cls(np.zeros((order, attr_dim)), (), label)

    @property
    def order(self) -> int:
        return self.node_attrs.shape[0]

    @property
    def attr_dim(self) -> int:
        return self.node_attrs.shape[1]

    @property
    def n_edges(self) -> int:
        return len(self.edge_attrs)

    def edge_items(self):
        """Edges as ((i, j), vector) pairs in deterministic (sorted) order."""
        return sorted(self.edge_attrs.items())

    def with_label(self, label) -> "AttributedGraph":
        return AttributedGraph(self.node_attrs, self.edge_attrs, label)

    def __eq__(self, other):
        if not isinstance(other, AttributedGraph):
            return NotImplemented
        return (
            self.label == other.label
            and np.array_equal(self.node_attrs, other.node_attrs)
            and self.edge_attrs.keys() == other.edge_attrs.keys()
            and all(np.array_equal(v, other.edge_attrs[k]) for k, v in self.edge_attrs.items())
        )

    def __repr__(self):
        lbl = f", label={self.label!r}" if self.label is not None else ""
        return f"AttributedGraph(order={self.order}, attr_dim={self.attr_dim}, edges={self.n_edges}{lbl})"


class Representation:
    """Dense symmetric encoding of a graph: an (n, n, d) array of attribute vectors.

    The diagonal holds node attributes, off-diagonal cells hold edge attributes,
    and a zero off-diagonal cell means no edge.
    """

    __slots__ = ("cells",)

    def __init__(self, cells):
        arr = np.asarray(cells, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"cells must have shape (n, n, d), got {arr.shape}")
        if arr.shape[2] < 1:
            raise ValidationError("attribute dimension must be at least 1")
        if not np.array_equal(arr, arr.transpose(1, 0, 2)):
            raise ValidationError("representation cells must be symmetric")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "cells", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Representation is immutable")

    @classmethod
    def zeros(cls, order: int, attr_dim: int) -> "Representation":
        return cls(np.zeros((order, order, attr_dim)))

    @property
    def order(self) -> int:
        return self.cells.shape[0]

    @property
    def attr_dim(self) -> int:
        return self.cells.shape[2]

    @property
    def vector(self) -> np.ndarray:
        """Flattened replica of the cell array (length n*n*d)."""
        return self.cells.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return np.array_equal(self.cells, other.cells)

    def __repr__(self):
        return f"Representation(order={self.order}, attr_dim={self.attr_dim})"


class Permutation:
    """Bijection on {0..n-1}; index i is sent to mapping[i]."""

    __slots__ = ("mapping",)

    def __init__(self, mapping):
        arr = np.asarray(mapping, dtype=np.intp)
        if arr.ndim != 1:
            raise ValidationError("permutation mapping must be 1-D")
        n = arr.shape[0]
        if n and (
            arr.min() < 0
            or arr.max() >= n
            or np.bincount(arr, minlength=n).max() > 1
        ):
            raise ValidationError("mapping is not a bijection on 0..n-1")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "mapping", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    def __len__(self):
        return self.mapping.shape[0]

    def __call__(self, i: int) -> int:
        return int(self.mapping[i])

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(i) = self(other(i))."""
        if len(self) != len(other):
            raise SizeError("cannot compose permutations of different lengths")
        return Permutation(self.mapping[other.mapping])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(len(self))
        return Permutation(inv)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.mapping, other.mapping)

    def __repr__(self):
        return f"Permutation({self.mapping.tolist()})"


def pad_to_order(graph: AttributedGraph, n: int) -> AttributedGraph:
    """Extend a graph to order n by appending isolated zero-attribute nodes."""
    if n < graph.order:
        raise SizeError(f"cannot pad graph of order {graph.order} down to {n}")
    if n == graph.order:
        return graph
    nodes = np.zeros((n, graph.attr_dim))
    nodes[: graph.order] = graph.node_attrs
    return AttributedGraph(nodes, graph.edge_attrs, graph.label)


def attach_edge_flag(graph: AttributedGraph) -> AttributedGraph:
    """Append one attribute dimension that is 1 on every edge and 0 on every node.

    Guarantees stored edge attributes are non-zero even when the original
    attributes were zero vectors, so the graph survives the dense encoding.
    """
    nodes = np.concatenate([graph.node_attrs, np.zeros((graph.order, 1))], axis=1)
    edges = [(i, j, np.concatenate([v, [1.0]])) for (i, j), v in graph.edge_items()]
    return AttributedGraph(nodes, edges, graph.label)


def to_representation(graph: AttributedGraph) -> Representation:
    """Dense symmetric encoding of the graph under its stored node order.

    Raises if any stored edge attribute is a zero vector, since that edge would
    silently disappear (use :func:`attach_edge_flag` first).
    """
    n, d = graph.order, graph.attr_dim
    cells = np.zeros((n, n, d))
    for i in range(n):
        cells[i, i] = graph.node_attrs[i]
    for (i, j), v in graph.edge_attrs.items():
        if not np.any(v):
            raise ValidationError(
                f"edge ({i},{j}) has a zero attribute vector and cannot be represented; "
                "attach an edge flag first"
            )
        cells[i, j] = v
        cells[j, i] = v
    return Representation(cells)


def from_representation(rep: Representation, label=None) -> AttributedGraph:
    """Project a representation back to a graph: zero off-diagonal cells become non-edges."""
    cells = rep.cells
    n = rep.order
    nodes = np.stack([cells[i, i] for i in range(n)]) if n else np.zeros((0, rep.attr_dim))
    edges = [
        (i, j, cells[i, j])
        for i in range(n)
        for j in range(i + 1, n)
        if np.any(cells[i, j])
    ]
    return AttributedGraph(nodes, edges, label)


def apply_permutation(rep: Representation, perm: Permutation) -> Representation:
    """Relabel nodes: cell (i, j) moves to (perm(i), perm(j))."""
    if len(perm) != rep.order:
        raise SizeError(f"permutation length {len(perm)} != representation order {rep.order}")
    out = np.empty_like(rep.cells)
    p = perm.mapping
    out[np.ix_(p, p)] = rep.cells
    return Representation(out)
