"""Shared sampling helpers for the test suite."""
import numpy as np

from sublin import (AttributedGraph, Permutation, apply_permutation,
                    from_representation, to_representation)


def rand_graph(rng, order, attr_dim, density=0.5, scale=1.0, distinct_nodes=False):
    """Random graph with continuous attributes (zero edge vectors never occur)."""
    nodes = rng.uniform(-scale, scale, size=(order, attr_dim))
    if distinct_nodes and order > 1:
        nodes[:, 0] = np.linspace(-scale, scale, order) + rng.normal(0, 0.05 * scale, order)
    edges = []
    for i in range(order):
        for j in range(i + 1, order):
            if rng.random() < density:
                edges.append((i, j, rng.uniform(-scale, scale, size=attr_dim)))
    return AttributedGraph(nodes, edges)


def rand_sym_cells(rng, order, attr_dim, scale=1.0):
    """Random symmetric point of the ambient representation space."""
    a = rng.normal(size=(order, order, attr_dim)) * scale
    return (a + a.transpose(1, 0, 2)) / 2.0


def permuted_graph(graph, mapping):
    """The same graph with nodes relabeled by `mapping`."""
    rep = to_representation(graph)
    return from_representation(apply_permutation(rep, Permutation(mapping)), label=graph.label)


def rand_permutation(rng, n):
    return Permutation(rng.permutation(n))


def rel_close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
