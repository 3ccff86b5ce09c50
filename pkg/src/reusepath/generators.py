"""Seeded random instance generators; the same seed always gives the same object."""

from __future__ import annotations

import random

from .model import Instance
from .reductions import CnfFormula, Literal, PartitionInstance


def random_dag(
    seed: int,
    max_vertices: int = 12,
    max_edges: int = 20,
    max_shared: int = 6,
    max_weight: int = 9,
    share_prob: float = 0.6,
) -> Instance:
    """Random DAG with source 0 and sink ``vertex_count - 1``.

    Each edge either draws one of up to ``max_shared`` shared labels (with
    that label's fixed weight) or gets a label of its own.  Vertex ids are
    shuffled so the topological order is not the identity.
    """
    rng = random.Random(seed)
    n = rng.randint(2, max_vertices)
    rank = list(range(1, n - 1))
    rng.shuffle(rank)
    # position in a hidden topological order -> vertex id; source first, sink last
    vertex_at = [0] + rank + [n - 1]
    m = rng.randint(1, max_edges)
    k = rng.randint(0, max_shared)
    shared_weight = {label: rng.randint(0, max_weight) for label in range(1, k + 1)}
    next_label = k + 1
    edges = []
    # a backbone path keeps the sink reachable most of the time
    if rng.random() < 0.8:
        positions = sorted(rng.sample(range(1, n - 1), rng.randint(0, min(n - 2, 3))))
        hops = [0] + positions + [n - 1]
        for a, b in zip(hops, hops[1:]):
            edges.append((vertex_at[a], vertex_at[b]))
    while len(edges) < m:
        a, b = sorted(rng.sample(range(n), 2))
        edges.append((vertex_at[a], vertex_at[b]))
    edges = edges[:max_edges]
    built = []
    for tail, head in edges:
        if k and rng.random() < share_prob:
            label = rng.randint(1, k)
            weight = shared_weight[label]
        else:
            label, next_label = next_label, next_label + 1
            weight = rng.randint(0, max_weight)
        built.append((tail, head, weight, label))
    return Instance.from_edges(n, built, 0, n - 1)


def random_colored_dag(seed: int, max_vertices: int = 10, max_edges: int = 18, max_colors: int = 4) -> Instance:
    """Random DAG whose labels are colors drawn from a small palette; weights are 1."""
    rng = random.Random(seed)
    base = random_dag(seed, max_vertices=max_vertices, max_edges=max_edges, max_shared=0)
    colors = rng.randint(1, max_colors)
    return Instance.from_edges(
        base.vertex_count,
        ((e.tail, e.head, 1, rng.randint(1, colors)) for e in base.edges),
        base.source,
        base.sink,
    )


def random_cnf(seed: int, max_vars: int = 8, max_clauses: int = 12) -> CnfFormula:
    """Random 3-literal CNF; variables are drawn independently so repeats can occur."""
    rng = random.Random(seed)
    n = rng.randint(1, max_vars)
    m = rng.randint(0, max_clauses)
    clauses = tuple(
        tuple(Literal(rng.randrange(n), rng.random() < 0.5) for _ in range(3)) for _ in range(m)
    )
    return CnfFormula(n, clauses)


def random_partition(seed: int, max_items: int = 10, max_total: int = 60) -> PartitionInstance:
    """Random PARTITION instance with at most ``max_items`` items and total at most ``max_total``."""
    rng = random.Random(seed)
    n = rng.randint(1, max_items)
    cap = max(1, max_total // n)
    weights = [rng.randint(1, cap) for _ in range(n)]
    return PartitionInstance(tuple(weights))
