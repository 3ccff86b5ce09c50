"""Shared strategies and the acceptance log for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from reusepath.model import Instance

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


@st.composite
def dags(draw, max_vertices=8, max_edges=12, max_label=5, max_weight=6):
    """Small random DAGs with consistent label weights; source 0, sink n-1."""
    n = draw(st.integers(2, max_vertices))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1])
    pairs = draw(st.lists(pair, max_size=max_edges))
    weight_of = draw(st.lists(st.integers(0, max_weight), min_size=max_label, max_size=max_label))
    labels = draw(st.lists(st.integers(1, max_label), min_size=len(pairs), max_size=len(pairs)))
    edges = [(a, b, weight_of[lab - 1], lab) for (a, b), lab in zip(pairs, labels)]
    return Instance.from_edges(n, edges, 0, n - 1)
