"""Instances, paths and the reuse-aware path length."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class CycleError(ValueError):
    """Raised when a topological order is requested for a cyclic graph."""


class InvalidPathError(ValueError):
    """Raised when an edge sequence is not a source-to-sink chain."""


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int
    head: int
    weight: int
    label: int


@dataclass(frozen=True)
class Instance:
    """A weighted DAG with source, sink and an edge label per edge.

    Edge ids are positions in ``edges``; two edges with the same label
    must carry the same weight.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    source: int
    sink: int

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int, int, int]],
        source: int,
        sink: int,
    ) -> "Instance":
        """Build an instance from ``(tail, head, weight, label)`` tuples, numbering edges in order."""
        built = tuple(Edge(i, t, h, w, lab) for i, (t, h, w, lab) in enumerate(edges))
        return cls(vertex_count, built, source, sink)

    def out_edges(self) -> list[list[Edge]]:
        """Outgoing edges per vertex, each list in ascending edge id."""
        out: list[list[Edge]] = [[] for _ in range(self.vertex_count)]
        for e in self.edges:
            out[e.tail].append(e)
        return out

    def with_labels(self, mapping) -> "Instance":
        return Instance(
            self.vertex_count,
            tuple(Edge(e.id, e.tail, e.head, e.weight, mapping(e.label)) for e in self.edges),
            self.source,
            self.sink,
        )


@dataclass(frozen=True)
class PathTrace:
    edge_ids: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.edge_ids)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(self.violations)


def _has_cycle(vertex_count: int, edges: Sequence[Edge]) -> bool:
    indegree = [0] * vertex_count
    out: list[list[int]] = [[] for _ in range(vertex_count)]
    for e in edges:
        out[e.tail].append(e.head)
        indegree[e.head] += 1
    stack = [v for v in range(vertex_count) if indegree[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for h in out[v]:
            indegree[h] -= 1
            if indegree[h] == 0:
                stack.append(h)
    return seen != vertex_count


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_instance(instance: Instance) -> ValidationReport:
    """Collect every well-formedness violation of ``instance``.

    Never raises; an empty report means the instance is usable by the solvers.
    """
    report = ValidationReport()
    bad = report.violations
    n = instance.vertex_count
    if not _is_int(n) or n < 1:
        bad.append(f"vertex_count must be a positive integer, got {n!r}")
        return report

    for name, v in (("source", instance.source), ("sink", instance.sink)):
        if not _is_int(v) or not 0 <= v < n:
            bad.append(f"{name} {v!r} is not a vertex id in 0..{n - 1}")
    if instance.source == instance.sink and n != 1:
        bad.append("source equals sink")

    in_range: list[Edge] = []
    weights_by_label: dict[int, set[int]] = {}
    for pos, e in enumerate(instance.edges):
        if e.id != pos:
            bad.append(f"edge at position {pos} has id {e.id}")
        endpoints_ok = True
        for end in (e.tail, e.head):
            if not _is_int(end) or not 0 <= end < n:
                bad.append(f"edge {pos} has dangling vertex id {end!r}")
                endpoints_ok = False
        if endpoints_ok and e.tail == e.head:
            bad.append(f"edge {pos} is a self-loop at vertex {e.tail}")
        if not _is_int(e.weight) or e.weight < 0:
            bad.append(f"edge {pos} has weight {e.weight!r}, expected a nonnegative integer")
        if not _is_int(e.label) or e.label < 1:
            bad.append(f"edge {pos} has label {e.label!r}, expected a positive integer")
        else:
            weights_by_label.setdefault(e.label, set()).add(e.weight)
        if endpoints_ok:
            in_range.append(e)

    for label in sorted(weights_by_label):
        ws = weights_by_label[label]
        if len(ws) > 1:
            shown = ",".join(str(w) for w in sorted(ws, key=lambda w: (0, w) if _is_int(w) else (1, repr(w))))
            bad.append(f"label {label} has weights {{{shown}}}")

    if _has_cycle(n, in_range):
        bad.append("graph has a cycle")
    return report


def topological_order(instance: Instance) -> list[int]:
    """Kahn's algorithm, always releasing the smallest ready vertex id first."""
    n = instance.vertex_count
    indegree = [0] * n
    out = instance.out_edges()
    for e in instance.edges:
        indegree[e.head] += 1
    ready = [v for v in range(n) if indegree[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for e in out[v]:
            indegree[e.head] -= 1
            if indegree[e.head] == 0:
                heapq.heappush(ready, e.head)
    if len(order) != n:
        raise CycleError("graph has a cycle")
    return order


def check_path(instance: Instance, path: PathTrace) -> list[Edge]:
    """Resolve ``path`` to its edges, raising InvalidPathError unless it is an s-t chain."""
    ids = path.edge_ids
    if not ids:
        if instance.source != instance.sink:
            raise InvalidPathError("empty path but source differs from sink")
        return []
    edges: list[Edge] = []
    for i in ids:
        if not _is_int(i) or not 0 <= i < len(instance.edges):
            raise InvalidPathError(f"unknown edge id {i!r}")
        edges.append(instance.edges[i])
    if edges[0].tail != instance.source:
        raise InvalidPathError(f"path starts at vertex {edges[0].tail}, not at source {instance.source}")
    for a, b in zip(edges, edges[1:]):
        if a.head != b.tail:
            raise InvalidPathError(f"edge {a.id} ends at {a.head} but edge {b.id} starts at {b.tail}")
    if edges[-1].head != instance.sink:
        raise InvalidPathError(f"path ends at vertex {edges[-1].head}, not at sink {instance.sink}")
    return edges


def reuse_length(instance: Instance, path: PathTrace) -> int:
    """Length of ``path`` where each label's weight is paid only at its first occurrence.

    Two traversals: the first marks every label on the path unused, the
    second pays for unused labels and marks them used.
    """
    edges = check_path(instance, path)
    used: dict[int, bool] = {}
    for e in edges:
        used[e.label] = False
    total = 0
    for e in edges:
        if not used[e.label]:
            total += e.weight
            used[e.label] = True
    return total


def plain_length(instance: Instance, path: PathTrace) -> int:
    return sum(e.weight for e in check_path(instance, path))


def verify_budget(instance: Instance, path: PathTrace, budget: int) -> bool:
    """True iff the reuse length of ``path`` is at most ``budget``."""
    if not _is_int(budget) or budget < 0:
        raise ValueError(f"budget must be a nonnegative integer, got {budget!r}")
    return reuse_length(instance, path) <= budget
