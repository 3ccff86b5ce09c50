"""Exact solvers for the reuse shortest path problem.

``solve_labelset`` is a best-first search over (vertex, used shared labels)
states with dominance pruning; ``solve_bruteforce`` enumerates every s-t
path and is kept as the ground-truth oracle for small instances.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional

from .model import Instance, PathTrace, reuse_length, topological_order

#: Dominance modes accepted by :func:`solve_labelset` and :func:`decide`.
DOMINANCE_MODES = ("reachable", "simple", "none")


@dataclass(frozen=True)
class SolveResult:
    optimal_length: Optional[int]
    witness: Optional[PathTrace]
    states_expanded: int = 0
    states_pruned: int = 0

    @property
    def reachable(self) -> bool:
        return self.optimal_length is not None


@dataclass
class SearchState:
    vertex: int
    used_labels: int  # bitmask over the shared-label universe
    cost: int
    parent: Optional["SearchState"]
    edge_id: int = -1
    # edge ids from the source; only used to order equal-cost states
    trail: tuple[int, ...] = ()

    def path(self) -> PathTrace:
        ids: list[int] = []
        state: Optional[SearchState] = self
        while state is not None and state.parent is not None:
            ids.append(state.edge_id)
            state = state.parent
        return PathTrace(tuple(reversed(ids)))


def enumerate_paths(instance: Instance) -> Iterator[PathTrace]:
    """Yield every s-t path once, in lexicographic order of edge-id sequences."""
    out = instance.out_edges()
    reaches = _reaches_sink(instance, out)
    if not reaches[instance.source]:
        return
    if instance.source == instance.sink:
        yield PathTrace(())
        return
    trail: list[int] = []
    # explicit stack of out-edge iterators keeps deep DAGs off the recursion limit
    stack = [iter(out[instance.source])]
    while stack:
        for e in stack[-1]:
            if not reaches[e.head]:
                continue
            trail.append(e.id)
            if e.head == instance.sink:
                yield PathTrace(tuple(trail))
                trail.pop()
                continue
            stack.append(iter(out[e.head]))
            break
        else:
            stack.pop()
            if trail:
                trail.pop()


def _reaches_sink(instance: Instance, out) -> list[bool]:
    reaches = [False] * instance.vertex_count
    reaches[instance.sink] = True
    for v in reversed(topological_order(instance)):
        if any(reaches[e.head] for e in out[v]):
            reaches[v] = True
    return reaches


def solve_bruteforce(instance: Instance) -> SolveResult:
    """Minimum reuse length over all s-t paths; first minimum in enumeration order wins ties."""
    best: Optional[int] = None
    witness: Optional[PathTrace] = None
    count = 0
    for path in enumerate_paths(instance):
        count += 1
        r = reuse_length(instance, path)
        if best is None or r < best:
            best, witness = r, path
    return SolveResult(best, witness, states_expanded=count)


def dag_shortest_path_length(instance: Instance) -> Optional[int]:
    """Classic DAG shortest path length, ignoring label reuse."""
    dist: list[Optional[int]] = [None] * instance.vertex_count
    dist[instance.source] = 0
    out = instance.out_edges()
    for v in topological_order(instance):
        if dist[v] is None:
            continue
        for e in out[v]:
            cand = dist[v] + e.weight
            if dist[e.head] is None or cand < dist[e.head]:
                dist[e.head] = cand
    return dist[instance.sink]


def shared_labels(instance: Instance) -> list[int]:
    """Labels carried by at least two edges, ascending."""
    counts = Counter(e.label for e in instance.edges)
    return sorted(label for label, c in counts.items() if c > 1)


def _reachable_label_masks(instance: Instance, bit: dict[int, int], out) -> list[int]:
    masks = [0] * instance.vertex_count
    for v in reversed(topological_order(instance)):
        m = 0
        for e in out[v]:
            m |= masks[e.head] | bit.get(e.label, 0)
        masks[v] = m
    return masks


def _search(instance: Instance, dominance: str, budget: Optional[int]) -> SolveResult:
    if dominance not in DOMINANCE_MODES:
        raise ValueError(f"unknown dominance mode {dominance!r}; expected one of {DOMINANCE_MODES}")
    out = instance.out_edges()
    bit = {label: 1 << i for i, label in enumerate(shared_labels(instance))}
    if dominance == "reachable":
        relevant = _reachable_label_masks(instance, bit, out)
    else:
        relevant = [-1] * instance.vertex_count
    # retained[v] holds (masked label set, cost) of expanded states at v
    retained: list[list[tuple[int, int]]] = [[] for _ in range(instance.vertex_count)]

    def dominated(state: SearchState) -> bool:
        if dominance == "none":
            return False
        m = state.used_labels & relevant[state.vertex]
        return any(c1 <= state.cost and m & ~m1 == 0 for m1, c1 in retained[state.vertex])

    start = SearchState(instance.source, 0, 0, None)
    frontier = [(0, (), 0, start)]
    tiebreak = 1
    expanded = pruned = 0
    while frontier:
        cost, _, _, state = heapq.heappop(frontier)
        if budget is not None and cost > budget:
            break
        if dominated(state):
            pruned += 1
            continue
        if state.vertex == instance.sink:
            return SolveResult(cost, state.path(), expanded, pruned)
        expanded += 1
        if dominance != "none":
            retained[state.vertex].append((state.used_labels & relevant[state.vertex], cost))
        for e in out[state.vertex]:
            b = bit.get(e.label, 0)
            reused = b and state.used_labels & b
            child = SearchState(
                e.head,
                state.used_labels | b,
                cost + (0 if reused else e.weight),
                state,
                e.id,
                state.trail + (e.id,),
            )
            if dominated(child):
                pruned += 1
                continue
            heapq.heappush(frontier, (child.cost, child.trail, tiebreak, child))
            tiebreak += 1
    return SolveResult(None, None, expanded, pruned)


def _checked(instance: Instance, result: SolveResult) -> SolveResult:
    if result.witness is not None and reuse_length(instance, result.witness) != result.optimal_length:
        raise RuntimeError(
            f"solver witness has reuse length {reuse_length(instance, result.witness)}, "
            f"reported {result.optimal_length}"
        )
    return result


def solve_labelset(instance: Instance, dominance: str = "reachable") -> SolveResult:
    """Optimal reuse length and the lexicographically least optimal path.

    ``dominance`` selects the pruning rule: ``"reachable"`` compares used
    labels restricted to those still reachable from the vertex,
    ``"simple"`` compares full label sets, ``"none"`` disables pruning.
    An unreachable sink gives ``optimal_length=None``.
    """
    return _checked(instance, _search(instance, dominance, None))


def decide(instance: Instance, budget: int, dominance: str = "reachable") -> tuple[bool, Optional[PathTrace]]:
    """Is there an s-t path with reuse length at most ``budget``? Returns the answer and a witness."""
    if budget < 0:
        raise ValueError(f"budget must be nonnegative, got {budget}")
    result = _checked(instance, _search(instance, dominance, budget))
    if result.witness is None:
        return False, None
    return True, result.witness
