import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reusepath.model import (
    CycleError,
    Instance,
    InvalidPathError,
    PathTrace,
    plain_length,
    reuse_length,
    topological_order,
    validate_instance,
    verify_budget,
)
from reusepath.solvers import enumerate_paths

from helpers import dags


def chain(*edges):
    """Path graph 0 -> 1 -> ... from (weight, label) pairs."""
    return Instance.from_edges(len(edges) + 1, [(i, i + 1, w, lab) for i, (w, lab) in enumerate(edges)], 0, len(edges))


def full_path(instance):
    return PathTrace(tuple(range(len(instance.edges))))


DIAMOND = Instance.from_edges(4, [(0, 1, 1, 1), (0, 2, 1, 2), (1, 3, 1, 3), (2, 3, 1, 4)], 0, 3)


class TestValidate:
    def test_single_edge_ok(self):
        assert validate_instance(Instance.from_edges(2, [(0, 1, 1, 1)], 0, 1)).ok

    def test_label_weight_conflict(self):
        inst = Instance.from_edges(3, [(0, 1, 2, 5), (1, 2, 3, 5)], 0, 2)
        assert validate_instance(inst).violations == ["label 5 has weights {2,3}"]

    def test_two_cycle(self):
        inst = Instance.from_edges(2, [(0, 1, 1, 1), (1, 0, 1, 2)], 0, 1)
        assert "graph has a cycle" in validate_instance(inst).violations

    def test_reports_every_violation(self):
        inst = Instance.from_edges(3, [(0, 5, 1, 1), (1, 1, 0, 2), (0, 2, -1, 0)], 0, 0)
        report = validate_instance(inst)
        text = str(report)
        assert not report.ok
        for piece in ("source equals sink", "dangling vertex id 5", "self-loop", "weight -1", "label 0", "graph has a cycle"):
            assert piece in text

    def test_bad_source_sink(self):
        report = validate_instance(Instance.from_edges(2, [(0, 1, 1, 1)], 0, 7))
        assert report.violations == ["sink 7 is not a vertex id in 0..1"]

    def test_single_vertex_source_equals_sink(self):
        assert validate_instance(Instance.from_edges(1, [], 0, 0)).ok

    def test_parallel_edges_allowed(self):
        assert validate_instance(Instance.from_edges(2, [(0, 1, 3, 1), (0, 1, 5, 2)], 0, 1)).ok


class TestTopologicalOrder:
    def test_chain(self):
        assert topological_order(chain((1, 1), (1, 2))) == [0, 1, 2]

    def test_diamond_ties_by_id(self):
        assert topological_order(DIAMOND) == [0, 1, 2, 3]

    def test_cycle(self):
        with pytest.raises(CycleError):
            topological_order(Instance.from_edges(2, [(0, 1, 1, 1), (1, 0, 1, 2)], 0, 1))

    @given(dags())
    def test_edges_go_forward(self, inst):
        pos = {v: i for i, v in enumerate(topological_order(inst))}
        assert sorted(pos) == list(range(inst.vertex_count))
        assert all(pos[e.tail] < pos[e.head] for e in inst.edges)


class TestReuseLength:
    def test_distinct_labels(self):
        assert reuse_length(chain((2, 1), (3, 2)), PathTrace((0, 1))) == 5

    def test_repeated_label_counted_once(self):
        assert reuse_length(chain((3, 7), (4, 9), (3, 7)), PathTrace((0, 1, 2))) == 7

    def test_empty_path(self):
        assert reuse_length(Instance.from_edges(1, [], 0, 0), PathTrace()) == 0

    @pytest.mark.parametrize("ids", [(1,), (0, 0), (0,), (), (0, 5)])
    def test_invalid_paths(self, ids):
        with pytest.raises(InvalidPathError):
            reuse_length(chain((1, 1), (1, 2)), PathTrace(ids))

    def test_budget(self):
        inst = chain((3, 7), (4, 9), (3, 7))
        p = full_path(inst)
        assert verify_budget(inst, p, 7)
        assert not verify_budget(inst, p, 6)
        assert verify_budget(Instance.from_edges(1, [], 0, 0), PathTrace(), 0)
        with pytest.raises(ValueError):
            verify_budget(inst, p, -1)

    def test_budget_propagates_invalid_path(self):
        with pytest.raises(InvalidPathError):
            verify_budget(chain((1, 1)), PathTrace(()), 3)


@settings(max_examples=150)
@given(dags())
def test_reuse_bounded_by_plain_length(inst):
    for p in enumerate_paths(inst):
        labels = [inst.edges[i].label for i in p.edge_ids]
        r, plain = reuse_length(inst, p), plain_length(inst, p)
        assert r <= plain
        if len(set(labels)) == len(labels):
            assert r == plain
        elif r == plain:
            # equality with repeats only when every repeated occurrence weighs 0
            assert all(inst.edges[i].weight == 0 for k, i in enumerate(p.edge_ids) if labels[k] in labels[:k])


@settings(max_examples=100)
@given(dags(), st.permutations(range(1, 6)))
def test_relabeling_invariance(inst, perm):
    relabeled = inst.with_labels(lambda lab: perm[lab - 1] * 10)
    for p in enumerate_paths(inst):
        assert reuse_length(inst, p) == reuse_length(relabeled, p)


@settings(max_examples=100)
@given(dags())
def test_prefixes_and_appending(inst):
    """Growing a path edge by edge: a seen label adds 0, a fresh one adds its weight."""
    for p in enumerate_paths(inst):
        seen: set[int] = set()
        prefix_lengths = [0]
        for eid in p.edge_ids:
            e = inst.edges[eid]
            prefix_lengths.append(prefix_lengths[-1] + (0 if e.label in seen else e.weight))
            seen.add(e.label)
        assert prefix_lengths[-1] == reuse_length(inst, p)
        assert prefix_lengths == sorted(prefix_lengths)


def test_verify_budget_exhaustive():
    inst = Instance.from_edges(
        4, [(0, 1, 2, 1), (0, 2, 3, 2), (1, 3, 3, 2), (2, 3, 2, 1), (0, 3, 6, 3), (1, 2, 0, 4)], 0, 3
    )
    for p in enumerate_paths(inst):
        r = reuse_length(inst, p)
        for k in range(12):
            assert verify_budget(inst, p, k) == (r <= k)
