from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reusepath.generators import random_cnf, random_colored_dag, random_partition
from reusepath.model import Instance, InvalidPathError, PathTrace, reuse_length, validate_instance
from reusepath.reductions import (
    REFUTED,
    CONSISTENT,
    CnfFormula,
    EdgeTag,
    Literal,
    MalformedInputError,
    PartitionInstance,
    TooLargeError,
    UnsatisfiedClauseError,
    all_satisfying_assignments,
    assignment_to_path,
    brute_force_partition,
    brute_force_sat,
    check_3sat_iff,
    demonstrate_flaw,
    extract_assignment,
    min_color_count_bruteforce,
    reduce_3sat,
    reduce_mincolor,
    reduce_partition,
    satisfies,
)
from reusepath.solvers import enumerate_paths, solve_bruteforce, solve_labelset

SAT_3 = CnfFormula.from_dimacs(3, [[1, -2, 3]])
UNSAT_1 = CnfFormula.from_dimacs(1, [[1], [-1]], pad_to_3=True)

formulas = st.builds(random_cnf, st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 5))


class TestCnfFormula:
    def test_padding_repeats_last_literal(self):
        assert UNSAT_1.clauses == ((Literal(0),) * 3, (Literal(0, False),) * 3)

    @pytest.mark.parametrize("n, clauses", [(0, []), (2, [[1, 2]]), (2, [[1, 2, 3]]), (1, [[1, 1, 1, 1]])])
    def test_malformed(self, n, clauses):
        with pytest.raises(MalformedInputError):
            CnfFormula.from_dimacs(n, clauses)


class TestReduce3Sat:
    def test_example_sizes(self):
        inst, _ = reduce_3sat(SAT_3)
        assert inst.vertex_count == 15 and len(inst.edges) == 19
        touched = {v for e in inst.edges for v in (e.tail, e.head)}
        assert touched == set(range(15))
        assert validate_instance(inst).ok

    def test_structure(self):
        inst, rmap = reduce_3sat(SAT_3)
        assert (inst.source, inst.sink) == (rmap.source, rmap.sink) == (0, 14)
        for e, tag in zip(inst.edges, rmap.edge_tags):
            assert (e.tail, e.head) == rmap.endpoints(tag)
            assert e.weight == (1 if tag.kind in ("var_true", "var_false", "clause_lit") else 0)

    @settings(max_examples=100)
    @given(formulas)
    def test_sharing_rule(self, f):
        inst, rmap = reduce_3sat(f)
        label = {tag: inst.edges[k].label for k, tag in enumerate(rmap.edge_tags)}
        counts = Counter(e.label for e in inst.edges)
        for j, clause in enumerate(f.clauses):
            for k in range(3):
                clause_label = label[EdgeTag("clause_lit", j, k)]
                for i in range(f.num_vars):
                    assert (clause_label == label[EdgeTag("var_true", i)]) == (clause[k] == Literal(i, True))
                    assert (clause_label == label[EdgeTag("var_false", i)]) == (clause[k] == Literal(i, False))
        # zero-weight edges never share
        assert all(counts[e.label] == 1 for e in inst.edges if e.weight == 0)

    def test_unsat_example(self):
        inst, _ = reduce_3sat(UNSAT_1)
        assert solve_bruteforce(inst).optimal_length == 2
        assert solve_labelset(inst).optimal_length == 2

    def test_sat_example(self):
        inst, _ = reduce_3sat(SAT_3)
        assert solve_bruteforce(inst).optimal_length == 3

    def test_no_clauses(self):
        f = CnfFormula(2, ())
        inst, rmap = reduce_3sat(f)
        assert (inst.vertex_count, len(inst.edges)) == (8, 9)
        assert solve_labelset(inst).optimal_length == 2
        assert extract_assignment(rmap, assignment_to_path(rmap, f, (True, False))) == (True, False)

    @settings(max_examples=60)
    @given(formulas)
    def test_every_path_at_least_n(self, f):
        inst, _ = reduce_3sat(f)
        assert min(reuse_length(inst, p) for p in enumerate_paths(inst)) >= f.num_vars


class TestCertificates:
    def test_extract_readout(self):
        inst, rmap = reduce_3sat(SAT_3)
        ids = []
        for i, value in enumerate((True, False, True)):
            kind = "var_true" if value else "var_false"
            ids += [rmap.edge_id(EdgeTag(kind, i)), rmap.edge_id(EdgeTag(kind + "_exit", i))]
        ids += [rmap.edge_id(EdgeTag("connector")), rmap.edge_id(EdgeTag("clause_lit", 0, 1)),
                rmap.edge_id(EdgeTag("clause_exit", 0, 1))]
        path = PathTrace(tuple(ids))
        reuse_length(inst, path)
        assert extract_assignment(rmap, path) == (True, False, True)

    def test_optimal_path_yields_satisfying_assignment(self):
        inst, rmap = reduce_3sat(SAT_3)
        res = solve_labelset(inst)
        assert res.optimal_length == 3
        assert satisfies(SAT_3, extract_assignment(rmap, res.witness))

    def test_unsat_paths_fail(self):
        inst, rmap = reduce_3sat(UNSAT_1)
        for p in enumerate_paths(inst):
            assert not satisfies(UNSAT_1, extract_assignment(rmap, p))

    @pytest.mark.parametrize("ids", [(0,), (0, 2, 4, 5), (1, 2)])
    def test_extract_rejects_foreign_paths(self, ids):
        _, rmap = reduce_3sat(SAT_3)
        with pytest.raises(InvalidPathError):
            extract_assignment(rmap, PathTrace(ids))

    def test_extract_rejects_unknown_edge(self):
        _, rmap = reduce_3sat(SAT_3)
        with pytest.raises(InvalidPathError):
            extract_assignment(rmap, PathTrace((99,)))

    def test_assignment_to_path(self):
        inst, rmap = reduce_3sat(SAT_3)
        for a in all_satisfying_assignments(SAT_3):
            assert reuse_length(inst, assignment_to_path(rmap, SAT_3, a)) == 3

    def test_unsatisfied_clause_reported(self):
        f = CnfFormula.from_dimacs(2, [[1, 1, 2], [-1, -1, -2], [1, 2, 2]])
        _, rmap = reduce_3sat(f)
        with pytest.raises(UnsatisfiedClauseError) as info:
            assignment_to_path(rmap, f, (True, True))
        assert info.value.clause == 1

    def test_least_true_slot(self):
        f = CnfFormula.from_dimacs(1, [[1, 1, 1]])
        _, rmap = reduce_3sat(f)
        path = assignment_to_path(rmap, f, (True,))
        assert rmap.edge_id(EdgeTag("clause_lit", 0, 0)) in path.edge_ids

    @settings(max_examples=100)
    @given(formulas)
    def test_round_trip(self, f):
        inst, rmap = reduce_3sat(f)
        for a in all_satisfying_assignments(f):
            path = assignment_to_path(rmap, f, a)
            assert reuse_length(inst, path) == f.num_vars
            assert extract_assignment(rmap, path) == a


class TestBruteForceSat:
    def test_first_in_order(self):
        assert brute_force_sat(SAT_3) == (False, False, False)

    def test_unsat(self):
        assert brute_force_sat(UNSAT_1) is None

    def test_empty(self):
        assert brute_force_sat(CnfFormula(4, ())) == (False,) * 4

    def test_first_is_least_binary(self):
        # x0 true forced; x1 free -> mask 0b01
        f = CnfFormula.from_dimacs(2, [[1, 1, 1]])
        assert brute_force_sat(f) == (True, False)

    def test_guard(self):
        with pytest.raises(TooLargeError):
            brute_force_sat(CnfFormula(25, ()))


class TestIff:
    def test_sat(self):
        r = check_3sat_iff(SAT_3)
        assert r.agree and r.oracle_sat and r.solver_sat
        assert r.render().endswith("AGREE\n")

    def test_unsat(self):
        r = check_3sat_iff(UNSAT_1)
        assert r.agree and not r.oracle_sat and not r.solver_sat
        assert r.optimal_length == 2

    @pytest.mark.parametrize("seed", range(50))
    def test_random(self, seed):
        f = random_cnf(seed, max_vars=8, max_clauses=12)
        r = check_3sat_iff(f)
        assert r.agree, r.render()
        if not r.oracle_sat:
            assert r.optimal_length >= f.num_vars + 1


def colored(n, edges, s=0, t=None):
    return Instance.from_edges(n, [(a, b, 7, c) for a, b, c in edges], s, n - 1 if t is None else t)


class TestMinColor:
    def test_weights_become_one(self):
        inst = reduce_mincolor(colored(3, [(0, 1, 1), (1, 2, 2)]))
        assert [e.weight for e in inst.edges] == [1, 1]

    def test_one_color(self):
        inst = colored(4, [(0, 1, 5), (1, 3, 5), (0, 2, 5), (2, 3, 5), (1, 2, 5)])
        assert solve_labelset(reduce_mincolor(inst)).optimal_length == 1

    def test_path_graph(self):
        inst = colored(5, [(0, 1, 1), (1, 2, 2), (2, 3, 3), (3, 4, 4)])
        assert solve_labelset(reduce_mincolor(inst)).optimal_length == 4

    def test_two_routes(self):
        # upper route: 4 edges, colors {1,2}; lower route: 3 edges, colors {3,4,5}
        inst = colored(7, [(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 6, 2), (0, 4, 3), (4, 5, 4), (5, 6, 5)])
        assert min_color_count_bruteforce(inst) == 2
        assert solve_bruteforce(reduce_mincolor(inst)).optimal_length == 2
        assert solve_labelset(reduce_mincolor(inst)).optimal_length == 2

    @pytest.mark.parametrize("seed", range(30))
    def test_random(self, seed):
        inst = random_colored_dag(seed)
        assert solve_labelset(reduce_mincolor(inst)).optimal_length == min_color_count_bruteforce(inst)


class TestPartition:
    def test_sizes(self):
        inst, _ = reduce_partition(PartitionInstance((1, 1, 1)))
        assert inst.vertex_count == 12 and len(inst.edges) == 15
        assert validate_instance(inst).ok

    def test_structure(self):
        p = PartitionInstance((4, 1, 3, 2))
        inst, pm = reduce_partition(p)
        for i, w in enumerate(p.item_weights):
            copies = [inst.edges[pm.item_edges[part][i]] for part in range(3)]
            assert {e.label for e in copies} == {pm.item_labels[i]}
            assert {e.weight for e in copies} == {w}
            for part, e in enumerate(copies):
                assert (e.tail, e.head) == (pm.chains[part][i], pm.chains[part][i + 1])
        counts = Counter(e.label for e in inst.edges)
        for eid in pm.shortcut_edges:
            assert inst.edges[eid].weight == 5 and counts[inst.edges[eid].label] == 1
        shortcuts = [(inst.edges[e].tail, inst.edges[e].head) for e in pm.shortcut_edges]
        assert shortcuts == [(pm.chains[0][0], pm.chains[0][4]), (pm.chains[1][0], pm.chains[1][4])]
        for (a, b), i in zip(pm.bypass_edges, range(1, 4)):
            ea, eb = inst.edges[a], inst.edges[b]
            assert (ea.tail, ea.head, eb.tail, eb.head) == (i, pm.bypass[i - 1], pm.bypass[i - 1], i + 1)
            assert ea.weight == eb.weight == 0
        assert (inst.source, inst.sink) == (0, pm.chains[2][4])

    @pytest.mark.parametrize("weights, optimum", [((1, 1, 2), 4), ((1, 1, 1), 3), ((3, 5), 8), ((7,), 7)])
    def test_optimum_is_total(self, weights, optimum):
        inst, _ = reduce_partition(PartitionInstance(weights))
        assert solve_bruteforce(inst).optimal_length == optimum

    @pytest.mark.parametrize("weights", [(), (0, 1), (-2,)])
    def test_malformed(self, weights):
        with pytest.raises(MalformedInputError):
            PartitionInstance(weights)

    def test_brute_force_partition(self):
        assert brute_force_partition(PartitionInstance((1, 1, 2))) == (0, 1)
        assert brute_force_partition(PartitionInstance((1, 1, 1))) is None
        assert brute_force_partition(PartitionInstance((2, 2))) == (0,)
        assert brute_force_partition(PartitionInstance((3, 5))) is None
        with pytest.raises(TooLargeError):
            brute_force_partition(PartitionInstance((1,) * 25))

    @pytest.mark.parametrize("weights, feasible, verdict", [
        ((1, 1, 1), False, REFUTED),
        ((1, 1, 2), True, CONSISTENT),
        ((3, 5), False, REFUTED),
    ])
    def test_demonstrate_flaw(self, weights, feasible, verdict):
        report = demonstrate_flaw(PartitionInstance(weights))
        assert report.feasible == feasible
        assert report.optimal_length == report.total == report.chain_length
        assert report.verdict == verdict
        assert report.render().rstrip("\n").endswith(verdict)

    @settings(max_examples=60)
    @given(st.integers(0, 10**6))
    def test_optimum_always_total(self, seed):
        p = random_partition(seed, max_items=6, max_total=30)
        inst, _ = reduce_partition(p)
        assert solve_labelset(inst).optimal_length == solve_bruteforce(inst).optimal_length == p.total
