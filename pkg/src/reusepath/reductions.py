"""Reductions into the reuse shortest path problem.

* 3SAT: one four-vertex gadget per variable and one five-vertex gadget per
  clause, chained; clause edges copy the label of the variable edge for the
  same literal.  Satisfiable iff the optimum equals the number of variables.
* Minimum-color path: colors become labels, every weight becomes 1.
* PARTITION (known broken): three chains of item edges plus two shortcuts.
  Every instance has an optimal path of length exactly B, so the optimum
  carries no information about feasibility.  :func:`demonstrate_flaw` shows it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .model import Instance, InvalidPathError, PathTrace, reuse_length
from .solvers import enumerate_paths, solve_labelset

MAX_BRUTE = 24


class MalformedInputError(ValueError):
    pass


class TooLargeError(ValueError):
    pass


class UnsatisfiedClauseError(ValueError):
    """The assignment falsifies clause ``clause``."""

    def __init__(self, clause: int):
        super().__init__(f"assignment falsifies clause {clause}")
        self.clause = clause


class Literal(NamedTuple):
    var: int
    positive: bool = True

    def __str__(self) -> str:
        return f"x{self.var}" if self.positive else f"~x{self.var}"

    def to_dimacs(self) -> int:
        return self.var + 1 if self.positive else -(self.var + 1)

    @classmethod
    def from_dimacs(cls, lit: int) -> "Literal":
        return cls(abs(lit) - 1, lit > 0)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...] = ()

    def __post_init__(self):
        if not isinstance(self.num_vars, int) or self.num_vars < 1:
            raise MalformedInputError(f"num_vars must be >= 1, got {self.num_vars!r}")
        clauses = tuple(tuple(Literal(*lit) for lit in c) for c in self.clauses)
        for j, c in enumerate(clauses):
            if len(c) != 3:
                raise MalformedInputError(f"clause {j} has {len(c)} literals, expected 3")
            for lit in c:
                if not 0 <= lit.var < self.num_vars:
                    raise MalformedInputError(f"clause {j} uses variable {lit.var} outside 0..{self.num_vars - 1}")
        object.__setattr__(self, "clauses", clauses)

    @classmethod
    def from_dimacs(cls, num_vars: int, clauses: Sequence[Sequence[int]], pad_to_3: bool = False) -> "CnfFormula":
        """Build from signed 1-based literals; ``pad_to_3`` repeats the last literal of short clauses."""
        built = []
        for c in clauses:
            c = list(c)
            if pad_to_3 and 0 < len(c) < 3:
                c += [c[-1]] * (3 - len(c))
            built.append(tuple(Literal.from_dimacs(x) for x in c))
        return cls(num_vars, tuple(built))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def __str__(self) -> str:
        return " & ".join("(" + " | ".join(map(str, c)) + ")" for c in self.clauses) or "true"


Assignment = tuple[bool, ...]


def literal_value(lit: Literal, a: Assignment) -> bool:
    return a[lit.var] == lit.positive


def first_failing_clause(formula: CnfFormula, a: Assignment) -> Optional[int]:
    for j, clause in enumerate(formula.clauses):
        if not any(literal_value(lit, a) for lit in clause):
            return j
    return None


def satisfies(formula: CnfFormula, a: Assignment) -> bool:
    return len(a) == formula.num_vars and first_failing_clause(formula, a) is None


def _assignments(n: int):
    # ascending binary order, variable 0 is the least significant bit
    for mask in range(1 << n):
        yield tuple(bool(mask >> i & 1) for i in range(n))


def all_satisfying_assignments(formula: CnfFormula) -> list[Assignment]:
    if formula.num_vars > MAX_BRUTE:
        raise TooLargeError(f"{formula.num_vars} variables exceeds brute-force limit {MAX_BRUTE}")
    return [a for a in _assignments(formula.num_vars) if first_failing_clause(formula, a) is None]


def brute_force_sat(formula: CnfFormula) -> Optional[Assignment]:
    """First satisfying assignment in ascending binary order, or None."""
    if formula.num_vars > MAX_BRUTE:
        raise TooLargeError(f"{formula.num_vars} variables exceeds brute-force limit {MAX_BRUTE}")
    for a in _assignments(formula.num_vars):
        if first_failing_clause(formula, a) is None:
            return a
    return None


class EdgeTag(NamedTuple):
    """Role of one edge in the 3SAT construction.

    kind is one of ``var_true``, ``var_false``, ``var_true_exit``,
    ``var_false_exit``, ``connector``, ``clause_lit``, ``clause_exit``;
    ``index`` is the variable or clause number, ``slot`` the literal
    position within a clause (-1 elsewhere).
    """

    kind: str
    index: int = -1
    slot: int = -1


TAG_KINDS = ("var_true", "var_false", "var_true_exit", "var_false_exit", "connector", "clause_lit", "clause_exit")


@dataclass(frozen=True)
class ReductionMap:
    """Ties the 3SAT gadget graph back to variables and clauses.

    ``var_vertices[i]`` is ``(u_i, u'_i, ubar'_i, u_{i+1})`` and
    ``clause_vertices[j]`` is ``(v_j, v^0_j, v^1_j, v^2_j, v_{j+1})``.
    """

    num_vars: int
    num_clauses: int
    var_vertices: tuple[tuple[int, int, int, int], ...]
    clause_vertices: tuple[tuple[int, int, int, int, int], ...]
    edge_tags: tuple[EdgeTag, ...]

    @property
    def source(self) -> int:
        return self.var_vertices[0][0]

    @property
    def sink(self) -> int:
        return self.clause_vertices[-1][4] if self.clause_vertices else self.var_vertices[-1][3] + 1

    def endpoints(self, tag: EdgeTag) -> tuple[int, int]:
        """(tail, head) of the edge with role ``tag``."""
        if tag.kind == "connector":
            return self.var_vertices[-1][3], self._first_clause_vertex()
        if tag.kind.startswith("var"):
            u, ut, uf, nxt = self.var_vertices[tag.index]
            return {
                "var_true": (u, ut),
                "var_false": (u, uf),
                "var_true_exit": (ut, nxt),
                "var_false_exit": (uf, nxt),
            }[tag.kind]
        v, *mid, nxt = self.clause_vertices[tag.index]
        if tag.kind == "clause_lit":
            return v, mid[tag.slot]
        return mid[tag.slot], nxt

    def _first_clause_vertex(self) -> int:
        if self.clause_vertices:
            return self.clause_vertices[0][0]
        return self.var_vertices[-1][3] + 1

    def edge_id(self, tag: EdgeTag) -> int:
        return self.edge_tags.index(tag)


def reduce_3sat(formula: CnfFormula) -> tuple[Instance, ReductionMap]:
    """Build the gadget graph for ``formula``.

    Vertices: u_i = 3i, u'_i = 3i+1, ubar'_i = 3i+2 (so u_n = 3n), then
    v_j = 3n+1+4j with v^k_j = v_j+1+k.  Edge (u_i, u'_i) gets label 2i+1,
    (u_i, ubar'_i) gets 2i+2, clause edges copy their literal's label and
    every weight-0 edge gets a fresh label above 2n.
    """
    n, m = formula.num_vars, formula.num_clauses
    edges: list[tuple[int, int, int, int]] = []
    tags: list[EdgeTag] = []
    fresh = 2 * n

    def add(tail, head, weight, label, tag):
        edges.append((tail, head, weight, label))
        tags.append(tag)

    def fresh_label():
        nonlocal fresh
        fresh += 1
        return fresh

    var_vertices = tuple((3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3) for i in range(n))
    for i, (u, ut, uf, nxt) in enumerate(var_vertices):
        add(u, ut, 1, 2 * i + 1, EdgeTag("var_true", i))
        add(u, uf, 1, 2 * i + 2, EdgeTag("var_false", i))
        add(ut, nxt, 0, fresh_label(), EdgeTag("var_true_exit", i))
        add(uf, nxt, 0, fresh_label(), EdgeTag("var_false_exit", i))

    base = 3 * n + 1
    clause_vertices = tuple(
        (base + 4 * j, base + 4 * j + 1, base + 4 * j + 2, base + 4 * j + 3, base + 4 * j + 4) for j in range(m)
    )
    add(3 * n, base, 0, fresh_label(), EdgeTag("connector"))
    for j, clause in enumerate(formula.clauses):
        v, *mid, nxt = clause_vertices[j]
        for k, lit in enumerate(clause):
            add(v, mid[k], 1, 2 * lit.var + (1 if lit.positive else 2), EdgeTag("clause_lit", j, k))
        for k in range(3):
            add(mid[k], nxt, 0, fresh_label(), EdgeTag("clause_exit", j, k))

    vertex_count = 3 * n + 4 * m + 2
    instance = Instance.from_edges(vertex_count, edges, 0, vertex_count - 1)
    return instance, ReductionMap(n, m, var_vertices, clause_vertices, tuple(tags))


def extract_assignment(rmap: ReductionMap, path: PathTrace) -> Assignment:
    """Read the truth assignment off a source-to-sink path: x_i is true iff the path visits u'_i."""
    tags = rmap.edge_tags
    prev_head = rmap.source
    chosen: dict[int, bool] = {}
    for eid in path.edge_ids:
        if not isinstance(eid, int) or not 0 <= eid < len(tags):
            raise InvalidPathError(f"edge id {eid!r} is not in the reduced graph")
        tag = tags[eid]
        tail, head = rmap.endpoints(tag)
        if tail != prev_head:
            raise InvalidPathError(f"edge {eid} starts at {tail} but the path is at {prev_head}")
        prev_head = head
        if tag.kind in ("var_true", "var_false"):
            chosen[tag.index] = tag.kind == "var_true"
    if prev_head != rmap.sink:
        raise InvalidPathError(f"path ends at vertex {prev_head}, not at the sink {rmap.sink}")
    return tuple(chosen[i] for i in range(rmap.num_vars))


def assignment_to_path(rmap: ReductionMap, formula: CnfFormula, a: Assignment) -> PathTrace:
    """Route a satisfying assignment through the gadget graph.

    Each clause is crossed through its first true literal. Raises
    UnsatisfiedClauseError naming the first falsified clause otherwise.
    """
    if len(a) != formula.num_vars:
        raise ValueError(f"assignment has {len(a)} values, formula has {formula.num_vars} variables")
    failing = first_failing_clause(formula, a)
    if failing is not None:
        raise UnsatisfiedClauseError(failing)
    ids: list[int] = []
    for i, value in enumerate(a):
        ids.append(rmap.edge_id(EdgeTag("var_true" if value else "var_false", i)))
        ids.append(rmap.edge_id(EdgeTag("var_true_exit" if value else "var_false_exit", i)))
    ids.append(rmap.edge_id(EdgeTag("connector")))
    for j, clause in enumerate(formula.clauses):
        k = next(k for k, lit in enumerate(clause) if literal_value(lit, a))
        ids.append(rmap.edge_id(EdgeTag("clause_lit", j, k)))
        ids.append(rmap.edge_id(EdgeTag("clause_exit", j, k)))
    return PathTrace(tuple(ids))


@dataclass(frozen=True)
class IffReport:
    formula: CnfFormula
    sat_assignment: Optional[Assignment]
    optimal_length: int
    witness: PathTrace
    extracted: Assignment

    @property
    def oracle_sat(self) -> bool:
        return self.sat_assignment is not None

    @property
    def solver_sat(self) -> bool:
        return self.optimal_length == self.formula.num_vars

    @property
    def agree(self) -> bool:
        return self.oracle_sat == self.solver_sat

    def render(self) -> str:
        f = self.formula

        def fmt(a):
            return " ".join(str(i + 1 if v else -(i + 1)) for i, v in enumerate(a))

        lines = [
            f"c variables {f.num_vars} clauses {f.num_clauses}",
            f"c brute-force sat: {'yes ' + fmt(self.sat_assignment) if self.oracle_sat else 'no'}",
            f"c optimal reuse length {self.optimal_length} (n = {f.num_vars})",
            f"c solver says sat: {'yes' if self.solver_sat else 'no'}",
            f"c assignment read from optimal path: {fmt(self.extracted)} "
            f"({'satisfies' if satisfies(f, self.extracted) else 'falsifies'} the formula)",
            "AGREE" if self.agree else "DISAGREE",
        ]
        return "\n".join(lines) + "\n"


def check_3sat_iff(formula: CnfFormula, dominance: str = "reachable") -> IffReport:
    """Compare brute-force satisfiability with 'optimum of the reduced graph equals n'."""
    sat = brute_force_sat(formula)
    instance, rmap = reduce_3sat(formula)
    result = solve_labelset(instance, dominance)
    return IffReport(formula, sat, result.optimal_length, result.witness, extract_assignment(rmap, result.witness))


def reduce_mincolor(instance: Instance) -> Instance:
    """Treat labels as colors and set every weight to 1."""
    return Instance.from_edges(
        instance.vertex_count,
        ((e.tail, e.head, 1, e.label) for e in instance.edges),
        instance.source,
        instance.sink,
    )


def min_color_count_bruteforce(instance: Instance) -> Optional[int]:
    """Fewest distinct labels on any s-t path, by enumeration."""
    best = None
    for path in enumerate_paths(instance):
        k = len({instance.edges[i].label for i in path.edge_ids})
        if best is None or k < best:
            best = k
    return best


@dataclass(frozen=True)
class PartitionInstance:
    item_weights: tuple[int, ...]

    def __post_init__(self):
        weights = tuple(self.item_weights)
        if not weights:
            raise MalformedInputError("PARTITION needs at least one item")
        for w in weights:
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise MalformedInputError(f"item weights must be positive integers, got {w!r}")
        object.__setattr__(self, "item_weights", weights)

    @property
    def total(self) -> int:
        return sum(self.item_weights)

    def __len__(self) -> int:
        return len(self.item_weights)


@dataclass(frozen=True)
class PartitionMap:
    """Vertex and edge roles of the PARTITION construction.

    ``chains[p][i]`` is vertex i of part p (u, u', u''), with
    ``chains[p][n] == chains[p+1][0]``; ``bypass[i-1]`` is v_i.
    ``item_edges[p][i]`` is the edge for item i in part p.
    """

    chains: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    bypass: tuple[int, ...]
    item_edges: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    bypass_edges: tuple[tuple[int, int], ...]
    shortcut_edges: tuple[int, int]
    item_labels: tuple[int, ...]


def reduce_partition(p: PartitionInstance) -> tuple[Instance, PartitionMap]:
    """Build the three-part graph: item chains u, u', u'', bypasses in part one, two shortcuts.

    Item i has label i+1 on all three copies; bypass and shortcut edges get
    fresh labels.  Shortcuts weigh floor(B/2).
    """
    if not isinstance(p, PartitionInstance):
        raise MalformedInputError("expected a PartitionInstance")
    n = len(p)
    half = p.total // 2
    u = tuple(range(n + 1))
    u1 = (n,) + tuple(range(n + 1, 2 * n + 1))
    u2 = (2 * n,) + tuple(range(2 * n + 1, 3 * n + 1))
    bypass = tuple(range(3 * n + 1, 4 * n))
    edges: list[tuple[int, int, int, int]] = []
    labels = tuple(range(1, n + 1))
    fresh = n

    def fresh_label():
        nonlocal fresh
        fresh += 1
        return fresh

    item_edges = []
    for chain in (u, u1, u2):
        ids = []
        for i, w in enumerate(p.item_weights):
            ids.append(len(edges))
            edges.append((chain[i], chain[i + 1], w, labels[i]))
        item_edges.append(tuple(ids))
    bypass_edges = []
    for i in range(1, n):
        v = bypass[i - 1]
        bypass_edges.append((len(edges), len(edges) + 1))
        edges.append((u[i], v, 0, fresh_label()))
        edges.append((v, u[i + 1], 0, fresh_label()))
    shortcuts = (len(edges), len(edges) + 1)
    edges.append((u[0], u[n], half, fresh_label()))
    edges.append((u1[0], u1[n], half, fresh_label()))

    instance = Instance.from_edges(4 * n, edges, u[0], u2[n])
    pmap = PartitionMap((u, u1, u2), bypass, tuple(item_edges), tuple(bypass_edges), shortcuts, labels)
    return instance, pmap


def brute_force_partition(p: PartitionInstance) -> Optional[tuple[int, ...]]:
    """Indices of the first subset (ascending bitmask) summing to exactly B/2, or None."""
    n = len(p)
    if n > MAX_BRUTE:
        raise TooLargeError(f"{n} items exceeds brute-force limit {MAX_BRUTE}")
    if p.total % 2:
        return None
    half = p.total // 2
    for mask in range(1 << n):
        if sum(w for i, w in enumerate(p.item_weights) if mask >> i & 1) == half:
            return tuple(i for i in range(n) if mask >> i & 1)
    return None


REFUTED = "REDUCTION REFUTED"
CONSISTENT = "CONSISTENT ON THIS INPUT"


@dataclass(frozen=True)
class FlawReport:
    partition: PartitionInstance
    subset: Optional[tuple[int, ...]]
    optimal_length: int
    optimal_path: PathTrace
    chain_path: PathTrace
    chain_length: int

    @property
    def total(self) -> int:
        return self.partition.total

    @property
    def feasible(self) -> bool:
        return self.subset is not None

    @property
    def claimed_optimum_is_b(self) -> bool:
        # what the construction promises: optimum == B exactly when feasible
        return self.feasible

    @property
    def verdict(self) -> str:
        if not self.feasible and self.optimal_length == self.total:
            return REFUTED
        if self.feasible == (self.optimal_length == self.total):
            return CONSISTENT
        return "UNEXPECTED"

    def render(self) -> str:
        B = self.total
        w = " ".join(map(str, self.partition.item_weights))
        if self.feasible:
            sub = " ".join(str(self.partition.item_weights[i]) for i in self.subset)
            feas = f"feasible, half-sum subset {{{sub}}} (items {' '.join(map(str, self.subset))})"
        else:
            feas = "infeasible" + (" (B odd)" if B % 2 else "")
        lines = [
            f"c items {w}",
            f"c B = {B}, shortcut weight floor(B/2) = {B // 2}",
            f"c partition brute force: {feas}",
            f"c claimed: optimum is B iff partition is feasible, so expected optimum "
            f"{'= B' if self.claimed_optimum_is_b else '> B'}",
            f"c optimal reuse length: {self.optimal_length}",
            f"c optimal path: {' '.join(map(str, self.optimal_path.edge_ids))}",
            f"c all-items chain path has reuse length {self.chain_length}: "
            f"{' '.join(map(str, self.chain_path.edge_ids))}",
            self.verdict,
        ]
        return "\n".join(lines) + "\n"


def chain_path(pmap: PartitionMap) -> PathTrace:
    """The path taking every item edge in all three parts and no shortcut."""
    return PathTrace(tuple(e for part in pmap.item_edges for e in part))


def demonstrate_flaw(p: PartitionInstance, dominance: str = "reachable") -> FlawReport:
    """Solve the PARTITION construction and set its optimum against real feasibility."""
    subset = brute_force_partition(p)
    instance, pmap = reduce_partition(p)
    result = solve_labelset(instance, dominance)
    cp = chain_path(pmap)
    return FlawReport(p, subset, result.optimal_length, result.witness, cp, reuse_length(instance, cp))

