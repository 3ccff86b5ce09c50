"""Line-oriented text formats: instances, certificates, DIMACS CNF, 3SAT maps.

Instance::

    c optional comment
    p reuse <vertex_count> <edge_count> <source> <sink>
    e <tail> <head> <weight> <label>        (one per edge, in id order)

Certificate::

    p cert <edges_on_path> <budget>
    x <edge_id>                            (in path order)

Tokens are separated by runs of spaces or tabs; blank lines and trailing
whitespace are ignored; LF and CRLF line endings are both accepted.
"""

from __future__ import annotations

import re
from typing import Iterator, Union

from .model import Instance, PathTrace, ValidationReport, validate_instance
from .reductions import (
    CnfFormula,
    EdgeTag,
    Literal,
    MalformedInputError,
    ReductionMap,
    TAG_KINDS,
)

Text = Union[str, bytes]

MAX_VERTICES = 10_000_000

_SEP = re.compile(r"[ \t]+")
_UINT = re.compile(r"[0-9]+")
_INT = re.compile(r"-?[0-9]+")
MAX_DIGITS = 18


class FormatError(ValueError):
    """A parse failure at a known line (1-based; 0 when the problem is the file as a whole)."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line
        self.message = message


class InvalidInstanceError(FormatError):
    def __init__(self, report: ValidationReport):
        super().__init__(0, f"invalid instance: {report}")
        self.report = report


def _decode(text: Text) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(text.count(b"\n", 0, exc.start) + 1, "input is not valid UTF-8") from None


def _lines(text: Text) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, tokens) for non-blank lines."""
    for number, raw in enumerate(_decode(text).split("\n"), start=1):
        if raw.endswith("\r"):
            raw = raw[:-1]
        line = raw.strip(" \t")
        if not line:
            continue
        if "\r" in line or any(ch in line for ch in "\x0b\x0c"):
            raise FormatError(number, "stray control character")
        yield number, _SEP.split(line)


def _uint(tok: str, line: int, what: str) -> int:
    if not _UINT.fullmatch(tok):
        raise FormatError(line, f"{what} must be a nonnegative integer, got {tok!r}")
    if len(tok) > MAX_DIGITS:
        raise FormatError(line, f"{what} has more than {MAX_DIGITS} digits")
    return int(tok)


def _int(tok: str, line: int, what: str) -> int:
    if not _INT.fullmatch(tok):
        raise FormatError(line, f"{what} must be an integer, got {tok!r}")
    if len(tok.lstrip("-")) > MAX_DIGITS:
        raise FormatError(line, f"{what} has more than {MAX_DIGITS} digits")
    return int(tok)


def _is_comment(tokens: list[str]) -> bool:
    return tokens[0].startswith("c")


def _header(tokens: list[str], line: int, kind: str, arity: int) -> list[str]:
    if tokens[0] != "p" or len(tokens) < 2 or tokens[1] != kind:
        raise FormatError(line, f"expected header 'p {kind} ...'")
    if len(tokens) != arity + 2:
        raise FormatError(line, f"header 'p {kind}' takes {arity} fields, got {len(tokens) - 2}")
    return tokens[2:]


def parse_instance(text: Text) -> Instance:
    """Parse an instance file and validate it; raises FormatError subclasses on any problem."""
    header = None
    edges: list[tuple[int, int, int, int]] = []
    for line, tokens in _lines(text):
        if _is_comment(tokens):
            continue
        if header is None:
            fields = _header(tokens, line, "reuse", 4)
            n, m, s, t = (_uint(tok, line, name) for tok, name in zip(fields, ("vertex_count", "edge_count", "source", "sink")))
            if n > MAX_VERTICES:
                raise FormatError(line, f"vertex_count {n} exceeds limit {MAX_VERTICES}")
            header = (n, m, s, t)
            continue
        if tokens[0] == "p":
            raise FormatError(line, "duplicate header")
        if tokens[0] != "e":
            raise FormatError(line, f"unknown line type {tokens[0]!r}")
        if len(tokens) != 5:
            raise FormatError(line, f"edge line takes 4 fields, got {len(tokens) - 1}")
        if len(edges) >= header[1]:
            raise FormatError(line, f"more edge lines than the {header[1]} declared")
        tail, head, weight, label = (_uint(tok, line, name) for tok, name in zip(tokens[1:], ("tail", "head", "weight", "label")))
        edges.append((tail, head, weight, label))
    if header is None:
        raise FormatError(0, "missing header 'p reuse ...'")
    n, m, s, t = header
    if len(edges) != m:
        raise FormatError(0, f"header declares {m} edges but {len(edges)} edge lines follow")
    instance = Instance.from_edges(n, edges, s, t)
    report = validate_instance(instance)
    if not report.ok:
        raise InvalidInstanceError(report)
    return instance


def serialize_instance(instance: Instance, comments: tuple[str, ...] = ()) -> str:
    out = [f"c {c}\n" for c in comments]
    out.append(f"p reuse {instance.vertex_count} {len(instance.edges)} {instance.source} {instance.sink}\n")
    out.extend(f"e {e.tail} {e.head} {e.weight} {e.label}\n" for e in instance.edges)
    return "".join(out)


def parse_certificate(text: Text) -> tuple[PathTrace, int]:
    """Parse a certificate into (path, budget)."""
    header = None
    ids: list[int] = []
    for line, tokens in _lines(text):
        if _is_comment(tokens):
            continue
        if header is None:
            count, budget = (_uint(tok, line, name) for tok, name in zip(_header(tokens, line, "cert", 2), ("edge count", "budget")))
            header = (count, budget)
            continue
        if tokens[0] != "x" or len(tokens) != 2:
            raise FormatError(line, "expected 'x <edge_id>'")
        if len(ids) >= header[0]:
            raise FormatError(line, f"more edge lines than the {header[0]} declared")
        ids.append(_uint(tokens[1], line, "edge id"))
    if header is None:
        raise FormatError(0, "missing header 'p cert ...'")
    if len(ids) != header[0]:
        raise FormatError(0, f"header declares {header[0]} edges but {len(ids)} follow")
    return PathTrace(tuple(ids)), header[1]


def serialize_certificate(path: PathTrace, budget: int) -> str:
    return f"p cert {len(path.edge_ids)} {budget}\n" + "".join(f"x {i}\n" for i in path.edge_ids)


def parse_dimacs_cnf(text: Text, pad_to_3: bool = False) -> CnfFormula:
    """Parse DIMACS CNF. Every clause must have exactly three literals unless ``pad_to_3``."""
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for line, tokens in _lines(text):
        if _is_comment(tokens):
            continue
        if header is None:
            fields = _header(tokens, line, "cnf", 2)
            n, m = _uint(fields[0], line, "variable count"), _uint(fields[1], line, "clause count")
            if n < 1:
                raise FormatError(line, "formula needs at least one variable")
            header = (n, m)
            continue
        if tokens[0] == "p":
            raise FormatError(line, "duplicate header")
        for tok in tokens:
            lit = _int(tok, line, "literal")
            if lit == 0:
                _close_clause(current, clauses, header, line, pad_to_3)
                current = []
                continue
            if abs(lit) > header[0]:
                raise FormatError(line, f"variable {abs(lit)} out of range 1..{header[0]}")
            current.append(lit)
    if header is None:
        raise FormatError(0, "missing header 'p cnf ...'")
    if current:
        _close_clause(current, clauses, header, 0, pad_to_3)
    if len(clauses) != header[1]:
        raise FormatError(0, f"header declares {header[1]} clauses but {len(clauses)} found")
    try:
        return CnfFormula.from_dimacs(header[0], clauses)
    except MalformedInputError as exc:  # pragma: no cover - guarded above
        raise FormatError(0, str(exc)) from None


def _close_clause(current, clauses, header, line, pad_to_3):
    if pad_to_3 and 0 < len(current) < 3:
        current = current + [current[-1]] * (3 - len(current))
    if len(current) != 3:
        raise FormatError(line, f"clause has {len(current)} literals, expected exactly 3"
                          + ("" if pad_to_3 else " (use --pad-to-3 for shorter clauses)"))
    if len(clauses) >= header[1]:
        raise FormatError(line, f"more clauses than the {header[1]} declared")
    clauses.append(current)


def serialize_dimacs(formula: CnfFormula) -> str:
    out = [f"p cnf {formula.num_vars} {formula.num_clauses}\n"]
    out.extend(" ".join(str(lit.to_dimacs()) for lit in c) + " 0\n" for c in formula.clauses)
    return "".join(out)


# 3SAT reduction map:
#   p map3sat <n> <m>
#   u <i> <u_i> <u'_i> <ubar'_i> <u_i+1>
#   v <j> <v_j> <v0_j> <v1_j> <v2_j> <v_j+1>
#   t <edge_id> <kind> <index> <slot>

def serialize_map(rmap: ReductionMap) -> str:
    out = [f"p map3sat {rmap.num_vars} {rmap.num_clauses}\n"]
    out.extend(f"u {i} " + " ".join(map(str, vs)) + "\n" for i, vs in enumerate(rmap.var_vertices))
    out.extend(f"v {j} " + " ".join(map(str, vs)) + "\n" for j, vs in enumerate(rmap.clause_vertices))
    out.extend(f"t {k} {tag.kind} {tag.index} {tag.slot}\n" for k, tag in enumerate(rmap.edge_tags))
    return "".join(out)


def parse_map(text: Text) -> ReductionMap:
    header = None
    var_vertices: list[tuple[int, ...]] = []
    clause_vertices: list[tuple[int, ...]] = []
    tags: list[EdgeTag] = []
    for line, tokens in _lines(text):
        if _is_comment(tokens):
            continue
        if header is None:
            fields = _header(tokens, line, "map3sat", 2)
            header = (_uint(fields[0], line, "variable count"), _uint(fields[1], line, "clause count"))
            if header[0] < 1:
                raise FormatError(line, "map needs at least one variable")
            continue
        kind = tokens[0]
        if kind in ("u", "v"):
            rows = var_vertices if kind == "u" else clause_vertices
            width = 4 if kind == "u" else 5
            if len(tokens) != width + 2:
                raise FormatError(line, f"'{kind}' line takes {width + 1} fields")
            if _uint(tokens[1], line, "index") != len(rows):
                raise FormatError(line, f"'{kind}' lines must be numbered consecutively from 0")
            rows.append(tuple(_uint(tok, line, "vertex id") for tok in tokens[2:]))
        elif kind == "t":
            if len(tokens) != 5:
                raise FormatError(line, "'t' line takes 4 fields")
            if _uint(tokens[1], line, "edge id") != len(tags):
                raise FormatError(line, "'t' lines must be numbered consecutively from 0")
            if tokens[2] not in TAG_KINDS:
                raise FormatError(line, f"unknown edge kind {tokens[2]!r}")
            tags.append(EdgeTag(tokens[2], _int(tokens[3], line, "index"), _int(tokens[4], line, "slot")))
        else:
            raise FormatError(line, f"unknown line type {kind!r}")
    if header is None:
        raise FormatError(0, "missing header 'p map3sat ...'")
    n, m = header
    if len(var_vertices) != n or len(clause_vertices) != m:
        raise FormatError(0, f"map declares {n} variables and {m} clauses but lists {len(var_vertices)} and {len(clause_vertices)}")
    _check_tags(tags, n, m)
    return ReductionMap(n, m, tuple(var_vertices), tuple(clause_vertices), tuple(tags))


def _check_tags(tags: list[EdgeTag], n: int, m: int) -> None:
    for k, tag in enumerate(tags):
        if tag.kind == "connector":
            ok = tag.index == -1 and tag.slot == -1
        elif tag.kind.startswith("var"):
            ok = 0 <= tag.index < n and tag.slot == -1
        else:
            ok = 0 <= tag.index < m and 0 <= tag.slot < 3
        if not ok:
            raise FormatError(0, f"edge {k}: tag {tag.kind} {tag.index} {tag.slot} out of range")
    if len(set(tags)) != len(tags):
        raise FormatError(0, "duplicate edge tags")
    expected = 4 * n + 6 * m + 1
    if len(tags) != expected:
        raise FormatError(0, f"map lists {len(tags)} edges, expected {expected}")


def literal_line(a) -> str:
    """DIMACS-style signed rendering of an assignment: ``1 -2 3``."""
    return " ".join(str(Literal(i, bool(v)).to_dimacs()) for i, v in enumerate(a))
