"""Instance file formats: DIMACS graph coloring and a plain CSP text format.

CSP text format, one declaration per line::

    # comment
    var x1 1 2          # variable label followed by its domain values
    var x2 1 2
    nogood x1=1 x2=1    # forbidden combination, one or more literals

Variables are numbered in declaration order. Blank lines and anything after
``#`` are ignored. Values are non-negative integers.
"""

from __future__ import annotations

import warnings

from .model import (
    CspInstance,
    InstanceError,
    Nogood,
    canonicalize,
    compile_neq_constraint,
    validate_instance,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_dimacs_col(text: str, colors: int) -> CspInstance:
    """Read a DIMACS ``.col`` graph as a *colors*-coloring instance.

    Vertex ``k`` becomes variable ``k-1`` labelled ``xk``. Repeated or
    reversed edges count once. A header edge count that disagrees with the
    edges present only triggers a warning.
    """
    if colors < 1:
        raise ValueError("colors must be at least 1")
    n = None
    declared_edges = 0
    edges: set[tuple[int, int]] = set()
    edge_lines = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError("expected 'p edge <vertices> <edges>'", lineno)
            try:
                n, declared_edges = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer vertex or edge count", lineno) from None
            if n < 0 or declared_edges < 0:
                raise ParseError("negative count in problem line", lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge before problem line", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("non-integer vertex", lineno) from None
            for w in (u, v):
                if not 1 <= w <= n:
                    raise ParseError(f"vertex {w} outside 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop on vertex {u}", lineno)
            edges.add((min(u, v) - 1, max(u, v) - 1))
            edge_lines += 1
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise ParseError("missing problem line")
    if edge_lines != declared_edges:
        warnings.warn(
            f"header declares {declared_edges} edges but {edge_lines} edge lines were read",
            stacklevel=2,
        )
    domains = tuple(tuple(range(1, colors + 1)) for _ in range(n))
    ngs: list[Nogood] = []
    for u, v in sorted(edges):
        ngs.extend(compile_neq_constraint(u, v, domains))
    return CspInstance(domains, tuple(ngs), tuple(f"x{k + 1}" for k in range(n)))


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_csp_text(text: str) -> CspInstance:
    labels: list[str] = []
    index: dict[str, int] = {}
    domains: list[tuple[int, ...]] = []
    ngs: list[Nogood] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        keyword, *rest = line.split()
        if keyword == "var":
            if not rest:
                raise ParseError("var needs a label", lineno)
            label, *values = rest
            if "=" in label:
                raise ParseError(f"bad variable label {label!r}", lineno)
            if label in index:
                raise ParseError(f"variable {label!r} declared twice", lineno)
            try:
                dom = tuple(int(v) for v in values)
            except ValueError:
                raise ParseError("domain values must be integers", lineno) from None
            index[label] = len(labels)
            labels.append(label)
            domains.append(dom)
        elif keyword == "nogood":
            if not rest:
                raise ParseError("nogood needs at least one literal", lineno)
            lits = []
            for token in rest:
                name, eq, value = token.partition("=")
                if not eq:
                    raise ParseError(f"expected <var>=<value>, got {token!r}", lineno)
                if name not in index:
                    raise ParseError(f"undeclared variable {name!r}", lineno)
                try:
                    lits.append((index[name], int(value)))
                except ValueError:
                    raise ParseError(f"non-integer value in {token!r}", lineno) from None
            ngs.append(canonicalize(lits))
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno)
    inst = CspInstance(tuple(domains), tuple(ngs), tuple(labels))
    problems = validate_instance(inst)
    if problems:
        raise InstanceError(problems)
    return inst


def dump_csp_text(inst: CspInstance) -> str:
    lines = []
    for label, dom in zip(inst.labels, inst.domains):
        lines.append(" ".join(["var", label, *map(str, dom)]))
    for n in inst.nogoods:
        lines.append(" ".join(["nogood", *(f"{inst.labels[v]}={d}" for v, d in n.literals)]))
    return "\n".join(lines) + "\n"


def dump_dimacs_col(n: int, edges: list[tuple[int, int]]) -> str:
    """Write a 0-based edge list as DIMACS text."""
    out = [f"p edge {n} {len(edges)}"]
    out.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(out) + "\n"


def load_instance(path: str, colors: int | None = None) -> CspInstance:
    """Load by extension: ``.col`` needs *colors*; anything else is CSP text."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".col"):
        if colors is None:
            raise ValueError("DIMACS .col input needs a color count")
        return parse_dimacs_col(text, colors)
    return parse_csp_text(text)
