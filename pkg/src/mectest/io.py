"""Edge-list text format and DOT export.

Format, one item per line, node ids 1-based::

    # comment
    nodes 4
    1 -> 3
    2 - 3

``nodes N`` is optional; without it the largest id seen fixes the node count.
"""

from __future__ import annotations

import re
from pathlib import Path

from .graphs import Dag, GraphError, Pdag

_EDGE = re.compile(r"^(\d+)\s*(->|<-|--|-)\s*(\d+)$")


class FormatError(ValueError):
    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


def parse_edge_list(text: str) -> tuple[int, list[tuple[int, int]], list[tuple[int, int]]]:
    """Return ``(n, directed, undirected)`` with 0-based ids."""
    n = None
    directed, undirected = [], []
    top = 0
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("nodes"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise FormatError(f"bad header {raw.strip()!r}", no)
            if n is not None:
                raise FormatError("repeated 'nodes' header", no)
            n = int(parts[1])
            continue
        m = _EDGE.match(line)
        if not m:
            raise FormatError(f"cannot parse {raw.strip()!r}", no)
        a, op, b = int(m.group(1)), m.group(2), int(m.group(3))
        if a < 1 or b < 1:
            raise FormatError("node ids are 1-based", no)
        top = max(top, a, b)
        if op == "->":
            directed.append((a - 1, b - 1))
        elif op == "<-":
            directed.append((b - 1, a - 1))
        else:
            undirected.append((a - 1, b - 1))
    if n is None:
        n = top
    elif top > n:
        raise FormatError(f"node id {top} exceeds declared node count {n}")
    return n, directed, undirected


def pdag_from_text(text: str) -> Pdag:
    n, d, u = parse_edge_list(text)
    try:
        return Pdag(n, d, u)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def dag_from_text(text: str) -> Dag:
    n, d, u = parse_edge_list(text)
    if u:
        raise FormatError("a DAG file cannot contain undirected edges")
    try:
        return Dag(n, d)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def read_pdag(path) -> Pdag:
    return pdag_from_text(Path(path).read_text())


def read_dag(path) -> Dag:
    return dag_from_text(Path(path).read_text())


def to_text(g: Dag | Pdag) -> str:
    lines = [f"nodes {g.n}"]
    if isinstance(g, Dag):
        directed, undirected = g.edges, ()
    else:
        directed, undirected = g.directed, g.undirected
    lines += [f"{a + 1} -> {b + 1}" for a, b in sorted(directed)]
    lines += [f"{a + 1} - {b + 1}" for a, b in sorted(undirected)]
    return "\n".join(lines) + "\n"


def to_dot(g: Dag | Pdag, name: str = "G") -> str:
    if isinstance(g, Dag):
        directed, undirected = g.edges, ()
    else:
        directed, undirected = g.directed, g.undirected
    lines = [f"digraph {name} {{"]
    lines += [f"  {v + 1};" for v in range(g.n)]
    lines += [f"  {a + 1} -> {b + 1};" for a, b in sorted(directed)]
    lines += [f"  {a + 1} -> {b + 1} [dir=none];" for a, b in sorted(undirected)]
    lines.append("}")
    return "\n".join(lines) + "\n"
