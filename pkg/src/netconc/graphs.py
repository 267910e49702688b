"""Simple graph and block-structure types shared by the whole package.

Graphs are immutable: mutation helpers return new values. Nodes are 0-based
in the Python API; the edge-list file format is 1-based (see
:func:`parse_edge_list`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Tuple

import numpy as np


class ParseError(ValueError):
    """Raised for malformed edge-list files; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def _canonical(i: int, j: int, directed: bool) -> Tuple[int, int]:
    if directed or i < j:
        return (i, j)
    return (j, i)


@dataclass(frozen=True)
class Graph:
    """A simple graph on ``n`` labeled nodes with no self-loops.

    Undirected edges are stored canonically as ``(min, max)`` pairs.
    """

    n: int
    directed: bool
    edges: frozenset

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph must have at least one node")
        for (i, j) in self.edges:
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) not allowed")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            if not self.directed and i > j:
                raise ValueError("undirected edges must be stored as (min, max)")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        self._check_pair(i, j)
        return _canonical(i, j, self.directed) in self.edges

    def _check_pair(self, i: int, j: int):
        if i == j:
            raise ValueError("self-loops are not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"node out of range for n={self.n}")

    def with_edge(self, i: int, j: int, present: bool = True) -> "Graph":
        """Return a copy with edge (i, j) set present/absent. Idempotent."""
        self._check_pair(i, j)
        e = _canonical(i, j, self.directed)
        if present:
            edges = self.edges | {e}
        else:
            edges = self.edges - {e}
        return Graph(self.n, self.directed, edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense boolean adjacency matrix (symmetric when undirected)."""
        a = np.zeros((self.n, self.n), dtype=bool)
        for (i, j) in self.edges:
            a[i, j] = True
            if not self.directed:
                a[j, i] = True
        return a

    @staticmethod
    def empty(n: int, directed: bool = False) -> "Graph":
        return Graph(n, directed, frozenset())

    @staticmethod
    def from_edges(n: int, directed: bool, edges: Iterable[Tuple[int, int]]) -> "Graph":
        out = set()
        for (i, j) in edges:
            if i == j:
                raise ValueError(f"self-loop ({i}, {j}) not allowed")
            out.add(_canonical(i, j, directed))
        return Graph(n, directed, frozenset(out))

    @staticmethod
    def from_adjacency(a: np.ndarray, directed: bool = False) -> "Graph":
        a = np.asarray(a, dtype=bool)
        n = a.shape[0]
        if directed:
            idx = zip(*np.nonzero(a))
            edges = frozenset((int(i), int(j)) for i, j in idx if i != j)
        else:
            iu = np.triu_indices(n, k=1)
            mask = a[iu]
            edges = frozenset(
                (int(i), int(j)) for i, j, m in zip(iu[0], iu[1], mask) if m
            )
        return Graph(n, directed, edges)


def new_graph(n: int, directed: bool = False) -> Graph:
    """Empty graph on ``n`` nodes. Rejects ``n < 1``."""
    return Graph.empty(n, directed)


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """A partition of nodes {0, ..., n-1} into blocks {0, ..., K-1}.

    Every block id in the range must be non-empty.
    """

    labels: tuple  # block id per node

    def __post_init__(self):
        k = self.n_blocks
        seen = set(self.labels)
        if seen != set(range(k)):
            raise ValueError("block ids must form a contiguous non-empty range")

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_blocks(self) -> int:
        return max(self.labels) + 1 if self.labels else 0

    @cached_property
    def members(self) -> list:
        """List of node-index arrays, one per block."""
        out = [[] for _ in range(self.n_blocks)]
        for node, b in enumerate(self.labels):
            out[b].append(node)
        return [np.array(m, dtype=int) for m in out]

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([len(m) for m in self.members], dtype=int)

    @staticmethod
    def from_labels(labels: Iterable[int]) -> "BlockStructure":
        return BlockStructure(tuple(int(b) for b in labels))

    @staticmethod
    def from_sizes(sizes: Iterable[int]) -> "BlockStructure":
        labels = []
        for b, s in enumerate(sizes):
            labels.extend([b] * int(s))
        return BlockStructure(tuple(labels))


def parse_edge_list(text: str) -> Tuple[Graph, Optional[BlockStructure]]:
    """Parse the package's plain-text edge-list format.

    Format (1-based node labels)::

        directed <0|1>
        nodes <N>
        [blocks
         <node> <block>     # one line per node
        ]
        edges
        <i> <j>             # one line per edge

    Lines starting with ``#`` are ignored. Duplicate edges, self-loops and
    out-of-range labels are errors (reported with their line number).
    """
    lines = text.splitlines()
    # (line_no, tokens) with comments/blank lines stripped
    content = []
    for ln, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        content.append((ln, s.split()))

    pos = 0

    def expect(header: str) -> Tuple[int, list]:
        nonlocal pos
        if pos >= len(content):
            raise ParseError(len(lines), f"unexpected end of file, expected '{header}'")
        ln, toks = content[pos]
        pos += 1
        return ln, toks

    ln, toks = expect("directed")
    if len(toks) != 2 or toks[0] != "directed" or toks[1] not in ("0", "1"):
        raise ParseError(ln, "expected 'directed <0|1>'")
    directed = toks[1] == "1"

    ln, toks = expect("nodes")
    if len(toks) != 2 or toks[0] != "nodes" or not toks[1].isdigit() or int(toks[1]) < 1:
        raise ParseError(ln, "expected 'nodes <N>' with N >= 1")
    n = int(toks[1])

    blocks = None
    ln, toks = expect("blocks or edges")
    if toks == ["blocks"]:
        labels = [None] * n
        for _ in range(n):
            ln, toks = expect("<node> <block>")
            if len(toks) != 2 or not all(t.isdigit() for t in toks):
                raise ParseError(ln, "expected '<node> <block>'")
            node, block = int(toks[0]), int(toks[1])
            if not (1 <= node <= n):
                raise ParseError(ln, f"node {node} out of range 1..{n}")
            if labels[node - 1] is not None:
                raise ParseError(ln, f"duplicate block assignment for node {node}")
            labels[node - 1] = block - 1
        try:
            blocks = BlockStructure(tuple(labels))
        except ValueError as exc:
            raise ParseError(ln, str(exc)) from exc
        ln, toks = expect("edges")
    if toks != ["edges"]:
        raise ParseError(ln, "expected 'edges'")

    edges = set()
    while pos < len(content):
        ln, toks = content[pos]
        pos += 1
        if len(toks) != 2 or not all(t.lstrip("-").isdigit() for t in toks):
            raise ParseError(ln, "expected '<i> <j>'")
        i, j = int(toks[0]), int(toks[1])
        if i == j:
            raise ParseError(ln, f"self-loop {i} {j}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(ln, f"node index out of range 1..{n}")
        e = _canonical(i - 1, j - 1, directed)
        if e in edges:
            raise ParseError(ln, f"duplicate edge {i} {j}")
        edges.add(e)

    return Graph(n, directed, frozenset(edges)), blocks


def serialize_edge_list(g: Graph, blocks: Optional[BlockStructure] = None) -> str:
    """Inverse of :func:`parse_edge_list` (1-based labels, sorted edges)."""
    out = [f"directed {1 if g.directed else 0}", f"nodes {g.n}"]
    if blocks is not None:
        out.append("blocks")
        for node, b in enumerate(blocks.labels):
            out.append(f"{node + 1} {b + 1}")
    out.append("edges")
    for (i, j) in sorted(g.edges):
        out.append(f"{i + 1} {j + 1}")
    return "\n".join(out) + "\n"
