"""Sequences of graph statistics and their empirical distributions.

Each distribution is a vector of proportions over mutually exclusive event
bins together with the basis count M (number of nodes, edges, or node
pairs). All distributions sum to 1 whenever M > 0.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .graphs import BlockStructure, Graph

DEGREE = "degree"
OUT_DEGREE = "out_degree"
IN_DEGREE = "in_degree"
ESP = "esp"
GEODESIC = "geodesic"
WITHIN_BLOCK_OUT_DEGREE = "within_block_out_degree"
WITHIN_BLOCK_DEGREE = "within_block_degree"

KINDS = (
    DEGREE,
    OUT_DEGREE,
    IN_DEGREE,
    ESP,
    GEODESIC,
    WITHIN_BLOCK_OUT_DEGREE,
    WITHIN_BLOCK_DEGREE,
)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Proportions over event bins, with basis count ``m`` and kind tag.

    Bin indexing: degree-style kinds are indexed by the statistic value
    starting at 0; the geodesic kind is indexed by distance 1..N-1 with one
    trailing "unreachable" bin.
    """

    values: np.ndarray
    m: int
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.m > 0:
            total = self.values.sum()
            if not math.isclose(total, 1.0, abs_tol=1e-9):
                raise ValueError(f"distribution sums to {total}, expected 1")

    @property
    def n_bins(self) -> int:
        return len(self.values)


def degree_counts(g: Graph) -> np.ndarray:
    if g.directed:
        raise ValueError("degree distribution requires an undirected graph")
    deg = np.zeros(g.n, dtype=int)
    for (i, j) in g.edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def degree_distribution(g: Graph) -> EmpiricalDistribution:
    """Proportion of nodes with degree d, for d in {0, ..., N-1}."""
    deg = degree_counts(g)
    values = np.bincount(deg, minlength=g.n) / g.n
    return EmpiricalDistribution(values, g.n, DEGREE)


def out_degree_distribution(g: Graph) -> EmpiricalDistribution:
    if not g.directed:
        raise ValueError("out-degree distribution requires a directed graph")
    deg = np.zeros(g.n, dtype=int)
    for (i, _) in g.edges:
        deg[i] += 1
    values = np.bincount(deg, minlength=g.n) / g.n
    return EmpiricalDistribution(values, g.n, OUT_DEGREE)


def in_degree_distribution(g: Graph) -> EmpiricalDistribution:
    if not g.directed:
        raise ValueError("in-degree distribution requires a directed graph")
    deg = np.zeros(g.n, dtype=int)
    for (_, j) in g.edges:
        deg[j] += 1
    values = np.bincount(deg, minlength=g.n) / g.n
    return EmpiricalDistribution(values, g.n, IN_DEGREE)


def shared_partner_counts(g: Graph) -> np.ndarray:
    """For each edge, the number of common neighbors of its endpoints."""
    if g.directed:
        raise ValueError("shared partners are defined for undirected graphs")
    a = g.adjacency
    counts = []
    for (i, j) in g.edges:
        counts.append(int(np.count_nonzero(a[i] & a[j])))
    return np.array(counts, dtype=int)


def esp_distribution(g: Graph) -> EmpiricalDistribution:
    """Edgewise shared partner distribution, normalized by the edge count.

    Undefined (raises) on the empty graph, whose basis count is zero.
    """
    if g.directed:
        raise ValueError("ESP distribution requires an undirected graph")
    m = g.edge_count
    if m == 0:
        raise ValueError("ESP distribution is undefined on an empty graph (M = 0)")
    counts = shared_partner_counts(g)
    values = np.bincount(counts, minlength=max(g.n - 1, 1)) / m
    return EmpiricalDistribution(values, m, ESP)


def geodesic_matrix(g: Graph) -> np.ndarray:
    """All-pairs shortest path lengths (np.inf for unreachable pairs)."""
    n = g.n
    if not g.edges:
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0.0)
        return d
    rows = [i for (i, j) in g.edges] + [j for (i, j) in g.edges]
    cols = [j for (i, j) in g.edges] + [i for (i, j) in g.edges]
    data = np.ones(len(rows))
    adj = csr_matrix((data, (rows, cols)), shape=(n, n))
    return shortest_path(adj, method="D", unweighted=True, directed=False)


def geodesic_distribution(g: Graph) -> EmpiricalDistribution:
    """Proportion of node pairs at distance k (k = 1..N-1) plus a trailing
    unreachable bin; basis count C(N, 2)."""
    if g.directed:
        raise ValueError("geodesic distribution requires an undirected graph")
    n = g.n
    if n < 2:
        raise ValueError("geodesic distribution requires at least two nodes")
    d = geodesic_matrix(g)
    iu = np.triu_indices(n, k=1)
    dists = d[iu]
    m = len(dists)
    values = np.zeros(n)  # bins 1..n-1 at indices 0..n-2, unreachable last
    finite = np.isfinite(dists)
    counts = np.bincount(dists[finite].astype(int), minlength=n)
    values[: n - 1] = counts[1:n] / m
    values[-1] = np.count_nonzero(~finite) / m
    return EmpiricalDistribution(values, m, GEODESIC)


def within_block_out_degrees(
    g: Graph, blocks: BlockStructure, nodes: Optional[Iterable[int]] = None
) -> np.ndarray:
    """Out-edges of each node towards members of its own block."""
    node_list = np.arange(g.n) if nodes is None else np.array(sorted(nodes), dtype=int)
    labels = blocks.labels
    deg = {int(i): 0 for i in node_list}
    for (i, j) in g.edges:
        if i in deg and labels[i] == labels[j]:
            deg[i] += 1
        if not g.directed and j in deg and labels[i] == labels[j]:
            deg[j] += 1
    return np.array([deg[int(i)] for i in node_list], dtype=int)


def within_block_outdegree_distribution(
    g: Graph, blocks: BlockStructure, respondents: Iterable[int]
) -> EmpiricalDistribution:
    """Within-block out-degree distribution over a set of respondent nodes.

    Bins run 0..(largest block size - 1) so that distributions computed on
    different block subsamples are directly comparable.
    """
    if not g.directed:
        raise ValueError("within-block out-degree requires a directed graph")
    if blocks.n_nodes != g.n:
        raise ValueError("block structure does not cover all nodes")
    resp = sorted(set(int(i) for i in respondents))
    if not resp:
        raise ValueError("respondent set must be non-empty")
    if resp[0] < 0 or resp[-1] >= g.n:
        raise ValueError("respondent out of range")
    deg = within_block_out_degrees(g, blocks, resp)
    n_bins = int(blocks.sizes.max())  # degrees 0..max block size - 1
    values = np.bincount(deg, minlength=n_bins) / len(resp)
    return EmpiricalDistribution(values, len(resp), WITHIN_BLOCK_OUT_DEGREE)


def linf_error(a: EmpiricalDistribution, b) -> float:
    """Max absolute bin-wise difference between two distributions.

    ``b`` may be an EmpiricalDistribution or a raw probability vector of the
    same length (e.g. an estimate of the theoretical marginals).
    """
    bv = b.values if isinstance(b, EmpiricalDistribution) else np.asarray(b, dtype=float)
    if isinstance(b, EmpiricalDistribution) and a.kind != b.kind:
        raise ValueError(f"kind mismatch: {a.kind} vs {b.kind}")
    if len(a.values) != len(bv):
        raise ValueError(f"bin count mismatch: {len(a.values)} vs {len(bv)}")
    return float(np.max(np.abs(a.values - bv)))


def to_csv(dist: EmpiricalDistribution) -> str:
    """Serialize as ``kind,M,k,value`` rows; the geodesic unreachable bin
    is labeled ``inf``."""
    buf = io.StringIO()
    buf.write("kind,M,k,value\n")
    for k, v in enumerate(dist.values):
        if dist.kind == GEODESIC:
            label = "inf" if k == dist.n_bins - 1 else str(k + 1)
        else:
            label = str(k)
        buf.write(f"{dist.kind},{dist.m},{label},{float(v)!r}\n")
    return buf.getvalue()


def from_csv(text: str) -> EmpiricalDistribution:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != "kind,M,k,value":
        raise ValueError("bad header, expected 'kind,M,k,value'")
    kind = None
    m = None
    values = []
    for ln in lines[1:]:
        k_str, m_str, _, v_str = ln.split(",")
        kind = k_str
        m = int(m_str)
        values.append(float(v_str))
    if kind is None:
        raise ValueError("no data rows")
    return EmpiricalDistribution(np.array(values), m, kind)
