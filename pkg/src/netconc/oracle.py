"""Exhaustive enumeration over all graphs on a small node set.

Graphs are encoded as integer bitmasks over a fixed pair ordering, which
makes exact model probabilities, exact theoretical marginals, exact tail
probabilities and exact dependence quantifiers computable by direct
summation. State spaces are capped at 2**20 graphs (undirected n <= 6,
directed n <= 4).
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from . import models, stats
from .graphs import BlockStructure, Graph

MAX_STATES = 1 << 20


class StateSpaceTooLarge(ValueError):
    pass


def pair_order(n: int, directed: bool) -> List[Tuple[int, int]]:
    """Fixed ordering of node pairs used by the bitmask encoding."""
    if directed:
        return [(i, j) for i in range(n) for j in range(n) if i != j]
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True, eq=False)
class ExactDistribution:
    """Exact probabilities over every graph on n nodes.

    ``probs[s]`` is the probability of the graph whose edge set is the
    bitmask ``s`` over :func:`pair_order`.
    """

    n: int
    directed: bool
    probs: np.ndarray

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return pair_order(self.n, self.directed)

    @property
    def n_states(self) -> int:
        return len(self.probs)

    @cached_property
    def bits(self) -> np.ndarray:
        """(n_states, n_pairs) 0/1 matrix of edge indicators."""
        p = len(self.pairs)
        masks = np.arange(self.n_states, dtype=np.int64)
        return ((masks[:, None] >> np.arange(p)[None, :]) & 1).astype(np.int8)

    def graph(self, mask: int) -> Graph:
        edges = [pq for b, pq in enumerate(self.pairs) if (mask >> b) & 1]
        return Graph.from_edges(self.n, self.directed, edges)

    def graph_index(self, g: Graph) -> int:
        lookup = {pq: b for b, pq in enumerate(self.pairs)}
        mask = 0
        for e in g.edges:
            mask |= 1 << lookup[e]
        return mask


def _check_size(n: int, directed: bool) -> int:
    p = n * (n - 1) if directed else n * (n - 1) // 2
    size = 1 << p
    if size > MAX_STATES:
        raise StateSpaceTooLarge(
            f"state space has {size} graphs, exceeding the {MAX_STATES} cap"
        )
    return size


def _bernoulli_log_weights(
    pairs: Sequence[Tuple[int, int]], bits: np.ndarray, probs: np.ndarray
) -> np.ndarray:
    lw = np.zeros(bits.shape[0])
    with np.errstate(divide="ignore"):
        for b, (i, j) in enumerate(pairs):
            p = probs[i, j]
            on = bits[:, b] == 1
            lw = lw + np.where(on, np.log(p), np.log1p(-p))
    return lw


def _ergm_log_weights(spec, n: int, ed_pairs, bits) -> np.ndarray:
    eta = models.eta_table(n, spec)
    idx = {pq: b for b, pq in enumerate(ed_pairs)}
    s_count = bits.shape[0]
    sp = np.zeros((s_count, len(ed_pairs)), dtype=np.int32)
    for q, (i, j) in enumerate(ed_pairs):
        for h in range(n):
            if h == i or h == j:
                continue
            a = idx[(min(i, h), max(i, h))]
            b = idx[(min(j, h), max(j, h))]
            sp[:, q] += bits[:, a] * bits[:, b]
    edge_counts = bits.sum(axis=1)
    lw = spec.theta1 * edge_counts.astype(float)
    for q in range(len(ed_pairs)):
        lw = lw + bits[:, q] * eta[sp[:, q]]
    return lw


def _local_dependence_log_weights(spec, pairs, bits) -> np.ndarray:
    labels = spec.blocks.labels
    lw = np.zeros(bits.shape[0])
    # cross-block pairs: independent Bernoulli(between)
    with np.errstate(divide="ignore"):
        for b, (i, j) in enumerate(pairs):
            if labels[i] != labels[j]:
                on = bits[:, b] == 1
                lw = lw + np.where(on, np.log(spec.between), np.log1p(-spec.between))
    # within-block pairs: gather per-block sub-distribution log probabilities
    for blk, members in enumerate(spec.blocks.members):
        node_pos = {int(v): k for k, v in enumerate(members)}
        sub_n = len(members)
        sub_pairs = pair_order(sub_n, spec.directed)
        sub_idx = {pq: b for b, pq in enumerate(sub_pairs)}
        sub_dist = exact_distribution(spec.within[blk])
        sub_lp = np.log(np.where(sub_dist.probs > 0, sub_dist.probs, 1.0))
        sub_lp[sub_dist.probs == 0] = -np.inf
        submask = np.zeros(bits.shape[0], dtype=np.int64)
        for b, (i, j) in enumerate(pairs):
            if labels[i] == labels[j] and labels[i] == blk:
                sb = sub_idx[
                    (node_pos[i], node_pos[j])
                    if spec.directed or node_pos[i] < node_pos[j]
                    else (node_pos[j], node_pos[i])
                ]
                submask |= bits[:, b].astype(np.int64) << sb
        lw = lw + sub_lp[submask]
    return lw


def exact_distribution(spec: models.ModelSpec, n: Optional[int] = None) -> ExactDistribution:
    """Normalize a model over its full state space by direct summation."""
    if isinstance(spec, models.BernoulliModel):
        n = spec.n
        directed = spec.directed
    elif isinstance(spec, models.BetaModel):
        n = spec.n
        directed = False
    elif isinstance(spec, models.CurvedErgm):
        if n is None:
            raise ValueError("curved ERGM enumeration needs an explicit n")
        directed = False
    elif isinstance(spec, models.LocalDependence):
        n = spec.n
        directed = spec.directed
    else:
        raise TypeError(f"unknown model spec {type(spec).__name__}")

    size = _check_size(n, directed)
    pairs = pair_order(n, directed)
    masks = np.arange(size, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(len(pairs))[None, :]) & 1).astype(np.int8)

    if isinstance(spec, models.BernoulliModel):
        lw = _bernoulli_log_weights(pairs, bits, spec.probs)
    elif isinstance(spec, models.BetaModel):
        lw = _bernoulli_log_weights(pairs, bits, models.beta_model_probs(spec.theta))
    elif isinstance(spec, models.CurvedErgm):
        lw = _ergm_log_weights(spec, n, pairs, bits)
    else:
        lw = _local_dependence_log_weights(spec, pairs, bits)

    probs = np.exp(lw - logsumexp(lw))
    probs = probs / probs.sum()
    return ExactDistribution(n, directed, probs)


# ---------------------------------------------------------------------------
# per-unit event indices


def unit_event_indices(
    ed: ExactDistribution, kind: str, blocks: Optional[BlockStructure] = None
) -> Tuple[np.ndarray, int]:
    """Event index of every basis unit for every graph in the state space.

    Returns (E, n_bins) where E has shape (n_states, M): for degree-style
    kinds the units are nodes and the event index is the statistic value;
    for the geodesic kind the units are unordered node pairs with bins for
    distance 1..N-1 plus a trailing unreachable bin; for the ESP kind the
    units are unordered node pairs and the event index is the shared
    partner count of the pair.
    """
    n, bits, pairs = ed.n, ed.bits, ed.pairs

    if kind in (stats.DEGREE, stats.OUT_DEGREE, stats.IN_DEGREE):
        if kind == stats.DEGREE and ed.directed:
            raise ValueError("degree events need an undirected state space")
        if kind in (stats.OUT_DEGREE, stats.IN_DEGREE) and not ed.directed:
            raise ValueError("out/in-degree events need a directed state space")
        inc = np.zeros((len(pairs), n), dtype=np.int8)
        for b, (i, j) in enumerate(pairs):
            if kind == stats.DEGREE:
                inc[b, i] = 1
                inc[b, j] = 1
            elif kind == stats.OUT_DEGREE:
                inc[b, i] = 1
            else:
                inc[b, j] = 1
        return bits.astype(np.int32) @ inc.astype(np.int32), n

    if kind in (stats.WITHIN_BLOCK_DEGREE, stats.WITHIN_BLOCK_OUT_DEGREE):
        if blocks is None or blocks.n_nodes != n:
            raise ValueError("within-block events need a covering block structure")
        if kind == stats.WITHIN_BLOCK_DEGREE and ed.directed:
            raise ValueError("within-block degree events need an undirected state space")
        if kind == stats.WITHIN_BLOCK_OUT_DEGREE and not ed.directed:
            raise ValueError("within-block out-degree events need a directed state space")
        labels = blocks.labels
        inc = np.zeros((len(pairs), n), dtype=np.int8)
        for b, (i, j) in enumerate(pairs):
            if labels[i] != labels[j]:
                continue
            inc[b, i] = 1
            if kind == stats.WITHIN_BLOCK_DEGREE:
                inc[b, j] = 1
        return bits.astype(np.int32) @ inc.astype(np.int32), int(blocks.sizes.max())

    if kind == stats.ESP:
        if ed.directed:
            raise ValueError("ESP events need an undirected state space")
        idx = {pq: b for b, pq in enumerate(pairs)}
        sp = np.zeros((ed.n_states, len(pairs)), dtype=np.int32)
        for q, (i, j) in enumerate(pairs):
            for h in range(n):
                if h in (i, j):
                    continue
                a = idx[(min(i, h), max(i, h))]
                b = idx[(min(j, h), max(j, h))]
                sp[:, q] += (bits[:, a] * bits[:, b]).astype(np.int32)
        return sp, max(n - 1, 1)

    if kind == stats.GEODESIC:
        if ed.directed:
            raise ValueError("geodesic events need an undirected state space")
        e = np.zeros((ed.n_states, len(pairs)), dtype=np.int32)
        for s in range(ed.n_states):
            g = ed.graph(s)
            d = stats.geodesic_matrix(g)
            for q, (i, j) in enumerate(pairs):
                e[s, q] = n - 1 if not np.isfinite(d[i, j]) else int(d[i, j]) - 1
        return e, n

    raise ValueError(f"unsupported kind {kind!r}")


def event_matrix(
    g: Graph, kind: str, blocks: Optional[BlockStructure] = None
) -> np.ndarray:
    """One-hot (n_bins, M) event matrix of a single graph: column m is
    one-hot at the event index realized by basis unit m.

    ESP is refused here because its basis count is random; route it through
    a fixed-edge-count support restriction in the dependence profile.
    """
    if kind == stats.ESP:
        raise ValueError(
            "ESP has a random basis count; use a fixed-edge-count support restriction"
        )
    if kind == stats.DEGREE:
        idx = stats.degree_counts(g)
        n_bins = g.n
    elif kind == stats.OUT_DEGREE:
        if not g.directed:
            raise ValueError("out-degree needs a directed graph")
        idx = np.zeros(g.n, dtype=int)
        for (i, _) in g.edges:
            idx[i] += 1
        n_bins = g.n
    elif kind == stats.WITHIN_BLOCK_DEGREE or kind == stats.WITHIN_BLOCK_OUT_DEGREE:
        if blocks is None:
            raise ValueError("within-block events need a block structure")
        idx = stats.within_block_out_degrees(g, blocks)
        n_bins = int(blocks.sizes.max())
    elif kind == stats.GEODESIC:
        d = stats.geodesic_matrix(g)
        iu = np.triu_indices(g.n, k=1)
        dd = d[iu]
        idx = np.where(np.isfinite(dd), dd - 1, g.n - 1).astype(int)
        n_bins = g.n
    else:
        raise ValueError(f"unsupported kind {kind!r}")
    b = np.zeros((n_bins, len(idx)), dtype=np.int8)
    b[idx, np.arange(len(idx))] = 1
    return b


# ---------------------------------------------------------------------------
# empirical distributions over the whole state space


def fhat_matrix(
    ed: ExactDistribution, kind: str, blocks: Optional[BlockStructure] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """(F, valid): F[s] is the empirical distribution of graph ``s`` and
    ``valid[s]`` marks graphs where it is defined (ESP needs an edge)."""
    e, n_bins = unit_event_indices(ed, kind, blocks)
    s_count, m_units = e.shape
    valid = np.ones(s_count, dtype=bool)
    f = np.zeros((s_count, n_bins))
    if kind == stats.ESP:
        present = ed.bits.astype(bool)
        edge_counts = present.sum(axis=1)
        valid = edge_counts > 0
        for k in range(n_bins):
            f[:, k] = ((e == k) & present).sum(axis=1)
        f[valid] = f[valid] / edge_counts[valid, None]
    else:
        for k in range(n_bins):
            f[:, k] = (e == k).mean(axis=1)
    return f, valid


def exact_theta_star(
    ed: ExactDistribution, kind: str, blocks: Optional[BlockStructure] = None
) -> np.ndarray:
    """Exact expectation of the empirical distribution. For ESP the
    expectation conditions on the graph having at least one edge, matching
    the zero-edge skip rule of the Monte Carlo estimator."""
    f, valid = fhat_matrix(ed, kind, blocks)
    w = ed.probs * valid
    total = w.sum()
    if total <= 0:
        raise ValueError("distribution undefined on every graph in the support")
    return (w[:, None] * f).sum(axis=0) / total


def exact_tail_prob(
    ed: ExactDistribution,
    kind: str,
    t: float,
    blocks: Optional[BlockStructure] = None,
    theta_star: Optional[np.ndarray] = None,
) -> float:
    """Exact P(max-bin deviation from the theoretical marginals >= t)."""
    if t <= 0:
        raise ValueError("t must be positive")
    f, valid = fhat_matrix(ed, kind, blocks)
    if theta_star is None:
        theta_star = exact_theta_star(ed, kind, blocks)
    dev = np.abs(f - theta_star[None, :]).max(axis=1)
    w = ed.probs * valid
    return float(w[dev >= t].sum() / w.sum())


# ---------------------------------------------------------------------------
# dependence quantifiers


@dataclass(frozen=True, eq=False)
class DependenceProfile:
    """Exact dependence quantifiers of one (model, statistic) pair."""

    c_n: float
    delta_n: Optional[float]
    prop1_bound: float
    d_per_k: np.ndarray
    d_n: float
    delta_table: np.ndarray  # (M, M, n_bins), zero below the diagonal
    m_units: int
    n_bins: int
    support_id: Optional[str] = None
    delta_omitted_reason: Optional[str] = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("quantity,k,value\n")
        buf.write(f"C_N,,{self.c_n!r}\n")
        if self.delta_n is not None:
            buf.write(f"Delta_N,,{self.delta_n!r}\n")
        buf.write(f"prop1_bound,,{self.prop1_bound!r}\n")
        for k, v in enumerate(self.d_per_k):
            buf.write(f"D_N_k,{k},{float(v)!r}\n")
        buf.write(f"D_N,,{self.d_n!r}\n")
        return buf.getvalue()


SupportSpec = Union[np.ndarray, Callable[[Graph], bool], None]


def support_mask(ed: ExactDistribution, support: SupportSpec) -> Optional[np.ndarray]:
    if support is None:
        return None
    if callable(support):
        return np.array([bool(support(ed.graph(s))) for s in range(ed.n_states)])
    mask = np.asarray(support, dtype=bool)
    if mask.shape != (ed.n_states,):
        raise ValueError("support mask length must equal the state space size")
    return mask


def edge_count_support(ed: ExactDistribution, count: int) -> np.ndarray:
    return ed.bits.sum(axis=1) == count


def compute_dependence_profile(
    ed: ExactDistribution,
    kind: str,
    blocks: Optional[BlockStructure] = None,
    support: SupportSpec = None,
    support_id: Optional[str] = None,
) -> DependenceProfile:
    """Exact average covariance, conditional-deviation and martingale-style
    dependence coefficients, plus the total-variation upper bound on the
    conditional-deviation coefficient.

    ``support`` restricts the feasibility of conditioning prefixes in the
    per-coordinate total variation maxima (the restricted-support variant);
    zero-probability prefixes are always excluded, since the conditional law
    is undefined there. The averaging normalizer is the number of basis
    units (ESP with a fixed-edge-count support uses that edge count).
    """
    if kind == stats.ESP and support is None:
        raise ValueError(
            "ESP has a random basis count; provide a fixed-edge-count support restriction"
        )
    e, n_bins = unit_event_indices(ed, kind, blocks)
    s_count, m_units = e.shape
    probs = ed.probs
    feasible = probs > 0
    sup = support_mask(ed, support)
    if sup is not None:
        feasible = feasible & sup

    m_norm = m_units
    if kind == stats.ESP:
        counts = ed.bits.sum(axis=1)[feasible]
        uniq = np.unique(counts)
        if len(uniq) != 1 or uniq[0] < 1:
            raise ValueError("ESP support restriction must fix a positive edge count")
        m_norm = int(uniq[0])

    # marginal and pairwise event probabilities per bin
    c_n = 0.0
    delta_terms = 0.0
    delta_ok = True
    delta_reason = None
    for k in range(n_bins):
        bk = (e == k).astype(float)
        pk = probs @ bk
        jk = (bk * probs[:, None]).T @ bk
        cov = jk - np.outer(pk, pk)
        off = cov.sum() - np.trace(cov)
        c_n += off
        if np.any(pk <= 0):
            delta_ok = False
            delta_reason = (
                f"P(B_k,i = 1) = 0 for some unit at bin k={k}; "
                "conditional deviations undefined"
            )
        else:
            # P(B_kj=1 | B_ki=1) - P(B_kj=1), weighted by P(B_ki=1)
            delta_terms += off  # algebraically identical; kept for clarity
    c_n /= m_norm
    delta_n = delta_terms / m_norm if delta_ok else None

    # Proposition-1 style bound: expected TV distance between the conditional
    # and marginal laws of the full event vector of unit j given unit i.
    prop1 = 0.0
    for i in range(m_units):
        for j in range(m_units):
            if j == i:
                continue
            combined = e[:, i] * n_bins + e[:, j]
            joint = np.bincount(combined, weights=probs, minlength=n_bins * n_bins)
            joint = joint.reshape(n_bins, n_bins)
            pi = joint.sum(axis=1)
            pj = joint.sum(axis=0)
            prop1 += 0.5 * np.abs(joint - np.outer(pi, pj)).sum()
    prop1 /= m_norm

    # delta_{i,j,k}: max over feasible prefix pairs differing only in
    # coordinate i of the TV distance between conditional laws of B_{k,j}.
    delta_table = np.zeros((m_units, m_units, n_bins))
    pos = probs > 0
    for k in range(n_bins):
        bk = (e == k).astype(np.int64)
        for i in range(1, m_units):  # prefix length i, coordinate index i-1
            if i - 1 > 0:
                key = bk[:, : i - 1] @ (1 << np.arange(i - 1, dtype=np.int64))
            else:
                key = np.zeros(s_count, dtype=np.int64)
            key2 = key * 2 + bk[:, i - 1]
            n_keys = int(key2.max()) + 1
            tot = np.bincount(key2, weights=probs, minlength=n_keys)
            feas = np.bincount(key2[feasible], minlength=n_keys) > 0
            usable = feas & (tot > 0)
            for j in range(i + 1, m_units + 1):
                hit = np.bincount(
                    key2, weights=probs * bk[:, j - 1], minlength=n_keys
                )
                with np.errstate(invalid="ignore", divide="ignore"):
                    cond = np.where(tot > 0, hit / np.where(tot > 0, tot, 1.0), 0.0)
                even = np.arange(0, n_keys - 1, 2)
                both = usable[even] & usable[even + 1]
                if np.any(both):
                    diffs = np.abs(cond[even + 1] - cond[even])[both]
                    delta_table[i - 1, j - 1, k] = float(diffs.max())

    d_per_k = np.zeros(n_bins)
    for k in range(n_bins):
        inner = 1.0 + delta_table[:, :, k].sum(axis=1)
        d_per_k[k] = (inner**2).sum() / m_norm
    d_n = float(d_per_k.max())

    return DependenceProfile(
        c_n=float(c_n),
        delta_n=float(delta_n) if delta_n is not None else None,
        prop1_bound=float(prop1),
        d_per_k=d_per_k,
        d_n=d_n,
        delta_table=delta_table,
        m_units=m_norm,
        n_bins=n_bins,
        support_id=support_id,
        delta_omitted_reason=delta_reason,
    )


# ---------------------------------------------------------------------------
# verification of the two concentration inequalities


@dataclass(frozen=True)
class LemmaRow:
    t: float
    exact_tail: float
    bound_exponential: float
    bound_covariance: float
    ok_exponential: bool
    ok_covariance: bool


@dataclass(frozen=True)
class LemmaReport:
    rows: tuple
    profile: DependenceProfile
    m: int
    n_bins: int

    @property
    def all_ok(self) -> bool:
        return all(r.ok_exponential and r.ok_covariance for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,exact_tail,bound_conc1,bound_conc2,ok1,ok2\n")
        for r in self.rows:
            buf.write(
                f"{r.t!r},{r.exact_tail!r},{r.bound_exponential!r},"
                f"{r.bound_covariance!r},{int(r.ok_exponential)},{int(r.ok_covariance)}\n"
            )
        return buf.getvalue()


def verify_lemma1(
    ed: ExactDistribution,
    kind: str,
    t_grid: Sequence[float],
    blocks: Optional[BlockStructure] = None,
    slack: float = 1e-12,
) -> LemmaReport:
    """Check the exponential and covariance tail bounds against the exact
    tail probability on every t in the grid."""
    if any(t <= 0 for t in t_grid):
        raise ValueError("t grid entries must be positive")
    profile = compute_dependence_profile(ed, kind, blocks)
    f, valid = fhat_matrix(ed, kind, blocks)
    theta = exact_theta_star(ed, kind, blocks)
    dev = np.abs(f - theta[None, :]).max(axis=1)
    w = ed.probs * valid
    w = w / w.sum()
    m = profile.m_units
    p = profile.n_bins - 1
    cmin = min(profile.c_n, profile.delta_n) if profile.delta_n is not None else profile.c_n
    rows = []
    for t in t_grid:
        tail = float(w[dev >= t].sum())
        b1 = 2.0 * np.exp(-2.0 * m * t * t / profile.d_n + np.log(1.0 + p))
        b2 = (1.0 + cmin) / (m * t * t)
        rows.append(
            LemmaRow(
                t=float(t),
                exact_tail=tail,
                bound_exponential=float(b1),
                bound_covariance=float(b2),
                ok_exponential=tail <= b1 + slack,
                ok_covariance=tail <= b2 + slack,
            )
        )
    return LemmaReport(tuple(rows), profile, m, profile.n_bins)
