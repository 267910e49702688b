"""Random graph models and samplers.

Covers independent-edge models (inhomogeneous Bernoulli, beta-model), the
curved exponential-family model with geometrically weighted edgewise shared
partner terms (sampled by Metropolis MCMC), block-factorized local
dependence models, and Monte Carlo estimation of the theoretical marginal
distribution of a statistic sequence.

All samplers take an explicit ``numpy.random.Generator`` and are
deterministic given its state. Replicate-level streams should be derived
with :func:`replicate_rng` so that parallel and serial execution agree.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from numba import njit

from . import stats
from .graphs import BlockStructure, Graph

AS_PRINTED = "as_printed"
STANDARD_GWESP = "standard_gwesp"

_CHUNK = 1 << 20  # toggles per pre-drawn randomness chunk


def replicate_rng(master_seed: int, *key) -> np.random.Generator:
    """Independent stream for a replicate, derived from (master_seed, key).

    String key components are hashed with crc32 so that studies can key
    streams by id. The derivation is documented and stable: the same
    (seed, key) always yields the same stream regardless of execution order.
    """
    ints = [int(master_seed)]
    for k in key:
        if isinstance(k, str):
            ints.append(zlib.crc32(k.encode()))
        else:
            ints.append(int(k))
    return np.random.default_rng(np.random.SeedSequence(ints))


# ---------------------------------------------------------------------------
# model specifications


@dataclass(frozen=True, eq=False)
class BernoulliModel:
    """Independent edges with per-pair probabilities."""

    probs: np.ndarray
    directed: bool = False

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError("probs must be a square matrix")
        if np.any(p < 0) or np.any(p > 1):
            raise ValueError("probabilities must lie in [0, 1]")
        if not self.directed and not np.allclose(p, p.T):
            raise ValueError("undirected model requires a symmetric matrix")
        object.__setattr__(self, "probs", p)

    @property
    def n(self) -> int:
        return self.probs.shape[0]


def homogeneous_bernoulli(n: int, p: float, directed: bool = False) -> BernoulliModel:
    return BernoulliModel(np.full((n, n), float(p)), directed)


@dataclass(frozen=True, eq=False)
class BetaModel:
    """Undirected independent-edge model with logit edge probability
    theta_i + theta_j (node sociality parameters)."""

    theta: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float)
        if t.ndim != 1 or not np.all(np.isfinite(t)):
            raise ValueError("theta must be a finite vector")
        object.__setattr__(self, "theta", t)

    @property
    def n(self) -> int:
        return len(self.theta)


@dataclass(frozen=True)
class CurvedErgm:
    """Edge count plus geometrically weighted ESP terms, undirected.

    ``eta_convention`` selects the sign convention inside the geometric
    bracket: ``as_printed`` uses exp(theta3), ``standard_gwesp`` uses
    exp(-theta3).
    """

    theta1: float
    theta2: float
    theta3: float
    eta_convention: str = AS_PRINTED

    def __post_init__(self):
        if self.theta3 < 0:
            raise ValueError("theta3 must be non-negative")
        if self.eta_convention not in (AS_PRINTED, STANDARD_GWESP):
            raise ValueError(f"unknown eta convention {self.eta_convention!r}")


@dataclass(frozen=True, eq=False)
class LocalDependence:
    """Block-factorized model: independent within-block subgraph models and
    independent Bernoulli between-block edges."""

    blocks: BlockStructure
    within: tuple  # one ModelSpec per block, on the block's induced nodes
    between: float = 0.0  # homogeneous between-block edge probability
    directed: bool = False

    def __post_init__(self):
        if len(self.within) != self.blocks.n_blocks:
            raise ValueError("need one within-block spec per block")
        for b, spec in enumerate(self.within):
            size = int(self.blocks.sizes[b])
            if _spec_n(spec) != size:
                raise ValueError(f"within-block spec {b} has wrong node count")
        if not (0.0 <= self.between <= 1.0):
            raise ValueError("between-block probability must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.blocks.n_nodes


ModelSpec = Union[BernoulliModel, BetaModel, CurvedErgm, LocalDependence]


def _spec_n(spec) -> Optional[int]:
    return getattr(spec, "n", None)


# ---------------------------------------------------------------------------
# closed-form pieces


def logistic(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=float)))


def beta_model_probs(theta: Sequence[float]) -> np.ndarray:
    """Symmetric edge probability matrix p_ij = logistic(theta_i + theta_j)."""
    t = np.asarray(theta, dtype=float)
    p = logistic(t[:, None] + t[None, :])
    np.fill_diagonal(p, 0.0)
    return p


def beta_expected_degrees(theta: Sequence[float]) -> np.ndarray:
    return beta_model_probs(theta).sum(axis=1)


def gwesp_eta(k: int, theta2: float, theta3: float, convention: str = AS_PRINTED) -> float:
    """Geometric weight of the k-shared-partner term, k >= 1."""
    if k < 1:
        raise ValueError("k must be at least 1")
    sign = 1.0 if convention == AS_PRINTED else -1.0
    if convention not in (AS_PRINTED, STANDARD_GWESP):
        raise ValueError(f"unknown eta convention {convention!r}")
    return theta2 * np.exp(theta3) * (1.0 - (1.0 - np.exp(sign * theta3)) ** k)


def eta_table(n: int, spec: CurvedErgm) -> np.ndarray:
    """eta_k for k = 0..n-2 with eta_0 = 0 (edges without shared partners
    contribute only through the edge-count term)."""
    eta = np.zeros(n - 1)
    for k in range(1, n - 1):
        eta[k] = gwesp_eta(k, spec.theta2, spec.theta3, spec.eta_convention)
    return eta


def ergm_log_weight(g: Graph, spec: CurvedErgm) -> float:
    """Unnormalized log probability of a graph under the curved model."""
    if g.directed:
        raise ValueError("curved ERGM is defined on undirected graphs")
    eta = eta_table(g.n, spec)
    sp = stats.shared_partner_counts(g)
    esp_term = eta[sp].sum() if len(sp) else 0.0
    return float(spec.theta1 * g.edge_count + esp_term)


# ---------------------------------------------------------------------------
# samplers


def sample_bernoulli(
    probs: np.ndarray, directed: bool, rng: np.random.Generator
) -> Graph:
    """One graph with independent edges drawn from a probability matrix."""
    p = np.asarray(probs, dtype=float)
    n = p.shape[0]
    if p.shape != (n, n):
        raise ValueError("probs must be square")
    u = rng.random((n, n))
    if directed:
        a = u < p
        np.fill_diagonal(a, False)
    else:
        a = np.triu(u < p, k=1)
        a = a | a.T
    return Graph.from_adjacency(a, directed)


def sample_beta_model(theta: Sequence[float], rng: np.random.Generator) -> Graph:
    return sample_bernoulli(beta_model_probs(theta), False, rng)


@njit(cache=True)
def _sp_count(adj, i, h, n):
    c = 0
    for w in range(n):
        if adj[i, w] and adj[h, w]:
            c += 1
    return c


@njit(cache=True)
def _toggle_log_ratio(adj, theta1, eta, i, j, n):
    # log-weight change of adding edge (i, j); assumes adj[i, j] == 0
    c = 0
    for h in range(n):
        if adj[i, h] and adj[j, h]:
            c += 1
    delta = theta1 + eta[c]
    for h in range(n):
        if adj[i, h] and adj[j, h]:
            sp_ih = _sp_count(adj, i, h, n)
            sp_jh = _sp_count(adj, j, h, n)
            delta += (eta[sp_ih + 1] - eta[sp_ih]) + (eta[sp_jh + 1] - eta[sp_jh])
    return delta


@njit(cache=True)
def _run_chain(adj, theta1, eta, pair_i, pair_j, choices, unif):
    n = adj.shape[0]
    for t in range(len(choices)):
        q = choices[t]
        i = pair_i[q]
        j = pair_j[q]
        if adj[i, j]:
            # removal: evaluate the add-ratio on the graph without the edge
            adj[i, j] = False
            adj[j, i] = False
            delta = -_toggle_log_ratio(adj, theta1, eta, i, j, n)
            if not (delta >= 0.0 or unif[t] < np.exp(delta)):
                adj[i, j] = True
                adj[j, i] = True
        else:
            delta = _toggle_log_ratio(adj, theta1, eta, i, j, n)
            if delta >= 0.0 or unif[t] < np.exp(delta):
                adj[i, j] = True
                adj[j, i] = True


class ErgmChain:
    """Metropolis chain with uniform single-edge-toggle proposals."""

    def __init__(self, spec: CurvedErgm, n: int, rng: np.random.Generator):
        if n < 3:
            raise ValueError("need at least 3 nodes")
        self.spec = spec
        self.n = n
        self.rng = rng
        iu = np.triu_indices(n, k=1)
        self._pair_i = iu[0].astype(np.int64)
        self._pair_j = iu[1].astype(np.int64)
        self._eta = eta_table(n, spec)
        self.adj = np.zeros((n, n), dtype=np.bool_)

    def advance(self, toggles: int):
        remaining = int(toggles)
        n_pairs = len(self._pair_i)
        while remaining > 0:
            step = min(remaining, _CHUNK)
            choices = self.rng.integers(0, n_pairs, size=step)
            unif = self.rng.random(step)
            _run_chain(
                self.adj,
                float(self.spec.theta1),
                self._eta,
                self._pair_i,
                self._pair_j,
                choices,
                unif,
            )
            remaining -= step

    def snapshot(self) -> Graph:
        return Graph.from_adjacency(self.adj.copy(), directed=False)


def mcmc_sample_ergm(
    spec: CurvedErgm,
    n: int,
    burn_in: int,
    thin: int,
    count: int,
    rng: np.random.Generator,
) -> List[Graph]:
    """Draw ``count`` graphs from one chain: ``burn_in`` toggles, then one
    snapshot every ``thin`` toggles."""
    if burn_in < 1 or thin < 1 or count < 1:
        raise ValueError("burn_in, thin and count must be positive")
    chain = ErgmChain(spec, n, rng)
    chain.advance(burn_in)
    out = []
    for _ in range(count):
        chain.advance(thin)
        out.append(chain.snapshot())
    return out


def default_mcmc_schedule(n: int) -> dict:
    """Burn-in and thinning used when a study does not override them."""
    return {"burn_in": 100_000, "thin": 10 * n * n}


def sample_local_dependence(spec: LocalDependence, rng: np.random.Generator) -> Graph:
    """Within-block subgraphs drawn independently from their specs;
    between-block edges independent Bernoulli."""
    n = spec.n
    a = np.zeros((n, n), dtype=bool)
    labels = np.array(spec.blocks.labels)
    for b, members in enumerate(spec.blocks.members):
        sub = sample(spec.within[b], rng)
        if sub.directed != spec.directed:
            raise ValueError("within-block spec directedness mismatch")
        for (i, j) in sub.edges:
            a[members[i], members[j]] = True
            if not spec.directed:
                a[members[j], members[i]] = True
    if spec.between > 0.0:
        u = rng.random((n, n))
        cross = labels[:, None] != labels[None, :]
        hit = (u < spec.between) & cross
        if not spec.directed:
            hit = np.triu(hit, k=1)
            hit = hit | hit.T
        a |= hit
    return Graph.from_adjacency(a, spec.directed)


def sample(spec: ModelSpec, rng: np.random.Generator, mcmc: Optional[dict] = None) -> Graph:
    """Draw one graph from any model spec."""
    if isinstance(spec, BernoulliModel):
        return sample_bernoulli(spec.probs, spec.directed, rng)
    if isinstance(spec, BetaModel):
        return sample_beta_model(spec.theta, rng)
    if isinstance(spec, CurvedErgm):
        if mcmc is None or "n" not in mcmc:
            raise ValueError("curved ERGM sampling needs mcmc={'n': ...}")
        n = mcmc["n"]
        sched = default_mcmc_schedule(n)
        sched.update({k: v for k, v in mcmc.items() if k != "n"})
        return mcmc_sample_ergm(spec, n, sched["burn_in"], sched["thin"], 1, rng)[0]
    if isinstance(spec, LocalDependence):
        return sample_local_dependence(spec, rng)
    raise TypeError(f"unknown model spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Monte Carlo estimation of the theoretical marginals


@dataclass(frozen=True)
class ThetaStarEstimate:
    """Per-bin sample mean of the empirical distribution over replicates,
    with per-bin standard errors. ESP replicates without edges are skipped
    and counted."""

    mean: np.ndarray
    std_errors: np.ndarray
    n_samples: int
    n_skipped: int
    kind: str

    @property
    def max_std_error(self) -> float:
        return float(self.std_errors.max())


def _distribution_for_kind(g: Graph, kind: str) -> Optional[stats.EmpiricalDistribution]:
    if kind == stats.DEGREE:
        return stats.degree_distribution(g)
    if kind == stats.OUT_DEGREE:
        return stats.out_degree_distribution(g)
    if kind == stats.IN_DEGREE:
        return stats.in_degree_distribution(g)
    if kind == stats.ESP:
        if g.edge_count == 0:
            return None
        return stats.esp_distribution(g)
    if kind == stats.GEODESIC:
        return stats.geodesic_distribution(g)
    raise ValueError(f"unsupported kind {kind!r} for theta-star estimation")


def estimate_theta_star_from_graphs(
    graphs: Iterable[Graph], kind: str
) -> ThetaStarEstimate:
    values = []
    skipped = 0
    for g in graphs:
        dist = _distribution_for_kind(g, kind)
        if dist is None:
            skipped += 1
            continue
        values.append(dist.values)
    if len(values) < 2:
        raise ValueError("all replicates skipped or fewer than 2 usable samples")
    arr = np.array(values)
    mean = arr.mean(axis=0)
    se = arr.std(axis=0, ddof=1) / np.sqrt(len(values))
    return ThetaStarEstimate(mean, se, len(values), skipped, kind)


def estimate_theta_star(
    spec: ModelSpec,
    kind: str,
    n_samples: int,
    rng: np.random.Generator,
    mcmc: Optional[dict] = None,
) -> ThetaStarEstimate:
    """Monte Carlo estimate of the theoretical marginal distribution."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    if isinstance(spec, CurvedErgm):
        if mcmc is None or "n" not in mcmc:
            raise ValueError("curved ERGM estimation needs mcmc={'n': ...}")
        n = mcmc["n"]
        sched = default_mcmc_schedule(n)
        sched.update({k: v for k, v in mcmc.items() if k != "n"})
        graphs = mcmc_sample_ergm(
            spec, n, sched["burn_in"], sched["thin"], n_samples, rng
        )
    else:
        graphs = (sample(spec, rng) for _ in range(n_samples))
    return estimate_theta_star_from_graphs(graphs, kind)


# ---------------------------------------------------------------------------
# JSON serialization


def spec_to_json(spec: ModelSpec) -> str:
    return json.dumps(_spec_to_dict(spec), indent=2)


def _spec_to_dict(spec: ModelSpec) -> dict:
    if isinstance(spec, BernoulliModel):
        return {
            "variant": "bernoulli",
            "probs": spec.probs.tolist(),
            "directed": spec.directed,
        }
    if isinstance(spec, BetaModel):
        return {"variant": "beta", "theta": spec.theta.tolist()}
    if isinstance(spec, CurvedErgm):
        return {
            "variant": "curved_ergm",
            "theta1": spec.theta1,
            "theta2": spec.theta2,
            "theta3": spec.theta3,
            "eta_convention": spec.eta_convention,
        }
    if isinstance(spec, LocalDependence):
        return {
            "variant": "local_dependence",
            "blocks": list(spec.blocks.labels),
            "within": [_spec_to_dict(w) for w in spec.within],
            "between": spec.between,
            "directed": spec.directed,
        }
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def spec_from_json(text: str) -> ModelSpec:
    return _spec_from_dict(json.loads(text))


def _spec_from_dict(d: dict) -> ModelSpec:
    variant = d.get("variant")
    if variant == "bernoulli":
        directed = bool(d.get("directed", False))
        if "probs" in d:
            return BernoulliModel(np.array(d["probs"], dtype=float), directed)
        return homogeneous_bernoulli(int(d["n"]), float(d["p"]), directed)
    if variant == "beta":
        return BetaModel(np.array(d["theta"], dtype=float))
    if variant == "curved_ergm":
        return CurvedErgm(
            float(d["theta1"]),
            float(d["theta2"]),
            float(d["theta3"]),
            d.get("eta_convention", AS_PRINTED),
        )
    if variant == "local_dependence":
        return LocalDependence(
            BlockStructure.from_labels(d["blocks"]),
            tuple(_spec_from_dict(w) for w in d["within"]),
            float(d.get("between", 0.0)),
            bool(d.get("directed", False)),
        )
    raise ValueError(f"unknown model variant {variant!r}")
