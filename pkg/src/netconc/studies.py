"""Desk-scale reproductions of the simulation studies and the block
subsampling application, plus synthetic data generation and CSV/SVG output.

Every study's output is a pure function of its :class:`StudyConfig`
(including the master seed): replicate random streams are derived from
(master_seed, study id, condition, replicate index) and results are reduced
in sorted order, so serial and thread-pool execution agree bit for bit.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import models, stats
from .graphs import BlockStructure, Graph

STUDY1_KINDS = (stats.DEGREE, stats.ESP, stats.GEODESIC)

CSV_HEADER = "study,N,alpha,K,replicate,kind,linf_error,skipped"


@dataclass
class StudyConfig:
    study_id: str
    n_list: Sequence[int] = ()
    replications: int = 500
    theta_star_samples: int = 2500
    master_seed: int = 0
    threads: int = 1
    # study 1
    theta1: float = -3.5
    theta2: float = 0.4
    theta3: float = 0.75
    eta_convention: str = models.AS_PRINTED
    burn_in: int = 100_000
    thin: Optional[int] = None  # default 10 * N**2
    # study 2
    alpha_list: Sequence[float] = (0.0, 0.25)
    fix_theta: bool = False
    # subsampling
    k_list: Sequence[int] = (1, 5, 25, 50, 100, 200)

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.theta_star_samples < 2:
            raise ValueError("theta_star_samples must be at least 2")

    def thin_for(self, n: int) -> int:
        return self.thin if self.thin is not None else 10 * n * n


@dataclass(frozen=True)
class ReplicationResult:
    study: str
    n: int
    alpha: Optional[float]
    k: Optional[int]
    replicate: int
    kind: str
    linf_error: Optional[float]
    skipped: bool


@dataclass
class StudyResult:
    rows: List[ReplicationResult]
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            alpha = "" if r.alpha is None else repr(r.alpha)
            k = "" if r.k is None else str(r.k)
            err = "" if r.linf_error is None else repr(r.linf_error)
            buf.write(
                f"{r.study},{r.n},{alpha},{k},{r.replicate},{r.kind},"
                f"{err},{int(r.skipped)}\n"
            )
        return buf.getvalue()

    def errors(self, **filters) -> np.ndarray:
        out = []
        for r in self.rows:
            if r.skipped:
                continue
            if all(getattr(r, key) == val for key, val in filters.items()):
                out.append(r.linf_error)
        return np.array(out)


def _map_ordered(fn, items: Sequence, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _replicate_rows(
    study: str,
    n: int,
    alpha: Optional[float],
    replicate: int,
    g: Graph,
    theta_stars: dict,
) -> List[ReplicationResult]:
    rows = []
    for kind in STUDY1_KINDS:
        dist = models._distribution_for_kind(g, kind)
        if dist is None:
            rows.append(
                ReplicationResult(study, n, alpha, None, replicate, kind, None, True)
            )
        else:
            err = stats.linf_error(dist, theta_stars[kind].mean)
            rows.append(
                ReplicationResult(study, n, alpha, None, replicate, kind, err, False)
            )
    return rows


# ---------------------------------------------------------------------------
# simulation study 1: curved ERGM via MCMC


def run_study1(config: StudyConfig) -> StudyResult:
    """Per node count: estimate the theoretical marginals from MCMC samples,
    then record per-replicate max-bin errors for degree, edgewise shared
    partner and geodesic distributions."""
    if config.study_id != "study1":
        raise ValueError("config.study_id must be 'study1'")
    spec = models.CurvedErgm(
        config.theta1, config.theta2, config.theta3, config.eta_convention
    )
    rows: List[ReplicationResult] = []
    summaries = []
    for n in config.n_list:
        thin = config.thin_for(n)
        rng = models.replicate_rng(config.master_seed, "study1", "theta_star", n)
        samples = models.mcmc_sample_ergm(
            spec, n, config.burn_in, thin, config.theta_star_samples, rng
        )
        theta_stars = {
            kind: models.estimate_theta_star_from_graphs(samples, kind)
            for kind in STUDY1_KINDS
        }
        for kind, est in theta_stars.items():
            summaries.append(
                {
                    "N": n,
                    "kind": kind,
                    "max_std_error": est.max_std_error,
                    "n_samples": est.n_samples,
                    "n_skipped": est.n_skipped,
                }
            )

        def one_replicate(rep: int, n=n, thin=thin, theta_stars=theta_stars):
            rep_rng = models.replicate_rng(config.master_seed, "study1", n, rep)
            g = models.mcmc_sample_ergm(spec, n, config.burn_in, thin, 1, rep_rng)[0]
            return _replicate_rows("study1", n, None, rep, g, theta_stars)

        for chunk in _map_ordered(
            one_replicate, range(config.replications), config.threads
        ):
            rows.extend(chunk)
    meta = {
        "eta_convention": config.eta_convention,
        "burn_in": config.burn_in,
        "thin": "10*N^2" if config.thin is None else config.thin,
        "theta_star": summaries,
        "master_seed": config.master_seed,
    }
    return StudyResult(rows, meta)


# ---------------------------------------------------------------------------
# simulation study 2: beta-model


def _study2_theta(n: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(-alpha * math.log(n), 1.0, size=n)


def run_study2(config: StudyConfig) -> StudyResult:
    """Beta-model study: node parameters are drawn i.i.d. normal with mean
    -alpha log N; networks are sampled exactly (no MCMC).

    By default the parameter vector is redrawn for every replicate and for
    every sample used in the theoretical-marginal estimate (``fix_theta``
    switches to a single draw per condition).
    """
    if config.study_id != "study2":
        raise ValueError("config.study_id must be 'study2'")
    rows: List[ReplicationResult] = []
    max_expected_degree = {}
    for n in config.n_list:
        for alpha in config.alpha_list:
            akey = int(round(alpha * 1000))
            fixed_theta = None
            if config.fix_theta:
                fixed_theta = _study2_theta(
                    n, alpha, models.replicate_rng(config.master_seed, "study2-theta", n, akey)
                )

            def draw(rng, fixed_theta=fixed_theta, n=n, alpha=alpha):
                theta = (
                    fixed_theta
                    if fixed_theta is not None
                    else _study2_theta(n, alpha, rng)
                )
                return theta, models.sample_beta_model(theta, rng)

            ts_rng = models.replicate_rng(
                config.master_seed, "study2", "theta_star", n, akey
            )
            ts_graphs = [draw(ts_rng)[1] for _ in range(config.theta_star_samples)]
            theta_stars = {
                kind: models.estimate_theta_star_from_graphs(ts_graphs, kind)
                for kind in STUDY1_KINDS
            }

            def one_replicate(rep: int, n=n, alpha=alpha, akey=akey, theta_stars=theta_stars, draw=draw):
                rng = models.replicate_rng(config.master_seed, "study2", n, akey, rep)
                theta, g = draw(rng)
                max_deg = float(models.beta_expected_degrees(theta).max())
                return max_deg, _replicate_rows("study2", n, alpha, rep, g, theta_stars)

            max_degs = []
            for max_deg, chunk in _map_ordered(
                one_replicate, range(config.replications), config.threads
            ):
                max_degs.append(max_deg)
                rows.extend(chunk)
            max_expected_degree[(n, alpha)] = float(np.mean(max_degs))
    meta = {
        "fix_theta": config.fix_theta,
        "max_expected_degree": max_expected_degree,
        "master_seed": config.master_seed,
    }
    return StudyResult(rows, meta)


def expected_degree_slope(result: StudyResult, alpha: float) -> float:
    """Log-log slope of mean max expected degree against N for one alpha."""
    table = result.meta["max_expected_degree"]
    ns = sorted({n for (n, a) in table if a == alpha})
    if len(ns) < 2:
        raise ValueError("need at least two node counts to fit a slope")
    ys = [table[(n, alpha)] for n in ns]
    slope, _ = np.polyfit(np.log(ns), np.log(ys), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# synthetic school classes and block subsampling


def generate_synthetic_classes(
    k: int,
    size_low: int,
    size_high: int,
    response_rate_median: float,
    rng: np.random.Generator,
) -> Tuple[Graph, BlockStructure, frozenset]:
    """Directed network of K disjoint classes with within-class edges only.

    Class sizes are uniform on [size_low, size_high]; each class gets its
    own Bernoulli edge probability; per-class response rates are jittered
    symmetrically around the requested median.
    """
    if not (2 <= size_low <= size_high):
        raise ValueError("need 2 <= size_low <= size_high")
    if not (0.0 < response_rate_median <= 1.0):
        raise ValueError("response_rate_median must lie in (0, 1]")
    sizes = rng.integers(size_low, size_high + 1, size=k)
    blocks = BlockStructure.from_sizes(sizes)
    n = blocks.n_nodes
    edges = []
    respondents = []
    offset = 0
    for b in range(k):
        s = int(sizes[b])
        p = rng.uniform(0.1, 0.4)
        u = rng.random((s, s))
        for i in range(s):
            for j in range(s):
                if i != j and u[i, j] < p:
                    edges.append((offset + i, offset + j))
        if response_rate_median >= 1.0:
            rate = 1.0
        else:
            rate = float(
                np.clip(response_rate_median + rng.uniform(-0.1, 0.1), 0.0, 1.0)
            )
        hit = rng.random(s) < rate
        respondents.extend(offset + i for i in range(s) if hit[i])
        offset += s
    g = Graph.from_edges(n, True, edges)
    return g, blocks, frozenset(respondents)


def run_subsample(
    g: Graph,
    blocks: BlockStructure,
    respondents: Iterable[int],
    config: StudyConfig,
) -> StudyResult:
    """Sample blocks without replacement and track how the within-block
    out-degree distribution over sampled respondents deviates from the
    full-network reference."""
    if config.study_id != "subsample":
        raise ValueError("config.study_id must be 'subsample'")
    n_blocks = blocks.n_blocks
    for k in config.k_list:
        if k > n_blocks:
            raise ValueError(f"subsample size {k} exceeds the block count {n_blocks}")
    resp = sorted(set(int(i) for i in respondents))
    reference = stats.within_block_outdegree_distribution(g, blocks, resp)
    n_bins = reference.n_bins

    # per-block histograms of respondent within-block out-degrees
    deg = stats.within_block_out_degrees(g, blocks, resp)
    hist = np.zeros((n_blocks, n_bins))
    counts = np.zeros(n_blocks)
    labels = blocks.labels
    for node, d in zip(resp, deg):
        b = labels[node]
        hist[b, d] += 1
        counts[b] += 1

    def one_replicate(task):
        k, rep = task
        rng = models.replicate_rng(config.master_seed, "subsample", k, rep)
        chosen = rng.choice(n_blocks, size=k, replace=False)
        total = counts[chosen].sum()
        if total == 0:
            row = ReplicationResult(
                "subsample",
                g.n,
                None,
                k,
                rep,
                stats.WITHIN_BLOCK_OUT_DEGREE,
                None,
                True,
            )
            return row, []
        values = hist[chosen].sum(axis=0) / total
        err = float(np.max(np.abs(values - reference.values)))
        row = ReplicationResult(
            "subsample", g.n, None, k, rep, stats.WITHIN_BLOCK_OUT_DEGREE, err, False
        )
        return row, [(k, rep, d, float(values[d])) for d in range(n_bins)]

    tasks = [(k, rep) for k in config.k_list for rep in range(config.replications)]
    rows: List[ReplicationResult] = []
    bin_rows = []
    for row, bins in _map_ordered(one_replicate, tasks, config.threads):
        rows.append(row)
        bin_rows.extend(bins)
    meta = {
        "reference": reference.values.tolist(),
        "n_blocks": n_blocks,
        "n_respondents": len(resp),
        "bin_rows": bin_rows,
        "master_seed": config.master_seed,
    }
    return StudyResult(rows, meta)


def bin_values_csv(result: StudyResult) -> str:
    """Per-degree-bin subsample values (for variability summaries)."""
    buf = io.StringIO()
    buf.write("K,replicate,degree,value\n")
    for k, rep, d, v in result.meta["bin_rows"]:
        buf.write(f"{k},{rep},{d},{v!r}\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# SVG boxplots


def _box_stats(values: np.ndarray) -> dict:
    q1, med, q3 = np.percentile(values, [25, 50, 75])
    iqr = q3 - q1
    lo_limit = q1 - 1.5 * iqr
    hi_limit = q3 + 1.5 * iqr
    inside = values[(values >= lo_limit) & (values <= hi_limit)]
    whisk_lo = inside.min() if len(inside) else med
    whisk_hi = inside.max() if len(inside) else med
    outliers = values[(values < lo_limit) | (values > hi_limit)]
    return {
        "q1": q1,
        "med": med,
        "q3": q3,
        "lo": whisk_lo,
        "hi": whisk_hi,
        "outliers": sorted(float(v) for v in outliers),
    }


def emit_svg_boxplot(
    csv_text: str,
    group_column: str,
    value_column: str,
    title: str = "",
    width: int = 640,
    height: int = 400,
) -> str:
    """One box (median, quartiles, 1.5 IQR whiskers, outlier dots) per
    group, in first-appearance order. Deterministic for a fixed input."""
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None or group_column not in reader.fieldnames:
        raise ValueError(f"missing column {group_column!r}")
    if value_column not in reader.fieldnames:
        raise ValueError(f"missing column {value_column!r}")
    groups: dict = {}
    for row in reader:
        raw = row[value_column]
        if raw == "":
            continue
        groups.setdefault(row[group_column], []).append(float(raw))
    if not groups:
        raise ValueError("no data rows")
    names = list(groups)
    boxes = [_box_stats(np.array(groups[g])) for g in names]

    lo = min(min(b["lo"], *(b["outliers"] or [b["lo"]])) for b in boxes)
    hi = max(max(b["hi"], *(b["outliers"] or [b["hi"]])) for b in boxes)
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo -= pad
    hi += pad

    margin = 50
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin

    def y(v: float) -> float:
        return margin + plot_h * (1.0 - (v - lo) / (hi - lo))

    slot = plot_w / len(names)
    box_w = slot * 0.5

    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
    )
    out.write(f'<rect width="{width}" height="{height}" fill="white"/>\n')
    if title:
        out.write(
            f'<text x="{width / 2}" y="20" text-anchor="middle" '
            f'font-size="14">{title}</text>\n'
        )
    out.write(
        f'<line x1="{margin}" y1="{margin + plot_h}" x2="{margin + plot_w}" '
        f'y2="{margin + plot_h}" stroke="black"/>\n'
    )
    out.write(
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{margin + plot_h}" stroke="black"/>\n'
    )
    for gi, (name, b) in enumerate(zip(names, boxes)):
        cx = margin + slot * (gi + 0.5)
        x0 = cx - box_w / 2
        out.write(
            f'<line x1="{cx:.2f}" y1="{y(b["lo"]):.2f}" x2="{cx:.2f}" '
            f'y2="{y(b["q1"]):.2f}" stroke="black"/>\n'
        )
        out.write(
            f'<line x1="{cx:.2f}" y1="{y(b["q3"]):.2f}" x2="{cx:.2f}" '
            f'y2="{y(b["hi"]):.2f}" stroke="black"/>\n'
        )
        for v, label in ((b["lo"], "lo"), (b["hi"], "hi")):
            out.write(
                f'<line x1="{x0 + box_w * 0.25:.2f}" y1="{y(v):.2f}" '
                f'x2="{x0 + box_w * 0.75:.2f}" y2="{y(v):.2f}" stroke="black"/>\n'
            )
        box_h = abs(y(b["q1"]) - y(b["q3"]))
        out.write(
            f'<rect x="{x0:.2f}" y="{y(b["q3"]):.2f}" width="{box_w:.2f}" '
            f'height="{box_h:.2f}" fill="lightsteelblue" stroke="black"/>\n'
        )
        out.write(
            f'<line x1="{x0:.2f}" y1="{y(b["med"]):.2f}" x2="{x0 + box_w:.2f}" '
            f'y2="{y(b["med"]):.2f}" stroke="black" stroke-width="2"/>\n'
        )
        for v in b["outliers"]:
            out.write(
                f'<circle cx="{cx:.2f}" cy="{y(v):.2f}" r="2" fill="black"/>\n'
            )
        out.write(
            f'<text x="{cx:.2f}" y="{margin + plot_h + 18}" text-anchor="middle" '
            f'font-size="11">{name}</text>\n'
        )
    for frac in (0.0, 0.5, 1.0):
        v = lo + frac * (hi - lo)
        out.write(
            f'<text x="{margin - 6}" y="{y(v):.2f}" text-anchor="end" '
            f'font-size="10">{v:.3g}</text>\n'
        )
    out.write("</svg>\n")
    return out.getvalue()
