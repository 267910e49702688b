"""Command-line entry point.

Exit codes: 0 on success, 1 on validation errors (bad arguments, malformed
inputs), 2 on verification failure (an exact tail probability exceeding a
closed-form bound in the ``oracle`` subcommand).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import bounds, graphs, models, oracle, stats, studies


def _load_config(args) -> dict:
    if args.config is None:
        return {}
    cfg = json.loads(Path(args.config).read_text())
    if not isinstance(cfg, dict):
        raise ValueError("config file must contain a JSON object")
    return cfg


def _write_out(args, text: str, default_name: Optional[str] = None) -> None:
    if args.out is not None:
        Path(args.out).write_text(text)
    elif default_name is not None:
        Path(default_name).write_text(text)
    else:
        sys.stdout.write(text)


def _extra_outputs(args, named: dict) -> None:
    """Secondary artifacts, placed next to --out (or skipped without it)."""
    if args.out is None:
        return
    base = Path(args.out)
    for suffix, text in named.items():
        base.with_name(base.stem + suffix).write_text(text)


def cmd_simulate(args) -> int:
    cfg = _load_config(args)
    if "model" not in cfg:
        raise ValueError("simulate requires a config with a 'model' object")
    spec = models._spec_from_dict(cfg["model"])
    rng = models.replicate_rng(args.seed, "cli", "simulate")
    g = models.sample(spec, rng, mcmc=cfg.get("mcmc"))
    blocks = spec.blocks if isinstance(spec, models.LocalDependence) else None
    _write_out(args, graphs.serialize_edge_list(g, blocks))
    return 0


def cmd_stats(args) -> int:
    g, blocks = graphs.parse_edge_list(Path(args.network).read_text())
    kind = args.kind
    if kind == stats.DEGREE:
        dist = stats.degree_distribution(g)
    elif kind == stats.OUT_DEGREE:
        dist = stats.out_degree_distribution(g)
    elif kind == stats.IN_DEGREE:
        dist = stats.in_degree_distribution(g)
    elif kind == stats.ESP:
        dist = stats.esp_distribution(g)
    elif kind == stats.GEODESIC:
        dist = stats.geodesic_distribution(g)
    elif kind == stats.WITHIN_BLOCK_OUT_DEGREE:
        if blocks is None:
            raise ValueError("network file has no block section")
        dist = stats.within_block_outdegree_distribution(g, blocks, range(g.n))
    else:
        raise ValueError(f"unsupported kind {kind!r}")
    _write_out(args, stats.to_csv(dist))
    return 0


_BOUND_FNS = {
    bounds.THM1_EXP: lambda d: bounds.thm1_exp_radius(d["D_N"], d["M"], d["p"]),
    bounds.THM1_CHEB: lambda d: bounds.thm1_cheb_radius(
        d["C_N"], d["Delta_N"], d["M"], d["alpha"]
    ),
    bounds.THM2: lambda d: bounds.thm2_radius(d["D_N_X0"], d["M"], d["p"], d["r_N"]),
    bounds.COR1: lambda d: bounds.cor1_radius(d["M_max"], d["alpha_max"], d["N"]),
    bounds.COR2: lambda d: bounds.cor2_radius(
        d["M_max"], d["alpha_max"], d["N"], d["beta"]
    ),
    bounds.COR_BERN: lambda d: bounds.cor_bern_bound(
        d["expected_degrees"], d["N"], d["alpha"]
    ),
}


def cmd_bounds(args) -> int:
    cfg = _load_config(args)
    bound_id = cfg.get("bound_id")
    if bound_id not in _BOUND_FNS:
        raise ValueError(
            f"bound_id must be one of {sorted(_BOUND_FNS)}, got {bound_id!r}"
        )
    try:
        report = _BOUND_FNS[bound_id](cfg)
    except KeyError as exc:
        raise ValueError(f"missing input field {exc.args[0]!r} for {bound_id}")
    out = report.to_json() + "\n" + report.summary() + "\n"
    _write_out(args, out)
    return 0


def cmd_oracle(args) -> int:
    cfg = _load_config(args)
    if "model" not in cfg:
        raise ValueError("oracle requires a config with a 'model' object")
    spec = models._spec_from_dict(cfg["model"])
    kind = cfg.get("kind", stats.DEGREE)
    t_grid = cfg.get("t_grid", [round(0.05 * i, 2) for i in range(1, 20)])
    n = cfg.get("N")
    ed = oracle.exact_distribution(spec, n)
    blocks = spec.blocks if isinstance(spec, models.LocalDependence) else None
    report = oracle.verify_lemma1(ed, kind, t_grid, blocks)
    _write_out(args, report.to_csv())
    _extra_outputs(args, {"_profile.csv": report.profile.to_csv()})
    if not report.all_ok:
        print("verification FAILED: a bound was violated", file=sys.stderr)
        return 2
    return 0


def _study_config(args, study_id: str, cfg: dict) -> studies.StudyConfig:
    fields = {
        "n_list": cfg.get("N_list"),
        "replications": cfg.get("replications"),
        "theta_star_samples": cfg.get("theta_star_samples"),
        "theta1": cfg.get("theta1"),
        "theta2": cfg.get("theta2"),
        "theta3": cfg.get("theta3"),
        "eta_convention": cfg.get("eta_convention"),
        "burn_in": cfg.get("burn_in"),
        "thin": cfg.get("thin"),
        "alpha_list": cfg.get("alpha_list"),
        "fix_theta": cfg.get("fix_theta"),
        "k_list": cfg.get("K_list"),
    }
    kwargs = {k: v for k, v in fields.items() if v is not None}
    return studies.StudyConfig(
        study_id=study_id,
        master_seed=cfg.get("master_seed", args.seed),
        threads=args.threads,
        **kwargs,
    )


def cmd_study1(args) -> int:
    cfg = _load_config(args)
    config = _study_config(args, "study1", cfg)
    if not config.n_list:
        config.n_list = (25, 50, 75, 100)
    result = studies.run_study1(config)
    _write_out(args, result.to_csv())
    _extra_outputs(args, {"_meta.json": json.dumps(result.meta, indent=2) + "\n"})
    return 0


def cmd_study2(args) -> int:
    cfg = _load_config(args)
    config = _study_config(args, "study2", cfg)
    if not config.n_list:
        config.n_list = (10, 25, 50, 75, 100)
    result = studies.run_study2(config)
    _write_out(args, result.to_csv())
    meta = dict(result.meta)
    meta["max_expected_degree"] = {
        f"{n},{a}": v for (n, a), v in meta["max_expected_degree"].items()
    }
    _extra_outputs(args, {"_meta.json": json.dumps(meta, indent=2) + "\n"})
    return 0


def cmd_gen_classes(args) -> int:
    rng = models.replicate_rng(args.seed, "cli", "gen-classes")
    g, blocks, respondents = studies.generate_synthetic_classes(
        args.blocks, args.size_low, args.size_high, args.response_rate, rng
    )
    _write_out(args, graphs.serialize_edge_list(g, blocks))
    resp_text = "\n".join(str(i + 1) for i in sorted(respondents)) + "\n"
    _extra_outputs(args, {"_respondents.txt": resp_text})
    return 0


def cmd_subsample(args) -> int:
    cfg = _load_config(args)
    g, blocks = graphs.parse_edge_list(Path(args.network).read_text())
    if blocks is None:
        raise ValueError("network file has no block section")
    if args.respondents is not None:
        lines = Path(args.respondents).read_text().split()
        respondents = [int(tok) - 1 for tok in lines]
    else:
        respondents = list(range(g.n))
    config = _study_config(args, "subsample", cfg)
    result = studies.run_subsample(g, blocks, respondents, config)
    _write_out(args, result.to_csv())
    _extra_outputs(args, {"_bins.csv": studies.bin_values_csv(result)})
    return 0


def cmd_plot(args) -> int:
    csv_text = Path(args.csv).read_text()
    svg = studies.emit_svg_boxplot(
        csv_text, args.group_column, args.value_column, title=args.title
    )
    _write_out(args, svg)
    return 0


def _add_global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    """Global flags are accepted both before and after the subcommand.

    Subcommand copies use SUPPRESS defaults so that a value given before the
    subcommand survives the subparser's parse."""

    def d(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--seed", type=int, default=d(0), help="master RNG seed")
    p.add_argument("--out", type=str, default=d(None), help="output file path")
    p.add_argument("--threads", type=int, default=d(1), help="worker threads")
    p.add_argument("--config", type=str, default=d(None), help="JSON config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netconc",
        description="Empirical graph distributions, exact dependence "
        "quantifiers and concentration bound verification.",
    )
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "simulate", help="sample one network from a model JSON"
    )
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser(
        "stats", help="distribution CSV from an edge-list file")
    p.add_argument("network")
    p.add_argument("--kind", default=stats.DEGREE, choices=list(stats.KINDS))
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser(
        "bounds", help="closed-form bound report from JSON inputs")
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser(
        "oracle", help="exact tail vs. bound verification CSV")
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser(
        "study1", help="curved-ERGM simulation study")
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_study1)

    p = sub.add_parser(
        "study2", help="beta-model simulation study")
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_study2)

    p = sub.add_parser(
        "gen-classes", help="synthetic school classes network")
    p.add_argument("--blocks", type=int, default=304)
    p.add_argument("--size-low", type=int, default=15)
    p.add_argument("--size-high", type=int, default=33)
    p.add_argument("--response-rate", type=float, default=0.87)
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_gen_classes)

    p = sub.add_parser(
        "subsample", help="block subsampling error study")
    p.add_argument("network")
    p.add_argument("--respondents", default=None, help="file of 1-based node ids")
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_subsample)

    p = sub.add_parser(
        "plot", help="boxplot SVG from a results CSV")
    p.add_argument("csv")
    p.add_argument("--group-column", required=True)
    p.add_argument("--value-column", required=True)
    p.add_argument("--title", default="")
    _add_global_flags(p, suppress=True)
    p.set_defaults(fn=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
