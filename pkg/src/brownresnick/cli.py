"""Command-line front end: simulation runs, oracles, and validation.

Subcommands
-----------
simulate   draw replications of the field and write CSV / JSON diagnostics
oracle     finite-dimensional CDF probability by the Monte Carlo identity
validate   run the built-in validation experiments, write report + Q-Q SVG
pickands   estimate the Pickands set function over [0, N]^d
theta      estimate the discrete extremal index
clusters   cluster-count distributions across a list of alpha values

Every JSON output echoes {seed, alpha, n, reps, version} so a run can be
replayed exactly.  Identical configurations produce identical output
bytes; pass --no-timing to strip the one wall-clock field from simulate
diagnostics when byte-stable files are required.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .distributions import fdd_cdf_oracle, gumbel_cdf, gumbel_quantile, std_normal_cdf
from .gaussian import SiteSet, box_grid, load_sites_csv
from .pointprocess import SamplingMeasure
from .simulator import replications, simulate, transform_marginals
from .statseval import (
    cluster_count_stats,
    extremal_index_estimate,
    ks_critical,
    ks_statistic,
    ks_two_sample,
    pickands_estimate,
    qq_data,
)
from .variogram import VariogramModel, gamma

SVG_SIZE = 480
SVG_MARGIN = 48
SVG_MAX_MARKERS = 2000

# Independent experiment arms are separated this far in seed space so that
# the per-replication seeds (base + r) of different arms never collide.
ARM_STRIDE = 10_000_000

VALIDATE_CHECKS = (
    "marginal",
    "bivariate",
    "mu_invariance",
    "stationarity",
    "parallel_determinism",
)

# Fixed 5-site set for the invariance experiments.
FIVE_SITES = (0.0, 0.2, 0.45, 0.7, 1.0)


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"environment variable {name} must be an integer, got {raw!r}")


def parse_grid(expr: str) -> np.ndarray:
    """Points of a grid expression ``a:b:mesh[,a:b:mesh]``, one term per axis."""
    lows, highs, meshes = [], [], []
    for term in expr.split(","):
        parts = term.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid term {term!r} is not of the form a:b:mesh")
        try:
            a, b, m = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"grid term {term!r} has a non-numeric part")
        lows.append(a)
        highs.append(b)
        meshes.append(m)
    return box_grid(lows, highs, meshes)


def _load_measure(args, n: int) -> SamplingMeasure | None:
    path = getattr(args, "measure_weights", None)
    if path:
        weights = np.loadtxt(path, delimiter=",").reshape(-1)
        if weights.shape[0] != n:
            raise SystemExit(f"{path}: {weights.shape[0]} weights for {n} sites")
        return SamplingMeasure(weights)
    return None


def _resolve_sites(args, parser) -> SiteSet:
    if getattr(args, "sites", None) and getattr(args, "grid", None):
        parser.error("give either --sites or --grid, not both")
    sites = None
    if getattr(args, "sites", None):
        sites = load_sites_csv(args.sites, header=args.sites_header)
    elif getattr(args, "grid", None):
        try:
            sites = SiteSet(parse_grid(args.grid))
        except ValueError as exc:
            parser.error(str(exc))
    else:
        parser.error("one of --sites or --grid is required")
    if getattr(args, "dim", None) and args.dim != sites.dim:
        parser.error(f"--dim {args.dim} does not match the {sites.dim}-dimensional sites")
    return sites


def _build_model(parser, alpha, scale, dim) -> VariogramModel:
    try:
        return VariogramModel(alpha=alpha, scale=scale, dim=dim)
    except ValueError as exc:
        parser.error(str(exc))


def _echo(seed, alpha, n, reps) -> dict:
    return {
        "seed": seed,
        "alpha": alpha,
        "n": n,
        "reps": reps,
        "version": __version__,
    }


def _emit_json(obj: dict, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(rows, path: str | None) -> None:
    lines = [",".join(repr(float(v)) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_svg_qq(pairs, path: str) -> None:
    """Write a standalone Q-Q scatter with a diagonal reference line.

    Markers are strided down to at most 2000 to bound the file size; the
    output contains no timestamps, so equal inputs give equal bytes.
    """
    pts = [(float(a), float(b)) for a, b in pairs]
    if not pts:
        raise ValueError("no Q-Q points to plot")
    if len(pts) > SVG_MAX_MARKERS:
        idx = np.unique(np.round(
            np.linspace(0, len(pts) - 1, SVG_MAX_MARKERS)).astype(int))
        pts = [pts[i] for i in idx]
    flat = [v for p in pts for v in p]
    lo, hi = min(flat), max(flat)
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    lo -= pad
    hi += pad
    span = SVG_SIZE - 2 * SVG_MARGIN

    def sx(v):
        return SVG_MARGIN + (v - lo) / (hi - lo) * span

    def sy(v):
        return SVG_SIZE - SVG_MARGIN - (v - lo) / (hi - lo) * span

    x0, x1 = sx(lo), sx(hi)
    y0, y1 = sy(lo), sy(hi)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" '
        f'height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line class="axis" x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" '
        f'y2="{y0:.2f}" stroke="black"/>',
        f'<line class="axis" x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0:.2f}" '
        f'y2="{y1:.2f}" stroke="black"/>',
        f'<line class="diagonal" x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" '
        f'y2="{y1:.2f}" stroke="gray" stroke-dasharray="4 3"/>',
        f'<text x="{(x0 + x1) / 2:.2f}" y="{SVG_SIZE - 10}" '
        'text-anchor="middle" font-size="12">theoretical quantile</text>',
        f'<text x="14" y="{(y0 + y1) / 2:.2f}" text-anchor="middle" '
        f'font-size="12" transform="rotate(-90 14 {(y0 + y1) / 2:.2f})">'
        'empirical quantile</text>',
        f'<text x="{x0:.2f}" y="{y0 + 16:.2f}" text-anchor="middle" '
        f'font-size="10">{lo:.3g}</text>',
        f'<text x="{x1:.2f}" y="{y0 + 16:.2f}" text-anchor="middle" '
        f'font-size="10">{hi:.3g}</text>',
    ]
    for a, b in pts:
        parts.append(f'<circle class="pt" cx="{sx(a):.2f}" cy="{sy(b):.2f}" '
                     'r="2" fill="steelblue"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_simulate(args, parser) -> int:
    sites = _resolve_sites(args, parser)
    if args.reps < 1:
        parser.error("reps must be a positive integer")
    if args.workers < 1:
        parser.error("workers must be >= 1")
    model = _build_model(parser, args.alpha, args.scale, sites.dim)
    measure = _load_measure(args, sites.n)

    t0 = time.perf_counter()
    rows = np.empty((args.reps, sites.n))
    counts = []
    for r, fs in enumerate(replications(sites, model, args.reps,
                                        measure=measure, seed=args.seed,
                                        workers=args.workers)):
        rows[r] = transform_marginals(fs, args.marginals).values
        counts.append(fs.num_clusters)
    wall = time.perf_counter() - t0

    _emit_csv(rows, args.out)
    if args.diag:
        diag = _echo(args.seed, args.alpha, sites.n, args.reps)
        diag.update({
            "workers": args.workers,
            "marginals": args.marginals,
            "cluster_counts": counts,
        })
        if not args.no_timing:
            diag["wall_time_s"] = wall
        _emit_json(diag, args.diag)
    return 0


def cmd_oracle(args, parser) -> int:
    sites = _resolve_sites(args, parser)
    if args.reps < 1:
        parser.error("reps must be a positive integer")
    model = _build_model(parser, args.alpha, args.scale, sites.dim)
    y = [float(v) for v in args.y.split(",")]
    if len(y) == 1:
        y = y * sites.n
    if len(y) != sites.n:
        parser.error(f"--y needs 1 or {sites.n} values, got {len(y)}")
    est = fdd_cdf_oracle(sites, model, y, args.reps, args.seed)
    out = _echo(args.seed, args.alpha, sites.n, args.reps)
    out.update({"value": est.value, "std_error": est.std_error, "y": y})
    _emit_json(out, args.out)
    return 0


def cmd_pickands(args, parser) -> int:
    if args.reps < 1:
        parser.error("reps must be a positive integer")
    if args.N <= 0:
        parser.error("N must be positive")
    model = _build_model(parser, args.alpha, args.scale, args.dim)
    est = pickands_estimate(model, (0.0, args.N), args.mesh, args.reps, args.seed)
    volume = float(args.N) ** args.dim
    n_points = round(args.N / args.mesh + 1) ** args.dim
    out = _echo(args.seed, args.alpha, n_points, args.reps)
    out.update({
        "value": est.value / volume,
        "std_error": est.std_error / volume,
        "set_function": est.value,
        "N": args.N,
        "mesh": args.mesh,
    })
    _emit_json(out, args.out)
    return 0


def cmd_theta(args, parser) -> int:
    if args.reps < 1:
        parser.error("reps must be a positive integer")
    if args.n < 1:
        parser.error("n must be >= 1")
    model = _build_model(parser, args.alpha, args.scale, args.dim)
    est = extremal_index_estimate(model, args.n, args.reps, args.seed)
    out = _echo(args.seed, args.alpha, args.n, args.reps)
    out.update({"value": est.value, "std_error": est.std_error})
    _emit_json(out, args.out)
    return 0


def cmd_clusters(args, parser) -> int:
    sites = _resolve_sites(args, parser)
    if args.reps < 1:
        parser.error("reps must be a positive integer")
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError:
        parser.error(f"--alphas must be a comma list of numbers, got {args.alphas!r}")
    if not alphas:
        parser.error("--alphas list is empty")

    rows = []
    summaries = []
    for i, alpha in enumerate(alphas):
        model = _build_model(parser, alpha, args.scale, sites.dim)
        counts = [fs.num_clusters
                  for fs in replications(sites, model, args.reps,
                                         seed=args.seed + i * ARM_STRIDE,
                                         workers=args.workers)]
        rows.extend((alpha, c) for c in counts)
        summary = {"alpha": alpha}
        summary.update(cluster_count_stats(counts))
        summaries.append(summary)

    if args.out:
        lines = [f"{alpha!r},{count}" for alpha, count in rows]
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    report = _echo(args.seed, alphas, sites.n, args.reps)
    report["summaries"] = summaries
    _emit_json(report, args.summary)
    return 0


def _two_sample_check(name, arm_a, arm_b, reps) -> dict:
    d = ks_two_sample(arm_a, arm_b)
    thr = ks_critical(reps, m=reps)
    return {"name": name, "pass": bool(d <= thr), "statistic": d, "threshold": thr}


def cmd_validate(args, parser) -> int:
    if args.reps < 1:
        parser.error("reps must be a positive integer")
    for name in args.skip:
        if name not in VALIDATE_CHECKS:
            parser.error(f"unknown check {name!r}; choose from {VALIDATE_CHECKS}")
    reps = args.reps
    seed = args.seed
    model = _build_model(parser, args.alpha, args.scale, 1)
    sites5 = SiteSet(np.asarray(FIVE_SITES))
    checks = []
    ks_thr = 1.63 / np.sqrt(reps)

    def active(name):
        return name not in args.skip

    if active("marginal"):
        samples = [fs.values[0]
                   for fs in replications([0.7], model, reps, seed=seed)]
        d = ks_statistic(samples, gumbel_cdf)
        checks.append({"name": "marginal", "pass": bool(d <= ks_thr),
                       "statistic": d, "threshold": ks_thr})

    if active("bivariate"):
        pair = np.array([0.0, args.s])
        loc = float(np.log(2.0 * std_normal_cdf(np.sqrt(gamma(model, args.s) / 2.0))))
        samples = [fs.values.max() - loc
                   for fs in replications(pair, model, reps,
                                          seed=seed + ARM_STRIDE)]
        d = ks_statistic(samples, gumbel_cdf)
        emit_svg_qq(qq_data(samples, gumbel_quantile), args.qq)
        checks.append({"name": "bivariate", "pass": bool(d <= ks_thr),
                       "statistic": d, "threshold": ks_thr, "qq_svg": args.qq})

    if active("mu_invariance"):
        skewed = SamplingMeasure([0.6, 0.1, 0.1, 0.1, 0.1])
        arm_a = [fs.values.max()
                 for fs in replications(sites5, model, reps,
                                        seed=seed + 2 * ARM_STRIDE)]
        arm_b = [fs.values.max()
                 for fs in replications(sites5, model, reps, measure=skewed,
                                        seed=seed + 3 * ARM_STRIDE)]
        checks.append(_two_sample_check("mu_invariance", arm_a, arm_b, reps))

    if active("stationarity"):
        worst = None
        for k, alpha in enumerate((1.0, 2.0)):
            m = VariogramModel(alpha=alpha, scale=args.scale)
            base = seed + (4 + 2 * k) * ARM_STRIDE
            runs_a = [fs.values
                      for fs in replications(sites5, m, reps, seed=base)]
            runs_b = [fs.values
                      for fs in replications(sites5.shifted(10.0), m, reps,
                                             seed=base + ARM_STRIDE)]
            a = np.asarray(runs_a)
            b = np.asarray(runs_b)
            for stat_a, stat_b in ((a.max(axis=1), b.max(axis=1)),
                                   (a[:, 0], b[:, 0])):
                d = ks_two_sample(stat_a, stat_b)
                if worst is None or d > worst:
                    worst = d
        thr = ks_critical(reps, m=reps)
        checks.append({"name": "stationarity", "pass": bool(worst <= thr),
                       "statistic": float(worst), "threshold": thr})

    if active("parallel_determinism"):
        mismatches = 0
        base = seed + 8 * ARM_STRIDE
        for i in range(100):
            one = simulate(sites5, model, seed=base + i, workers=1)
            eight = simulate(sites5, model, seed=base + i, workers=8)
            if (not np.array_equal(one.values, eight.values)
                    or one.num_clusters != eight.num_clusters):
                mismatches += 1
        checks.append({"name": "parallel_determinism",
                       "pass": mismatches == 0,
                       "statistic": mismatches, "threshold": 0})

    all_pass = all(c["pass"] for c in checks)
    report = _echo(seed, args.alpha, sites5.n, reps)
    report.update({"s": args.s, "checks": checks, "all_pass": all_pass})
    _emit_json(report, args.report)
    for c in checks:
        status = "pass" if c["pass"] else "FAIL"
        sys.stdout.write(
            f"{c['name']:<22} {status}  statistic={c['statistic']:.6g} "
            f"threshold={c['threshold']:.6g}\n")
    sys.stdout.write(f"report written to {args.report}\n")
    return 0 if all_pass else 1


def _add_site_args(sp, grid_default: str | None = None):
    sp.add_argument("--sites", help="CSV of sites, one point per row")
    sp.add_argument("--sites-header", action="store_true",
                    help="skip the first row of --sites")
    sp.add_argument("--grid", default=grid_default,
                    help="grid expression a:b:mesh[,a:b:mesh], endpoints included")
    sp.add_argument("--dim", type=int, default=None,
                    help="expected site dimension (checked against the sites)")


def _add_common(sp, default_seed, reps_default):
    sp.add_argument("--scale", type=float, default=1.0,
                    help="variogram scale (default 1)")
    sp.add_argument("--reps", type=int, default=reps_default,
                    help=f"replications (default {reps_default})")
    sp.add_argument("--seed", type=int, default=default_seed,
                    help="base seed (default from BROWNRESNICK_SEED or 1)")


def build_parser() -> argparse.ArgumentParser:
    default_seed = _env_int("BROWNRESNICK_SEED", 1)
    default_workers = _env_int("BROWNRESNICK_WORKERS", 1)

    parser = argparse.ArgumentParser(
        prog="brownresnick",
        description="Exact Brown-Resnick max-stable field simulation")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="draw field replications")
    _add_site_args(sp)
    sp.add_argument("--alpha", type=float, required=True)
    _add_common(sp, default_seed, reps_default=1)
    sp.add_argument("--workers", type=int, default=default_workers)
    sp.add_argument("--marginals", choices=("gumbel", "frechet", "weibull"),
                    default="gumbel")
    sp.add_argument("--measure", choices=("uniform",), default="uniform",
                    help="anchor-site measure (uniform unless weights given)")
    sp.add_argument("--measure-weights",
                    help="CSV of one positive weight per site")
    sp.add_argument("--out", help="output CSV path (default stdout)")
    sp.add_argument("--diag", help="diagnostics JSON path")
    sp.add_argument("--no-timing", action="store_true",
                    help="omit wall_time_s from diagnostics for byte-stable replays")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("oracle", help="finite-dimensional CDF oracle")
    _add_site_args(sp)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--y", required=True,
                    help="comma list of thresholds (one value broadcasts)")
    _add_common(sp, default_seed, reps_default=1_000_000)
    sp.add_argument("--out", help="output JSON path (default stdout)")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("validate", help="run the validation experiments")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--s", type=float, default=1.0 - 1.0 / 1024.0,
                    help="site separation for the bivariate check")
    _add_common(sp, default_seed, reps_default=10_000)
    sp.add_argument("--workers", type=int, default=default_workers)
    sp.add_argument("--skip", action="append", default=[], metavar="CHECK",
                    help=f"skip a named check; one of {', '.join(VALIDATE_CHECKS)}")
    sp.add_argument("--report", default="validate_report.json")
    sp.add_argument("--qq", default="qq_dependence.svg",
                    help="Q-Q SVG path for the bivariate check")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("pickands", help="Pickands set-function estimate")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--N", type=float, required=True, help="box is [0, N]^dim")
    sp.add_argument("--mesh", type=float, required=True)
    sp.add_argument("--dim", type=int, default=1)
    _add_common(sp, default_seed, reps_default=100_000)
    sp.add_argument("--out", help="output JSON path (default stdout)")
    sp.set_defaults(func=cmd_pickands)

    sp = sub.add_parser("theta", help="discrete extremal index estimate")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--n", type=int, required=True, help="integer sites 1..n")
    sp.add_argument("--dim", type=int, default=1)
    _add_common(sp, default_seed, reps_default=100_000)
    sp.add_argument("--out", help="output JSON path (default stdout)")
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("clusters", help="cluster counts across alpha values")
    _add_site_args(sp)
    sp.add_argument("--alphas", required=True,
                    help="comma list of alpha values")
    _add_common(sp, default_seed, reps_default=200)
    sp.add_argument("--workers", type=int, default=default_workers)
    sp.add_argument("--out", help="per-run counts CSV (rows alpha,count)")
    sp.add_argument("--summary", help="summary JSON path (default stdout)")
    sp.set_defaults(func=cmd_clusters)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
