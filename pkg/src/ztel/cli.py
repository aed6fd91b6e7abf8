"""Command-line entry point tying the pipeline together.

Exit codes: 0 success, 1 verdict failure (a configured check did not hold),
2 configuration error.  All artifacts are written to the configured output
directory; CSV output is byte-deterministic for a fixed config.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import boundary as boundary_mod
from . import coarse as coarse_mod
from .algebra import Automorphism, write_growth_csv
from .compactify import BoundaryPoint, build_slope_spec
from .config import ExperimentConfig, load_config, packaged_fixture_names
from .errors import ConfigError, NotUnimodular, ZtelError
from .nullity import decay_experiment, eta_estimate, euclidean_baseline
from .svgplot import line_plot
from .telescope import TelescopePoint, fundamental_domain, u_map, v_map

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_CONFIG = 2


def _out_dir(cfg: ExperimentConfig, override: str | None) -> Path:
    out = Path(override) if override else Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def _fmt(v: float) -> str:
    return format(v, ".12g")


def _prepare(cfg: ExperimentConfig):
    aut = cfg.automorphism()
    domain = fundamental_domain(aut, cfg.domain_step)
    eta = eta_estimate(aut, domain, cfg.eta_kmax)
    spec = build_slope_spec(aut, eta, mode=cfg.mode)
    return aut, domain, eta, spec


def cmd_group(cfg: ExperimentConfig, out: Path, args) -> int:
    aut = cfg.automorphism()
    radius = args.radius if args.radius is not None else cfg.group_radius
    counts = aut.growth_series(radius)
    write_growth_csv(out / "growth.csv", counts)
    (out / "automorphism.json").write_text(aut.to_json() + "\n")
    _write_json(
        out / "group_summary.json",
        {"radius": radius, "ball_size": sum(counts), "sphere_counts": counts},
    )
    return EXIT_OK


def cmd_telescope(cfg: ExperimentConfig, out: Path, args) -> int:
    aut = cfg.automorphism()
    domain = fundamental_domain(aut, cfg.domain_step)
    with open(out / "domain.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = [f"x{i + 1}" for i in range(aut.n)] + ["r"]
        header += [f"v_x{i + 1}" for i in range(aut.n)] + ["v_r"]
        writer.writerow(header)
        for p in domain.samples:
            q = v_map(aut, p)
            row = [_fmt(float(v)) for v in p.x] + [_fmt(float(p.r))]
            row += [_fmt(float(v)) for v in q.x] + [_fmt(float(q.r))]
            writer.writerow(row)
    # straighten/unstraighten self-check across several levels
    worst = 0.0
    for p in domain.samples:
        for shift in (-3, 0, 5):
            tp = TelescopePoint(p.x, p.r + shift)
            back = u_map(aut, v_map(aut, tp))
            err = max(abs(a - b) for a, b in zip(back.x, tp.x))
            scale = max(1.0, max(abs(float(v)) for v in tp.x))
            worst = max(worst, err / scale)
    _write_json(out / "telescope_summary.json", {"roundtrip_error": worst})
    return EXIT_OK if worst < 1e-12 else EXIT_VERDICT


def cmd_nullity(cfg: ExperimentConfig, out: Path, args) -> int:
    if not cfg.families:
        raise ConfigError("nullity needs at least one [families.*] table")
    aut, domain, eta, spec = _prepare(cfg)
    with open(out / "eta.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "eta"])
        for s, v in zip(eta.ss, eta.values):
            writer.writerow([_fmt(s), _fmt(v)])
    (out / "slope_spec.json").write_text(spec.to_json() + "\n")
    curve, verdicts = decay_experiment(
        spec, aut, domain, cfg.families, spearman_max=cfg.spearman_max
    )
    curve.write_csv(out / "decay.csv")
    _write_json(out / "verdict.json", verdicts)
    if args.plot:
        line_plot(
            out / "decay.svg",
            {fam.name: curve.family(fam.name) for fam in cfg.families},
            title="smallness of translated fundamental domains",
        )
    return EXIT_OK if verdicts["all_passed"] else EXIT_VERDICT


def cmd_baseline(cfg: ExperimentConfig, out: Path, args) -> int:
    if not cfg.families:
        raise ConfigError("baseline needs at least one [families.*] table")
    aut = cfg.automorphism()
    domain = fundamental_domain(aut, cfg.domain_step)
    curve = euclidean_baseline(aut, domain, cfg.families)
    curve.write_csv(out / "baseline.csv")
    if args.plot:
        line_plot(
            out / "baseline.svg",
            {fam.name: curve.family(fam.name) for fam in cfg.families},
            title="Euclidean visual-sphere baseline",
        )
    return EXIT_OK


def cmd_coarse(cfg: ExperimentConfig, out: Path, args) -> int:
    aut = cfg.automorphism()
    k, eps = coarse_mod.qi_constants(aut)
    rho = coarse_mod.PiecewiseLinear((0.0, 1e6), (0.0, 3e6))  # rho(x) = 3x
    psi_inv = coarse_mod.psi_inv_from_star(rho)
    with open(out / "psi_inv.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "psi_inv"])
        for x, y in zip(psi_inv.xs, psi_inv.ys):
            writer.writerow([_fmt(x), _fmt(y)])
    ladder = [10.0**j for j in range(3, 13)]
    deviations = {
        "identity": coarse_mod.limit_ratio_check(lambda y: y, 1, 0, 1, 0, ladder),
        "log": coarse_mod.limit_ratio_check(
            math.log, 1, 0, 2, 5, [10.0**j for j in range(2, 9)]
        ),
        "log_star": coarse_mod.limit_ratio_check(
            lambda y: math.log(psi_inv(y)), 1, 0, 2, 5, ladder
        ),
    }
    report = {
        "qi_constant": k,
        "qi_additive": eps,
        "limit_ratio_deviation": deviations,
    }
    _write_json(out / "coarse.json", report)
    ok = all(v < 0.1 for v in deviations.values())
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_boundary(cfg: ExperimentConfig, out: Path, args) -> int:
    aut, domain, eta, spec = _prepare(cfg)
    grid = boundary_mod.sphere_grid(720)
    worst_inv = 0.0
    t_elem = aut.t_power(1)
    for z in grid:
        b = BoundaryPoint.at(z, 0.5)
        fwd = boundary_mod.boundary_act(aut, t_elem, b)
        back = boundary_mod.boundary_act(aut, aut.inverse(t_elem), fwd)
        worst_inv = max(worst_inv, max(abs(u - v) for u, v in zip(back.z, z)))
    # radial sequence heading to a fixed direction at slope 0
    seq = [TelescopePoint((float(i), 0.0), 0.0) for i in range(8, 257, 8)]
    limit = BoundaryPoint.at((1.0, 0.0), 0.0)
    dev = boundary_mod.convergence_check(spec, aut, aut.embed((2, 3)), seq, limit)
    report = {
        "t_inversion_error": worst_inv,
        "translation_convergence_deviation": dev,
    }
    _write_json(out / "boundary.json", report)
    ok = worst_inv < 1e-12 and dev < 0.05
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_demo_heisenberg(args) -> int:
    cfg = load_config("heisenberg")
    out = _out_dir(cfg, args.out or "out/demo-heisenberg")
    aut, domain, eta, spec = _prepare(cfg)
    curve, verdicts = decay_experiment(
        spec, aut, domain, cfg.families, spearman_max=cfg.spearman_max
    )
    base = euclidean_baseline(aut, domain, cfg.families)
    curve.write_csv(out / "decay.csv")
    base.write_csv(out / "baseline.csv")
    t_name = next(f.name for f in cfg.families if f.kind == "t_power")
    slope_final = curve.family(t_name)[-1][1]
    euclid_final = base.family(t_name)[-1][1]
    summary = {
        "slope_curve": [
            {"family": n, "scale": s, "delta": d} for n, s, d in curve.entries
        ],
        "euclidean_curve": [
            {"family": n, "scale": s, "delta": d} for n, s, d in base.entries
        ],
        "t_family": t_name,
        "slope_final_delta": slope_final,
        "euclidean_final_delta": euclid_final,
        "contrast_ratio": euclid_final / slope_final,
        "verdicts": verdicts,
    }
    _write_json(out / "summary.json", summary)
    if args.plot:
        line_plot(
            out / "contrast.svg",
            {
                "slope compactification": curve.family(t_name),
                "euclidean sphere": base.family(t_name),
            },
            title="t-power translates: slope gluing vs visual sphere",
        )
    ok = verdicts["all_passed"] and slope_final < euclid_final
    return EXIT_OK if ok else EXIT_VERDICT


_COMMANDS = {
    "group": cmd_group,
    "telescope": cmd_telescope,
    "nullity": cmd_nullity,
    "baseline": cmd_baseline,
    "coarse": cmd_coarse,
    "boundary": cmd_boundary,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ztel",
        description="Experiments with lattices Z^n x| Z, their telescopes, "
        "and slope compactifications",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument(
            "config",
            help="path to a TOML config, or a packaged fixture name "
            f"({', '.join(packaged_fixture_names())})",
        )
        p.add_argument("--out", help="override the output directory")
        p.add_argument("--plot", action="store_true", help="also emit SVG plots")
        if name == "group":
            p.add_argument("--radius", type=int, default=None)
    demo = sub.add_parser("demo-heisenberg")
    demo.add_argument("--out", help="output directory")
    demo.add_argument("--plot", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "demo-heisenberg":
        try:
            return cmd_demo_heisenberg(args)
        except ZtelError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VERDICT
    try:
        # tomllib reports malformed TOML with line/column inside the message
        cfg = load_config(args.config)
    except (ConfigError, NotUnimodular, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        out = _out_dir(cfg, args.out)
        return _COMMANDS[args.command](cfg, out, args)
    except (ConfigError, NotUnimodular) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ZtelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
