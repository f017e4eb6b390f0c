"""Command-line entry point.

Exit codes: 0 success, 1 configuration or usage error, 2 solver failure.
Results go to files in --out-dir; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import cantilever as cant
from .analysis import evaluate, sweep
from .config import ConfigError, RunConfig, parse_config
from .core import (
    ArcGrid,
    LoadCase,
    SolidRect,
    ThicknessProfile,
    homogeneous_yield_limit,
    max_bending_energy_density,
    section_energy_density_at_yield,
)
from .elastica import SolverError, SpiralBeam
from .export import (
    energy_summary,
    history_summary,
    quantity,
    read_csv,
    solution_summary,
    write_csv,
    write_curve,
    write_fields,
    write_history,
    write_report,
    write_svg,
)
from .geometry import OffsetExceedsCurvature, SpiralKinematics, outline
from .optimizer import optimize

log = logging.getLogger("spiralspring")

CONTACT_WARNING = "coil-to-coil contact is not checked"


class UsageError(Exception):
    pass


def _hollow(text: str):
    try:
        ft, fw = (float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected f_t,f_w") from None
    return ft, fw


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file")
    common.add_argument("--deflection-deg", type=float, help="twist of the outer end in degrees")
    common.add_argument("--iterations", type=int, help="maximum optimizer iterations")
    common.add_argument("--grid-n", type=int, help="arc-length grid nodes")
    common.add_argument("--hollow", type=_hollow, metavar="F_T,F_W", help="hollow-box flange and web fractions")
    common.add_argument("--out-dir", type=Path, help="output directory (default: runs/<command>)")
    common.add_argument("--force", action="store_true", help="write into a non-empty output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="spiralspring", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve one twist and write fields")
    sub.add_parser("optimize", parents=[common], help="optimise the thickness profile")
    p = sub.add_parser("sweep", parents=[common], help="torque-deflection curve from 0 to the deflection")
    p.add_argument("--points", type=int, help="number of sweep points (default from config)")
    p = sub.add_parser("cantilever", parents=[common], help="tip-loaded cantilever profiles")
    p.add_argument("--tip-load-n", type=float, default=10.0)
    p.add_argument("--length-mm", type=float, default=100.0)
    p.add_argument("--beam-thickness-mm", type=float, default=5.0)
    sub.add_parser("section", parents=[common], help="cross-section properties and yield energy density")
    p = sub.add_parser("export", parents=[common], help="write the printable outline as SVG")
    p.add_argument("--profile", type=Path, help="CSV with columns S,t (e.g. fields.csv from optimize)")
    p.add_argument("--samples-per-node", type=int, default=4)
    return parser


def load_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    changes = {}
    if args.deflection_deg is not None:
        changes["deflection_deg"] = args.deflection_deg
    if args.iterations is not None:
        changes["iterations"] = args.iterations
    if args.grid_n is not None:
        changes["grid_n"] = args.grid_n
    if args.hollow is not None:
        changes["hollow_flange_fraction"], changes["hollow_web_fraction"] = args.hollow
    if getattr(args, "points", None) is not None:
        changes["sweep_points"] = args.points
    return cfg.replace(**changes) if changes else cfg


def prepare_out_dir(args) -> Path:
    out = args.out_dir or Path("runs") / args.command
    if out.exists() and any(out.iterdir()) and not args.force:
        raise UsageError(f"{out} is not empty; pass --force to overwrite")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _setup(cfg: RunConfig):
    kin = SpiralKinematics(cfg.spiral)
    grid = kin.default_grid(cfg.solver.grid_n)
    return kin, grid, ThicknessProfile.uniform(grid, cfg.thickness, cfg.t_min)


def _hollow_block(sol, cfg: RunConfig, solid_report) -> dict:
    rep = evaluate(sol, cfg.infill)
    return {
        "flange_fraction": cfg.infill.flange_fraction,
        "web_fraction": cfg.infill.web_fraction,
        "method": "solid-beam deformation, hollow-section energy and mass",
        "mass": quantity(rep.mass, "kg"),
        "total_energy": quantity(rep.total_energy, "J"),
        "mass_energy_density": quantity(rep.mass_energy_density, "J/kg"),
        "density_gain": quantity(rep.mass_energy_density / solid_report.mass_energy_density - 1.0, "1"),
        "mass_reduction": quantity(1.0 - rep.mass / solid_report.mass, "1"),
    }


def _bounds(cfg: RunConfig) -> dict:
    return {
        "max_bending_energy_density": quantity(max_bending_energy_density(cfg.material), "J/kg"),
        "homogeneous_yield_limit": quantity(homogeneous_yield_limit(cfg.material), "J/kg"),
    }


def cmd_solve(args, cfg: RunConfig, out: Path) -> None:
    kin, grid, prof = _setup(cfg)
    sol = SpiralBeam(kin, prof, cfg.material).solve(LoadCase(cfg.deflection), cfg.solver)
    rep = evaluate(sol)
    results = {"energy": energy_summary(rep), "solver": solution_summary(sol), "bounds": _bounds(cfg)}
    if cfg.infill is not None:
        results["hollow_estimate"] = _hollow_block(sol, cfg, rep)
    write_fields(out / "fields.csv", sol, rep)
    write_report(out / "report.json", "solve", cfg.to_text(), results, [CONTACT_WARNING])


def cmd_optimize(args, cfg: RunConfig, out: Path) -> None:
    kin, grid, prof = _setup(cfg)
    hist = optimize(kin, prof, cfg.material, LoadCase(cfg.deflection), cfg.solver, cfg.optimizer)
    final = hist.final
    results = {
        "energy": energy_summary(final.report),
        "solver": solution_summary(final.solution),
        "bounds": _bounds(cfg),
        "history": history_summary(hist),
        "termination": hist.termination,
        "clamped_nodes": final.profile.n_clamped(),
    }
    if cfg.infill is not None:
        results["hollow_estimate"] = _hollow_block(final.solution, cfg, final.report)
    warnings = [CONTACT_WARNING]
    if final.profile.n_clamped():
        warnings.append(f"{final.profile.n_clamped()} nodes clamped at min_thickness_mm")
    write_history(out / "history.csv", hist)
    write_fields(out / "fields.csv", final.solution, final.report)
    try:
        write_svg(out / "geometry.svg", outline(kin, final.profile))
    except OffsetExceedsCurvature as exc:
        warnings.append(f"geometry.svg not written: {exc}")
    write_report(out / "report.json", "optimize", cfg.to_text(), results, warnings)


def cmd_sweep(args, cfg: RunConfig, out: Path) -> None:
    kin, grid, prof = _setup(cfg)
    twists = np.radians(np.linspace(0.0, cfg["deflection_deg"], cfg["sweep_points"]))
    if cfg.deflection < 0:
        twists = twists[::-1]
    curve = sweep(kin, prof, cfg.material, twists, cfg.solver)
    work = curve.work() if cfg.deflection >= 0 else -curve.work()
    results = {
        "work": quantity(work, "J"),
        "final_energy": quantity(curve.energy[-1] if cfg.deflection >= 0 else curve.energy[0], "J"),
        "points": len(curve.twist),
    }
    write_curve(out / "curve.csv", curve)
    write_report(out / "report.json", "sweep", cfg.to_text(), results, [CONTACT_WARNING])


def cmd_cantilever(args, cfg: RunConfig, out: Path) -> None:
    case = cant.CantileverCase(
        args.tip_load_n, args.length_mm * 1e-3, cfg.spiral.width, cfg.material,
        args.beam_thickness_mm * 1e-3, cfg.t_min,
    )
    table = cant.profile_table(case)
    write_csv(out / "cantilever.csv", list(table), zip(*table.values()))
    opt = cant.optimal_case(case)
    results = {
        "uniform_energy": quantity(cant.total_energy(case), "J"),
        "uniform_mass_energy_density": quantity(cant.mass_energy_density(case), "J/kg"),
        "optimal_mass_energy_density": quantity(cant.mass_energy_density(opt), "J/kg"),
        "root_optimal_thickness": quantity(float(cant.optimal_thickness(case, 0.0)), "m"),
        "bounds": _bounds(cfg),
    }
    write_report(out / "report.json", "cantilever", cfg.to_text(), results, [])


def cmd_section(args, cfg: RunConfig, out: Path) -> None:
    w, t = cfg.spiral.width, cfg.thickness
    sections = {"solid": SolidRect(w, t)}
    if cfg.infill is not None:
        sections["hollow"] = cfg.infill.section(w, t)
    results = {"bounds": _bounds(cfg)}
    for name, cs in sections.items():
        p = cs.properties()
        results[name] = {
            "area": quantity(p.area, "m^2"),
            "second_moment": quantity(p.second_moment, "m^4"),
            "half_depth": quantity(p.half_depth, "m"),
            "energy_density_at_yield": quantity(section_energy_density_at_yield(cs, cfg.material), "J/kg"),
        }
    write_report(out / "report.json", "section", cfg.to_text(), results, [])


def cmd_export(args, cfg: RunConfig, out: Path) -> None:
    kin, grid, prof = _setup(cfg)
    if args.profile:
        data = read_csv(args.profile)
        s = data["S"] * (kin.s_max / data["S"][-1])
        s[0] = 0.0
        prof = ThicknessProfile(ArcGrid(s), data["t"], min(cfg.t_min, float(np.min(data["t"]))))
    ol = outline(kin, prof, args.samples_per_node)
    write_svg(out / "geometry.svg", ol)
    write_csv(
        out / "outline.csv",
        ("S", "t", "inner_x", "inner_y", "outer_x", "outer_y"),
        zip(ol.s, ol.thickness, *ol.inner.T, *ol.outer.T),
    )
    results = {
        "arc_length": quantity(kin.s_max, "m"),
        "points_per_edge": len(ol.s),
        "min_thickness": quantity(float(np.min(ol.thickness)), "m"),
        "max_thickness": quantity(float(np.max(ol.thickness)), "m"),
    }
    write_report(out / "report.json", "export", cfg.to_text(), results, [])


COMMANDS = {
    "solve": cmd_solve,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "cantilever": cmd_cantilever,
    "section": cmd_section,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = load_config(args)
        out = prepare_out_dir(args)
        COMMANDS[args.command](args, cfg, out)
    except (ConfigError, UsageError, OffsetExceedsCurvature, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver failed: {exc}", file=sys.stderr)
        return 2
    log.info("wrote results to %s", out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
