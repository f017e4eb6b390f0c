"""File writers: JSON reports, CSV tables and SVG outlines."""

from __future__ import annotations

import csv
import json
import math
import re
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import EnergyReport, TorqueCurve
from .elastica import ElasticaSolution
from .geometry import Outline
from .optimizer import OptimizationHistory

SCHEMA = "spiralspring-report/1"

FIELD_COLUMNS = ("S", "t", "M", "theta", "x", "y", "sigma", "dUdm")
CURVE_COLUMNS = ("twist_deg", "torque", "energy")
HISTORY_COLUMNS = ("iter", "mass_energy_density", "max_stress", "fraction", "energy", "mass", "c1", "c2")


def fmt(x) -> str:
    return format(float(x), ".17g")


def write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(columns)
        for row in rows:
            out.writerow([fmt(v) if not isinstance(v, str) else v for v in row])


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) if v else math.nan for v in r] for r in body])
    return {name: data[:, i] for i, name in enumerate(header)}


def write_fields(path, sol: ElasticaSolution, report: EnergyReport):
    cols = (sol.s, sol.profile.values, sol.M, sol.theta, sol.x, sol.y, report.stress, report.dUdm)
    write_csv(path, FIELD_COLUMNS, zip(*cols))


def write_curve(path, curve: TorqueCurve):
    write_csv(path, CURVE_COLUMNS, zip(curve.twist_deg, curve.torque, curve.energy))


def write_history(path, hist: OptimizationHistory):
    rows = []
    for r in hist.records:
        c2 = "" if r.c2 is None else r.c2
        rows.append((r.iteration, r.mass_energy_density, r.max_stress, r.fraction_at_90, r.energy, r.mass, r.c1, c2))
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(HISTORY_COLUMNS)
        for row in rows:
            out.writerow([str(row[0])] + [v if isinstance(v, str) else fmt(v) for v in row[1:]])


def quantity(value, unit: str) -> dict:
    return {"value": float(value), "unit": unit}


def energy_summary(report: EnergyReport) -> dict:
    return {
        "twist": quantity(math.degrees(report.twist), "deg"),
        "total_energy": quantity(report.total_energy, "J"),
        "mass": quantity(report.mass, "kg"),
        "mass_energy_density": quantity(report.mass_energy_density, "J/kg"),
        "torque": quantity(report.torque, "N m"),
        "max_stress": quantity(report.max_stress, "Pa"),
        "fraction_at_0.9_yield": quantity(report.fraction_at_yield(0.9), "1"),
    }


def solution_summary(sol: ElasticaSolution) -> dict:
    return {
        "M0": quantity(sol.m0, "N m"),
        "V": quantity(sol.v, "N"),
        "H": quantity(sol.h, "N"),
        "residual_norm": quantity(sol.residual_norm, "1"),
        "conservation_error": quantity(sol.conservation_error(), "1"),
    }


def history_summary(hist: OptimizationHistory) -> list[dict]:
    return [
        {
            "iteration": r.iteration,
            "c1": quantity(r.c1, "1"),
            "c2": None if r.c2 is None else quantity(r.c2, "1"),
            **energy_summary(r.report),
        }
        for r in hist.records
    ]


def write_report(path, command: str, config_text: str, results: dict, warnings: list[str]):
    doc = {
        "schema": SCHEMA,
        "generator": f"spiralspring {__version__}",
        "command": command,
        "config": config_text,
        "results": results,
        "warnings": warnings,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n")


def write_svg(path, outline: Outline, margin_mm: float = 5.0):
    """Edge polylines in millimetres; y is flipped so the drawing reads as plotted."""
    inner = outline.inner * 1e3 * np.array([1.0, -1.0])
    outer = outline.outer * 1e3 * np.array([1.0, -1.0])
    pts = np.vstack([inner, outer])
    lo = pts.min(axis=0) - margin_mm
    size = pts.max(axis=0) + margin_mm - lo

    def poly(name, p):
        coords = " ".join(f"{x:.6f},{y:.6f}" for x, y in p)
        return f'  <polyline id="{name}" fill="none" stroke="black" stroke-width="0.1" points="{coords}"/>'

    doc = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size[0]:.3f}mm" height="{size[1]:.3f}mm" '
        f'viewBox="{lo[0]:.3f} {lo[1]:.3f} {size[0]:.3f} {size[1]:.3f}">',
        poly("inner-edge", inner),
        poly("outer-edge", outer),
        "</svg>",
    ]
    Path(path).write_text("\n".join(doc) + "\n")


def read_svg_polylines(path) -> dict[str, np.ndarray]:
    """Polylines by id, in millimetres as written (y flipped)."""
    text = Path(path).read_text()
    out = {}
    for m in re.finditer(r'<polyline id="([^"]+)"[^>]*points="([^"]+)"', text):
        pts = [tuple(map(float, p.split(","))) for p in m.group(2).split()]
        out[m.group(1)] = np.array(pts)
    return out
