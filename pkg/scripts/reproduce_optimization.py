"""Optimise the default spring at 90 degrees and print the iteration history."""

import argparse
import math
import time

from spiralspring import (
    DEFAULT_SPIRAL,
    DEFAULT_THICKNESS,
    ONYX,
    LoadCase,
    OptimizerConfig,
    SolverConfig,
    SpiralKinematics,
    ThicknessProfile,
    max_bending_energy_density,
    optimize,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iterations", type=int, default=10)
    ap.add_argument("--c2", type=float, default=0.5)
    ap.add_argument("--deflection-deg", type=float, default=90.0)
    args = ap.parse_args()

    kin = SpiralKinematics(DEFAULT_SPIRAL)
    prof = ThicknessProfile.uniform(kin.default_grid(), DEFAULT_THICKNESS, 1e-3)
    cfg = OptimizerConfig(c2=args.c2, max_outer_iterations=args.iterations)
    start = time.perf_counter()
    hist = optimize(kin, prof, ONYX, LoadCase(math.radians(args.deflection_deg)), SolverConfig(), cfg)
    bound = max_bending_energy_density(ONYX)

    print(f"{'iter':>4} {'J/kg':>8} {'of bound':>9} {'max MPa':>8} {'>=0.9 yield':>12} {'c1':>7} {'c2':>7}")
    for r in hist.records:
        c2 = "" if r.c2 is None else f"{r.c2:.3g}"
        print(
            f"{r.iteration:>4} {r.mass_energy_density:8.2f} {r.mass_energy_density / bound:9.1%} "
            f"{r.max_stress / 1e6:8.2f} {r.fraction_at_90:12.3f} {r.c1:7.4f} {c2:>7}"
        )
    print(f"termination: {hist.termination}; {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
