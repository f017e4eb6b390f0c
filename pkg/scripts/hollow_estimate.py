"""Energy density of the optimised spring with the core hollowed out.

The deformed shape is taken from the solid solve; only the energy and mass
are re-evaluated with the hollow box section.
"""

import argparse
import math

from spiralspring import (
    DEFAULT_SPIRAL,
    DEFAULT_THICKNESS,
    ONYX,
    HollowBox,
    Infill,
    LoadCase,
    SpiralKinematics,
    ThicknessProfile,
    evaluate,
    optimize,
    section_energy_density_at_yield,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flange", type=float, nargs="+", default=[0.15, 0.25, 0.35, 0.5])
    ap.add_argument("--web", type=float, nargs="+", default=[0.1, 0.2, 0.5, 1.0])
    args = ap.parse_args()

    kin = SpiralKinematics(DEFAULT_SPIRAL)
    prof = ThicknessProfile.uniform(kin.default_grid(), DEFAULT_THICKNESS, 1e-3)
    final = optimize(kin, prof, ONYX, LoadCase(math.pi / 2)).final
    base = final.report.mass_energy_density
    print(f"solid optimised design: {base:.2f} J/kg")
    print(f"{'f_t':>5} {'f_w':>5} {'mass drop':>10} {'J/kg':>8} {'gain':>7} {'section bound':>14}")
    for ft in args.flange:
        for fw in args.web:
            rep = evaluate(final.solution, Infill(ft, fw))
            bound = section_energy_density_at_yield(HollowBox(0.02, DEFAULT_THICKNESS, ft, fw), ONYX)
            print(
                f"{ft:5.2f} {fw:5.2f} {1 - rep.mass / final.report.mass:10.1%} {rep.mass_energy_density:8.2f} "
                f"{rep.mass_energy_density / base - 1:7.1%} {bound:14.2f}"
            )


if __name__ == "__main__":
    main()
