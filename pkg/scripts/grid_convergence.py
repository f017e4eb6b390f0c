"""Energy and torque of the uniform spring at 90 degrees on refined grids."""

import math
import time

from spiralspring import (
    DEFAULT_SPIRAL,
    DEFAULT_THICKNESS,
    ONYX,
    LoadCase,
    SolverConfig,
    SpiralKinematics,
    ThicknessProfile,
    evaluate,
    solve_bvp,
)


def main():
    kin = SpiralKinematics(DEFAULT_SPIRAL)
    prev = None
    print(f"{'N':>5} {'energy J':>18} {'torque N m':>18} {'change':>9} {'s':>6}")
    for n in (101, 201, 401, 801, 1601):
        start = time.perf_counter()
        prof = ThicknessProfile.uniform(kin.default_grid(n), DEFAULT_THICKNESS, 1e-3)
        rep = evaluate(solve_bvp(kin, prof, ONYX, LoadCase(math.pi / 2), SolverConfig(grid_n=n)))
        change = "" if prev is None else f"{abs(rep.total_energy / prev - 1):9.1e}"
        print(f"{n:5d} {rep.total_energy:18.12f} {rep.torque:18.12f} {change:>9} {time.perf_counter() - start:6.2f}")
        prev = rep.total_energy


if __name__ == "__main__":
    main()
