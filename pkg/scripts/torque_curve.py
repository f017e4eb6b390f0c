"""Torque-deflection curve of the uniform default spring, with the work check."""

import argparse

import numpy as np

from spiralspring import DEFAULT_SPIRAL, DEFAULT_THICKNESS, ONYX, SpiralKinematics, ThicknessProfile, sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-deg", type=float, default=90.0)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--thickness-mm", type=float, default=DEFAULT_THICKNESS * 1e3)
    args = ap.parse_args()

    kin = SpiralKinematics(DEFAULT_SPIRAL)
    prof = ThicknessProfile.uniform(kin.default_grid(), args.thickness_mm * 1e-3, 1e-3)
    curve = sweep(kin, prof, ONYX, np.radians(np.linspace(0.0, args.max_deg, args.points)))
    print(f"{'deg':>7} {'torque N m':>11} {'energy J':>9}")
    for d, tau, u in zip(curve.twist_deg, curve.torque, curve.energy):
        print(f"{d:7.2f} {tau:11.4f} {u:9.4f}")
    # a linear spring would give k = tau / phi at every point
    k = curve.torque[1:] / curve.twist[1:]
    print(f"secant stiffness {k.min():.3f} to {k.max():.3f} N m/rad")
    print(f"work {curve.work():.4f} J vs stored {curve.energy[-1]:.4f} J")


if __name__ == "__main__":
    main()
