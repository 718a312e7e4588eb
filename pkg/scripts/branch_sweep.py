#!/usr/bin/env python3
"""Sweep the solitary-wave branch in frequency and tabulate amplitudes.

Natural-parameter continuation from omega_start toward omega_end; stops where
the branch collapses to the zero wave or Newton fails.
"""

import argparse
from pathlib import Path

import numpy as np

import kgpoint as kg
from kgpoint.io import write_csv
from kgpoint.solitary import NoConvergence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--coefficients", default="0,-2,1", help="potential coefficients in |psi|^2")
    ap.add_argument("--start", type=float, default=0.0)
    ap.add_argument("--end", type=float, default=0.99)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--guess", type=float, default=0.7)
    ap.add_argument("--out", default="out/branch.csv")
    args = ap.parse_args()

    coeffs = tuple(float(v) for v in args.coefficients.split(","))
    model = kg.ModelSpec(1.0, (kg.OscillatorSpec(0.0, coeffs),))
    try:
        waves = kg.continue_branch(model, args.start, args.end, args.step, [args.guess])
        failed_at = None
    except NoConvergence as err:
        waves, failed_at = err.waves, err.omega

    rows = []
    for w in waves:
        residual = float(np.max(np.abs(kg.amplitude_residual(model, w))))
        rows.append((w.omega, w.kappa, w.amplitudes[0].real, w.amplitudes[0].imag, residual))
    write_csv(Path(args.out), ["omega", "kappa", "C_re", "C_im", "residual"], rows)

    print(f"solved {len(waves)} points", end="")
    if failed_at is not None:
        print(f"; Newton failed at omega = {failed_at}", end="")
    elif waves and len(waves) < int(abs(args.end - args.start) / args.step) + 1:
        print(f"; branch collapsed to zero after omega = {waves[-1].omega:.4f}", end="")
    print(f"; wrote {args.out}")


if __name__ == "__main__":
    main()
