#!/usr/bin/env python3
"""Sweep an epsilon grid across all three regimes and emit plot-ready CSVs.

Example:
    python scripts/phase_portrait.py --n 14 --replicates 100 --out runs/portrait14
"""

import argparse
import sys
from pathlib import Path

from cubeperc import reports
from cubeperc.critical import solve_pc
from cubeperc.cube import CubeDim
from cubeperc.experiments import SweepConfig, regime_summary, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ap.add_argument("--replicates", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("runs/phase_portrait"))
    args = ap.parse_args()

    grid = (-1.0, -0.6, -0.45, -0.3, -0.15, 0.0, 0.15, 0.3, 0.45, 0.6, 1.0)
    print(f"solving threshold for n={args.n} ...", file=sys.stderr)
    pc = solve_pc(CubeDim(args.n), args.lam, master_seed=args.seed)
    print(f"p_hat = {pc.p_hat:.6f} (n*p_hat = {args.n * pc.p_hat:.4f})", file=sys.stderr)

    cfg = SweepConfig(n=args.n, lam=args.lam, epsilon_grid=grid,
                      replicates=args.replicates, master_seed=args.seed)
    records = run_sweep(cfg, pc)
    summary = regime_summary(records)

    reports.write_csv(args.out / "sweep.csv", reports.SWEEP_HEADER, reports.sweep_rows(records))
    reports.write_csv(args.out / "regime_summary.csv", reports.SUMMARY_HEADER,
                      reports.summary_rows(summary))
    for line in summary.lines():
        print(line)
    print(f"wrote {args.out}/sweep.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
