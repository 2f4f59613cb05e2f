#!/usr/bin/env python3
"""Emit HD-D presence-probability curves: for each type frequency f, the
probability of appearing at least once in a sample of n tokens drawn without
replacement from an N-token text."""

import argparse
from pathlib import Path

from lexdiv import emit_plot_data, hdd_presence_curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=300)
    ap.add_argument("--f-max", type=int, default=20)
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--out-dir", required=True)
    args = ap.parse_args()

    curves = hdd_presence_curves(
        n_tokens=args.N,
        f_values=range(1, args.f_max + 1),
        n_values=range(args.n_min, args.N + 1),
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    emit_plot_data(curves, out_dir / "presence_curves.csv", format="csv")
    emit_plot_data(curves, out_dir / "presence_curves.svg", format="svg")
    print(f"wrote {out_dir}/presence_curves.csv and .svg")


if __name__ == "__main__":
    main()
