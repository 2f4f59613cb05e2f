#!/usr/bin/env python3
"""Sweep the tunable parameter of a window/segment/factor index and emit
mean-centered profile plot data for the most extreme texts.

Example:
    python scripts/parameter_sweeps.py --corpus data/texts --index mattr \
        --params 24:240:24 --out-dir results/sweeps
"""

import argparse
from pathlib import Path

from lexdiv import (
    IndexKind,
    center_columns,
    emit_plot_data,
    icc_2_1,
    load_corpus,
    parameter_sweep,
    select_profiles,
)
from lexdiv.profiles import subset_rows


def parse_params(raw, as_float):
    cast = float if as_float else int
    if ":" in raw:
        start, stop, step = (cast(p) for p in raw.split(":"))
        out, v = [], start
        while v <= stop + 1e-9:
            out.append(cast(round(v, 10)))
            v += step
        return out
    return [cast(p) for p in raw.split(",")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", required=True)
    ap.add_argument("--index", default="mattr")
    ap.add_argument("--params", required=True)
    ap.add_argument("--seed", type=int, default=101)
    ap.add_argument("--select", type=int, default=12)
    ap.add_argument("--min-length", type=int, default=0)
    ap.add_argument("--out-dir", required=True)
    args = ap.parse_args()

    kind = IndexKind(args.index)
    params = parse_params(args.params, as_float=(kind is IndexKind.MTLD))
    corpus = load_corpus(args.corpus, min_length=args.min_length)
    matrix = parameter_sweep(corpus, kind, params, master_seed=args.seed)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    matrix.to_long_csv(out_dir / f"{kind.value}_sweep.csv")

    icc = icc_2_1(matrix, mode="consistency")
    print(f"{kind.value}: ICC(2,1)_consistency = {icc.estimate:.4f} "
          f"[{icc.ci_low:.4f}, {icc.ci_high:.4f}]")

    selection = select_profiles(matrix, count=args.select)
    centered = center_columns(subset_rows(matrix, selection))
    emit_plot_data(centered, out_dir / f"{kind.value}_profiles.csv", format="csv")
    emit_plot_data(centered, out_dir / f"{kind.value}_profiles.svg", format="svg")
    print(f"selected profiles: {', '.join(selection.selected_ids)}")
    print(f"wrote {out_dir}/{kind.value}_profiles.csv and .svg")


if __name__ == "__main__":
    main()
