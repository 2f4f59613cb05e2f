#!/usr/bin/env python3
"""Run every sampling method for one index over a corpus directory and write
score matrices plus agreement statistics.

Example:
    python scripts/run_length_evaluation.py --corpus data/texts \
        --index hdd --truncate 280 --iters 10000 --out-dir results/hdd
"""

import argparse
import json
from pathlib import Path

from lexdiv import (
    IndexKind,
    IndexSpec,
    SamplingConfig,
    icc_2_1,
    load_corpus,
    rm_anova,
    run_method,
)

METHODS = ("parallel", "random", "ordered_random", "alternating")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", required=True)
    ap.add_argument("--index", default="hdd")
    ap.add_argument("--truncate", type=int, default=280)
    ap.add_argument("--iters", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=101)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--min-length", type=int, default=None)
    ap.add_argument("--out-dir", required=True)
    args = ap.parse_args()

    min_length = args.min_length if args.min_length is not None else args.truncate
    corpus = load_corpus(args.corpus, min_length=min_length)
    spec = IndexSpec(kind=IndexKind(args.index), seed=args.seed).with_defaults()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    report = {}
    for method in METHODS:
        if method in ("parallel", "alternating"):
            conditions = (1, 2, 3, 4)
        else:
            conditions = tuple(args.truncate // d for d in (1, 2, 3, 4))
        config = SamplingConfig(
            method=method,
            truncate_to=args.truncate,
            conditions=conditions,
            iterations=args.iters,
            master_seed=args.seed,
        )
        matrix = run_method(corpus, config, spec, threads=args.threads)
        matrix.to_long_csv(out_dir / f"{method}.csv")
        icc = icc_2_1(matrix, mode="agreement")
        anova = rm_anova(matrix)
        report[method] = {"icc": icc.as_dict(), "anova": anova.as_dict()}
        print(f"{method:>16}: ICC(2,1)={icc.estimate:.4f} "
              f"[{icc.ci_low:.4f}, {icc.ci_high:.4f}]  "
              f"F({anova.df1},{anova.df2})={anova.F:.2f}  "
              f"eta_p^2={anova.partial_eta_sq:.4f}")

    (out_dir / "report.json").write_text(json.dumps(report, indent=2))
    print(f"wrote {out_dir}/report.json")


if __name__ == "__main__":
    main()
