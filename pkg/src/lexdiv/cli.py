"""Command-line entry point wiring corpus -> indices/sampling -> stats and
profile outputs with reproducible configuration.

The CLI adds no numeric computation of its own; every value it writes comes
from the library modules.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import __version__
from .corpus import CorpusError, attach_scores, load_corpus
from .indices import IndexKind, IndexSpec, evaluate, token_weights
from .numerics import NumericsError
from .profiles import (
    ProfilesError,
    center_columns,
    emit_plot_data,
    hdd_presence_curves,
    select_profiles,
    subset_rows,
)
from .sampling import (
    SamplingConfig,
    SamplingError,
    ScoreMatrix,
    parameter_sweep,
    run_method,
)
from .stats import StatsError, compare_correlations, icc_2_1, pearson, rm_anova

# Fixed default so that runs without --seed / LEXDIV_SEED are reproducible.
DEFAULT_SEED = 101


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    """Full, serializable description of one experiment run."""

    subcommand: str
    corpus_dir: Optional[str] = None
    case_policy: str = "fold"
    min_length: int = 0
    scores_csv: Optional[str] = None
    index: Optional[str] = None
    n: Optional[int] = None
    s: Optional[int] = None
    factor: Optional[float] = None
    maas_variant: str = "natural_log_a"
    method: Optional[str] = None
    truncate_to: Optional[int] = None
    conditions: Optional[list] = None
    params: Optional[list] = None
    iterations: int = 10_000
    master_seed: int = DEFAULT_SEED
    threads: int = 1
    format: str = "csv"
    outputs: dict = field(default_factory=dict)


def _atomic_write(path, write_fn):
    """Write via temp file + rename; no partial outputs on failure."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", suffix=".tmp")
    os.close(fd)
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_sidecar(out_path, config: RunConfig, extra=None):
    meta = {"tool": "lexdiv", "version": __version__, "config": asdict(config)}
    if extra:
        meta.update(extra)
    side = Path(str(out_path) + ".meta.json")
    _atomic_write(
        side,
        lambda tmp: Path(tmp).write_text(json.dumps(meta, indent=2, sort_keys=True)),
    )


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("LEXDIV_SEED")
    if env is not None:
        return int(env)
    return DEFAULT_SEED


def _load_corpus(args):
    if not args.corpus:
        raise CliError("--corpus is required")
    corpus = load_corpus(args.corpus, case_policy=args.case,
                         min_length=args.min_length)
    if getattr(args, "scores", None):
        corpus = attach_scores(corpus, args.scores)
    return corpus


def _spec_from(args) -> IndexSpec:
    try:
        kind = IndexKind(args.index)
    except ValueError:
        raise CliError(
            f"unknown index {args.index!r}; choose from "
            f"{', '.join(k.value for k in IndexKind)}"
        ) from None
    spec = IndexSpec(
        kind=kind,
        n=args.n,
        s=args.s,
        factor=args.factor,
        maas_variant=getattr(args, "maas_variant", "natural_log_a"),
        seed=_resolve_seed(args),
    )
    spec.validate()
    return spec.with_defaults()


def _parse_conditions(raw, cast=int):
    """Accept '60,80,120,240' or a '24:240:24' range expression."""
    if raw is None:
        return None
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise CliError(f"range must be start:stop:step, got {raw!r}")
        start, stop, step = (cast(p) for p in parts)
        out = []
        value = start
        while value <= stop + 1e-9:
            out.append(cast(round(value, 10)))
            value += step
        return out
    return [cast(p) for p in raw.split(",")]


def cmd_index(args):
    corpus = _load_corpus(args)
    spec = _spec_from(args)
    rows = []
    for text in corpus:
        score, flags = evaluate(text, spec)
        rows.append({
            "text_id": text.id,
            "index": spec.kind.value,
            "param": spec.label(),
            "score": score,
            "flags": ";".join(flags),
        })

    if args.format == "json":
        payload = json.dumps(rows, indent=2)
        if args.out:
            _atomic_write(args.out, lambda tmp: Path(tmp).write_text(payload))
        else:
            print(payload)
        return 0

    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=["text_id", "index", "param", "score", "flags"]
    )
    writer.writeheader()
    for row in rows:
        row = dict(row, score=repr(row["score"]))
        writer.writerow(row)
    if args.out:
        _atomic_write(args.out, lambda tmp: Path(tmp).write_text(buf.getvalue()))
    else:
        sys.stdout.write(buf.getvalue())
    return 0


_METHOD_ALIASES = {
    "parallel": "parallel",
    "random": "random",
    "ordered": "ordered_random",
    "ordered_random": "ordered_random",
    "alternating": "alternating",
}


def cmd_evaluate_length(args):
    corpus = _load_corpus(args)
    spec = _spec_from(args)
    seed = _resolve_seed(args)
    method = _METHOD_ALIASES.get(args.method)
    if method is None:
        raise CliError(f"unknown method {args.method!r}")
    if method in ("parallel", "alternating"):
        conditions = tuple(_parse_conditions(args.conditions) or (1, 2, 3, 4))
    else:
        default = [args.truncate, args.truncate // 2, args.truncate // 3,
                   args.truncate // 4]
        conditions = tuple(_parse_conditions(args.conditions) or default)
    config = SamplingConfig(
        method=method,
        truncate_to=args.truncate,
        conditions=conditions,
        iterations=args.iters,
        master_seed=seed,
    )
    matrix = run_method(corpus, config, spec, threads=args.threads)
    run_config = RunConfig(
        subcommand="evaluate-length",
        corpus_dir=args.corpus, case_policy=args.case,
        min_length=args.min_length, scores_csv=getattr(args, "scores", None),
        index=spec.kind.value, n=spec.n, s=spec.s, factor=spec.factor,
        method=method, truncate_to=args.truncate, conditions=list(conditions),
        iterations=args.iters, master_seed=seed, threads=args.threads,
        outputs={"scores": str(args.out)},
    )
    _emit_experiment(matrix, args, run_config, icc_mode="agreement")
    return 0


def cmd_evaluate_parameter(args):
    corpus = _load_corpus(args)
    try:
        kind = IndexKind(args.index)
    except ValueError:
        raise CliError(f"unknown index {args.index!r}") from None
    seed = _resolve_seed(args)
    cast = float if kind is IndexKind.MTLD else int
    params = _parse_conditions(args.params, cast=cast)
    matrix = parameter_sweep(corpus, kind, params, master_seed=seed,
                             s=args.s or 10)
    run_config = RunConfig(
        subcommand="evaluate-parameter",
        corpus_dir=args.corpus, case_policy=args.case,
        min_length=args.min_length, scores_csv=getattr(args, "scores", None),
        index=kind.value, s=args.s, params=matrix.meta["param_values"],
        master_seed=seed,
        outputs={"scores": str(args.out)},
    )
    _emit_experiment(matrix, args, run_config, icc_mode="consistency")
    return 0


def _emit_experiment(matrix: ScoreMatrix, args, run_config: RunConfig,
                     icc_mode: str):
    """Scores CSV (+ sidecar), optional ICC JSON and profile CSV, all atomic."""
    written = []
    try:
        _atomic_write(args.out, lambda tmp: matrix.to_long_csv(tmp))
        written.append(Path(args.out))
        _write_sidecar(args.out, run_config, extra={"matrix_meta": matrix.meta})
        written.append(Path(str(args.out) + ".meta.json"))
        if getattr(args, "icc_out", None):
            result = icc_2_1(matrix, mode=icc_mode)
            payload = json.dumps(result.as_dict(), indent=2)
            _atomic_write(args.icc_out,
                          lambda tmp: Path(tmp).write_text(payload))
            written.append(Path(args.icc_out))
        if getattr(args, "profiles_out", None):
            selection = select_profiles(matrix, count=args.select)
            sub = subset_rows(matrix, selection)
            if icc_mode == "consistency":
                sub = center_columns(sub)
            _atomic_write(
                args.profiles_out,
                lambda tmp: emit_plot_data(sub, tmp, format="csv"),
            )
            written.append(Path(args.profiles_out))
    except BaseException:
        for path in written:
            if path.exists():
                path.unlink()
        raise


def cmd_stats(args):
    matrix = ScoreMatrix.from_long_csv(args.source)
    if args.stat == "icc":
        result = icc_2_1(matrix, mode=args.mode).as_dict()
    elif args.stat == "anova":
        result = rm_anova(matrix).as_dict()
    else:  # compare-corr
        if not args.criterion:
            raise CliError("compare-corr needs --criterion CSV (id,score)")
        crit = {}
        with open(args.criterion, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header[:2]] != ["id", "score"]:
                raise CliError("criterion CSV must have header 'id,score'")
            for row in reader:
                if row:
                    crit[row[0]] = float(row[1])
        missing = [rid for rid in matrix.row_ids if rid not in crit]
        if missing:
            raise CliError(f"criterion missing for texts: {missing}")
        y = [crit[rid] for rid in matrix.row_ids]
        if args.col_a and args.col_b:
            ja = matrix.col_labels.index(args.col_a)
            jb = matrix.col_labels.index(args.col_b)
        else:
            corrs = [pearson(matrix.values[:, j], y)
                     for j in range(len(matrix.col_labels))]
            ja = corrs.index(max(corrs))
            jb = corrs.index(min(corrs))
        comparison = compare_correlations(
            matrix.values[:, ja], matrix.values[:, jb], y
        )
        result = comparison.as_dict()
        result["col_large_candidate"] = matrix.col_labels[ja]
        result["col_small_candidate"] = matrix.col_labels[jb]

    payload = json.dumps(result, indent=2)
    if args.out:
        _atomic_write(args.out, lambda tmp: Path(tmp).write_text(payload))
    else:
        print(payload)
    return 0


def cmd_profiles(args):
    matrix = ScoreMatrix.from_long_csv(args.source)
    selection = select_profiles(matrix, count=args.select)
    sub = subset_rows(matrix, selection)
    if args.center:
        sub = center_columns(sub)
    _atomic_write(args.out, lambda tmp: emit_plot_data(sub, tmp,
                                                       format=args.format))
    return 0


def cmd_hdd_curve(args):
    curves = hdd_presence_curves(
        n_tokens=args.N,
        f_values=range(1, args.f_max + 1),
        n_values=range(args.n_min, args.N + 1, args.n_step),
    )
    _atomic_write(args.out, lambda tmp: emit_plot_data(curves, tmp,
                                                       format=args.format))
    return 0


def cmd_weights(args):
    try:
        kind = IndexKind(args.index)
    except ValueError:
        raise CliError(f"unknown index {args.index!r}") from None
    weights = token_weights(kind, args.N, args.n)
    print(",".join(format(w, "g") for w in weights))
    return 0


def _add_corpus_args(p):
    p.add_argument("--corpus", help="directory of whitespace-tokenized files")
    p.add_argument("--min-length", dest="min_length", type=int, default=0)
    p.add_argument("--case", choices=["fold", "preserve"], default="fold")
    p.add_argument("--scores", help="CSV of text quality scores (id,score)")


def _add_spec_args(p):
    p.add_argument("--index", required=True,
                   help="ttr|guiraud|herdan|maas|mttrrs|hdd|mattr|msttr|mttrss|mtld")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--factor", type=float, default=None)
    p.add_argument("--maas-variant", dest="maas_variant",
                   choices=["natural_log_a", "base10_a_squared"],
                   default="natural_log_a")
    p.add_argument("--seed", type=int, default=None,
                   help=f"master seed (default {DEFAULT_SEED}, or LEXDIV_SEED)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexdiv",
        description="Lexical diversity indices and length-sensitivity "
                    "evaluation harness",
    )
    parser.add_argument("--config",
                        help="key=value file providing flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="score every text under one index")
    _add_corpus_args(p)
    _add_spec_args(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("evaluate-length",
                       help="run one length-sensitivity sampling method")
    _add_corpus_args(p)
    _add_spec_args(p)
    p.add_argument("--method", required=True,
                   choices=sorted(_METHOD_ALIASES))
    p.add_argument("--truncate", type=int, required=True)
    p.add_argument("--conditions",
                   help="divisors/k (parallel, alternating) or sample lengths")
    p.add_argument("--iters", type=int, default=10_000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True, help="long-form scores CSV")
    p.add_argument("--icc-out", dest="icc_out")
    p.add_argument("--profiles-out", dest="profiles_out")
    p.add_argument("--select", type=int, default=12)
    p.set_defaults(fn=cmd_evaluate_length)

    p = sub.add_parser("evaluate-parameter", help="parameter sweep")
    _add_corpus_args(p)
    p.add_argument("--index", required=True)
    p.add_argument("--params", help="e.g. 24:240:24 or 0.66,0.67,...")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--icc-out", dest="icc_out")
    p.add_argument("--profiles-out", dest="profiles_out")
    p.add_argument("--select", type=int, default=12)
    p.set_defaults(fn=cmd_evaluate_parameter)

    p = sub.add_parser("stats", help="ICC / RM-ANOVA / correlation comparison")
    p.add_argument("stat", choices=["icc", "anova", "compare-corr"])
    p.add_argument("--from", dest="source", required=True,
                   help="long-form scores CSV")
    p.add_argument("--mode", choices=["agreement", "consistency"],
                   default="agreement")
    p.add_argument("--criterion", help="CSV id,score for compare-corr")
    p.add_argument("--col-a", dest="col_a")
    p.add_argument("--col-b", dest="col_b")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("profiles", help="select extreme profiles for plotting")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--select", type=int, default=12)
    p.add_argument("--center", action="store_true")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_profiles)

    p = sub.add_parser("hdd-curve", help="presence-probability curve grid")
    p.add_argument("--N", type=int, default=300)
    p.add_argument("--f-max", dest="f_max", type=int, default=20)
    p.add_argument("--n-min", dest="n_min", type=int, default=10)
    p.add_argument("--n-step", dest="n_step", type=int, default=1)
    p.add_argument("--format", choices=["csv", "svg"], default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_hdd_curve)

    p = sub.add_parser("weights", help="per-position token weights")
    p.add_argument("--index", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(fn=cmd_weights)

    return parser


def _apply_config_file(parser, argv):
    """--config key=value files provide defaults, flags still win."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    try:
        path = argv[i + 1]
    except IndexError:
        parser.error("--config needs a file argument")
    defaults = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            parser.error(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        defaults[key.strip().replace("-", "_")] = value.strip()
    parser.set_defaults(**defaults)
    # subparser defaults shadow the parent's, so push them down too
    for action in parser._subparsers._group_actions:
        for sub in action.choices.values():
            known = {a.dest for a in sub._actions}
            sub.set_defaults(**{k: v for k, v in defaults.items() if k in known})
            # a config value satisfies "required" for that flag
            for a in sub._actions:
                if a.dest in defaults:
                    a.required = False
    return argv[:i] + argv[i + 2:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv = _apply_config_file(parser, argv)
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CliError, CorpusError, SamplingError, StatsError, NumericsError,
            ProfilesError, FileNotFoundError) as e:
        print(f"lexdiv: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
