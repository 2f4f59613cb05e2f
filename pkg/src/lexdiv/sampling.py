"""Length-sensitivity evaluation: parallel, random, ordered random, and
alternating token sampling, plus the parameter sweep.

Every (text, condition) pair gets its own RNG stream derived from the master
seed, so results are independent of evaluation order and thread count.  The
random and ordered-random methods deliberately share one stream per
(text, length): they must analyze identical token samples, differing only in
whether the sample keeps the permuted order or the original text order.
"""

from __future__ import annotations

import csv
import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Corpus, Text, tokens_of
from .indices import (
    GLOBAL_KINDS,
    IndexKind,
    IndexSpec,
    evaluate,
    min_tokens_required,
)

METHODS = ("parallel", "random", "ordered_random", "alternating")

DEFAULT_ITERATIONS = 10_000


class SamplingError(Exception):
    pass


@dataclass(frozen=True)
class SamplingConfig:
    method: str
    truncate_to: int
    conditions: tuple = (1, 2, 3, 4)  # divisors/k for parallel/alternating, lengths otherwise
    iterations: int = DEFAULT_ITERATIONS
    master_seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise SamplingError(f"unknown method {self.method!r}")
        if self.iterations < 1:
            raise SamplingError("iterations must be >= 1")
        if len(self.conditions) < 2:
            raise SamplingError("need at least two conditions")


@dataclass
class ScoreMatrix:
    """texts x conditions grid of scores plus run metadata."""

    row_ids: list
    col_labels: list
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.row_ids), len(self.col_labels)):
            raise SamplingError(
                f"shape mismatch: {self.values.shape} vs "
                f"{len(self.row_ids)} rows x {len(self.col_labels)} cols"
            )
        if not np.all(np.isfinite(self.values)):
            raise SamplingError("score matrix contains non-finite cells")

    def to_long_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["text_id", "condition", "score"])
            for i, rid in enumerate(self.row_ids):
                for j, col in enumerate(self.col_labels):
                    writer.writerow([rid, col, repr(float(self.values[i, j]))])

    @classmethod
    def from_long_csv(cls, path):
        rows: dict = {}
        cols: list = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header[:3] != ["text_id", "condition", "score"]:
                raise SamplingError(f"{path}: expected long-form score CSV")
            for rid, col, score in reader:
                if col not in cols:
                    cols.append(col)
                rows.setdefault(rid, {})[col] = float(score)
        row_ids = list(rows)
        values = np.full((len(row_ids), len(cols)), np.nan)
        for i, rid in enumerate(row_ids):
            for j, col in enumerate(cols):
                if col not in rows[rid]:
                    raise SamplingError(f"{path}: missing cell ({rid}, {col})")
                values[i, j] = rows[rid][col]
        return cls(row_ids, cols, values, meta={"source": str(path)})


def rng_stream(master_seed: int, *key) -> np.random.Generator:
    """Deterministic per-task generator keyed by (master_seed, *key).

    Uses SHA-256 of the repr so streams do not depend on Python's
    randomized string hashing.
    """
    digest = hashlib.sha256(repr((master_seed,) + key).encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:16], "big"))


def _encode(tokens: Sequence[str]) -> np.ndarray:
    """Map tokens to small ints; index values only depend on the pattern."""
    mapping: dict = {}
    out = np.empty(len(tokens), dtype=np.int64)
    for i, tok in enumerate(tokens):
        out[i] = mapping.setdefault(tok, len(mapping))
    return out


def _score(sample, spec, rng=None) -> float:
    value, _flags = evaluate(sample, spec, rng=rng)
    return value


def parallel_sampling(text, truncate_to: int, divisors, spec: IndexSpec,
                      master_seed: int = 0):
    """Score the L-token truncation against means over its d-way contiguous
    splits (segment length floor(L/d), trailing remainder dropped)."""
    toks = tokens_of(text)
    if truncate_to > len(toks):
        raise SamplingError(
            f"text shorter than truncation length ({len(toks)} < {truncate_to})"
        )
    toks = toks[:truncate_to]
    spec = spec.with_defaults()
    needed = min_tokens_required(spec)
    text_id = text.id if isinstance(text, Text) else None
    scores = []
    for d in divisors:
        seg_len = truncate_to // d
        if seg_len < needed:
            raise SamplingError(
                f"condition d={d}: segment length {seg_len} below the "
                f"{spec.kind.value} minimum of {needed}"
            )
        rng = rng_stream(master_seed, text_id, "parallel", d)
        segs = [toks[i * seg_len:(i + 1) * seg_len] for i in range(d)]
        scores.append(math.fsum(_score(s, spec, rng=rng) for s in segs) / d)
    return scores


def _random_family_row(
    text, truncate_to, lengths, iterations, spec, master_seed, ordered: bool
):
    toks = tokens_of(text)
    if truncate_to > len(toks):
        raise SamplingError(
            f"text shorter than truncation length ({len(toks)} < {truncate_to})"
        )
    arr = _encode(toks[:truncate_to])
    spec = spec.with_defaults()
    text_id = text.id if isinstance(text, Text) else None
    out = []
    for m in lengths:
        if m > truncate_to:
            raise SamplingError(f"sample length {m} exceeds truncation {truncate_to}")
        if m == truncate_to:
            # full extract: a single deterministic score, no permutation
            rng = rng_stream(master_seed, text_id, "random", m, "full")
            out.append(_score(arr, spec, rng=rng))
            continue
        # one stream per (text, length), shared by random and ordered random
        rng = rng_stream(master_seed, text_id, "random", m)
        total = 0.0
        comp = 0.0
        for _ in range(iterations):
            idx = rng.permutation(truncate_to)[:m]
            if ordered:
                idx = np.sort(idx)
            value = _score(arr[idx], spec, rng=rng)
            y = value - comp
            t = total + y
            comp = (t - total) - y
            total = t
        out.append(total / iterations)
    return out


def random_sampling(text, truncate_to, lengths, iterations, master_seed, spec):
    """Mean score of the first m tokens of fresh uniform permutations."""
    return _random_family_row(
        text, truncate_to, lengths, iterations, spec, master_seed, ordered=False
    )


def ordered_random_sampling(text, truncate_to, lengths, iterations, master_seed, spec):
    """Same samples as random_sampling, restored to original text order."""
    return _random_family_row(
        text, truncate_to, lengths, iterations, spec, master_seed, ordered=True
    )


def _alternating_samples(arr: np.ndarray, k: int, rng) -> list:
    """Split into k-token snippets, permute within each, deal out k samples."""
    n_snippets = len(arr) // k
    grid = arr[: n_snippets * k].reshape(n_snippets, k)
    perm = rng.permuted(np.tile(np.arange(k), (n_snippets, 1)), axis=1)
    rows = np.arange(n_snippets)[:, None]
    shuffled = grid[rows, perm]
    return [shuffled[:, j] for j in range(k)]


def alternating_sampling(text, truncate_to, k_values, iterations, master_seed, spec):
    """Generalized split-half: distribute one token per k-snippet into k
    order-preserving samples; average over samples and iterations.

    Each condition k uses the first floor(L/k)*k tokens so that all its
    samples have exactly floor(L/k) tokens.
    """
    toks = tokens_of(text)
    if truncate_to > len(toks):
        raise SamplingError(
            f"text shorter than truncation length ({len(toks)} < {truncate_to})"
        )
    arr = _encode(toks[:truncate_to])
    spec = spec.with_defaults()
    needed = min_tokens_required(spec)
    text_id = text.id if isinstance(text, Text) else None
    out = []
    for k in k_values:
        sample_len = truncate_to // k
        if sample_len < needed:
            raise SamplingError(
                f"condition k={k}: sample length {sample_len} below the "
                f"{spec.kind.value} minimum of {needed}"
            )
        if k == 1:
            rng = rng_stream(master_seed, text_id, "alternating", k, "full")
            out.append(_score(arr, spec, rng=rng))
            continue
        used = arr[: sample_len * k]
        rng = rng_stream(master_seed, text_id, "alternating", k)
        total = 0.0
        comp = 0.0
        for _ in range(iterations):
            for sample in _alternating_samples(used, k, rng):
                value = _score(sample, spec, rng=rng)
                y = value - comp
                t = total + y
                comp = (t - total) - y
                total = t
        out.append(total / (iterations * k))
    return out


def _condition_labels(config: SamplingConfig) -> list:
    if config.method == "parallel":
        return [str(config.truncate_to // d) for d in config.conditions]
    if config.method == "alternating":
        return [str(config.truncate_to // k) for k in config.conditions]
    return [str(m) for m in config.conditions]


def _row_for_text(args):
    text, config, spec = args
    try:
        if config.method == "parallel":
            return parallel_sampling(
                text, config.truncate_to, config.conditions, spec,
                config.master_seed,
            )
        if config.method == "random":
            return random_sampling(
                text, config.truncate_to, config.conditions, config.iterations,
                config.master_seed, spec,
            )
        if config.method == "ordered_random":
            return ordered_random_sampling(
                text, config.truncate_to, config.conditions, config.iterations,
                config.master_seed, spec,
            )
        return alternating_sampling(
            text, config.truncate_to, config.conditions, config.iterations,
            config.master_seed, spec,
        )
    except Exception as e:
        raise SamplingError(f"text {text.id!r}: {e}") from e


def run_method(
    corpus: Corpus, config: SamplingConfig, spec: IndexSpec, threads: int = 1
) -> ScoreMatrix:
    """Apply one evaluation method to every text: rows = texts,
    columns = conditions."""
    spec = spec.with_defaults()
    jobs = [(text, config, spec) for text in corpus]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_row_for_text, jobs, chunksize=1))
    else:
        rows = [_row_for_text(job) for job in jobs]
    return ScoreMatrix(
        row_ids=[t.id for t in corpus],
        col_labels=_condition_labels(config),
        values=np.array(rows, dtype=float),
        meta={
            "method": config.method,
            "index": spec.label(),
            "truncate_to": config.truncate_to,
            "conditions": list(config.conditions),
            "iterations": config.iterations,
            "master_seed": config.master_seed,
        },
    )


MTLD_FACTOR_SWEEP = tuple(round(0.66 + 0.01 * i, 2) for i in range(10))


def parameter_sweep(
    corpus: Corpus,
    kind: IndexKind,
    param_values: Optional[Sequence] = None,
    master_seed: int = 0,
    s: int = 10,
) -> ScoreMatrix:
    """Score untruncated texts for each parameter value (one column each).

    MTLD sweeps the TTR factor (default 0.66..0.75); the other indices
    sweep the sample/segment/window length.
    """
    kind = IndexKind(kind)
    if kind in (IndexKind.TTR, IndexKind.GUIRAUD_R, IndexKind.HERDAN_C,
                IndexKind.MAAS_A):
        raise SamplingError(f"{kind.value} has no parameter to sweep")
    if param_values is None:
        param_values = MTLD_FACTOR_SWEEP if kind is IndexKind.MTLD else None
    if param_values is None:
        raise SamplingError("param_values required for this index")

    if kind is not IndexKind.MTLD:
        shortest = corpus.min_text_length
        too_big = [p for p in param_values if p > shortest]
        if too_big and kind in (IndexKind.HDD, IndexKind.MATTR, IndexKind.MSTTR,
                                IndexKind.MTTRSS):
            bad = [t.id for t in corpus if len(t) < max(too_big)]
            raise SamplingError(
                f"parameter values {too_big} exceed the length of texts {bad}"
            )

    values = np.empty((len(corpus), len(param_values)))
    for j, p in enumerate(param_values):
        if kind is IndexKind.MTLD:
            spec = IndexSpec(kind, factor=float(p))
        else:
            spec = IndexSpec(kind, n=int(p), s=s)
        for i, text in enumerate(corpus):
            rng = rng_stream(master_seed, text.id, "sweep", str(p))
            values[i, j], _ = evaluate(text, spec, rng=rng)
    return ScoreMatrix(
        row_ids=[t.id for t in corpus],
        col_labels=[str(p) for p in param_values],
        values=values,
        meta={
            "method": "parameter_sweep",
            "index": kind.value,
            "param_values": [float(p) for p in param_values],
            "master_seed": master_seed,
        },
    )
