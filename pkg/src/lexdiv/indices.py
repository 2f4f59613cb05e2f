"""The ten lexical-diversity indices, per-token weights, and the IndexSpec API.

Index functions accept either a ``corpus.Text`` or any sequence of hashable
tokens.  All of them are deterministic given their parameters; the two
stochastic indices (MTTRRS, MTTRSS) additionally take a seed or an explicit
numpy Generator.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .corpus import tokens_of
from .numerics import hypergeom_presence


class IndexError_(Exception):
    pass


class IndexKind(str, enum.Enum):
    TTR = "ttr"
    GUIRAUD_R = "guiraud"
    HERDAN_C = "herdan"
    MAAS_A = "maas"
    MTTRRS = "mttrrs"
    HDD = "hdd"
    MATTR = "mattr"
    MSTTR = "msttr"
    MTTRSS = "mttrss"
    MTLD = "mtld"


# Indices invariant under any permutation of the tokens.
GLOBAL_KINDS = frozenset(
    {IndexKind.TTR, IndexKind.GUIRAUD_R, IndexKind.HERDAN_C, IndexKind.MAAS_A,
     IndexKind.HDD}
)

# Indices whose parameter n bounds the usable text length.
LENGTH_BOUND_KINDS = frozenset(
    {IndexKind.HDD, IndexKind.MATTR, IndexKind.MSTTR, IndexKind.MTTRSS}
)

MAAS_VARIANTS = ("natural_log_a", "base10_a_squared")

_DEFAULT_N = {
    IndexKind.HDD: 42,
    IndexKind.MATTR: 50,
    IndexKind.MSTTR: 50,
    IndexKind.MTTRRS: 50,
    IndexKind.MTTRSS: 50,
}


@dataclass(frozen=True)
class IndexSpec:
    """Everything needed to score a text deterministically (plus a seed for
    the stochastic indices)."""

    kind: IndexKind
    n: Optional[int] = None
    s: Optional[int] = None
    factor: Optional[float] = None
    maas_variant: str = "natural_log_a"
    seed: Optional[int] = None

    def with_defaults(self) -> "IndexSpec":
        spec = self
        if spec.kind in _DEFAULT_N and spec.n is None:
            spec = replace(spec, n=_DEFAULT_N[spec.kind])
        if spec.kind in (IndexKind.MTTRRS, IndexKind.MTTRSS) and spec.s is None:
            spec = replace(spec, s=10)
        if spec.kind is IndexKind.MTLD and spec.factor is None:
            spec = replace(spec, factor=0.72)
        return spec

    def validate(self):
        if self.n is not None and self.n < 1:
            raise IndexError_(f"n must be >= 1, got {self.n}")
        if self.s is not None and self.s < 1:
            raise IndexError_(f"s must be >= 1, got {self.s}")
        if self.factor is not None and not (0.0 < self.factor < 1.0):
            raise IndexError_(f"factor must be in (0, 1), got {self.factor}")
        if self.maas_variant not in MAAS_VARIANTS:
            raise IndexError_(f"unknown maas variant {self.maas_variant!r}")

    def label(self) -> str:
        kind = self.kind.value
        if self.kind is IndexKind.MTLD:
            return f"{kind}[factor={self.factor}]"
        if self.kind in (IndexKind.MTTRRS, IndexKind.MTTRSS):
            return f"{kind}[n={self.n},s={self.s}]"
        if self.kind in _DEFAULT_N:
            return f"{kind}[n={self.n}]"
        return kind


@dataclass(frozen=True)
class FrequencySpectrum:
    counts: dict
    n_tokens: int
    n_types: int


def spectrum(text) -> FrequencySpectrum:
    toks = tokens_of(text)
    if len(toks) < 1:
        raise IndexError_("empty token sequence")
    counts = Counter(toks)
    return FrequencySpectrum(dict(counts), len(toks), len(counts))


def _counts(toks):
    if isinstance(toks, np.ndarray):
        return Counter(toks.tolist())
    return Counter(toks)


def _n_types(toks) -> int:
    if isinstance(toks, np.ndarray):
        return int(np.unique(toks).size)
    return len(set(toks))


def ttr(text) -> float:
    toks = tokens_of(text)
    if len(toks) < 1:
        raise IndexError_("empty token sequence")
    return _n_types(toks) / len(toks)


def guiraud_r(text) -> float:
    toks = tokens_of(text)
    if len(toks) < 1:
        raise IndexError_("empty token sequence")
    return _n_types(toks) / math.sqrt(len(toks))


def herdan_c(text) -> float:
    toks = tokens_of(text)
    n = len(toks)
    if n < 2:
        raise IndexError_("undefined for single token")
    v = _n_types(toks)
    if v == 1:
        return 0.0
    return math.log(v) / math.log(n)


def maas_a(text, variant: str = "natural_log_a") -> float:
    toks = tokens_of(text)
    n = len(toks)
    if n < 2:
        raise IndexError_("undefined for single token")
    v = _n_types(toks)
    if variant == "natural_log_a":
        return math.sqrt((math.log(n) - math.log(v)) / math.log(n) ** 2)
    if variant == "base10_a_squared":
        return (math.log10(n) - math.log10(v)) / math.log10(n) ** 2
    raise IndexError_(f"unknown maas variant {variant!r}")


@lru_cache(maxsize=1 << 18)
def _presence(n_tokens: int, freq: int, sample: int) -> float:
    # hot path of hdd(); cached because sampling harnesses re-query the
    # same (N, f, n) triples millions of times
    return hypergeom_presence(n_tokens, freq, sample)


def hdd(text, n: int) -> float:
    """Expected TTR of a size-n sample under without-replacement sampling."""
    toks = tokens_of(text)
    big_n = len(toks)
    if n < 1:
        raise IndexError_(f"n must be >= 1, got {n}")
    if n > big_n:
        raise IndexError_(f"sample exceeds text length ({n} > {big_n})")
    # fsum keeps the result independent of token (hence summation) order
    total = math.fsum(
        n_with_freq * _presence(big_n, freq, n)
        for freq, n_with_freq in Counter(_counts(toks).values()).items()
    )
    return total / n


def gini_simpson(text) -> float:
    """Probability that two tokens drawn without replacement differ in type."""
    toks = tokens_of(text)
    big_n = len(toks)
    if big_n < 2:
        raise IndexError_("needs at least two tokens")
    same = sum(f * (f - 1) for f in _counts(toks).values())
    return 1.0 - same / (big_n * (big_n - 1))


def _as_generator(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    if seed_or_rng is None:
        raise IndexError_("stochastic index needs a seed or Generator")
    return np.random.default_rng(seed_or_rng)


def mttrrs(text, n: int = 50, s: int = 10, seed=None) -> float:
    """Mean TTR over s with-replacement samples of n tokens."""
    toks = tokens_of(text)
    if n < 1 or s < 1:
        raise IndexError_("n and s must be >= 1")
    rng = _as_generator(seed)
    arr = np.asarray(toks)
    total = 0
    for _ in range(s):
        draw = arr[rng.integers(0, len(arr), size=n)]
        total += np.unique(draw).size
    return total / (s * n)


def mattr(text, n: int) -> float:
    """Mean TTR over all length-n windows advancing one token at a time."""
    toks = tokens_of(text)
    big_n = len(toks)
    if n < 1:
        raise IndexError_(f"n must be >= 1, got {n}")
    if n > big_n:
        raise IndexError_(f"window exceeds text length ({n} > {big_n})")
    if isinstance(toks, np.ndarray):
        toks = toks.tolist()
    counts = Counter(toks[:n])
    distinct = len(counts)
    total = float(distinct)
    comp = 0.0  # Kahan compensation: window order must not matter
    for i in range(big_n - n):
        out_tok, in_tok = toks[i], toks[i + n]
        if out_tok != in_tok:
            c = counts[out_tok] - 1
            if c == 0:
                del counts[out_tok]
                distinct -= 1
            else:
                counts[out_tok] = c
            if in_tok in counts:
                counts[in_tok] += 1
            else:
                counts[in_tok] = 1
                distinct += 1
        y = distinct - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total / (n * (big_n - n + 1))


def msttr(text, n: int) -> float:
    """Mean TTR over disjoint consecutive length-n segments, remainder dropped."""
    toks = tokens_of(text)
    big_n = len(toks)
    if n < 1:
        raise IndexError_(f"n must be >= 1, got {n}")
    if n > big_n:
        raise IndexError_(f"no complete segment ({n} > {big_n})")
    n_segments = big_n // n
    total = math.fsum(
        _n_types(toks[i * n:(i + 1) * n]) for i in range(n_segments)
    )
    return total / (n_segments * n)


def mttrss(text, n: int = 50, s: int = 10, seed=None) -> float:
    """Mean TTR over s contiguous segments with uniformly drawn starts."""
    toks = tokens_of(text)
    big_n = len(toks)
    if n < 1 or s < 1:
        raise IndexError_("n and s must be >= 1")
    if n > big_n:
        raise IndexError_(f"segment exceeds text length ({n} > {big_n})")
    rng = _as_generator(seed)
    starts = rng.integers(0, big_n - n + 1, size=s)
    total = sum(_n_types(toks[start:start + n]) for start in starts)
    return total / (s * n)


def _mtld_pass(toks, factor: float, min_segment: int) -> float:
    factors = 0.0
    seen = set()
    count = 0
    running_ttr = 1.0
    for tok in toks:
        count += 1
        seen.add(tok)
        running_ttr = len(seen) / count
        if count >= min_segment and running_ttr < factor:
            factors += 1.0
            seen.clear()
            count = 0
            running_ttr = 1.0
    if count > 0:
        factors += (1.0 - running_ttr) / (1.0 - factor)
    return factors


def mtld(text, factor: float = 0.72, min_segment: int = 1) -> float:
    score, _ = mtld_detailed(text, factor, min_segment)
    return score


def mtld_detailed(text, factor: float = 0.72, min_segment: int = 1):
    """Bidirectional MTLD.  Returns ``(score, flags)``.

    The forward pass grows a segment token by token and counts a full
    factor each time the running TTR drops below ``factor``; the tail
    contributes a partial factor of (1 - TTR) / (1 - factor).  The same is
    done on the reversed sequence and the two lengths are averaged.  When
    the TTR never drops in either direction the score is the text length,
    flagged ``undefined_factors``.

    ``min_segment`` > 1 delays the threshold check until a segment holds
    that many tokens (block-start variant).
    """
    toks = tokens_of(text)
    if len(toks) < 1:
        raise IndexError_("empty token sequence")
    if not (0.0 < factor < 1.0):
        raise IndexError_(f"factor must be in (0, 1), got {factor}")
    if isinstance(toks, np.ndarray):
        toks = toks.tolist()
    fwd = _mtld_pass(toks, factor, min_segment)
    bwd = _mtld_pass(toks[::-1], factor, min_segment)
    flags = ()
    scores = []
    for factors in (fwd, bwd):
        if factors == 0.0:
            flags = ("undefined_factors",)
            scores.append(float(len(toks)))
        else:
            scores.append(len(toks) / factors)
    return (scores[0] + scores[1]) / 2.0, flags


def token_weights(kind: IndexKind, n_tokens: int, n: Optional[int] = None):
    """Per-position weight of each token in an index score.

    MATTR weights are window-membership counts; MTTRSS weights are segment
    selection probabilities; MSTTR is a 0/1 mask for the complete segments;
    TTR is uniform.
    """
    kind = IndexKind(kind)
    big_n = n_tokens
    if kind is IndexKind.TTR:
        return [1.0 / big_n] * big_n
    if n is None:
        raise IndexError_(f"{kind.value} weights need a segment length n")
    if n > big_n:
        raise IndexError_(f"n exceeds text length ({n} > {big_n})")
    if kind is IndexKind.MATTR:
        return [
            float(min(i, n, big_n - i + 1, big_n - n + 1))
            for i in range(1, big_n + 1)
        ]
    if kind is IndexKind.MTTRSS:
        denom = big_n - n + 1
        return [
            min(i, n, big_n - n + 1, big_n - i + 1) / denom
            for i in range(1, big_n + 1)
        ]
    if kind is IndexKind.MSTTR:
        cutoff = (big_n // n) * n
        return [1.0 if i <= cutoff else 0.0 for i in range(1, big_n + 1)]
    raise IndexError_(f"no weight definition for {kind.value}")


def evaluate(text, spec: IndexSpec, rng=None):
    """Score a text under a spec.  Returns ``(score, flags)``.

    ``rng`` overrides ``spec.seed`` for the stochastic indices, which lets
    a sampling harness hand each evaluation its own derived stream.
    """
    spec = spec.with_defaults()
    spec.validate()
    kind = spec.kind
    if kind is IndexKind.TTR:
        return ttr(text), ()
    if kind is IndexKind.GUIRAUD_R:
        return guiraud_r(text), ()
    if kind is IndexKind.HERDAN_C:
        return herdan_c(text), ()
    if kind is IndexKind.MAAS_A:
        return maas_a(text, spec.maas_variant), ()
    if kind is IndexKind.HDD:
        return hdd(text, spec.n), ()
    if kind is IndexKind.MATTR:
        return mattr(text, spec.n), ()
    if kind is IndexKind.MSTTR:
        return msttr(text, spec.n), ()
    if kind is IndexKind.MTLD:
        return mtld_detailed(text, spec.factor)
    if kind is IndexKind.MTTRRS:
        return mttrrs(text, spec.n, spec.s, rng if rng is not None else spec.seed), ()
    if kind is IndexKind.MTTRSS:
        return mttrss(text, spec.n, spec.s, rng if rng is not None else spec.seed), ()
    raise IndexError_(f"unknown index kind {kind!r}")


def min_tokens_required(spec: IndexSpec) -> int:
    """Smallest text length the index spec can score."""
    spec = spec.with_defaults()
    if spec.kind in LENGTH_BOUND_KINDS:
        return spec.n
    if spec.kind in (IndexKind.HERDAN_C, IndexKind.MAAS_A):
        return 2
    return 1
