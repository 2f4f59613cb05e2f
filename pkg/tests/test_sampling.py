"""Sampling-method behavior: determinism, sample identity between random and
ordered-random, alternating partitions, and convergence to closed forms."""

import numpy as np
import pytest

import lexdiv.sampling as sampling_mod
from lexdiv.corpus import Corpus, Text
from lexdiv.indices import IndexKind, IndexSpec, hdd
from lexdiv.sampling import (
    MTLD_FACTOR_SWEEP,
    SamplingConfig,
    SamplingError,
    ScoreMatrix,
    alternating_sampling,
    ordered_random_sampling,
    parallel_sampling,
    parameter_sweep,
    random_sampling,
    rng_stream,
    run_method,
)

TTR_SPEC = IndexSpec(kind=IndexKind.TTR)
HDD_SPEC = IndexSpec(kind=IndexKind.HDD, n=42)
MATTR_SPEC = IndexSpec(kind=IndexKind.MATTR, n=25)


def capture_samples(monkeypatch):
    """Record every token sample handed to the scorer."""
    seen = []
    original = sampling_mod._score

    def spy(sample, spec, rng=None):
        seen.append(np.asarray(sample).copy())
        return original(sample, spec, rng=rng)

    monkeypatch.setattr(sampling_mod, "_score", spy)
    return seen


# ------------------------------------------------------------------ streams

def test_rng_stream_deterministic_and_keyed():
    a = rng_stream(1, "t", "random", 50).random(4)
    b = rng_stream(1, "t", "random", 50).random(4)
    assert np.array_equal(a, b)
    c = rng_stream(1, "t", "random", 51).random(4)
    assert not np.array_equal(a, c)
    d = rng_stream(2, "t", "random", 50).random(4)
    assert not np.array_equal(a, d)


# ----------------------------------------------------------------- parallel

def test_parallel_matches_manual_segments(reference):
    text = reference
    scores = parallel_sampling(text, 160, (1, 2, 4), TTR_SPEC)
    toks = text.tokens[:160]

    def seg_mean(d):
        seg = 160 // d
        parts = [toks[i * seg:(i + 1) * seg] for i in range(d)]
        return sum(len(set(p)) / seg for p in parts) / d

    assert scores == pytest.approx([seg_mean(1), seg_mean(2), seg_mean(4)])


def test_parallel_segment_lengths_floor():
    # 100 tokens, d=3 -> three 33-token segments, last token unused
    text = Text(id="t", tokens=tuple(f"x{i}" for i in range(100)))
    scores = parallel_sampling(text, 100, (3,), TTR_SPEC)
    assert scores == [1.0]


def test_parallel_rejects_short_text():
    text = Text(id="t", tokens=("a", "b", "c"))
    with pytest.raises(SamplingError, match="shorter than truncation"):
        parallel_sampling(text, 10, (1, 2), TTR_SPEC)


def test_parallel_rejects_segment_below_minimum(reference):
    with pytest.raises(SamplingError, match="minimum"):
        parallel_sampling(reference, 160, (1, 4), HDD_SPEC)


# ---------------------------------------------- random vs ordered random

def test_sample_identity_global_index(reference):
    """Random and ordered-random must analyze the same token samples, so
    any permutation-invariant index scores them identically per iteration."""
    for spec in (TTR_SPEC, HDD_SPEC):
        r = random_sampling(reference, 160, (80, 50), 25, 5, spec)
        o = ordered_random_sampling(reference, 160, (80, 50), 25, 5, spec)
        assert r == pytest.approx(o, abs=0.0)


def test_sample_identity_sequence_index_differs(reference):
    r = random_sampling(reference, 160, (80,), 30, 5, MATTR_SPEC)
    o = ordered_random_sampling(reference, 160, (80,), 30, 5, MATTR_SPEC)
    assert r != pytest.approx(o, abs=1e-9)


def test_ordered_samples_restore_text_order(monkeypatch, numbers_text):
    """On the 1..303 pseudo-text, every ordered-random sample must be
    strictly increasing, and the unordered sample must be its permutation."""
    seen = capture_samples(monkeypatch)
    ordered_random_sampling(numbers_text, 303, (151,), 5, 9, TTR_SPEC)
    ordered = [s for s in seen if len(s) == 151]
    assert len(ordered) == 5
    for s in ordered:
        assert np.all(np.diff(s) > 0)

    seen.clear()
    random_sampling(numbers_text, 303, (151,), 5, 9, TTR_SPEC)
    unordered = [s for s in seen if len(s) == 151]
    for r, o in zip(unordered, ordered):
        assert not np.all(np.diff(r) > 0)
        assert np.array_equal(np.sort(r), s_sorted := np.sort(o))
        assert np.array_equal(o, s_sorted)


def test_full_length_condition_scored_once(monkeypatch, reference):
    seen = capture_samples(monkeypatch)
    scores = random_sampling(reference, 160, (160,), 50, 5, TTR_SPEC)
    assert len(seen) == 1
    toks = reference.tokens[:160]
    assert scores[0] == pytest.approx(len(set(toks)) / 160)


def test_random_rejects_oversized_sample(reference):
    with pytest.raises(SamplingError, match="exceeds truncation"):
        random_sampling(reference, 160, (161,), 5, 5, TTR_SPEC)


def test_random_ttr_converges_to_hdd(reference):
    """The expected TTR of an m-token without-replacement sample is HD-D(m),
    so the Monte Carlo mean must approach it."""
    m = 60
    est = random_sampling(reference, 160, (m,), 4000, 13, TTR_SPEC)[0]
    exact = hdd(reference.tokens[:160], m)
    assert est == pytest.approx(exact, abs=2e-3)


# -------------------------------------------------------------- alternating

def test_alternating_partition_property(monkeypatch, numbers_text):
    """Each iteration's k samples must partition the used tokens, with one
    token per snippet in snippet order (hence strictly increasing here)."""
    k = 3
    seen = capture_samples(monkeypatch)
    alternating_sampling(numbers_text, 303, (k,), 2, 9, TTR_SPEC)
    assert len(seen) == 2 * k
    used = np.arange(303 // k * k)
    for it in range(2):
        group = seen[it * k:(it + 1) * k]
        assert sorted(len(g) for g in group) == [101, 101, 101]
        combined = np.sort(np.concatenate(group))
        assert np.array_equal(combined, used)
        for s in group:
            assert np.all(np.diff(s) > 0)  # order-preserving
            # one token per 3-token snippet
            assert np.array_equal(s // k, np.arange(101))


def test_alternating_per_k_flooring(monkeypatch, reference):
    # L=163, k=4 -> four 40-token samples from the first 160 tokens
    seen = capture_samples(monkeypatch)
    alternating_sampling(reference, 163, (4,), 1, 9, TTR_SPEC)
    assert [len(s) for s in seen] == [40, 40, 40, 40]


def test_alternating_k1_is_full_text(reference):
    scores = alternating_sampling(reference, 160, (1, 2), 5, 9, TTR_SPEC)
    toks = reference.tokens[:160]
    assert scores[0] == pytest.approx(len(set(toks)) / 160)


def test_alternating_rejects_sample_below_minimum(reference):
    with pytest.raises(SamplingError, match="minimum"):
        alternating_sampling(reference, 160, (1, 4), 5, 9, HDD_SPEC)


# ------------------------------------------------------------- run_method

def small_config(method, **kw):
    base = dict(truncate_to=280, conditions=(280, 140, 70), iterations=10,
                master_seed=3)
    if method in ("parallel", "alternating"):
        base["conditions"] = (1, 2, 4)
    base.update(kw)
    return SamplingConfig(method=method, **base)


@pytest.mark.parametrize("method", ["parallel", "random", "ordered_random",
                                    "alternating"])
def test_run_method_deterministic(small_corpus, method):
    config = small_config(method)
    a = run_method(small_corpus, config, TTR_SPEC)
    b = run_method(small_corpus, config, TTR_SPEC)
    assert np.array_equal(a.values, b.values)
    assert a.row_ids == b.row_ids
    assert a.col_labels == b.col_labels


def test_run_method_thread_independent(small_corpus):
    config = small_config("random")
    a = run_method(small_corpus, config, HDD_SPEC)
    b = run_method(small_corpus, config, HDD_SPEC, threads=2)
    assert np.array_equal(a.values, b.values)


def test_run_method_labels_are_sample_lengths(small_corpus):
    matrix = run_method(small_corpus, small_config("alternating"), TTR_SPEC)
    assert matrix.col_labels == ["280", "140", "70"]
    matrix = run_method(small_corpus, small_config("parallel"), TTR_SPEC)
    assert matrix.col_labels == ["280", "140", "70"]
    matrix = run_method(small_corpus, small_config("random"), TTR_SPEC)
    assert matrix.col_labels == ["280", "140", "70"]


def test_run_method_error_names_text(small_corpus):
    config = small_config("random", truncate_to=10_000)
    with pytest.raises(SamplingError, match="text 'z000'"):
        run_method(small_corpus, config, TTR_SPEC)


def test_config_validation():
    with pytest.raises(SamplingError, match="unknown method"):
        SamplingConfig(method="bogus", truncate_to=100)
    with pytest.raises(SamplingError, match="two conditions"):
        SamplingConfig(method="random", truncate_to=100, conditions=(50,))
    with pytest.raises(SamplingError, match="iterations"):
        SamplingConfig(method="random", truncate_to=100, iterations=0)


# -------------------------------------------------------------- ScoreMatrix

def test_score_matrix_csv_round_trip(tmp_path, small_corpus):
    matrix = run_method(small_corpus, small_config("random"), TTR_SPEC)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    matrix.to_long_csv(p1)
    matrix.to_long_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()  # byte-identical rewrites
    back = ScoreMatrix.from_long_csv(p1)
    assert back.row_ids == matrix.row_ids
    assert back.col_labels == matrix.col_labels
    assert np.array_equal(back.values, matrix.values)  # exact round trip


def test_score_matrix_shape_checks():
    with pytest.raises(SamplingError, match="shape"):
        ScoreMatrix(["a"], ["1", "2"], np.zeros((2, 2)))
    with pytest.raises(SamplingError, match="non-finite"):
        ScoreMatrix(["a"], ["1", "2"], np.array([[1.0, np.nan]]))


def test_from_long_csv_rejects_missing_cells(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("text_id,condition,score\na,1,0.5\na,2,0.6\nb,1,0.4\n")
    with pytest.raises(SamplingError, match="missing cell"):
        ScoreMatrix.from_long_csv(p)


# ---------------------------------------------------------- parameter sweep

def test_parameter_sweep_window_lengths(small_corpus):
    matrix = parameter_sweep(small_corpus, IndexKind.MATTR, [10, 20, 40])
    assert matrix.col_labels == ["10", "20", "40"]
    assert matrix.values.shape == (len(small_corpus), 3)
    # larger windows can only lower or keep the mean TTR of these texts
    assert np.all(matrix.values[:, 0] >= matrix.values[:, 2])


def test_parameter_sweep_mtld_default_factors(small_corpus):
    matrix = parameter_sweep(small_corpus, IndexKind.MTLD)
    assert matrix.col_labels == [str(f) for f in MTLD_FACTOR_SWEEP]
    assert MTLD_FACTOR_SWEEP[0] == 0.66 and MTLD_FACTOR_SWEEP[-1] == 0.75


def test_parameter_sweep_deterministic_for_stochastic_index(small_corpus):
    a = parameter_sweep(small_corpus, IndexKind.MTTRSS, [20, 40], master_seed=5)
    b = parameter_sweep(small_corpus, IndexKind.MTTRSS, [20, 40], master_seed=5)
    assert np.array_equal(a.values, b.values)
    c = parameter_sweep(small_corpus, IndexKind.MTTRSS, [20, 40], master_seed=6)
    assert not np.array_equal(a.values, c.values)


def test_parameter_sweep_rejects_unparameterized(small_corpus):
    with pytest.raises(SamplingError, match="no parameter"):
        parameter_sweep(small_corpus, IndexKind.TTR, [10, 20])


def test_parameter_sweep_rejects_oversized_window(small_corpus):
    too_big = small_corpus.min_text_length + 1
    with pytest.raises(SamplingError, match="exceed"):
        parameter_sweep(small_corpus, IndexKind.MATTR, [10, too_big])
