"""Acceptance gate: one test per criterion, each ending with a single
PASS/FAIL line on stdout.

Criterion 5 needs the third-party sample text (TaaledSample.txt).  It is not
redistributable with this package; drop it into tests/data/ or point
LEXDIV_TAALED_SAMPLE at it to run the pinned comparison.
"""

import itertools
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from lexdiv import (
    IndexKind,
    IndexSpec,
    SamplingConfig,
    Text,
    gini_simpson,
    guiraud_r,
    hdd,
    herdan_c,
    hdd_presence_curves,
    icc_2_1,
    maas_a,
    mattr,
    msttr,
    mtld,
    ordered_random_sampling,
    random_sampling,
    alternating_sampling,
    reference_text,
    rm_anova,
    run_method,
    spearman_brown,
    steiger_t,
    token_weights,
    ttr,
    zou_ci,
)
from lexdiv.numerics import hypergeom_presence, t_sf_two_sided

from .conftest import make_zipf_corpus
from .test_stats import (
    ANOVA_ETA,
    ANOVA_F,
    ANOVA_P,
    FIXTURE,
    ICC_AGREEMENT,
    ICC_AGREEMENT_CI,
    ICC_CONSISTENCY,
    ICC_CONSISTENCY_CI,
    _solve_r_between,
)


def _announce(line):
    # bypass pytest's capture so every verdict lands in the run log
    print(line)
    print(line, file=sys.__stdout__)


@contextmanager
def verdict(number, description):
    try:
        yield
    except BaseException:
        _announce(f"ACCEPTANCE {number}: FAIL — {description}")
        raise
    _announce(f"ACCEPTANCE {number}: PASS — {description}")


def test_criterion_1_reference_text_pinning():
    with verdict(1, "reference 165-token text reproduces all pinned index "
                    "values in under 1 s"):
        start = time.perf_counter()
        text = reference_text()
        assert len(text.tokens) == 165
        assert len(set(text.tokens)) == 100
        assert ttr(text) == pytest.approx(0.6061, abs=5e-5)
        assert guiraud_r(text) == pytest.approx(7.7850, abs=5e-4)
        assert herdan_c(text) == pytest.approx(0.9019, abs=5e-5)
        assert maas_a(text) == pytest.approx(0.1386, abs=5e-4)
        assert maas_a(text, "base10_a_squared") == pytest.approx(0.0442,
                                                                 abs=5e-4)
        assert hdd(text, 42) == pytest.approx(0.8278, abs=5e-5)
        assert mattr(text, 50) == pytest.approx(0.7993, abs=5e-5)
        assert msttr(text, 50) == pytest.approx(0.8133, abs=5e-5)
        assert mtld(text, 0.72) == pytest.approx(77.8337, abs=1e-3)
        assert time.perf_counter() - start < 1.0


def test_criterion_2_hapax_sequences_and_weights():
    with verdict(2, "MATTR(4) hapax-position scores and window-membership "
                    "weights reproduced"):
        expected = [0.286, 0.321, 0.357, 0.393, 0.393, 0.393, 0.393,
                    0.357, 0.321, 0.286]
        for pos, want in enumerate(expected):
            toks = ["b"] * 10
            toks[pos] = "a"
            assert mattr(toks, 4) == pytest.approx(want, abs=1e-3)
        assert token_weights(IndexKind.MATTR, 10, 4) == [
            1.0, 2.0, 3.0, 4.0, 4.0, 4.0, 4.0, 3.0, 2.0, 1.0
        ]


def test_criterion_3_hdd_oracle_equivalence():
    with verdict(3, "HD-D equals all-subsets enumeration (1e-12) and "
                    "HD-D(2) = (1 + Gini-Simpson)/2 (1e-12)"):
        rng = np.random.default_rng(31)
        for _ in range(200):
            big_n = int(rng.integers(1, 11))
            toks = [f"w{v}" for v in rng.integers(0, 4, size=big_n)]
            for n in range(1, min(5, big_n) + 1):
                total = 0
                count = 0
                for combo in itertools.combinations(toks, n):
                    total += len(set(combo))
                    count += 1
                assert hdd(toks, n) == pytest.approx(total / (count * n),
                                                     abs=1e-12)
        for _ in range(200):
            big_n = int(rng.integers(2, 51))
            toks = [f"w{v}" for v in rng.integers(0, 10, size=big_n)]
            assert hdd(toks, 2) == pytest.approx(
                (1.0 + gini_simpson(toks)) / 2.0, abs=1e-12
            )


def test_criterion_4_presence_curve_properties():
    with verdict(4, "presence curves: hapax linearity, monotonicity, and "
                    "certainty at n = N"):
        for n in range(10, 301):
            assert hypergeom_presence(300, 1, n) == n / 300
        f_values, n_values, grid = hdd_presence_curves(
            n_tokens=300, f_values=range(1, 21), n_values=range(10, 301)
        )
        assert np.all(np.diff(grid, axis=1) >= 0.0)
        assert np.all(np.diff(grid, axis=0) >= 0.0)
        assert np.all(grid[:, -1] == 1.0)


TAALED_EXPECTED = {
    # sample length -> (random HDD, random MATTR, ordered MATTR)
    "random_ordered": {
        140: (0.871083, 0.850942, 0.840838),
        93: (0.871010, 0.851485, 0.850711),
        70: (0.871239, 0.851522, 0.850743),
    },
    # segment length -> (HDD, MATTR)
    "alternating": {
        140: (0.870906, 0.839625),
        93: (0.870912, 0.850383),
        70: (0.871491, 0.850603),
    },
}


def _taaled_text():
    env = os.environ.get("LEXDIV_TAALED_SAMPLE")
    candidates = [Path(env)] if env else []
    candidates.append(Path(__file__).parent / "data" / "TaaledSample.txt")
    for path in candidates:
        if path.is_file():
            toks = tuple(path.read_text(encoding="utf-8").lower().split())
            return Text(id="taaled_sample", tokens=toks)
    return None


def test_criterion_5_stochastic_pinning_on_external_sample():
    with verdict(5, "5,000-iteration random/ordered/alternating estimates "
                    "match the reference sample-text values (2e-3)"):
        text = _taaled_text()
        if text is None:
            pytest.fail(
                "TaaledSample.txt is unavailable in this environment (not "
                "redistributable, no network). Place it at tests/data/"
                "TaaledSample.txt or set LEXDIV_TAALED_SAMPLE to run this "
                "pinned comparison."
            )
        start = time.perf_counter()
        big_l = len(text.tokens)
        lengths = (big_l // 2, big_l // 3, big_l // 4)
        assert lengths == (140, 93, 70)
        hdd_spec = IndexSpec(kind=IndexKind.HDD, n=42)
        mattr_spec = IndexSpec(kind=IndexKind.MATTR, n=50)
        iters = 5000
        r_hdd = random_sampling(text, big_l, lengths, iters, 101, hdd_spec)
        r_mattr = random_sampling(text, big_l, lengths, iters, 101, mattr_spec)
        o_mattr = ordered_random_sampling(text, big_l, lengths, iters, 101,
                                          mattr_spec)
        for j, m in enumerate(lengths):
            want_hdd, want_rm, want_om = TAALED_EXPECTED["random_ordered"][m]
            assert r_hdd[j] == pytest.approx(want_hdd, abs=2e-3), m
            assert r_mattr[j] == pytest.approx(want_rm, abs=2e-3), m
            assert o_mattr[j] == pytest.approx(want_om, abs=2e-3), m
        a_hdd = alternating_sampling(text, big_l, (2, 3, 4), iters, 101,
                                     hdd_spec)
        a_mattr = alternating_sampling(text, big_l, (2, 3, 4), iters, 101,
                                       mattr_spec)
        for j, m in enumerate(lengths):
            want_hdd, want_mattr = TAALED_EXPECTED["alternating"][m]
            assert a_hdd[j] == pytest.approx(want_hdd, abs=2e-3), m
            assert a_mattr[j] == pytest.approx(want_mattr, abs=2e-3), m
        assert time.perf_counter() - start < 60.0


def test_criterion_6_order_invariance():
    with verdict(6, "random and ordered-random agree per iteration for "
                    "order-free indices; MATTR differs"):
        text = reference_text()
        lengths = (80, 50)
        for kind in (IndexKind.HDD, IndexKind.TTR, IndexKind.GUIRAUD_R,
                     IndexKind.HERDAN_C, IndexKind.MAAS_A):
            spec = IndexSpec(kind=kind, n=42)
            r = random_sampling(text, 160, lengths, 30, 5, spec)
            o = ordered_random_sampling(text, 160, lengths, 30, 5, spec)
            # identical per-iteration scores make the means exactly equal
            assert r == o, kind
        mattr_spec = IndexSpec(kind=IndexKind.MATTR, n=25)
        r = random_sampling(text, 160, (80,), 30, 5, mattr_spec)
        o = ordered_random_sampling(text, 160, (80,), 30, 5, mattr_spec)
        assert r[0] != o[0]


def test_criterion_7_statistics_oracles():
    with verdict(7, "ICC / RM-ANOVA / Williams t / Zou CI match reference "
                    "values; Spearman-Brown(0.69) = 0.8166"):
        res = icc_2_1(FIXTURE, mode="agreement")
        assert res.estimate == pytest.approx(ICC_AGREEMENT, abs=1e-6)
        assert res.ci_low == pytest.approx(ICC_AGREEMENT_CI[0], abs=1e-6)
        assert res.ci_high == pytest.approx(ICC_AGREEMENT_CI[1], abs=1e-6)
        res = icc_2_1(FIXTURE, mode="consistency")
        assert res.estimate == pytest.approx(ICC_CONSISTENCY, abs=1e-6)
        assert res.ci_low == pytest.approx(ICC_CONSISTENCY_CI[0], abs=1e-6)
        assert res.ci_high == pytest.approx(ICC_CONSISTENCY_CI[1], abs=1e-6)

        anova = rm_anova(FIXTURE)
        assert anova.F == pytest.approx(ANOVA_F, abs=1e-6)
        assert anova.p == pytest.approx(ANOVA_P, abs=1e-4)
        assert anova.partial_eta_sq == pytest.approx(ANOVA_ETA, abs=1e-6)

        # reference comparison: r = .320 vs .242 with n = 188 gives
        # t(185) = 3.18, p = .0017, CI (.029, .127)
        r_between = _solve_r_between(0.320, 0.242, 188, target_t=3.18)
        t, df, p = steiger_t(0.320, 0.242, r_between, 188)
        assert df == 185
        assert p == pytest.approx(0.0017, abs=1e-4)
        assert t_sf_two_sided(3.18, 185) == pytest.approx(0.0017, abs=1e-4)
        low, high = zou_ci(0.320, 0.242, r_between, 188)
        assert low == pytest.approx(0.029, abs=3e-3)
        assert high == pytest.approx(0.127, abs=3e-3)

        assert spearman_brown(0.69) == pytest.approx(0.8166, abs=5e-4)


def test_criterion_8_synthetic_length_sensitivity_split():
    with verdict(8, "synthetic Zipfian corpus: agreement ICC >= 0.999 for "
                    "HD-D and <= 0.5 for TTR under random sampling"):
        start = time.perf_counter()
        corpus = make_zipf_corpus(100, 300, 800, seed=42)
        config = SamplingConfig(
            method="random",
            truncate_to=300,
            conditions=(240, 120, 80, 60),
            iterations=10_000,
            master_seed=101,
        )
        hdd_icc = icc_2_1(
            run_method(corpus, config, IndexSpec(kind=IndexKind.HDD)),
            mode="agreement",
        ).estimate
        ttr_icc = icc_2_1(
            run_method(corpus, config, IndexSpec(kind=IndexKind.TTR)),
            mode="agreement",
        ).estimate
        elapsed = time.perf_counter() - start
        print(f"  HD-D ICC = {hdd_icc:.6f}, TTR ICC = {ttr_icc:.6f} "
              f"({elapsed:.0f}s)")
        assert hdd_icc >= 0.999
        assert ttr_icc <= 0.5
        assert elapsed < 600.0


def test_criterion_9_byte_identical_determinism(tmp_path, small_corpus):
    with verdict(9, "identical config and seed give byte-identical score "
                    "CSVs regardless of thread count"):
        config = SamplingConfig(
            method="random", truncate_to=280, conditions=(280, 140, 93, 70),
            iterations=40, master_seed=101,
        )
        spec = IndexSpec(kind=IndexKind.HDD)
        paths = []
        for name, threads in (("a", 1), ("b", 1), ("c", 3)):
            matrix = run_method(small_corpus, config, spec, threads=threads)
            path = tmp_path / f"{name}.csv"
            matrix.to_long_csv(path)
            paths.append(path)
        blob = paths[0].read_bytes()
        assert paths[1].read_bytes() == blob
        assert paths[2].read_bytes() == blob
