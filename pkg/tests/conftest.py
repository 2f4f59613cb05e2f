import numpy as np
import pytest

from lexdiv import Corpus, Text, reference_text


@pytest.fixture(scope="session")
def reference():
    """Bundled 165-token / 100-type fixture text."""
    return reference_text()


@pytest.fixture(scope="session")
def numbers_text():
    """Pseudo-text of the integers 1..303 as tokens (all types distinct)."""
    return Text(id="numbers", tokens=tuple(str(i) for i in range(1, 304)))


def make_zipf_corpus(n_texts, min_len, max_len, seed, zipf_a=1.4, vocab=2000):
    rng = np.random.default_rng(seed)
    texts = []
    for i in range(n_texts):
        length = int(rng.integers(min_len, max_len + 1))
        draws = rng.zipf(zipf_a, size=length) % vocab
        texts.append(Text(id=f"z{i:03d}", tokens=tuple(f"w{d}" for d in draws)))
    return Corpus(texts=tuple(texts))


@pytest.fixture(scope="session")
def small_corpus():
    """Eight medium-length synthetic texts for sampling tests."""
    return make_zipf_corpus(8, 320, 400, seed=7)
