import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vforge.embeddings import HttpEmbeddingProvider, StaticVectorProvider, cosine
from vforge.errors import DimensionMismatch, ProviderUnavailable

VEC_FILE = """\
alpha 1 0 0
beta 0 1 0
gamma 0 0 2
"""


@pytest.fixture
def provider(tmp_path):
    p = tmp_path / "vecs.txt"
    p.write_text(VEC_FILE)
    return StaticVectorProvider.load(p)


class TestStaticProvider:
    def test_single_word(self, provider):
        assert np.allclose(provider.embed("alpha"), [1, 0, 0])

    def test_mean_of_two(self, provider):
        assert np.allclose(provider.embed("alpha beta"), [0.5, 0.5, 0])

    def test_all_oov_is_zero(self, provider):
        assert np.allclose(provider.embed("unknown words"), 0.0)

    def test_oov_contributes_zero(self, provider):
        assert np.allclose(provider.embed("alpha unknown"), [0.5, 0, 0])

    def test_case_insensitive(self, provider):
        assert np.allclose(provider.embed("Alpha"), [1, 0, 0])

    def test_mixed_dims_rejected(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("a 1 2 3\nb 1 2\n")
        with pytest.raises(DimensionMismatch):
            StaticVectorProvider.load(p)

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("")
        with pytest.raises(ProviderUnavailable):
            StaticVectorProvider.load(p)

    def test_empty_text_rejected(self, provider):
        with pytest.raises(ValueError):
            provider.embed("")


class TestCosine:
    def test_identical_nonzero(self):
        assert cosine([1.0, 2.0], [1.0, 2.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_hand_value(self):
        assert cosine([1.0, 1.0], [1.0, 0.0]) == pytest.approx(1 / math.sqrt(2))

    def test_zero_vector_is_zero(self):
        assert cosine([0.0, 0.0], [1.0, 2.0]) == 0.0

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cosine([1.0], [1.0, 2.0])

    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=6),
           st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=6))
    def test_bounded_and_symmetric(self, u, v):
        n = min(len(u), len(v))
        u, v = u[:n], v[:n]
        c = cosine(u, v)
        assert -1.0 - 1e-12 <= c <= 1.0 + 1e-12
        assert c == pytest.approx(cosine(v, u))

    @given(st.floats(0.1, 100.0))
    def test_scale_invariant(self, scale):
        u, v = [1.0, 2.0, 3.0], [0.5, -1.0, 2.0]
        assert cosine([scale * x for x in u], v) == pytest.approx(cosine(u, v))


class TestHttpProvider:
    def test_unreachable_endpoint(self):
        p = HttpEmbeddingProvider("http://127.0.0.1:1/embed", dim=3, timeout=0.2)
        with pytest.raises(ProviderUnavailable):
            p.embed("text")
