import numpy as np

from vforge.embeddings import StaticVectorProvider
from vforge.paths import mine_candidates
from vforge.ranking import MinedPhrase, collect_stats, select_verbalizers
from vforge.synthetic import (NOISE_VOCAB, PLANTED, generate_corpus,
                              oracle_mask_vectors, write_static_vectors)


def test_deterministic():
    a = generate_corpus(seed=4)
    b = generate_corpus(seed=4)
    assert a == b
    assert a != generate_corpus(seed=5)


def test_counts_and_validity(chemprot):
    split = generate_corpus(num_per_label=30)
    assert len(split) == 180
    from vforge.corpus import label_histogram
    assert set(label_histogram(split, chemprot).values()) == {30}


def test_planted_phrases_minable(chemprot):
    split = generate_corpus(num_per_label=20, noise_rate=0.1)
    planted_hits = {l: 0 for l in chemprot.labels}
    for ex in split.examples:
        [phrase] = mine_candidates(ex)
        if phrase.words == PLANTED[ex.label]:
            planted_hits[ex.label] += 1
        else:
            assert set(phrase.words) <= set(NOISE_VOCAB)
    for l in chemprot.labels:
        assert planted_hits[l] == 18  # 10% noise


def test_vectors_support_all_methods(tmp_path, chemprot):
    split = generate_corpus(num_per_label=20)
    vec_path = tmp_path / "v.txt"
    write_static_vectors(vec_path)
    provider = StaticVectorProvider.load(vec_path)
    mined = [MinedPhrase(ex.id, ex.label, mine_candidates(ex)[0].words)
             for ex in split.examples]
    stats = collect_stats(mined, chemprot)
    for method in ("frequency", "frequency_specificity", "combined"):
        verbs = select_verbalizers(stats, chemprot, method, provider=provider)
        for label in chemprot.labels:
            assert verbs[label].words == PLANTED[label], (method, label)


def test_oracle_mask_vectors(tmp_path, chemprot):
    split = generate_corpus(name="test", num_per_label=3)
    vec_path = tmp_path / "v.txt"
    write_static_vectors(vec_path)
    provider = StaticVectorProvider.load(vec_path)
    recs = oracle_mask_vectors(split, PLANTED, provider)
    assert len(recs) == len(split)
    assert all(r.vectors.shape == (3, 8) for r in recs)
    assert not np.allclose(recs[0].vectors, 0.0)
