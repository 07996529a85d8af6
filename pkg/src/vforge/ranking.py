"""Ranking of mined candidate phrases into per-relation verbalizers.

Candidates are the length-L contiguous word windows of the mined phrases
(L = 3 by default, one word per mask). Four ranking scores are supported:

  frequency               N_c(r)
  frequency_specificity   N_c(r) * ln(N_R / N_r)
  similarity              cos(embed(candidate), embed(relation description))
  combined                frequency_specificity * similarity

plus a seeded uniform random pick from each label's pool. N_c(r) counts
distinct examples of label r whose mined phrase contains the candidate's
words as an in-order subsequence; N_r is the number of labels with a
nonzero count.
"""

from __future__ import annotations

import json
import math
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field

import numpy as np

from .corpus import LabelSet
from .embeddings import EmbeddingProvider, cosine
from .errors import EmptyPool

METHODS = ("frequency", "frequency_specificity", "similarity", "combined", "random_pick")


@dataclass(frozen=True)
class MinedPhrase:
    """One mined candidate phrase with its example's label (mine-stage output)."""

    example_id: str
    label: str
    words: tuple[str, ...]


@dataclass
class CandidateStats:
    phrase: str  # words joined by single spaces, the canonical key
    words: tuple[str, ...]
    per_label_example_count: dict[str, int] = field(default_factory=dict)
    # labels whose own examples produced this window (the label's pool)
    generated_labels: set[str] = field(default_factory=set)
    # (smallest contributing example id, window offset) for deterministic ties
    first_occurrence: tuple[str, int] = ("", 0)

    @property
    def label_presence_count(self) -> int:
        """N_r: number of labels in whose examples the candidate occurs."""
        return sum(1 for c in self.per_label_example_count.values() if c > 0)


@dataclass(frozen=True)
class RankedVerbalizer:
    label: str
    words: tuple[str, ...]
    score: float
    method: str


def is_subsequence(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    it = iter(haystack)
    return all(w in it for w in needle)


def collect_stats(mined: list[MinedPhrase], labelset: LabelSet,
                  mask_count: int = 3) -> dict[str, CandidateStats]:
    """Build the candidate pool and occurrence counts over the training split.

    Phrases shorter than mask_count contribute no windows. Counting is
    per distinct example, insensitive to example order; tie-break provenance
    uses example-id order.
    """
    if mask_count < 1:
        raise ValueError("mask_count must be >= 1")
    stats: dict[str, CandidateStats] = {}
    for m in mined:
        if m.label not in labelset.labels:
            raise ValueError(f"label {m.label!r} not in label set")
        for off in range(len(m.words) - mask_count + 1):
            window = m.words[off:off + mask_count]
            key = " ".join(window)
            st = stats.get(key)
            if st is None:
                st = CandidateStats(phrase=key, words=window,
                                    per_label_example_count={l: 0 for l in labelset.labels},
                                    first_occurrence=(m.example_id, off))
                stats[key] = st
            elif (m.example_id, off) < st.first_occurrence:
                st.first_occurrence = (m.example_id, off)
            st.generated_labels.add(m.label)
    # count distinct examples containing each candidate as an in-order subsequence
    for st in stats.values():
        counted: set[str] = set()
        for m in mined:
            if m.example_id in counted:
                continue
            if is_subsequence(st.words, m.words):
                st.per_label_example_count[m.label] += 1
                counted.add(m.example_id)
    for label in labelset.labels:
        if not any(label in st.generated_labels for st in stats.values()):
            raise EmptyPool(label)
    return stats


def score_frequency(stats: CandidateStats, label: str) -> float:
    return float(stats.per_label_example_count.get(label, 0))


def score_frequency_specificity(stats: CandidateStats, label: str,
                                labelset: LabelSet) -> float:
    n_c = stats.per_label_example_count.get(label, 0)
    n_r = stats.label_presence_count
    if n_c == 0:
        return 0.0
    return n_c * math.log(labelset.num_labels / n_r)


def embed(text: str, provider: EmbeddingProvider) -> np.ndarray:
    return provider.embed(text)


def score_similarity(c_vec: np.ndarray, r_vec: np.ndarray) -> float:
    return cosine(c_vec, r_vec)


def score_combined(stats: CandidateStats, label: str, labelset: LabelSet,
                   c_vec: np.ndarray, r_vec: np.ndarray) -> float:
    return score_frequency_specificity(stats, label, labelset) * score_similarity(c_vec, r_vec)


def _score(stats: CandidateStats, label: str, labelset: LabelSet, method: str,
           provider: EmbeddingProvider | None,
           desc_vecs: dict[str, np.ndarray]) -> float:
    if method == "frequency":
        return score_frequency(stats, label)
    if method == "frequency_specificity":
        return score_frequency_specificity(stats, label, labelset)
    if method in ("similarity", "combined"):
        c_vec = provider.embed(stats.phrase)
        sim = score_similarity(c_vec, desc_vecs[label])
        if method == "similarity":
            return sim
        return score_frequency_specificity(stats, label, labelset) * sim
    raise ValueError(f"unknown method {method!r}")


def rank_pool(stats: dict[str, CandidateStats], label: str, labelset: LabelSet,
              method: str, provider: EmbeddingProvider | None = None) -> list[tuple[float, CandidateStats]]:
    """Score the label's full pool, best first; ties by provenance then phrase."""
    pool = [st for st in stats.values() if label in st.generated_labels]
    if not pool:
        raise EmptyPool(label)
    desc_vecs = {}
    if method in ("similarity", "combined"):
        if provider is None:
            raise ValueError(f"method {method!r} needs an embedding provider")
        desc_vecs[label] = provider.embed(labelset.descriptions[label])
    scored = [(_score(st, label, labelset, method, provider, desc_vecs), st) for st in pool]
    scored.sort(key=lambda t: (-t[0], t[1].first_occurrence, t[1].phrase))
    return scored


def verbalizers_to_toml(verbs: dict[str, RankedVerbalizer], seed: int,
                        mask_count: int) -> str:
    """Config-document export consumed by the emitter, scorer, and trainer."""
    first = next(iter(verbs.values()))
    lines = [f"method = {json.dumps(first.method)}",
             f"seed = {seed}",
             f"mask_count = {mask_count}",
             ""]
    for label, v in verbs.items():
        lines.append(f"[labels.{json.dumps(label)}]")
        lines.append("words = [" + ", ".join(json.dumps(w) for w in v.words) + "]")
        lines.append(f"score = {v.score!r}")
        lines.append("")
    return "\n".join(lines)


def load_verbalizers(path) -> tuple[dict[str, RankedVerbalizer], dict]:
    with open(path, "rb") as f:
        doc = tomllib.load(f)
    meta = {"method": doc["method"], "seed": doc["seed"],
            "mask_count": doc["mask_count"]}
    verbs = {
        label: RankedVerbalizer(label=label, words=tuple(entry["words"]),
                                score=float(entry["score"]), method=doc["method"])
        for label, entry in doc["labels"].items()
    }
    return verbs, meta


def select_verbalizers(stats: dict[str, CandidateStats], labelset: LabelSet,
                       method: str, seed: int = 0,
                       provider: EmbeddingProvider | None = None) -> dict[str, RankedVerbalizer]:
    """Pick one verbalizer per label; deterministic given (method, seed)."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    out: dict[str, RankedVerbalizer] = {}
    rng = np.random.default_rng(seed)
    for label in labelset.labels:
        if method == "random_pick":
            pool = sorted(st.phrase for st in stats.values() if label in st.generated_labels)
            if not pool:
                raise EmptyPool(label)
            pick = pool[int(rng.integers(len(pool)))]
            out[label] = RankedVerbalizer(label=label, words=stats[pick].words,
                                          score=0.0, method=method)
        else:
            score, best = rank_pool(stats, label, labelset, method, provider)[0]
            out[label] = RankedVerbalizer(label=label, words=best.words,
                                          score=score, method=method)
    return out
