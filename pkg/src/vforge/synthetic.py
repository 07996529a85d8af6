"""Deterministic synthetic mini-corpus with planted label-word phrases.

Each example is a chain-parsed sentence `<e1> w1 w2 w3 <e2> .` with optional
distractor tokens hanging off the chain, so both the local and the global
shortest path run through w1 w2 w3. Around 10% of examples carry a random
noise triple instead of the label's planted phrase. Used by tests and demos
since the real dataset cannot be redistributed.
"""

from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

from .corpus import (ROOT_HEAD, AnnotatedExample, CorpusSplit, EntitySpan,
                     LabelSet, Token, default_chemprot_labelset)
from .scoring import MaskVectorRecord

PLANTED: dict[str, tuple[str, str, str]] = {
    "CPR:3": ("markedly", "activates", "expression"),
    "CPR:4": ("potently", "inhibits", "activity"),
    "CPR:5": ("behaves", "agonist", "toward"),
    "CPR:6": ("acts", "antagonist", "against"),
    "CPR:9": ("serves", "substrate", "during"),
    "no_relation": ("appears", "unrelated", "here"),
}

NOISE_VOCAB = ("random", "various", "other", "spurious", "vague",
               "incidental", "assorted", "misc")

DISTRACTOR_VOCAB = ("reportedly", "overall", "notably", "broadly")


def _make_example(ex_id: str, label: str, middle: tuple[str, str, str],
                  rng: np.random.Generator) -> AnnotatedExample:
    e1_name = f"chem{int(rng.integers(1000))}"
    e2_name = f"gene{int(rng.integers(1000))}"
    # chain: e1 <- w1 <- w2 <- w3 <- e2, e1 is root
    texts = [e1_name, *middle, e2_name]
    heads = [ROOT_HEAD, 0, 1, 2, 3]
    deprels = ["root", "advmod", "acl", "obj", "obl"]
    punct = [False] * 5
    chain_len = 5
    # hang 0-2 distractors off random chain tokens, inserted after the chain
    for _ in range(int(rng.integers(3))):
        texts.append(DISTRACTOR_VOCAB[int(rng.integers(len(DISTRACTOR_VOCAB)))])
        heads.append(4)  # child of e2: keeps it on neither path's interior
        deprels.append("advmod")
        punct.append(False)
    texts.append(".")
    heads.append(4)
    deprels.append("punct")
    punct.append(True)
    tokens = tuple(
        Token(index=i, text=t, head=h, deprel=d, is_punct=p)
        for i, (t, h, d, p) in enumerate(zip(texts, heads, deprels, punct))
    )
    e1 = EntitySpan(start=0, end=1, text=e1_name, role="E1")
    e2 = EntitySpan(start=chain_len - 1, end=chain_len, text=e2_name, role="E2")
    return AnnotatedExample(id=ex_id, tokens=tokens, e1=e1, e2=e2, label=label)


def generate_corpus(name: str = "train", num_per_label: int = 30,
                    noise_rate: float = 0.1, seed: int = 0,
                    labelset: LabelSet | None = None) -> CorpusSplit:
    """Deterministic per (name, seed); noise_rate of each label's examples
    carry a noise triple instead of the planted phrase."""
    labelset = labelset or default_chemprot_labelset()
    rng = np.random.default_rng((seed, zlib.crc32(name.encode())))
    examples = []
    for label in labelset.labels:
        n_noise = int(round(num_per_label * noise_rate))
        for i in range(num_per_label):
            if i < num_per_label - n_noise:
                middle = PLANTED[label]
            else:
                idx = rng.choice(len(NOISE_VOCAB), size=3, replace=False)
                middle = tuple(NOISE_VOCAB[int(j)] for j in idx)
            ex_id = f"{name}-{label.replace(':', '')}-{i:03d}"
            examples.append(_make_example(ex_id, label, middle, rng))
    return CorpusSplit(name=name, examples=tuple(examples))


def write_static_vectors(path: str | Path,
                         labelset: LabelSet | None = None, dim: int = 8) -> None:
    """Toy word vectors aligned with the planted phrases and label descriptions."""
    labelset = labelset or default_chemprot_labelset()
    assert dim >= len(labelset.labels) + 2
    rows: list[tuple[str, np.ndarray]] = []
    for i, label in enumerate(labelset.labels):
        basis = np.zeros(dim)
        basis[i] = 1.0
        for w in PLANTED[label]:
            rows.append((w, basis))
    # tie the negative label's description to its planted phrase's direction
    neg = np.zeros(dim)
    neg[labelset.labels.index(labelset.negative_label)] = 1.0
    rows.append(("relation", neg))
    shared = np.zeros(dim)
    shared[len(labelset.labels)] = 1.0
    for w in ("chemical", "gene"):
        rows.append((w, shared))
    noise_dim = np.zeros(dim)
    noise_dim[len(labelset.labels) + 1] = 1.0
    for w in NOISE_VOCAB:
        rows.append((w, noise_dim))
    seen = set()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for word, vec in rows:
            if word in seen:
                continue
            seen.add(word)
            f.write(word + " " + " ".join(f"{x:g}" for x in vec) + "\n")


def oracle_mask_vectors(split: CorpusSplit, verb_words: dict[str, tuple[str, ...]],
                        provider) -> list[MaskVectorRecord]:
    """Mask vectors equal to each example's gold label-word embeddings."""
    out = []
    for ex in split.examples:
        mat = np.stack([provider.embed(w) for w in verb_words[ex.label]])
        out.append(MaskVectorRecord(example_id=ex.id, vectors=mat))
    return out
