"""Similarity scoring of mask vectors against label-word embeddings, and F1 evaluation.

An example's score for relation r is the mean over the L mask positions of
the cosine between the position's hidden vector and r's label-word
embedding at that position. Predictions are the argmax label, ties broken
by LabelSet order. Micro F1 is computed over all classes (identical to
accuracy for single-label classification); macro F1 averages per-label F1
with zero-support labels contributing 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import LabelSet
from .embeddings import cosine
from .errors import DimensionMismatch, IdMismatch


@dataclass(frozen=True)
class MaskVectorRecord:
    example_id: str
    vectors: np.ndarray  # shape (L, H)

    def __post_init__(self):
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be L x H")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError(f"non-finite mask vectors for {self.example_id}")


@dataclass(frozen=True)
class LabelWordEmbeddings:
    per_label: dict[str, np.ndarray]  # label -> (L, H)

    def validate(self, labelset: LabelSet) -> None:
        shapes = {v.shape for v in self.per_label.values()}
        if len(shapes) > 1:
            raise DimensionMismatch(*sorted(s[1] for s in shapes)[:2])
        for label in labelset.labels:
            if label not in self.per_label:
                raise ValueError(f"missing label-word embeddings for {label!r}")


@dataclass(frozen=True)
class EvalReport:
    micro_f1: float
    macro_f1: float
    per_label: dict[str, dict[str, float]]  # precision/recall/f1/support

    def to_dict(self) -> dict:
        return {"micro_f1": self.micro_f1, "macro_f1": self.macro_f1,
                "per_label": self.per_label}


def score_example(rec: MaskVectorRecord, emb: LabelWordEmbeddings) -> dict[str, float]:
    """Per-label mean-of-cosines score matrix row for one example."""
    scores: dict[str, float] = {}
    for label, mat in emb.per_label.items():
        if mat.shape != rec.vectors.shape:
            raise DimensionMismatch(mat.shape[-1], rec.vectors.shape[-1])
        L = mat.shape[0]
        scores[label] = sum(cosine(rec.vectors[j], mat[j]) for j in range(L)) / L
    return scores


def predict(scores: dict[str, float], labelset: LabelSet) -> str:
    """Argmax label; ties broken by LabelSet order."""
    if not scores:
        raise ValueError("empty score matrix")
    best = None
    for label in labelset.labels:
        if label not in scores:
            continue
        if best is None or scores[label] > scores[best]:
            best = label
    if best is None:
        raise ValueError("no scored label belongs to the label set")
    return best


def evaluate(pred: dict[str, str], gold: dict[str, str],
             labelset: LabelSet) -> EvalReport:
    if set(pred) != set(gold):
        raise IdMismatch("prediction and gold id sets differ")
    tp = {l: 0 for l in labelset.labels}
    fp = {l: 0 for l in labelset.labels}
    fn = {l: 0 for l in labelset.labels}
    correct = 0
    for ex_id, g in gold.items():
        p = pred[ex_id]
        if p == g:
            tp[g] += 1
            correct += 1
        else:
            fp[p] += 1
            fn[g] += 1
    per_label: dict[str, dict[str, float]] = {}
    for l in labelset.labels:
        prec = tp[l] / (tp[l] + fp[l]) if tp[l] + fp[l] else 0.0
        rec = tp[l] / (tp[l] + fn[l]) if tp[l] + fn[l] else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_label[l] = {"precision": prec, "recall": rec, "f1": f1,
                        "support": tp[l] + fn[l]}
    micro = correct / len(gold) if gold else 0.0
    macro = sum(per_label[l]["f1"] for l in labelset.labels) / len(labelset.labels)
    return EvalReport(micro_f1=micro, macro_f1=macro, per_label=per_label)


def label_word_embeddings_from_words(verb_words: dict[str, tuple[str, ...]],
                                     provider) -> LabelWordEmbeddings:
    """One embedding per label word (not their mean), stacked in word order."""
    per_label = {
        label: np.stack([provider.embed(w) for w in words])
        for label, words in verb_words.items()
    }
    return LabelWordEmbeddings(per_label=per_label)


# -- exchange-file IO ---------------------------------------------------------

def load_mask_vectors(path: str | Path) -> list[MaskVectorRecord]:
    records = []
    shape = None
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            vecs = np.array(obj["vectors"], dtype=np.float64)
            if shape is None:
                shape = vecs.shape
            elif vecs.shape != shape:
                raise DimensionMismatch(shape[-1], vecs.shape[-1])
            records.append(MaskVectorRecord(example_id=obj["example_id"], vectors=vecs))
    return records


def save_mask_vectors(records: list[MaskVectorRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps({"example_id": rec.example_id,
                                "vectors": rec.vectors.tolist()}) + "\n")


def load_label_word_embeddings(path: str | Path) -> LabelWordEmbeddings:
    per_label: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            per_label[obj["label"]] = np.array(obj["vectors"], dtype=np.float64)
    return LabelWordEmbeddings(per_label=per_label)


def save_label_word_embeddings(emb: LabelWordEmbeddings, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for label, mat in emb.per_label.items():
            f.write(json.dumps({"label": label, "vectors": mat.tolist()}) + "\n")
