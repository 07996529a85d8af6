"""Seeded k-per-relation few-shot split sampling.

The generator and draw order are part of the contract so splits are
reproducible across implementations:

  * PRNG: NumPy PCG64, one stream per few-shot seed (`np.random.default_rng(seed)`).
  * Labels are visited in LabelSet order; per label the train draw happens
    before the validation draw.
  * Drawing k from a pool of n ids (the label's examples in corpus order):
      - n >= k: partial Fisher-Yates — for j = 0..k-1 swap pool[j] with
        pool[j + rng.integers(n - j)]; the first k slots are the sample.
      - n < k: take the whole pool, then top up to k with
        pool[rng.integers(n)] draws (resampling with replacement).
  * Validation re-draws k from the ids the train draw did not use; when
    none remain the label contributes no validation ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import CorpusSplit, LabelSet
from .errors import EmptyRelationPool

DEFAULT_K_GRID = (8, 16, 32, 64, 128, 256)


@dataclass(frozen=True)
class FewShotConfig:
    k: int
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be non-empty and distinct")


@dataclass(frozen=True)
class FewShotSplit:
    seed: int
    train_ids: tuple[str, ...]
    val_ids: tuple[str, ...]


def _draw_k(pool: list[str], k: int, rng: np.random.Generator) -> list[str]:
    n = len(pool)
    if n >= k:
        slots = list(pool)
        for j in range(k):
            swap = j + int(rng.integers(n - j))
            slots[j], slots[swap] = slots[swap], slots[j]
        return slots[:k]
    picked = list(pool)
    while len(picked) < k:
        picked.append(pool[int(rng.integers(n))])
    return picked


def draw_fewshot(split: CorpusSplit, cfg: FewShotConfig,
                 labelset: LabelSet) -> list[FewShotSplit]:
    """One FewShotSplit per seed, deterministic per seed."""
    pools = {l: [] for l in labelset.labels}
    for ex in split.examples:
        pools[ex.label].append(ex.id)
    for label, pool in pools.items():
        if not pool:
            raise EmptyRelationPool(label)
    out: list[FewShotSplit] = []
    for seed in cfg.seeds:
        rng = np.random.default_rng(seed)
        train: list[str] = []
        val: list[str] = []
        for label in labelset.labels:
            pool = pools[label]
            picked = _draw_k(pool, cfg.k, rng)
            train.extend(picked)
            remaining = [i for i in pool if i not in set(picked)]
            if remaining:
                val.extend(_draw_k(remaining, cfg.k, rng))
        out.append(FewShotSplit(seed=seed, train_ids=tuple(train), val_ids=tuple(val)))
    return out


def save_split(fs: FewShotSplit, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"seed": fs.seed, "train_ids": list(fs.train_ids),
                   "val_ids": list(fs.val_ids)}, f)
        f.write("\n")


def load_split(path: str | Path) -> FewShotSplit:
    with open(path, "r", encoding="utf-8") as f:
        obj = json.load(f)
    return FewShotSplit(seed=obj["seed"], train_ids=tuple(obj["train_ids"]),
                        val_ids=tuple(obj["val_ids"]))
