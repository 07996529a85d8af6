"""Embedding providers for candidate phrases and relation descriptions.

The default provider averages static per-word vectors loaded from a text
file (`token f1 f2 ... fD`, one entry per line); an optional HTTP provider
delegates to an external sentence-embedding endpoint.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ProviderUnavailable


class EmbeddingProvider:
    """Deterministic text -> fixed-dimension vector. Safe for concurrent lookups."""

    dim: int

    def embed(self, text: str) -> np.ndarray:
        raise NotImplementedError


class StaticVectorProvider(EmbeddingProvider):
    """Mean of per-word static vectors; OOV words contribute the zero vector."""

    def __init__(self, vectors: dict[str, np.ndarray], dim: int):
        self.vectors = vectors
        self.dim = dim

    @classmethod
    def load(cls, path: str | Path) -> "StaticVectorProvider":
        vectors: dict[str, np.ndarray] = {}
        dim = None
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                parts = line.rstrip("\n").split(" ")
                if len(parts) < 2 or not parts[0]:
                    continue
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
                if dim is None:
                    dim = vec.shape[0]
                elif vec.shape[0] != dim:
                    raise DimensionMismatch(dim, vec.shape[0])
                vectors[parts[0]] = vec
        if dim is None:
            raise ProviderUnavailable(f"no vectors in {path}")
        return cls(vectors, dim)

    def embed(self, text: str) -> np.ndarray:
        if not text:
            raise ValueError("cannot embed empty text")
        words = text.lower().split()
        acc = np.zeros(self.dim, dtype=np.float64)
        for w in words:
            vec = self.vectors.get(w)
            if vec is not None:
                acc += vec
        return acc / len(words)


class HttpEmbeddingProvider(EmbeddingProvider):
    """POSTs `{"text": ...}` to an endpoint returning `{"vector": [...]}`."""

    def __init__(self, url: str, dim: int, timeout: float = 30.0):
        self.url = url
        self.dim = dim
        self.timeout = timeout

    def embed(self, text: str) -> np.ndarray:
        import requests

        if not text:
            raise ValueError("cannot embed empty text")
        try:
            resp = requests.post(self.url, json={"text": text}, timeout=self.timeout)
            resp.raise_for_status()
        except requests.RequestException as e:
            raise ProviderUnavailable(str(e)) from e
        vec = np.array(resp.json()["vector"], dtype=np.float64)
        if vec.shape[0] != self.dim:
            raise DimensionMismatch(self.dim, vec.shape[0])
        return vec


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity; 0 when either vector is all-zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(u.shape[0], v.shape[0])
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))
