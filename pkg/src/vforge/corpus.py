"""Corpus data model: labeled, dependency-parsed sentences with two entity spans.

The canonical on-disk form is JSONL, one example per line:

    {"id": str, "tokens": [str], "heads": [int, -1 for root],
     "deprels": [str], "is_punct": [bool],
     "e1": {"start": int, "end": int}, "e2": {"start": int, "end": int},
     "label": str}

Loaded corpora are immutable and safe to share across threads.
"""

from __future__ import annotations

import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import MalformedRecord, NonTreeParse, UnknownLabel

log = logging.getLogger(__name__)

ROOT_HEAD = -1  # sentinel head index for the root token


@dataclass(frozen=True)
class LabelSet:
    """The closed set of relation identifiers, with one negative ("no relation") label."""

    labels: tuple[str, ...]
    descriptions: dict[str, str]
    negative_label: str

    def __post_init__(self):
        if len(self.labels) < 2:
            raise ValueError("a label set needs at least 2 labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        if any(not l for l in self.labels):
            raise ValueError("empty label identifier")
        if self.negative_label not in self.labels:
            raise ValueError(f"negative label {self.negative_label!r} not in labels")
        for l in self.labels:
            if not self.descriptions.get(l):
                raise ValueError(f"label {l!r} has no description")

    @property
    def num_labels(self) -> int:
        return len(self.labels)

    @classmethod
    def from_toml(cls, path: str | Path) -> "LabelSet":
        with open(path, "rb") as f:
            doc = tomllib.load(f)
        labels = tuple(doc["labels"])
        return cls(labels=labels,
                   descriptions=dict(doc["descriptions"]),
                   negative_label=doc["negative_label"])

    def to_toml(self) -> str:
        lines = ["labels = [" + ", ".join(json.dumps(l) for l in self.labels) + "]",
                 f"negative_label = {json.dumps(self.negative_label)}",
                 "",
                 "[descriptions]"]
        for l in self.labels:
            lines.append(f"{json.dumps(l)} = {json.dumps(self.descriptions[l])}")
        return "\n".join(lines) + "\n"


def default_chemprot_labelset() -> LabelSet:
    """The label set shipped for ChemProt chemical-gene relations."""
    path = Path(__file__).parent / "data" / "chemprot_labels.toml"
    return LabelSet.from_toml(path)


@dataclass(frozen=True)
class Token:
    index: int
    text: str
    head: int  # ROOT_HEAD for the root
    deprel: str
    is_punct: bool = False


@dataclass(frozen=True)
class EntitySpan:
    start: int  # inclusive
    end: int    # exclusive
    text: str
    role: str   # "E1" | "E2"

    def indices(self) -> range:
        return range(self.start, self.end)

    def __contains__(self, idx: int) -> bool:
        return self.start <= idx < self.end


@dataclass(frozen=True)
class AnnotatedExample:
    id: str
    tokens: tuple[Token, ...]
    e1: EntitySpan
    e2: EntitySpan
    label: str

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class CorpusSplit:
    name: str
    examples: tuple[AnnotatedExample, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.examples)

    def by_label(self) -> dict[str, list[AnnotatedExample]]:
        out: dict[str, list[AnnotatedExample]] = {}
        for ex in self.examples:
            out.setdefault(ex.label, []).append(ex)
        return out


def heads_form_tree(heads: list[int]) -> bool:
    """True iff exactly one root and every token reaches it without cycles."""
    n = len(heads)
    roots = [i for i, h in enumerate(heads) if h == ROOT_HEAD]
    if len(roots) != 1:
        return False
    for i, h in enumerate(heads):
        if h != ROOT_HEAD and not (0 <= h < n):
            return False
    for i in range(n):
        seen = set()
        j = i
        while heads[j] != ROOT_HEAD:
            if j in seen:
                return False
            seen.add(j)
            j = heads[j]
    return True


def _span_from_record(obj: dict, key: str, tokens: list[str], line: int) -> EntitySpan:
    raw = obj[key]
    start, end = raw["start"], raw["end"]
    if not (isinstance(start, int) and isinstance(end, int)):
        raise MalformedRecord(line, f"{key}: span bounds must be integers")
    if not (0 <= start < end <= len(tokens)):
        raise MalformedRecord(line, f"{key}: span [{start},{end}) out of range")
    text = " ".join(tokens[start:end])
    return EntitySpan(start=start, end=end, text=text, role=key.upper())


def parse_record(obj: dict, labelset: LabelSet, line: int = 0) -> AnnotatedExample:
    """Validate one JSONL record and build an AnnotatedExample."""
    for key in ("id", "tokens", "heads", "deprels", "e1", "e2", "label"):
        if key not in obj:
            raise MalformedRecord(line, f"missing field {key!r}")
    tokens = obj["tokens"]
    heads = obj["heads"]
    deprels = obj["deprels"]
    is_punct = obj.get("is_punct", [False] * len(tokens))
    n = len(tokens)
    if n == 0:
        raise MalformedRecord(line, "empty token list")
    if not (len(heads) == len(deprels) == len(is_punct) == n):
        raise MalformedRecord(line, "tokens/heads/deprels/is_punct length mismatch")
    if obj["label"] not in labelset.labels:
        raise UnknownLabel(line, obj["label"])
    if not heads_form_tree(heads):
        raise NonTreeParse(line)
    e1 = _span_from_record(obj, "e1", tokens, line)
    e2 = _span_from_record(obj, "e2", tokens, line)
    if e1.start < e2.end and e2.start < e1.end:
        raise MalformedRecord(line, "e1 and e2 spans overlap")
    toks = tuple(
        Token(index=i, text=t, head=h, deprel=d, is_punct=bool(p))
        for i, (t, h, d, p) in enumerate(zip(tokens, heads, deprels, is_punct))
    )
    return AnnotatedExample(id=str(obj["id"]), tokens=toks, e1=e1, e2=e2,
                            label=obj["label"])


def example_to_record(ex: AnnotatedExample) -> dict:
    return {
        "id": ex.id,
        "tokens": [t.text for t in ex.tokens],
        "heads": [t.head for t in ex.tokens],
        "deprels": [t.deprel for t in ex.tokens],
        "is_punct": [t.is_punct for t in ex.tokens],
        "e1": {"start": ex.e1.start, "end": ex.e1.end},
        "e2": {"start": ex.e2.start, "end": ex.e2.end},
        "label": ex.label,
    }


def load_corpus(path: str | Path, labelset: LabelSet, name: str = "train",
                lenient: bool = False) -> CorpusSplit:
    """Load a JSONL corpus file, validating every record.

    Strict by default: the first bad record raises. With lenient=True bad
    records are dropped and logged with their line numbers.
    """
    examples: list[AnnotatedExample] = []
    seen_ids: set[str] = set()
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError as e:
                    raise MalformedRecord(lineno, f"invalid JSON: {e}") from e
                ex = parse_record(obj, labelset, line=lineno)
                if ex.id in seen_ids:
                    raise MalformedRecord(lineno, f"duplicate example id {ex.id!r}")
            except (MalformedRecord, UnknownLabel, NonTreeParse) as e:
                if lenient:
                    log.warning("dropping bad record: %s", e)
                    continue
                raise
            seen_ids.add(ex.id)
            examples.append(ex)
    return CorpusSplit(name=name, examples=tuple(examples))


def save_corpus(split: CorpusSplit, path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for ex in split.examples:
            f.write(json.dumps(example_to_record(ex)) + "\n")


def label_histogram(split: CorpusSplit, labelset: LabelSet) -> dict[str, int]:
    """Count examples per label; every label of the set is present (possibly 0)."""
    counts = {l: 0 for l in labelset.labels}
    for ex in split.examples:
        counts[ex.label] += 1
    return counts


def detokenize(tokens: Iterable[Token]) -> str:
    """Join token texts with single spaces; punctuation attaches to the left."""
    out: list[str] = []
    for t in tokens:
        if t.is_punct and out:
            out[-1] = out[-1] + t.text
        else:
            out.append(t.text)
    return " ".join(out)
