"""Converter from CoNLL-U parses plus a standoff annotation file to canonical JSONL.

The CoNLL-U side supplies tokens, heads, deprels, and punctuation flags
(UPOS == PUNCT); multiword-token ranges and empty nodes are skipped. The
standoff side is JSONL keyed by sent_id:

    {"sent_id": str, "e1": {"start": int, "end": int},
     "e2": {"start": int, "end": int}, "label": str}

with 0-based token spans, end exclusive. A sentence with several
annotations yields one example per annotation, ids `sent_id#k`.

Note on provenance: when converting ChemProt-style corpora, sentence
splitting and filtering choices are this converter's own; it does not claim
to reproduce any published preprocessing.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import LabelSet, parse_record, AnnotatedExample
from .errors import MalformedRecord


def read_conllu(path: str | Path) -> dict[str, dict]:
    """Parse sentences into {sent_id: {"tokens", "heads", "deprels", "is_punct"}}."""
    sentences: dict[str, dict] = {}
    sent_id = None
    rows: list[tuple[str, int, str, bool]] = []
    lineno = 0

    def flush(line: int):
        nonlocal sent_id, rows
        if not rows:
            sent_id = None
            return
        sid = sent_id if sent_id is not None else f"s{len(sentences) + 1}"
        if sid in sentences:
            raise MalformedRecord(line, f"duplicate sent_id {sid!r}")
        sentences[sid] = {
            "tokens": [r[0] for r in rows],
            "heads": [r[1] for r in rows],
            "deprels": [r[2] for r in rows],
            "is_punct": [r[3] for r in rows],
        }
        sent_id = None
        rows = []

    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("sent_id"):
                    _, _, value = body.partition("=")
                    sent_id = value.strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise MalformedRecord(lineno, f"expected 10 columns, got {len(cols)}")
            tok_id, form, _, upos, _, _, head, deprel, _, _ = cols
            if "-" in tok_id or "." in tok_id:
                continue  # multiword range / empty node
            try:
                head_idx = int(head) - 1  # 1-based; 0 (root) becomes -1
            except ValueError as e:
                raise MalformedRecord(lineno, f"bad HEAD {head!r}") from e
            rows.append((form, head_idx, deprel, upos == "PUNCT"))
    flush(lineno + 1)
    return sentences


def read_standoff(path: str | Path) -> list[dict]:
    annotations = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise MalformedRecord(lineno, f"invalid JSON: {e}") from e
            for key in ("sent_id", "e1", "e2", "label"):
                if key not in obj:
                    raise MalformedRecord(lineno, f"missing field {key!r}")
            obj["_line"] = lineno
            annotations.append(obj)
    return annotations


def write_conllu(examples: list[AnnotatedExample], conllu_path: str | Path,
                 standoff_path: str | Path) -> None:
    """Export examples as a CoNLL-U file plus a standoff annotation file
    (the converter's inverse, used for round-trips and demos)."""
    with open(conllu_path, "w", encoding="utf-8") as f:
        for ex in examples:
            f.write(f"# sent_id = {ex.id}\n")
            for t in ex.tokens:
                upos = "PUNCT" if t.is_punct else "X"
                f.write("\t".join([str(t.index + 1), t.text, "_", upos, "_", "_",
                                   str(t.head + 1), t.deprel, "_", "_"]) + "\n")
            f.write("\n")
    with open(standoff_path, "w", encoding="utf-8") as f:
        for ex in examples:
            f.write(json.dumps({
                "sent_id": ex.id,
                "e1": {"start": ex.e1.start, "end": ex.e1.end},
                "e2": {"start": ex.e2.start, "end": ex.e2.end},
                "label": ex.label,
            }) + "\n")


def convert(conllu_path: str | Path, standoff_path: str | Path,
            labelset: LabelSet) -> list[AnnotatedExample]:
    """Join parses with annotations; one canonical example per annotation."""
    sentences = read_conllu(conllu_path)
    annotations = read_standoff(standoff_path)
    per_sent: dict[str, int] = {}
    examples: list[AnnotatedExample] = []
    for ann in annotations:
        sid = ann["sent_id"]
        if sid not in sentences:
            raise MalformedRecord(ann["_line"], f"unknown sent_id {sid!r}")
        k = per_sent.get(sid, 0)
        per_sent[sid] = k + 1
        record = dict(sentences[sid])
        record.update({
            "id": sid if k == 0 else f"{sid}#{k}",
            "e1": ann["e1"],
            "e2": ann["e2"],
            "label": ann["label"],
        })
        examples.append(parse_record(record, labelset, line=ann["_line"]))
    return examples
