"""Pipeline CLI: `vforge <stage> --config cfg.toml [flags]`.

Stages hand artifacts to each other through files in the output directory
(convert -> ingest -> mine -> rank -> emit / fewshot -> score -> eval), so
an external trainer can be slotted between `emit`/`fewshot` and `score`.
Every artifact is written atomically and gets a `.manifest.json` recording
the config hash, input hashes, and tool version.

Exit codes: 0 ok, 1 usage, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path

from . import __version__
from .corpus import (CorpusSplit, LabelSet, default_chemprot_labelset,
                     example_to_record, label_histogram, load_corpus, save_corpus)
from .conllu import convert as conllu_convert
from .embeddings import StaticVectorProvider
from .errors import MissingArtifact, VforgeError
from .fewshot import FewShotConfig, draw_fewshot
from .paths import mine_candidates
from .prompts import TemplateConfig, render_baseline, render_gold_filled, render_prompt
from .ranking import (MinedPhrase, collect_stats, load_verbalizers, rank_pool,
                      select_verbalizers, verbalizers_to_toml)
from .scoring import (evaluate, load_label_word_embeddings, load_mask_vectors,
                      predict, score_example)

log = logging.getLogger("vforge")

STAGES = ("convert", "ingest", "mine", "rank", "emit", "fewshot", "score", "eval")

METHOD_ALIASES = {
    "frequency": "frequency",
    "freq-spec": "frequency_specificity",
    "similarity": "similarity",
    "combined": "combined",
    "random": "random_pick",
}


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_manifest(artifact: Path, stage: str, cfg: dict, inputs: list[Path]) -> None:
    manifest = {
        "stage": stage,
        "tool_version": __version__,
        "config_sha256": hashlib.sha256(
            json.dumps(cfg, sort_keys=True, default=str).encode()).hexdigest(),
        "inputs": {str(p): _sha256(p) for p in inputs},
        "artifact": artifact.name,
    }
    atomic_write(artifact.with_suffix(artifact.suffix + ".manifest.json"),
                 json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise MissingArtifact(str(path), stage)
    return path


class Ctx:
    """Resolved configuration for one stage invocation."""

    def __init__(self, args: argparse.Namespace):
        self.cfg: dict = {}
        if args.config:
            with open(args.config, "rb") as f:
                self.cfg = tomllib.load(f)
        self.args = args
        paths = self.cfg.get("paths", {})
        self.out_dir = Path(getattr(args, "out_dir", None)
                            or paths.get("out_dir", "out"))
        labelset_path = getattr(args, "labelset", None) or paths.get("labelset")
        self.labelset: LabelSet = (LabelSet.from_toml(labelset_path)
                                   if labelset_path else default_chemprot_labelset())

    def path(self, flag: str, cfg_key: str, default_name: str | None = None) -> Path:
        value = getattr(self.args, flag, None) or self.cfg.get("paths", {}).get(cfg_key)
        if value:
            return Path(value)
        if default_name:
            return self.out_dir / default_name
        raise MissingArtifact(f"<{cfg_key}>", self.args.stage)

    def template(self) -> TemplateConfig:
        t = self.cfg.get("template", {})
        return TemplateConfig(
            mask_literal=t.get("mask_literal", "[MASK]"),
            mask_count=int(getattr(self.args, "mask_count", None)
                           or t.get("mask_count", 3)),
        )


# -- stage implementations ----------------------------------------------------

def stage_convert(ctx: Ctx) -> None:
    conllu = require(ctx.path("conllu", "conllu"), "convert")
    standoff = require(ctx.path("standoff", "standoff"), "convert")
    out = ctx.path("out", "converted", "converted.jsonl")
    examples = conllu_convert(conllu, standoff, ctx.labelset)
    text = "".join(json.dumps(example_to_record(ex)) + "\n" for ex in examples)
    atomic_write(out, text)
    write_manifest(out, "convert", ctx.cfg, [conllu, standoff])
    log.info("converted %d examples -> %s", len(examples), out)


def stage_ingest(ctx: Ctx) -> None:
    src = require(ctx.path("in_path", "corpus", "converted.jsonl"), "ingest")
    out = ctx.path("out", "ingested", "ingested.jsonl")
    split = load_corpus(src, ctx.labelset, name="train",
                        lenient=ctx.args.lenient)
    text = "".join(json.dumps(example_to_record(ex)) + "\n" for ex in split.examples)
    atomic_write(out, text)
    write_manifest(out, "ingest", ctx.cfg, [src])
    hist = label_histogram(split, ctx.labelset)
    log.info("ingested %d examples -> %s", len(split), out)
    print(json.dumps({"examples": len(split), "histogram": hist}))


def stage_mine(ctx: Ctx) -> None:
    src = require(ctx.path("in_path", "ingested", "ingested.jsonl"), "mine")
    out = ctx.path("out", "mined", "mined.jsonl")
    split = load_corpus(src, ctx.labelset)
    lines = []
    for ex in split.examples:
        for phrase in mine_candidates(ex):
            lines.append(json.dumps({"example_id": phrase.example_id,
                                     "label": ex.label,
                                     "words": list(phrase.words)}))
    atomic_write(out, "".join(l + "\n" for l in lines))
    write_manifest(out, "mine", ctx.cfg, [src])
    log.info("mined %d phrases -> %s", len(lines), out)


def _load_mined(path: Path) -> list[MinedPhrase]:
    mined = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                obj = json.loads(line)
                mined.append(MinedPhrase(example_id=obj["example_id"],
                                         label=obj["label"],
                                         words=tuple(obj["words"])))
    return mined


def stage_rank(ctx: Ctx) -> None:
    src = require(ctx.path("in_path", "mined", "mined.jsonl"), "rank")
    out = ctx.path("out", "verbalizers", "verbalizers.toml")
    rank_cfg = ctx.cfg.get("rank", {})
    method = METHOD_ALIASES[ctx.args.method or rank_cfg.get("method", "frequency")]
    seed = ctx.args.seed if ctx.args.seed is not None else int(rank_cfg.get("seed", 0))
    mask_count = int(ctx.args.mask_count or rank_cfg.get("mask_count", 3))
    top_k = int(ctx.args.top_k or rank_cfg.get("top_k", 1))
    provider = None
    inputs = [src]
    if method in ("similarity", "combined"):
        vec_path = require(ctx.path("vectors", "vectors"), "rank")
        provider = StaticVectorProvider.load(vec_path)
        inputs.append(vec_path)
    mined = _load_mined(src)
    stats = collect_stats(mined, ctx.labelset, mask_count=mask_count)
    verbs = select_verbalizers(stats, ctx.labelset, method, seed=seed,
                               provider=provider)
    atomic_write(out, verbalizers_to_toml(verbs, seed=seed, mask_count=mask_count))
    write_manifest(out, "rank", ctx.cfg, inputs)
    if top_k > 1 and method != "random_pick":
        listing = {
            label: [{"words": list(st.words), "score": s}
                    for s, st in rank_pool(stats, label, ctx.labelset, method,
                                           provider)[:top_k]]
            for label in ctx.labelset.labels
        }
        atomic_write(out.with_name("topk.json"), json.dumps(listing, indent=2) + "\n")
    log.info("ranked verbalizers (%s) -> %s", method, out)


def stage_emit(ctx: Ctx) -> None:
    src = require(ctx.path("in_path", "ingested", "ingested.jsonl"), "emit")
    verbs_path = require(ctx.path("verbalizers", "verbalizers", "verbalizers.toml"),
                         "emit")
    out = ctx.path("out", "prompts", "prompts.jsonl")
    verbs, meta = load_verbalizers(verbs_path)
    cfg = ctx.template()
    split = load_corpus(src, ctx.labelset)
    lines = []
    for ex in split.examples:
        rec = render_prompt(ex, cfg)
        lines.append(json.dumps({
            "example_id": ex.id,
            "baseline": render_baseline(ex, cfg),
            "prompt": rec.text,
            "gold_label": ex.label,
            "gold_filled": render_gold_filled(ex, verbs[ex.label].words, cfg),
        }))
    atomic_write(out, "".join(l + "\n" for l in lines))
    sidecar = {"template": {"mask_literal": cfg.mask_literal,
                            "mask_count": cfg.mask_count},
               "verbalizers": {l: list(v.words) for l, v in verbs.items()},
               "verbalizer_meta": meta}
    atomic_write(out.with_name("prompts.meta.json"),
                 json.dumps(sidecar, indent=2) + "\n")
    write_manifest(out, "emit", ctx.cfg, [src, verbs_path])
    log.info("emitted %d prompt records -> %s", len(lines), out)


def stage_fewshot(ctx: Ctx) -> None:
    src = require(ctx.path("in_path", "ingested", "ingested.jsonl"), "fewshot")
    fs_cfg = ctx.cfg.get("fewshot", {})
    k = int(ctx.args.k or fs_cfg.get("k", 8))
    seeds = (tuple(int(s) for s in ctx.args.seeds.split(","))
             if ctx.args.seeds else tuple(fs_cfg.get("seeds", (0, 1, 2, 3, 4))))
    out_dir = Path(ctx.args.out or ctx.out_dir)
    split = load_corpus(src, ctx.labelset)
    draws = draw_fewshot(split, FewShotConfig(k=k, seeds=seeds), ctx.labelset)
    for fs in draws:
        path = out_dir / f"fewshot-k{k}-seed{fs.seed}.json"
        atomic_write(path, json.dumps({"seed": fs.seed,
                                       "train_ids": list(fs.train_ids),
                                       "val_ids": list(fs.val_ids)}) + "\n")
        write_manifest(path, "fewshot", ctx.cfg, [src])
    log.info("wrote %d few-shot splits (k=%d) -> %s", len(draws), k, out_dir)


def stage_score(ctx: Ctx) -> None:
    vec_path = require(ctx.path("mask_vectors", "mask_vectors", "mask_vectors.jsonl"),
                       "score")
    emb_path = require(ctx.path("label_embeddings", "label_embeddings",
                                "label_embeddings.jsonl"), "score")
    out = ctx.path("out", "scores", "scores.jsonl")
    records = load_mask_vectors(vec_path)
    emb = load_label_word_embeddings(emb_path)
    emb.validate(ctx.labelset)
    lines = []
    for rec in records:
        scores = score_example(rec, emb)
        lines.append(json.dumps({"example_id": rec.example_id,
                                 "scores": scores,
                                 "prediction": predict(scores, ctx.labelset)}))
    atomic_write(out, "".join(l + "\n" for l in lines))
    write_manifest(out, "score", ctx.cfg, [vec_path, emb_path])
    log.info("scored %d examples -> %s", len(lines), out)


def _load_predictions(path: Path) -> dict[str, str]:
    preds = {}
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                obj = json.loads(line)
                preds[obj["example_id"]] = obj.get("prediction") or obj["label"]
    return preds


def stage_eval(ctx: Ctx) -> None:
    pred_path = require(ctx.path("pred", "predictions", "scores.jsonl"), "eval")
    gold_path = require(ctx.path("gold", "gold", "ingested.jsonl"), "eval")
    out = ctx.path("out", "eval", "eval.json")
    preds = _load_predictions(pred_path)
    gold_split = load_corpus(gold_path, ctx.labelset)
    gold = {ex.id: ex.label for ex in gold_split.examples}
    report = evaluate(preds, gold, ctx.labelset)
    atomic_write(out, json.dumps(report.to_dict(), indent=2) + "\n")
    write_manifest(out, "eval", ctx.cfg, [pred_path, gold_path])
    header = f"{'label':<14}{'prec':>8}{'rec':>8}{'f1':>8}{'support':>9}"
    print(header)
    for label, row in report.per_label.items():
        print(f"{label:<14}{row['precision']:>8.4f}{row['recall']:>8.4f}"
              f"{row['f1']:>8.4f}{int(row['support']):>9d}")
    print(f"micro F1: {report.micro_f1:.4f}  macro F1: {report.macro_f1:.4f}")


HANDLERS = {
    "convert": stage_convert,
    "ingest": stage_ingest,
    "mine": stage_mine,
    "rank": stage_rank,
    "emit": stage_emit,
    "fewshot": stage_fewshot,
    "score": stage_score,
    "eval": stage_eval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vforge",
        description="Verbalizer mining, ranking, and evaluation pipeline.")
    sub = parser.add_subparsers(dest="stage", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="pipeline config TOML")
        p.add_argument("--labelset", help="label set TOML (default: ChemProt)")
        p.add_argument("--out-dir", dest="out_dir", help="artifact directory")
        p.add_argument("--out", help="output artifact path")
        return p

    p = add("convert", "CoNLL-U + standoff annotations -> canonical JSONL")
    p.add_argument("--conllu")
    p.add_argument("--standoff")

    p = add("ingest", "validate a canonical JSONL corpus")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--lenient", action="store_true",
                   help="drop and log bad records instead of failing")

    p = add("mine", "mine candidate phrases from dependency paths")
    p.add_argument("--in", dest="in_path")

    p = add("rank", "select one verbalizer per relation")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--method", choices=sorted(METHOD_ALIASES))
    p.add_argument("--seed", type=int)
    p.add_argument("--mask-count", dest="mask_count", type=int)
    p.add_argument("--vectors", help="static word-vector file")
    p.add_argument("--top-k", dest="top_k", type=int)

    p = add("emit", "render baseline and prompt formats")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--verbalizers")
    p.add_argument("--mask-count", dest="mask_count", type=int)

    p = add("fewshot", "draw k-per-relation splits")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--k", type=int)
    p.add_argument("--seeds", help="comma-separated seed list")

    p = add("score", "score mask vectors against label-word embeddings")
    p.add_argument("--mask-vectors", dest="mask_vectors")
    p.add_argument("--label-embeddings", dest="label_embeddings")

    p = add("eval", "micro/macro F1 report")
    p.add_argument("--pred")
    p.add_argument("--gold")

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("VFORGE_LOG", "INFO").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        HANDLERS[args.stage](Ctx(args))
        return 0
    except VforgeError as e:
        print(json.dumps({"error": type(e).__name__, "detail": str(e)}),
              file=sys.stderr)
        return 2
    except Exception as e:  # internal
        log.exception("internal error")
        print(json.dumps({"error": "internal", "detail": str(e)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
