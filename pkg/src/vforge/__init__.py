"""Verbalizer mining, ranking, and evaluation for multi-class relation extraction."""

__version__ = "0.1.0"

from .corpus import (AnnotatedExample, CorpusSplit, EntitySpan, LabelSet, Token,
                     default_chemprot_labelset, label_histogram, load_corpus,
                     save_corpus)
from .paths import build_graph, mine_candidates, shortest_path
from .ranking import (CandidateStats, MinedPhrase, RankedVerbalizer,
                      collect_stats, score_combined, score_frequency,
                      score_frequency_specificity, score_similarity,
                      select_verbalizers)
from .prompts import PromptRecord, TemplateConfig, render_baseline, render_prompt
from .fewshot import FewShotConfig, FewShotSplit, draw_fewshot
from .scoring import (EvalReport, LabelWordEmbeddings, MaskVectorRecord,
                      evaluate, predict, score_example)
from .embeddings import StaticVectorProvider, cosine

__all__ = [
    "AnnotatedExample", "CorpusSplit", "EntitySpan", "LabelSet", "Token",
    "default_chemprot_labelset", "label_histogram", "load_corpus", "save_corpus",
    "build_graph", "mine_candidates", "shortest_path",
    "CandidateStats", "MinedPhrase", "RankedVerbalizer", "collect_stats",
    "score_combined", "score_frequency", "score_frequency_specificity",
    "score_similarity", "select_verbalizers",
    "PromptRecord", "TemplateConfig", "render_baseline", "render_prompt",
    "FewShotConfig", "FewShotSplit", "draw_fewshot",
    "EvalReport", "LabelWordEmbeddings", "MaskVectorRecord", "evaluate",
    "predict", "score_example",
    "StaticVectorProvider", "cosine",
]
