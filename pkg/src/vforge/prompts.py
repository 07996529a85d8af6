"""Rendering of examples into entity-marker baseline and masked-prompt formats.

Both renderers are pure: tokens are joined with single spaces (punctuation
attaches to the preceding token) and the prompt appends
`<e1> <mask>*L <e2>.` to the detokenized sentence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import AnnotatedExample, detokenize


@dataclass(frozen=True)
class TemplateConfig:
    mask_literal: str = "[MASK]"
    mask_count: int = 3
    e1_open: str = "[E1] "
    e1_close: str = " [/E1]"
    e2_open: str = "[E2] "
    e2_close: str = " [/E2]"

    def __post_init__(self):
        if self.mask_count < 1:
            raise ValueError("mask_count must be >= 1")
        if not self.mask_literal:
            raise ValueError("mask_literal must be non-empty")


@dataclass(frozen=True)
class PromptRecord:
    example_id: str
    text: str
    mask_positions: int
    gold_label: str


def render_prompt(example: AnnotatedExample, cfg: TemplateConfig = TemplateConfig()) -> PromptRecord:
    """Sentence + ` e1 [MASK]*L e2.` suffix."""
    masks = " ".join([cfg.mask_literal] * cfg.mask_count)
    text = f"{detokenize(example.tokens)} {example.e1.text} {masks} {example.e2.text}."
    return PromptRecord(example_id=example.id, text=text,
                        mask_positions=cfg.mask_count, gold_label=example.label)


def render_baseline(example: AnnotatedExample, cfg: TemplateConfig = TemplateConfig()) -> str:
    """Sentence with the entity spans wrapped in marker literals."""
    pieces: list[str] = []
    for tok in example.tokens:
        text = tok.text
        if tok.index == example.e1.start:
            text = cfg.e1_open + text
        elif tok.index == example.e2.start:
            text = cfg.e2_open + text
        if tok.index == example.e1.end - 1:
            text = text + cfg.e1_close
        elif tok.index == example.e2.end - 1:
            text = text + cfg.e2_close
        if tok.is_punct and pieces:
            pieces[-1] = pieces[-1] + text
        else:
            pieces.append(text)
    return " ".join(pieces)


def render_gold_filled(example: AnnotatedExample, words: tuple[str, ...],
                       cfg: TemplateConfig = TemplateConfig()) -> str:
    """Prompt text with the masks replaced by the gold label's words."""
    if len(words) != cfg.mask_count:
        raise ValueError(f"expected {cfg.mask_count} label words, got {len(words)}")
    filled = " ".join(words)
    return f"{detokenize(example.tokens)} {example.e1.text} {filled} {example.e2.text}."
