"""Digestion: map each token to its (representative, label) tuple.

Keywords collapse to their class representative, data words keep their
canonically wrapped surface under the recognizer's label, and unknown words
pass through verbatim under the fixed label "unknown". Sentences digested at
one layer become single words of the next.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from hsf.lexicon import Layer, seq_text
from hsf.tokenizer import (
    KIND_DATA,
    KIND_KEYWORD,
    KIND_SEPARATOR,
    KIND_UNKNOWN,
    Token,
)

__all__ = ["UNKNOWN_LABEL", "DigestedWord", "digest", "digest_sequence", "lift"]

UNKNOWN_LABEL = "unknown"


@dataclass(frozen=True)
class DigestedWord:
    """One digested word: canonical text plus the meaning label it carries.

    `unwrapped` keeps the raw matched surface for data words so framework
    outputs can opt out of the canonical wrap; for other kinds it equals the
    representative.
    """

    representative: str
    label: str
    kind: str
    source_span: tuple[int, int]
    layer: int
    unwrapped: str = ""

    def __post_init__(self) -> None:
        if not self.unwrapped:
            object.__setattr__(self, "unwrapped", self.representative)


def digest(layer: Layer, token: Token) -> DigestedWord:
    """Apply the layer mapping to one token. Total over segment output."""
    if token.kind == KIND_KEYWORD:
        if not isinstance(token.class_ref, int) or not 0 <= token.class_ref < len(layer.classes):
            raise RuntimeError(
                f"token references class {token.class_ref!r} absent from layer {layer.id}")
        cls = layer.classes[token.class_ref]
        return DigestedWord(representative=seq_text(cls.representative),
                            label=cls.label, kind=KIND_KEYWORD,
                            source_span=token.span, layer=layer.id)
    if token.kind == KIND_DATA:
        return DigestedWord(representative=token.canonical_surface,
                            label=str(token.class_ref), kind=KIND_DATA,
                            source_span=token.span, layer=layer.id,
                            unwrapped=token.surface)
    if token.kind == KIND_UNKNOWN:
        return DigestedWord(representative=token.surface, label=UNKNOWN_LABEL,
                            kind=KIND_UNKNOWN, source_span=token.span,
                            layer=layer.id)
    if token.kind == KIND_SEPARATOR:
        raise ValueError("separator tokens must be removed before digestion")
    raise ValueError(f"unknown token kind {token.kind!r}")


def digest_sequence(layer: Layer, tokens: Sequence[Token]) -> list[DigestedWord]:
    """Element-wise digestion; order and length preserved."""
    return [digest(layer, t) for t in tokens]


def lift(sentence_outputs: Sequence[str]) -> tuple[str, ...]:
    """Repackage layer-i output words as the layer-(i+1) input sequence."""
    return tuple(sentence_outputs)
