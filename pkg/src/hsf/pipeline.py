"""End-to-end orchestration: split compound input into simple sentences,
run each through every layer (segment, digest, framework match, lift), and
assemble the canonical output plus a full trace.

Compound sentences are treated as linear sequences: the input is tokenized
once at layer 1, then cut at separator tokens and connector-class keywords
(both consumed). Each sentence's words climb the layers; a framework match
rewrites the sentence to its canonical form, otherwise the representatives
are concatenated as-is.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from hsf import kernel as _kernel
from hsf.digestion import DigestedWord, digest_sequence, lift
from hsf.frameworks import FrameworkMatch, instantiate, match_framework
from hsf.lexicon import (
    Diagnostic,
    Layer,
    MatchIndex,
    Ruleset,
    build_index,
    load_ruleset_path,
    seq_text,
    validate_ruleset,
)
from hsf.tokenizer import (
    KIND_KEYWORD,
    KIND_SEPARATOR,
    KIND_UNKNOWN,
    Token,
    segment,
    token_label,
)

__all__ = [
    "SENTENCE_JOINER",
    "EmptyInputError",
    "InvalidRulesetError",
    "TraceToken",
    "LayerRecord",
    "SentenceTrace",
    "ParseTrace",
    "Engine",
    "split_sentences",
    "normalize",
    "parse",
]

SENTENCE_JOINER = "，"


class EmptyInputError(ValueError):
    """Input is empty, or nothing remains once separators are consumed."""


class InvalidRulesetError(ValueError):
    """Ruleset failed validation; carries the diagnostics."""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics if d.severity == "error")
        super().__init__(f"invalid ruleset: {lines}")


class TraceToken(NamedTuple):
    surface: str
    span: tuple[int, int]
    kind: str
    label: Optional[str]


@dataclass
class LayerRecord:
    layer_id: int
    tokens: list[TraceToken]
    digested: list[DigestedWord]
    framework: Optional[str]
    canonical: str


@dataclass
class SentenceTrace:
    span: tuple[int, int]
    layers: list[LayerRecord] = field(default_factory=list)

    @property
    def canonical(self) -> str:
        return self.layers[-1].canonical


@dataclass
class ParseTrace:
    input: str
    sentences: list[SentenceTrace]
    canonical: str
    unknown_count: int

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "canonical": self.canonical,
            "unknown_count": self.unknown_count,
            "sentences": [
                {
                    "layers": [
                        {
                            "id": rec.layer_id,
                            "tokens": [
                                {"surface": t.surface, "span": list(t.span),
                                 "kind": t.kind, "label": t.label}
                                for t in rec.tokens
                            ],
                            "digested": [
                                [w.representative, w.label, w.kind]
                                for w in rec.digested
                            ],
                            "framework": rec.framework,
                            "canonical": rec.canonical,
                        }
                        for rec in sent.layers
                    ]
                }
                for sent in self.sentences
            ],
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=indent)


class Engine:
    """Immutable parsing engine built from a validated ruleset.

    Safe for concurrent reads; construction validates the ruleset and
    raises InvalidRulesetError on any error-severity diagnostic.
    """

    def __init__(self, ruleset: Ruleset, kernel: str = "auto") -> None:
        diags = validate_ruleset(ruleset)
        errors = [d for d in diags if d.severity == "error"]
        if errors:
            raise InvalidRulesetError(errors)
        self.ruleset = ruleset
        self.warnings = [d for d in diags if d.severity == "warning"]
        self.kernel = _kernel.get_kernel(kernel)
        self.indexes: dict[int, MatchIndex] = {
            layer.id: build_index(layer) for layer in ruleset.layers}
        layer1 = ruleset.layers[0]
        self._connector_classes = {
            cid for cid, cls in enumerate(layer1.classes)
            if layer1.connector_label is not None
            and cls.label == layer1.connector_label}

    @classmethod
    def from_path(cls, path, kernel: str = "auto") -> "Engine":
        return cls(load_ruleset_path(path), kernel=kernel)

    @property
    def layer1(self) -> Layer:
        return self.ruleset.layers[0]

    def framework(self, name: str):
        """(layer, framework) for a framework name, or None."""
        for layer in self.ruleset.layers:
            for fw in layer.frameworks:
                if fw.name == name:
                    return layer, fw
        return None

    # ------------------------------------------------------------------
    # tokenization and sentence splitting
    # ------------------------------------------------------------------
    def tokenize(self, text: str) -> list[Token]:
        """Full layer-1 token list, separators and connectors included."""
        text = self._check_input(text)
        return segment(self.layer1, self.indexes[1], text, self.kernel)

    def _check_input(self, text: str) -> str:
        text = unicodedata.normalize("NFC", text)
        if not text.strip():
            raise EmptyInputError("empty input")
        return text

    def _is_connector(self, token: Token) -> bool:
        return (token.kind == KIND_KEYWORD
                and isinstance(token.class_ref, int)
                and token.class_ref in self._connector_classes)

    def _sentence_groups(self, tokens: Sequence[Token]) -> list[list[Token]]:
        groups: list[list[Token]] = []
        current: list[Token] = []
        for token in tokens:
            if token.kind == KIND_SEPARATOR or self._is_connector(token):
                if current:
                    groups.append(current)
                    current = []
                continue
            current.append(token)
        if current:
            groups.append(current)
        return groups

    def split_sentences(self, text: str) -> list[tuple[int, int]]:
        """Character spans of the simple sentences, separators and
        connector words consumed."""
        groups = self._sentence_groups(self.tokenize(text))
        if not groups:
            raise EmptyInputError("no content")
        return [(g[0].span[0], g[-1].span[1]) for g in groups]

    # ------------------------------------------------------------------
    # parsing
    # ------------------------------------------------------------------
    def parse(self, text: str) -> ParseTrace:
        text = self._check_input(text)
        tokens = segment(self.layer1, self.indexes[1], text, self.kernel)
        groups = self._sentence_groups(tokens)
        if not groups:
            raise EmptyInputError("no content")
        sentences = [self._run_sentence(g) for g in groups]
        canonical = SENTENCE_JOINER.join(s.canonical for s in sentences)
        unknown_count = sum(
            1 for g in groups for t in g if t.kind == KIND_UNKNOWN)
        return ParseTrace(input=text, sentences=sentences, canonical=canonical,
                          unknown_count=unknown_count)

    def normalize(self, text: str) -> str:
        """Canonical equivalent of `text`; unknown words pass through
        verbatim."""
        return self.parse(text).canonical

    def _run_sentence(self, tokens: list[Token]) -> SentenceTrace:
        sentence_span = (tokens[0].span[0], tokens[-1].span[1])
        trace = SentenceTrace(span=sentence_span)
        layer1 = self.layer1
        words = digest_sequence(layer1, tokens)
        displays = [TraceToken(t.surface, t.span, t.kind, token_label(layer1, t))
                    for t in tokens]
        layers = self.ruleset.layers
        for pos, layer in enumerate(layers):
            if layer.id != 1:
                displays, words = self._relayer(layer, words)
            fm = match_framework(layer, words)
            if fm is not None:
                canonical = instantiate(fm)
            else:
                canonical = "".join(w.representative for w in words)
            trace.layers.append(LayerRecord(
                layer_id=layer.id, tokens=displays, digested=words,
                framework=fm.name if fm is not None else None,
                canonical=canonical))
            if pos + 1 < len(layers):
                if fm is not None:
                    # The matched sentence is one word of the next layer.
                    words = [DigestedWord(representative=canonical,
                                          label=fm.name, kind=KIND_KEYWORD,
                                          source_span=sentence_span,
                                          layer=layer.id)]
        return trace

    def _relayer(self, layer: Layer,
                 words: list[DigestedWord]) -> tuple[list[TraceToken], list[DigestedWord]]:
        """Group the previous layer's words by this layer's classes."""
        elements = lift([w.representative for w in words])
        idx = self.indexes[layer.id]
        new_words: list[DigestedWord] = []
        displays: list[TraceToken] = []
        for token in segment(layer, idx, elements):
            s, e = token.span
            if token.kind == KIND_KEYWORD:
                cls = layer.classes[token.class_ref]  # type: ignore[index]
                span = (words[s].source_span[0], words[e - 1].source_span[1])
                new_words.append(DigestedWord(
                    representative=seq_text(cls.representative),
                    label=cls.label, kind=KIND_KEYWORD, source_span=span,
                    layer=layer.id))
                displays.append(TraceToken(token.surface, token.span,
                                           KIND_KEYWORD, cls.label))
            else:
                # No class groups this element; the underlying word passes
                # through unchanged (data and unknown words in particular).
                word = words[s]
                new_words.append(word)
                displays.append(TraceToken(token.surface, token.span,
                                           word.kind, word.label))
        return displays, new_words


def split_sentences(engine: Engine, text: str) -> list[tuple[int, int]]:
    return engine.split_sentences(text)


def normalize(engine: Engine, text: str) -> str:
    return engine.normalize(text)


def parse(engine: Engine, text: str) -> ParseTrace:
    return engine.parse(text)
