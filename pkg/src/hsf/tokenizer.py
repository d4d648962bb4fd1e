"""Segmentation: keyword-first greedy longest match, then data-word
recognition on whatever the keyword pass left behind, then unknown spans.

Pass 1 walks the layer's match index left to right, taking the longest
member at each position and skipping single elements on a miss. Where no
keyword starts and a URL could, the URL recognizer is consulted inline so
keywords buried inside URLs cannot split them. Pass 2 runs the recognizers
over each residual span; pass 3 splits what remains into separator tokens
and maximal unknown spans. Token spans always partition the input.
"""

from __future__ import annotations

import re
import weakref
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from hsf import kernel as _kernel
from hsf.lexicon import (
    Layer,
    MatchIndex,
    Recognizer,
    WordSeq,
    compile_restricted,
    seq_text,
)

__all__ = [
    "SEPARATORS",
    "Token",
    "RecognizerMatch",
    "segment",
    "recognize",
    "builtin_url_match",
    "token_label",
]

# Sentence separators; consumed by compound splitting, never unknowns.
SEPARATORS = frozenset("，。；、\n")

KIND_KEYWORD = "keyword"
KIND_DATA = "data"
KIND_UNKNOWN = "unknown"
KIND_SEPARATOR = "separator"

_INTEGER_RX = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Token:
    """A matched span: surface slice, its kind, and what it resolved to.

    `class_ref` is the class id for keywords, the recognizer label for data
    words, and None otherwise. `canonical_surface` differs from `surface`
    only for data words with a canonical wrap.
    """

    surface: str
    span: tuple[int, int]
    kind: str
    class_ref: Union[int, str, None]
    canonical_surface: str

    def __post_init__(self) -> None:
        if self.span[1] <= self.span[0]:
            raise ValueError("token span must be non-empty")


class RecognizerMatch(NamedTuple):
    label: str
    start: int
    length: int
    canonical_surface: str


class _CompiledRecognizer:
    __slots__ = ("label", "kind", "rx", "wrap")

    def __init__(self, rec: Recognizer) -> None:
        self.label = rec.label
        self.kind = rec.kind
        self.wrap = rec.wrap
        self.rx: Optional[re.Pattern[str]] = None
        if rec.kind == "pattern":
            self.rx = compile_restricted(rec.pattern or "")
        elif rec.kind == "integer":
            self.rx = _INTEGER_RX

    def earliest(self, span: str, start: int = 0) -> Optional[tuple[int, int]]:
        """Earliest (pos, length) non-empty match in span[start:], or None."""
        if self.kind == "url":
            for i in range(start, len(span)):
                if _is_url_start(span[i]):
                    ulen = _kernel.url_match_len(span, i)
                    if ulen > 0:
                        return i, ulen
            return None
        assert self.rx is not None
        pos = start
        while pos < len(span):
            m = self.rx.search(span, pos)
            if m is None:
                return None
            if m.end() > m.start():
                return m.start(), m.end() - m.start()
            pos = m.start() + 1  # skip zero-length matches
        return None

    def length_at(self, span: str, pos: int) -> int:
        if self.kind == "url":
            return _kernel.url_match_len(span, pos)
        assert self.rx is not None
        m = self.rx.match(span, pos)
        return 0 if m is None else m.end() - m.start()

    def canonical(self, surface: str) -> str:
        if self.wrap is None:
            return surface
        return self.wrap[0] + surface + self.wrap[1]

    def accepts(self, surface: str) -> bool:
        """Whether the recognizer matches the whole surface."""
        return len(surface) > 0 and self.length_at(surface, 0) == len(surface)


def _is_url_start(c: str) -> bool:
    return c.isascii() and (c.isalnum() or c == "-")


_COMPILED_CACHE: "weakref.WeakKeyDictionary[Layer, list[_CompiledRecognizer]]" = (
    weakref.WeakKeyDictionary())


def _compiled_recognizers(layer: Layer) -> list[_CompiledRecognizer]:
    try:
        return _COMPILED_CACHE[layer]
    except KeyError:
        compiled = [_CompiledRecognizer(r) for r in layer.recognizers]
        _COMPILED_CACHE[layer] = compiled
        return compiled


def builtin_url_match(text: str) -> Optional[int]:
    """Length of the URL at position 0 of `text`, or None."""
    if not text:
        return None
    n = _kernel.url_match_len(text, 0)
    return n if n > 0 else None


def recognize(recognizers: Sequence[Union[Recognizer, _CompiledRecognizer]],
              span: str) -> Optional[RecognizerMatch]:
    """First data word inside `span`: earliest start, then longest match,
    then recognizer order. The match records its start offset within the
    span."""
    if not span:
        return None
    compiled = [r if isinstance(r, _CompiledRecognizer) else _CompiledRecognizer(r)
                for r in recognizers]
    return _recognize_from(compiled, span, 0)


def _recognize_from(compiled: Sequence[_CompiledRecognizer], span: str,
                    start: int) -> Optional[RecognizerMatch]:
    earliest: Optional[int] = None
    for rec in compiled:
        hit = rec.earliest(span, start)
        if hit is not None and (earliest is None or hit[0] < earliest):
            earliest = hit[0]
    if earliest is None:
        return None
    # Every recognizer competes at the winning position: longest match wins,
    # remaining ties go to ruleset order.
    best_len, best_rec = 0, None
    for rec in compiled:
        length = rec.length_at(span, earliest)
        if length > best_len:
            best_len, best_rec = length, rec
    assert best_rec is not None
    return RecognizerMatch(label=best_rec.label, start=earliest, length=best_len,
                           canonical_surface=best_rec.canonical(
                               span[earliest:earliest + best_len]))


def _residual_tokens(layer: Layer, text: str, start: int, end: int,
                     out: list[Token]) -> None:
    """Pass 2 + 3 over one unmatched span [start, end)."""
    compiled = _compiled_recognizers(layer) if layer.id == 1 else []
    span = text[start:end]
    local = 0
    while local < len(span):
        hit = _recognize_from(compiled, span, local) if compiled else None
        if hit is None:
            _plain_tokens(text, start + local, end, out)
            return
        pos = start + hit.start
        if hit.start > local:
            _plain_tokens(text, start + local, pos, out)
        out.append(Token(surface=span[hit.start:hit.start + hit.length],
                         span=(pos, pos + hit.length),
                         kind=KIND_DATA, class_ref=hit.label,
                         canonical_surface=hit.canonical_surface))
        local = hit.start + hit.length


def _plain_tokens(text: str, start: int, end: int, out: list[Token]) -> None:
    """Pass 3: separator characters and maximal unknown runs."""
    i = start
    while i < end:
        if text[i] in SEPARATORS:
            out.append(Token(surface=text[i], span=(i, i + 1),
                             kind=KIND_SEPARATOR, class_ref=None,
                             canonical_surface=text[i]))
            i += 1
            continue
        j = i
        while j < end and text[j] not in SEPARATORS:
            j += 1
        out.append(Token(surface=text[i:j], span=(i, j), kind=KIND_UNKNOWN,
                         class_ref=None, canonical_surface=text[i:j]))
        i = j


def _url_recognizer(layer: Layer) -> Optional[_CompiledRecognizer]:
    for rec in _compiled_recognizers(layer):
        if rec.kind == "url":
            return rec
    return None


def _segment_surface(layer: Layer, idx: MatchIndex, text: str,
                     kern=None) -> list[Token]:
    kern = kern or _kernel.get_kernel("auto")
    url_rec = _url_recognizer(layer)
    ex_children, ex_terminal, fo_children, fo_terminal = idx.kernel_tables
    spans = kern.scan_layer1(ex_children, ex_terminal, fo_children, fo_terminal,
                             text, url_rec is not None)
    tokens: list[Token] = []
    prev = 0
    for s, e, cls in spans:
        if s > prev:
            _residual_tokens(layer, text, prev, s, tokens)
        surface = text[s:e]
        if cls == _kernel.URL_SPAN:
            assert url_rec is not None
            tokens.append(Token(surface=surface, span=(s, e), kind=KIND_DATA,
                                class_ref=url_rec.label,
                                canonical_surface=url_rec.canonical(surface)))
        else:
            tokens.append(Token(surface=surface, span=(s, e), kind=KIND_KEYWORD,
                                class_ref=cls, canonical_surface=surface))
        prev = e
    if prev < len(text):
        _residual_tokens(layer, text, prev, len(text), tokens)
    return tokens


def _segment_elements(idx: MatchIndex, elements: tuple[str, ...]) -> list[Token]:
    # Upper layers: greedy longest match over element texts; recognizers and
    # separators do not apply, so misses pass through one element at a time.
    tokens: list[Token] = []
    i, n = 0, len(elements)
    while i < n:
        hit = idx.longest_match(elements, i)
        if hit is not None:
            cls, length = hit
            surface = "".join(elements[i:i + length])
            tokens.append(Token(surface=surface, span=(i, i + length),
                                kind=KIND_KEYWORD, class_ref=cls,
                                canonical_surface=surface))
            i += length
        else:
            tokens.append(Token(surface=elements[i], span=(i, i + 1),
                                kind=KIND_UNKNOWN, class_ref=None,
                                canonical_surface=elements[i]))
            i += 1
    return tokens


def segment(layer: Layer, idx: MatchIndex, input_seq: WordSeq,
            kern=None) -> list[Token]:
    """Segment one layer's input into tokens whose spans partition it.

    Layer 1 takes a surface string and runs all three passes; upper layers
    take a tuple of lower-layer representative texts and run the keyword
    pass only (spans are element indices there).
    """
    if len(input_seq) == 0:
        raise ValueError("segment: input must be non-empty")
    if isinstance(input_seq, str):
        if layer.id != 1:
            raise ValueError("string input is only valid for layer 1")
        return _segment_surface(layer, idx, input_seq, kern)
    return _segment_elements(idx, input_seq)


def token_label(layer: Layer, token: Token) -> Optional[str]:
    """Display label for a token: class label, recognizer label, or None."""
    if token.kind == KIND_KEYWORD and isinstance(token.class_ref, int):
        return layer.classes[token.class_ref].label
    if token.kind == KIND_DATA:
        return token.class_ref  # recognizer label
    return None
