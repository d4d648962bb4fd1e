"""Rulesets: layered synonym classes, data-word recognizers, frameworks.

A ruleset is the whole "model": an ordered list of layers, each holding
synonym equivalence classes (trees of one forest, each rooted at a
representative), data-word recognizers, and sentence frameworks. Layer-1
members are surface strings; members of layer i>1 are sequences of
layer-(i-1) representatives.

Loading normalizes all text to NFC and auto-selects missing representatives
(shortest member, code-point tie-break). Validation returns diagnostics
instead of raising, so a ruleset can be linted as a whole.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from hsf.frameworks import Framework, FrameworkFormatError, Slot, framework_from_json

__all__ = [
    "WordSeq",
    "Recognizer",
    "SynonymClass",
    "Layer",
    "Ruleset",
    "Diagnostic",
    "RulesetLoadError",
    "PatternError",
    "MatchIndex",
    "load_ruleset",
    "load_ruleset_path",
    "validate_ruleset",
    "build_index",
    "longest_match",
    "compile_restricted",
    "seq_text",
]

# A word sequence: a surface string at layer 1, a tuple of lower-layer
# representative texts above.
WordSeq = Union[str, tuple[str, ...]]

RECOGNIZER_KINDS = ("url", "integer", "pattern")


class RulesetLoadError(ValueError):
    """Malformed ruleset document or schema violation."""


class PatternError(ValueError):
    """Pattern outside the restricted recognizer dialect."""


def seq_text(seq: WordSeq) -> str:
    """Flatten a word sequence to its surface text."""
    return seq if isinstance(seq, str) else "".join(seq)


def _nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


# ---------------------------------------------------------------------------
# Restricted recognizer patterns
# ---------------------------------------------------------------------------
# Allowed: literals, escaped literals, \d, character classes, + * ?,
# alternation, grouping (plain or (?:...)). Everything else - backreferences,
# lookaround, anchors, ., \w and friends - is rejected so rulesets stay
# portable across engines.

_ESCAPABLE_CLASS = "d"  # the only escape with class meaning


def _check_restricted(pattern: str) -> None:
    if not pattern:
        raise PatternError("empty pattern")
    i, n = 0, len(pattern)
    depth = 0
    while i < n:
        c = pattern[i]
        if c == "\\":
            if i + 1 >= n:
                raise PatternError("trailing backslash")
            nxt = pattern[i + 1]
            if nxt.isalnum() and nxt not in _ESCAPABLE_CLASS:
                raise PatternError(f"escape \\{nxt} is not in the restricted dialect")
            i += 2
            continue
        if c == "[":
            j = i + 1
            if j < n and pattern[j] == "^":
                j += 1
            if j < n and pattern[j] == "]":  # leading ] is literal
                j += 1
            while j < n and pattern[j] != "]":
                if pattern[j] == "\\":
                    if j + 1 >= n:
                        raise PatternError("trailing backslash in character class")
                    if pattern[j + 1].isalnum() and pattern[j + 1] not in _ESCAPABLE_CLASS:
                        raise PatternError(
                            f"escape \\{pattern[j + 1]} is not allowed in character classes")
                    j += 2
                else:
                    j += 1
            if j >= n:
                raise PatternError("unterminated character class")
            i = j + 1
            continue
        if c == "(":
            depth += 1
            if pattern.startswith("(?", i) and not pattern.startswith("(?:", i):
                raise PatternError("only plain and (?: ...) groups are allowed")
            i += 3 if pattern.startswith("(?:", i) else 1
            continue
        if c == ")":
            depth -= 1
            if depth < 0:
                raise PatternError("unbalanced parentheses")
            i += 1
            continue
        if c in ".^${}":
            raise PatternError(f"metacharacter {c!r} is not in the restricted dialect")
        i += 1
    if depth != 0:
        raise PatternError("unbalanced parentheses")


def compile_restricted(pattern: str) -> re.Pattern[str]:
    """Compile a recognizer pattern, rejecting anything outside the dialect.

    \\d is ASCII-only, matching the integer recognizer.
    """
    _check_restricted(pattern)
    try:
        return re.compile(pattern, re.ASCII)
    except re.error as exc:
        raise PatternError(str(exc)) from None


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Recognizer:
    """Intensional data-word subclass: URL, integer, or restricted pattern."""

    label: str
    kind: str
    pattern: Optional[str] = None
    wrap: Optional[tuple[str, str]] = None


@dataclass(frozen=True)
class SynonymClass:
    """One tree of the forest: equivalent word sequences plus a representative."""

    label: str
    representative: WordSeq
    members: tuple[WordSeq, ...]
    fold_ascii_case: bool = False
    representative_explicit: bool = False

    @property
    def representative_text(self) -> str:
        return seq_text(self.representative)


@dataclass(eq=False)
class Layer:
    id: int
    classes: tuple[SynonymClass, ...]
    recognizers: tuple[Recognizer, ...] = ()
    frameworks: tuple[Framework, ...] = ()
    connector_label: Optional[str] = None


@dataclass(eq=False)
class Ruleset:
    version: int
    layers: tuple[Layer, ...]
    dimension: Optional[str] = None


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    where: str

    def __str__(self) -> str:
        return f"{self.severity} {self.code}: {self.message} ({self.where})"


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def _auto_representative(members: Sequence[WordSeq]) -> WordSeq:
    # Shortest member; ties broken by smallest code-point order.
    return min(members, key=lambda m: (len(m), m))


def _parse_member(obj: object, layer_id: int, where: str) -> WordSeq:
    if layer_id == 1:
        if not isinstance(obj, str):
            raise RulesetLoadError(f"{where}: layer-1 members must be strings")
        return _nfc(obj)
    if not isinstance(obj, list) or not all(isinstance(e, str) for e in obj):
        raise RulesetLoadError(
            f"{where}: layer-{layer_id} members must be arrays of strings")
    return tuple(_nfc(e) for e in obj)


def _parse_class(obj: object, layer_id: int, where: str) -> SynonymClass:
    if not isinstance(obj, dict):
        raise RulesetLoadError(f"{where}: expected an object")
    unknown = set(obj) - {"label", "representative", "members", "fold_ascii_case"}
    if unknown:
        raise RulesetLoadError(f"{where}: unknown keys {sorted(unknown)}")
    label = obj.get("label")
    if not isinstance(label, str):
        raise RulesetLoadError(f"{where}.label: expected a string")
    raw_members = obj.get("members")
    if not isinstance(raw_members, list) or not raw_members:
        raise RulesetLoadError(f"{where}.members: expected a non-empty array")
    members = tuple(_parse_member(m, layer_id, f"{where}.members[{i}]")
                    for i, m in enumerate(raw_members))
    fold = obj.get("fold_ascii_case", False)
    if not isinstance(fold, bool):
        raise RulesetLoadError(f"{where}.fold_ascii_case: expected a boolean")
    raw_rep = obj.get("representative")
    if raw_rep is None:
        rep = _auto_representative(members)
        explicit = False
    else:
        rep = _parse_member(raw_rep, layer_id, f"{where}.representative")
        explicit = True
    return SynonymClass(label=_nfc(label), representative=rep, members=members,
                        fold_ascii_case=fold, representative_explicit=explicit)


def _parse_recognizer(obj: object, where: str) -> Recognizer:
    if not isinstance(obj, dict):
        raise RulesetLoadError(f"{where}: expected an object")
    unknown = set(obj) - {"label", "kind", "pattern", "wrap"}
    if unknown:
        raise RulesetLoadError(f"{where}: unknown keys {sorted(unknown)}")
    label = obj.get("label")
    if not isinstance(label, str) or not label:
        raise RulesetLoadError(f"{where}.label: expected a non-empty string")
    kind = obj.get("kind")
    if kind not in RECOGNIZER_KINDS:
        raise RulesetLoadError(f"{where}.kind: expected one of {RECOGNIZER_KINDS}")
    pattern = obj.get("pattern")
    if kind == "pattern":
        if not isinstance(pattern, str):
            raise RulesetLoadError(f"{where}.pattern: required for kind=pattern")
        pattern = _nfc(pattern)
    elif pattern is not None:
        raise RulesetLoadError(f"{where}.pattern: only valid for kind=pattern")
    raw_wrap = obj.get("wrap")
    wrap: Optional[tuple[str, str]] = None
    if raw_wrap is not None:
        if (not isinstance(raw_wrap, list) or len(raw_wrap) != 2
                or not all(isinstance(s, str) for s in raw_wrap)):
            raise RulesetLoadError(f"{where}.wrap: expected [prefix, suffix]")
        wrap = (_nfc(raw_wrap[0]), _nfc(raw_wrap[1]))
    return Recognizer(label=_nfc(label), kind=kind, pattern=pattern, wrap=wrap)


def _nfc_framework(fw: Framework) -> Framework:
    pattern = tuple(_nfc(e) if isinstance(e, str) else Slot(e.index, _nfc(e.label))
                    for e in fw.pattern)
    output = tuple(_nfc(e) if isinstance(e, str) else e for e in fw.output)
    return Framework(name=_nfc(fw.name), pattern=pattern, output=output,
                     pure_slots=fw.pure_slots)


def _parse_layer(obj: object, where: str) -> Layer:
    if not isinstance(obj, dict):
        raise RulesetLoadError(f"{where}: expected an object")
    unknown = set(obj) - {"id", "classes", "recognizers", "frameworks", "connector_label"}
    if unknown:
        raise RulesetLoadError(f"{where}: unknown keys {sorted(unknown)}")
    layer_id = obj.get("id")
    if not isinstance(layer_id, int) or isinstance(layer_id, bool) or layer_id < 1:
        raise RulesetLoadError(f"{where}.id: expected an integer >= 1")
    raw_classes = obj.get("classes", [])
    if not isinstance(raw_classes, list):
        raise RulesetLoadError(f"{where}.classes: expected an array")
    classes = tuple(_parse_class(c, layer_id, f"{where}.classes[{i}]")
                    for i, c in enumerate(raw_classes))
    raw_recs = obj.get("recognizers", [])
    if not isinstance(raw_recs, list):
        raise RulesetLoadError(f"{where}.recognizers: expected an array")
    recognizers = tuple(_parse_recognizer(r, f"{where}.recognizers[{i}]")
                        for i, r in enumerate(raw_recs))
    raw_fws = obj.get("frameworks", [])
    if not isinstance(raw_fws, list):
        raise RulesetLoadError(f"{where}.frameworks: expected an array")
    try:
        frameworks = tuple(_nfc_framework(framework_from_json(f, f"{where}.frameworks[{i}]"))
                           for i, f in enumerate(raw_fws))
    except FrameworkFormatError as exc:
        raise RulesetLoadError(str(exc)) from None
    connector = obj.get("connector_label")
    if connector is not None and not isinstance(connector, str):
        raise RulesetLoadError(f"{where}.connector_label: expected a string")
    return Layer(id=layer_id, classes=classes, recognizers=recognizers,
                 frameworks=frameworks,
                 connector_label=_nfc(connector) if connector is not None else None)


def load_ruleset(data: Union[bytes, str]) -> Ruleset:
    """Load a ruleset from its UTF-8 JSON document.

    Raises RulesetLoadError with a line/column position for malformed JSON
    and with a named field path for schema violations. Semantic problems
    (duplicate members, bad patterns, ...) are left to validate_ruleset.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RulesetLoadError(f"not valid UTF-8 at byte {exc.start}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise RulesetLoadError(
            f"malformed document: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from None
    if not isinstance(doc, dict):
        raise RulesetLoadError("top level: expected an object")
    unknown = set(doc) - {"version", "dimension", "layers"}
    if unknown:
        raise RulesetLoadError(f"top level: unknown keys {sorted(unknown)}")
    version = doc.get("version")
    if version != 1 or isinstance(version, bool):
        raise RulesetLoadError("version: expected 1")
    dimension = doc.get("dimension")
    if dimension is not None and not isinstance(dimension, str):
        raise RulesetLoadError("dimension: expected a string")
    raw_layers = doc.get("layers")
    if not isinstance(raw_layers, list):
        raise RulesetLoadError("layers: expected an array")
    if not raw_layers:
        raise RulesetLoadError("no layers")
    layers = tuple(_parse_layer(l, f"layers[{i}]") for i, l in enumerate(raw_layers))
    return Ruleset(version=version, layers=layers,
                   dimension=_nfc(dimension) if dimension is not None else None)


def load_ruleset_path(path) -> Ruleset:
    with open(path, "rb") as fh:
        return load_ruleset(fh.read())


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _rec_fullmatch_len(rec: Recognizer, text: str) -> bool:
    # Whether the recognizer matches `text` in full (keyword/data overlap check).
    from hsf import kernel  # local import; kernel has no lexicon dependency

    if rec.kind == "url":
        return kernel.url_match_len(text, 0) == len(text)
    if rec.kind == "integer":
        return text.isascii() and text.isdigit()
    try:
        rx = compile_restricted(rec.pattern or "")
    except PatternError:
        return False  # reported separately as bad-pattern
    return rx.fullmatch(text) is not None


def validate_ruleset(rs: Ruleset) -> list[Diagnostic]:
    """Collect every rule violation in the ruleset; empty list means valid."""
    diags: list[Diagnostic] = []

    def error(code: str, message: str, where: str) -> None:
        diags.append(Diagnostic("error", code, message, where))

    def warning(code: str, message: str, where: str) -> None:
        diags.append(Diagnostic("warning", code, message, where))

    for i, layer in enumerate(rs.layers):
        if layer.id != i + 1:
            error("non-consecutive-layer-ids",
                  f"layer ids must be 1..n consecutive; found id {layer.id} "
                  f"at position {i + 1}", f"layers[{i}]")

    known_labels: set[str] = {"unknown"}
    lower_rep_texts: set[str] = set()
    framework_names: set[str] = set()

    for li, layer in enumerate(rs.layers):
        lw = f"layers[{li}]"
        seen_members: dict[WordSeq, str] = {}
        compiled_recs: list[Recognizer] = []

        if layer.recognizers and layer.id != 1:
            error("recognizer-on-upper-layer",
                  "recognizers operate on surface text and are only allowed "
                  "on layer 1", f"{lw}.recognizers")

        for ri, rec in enumerate(layer.recognizers):
            rw = f"{lw}.recognizers[{ri}]"
            if rec.kind == "pattern":
                try:
                    compile_restricted(rec.pattern or "")
                    compiled_recs.append(rec)
                except PatternError as exc:
                    error("bad-pattern", f"recognizer {rec.label!r}: {exc}", rw)
            else:
                compiled_recs.append(rec)
            known_labels.add(rec.label)

        for ci, cls in enumerate(layer.classes):
            cw = f"{lw}.classes[{ci}]"
            known_labels.add(cls.label)
            for mi, member in enumerate(cls.members):
                mw = f"{cw}.members[{mi}]"
                if len(member) == 0 or (isinstance(member, tuple) and "" in member):
                    error("empty-member", "empty member", mw)
                    continue
                if member in seen_members:
                    error("duplicate-member",
                          f"member {seq_text(member)!r} already belongs to "
                          f"class {seen_members[member]}", mw)
                else:
                    seen_members[member] = cw
                if isinstance(member, tuple):
                    for el in member:
                        if el and el not in lower_rep_texts:
                            error("unproducible-member",
                                  f"element {el!r} is not a representative of "
                                  f"any lower layer", mw)
                if layer.id == 1 and isinstance(member, str) and member:
                    for rec in compiled_recs:
                        if _rec_fullmatch_len(rec, member):
                            error("member-shadows-recognizer",
                                  f"member {member!r} is fully matched by "
                                  f"recognizer {rec.label!r}; a surface form "
                                  f"may not be both keyword and data word", mw)
            if cls.representative not in cls.members:
                error("representative-not-member",
                      f"representative {seq_text(cls.representative)!r} is not "
                      f"a member of its class", cw)
            elif cls.representative_explicit:
                shortest = min(len(m) for m in cls.members)
                if len(cls.representative) > shortest:
                    warning("representative-not-shortest",
                            f"explicit representative "
                            f"{seq_text(cls.representative)!r} is longer than "
                            f"the shortest member", cw)

        if layer.connector_label is not None:
            if not any(c.label == layer.connector_label for c in layer.classes):
                error("unknown-connector-label",
                      f"connector_label {layer.connector_label!r} names no "
                      f"class of this layer", f"{lw}.connector_label")

        for fi, fw in enumerate(layer.frameworks):
            fww = f"{lw}.frameworks[{fi}]"
            if fw.name in framework_names:
                error("duplicate-framework-name",
                      f"framework name {fw.name!r} is already in use", fww)
            framework_names.add(fw.name)
            slot_indices = [s.index for s in fw.slots]
            if sorted(slot_indices) != list(range(len(slot_indices))):
                error("bad-slot-indices",
                      "slot indices must be unique and cover 0..k-1", fww)
            if fw.literal_count == 0 and not fw.pure_slots:
                error("no-literal-pattern",
                      "pattern has no literal; set pure_slots to allow", fww)
            for s in fw.slots:
                if s.label not in known_labels:
                    error("unknown-slot-label",
                          f"slot label {s.label!r} names no class or "
                          f"recognizer", fww)
            for oi, elem in enumerate(fw.output):
                if not isinstance(elem, str) and elem.ref not in slot_indices:
                    error("bad-output-ref",
                          f"output references slot {elem.ref} not present in "
                          f"the pattern", f"{fww}.output[{oi}]")

        lower_rep_texts |= {cls.representative_text for cls in layer.classes}

    return diags


# ---------------------------------------------------------------------------
# Match index
# ---------------------------------------------------------------------------

def _ascii_lower(s: str) -> str:
    return "".join(chr(ord(c) + 32) if "A" <= c <= "Z" else c for c in s)


class _Trie:
    """Prefix tree over hashable element keys; terminals carry a class id."""

    __slots__ = ("children", "terminal")

    def __init__(self) -> None:
        self.children: list[dict] = [{}]
        self.terminal: list[int] = [-1]

    def insert(self, keys: Sequence, class_id: int) -> None:
        node = 0
        for key in keys:
            nxt = self.children[node].get(key)
            if nxt is None:
                nxt = len(self.children)
                self.children[node][key] = nxt
                self.children.append({})
                self.terminal.append(-1)
            node = nxt
        self.terminal[node] = class_id

    def walk_longest(self, keys: Sequence, pos: int) -> tuple[int, int]:
        """Longest terminal reachable from `pos`; (-1, pos) when none."""
        node, best_cls, best_end = 0, -1, pos
        for j in range(pos, len(keys)):
            nxt = self.children[node].get(keys[j])
            if nxt is None:
                break
            node = nxt
            if self.terminal[node] >= 0:
                best_cls, best_end = self.terminal[node], j + 1
        return best_cls, best_end

    @property
    def node_count(self) -> int:
        return len(self.children)

    @property
    def edge_count(self) -> int:
        return sum(len(c) for c in self.children)


class MatchIndex:
    """Immutable searchable form of one layer's forests.

    Holds an exact trie over all members and, when any class folds ASCII
    case, a second trie over the folded forms of those classes' members.
    Layer-1 tries are additionally keyed by code point so the scan kernel
    can walk them without creating substrings.
    """

    def __init__(self, layer: Layer) -> None:
        self.layer_id = layer.id
        self.classes = layer.classes
        self._exact = _Trie()
        self._fold: Optional[_Trie] = None
        self._members: list[tuple[WordSeq, int]] = []
        for cid, cls in enumerate(layer.classes):
            for member in cls.members:
                keys = self._keys(member)
                self._exact.insert(keys, cid)
                self._members.append((member, cid))
                if cls.fold_ascii_case:
                    if self._fold is None:
                        self._fold = _Trie()
                    self._fold.insert(self._fold_keys(member), cid)

    def _keys(self, seq: WordSeq) -> Sequence:
        if self.layer_id == 1:
            return [ord(c) for c in seq]  # type: ignore[arg-type]
        return seq  # tuple of element texts

    def _fold_keys(self, seq: WordSeq) -> Sequence:
        if self.layer_id == 1:
            return [ord(c) + 32 if "A" <= c <= "Z" else ord(c) for c in seq]  # type: ignore[arg-type]
        return tuple(_ascii_lower(e) for e in seq)

    # Flattened views handed to the scan kernel (layer 1 only).
    @property
    def kernel_tables(self) -> tuple[list[dict], list[int], Optional[list[dict]], Optional[list[int]]]:
        fold = self._fold
        return (self._exact.children, self._exact.terminal,
                fold.children if fold else None,
                fold.terminal if fold else None)

    def entries(self) -> Iterator[tuple[WordSeq, int]]:
        """All (member, class id) pairs reachable in the index."""
        return iter(self._members)

    @property
    def node_count(self) -> int:
        return self._exact.node_count + (self._fold.node_count if self._fold else 0)

    @property
    def edge_count(self) -> int:
        return self._exact.edge_count + (self._fold.edge_count if self._fold else 0)

    def longest_match(self, seq: WordSeq, pos: int) -> Optional[tuple[int, int]]:
        """Class and length of the longest member prefixing seq[pos:].

        Ties between the exact and case-folded walks go to the exact one.
        """
        if not 0 <= pos < len(seq):
            raise IndexError(f"position {pos} out of range for length {len(seq)}")
        keys = self._keys(seq)
        cls, end = self._exact.walk_longest(keys, pos)
        if self._fold is not None:
            fcls, fend = self._fold.walk_longest(self._fold_keys(seq), pos)
            if fcls >= 0 and fend > end:
                cls, end = fcls, fend
        if cls < 0:
            return None
        return cls, end - pos


def build_index(layer: Layer) -> MatchIndex:
    return MatchIndex(layer)


def longest_match(idx: MatchIndex, seq: WordSeq, pos: int) -> Optional[tuple[int, int]]:
    return idx.longest_match(seq, pos)
