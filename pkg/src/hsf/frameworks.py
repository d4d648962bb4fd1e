"""Sentence frameworks: fixed keyword patterns with typed vacancies.

A framework pattern is a flat list of elements, each either a literal (a
canonical keyword) or a typed slot. A digested word sequence matches a
framework when lengths agree position-wise: literals against word
representatives, slot labels against word labels. The output template
rebuilds the canonical sentence from literals and bound slot values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence, Union

if TYPE_CHECKING:  # avoid an import cycle; words are duck-typed at runtime
    from hsf.digestion import DigestedWord
    from hsf.lexicon import Layer

__all__ = [
    "Slot",
    "OutputSlot",
    "Framework",
    "FrameworkMatch",
    "framework_from_json",
    "match_framework",
    "instantiate",
]


@dataclass(frozen=True)
class Slot:
    """A typed vacancy in a pattern; `label` names the word class it accepts."""

    index: int
    label: str


@dataclass(frozen=True)
class OutputSlot:
    """Reference to a bound slot in the output template.

    With `unwrap` set, the slot emits the raw matched surface instead of the
    canonically wrapped form (e.g. a URL without its quotation marks).
    """

    ref: int
    unwrap: bool = False


PatternElem = Union[str, Slot]
OutputElem = Union[str, OutputSlot]


@dataclass(frozen=True)
class Framework:
    name: str
    pattern: tuple[PatternElem, ...]
    output: tuple[OutputElem, ...]
    # All-slot patterns are rejected by the validator unless opted in.
    pure_slots: bool = False

    @property
    def slots(self) -> tuple[Slot, ...]:
        return tuple(e for e in self.pattern if isinstance(e, Slot))

    @property
    def literal_count(self) -> int:
        return sum(1 for e in self.pattern if isinstance(e, str))


@dataclass
class FrameworkMatch:
    framework: Framework
    bindings: dict[int, "DigestedWord"] = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.framework.name

    @property
    def literal_count(self) -> int:
        return self.framework.literal_count


class FrameworkFormatError(ValueError):
    """Raised when a framework JSON object violates the wire format."""


def framework_from_json(obj: object, where: str = "framework") -> Framework:
    """Parse one framework from its JSON object form.

    Wire format::

        {"name": str,
         "pattern": [str | {"slot": int, "label": str}, ...],
         "output":  [str | {"ref": int, "unwrap": bool?}, ...],
         "pure_slots": bool?}

    Unknown keys are rejected.
    """
    if not isinstance(obj, dict):
        raise FrameworkFormatError(f"{where}: expected an object")
    unknown = set(obj) - {"name", "pattern", "output", "pure_slots"}
    if unknown:
        raise FrameworkFormatError(f"{where}: unknown keys {sorted(unknown)}")
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise FrameworkFormatError(f"{where}.name: expected a non-empty string")
    raw_pattern = obj.get("pattern")
    if not isinstance(raw_pattern, list) or not raw_pattern:
        raise FrameworkFormatError(f"{where}.pattern: expected a non-empty array")
    raw_output = obj.get("output")
    if not isinstance(raw_output, list) or not raw_output:
        raise FrameworkFormatError(f"{where}.output: expected a non-empty array")
    pure_slots = obj.get("pure_slots", False)
    if not isinstance(pure_slots, bool):
        raise FrameworkFormatError(f"{where}.pure_slots: expected a boolean")

    pattern: list[PatternElem] = []
    for i, elem in enumerate(raw_pattern):
        at = f"{where}.pattern[{i}]"
        if isinstance(elem, str):
            if not elem:
                raise FrameworkFormatError(f"{at}: empty literal")
            pattern.append(elem)
        elif isinstance(elem, dict):
            unknown = set(elem) - {"slot", "label"}
            if unknown:
                raise FrameworkFormatError(f"{at}: unknown keys {sorted(unknown)}")
            idx, label = elem.get("slot"), elem.get("label")
            if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
                raise FrameworkFormatError(f"{at}.slot: expected a non-negative integer")
            if not isinstance(label, str):
                raise FrameworkFormatError(f"{at}.label: expected a string")
            pattern.append(Slot(index=idx, label=label))
        else:
            raise FrameworkFormatError(f"{at}: expected a string or slot object")

    output: list[OutputElem] = []
    for i, elem in enumerate(raw_output):
        at = f"{where}.output[{i}]"
        if isinstance(elem, str):
            output.append(elem)
        elif isinstance(elem, dict):
            unknown = set(elem) - {"ref", "unwrap"}
            if unknown:
                raise FrameworkFormatError(f"{at}: unknown keys {sorted(unknown)}")
            ref = elem.get("ref")
            if not isinstance(ref, int) or isinstance(ref, bool) or ref < 0:
                raise FrameworkFormatError(f"{at}.ref: expected a non-negative integer")
            unwrap = elem.get("unwrap", False)
            if not isinstance(unwrap, bool):
                raise FrameworkFormatError(f"{at}.unwrap: expected a boolean")
            output.append(OutputSlot(ref=ref, unwrap=unwrap))
        else:
            raise FrameworkFormatError(f"{at}: expected a string or ref object")

    return Framework(name=name, pattern=tuple(pattern), output=tuple(output),
                     pure_slots=pure_slots)


def _matches(fw: Framework, words: Sequence["DigestedWord"]) -> Optional[FrameworkMatch]:
    if len(words) != len(fw.pattern):
        return None
    bindings: dict[int, "DigestedWord"] = {}
    for elem, word in zip(fw.pattern, words):
        if isinstance(elem, str):
            if word.representative != elem:
                return None
        else:
            if word.label != elem.label:
                return None
            bindings[elem.index] = word
    return FrameworkMatch(framework=fw, bindings=bindings)


def match_framework(layer: "Layer", words: Sequence["DigestedWord"]) -> Optional[FrameworkMatch]:
    """Match `words` against the layer's frameworks.

    Exact-length, position-wise matching. Among matching frameworks the one
    with the most literals wins; remaining ties go to ruleset order.
    """
    best: Optional[FrameworkMatch] = None
    for fw in layer.frameworks:
        m = _matches(fw, words)
        if m is not None and (best is None or m.literal_count > best.literal_count):
            best = m
    return best


def instantiate(fm: FrameworkMatch, fw: Optional[Framework] = None) -> str:
    """Build the canonical sentence from a match, in template order."""
    if fw is None:
        fw = fm.framework
    parts: list[str] = []
    for elem in fw.output:
        if isinstance(elem, str):
            parts.append(elem)
        else:
            try:
                word = fm.bindings[elem.ref]
            except KeyError:
                raise ValueError(f"framework {fw.name!r}: output references "
                                 f"unbound slot {elem.ref}") from None
            parts.append(word.unwrapped if elem.unwrap else word.representative)
    return "".join(parts)
