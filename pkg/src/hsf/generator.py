"""Inverting the pipeline: enumerate the surface variants of a framework.

Every literal position expands to all members of the synonym class whose
representative stands there, with upper-layer members expanded further into
lower-layer member combinations (the multiplication rule). Slot positions
are pinned to caller-supplied data surfaces. Enumerating then normalizing
every variant is the round-trip check: each one must come back as the
framework's canonical sentence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from hsf.digestion import DigestedWord
from hsf.frameworks import Framework, FrameworkMatch, Slot, instantiate
from hsf.lexicon import Ruleset, seq_text
from hsf.pipeline import Engine
from hsf.tokenizer import KIND_DATA, KIND_KEYWORD, _compiled_recognizers

__all__ = [
    "DEFAULT_VARIANT_CAP",
    "GeneratorError",
    "UnknownFrameworkError",
    "SlotSurfaceError",
    "VariantCapExceeded",
    "VariantSet",
    "RoundTripReport",
    "enumerate_variants",
    "round_trip_check",
]

DEFAULT_VARIANT_CAP = 10_000


class GeneratorError(ValueError):
    pass


class UnknownFrameworkError(GeneratorError):
    pass


class SlotSurfaceError(GeneratorError):
    pass


class VariantCapExceeded(GeneratorError):
    pass


@dataclass
class VariantSet:
    framework: str
    slot_surfaces: dict[int, str]
    variants: list[str]
    expected_count: int
    canonical: str


@dataclass
class RoundTripReport:
    framework: str
    canonical: str
    total: int
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _expansions(rs: Ruleset, layer_pos: int, text: str) -> list[str]:
    """All surface spellings of the word whose canonical text is `text`,
    searching classes from layer index `layer_pos` downward."""
    for li in range(layer_pos, -1, -1):
        for cls in rs.layers[li].classes:
            if cls.representative_text != text:
                continue
            if li == 0:
                return [m for m in cls.members]  # type: ignore[misc]
            out: list[str] = []
            for member in cls.members:
                element_choices = [_expansions(rs, li - 1, el) for el in member]
                out.extend("".join(combo)
                           for combo in itertools.product(*element_choices))
            return out
    return [text]  # no class produces it: a fixed spelling


def _bind_slot(engine: Engine, layer_pos: int, slot: Slot,
               surface: str) -> DigestedWord:
    """Digested word a slot surface would produce, for instantiation."""
    layer1 = engine.ruleset.layers[0]
    for rec in _compiled_recognizers(layer1):
        if rec.label == slot.label:
            if not rec.accepts(surface):
                raise SlotSurfaceError(
                    f"slot {slot.index}: surface {surface!r} is rejected by "
                    f"recognizer {slot.label!r}")
            return DigestedWord(representative=rec.canonical(surface),
                                label=slot.label, kind=KIND_DATA,
                                source_span=(0, len(surface)), layer=1,
                                unwrapped=surface)
    for li in range(layer_pos, -1, -1):
        for cls in engine.ruleset.layers[li].classes:
            if cls.label != slot.label:
                continue
            if all(seq_text(m) != surface for m in cls.members):
                raise SlotSurfaceError(
                    f"slot {slot.index}: surface {surface!r} is not a member "
                    f"of class {slot.label!r}")
            return DigestedWord(representative=cls.representative_text,
                                label=cls.label, kind=KIND_KEYWORD,
                                source_span=(0, len(surface)), layer=li + 1)
    raise SlotSurfaceError(
        f"slot {slot.index}: label {slot.label!r} names no recognizer or class")


def enumerate_variants(engine: Engine, framework_name: str,
                       slot_surfaces: Optional[Mapping[int, str]] = None,
                       cap: Optional[int] = DEFAULT_VARIANT_CAP) -> VariantSet:
    """All surface variants of a framework, slots pinned to fixed surfaces.

    Variants are emitted in lexicographic order of member indices, leftmost
    pattern position slowest. `cap` bounds the cross product; pass a larger
    value or None to override.
    """
    found = engine.framework(framework_name)
    if found is None:
        raise UnknownFrameworkError(f"unknown framework {framework_name!r}")
    layer, fw = found
    layer_pos = layer.id - 1
    slot_surfaces = dict(slot_surfaces or {})

    choices: list[list[str]] = []
    bindings: dict[int, DigestedWord] = {}
    for elem in fw.pattern:
        if isinstance(elem, str):
            choices.append(_expansions(engine.ruleset, layer_pos, elem))
        else:
            if elem.index not in slot_surfaces:
                raise SlotSurfaceError(f"slot {elem.index} ({elem.label}) has "
                                       f"no supplied surface")
            surface = slot_surfaces[elem.index]
            bindings[elem.index] = _bind_slot(engine, layer_pos, elem, surface)
            choices.append([surface])

    expected = 1
    for c in choices:
        expected *= len(c)
    if cap is not None and expected > cap:
        raise VariantCapExceeded(
            f"framework {framework_name!r} expands to {expected} variants, "
            f"over the cap of {cap}; raise the cap to proceed")

    variants = ["".join(combo) for combo in itertools.product(*choices)]
    if len(set(variants)) != len(variants):
        seen: set[str] = set()
        dupe = next(v for v in variants if v in seen or seen.add(v))  # type: ignore[func-returns-value]
        raise GeneratorError(f"variant {dupe!r} is produced by two member "
                             f"combinations; classes overlap")
    canonical = instantiate(FrameworkMatch(framework=fw, bindings=bindings))
    return VariantSet(framework=framework_name, slot_surfaces=slot_surfaces,
                      variants=variants, expected_count=expected,
                      canonical=canonical)


def round_trip_check(engine: Engine, vs: VariantSet) -> RoundTripReport:
    """Normalize every variant and report the ones that do not come back as
    the framework's canonical sentence."""
    report = RoundTripReport(framework=vs.framework, canonical=vs.canonical,
                             total=len(vs.variants))
    for variant in vs.variants:
        got = engine.normalize(variant)
        if got != vs.canonical:
            report.failures.append((variant, got))
    return report
