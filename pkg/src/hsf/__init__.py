"""hsf: layered synonym normalization and command parsing.

Maps free-form command text to a canonical form through hierarchical
synonym equivalence classes, data-word recognizers, and slot-filling
sentence frameworks, and can invert the process to enumerate all synonymous
surface variants of a framework.
"""

from importlib import resources as _resources
from pathlib import Path

from hsf.digestion import DigestedWord, digest, digest_sequence, lift
from hsf.frameworks import Framework, FrameworkMatch, instantiate, match_framework
from hsf.generator import (
    RoundTripReport,
    VariantSet,
    enumerate_variants,
    round_trip_check,
)
from hsf.lexicon import (
    Diagnostic,
    Layer,
    MatchIndex,
    Recognizer,
    Ruleset,
    RulesetLoadError,
    SynonymClass,
    build_index,
    load_ruleset,
    load_ruleset_path,
    longest_match,
    validate_ruleset,
)
from hsf.pipeline import (
    Engine,
    EmptyInputError,
    InvalidRulesetError,
    ParseTrace,
    normalize,
    parse,
    split_sentences,
)
from hsf.tokenizer import Token, builtin_url_match, recognize, segment

__version__ = "0.1.0"


def demo_ruleset_path() -> Path:
    """Path of the ruleset shipped with the package."""
    return Path(str(_resources.files("hsf") / "rulesets" / "demo.json"))
