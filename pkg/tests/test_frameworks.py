import pytest

from hsf.digestion import DigestedWord
from hsf.frameworks import (
    Framework,
    FrameworkFormatError,
    FrameworkMatch,
    OutputSlot,
    Slot,
    framework_from_json,
    instantiate,
    match_framework,
)
from hsf.lexicon import Layer


def word(rep, label, kind="keyword", unwrapped=""):
    return DigestedWord(representative=rep, label=label, kind=kind,
                        source_span=(0, len(rep)), layer=1,
                        unwrapped=unwrapped)


def layer_with(*frameworks):
    return Layer(id=2, classes=(), frameworks=tuple(frameworks))


OPEN_URL = Framework(name="open-url",
                     pattern=("开", Slot(0, "网址")),
                     output=("开", OutputSlot(0, unwrap=True)))
OPEN_PROGRAM = Framework(name="open-program",
                         pattern=("开", Slot(0, "程序名")),
                         output=("开", OutputSlot(0)))
CLOSE_LITERAL = Framework(name="close-program",
                          pattern=("关", "程序"),
                          output=("关程序",))


class TestMatch:
    def test_url_slot_binds(self):
        words = [word("开", "open-action"),
                 word("“www.baidu.com”", "网址", kind="data",
                      unwrapped="www.baidu.com")]
        m = match_framework(layer_with(OPEN_URL), words)
        assert m is not None and m.name == "open-url"
        assert m.bindings[0].representative == "“www.baidu.com”"

    def test_program_slot_binds(self):
        words = [word("开", "open-action"), word("WPS", "程序名", kind="data")]
        m = match_framework(layer_with(OPEN_URL, OPEN_PROGRAM), words)
        assert m is not None and m.name == "open-program"

    def test_all_literal_pattern(self):
        words = [word("关", "close-action"), word("程序", "program-word")]
        m = match_framework(layer_with(CLOSE_LITERAL), words)
        assert m is not None
        assert m.literal_count == 2

    def test_unknown_word_blocks_typed_slots(self):
        words = [word("开", "open-action"),
                 word("qqq", "unknown", kind="unknown")]
        assert match_framework(layer_with(OPEN_URL, OPEN_PROGRAM), words) is None

    def test_unknown_slot_label_can_accept_unknowns(self):
        fw = Framework(name="echo", pattern=("开", Slot(0, "unknown")),
                       output=("开", OutputSlot(0)))
        words = [word("开", "open-action"),
                 word("qqq", "unknown", kind="unknown")]
        m = match_framework(layer_with(fw), words)
        assert m is not None and m.name == "echo"

    def test_exact_length_only(self):
        words = [word("关", "close-action")]
        assert match_framework(layer_with(CLOSE_LITERAL), words) is None
        words3 = [word("关", "close-action"), word("程序", "program-word"),
                  word("程序", "program-word")]
        assert match_framework(layer_with(CLOSE_LITERAL), words3) is None

    def test_most_literals_wins(self):
        loose = Framework(name="loose", pattern=(Slot(0, "close-action"), "程序"),
                          output=(OutputSlot(0), "程序"))
        tight = Framework(name="tight", pattern=("关", "程序"),
                          output=("关程序",))
        words = [word("关", "close-action"), word("程序", "program-word")]
        m = match_framework(layer_with(loose, tight), words)
        assert m is not None and m.name == "tight"

    def test_tie_broken_by_ruleset_order(self):
        first = Framework(name="first", pattern=("关", "程序"), output=("a",))
        second = Framework(name="second", pattern=("关", "程序"), output=("b",))
        words = [word("关", "close-action"), word("程序", "program-word")]
        m = match_framework(layer_with(first, second), words)
        assert m is not None and m.name == "first"

    def test_no_frameworks_no_match(self):
        assert match_framework(layer_with(), [word("关", "x")]) is None


class TestInstantiate:
    def test_unwrap_emits_raw_surface(self):
        words = [word("开", "open-action"),
                 word("“www.baidu.com”", "网址", kind="data",
                      unwrapped="www.baidu.com")]
        m = match_framework(layer_with(OPEN_URL), words)
        assert instantiate(m) == "开www.baidu.com"

    def test_wrapped_form_is_default(self):
        keep = Framework(name="keep", pattern=("开", Slot(0, "网址")),
                         output=("开", OutputSlot(0)))
        words = [word("开", "open-action"),
                 word("“www.baidu.com”", "网址", kind="data",
                      unwrapped="www.baidu.com")]
        m = match_framework(layer_with(keep), words)
        assert instantiate(m) == "开“www.baidu.com”"

    def test_all_literal_output(self):
        words = [word("关", "close-action"), word("程序", "program-word")]
        m = match_framework(layer_with(CLOSE_LITERAL), words)
        assert instantiate(m) == "关程序"

    def test_identity_template(self):
        identity = Framework(name="id", pattern=("等", Slot(0, "整数"), "秒"),
                             output=("等", OutputSlot(0), "秒"))
        words = [word("等", "wait-action"), word("7", "整数", kind="data"),
                 word("秒", "time-unit")]
        m = match_framework(layer_with(identity), words)
        assert instantiate(m) == "等7秒"

    def test_unbound_slot_ref_is_error(self):
        broken = Framework(name="broken", pattern=("关",),
                           output=(OutputSlot(0),))
        m = FrameworkMatch(framework=broken, bindings={})
        with pytest.raises(ValueError, match="unbound"):
            instantiate(m)

    def test_soundness_output_only_uses_bound_words_and_literals(self):
        words = [word("开", "open-action"), word("WPS", "程序名", kind="data")]
        m = match_framework(layer_with(OPEN_PROGRAM), words)
        out = instantiate(m)
        assert out == "开WPS"
        pieces = {w.representative for w in words}
        pieces |= {e for e in OPEN_PROGRAM.output if isinstance(e, str)}
        assert all(part in pieces for part in ("开", "WPS"))


class TestWireFormat:
    def test_round_trip_of_demo_framework(self):
        fw = framework_from_json({
            "name": "open-url",
            "pattern": ["开", {"slot": 0, "label": "网址"}],
            "output": ["开", {"ref": 0, "unwrap": True}],
        })
        assert fw == OPEN_URL

    @pytest.mark.parametrize("obj, match", [
        ({"pattern": ["a"], "output": ["a"]}, "name"),
        ({"name": "f", "pattern": [], "output": ["a"]}, "pattern"),
        ({"name": "f", "pattern": ["a"], "output": []}, "output"),
        ({"name": "f", "pattern": [1], "output": ["a"]}, "pattern"),
        ({"name": "f", "pattern": [{"slot": -1, "label": "x"}],
          "output": ["a"]}, "slot"),
        ({"name": "f", "pattern": ["a"], "output": [{"ref": 0, "x": 1}]}, "x"),
        ({"name": "f", "pattern": ["a"], "output": ["a"], "zzz": 1}, "zzz"),
    ])
    def test_malformed_objects_rejected(self, obj, match):
        with pytest.raises(FrameworkFormatError, match=match):
            framework_from_json(obj)
