import json

import pytest

from hsf.digestion import UNKNOWN_LABEL, digest, digest_sequence, lift
from hsf.lexicon import build_index, load_ruleset
from hsf.tokenizer import Token, segment


def tokens_for(demo_ruleset, text):
    layer = demo_ruleset.layers[0]
    return layer, segment(layer, build_index(layer), text)


class TestDigest:
    def test_keyword_maps_to_class_representative(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "打开")
        word = digest(layer, tokens[0])
        assert (word.representative, word.label) == ("开", "open-action")
        assert word.kind == "keyword"

    def test_representative_is_fixed_point(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "开")
        word = digest(layer, tokens[0])
        assert (word.representative, word.label) == ("开", "open-action")

    def test_synonym_start_matches_same_class(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "启动")
        assert digest(layer, tokens[0]).representative == "开"

    def test_data_word_keeps_wrap_and_label(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "打开www.baidu.com")
        word = digest(layer, tokens[1])
        assert (word.representative, word.label) == ("“www.baidu.com”", "网址")
        assert word.unwrapped == "www.baidu.com"
        assert word.kind == "data"

    def test_unknown_passes_through(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "qqq")
        word = digest(layer, tokens[0])
        assert (word.representative, word.label) == ("qqq", UNKNOWN_LABEL)

    def test_source_span_traceability(self, demo_ruleset):
        text = "打开www.baidu.com"
        layer, tokens = tokens_for(demo_ruleset, text)
        for token in tokens:
            word = digest(layer, token)
            s, e = word.source_span
            assert text[s:e] == token.surface

    def test_separator_tokens_are_rejected(self, demo_ruleset):
        layer = demo_ruleset.layers[0]
        sep = Token(surface="，", span=(0, 1), kind="separator",
                    class_ref=None, canonical_surface="，")
        with pytest.raises(ValueError):
            digest(layer, sep)

    def test_class_ref_out_of_range_is_internal_error(self, demo_ruleset):
        layer = demo_ruleset.layers[0]
        bad = Token(surface="开", span=(0, 1), kind="keyword",
                    class_ref=999, canonical_surface="开")
        with pytest.raises(RuntimeError):
            digest(layer, bad)


class TestDigestSequence:
    def test_empty_sequence(self, demo_ruleset):
        assert digest_sequence(demo_ruleset.layers[0], []) == []

    def test_open_url_pair(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "打开www.baidu.com")
        words = digest_sequence(layer, tokens)
        assert [(w.representative, w.label) for w in words] == [
            ("开", "open-action"), ("“www.baidu.com”", "网址")]

    def test_click_coordinate_pair(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "鼠标左键双击（19，16）")
        words = digest_sequence(layer, tokens)
        assert [(w.representative, w.label) for w in words] == [
            ("双击", "click-action"), ("（19，16）", "坐标")]

    def test_order_and_length_preserved(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "关闭当前页面")
        words = digest_sequence(layer, tokens)
        assert len(words) == len(tokens)
        assert [w.source_span for w in words] == [t.span for t in tokens]

    def test_label_totality(self, demo_ruleset):
        layer = demo_ruleset.layers[0]
        labels = {c.label for c in layer.classes}
        labels |= {r.label for r in layer.recognizers}
        labels |= {UNKNOWN_LABEL}
        _, tokens = tokens_for(demo_ruleset, "打开www.baidu.com等qqq7秒")
        for word in digest_sequence(layer, tokens):
            assert word.label in labels


class TestLift:
    def test_five_repetitions(self):
        assert lift(["S0"] * 5) == ("S0",) * 5

    def test_single_sentence(self):
        assert lift(["最大化"]) == ("最大化",)

    def test_layer1_outputs_become_layer2_elements(self, demo_ruleset):
        layer, tokens = tokens_for(demo_ruleset, "打开www.baidu.com")
        words = digest_sequence(layer, tokens)
        assert lift([w.representative for w in words]) == (
            "开", "“www.baidu.com”")
