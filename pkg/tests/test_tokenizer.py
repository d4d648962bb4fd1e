import json

import pytest
from hypothesis import given, settings, strategies as st

from hsf.lexicon import Recognizer, build_index, load_ruleset
from hsf.tokenizer import (
    SEPARATORS,
    builtin_url_match,
    recognize,
    segment,
)

from oracles import brute_keyword_spans


def load_doc(doc):
    return load_ruleset(json.dumps(doc, ensure_ascii=False))


def make_layer(classes, recognizers=None):
    rs = load_doc({"version": 1, "layers": [
        {"id": 1, "classes": classes, "recognizers": recognizers or []}]})
    layer = rs.layers[0]
    return layer, build_index(layer)


@pytest.fixture(scope="module")
def demo_layer1(demo_ruleset):
    return demo_ruleset.layers[0], build_index(demo_ruleset.layers[0])


# ---------------------------------------------------------------------------
# segment, layer 1
# ---------------------------------------------------------------------------

class TestSegmentSurface:
    def test_keyword_then_url(self, demo_layer1):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "打开www.baidu.com")
        assert [(t.kind, t.surface, t.span) for t in tokens] == [
            ("keyword", "打开", (0, 2)),
            ("data", "www.baidu.com", (2, 15)),
        ]
        assert tokens[1].class_ref == "网址"
        assert tokens[1].canonical_surface == "“www.baidu.com”"

    def test_single_representative_covers_input(self, demo_layer1):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "最大化")
        assert len(tokens) == 1
        assert tokens[0].kind == "keyword"
        assert tokens[0].span == (0, 3)

    def test_nothing_matches_is_one_unknown(self, demo_layer1):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "qqq")
        assert [(t.kind, t.span) for t in tokens] == [("unknown", (0, 3))]
        assert tokens[0].class_ref is None

    def test_separators_become_separator_tokens(self, demo_layer1):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "最大化，缩小")
        assert [t.kind for t in tokens] == ["keyword", "separator", "keyword"]

    def test_coordinate_survives_inner_separator(self, demo_layer1):
        # The full-width comma inside （19，16） belongs to the data word,
        # so it must not surface as a separator.
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "双击（19，16），缩小")
        assert [(t.kind, t.surface) for t in tokens] == [
            ("keyword", "双击"), ("data", "（19，16）"),
            ("separator", "，"), ("keyword", "缩小")]
        assert tokens[1].class_ref == "坐标"

    def test_keyword_inside_url_does_not_split_it(self):
        layer, idx = make_layer(
            [{"label": "kw", "members": ["baidu"]}],
            [{"label": "网址", "kind": "url"}])
        tokens = segment(layer, idx, "www.baidu.com")
        assert [(t.kind, t.surface) for t in tokens] == [("data", "www.baidu.com")]

    def test_keyword_pass_precedes_url_when_keyword_starts_first(self):
        # At a position where a keyword matches, the keyword wins even if a
        # URL also starts there.
        layer, idx = make_layer(
            [{"label": "kw", "members": ["www"]}],
            [{"label": "网址", "kind": "url"}])
        tokens = segment(layer, idx, "www.baidu.com")
        assert tokens[0].kind == "keyword"
        assert tokens[0].surface == "www"

    def test_integer_extracted_from_residue(self, demo_layer1):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "等待7秒")
        assert [(t.kind, t.surface) for t in tokens] == [
            ("keyword", "等待"), ("data", "7"), ("keyword", "秒")]
        assert tokens[1].class_ref == "整数"

    def test_unknown_runs_are_maximal(self, demo_layer1):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, "xyz最大化？！abc")
        kinds = [t.kind for t in tokens]
        for i in range(len(kinds) - 1):
            assert not (kinds[i] == "unknown" and kinds[i + 1] == "unknown")

    def test_empty_input_rejected(self, demo_layer1):
        layer, idx = demo_layer1
        with pytest.raises(ValueError):
            segment(layer, idx, "")

    @settings(max_examples=200, deadline=None)
    @given(text=st.text("开关火箭页面ab7，。w.", min_size=1, max_size=80))
    def test_spans_partition_and_reconstruct(self, demo_layer1, text):
        layer, idx = demo_layer1
        tokens = segment(layer, idx, text)
        pos = 0
        for t in tokens:
            assert t.span[0] == pos
            assert t.surface == text[t.span[0]:t.span[1]]
            pos = t.span[1]
        assert pos == len(text)
        assert "".join(t.surface for t in tokens) == text

    @settings(max_examples=150, deadline=None)
    @given(data=st.data())
    def test_pass1_equals_brute_force_segmentation(self, data):
        alphabet = "ab开关火箭xy页"
        members = sorted(data.draw(st.sets(
            st.text(alphabet, min_size=1, max_size=4), min_size=1, max_size=50)))
        classes = [{"label": f"c{i}", "members": [m]}
                   for i, m in enumerate(members)]
        layer, idx = make_layer(classes)
        text = data.draw(st.text(alphabet, min_size=1, max_size=100))
        tokens = segment(layer, idx, text)
        got = [(t.span[0], t.span[1], t.class_ref) for t in tokens
               if t.kind == "keyword"]
        oracle_members = [(m, cid) for cid, cls in enumerate(layer.classes)
                          for m in cls.members]
        assert got == brute_keyword_spans(oracle_members, text)

    def test_keyword_spans_never_overlap_other_tokens(self, demo_layer1):
        layer, idx = demo_layer1
        text = "打开www.baidu.com，等待7秒，qqq"
        tokens = segment(layer, idx, text)
        covered = []
        for t in tokens:
            covered.extend(range(*t.span))
        assert covered == list(range(len(text)))


class TestSegmentElements:
    def test_groups_elements_by_class(self, demo_ruleset):
        layer2 = demo_ruleset.layers[1]
        idx = build_index(layer2)
        tokens = segment(layer2, idx, ("关", "这", "个", "页"))
        assert [(t.kind, t.surface, t.span) for t in tokens] == [
            ("keyword", "关这个页", (0, 4))]

    def test_miss_passes_single_elements(self, demo_ruleset):
        layer2 = demo_ruleset.layers[1]
        idx = build_index(layer2)
        tokens = segment(layer2, idx, ("开", "这", "个", "页"))
        assert [(t.kind, t.span) for t in tokens] == [
            ("unknown", (0, 1)), ("keyword", (1, 3)), ("unknown", (3, 4))]

    def test_string_input_requires_layer1(self, demo_ruleset):
        layer2 = demo_ruleset.layers[1]
        idx = build_index(layer2)
        with pytest.raises(ValueError):
            segment(layer2, idx, "关页")


# ---------------------------------------------------------------------------
# recognize
# ---------------------------------------------------------------------------

class TestRecognize:
    def test_url_with_wrap(self):
        recs = [Recognizer(label="网址", kind="url", wrap=("“", "”"))]
        m = recognize(recs, "www.baidu.com")
        assert m == ("网址", 0, 13, "“www.baidu.com”")

    def test_single_digit_integer(self):
        recs = [Recognizer(label="整数", kind="integer")]
        m = recognize(recs, "7秒")
        assert (m.label, m.length, m.canonical_surface) == ("整数", 1, "7")
        assert m.start == 0

    def test_coordinate_pattern(self):
        recs = [Recognizer(label="坐标", kind="pattern", pattern="（\\d+，\\d+）")]
        m = recognize(recs, "（19，16）")
        # （19，16） is 7 code points; the match covers all of them.
        assert (m.label, m.length, m.canonical_surface) == (
            "坐标", len("（19，16）"), "（19，16）")

    def test_earliest_position_wins(self):
        recs = [
            Recognizer(label="坐标", kind="pattern", pattern="（\\d+，\\d+）"),
            Recognizer(label="整数", kind="integer"),
        ]
        # The coordinate starts at 0, the bare integer would start at 1.
        m = recognize(recs, "（19，16）")
        assert m.label == "坐标"
        # In a residue where only the integer matches, it is found mid-span.
        m = recognize(recs, "第7个")
        assert (m.label, m.start, m.length) == ("整数", 1, 1)

    def test_longest_match_wins_at_same_position(self):
        recs = [
            Recognizer(label="short", kind="pattern", pattern="a"),
            Recognizer(label="long", kind="pattern", pattern="aa+"),
        ]
        m = recognize(recs, "aaa")
        assert (m.label, m.length) == ("long", 3)

    def test_tie_broken_by_ruleset_order(self):
        recs = [
            Recognizer(label="first", kind="pattern", pattern="ab"),
            Recognizer(label="second", kind="pattern", pattern="a[b]"),
        ]
        m = recognize(recs, "ab")
        assert m.label == "first"

    def test_no_match_returns_none(self):
        recs = [Recognizer(label="整数", kind="integer")]
        assert recognize(recs, "没有数字") is None
        assert recognize(recs, "") is None


# ---------------------------------------------------------------------------
# built-in URL matcher
# ---------------------------------------------------------------------------

URL_STOP_SET = set(" \t\n\r\x0b\x0c　，。；、“”（）")


class TestUrlMatcher:
    def test_plain_host(self):
        assert builtin_url_match("www.baidu.com") == 13

    def test_single_label_is_not_a_url(self):
        assert builtin_url_match("baidu") is None

    def test_stops_at_full_width_comma(self):
        text = "https://a.b/c，后文"
        # Oracle: scan the path by the stop-set definition.
        expected = len("https://a.b/")
        while expected < len(text) and text[expected] not in URL_STOP_SET:
            expected += 1
        assert builtin_url_match(text) == expected == len("https://a.b/c")

    def test_scheme_requires_host(self):
        assert builtin_url_match("https://x") is None
        assert builtin_url_match("http://") is None

    def test_scheme_with_host_and_path(self):
        assert builtin_url_match("https://a.b/c/d?e=1") == len("https://a.b/c/d?e=1")

    def test_trailing_dot_not_swallowed(self):
        assert builtin_url_match("a.b.") == 3

    def test_path_requires_slash(self):
        # Host chars end the match when no /path follows.
        assert builtin_url_match("www.baidu.com是的") == 13

    def test_stops_at_whitespace_in_path(self):
        assert builtin_url_match("a.b/c d") == 5

    def test_hyphenated_labels(self):
        assert builtin_url_match("my-site.example-host.org") == 24
