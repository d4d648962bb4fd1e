import json
import sys

import pytest

from hsf import Engine, demo_ruleset_path, load_ruleset_path

GOLDEN_INPUT = ("鼠标左键双击（19，16），随后等待7秒，复制当前选中内容，"
                "缩小页面，关闭当前页面，并按下回车键")
GOLDEN_OUTPUT = "双击（19，16），等7秒，拷，缩小，关页，回车"

# Canonical demo commands that contain no unknown words.
KNOWN_LINES = [
    GOLDEN_INPUT,
    "打开www.baidu.com",
    "启动WPS",
    "双击（19，16）",
    "最大化",
    "关闭这个程序",
    "退出当前软件",
    "复制选中内容，然后缩小页面",
    "按下回车键",
    "等待7秒",
]


@pytest.fixture(scope="session")
def demo_path():
    return demo_ruleset_path()


@pytest.fixture(scope="session")
def demo_ruleset(demo_path):
    return load_ruleset_path(demo_path)


@pytest.fixture(scope="session")
def demo_engine(demo_ruleset):
    return Engine(demo_ruleset)


@pytest.fixture()
def run_cli(capsys):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    from hsf.cli import main

    def run(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


def write_ruleset(tmp_path, doc, name="ruleset.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")
    return path


def minimal_doc(**overrides):
    """A small, valid one-layer ruleset document to mutate in tests."""
    doc = {
        "version": 1,
        "layers": [
            {
                "id": 1,
                "classes": [
                    {"label": "open-action", "members": ["打开", "启动", "开启", "开"]},
                    {"label": "noun", "members": ["页面", "页"]},
                ],
                "recognizers": [
                    {"label": "整数", "kind": "integer"},
                ],
                "frameworks": [],
            }
        ],
    }
    doc.update(overrides)
    return doc
