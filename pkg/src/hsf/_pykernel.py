"""Pure-Python scan kernel.

Reference implementation of the layer-1 hot loop: greedy longest-match
keyword scan with URL lookahead. hsf._speedups is the compiled twin; both
must produce identical spans for identical inputs.
"""

from __future__ import annotations

BACKEND = "python"

URL_SPAN = -2  # class id sentinel for URL spans claimed during the scan

# Characters that terminate a URL path: whitespace and CJK punctuation.
_STOP = frozenset((
    0x20, 0x09, 0x0A, 0x0D, 0x0B, 0x0C, 0x3000,  # whitespace, ideographic space
    0xFF0C, 0x3002, 0xFF1B, 0x3001,              # ，。；、
    0x201C, 0x201D, 0xFF08, 0xFF09,              # “”（）
))


def _is_label_cp(cp: int) -> bool:
    return (48 <= cp <= 57) or (65 <= cp <= 90) or (97 <= cp <= 122) or cp == 45


def url_match_len(text: str, pos: int) -> int:
    """Length of a URL starting exactly at `pos`, or 0.

    Optional http(s) scheme, at least two dot-separated host labels of
    [A-Za-z0-9-], then an optional /path running to the first stop
    character.
    """
    n = len(text)
    i = pos
    if text.startswith("https://", i):
        i += 8
    elif text.startswith("http://", i):
        i += 7
    labels = 0
    j = i
    while True:
        k = j
        while k < n and _is_label_cp(ord(text[k])):
            k += 1
        if k == j:
            break
        labels += 1
        if k < n and text[k] == "." and k + 1 < n and _is_label_cp(ord(text[k + 1])):
            j = k + 1
        else:
            j = k
            break
    if labels < 2:
        return 0
    i = j
    if i < n and text[i] == "/":
        i += 1
        while i < n and ord(text[i]) not in _STOP:
            i += 1
    return i - pos


def scan_layer1(ex_children: list, ex_terminal: list, fo_children, fo_terminal,
                text: str, try_url: bool) -> list:
    """Greedy left-to-right keyword scan over `text`.

    Walks the code-point trie at every position and emits the longest
    terminal hit (exact walk wins ties against the case-folded walk). Where
    no keyword starts and the character could begin a URL, a URL span is
    claimed instead (class id URL_SPAN). Unmatched positions are skipped one
    element at a time and surface as gaps between spans.
    """
    spans: list = []
    n = len(text)
    i = 0
    has_fold = fo_children is not None
    while i < n:
        best_cls = -1
        best_end = i
        node = 0
        j = i
        while j < n:
            nxt = ex_children[node].get(ord(text[j]))
            if nxt is None:
                break
            node = nxt
            j += 1
            t = ex_terminal[node]
            if t >= 0:
                best_cls = t
                best_end = j
        if has_fold:
            node = 0
            j = i
            while j < n:
                cp = ord(text[j])
                if 65 <= cp <= 90:
                    cp += 32
                nxt = fo_children[node].get(cp)
                if nxt is None:
                    break
                node = nxt
                j += 1
                t = fo_terminal[node]
                if t >= 0 and j > best_end:
                    best_cls = t
                    best_end = j
        if best_cls >= 0:
            spans.append((i, best_end, best_cls))
            i = best_end
            continue
        if try_url and _is_label_cp(ord(text[i])):
            ulen = url_match_len(text, i)
            if ulen > 0:
                spans.append((i, i + ulen, URL_SPAN))
                i += ulen
                continue
        i += 1
    return spans
