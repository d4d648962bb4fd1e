"""Independent brute-force oracles the implementation is checked against.

These deliberately avoid the package's trie and scan machinery: membership
is tested with startswith over every member, so agreement with the engine is
meaningful.
"""

from __future__ import annotations

from typing import Optional, Sequence


def brute_longest_match(members: Sequence[tuple[str, int]], seq: str,
                        pos: int) -> Optional[tuple[int, int]]:
    """Try every member as a prefix of seq[pos:]; keep the longest."""
    best: Optional[tuple[int, int]] = None
    for member, cid in members:
        if seq.startswith(member, pos):
            if best is None or len(member) > best[1]:
                best = (cid, len(member))
    return best


def brute_keyword_spans(members: Sequence[tuple[str, int]],
                        seq: str) -> list[tuple[int, int, int]]:
    """Left-to-right longest-prefix segmentation; misses advance one char."""
    spans = []
    i = 0
    while i < len(seq):
        hit = brute_longest_match(members, seq, i)
        if hit is None:
            i += 1
        else:
            cid, length = hit
            spans.append((i, i + length, cid))
            i += length
    return spans


def cross_product_variants(position_choices: Sequence[Sequence[str]]) -> list[str]:
    """Plain nested-loop cross product, leftmost position slowest."""
    out = [""]
    for choices in position_choices:
        out = [prefix + c for prefix in out for c in choices]
    return out
