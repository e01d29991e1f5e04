"""Locate a pattern in a text by intersecting per-symbol index sets.

The pattern's index sets say which symbol sits at each pattern offset.
Candidate starts are seeded from the text positions of the first pattern
symbol and refined one offset at a time: a start ``p`` survives offset
``j`` only if text position ``p + j - 1`` carries the pattern's ``j``-th
symbol.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

from .cmm_core import SymbolIndexSets, bits_to_positions

__all__ = [
    "EmptyPatternError",
    "OccurrenceList",
    "format_tuples",
    "locate",
    "naive_search",
    "occurrences_as_tuples",
]

# Below this density (set bits per text position) refinement walks sorted lists.
LIST_DENSITY_THRESHOLD = 0.02


class EmptyPatternError(ValueError):
    def __init__(self):
        super().__init__("empty pattern")


@dataclass(frozen=True)
class OccurrenceList:
    pattern_length: int
    starts: tuple[int, ...]
    text_length: int

    def __post_init__(self):
        last = self.text_length - self.pattern_length + 1
        prev = 0
        for p in self.starts:
            if p <= prev or p > last:
                raise ValueError(f"invalid start {p} for text length {self.text_length}")
            prev = p

    def __len__(self):
        return len(self.starts)


def _pattern_symbols(pattern_sets: SymbolIndexSets, length: int) -> list:
    at = [None] * length
    for s, positions in pattern_sets.sets.items():
        for j in positions:
            if 1 <= j <= length:
                at[j - 1] = s
    return at


def _intersect_shifted(cands: list[int], positions: list[int], shift: int) -> list[int]:
    # Keep p in cands with p + shift in positions; both ascending.
    out = []
    i = j = 0
    n, m = len(cands), len(positions)
    while i < n and j < m:
        want = cands[i] + shift
        have = positions[j]
        if want == have:
            out.append(cands[i])
            i += 1
            j += 1
        elif want < have:
            i += 1
        else:
            j = bisect.bisect_left(positions, want, j + 1)
    return out


def locate(
    pattern_sets: SymbolIndexSets,
    text_sets: SymbolIndexSets,
    pattern_length: int,
    *,
    strategy: str = "auto",
    order: str = "sequential",
    trace: list | None = None,
) -> OccurrenceList:
    """Find every start position of the pattern described by ``pattern_sets``.

    ``strategy`` is ``"bits"`` (shifted bit-block AND), ``"lists"`` (sorted
    merge) or ``"auto"``.  ``order`` is ``"sequential"`` (offsets 1..L) or
    ``"rarest"`` (seed from the least frequent pattern symbol).  All
    combinations return the same result.  If ``trace`` is given, the
    candidate count after each refinement step is appended to it.

    Overlapping occurrences are all reported.
    """
    if pattern_length <= 0:
        raise EmptyPatternError()
    n = text_sets.sequence_length
    if pattern_length > n:
        return OccurrenceList(pattern_length, (), n)

    symbols = _pattern_symbols(pattern_sets, pattern_length)
    if any(s is None or s not in text_sets.sets for s in symbols):
        # unknown symbol in the pattern, or one the text never indexes
        if trace is not None:
            trace.append(0)
        return OccurrenceList(pattern_length, (), n)

    offsets = list(range(pattern_length))
    if order == "rarest":
        offsets.sort(key=lambda j: (len(text_sets[symbols[j]]), j))
    elif order != "sequential":
        raise ValueError(f"unknown order {order!r}")

    last_start = n - pattern_length + 1
    if strategy == "auto":
        total = sum(len(text_sets[s]) for s in set(symbols))
        strategy = "lists" if n and total / n < LIST_DENSITY_THRESHOLD else "bits"

    if strategy == "bits":
        window = (1 << last_start) - 1
        cand = window
        for j in offsets:
            cand &= text_sets.bits(symbols[j]) >> j
            if trace is not None:
                trace.append(_popcount(cand))
            if not cand:
                break
        starts = bits_to_positions(cand)
    elif strategy == "lists":
        first = offsets[0]
        cand = [p - first for p in text_sets[symbols[first]] if first < p <= last_start + first]
        if trace is not None:
            trace.append(len(cand))
        for j in offsets[1:]:
            cand = _intersect_shifted(cand, text_sets[symbols[j]], j)
            if trace is not None:
                trace.append(len(cand))
            if not cand:
                break
        starts = cand
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    return OccurrenceList(pattern_length, tuple(starts), n)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def naive_search(text: Sequence, pattern: Sequence) -> OccurrenceList:
    """Sliding-window exact search; all overlapping 1-based starts."""
    m = len(pattern)
    if m == 0:
        raise EmptyPatternError()
    n = len(text)
    starts = []
    if isinstance(text, str) and isinstance(pattern, str):
        i = text.find(pattern)
        while i >= 0:
            starts.append(i + 1)
            i = text.find(pattern, i + 1)
    else:
        pattern = list(pattern)
        for i in range(n - m + 1):
            if list(text[i : i + m]) == pattern:
                starts.append(i + 1)
    return OccurrenceList(m, tuple(starts), n)


def occurrences_as_tuples(occ: OccurrenceList) -> list[tuple[int, ...]]:
    L = occ.pattern_length
    return [tuple(range(p, p + L)) for p in occ.starts]


def format_tuples(occ: OccurrenceList) -> str:
    """Render as ``(1,2,3);(4,5,6)``."""
    return ";".join("(" + ",".join(map(str, t)) + ")" for t in occurrences_as_tuples(occ))
