"""One-call wrappers over encode -> transform -> extract -> locate."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .cmm_core import (
    Codebook,
    SymbolIndexSets,
    build_codebook,
    build_reference_matrix,
    encode_sequence,
    extract_index_sets,
    transform,
)
from .logical_match import OccurrenceList, locate, naive_search
from .sequence_io import SequenceRange

__all__ = ["LocateReport", "VerifyResult", "index_sequence", "search", "verify"]


def index_sequence(seq: Sequence, cb: Codebook, strict: bool = False) -> SymbolIndexSets:
    d = build_reference_matrix(cb)
    return extract_index_sets(transform(encode_sequence(seq, cb, strict=strict), d))


def search(text: Sequence, pattern: Sequence, cb: Codebook | None = None, strict: bool = False, **kw) -> OccurrenceList:
    """Exact occurrences of ``pattern`` in ``text`` through the CMM pipeline."""
    if cb is None:
        cb = build_codebook("ATGC")
    pattern_sets = index_sequence(pattern, cb, strict=strict)
    text_sets = index_sequence(text, cb, strict=strict)
    return locate(pattern_sets, text_sets, len(pattern), **kw)


@dataclass(frozen=True)
class LocateReport:
    accession_or_file: str
    pattern: str
    range: SequenceRange | None
    occurrences: OccurrenceList
    elapsed: float  # seconds

    def __post_init__(self):
        if self.occurrences.pattern_length != len(self.pattern):
            raise ValueError("occurrence pattern length does not match pattern")


def timed_search(source: str, text: str, pattern: str, cb: Codebook, rng=None, strict=False) -> LocateReport:
    t0 = time.perf_counter()
    occ = search(text, pattern, cb, strict=strict)
    return LocateReport(source, pattern, rng, occ, time.perf_counter() - t0)


@dataclass(frozen=True)
class VerifyResult:
    cmm: OccurrenceList
    naive: OccurrenceList

    @property
    def ok(self) -> bool:
        return self.cmm.starts == self.naive.starts

    @property
    def only_cmm(self) -> list[int]:
        return sorted(set(self.cmm.starts) - set(self.naive.starts))

    @property
    def only_naive(self) -> list[int]:
        return sorted(set(self.naive.starts) - set(self.cmm.starts))

    @property
    def first_difference(self) -> int | None:
        diff = self.only_cmm + self.only_naive
        return min(diff) if diff else None


def verify(text: str, pattern: str, cb: Codebook, corrupt: tuple | None = None) -> VerifyResult:
    """Run both the CMM path and the naive scan.

    ``corrupt=(symbol, position)`` removes one entry from the text's index
    sets before matching; it exists to exercise the mismatch report.
    """
    pattern_sets = index_sequence(pattern, cb)
    text_sets = index_sequence(text, cb)
    if corrupt is not None:
        sym, pos = corrupt
        sets = {s: [p for p in ps if not (s == sym and p == pos)] for s, ps in text_sets.sets.items()}
        text_sets = SymbolIndexSets(sets=sets, sequence_length=text_sets.sequence_length)
    cmm = locate(pattern_sets, text_sets, len(pattern))
    return VerifyResult(cmm=cmm, naive=naive_search(text, pattern))
