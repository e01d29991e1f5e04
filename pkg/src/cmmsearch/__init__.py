"""Exact pattern location in symbol sequences with a binary correlation matrix memory."""

from .cmm_core import (
    DEFAULT_ALPHABET,
    Codebook,
    IncidenceMatrix,
    InputBitMatrix,
    ReferenceMatrix,
    SymbolIndexSets,
    build_codebook,
    build_reference_matrix,
    encode_sequence,
    extract_index_sets,
    transform,
)
from .logical_match import OccurrenceList, format_tuples, locate, naive_search, occurrences_as_tuples
from .pipeline import index_sequence, search, verify
from .sequence_io import FastaRecord, SequenceRange, fetch_ncbi, parse_fasta, serialize_fasta, slice_range

__version__ = "0.1.0"
