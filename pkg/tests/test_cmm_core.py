import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmmsearch.cmm_core import (
    CodebookError,
    DimensionError,
    IncidenceMatrix,
    InputBitMatrix,
    SymbolIndexSets,
    UnknownSymbolError,
    bits_to_positions,
    build_codebook,
    build_reference_matrix,
    encode_sequence,
    extract_index_sets,
    from_register_display,
    positions_to_bits,
    transform,
)

PAPER_TEXT = from_register_display("CTCACTCCTC")


@pytest.fixture
def cb():
    return build_codebook("ATGC")


# -- codebook ---------------------------------------------------------------

def test_paper_codebook(cb):
    assert {s: cb.code_string(s) for s in cb.symbols} == {
        "A": "0001", "T": "0010", "G": "0100", "C": "1000"}
    assert cb.code_width == 4


def test_single_symbol_codebook():
    cb = build_codebook(["X"])
    assert cb.code_string("X") == "1"


def test_five_symbol_codes_one_hot_and_disjoint():
    cb = build_codebook("ACGTN")
    codes = [cb.codes[s] for s in "ACGTN"]
    for c in codes:
        assert bin(c).count("1") == 1 and c < 32
    for a, b in itertools.combinations(codes, 2):
        assert a & b == 0
    assert len(set(codes)) == 5


def test_codebook_errors():
    with pytest.raises(CodebookError, match="duplicate alphabet symbol"):
        build_codebook("ATGA")
    with pytest.raises(CodebookError):
        build_codebook([])
    with pytest.raises(CodebookError):
        build_codebook("AT", bit_order=[0, 0])


def test_multichar_symbols():
    cb = build_codebook(["ALA", "GLY", "SER"])
    m = encode_sequence(["GLY", "SER", "XXX", "GLY"], cb)
    assert [m.column(j) for j in range(1, 5)] == [0b010, 0b100, 0, 0b010]


# -- encoding ---------------------------------------------------------------

def test_encode_paper_text(cb):
    m = encode_sequence(PAPER_TEXT, cb)
    assert m.length == 10 and m.code_width == 4
    assert m.row_string(0) == "1010101101"


def test_encode_columns_follow_codes(cb):
    m = encode_sequence("CTC", cb)
    assert [m.column_string(j) for j in (1, 2, 3)] == ["1000", "0010", "1000"]


def test_encode_empty(cb):
    m = encode_sequence("", cb)
    assert m.length == 0 and m.rows == (0, 0, 0, 0)
    assert m.to_lists() == [[], [], [], []]


def test_unknown_symbol_is_zero_column(cb):
    m = encode_sequence("ANT", cb)
    assert m.column(2) == 0
    assert m.column_string(3) == "0010"


def test_strict_rejects_unknown(cb):
    with pytest.raises(UnknownSymbolError) as ei:
        encode_sequence("ACGNT", cb, strict=True)
    assert ei.value.symbol == "N" and ei.value.position == 4
    with pytest.raises(UnknownSymbolError):
        encode_sequence(list("ACGNT"), cb, strict=True)


def test_str_and_list_paths_agree(cb):
    rng = random.Random(3)
    for _ in range(50):
        s = "".join(rng.choice("ACGTN") for _ in range(rng.randrange(0, 80)))
        assert encode_sequence(s, cb) == encode_sequence(list(s), cb)


# -- reference matrix -------------------------------------------------------

def test_paper_reference_matrix(cb):
    d = build_reference_matrix(cb)
    assert [d.row_string(r) for r in range(4)] == ["0001", "0010", "0100", "1000"]
    assert d.channel_labels == ("A", "T", "G", "C")
    assert d.is_permutation()


def test_single_reference_matrix():
    d = build_reference_matrix(build_codebook("X"))
    assert d.to_lists() == [[1]]


@pytest.mark.parametrize("k", range(1, 9))
def test_reference_matrix_row_and_column_sums(k):
    rng = random.Random(k)
    symbols = [chr(ord("a") + i) for i in range(k)]
    rng.shuffle(symbols)
    bits = list(range(k))
    rng.shuffle(bits)
    d = build_reference_matrix(build_codebook(symbols, bit_order=bits))
    rows = d.to_lists()
    assert all(sum(r) == 1 for r in rows)
    assert all(sum(col) == 1 for col in zip(*rows))


# -- transform --------------------------------------------------------------

def test_transform_paper_rows(cb):
    o = transform(encode_sequence(PAPER_TEXT, cb), build_reference_matrix(cb))
    assert o.row(10) == (0, 0, 0, 1)
    assert o.row(9) == (0, 1, 0, 0)
    assert o.row(7) == (1, 0, 0, 0)


def test_transform_empty(cb):
    o = transform(encode_sequence("", cb), build_reference_matrix(cb))
    assert o.length == 0 and o.to_lists() == []


def test_transform_dimension_mismatch(cb):
    m = encode_sequence("ACG", build_codebook("ACGTN"))
    with pytest.raises(DimensionError):
        transform(m, build_reference_matrix(cb))


def test_transform_matches_direct_comparison(cb):
    rng = random.Random(200)
    seq = "".join(rng.choice("ACGT") for _ in range(200))
    o = transform(encode_sequence(seq, cb), build_reference_matrix(cb))
    for i, ch in enumerate(seq, 1):
        assert o.row(i) == tuple(int(ch == s) for s in cb.symbols)


def test_transform_is_boolean_product_for_arbitrary_d(cb):
    # non-permutation D: compare against the textbook triple loop
    from cmmsearch.cmm_core import ReferenceMatrix

    d = ReferenceMatrix(rows=(0b011, 0b000, 0b101, 0b110), n_channels=3, channel_labels=("p", "q", "r"))
    m = encode_sequence("ACGTTGCA", cb)
    o = transform(m, d)
    I = m.to_lists()
    D = d.to_lists()
    for i in range(m.length):
        want = tuple(int(any(I[r][i] and D[r][c] for r in range(4))) for c in range(3))
        assert o.row(i + 1) == want


# -- index sets -------------------------------------------------------------

def test_extract_paper_text_sets(cb):
    sets = extract_index_sets(transform(encode_sequence(PAPER_TEXT, cb), build_reference_matrix(cb)))
    assert sets.sets == {"A": [7], "T": [2, 5, 9], "G": [], "C": [1, 3, 4, 6, 8, 10]}
    assert sets.render() == "A(7);T(2,5,9);C(1,3,4,6,8,10)"


def test_extract_paper_pattern_sets(cb):
    sets = extract_index_sets(transform(encode_sequence("CTC", cb), build_reference_matrix(cb)))
    assert {s: p for s, p in sets.sets.items() if p} == {"T": [2], "C": [1, 3]}


def test_extract_zero_rows():
    o = IncidenceMatrix(columns=(0, 0), length=0, channel_labels=("x", "y"))
    assert extract_index_sets(o).sets == {"x": [], "y": []}


def test_bits_positions_roundtrip():
    assert bits_to_positions(0) == []
    assert bits_to_positions(0b101001) == [1, 4, 6]
    assert positions_to_bits([1, 4, 6]) == 0b101001


def test_symbol_at():
    s = SymbolIndexSets(sets={"T": [2], "C": [1, 3]}, sequence_length=3)
    assert [s.symbol_at(i) for i in (1, 2, 3, 4)] == ["C", "T", "C", None]


# -- properties -------------------------------------------------------------

def _pipeline_sets(seq, cb):
    return extract_index_sets(transform(encode_sequence(seq, cb), build_reference_matrix(cb)))


@settings(max_examples=200)
@given(st.text(alphabet="ACGTN", max_size=300))
def test_pipeline_equals_direct_scan(seq):
    cb = build_codebook("ATGC")
    sets = _pipeline_sets(seq, cb)
    for s in cb.symbols:
        assert sets[s] == [i for i, ch in enumerate(seq, 1) if ch == s]


@given(st.text(alphabet="ACGT", max_size=300))
def test_sets_partition_positions(seq):
    sets = _pipeline_sets(seq, build_codebook("ATGC"))
    allpos = sorted(p for ps in sets.sets.values() for p in ps)
    assert allpos == list(range(1, len(seq) + 1))


@given(st.text(alphabet="ACGTN", max_size=200))
def test_incidence_popcount(seq):
    cb = build_codebook("ATGC")
    o = transform(encode_sequence(seq, cb), build_reference_matrix(cb))
    for i, ch in enumerate(seq, 1):
        assert sum(o.row(i)) == (0 if ch == "N" else 1)


@given(st.text(alphabet="ACGT", max_size=200), st.permutations(range(4)))
def test_bit_assignment_is_pure_relabeling(seq, perm):
    base = _pipeline_sets(seq, build_codebook("ATGC"))
    permuted = _pipeline_sets(seq, build_codebook("ATGC", bit_order=perm))
    assert base.sets == permuted.sets


def test_immutable(cb):
    m = encode_sequence("ACGT", cb)
    with pytest.raises(AttributeError):
        m.length = 3
    assert isinstance(m, InputBitMatrix)
