"""Binary correlation-matrix-memory pipeline for symbol sequences.

A sequence is one-hot encoded into a ``code_width x length`` bit matrix,
pushed through a fixed binary reference matrix ``D`` with AND/OR algebra,
and the resulting incidence matrix is read back as per-symbol index sets.

Bit matrices are stored row-wise as Python ints used as bit blocks: in a
row of an :class:`InputBitMatrix`, bit ``j`` stands for sequence position
``j + 1``.  Matrix rows are kept most significant code bit first, so a
code such as ``1000`` reads top to bottom down its column.

Register display: printing a row block as a binary number puts position 1
at the right end, the same way bit 0 is the rightmost character of a code.
Sequences written in that orientation (``CTCACTCCTC`` with position 1 on
the right) are converted with :func:`from_register_display`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DEFAULT_ALPHABET",
    "Codebook",
    "CodebookError",
    "DimensionError",
    "IncidenceMatrix",
    "InputBitMatrix",
    "ReferenceMatrix",
    "SymbolIndexSets",
    "UnknownSymbolError",
    "bits_to_positions",
    "build_codebook",
    "build_reference_matrix",
    "encode_sequence",
    "extract_index_sets",
    "from_register_display",
    "positions_to_bits",
    "transform",
]

DEFAULT_ALPHABET: tuple[str, ...] = ("A", "T", "G", "C")


class CodebookError(ValueError):
    pass


class UnknownSymbolError(ValueError):
    def __init__(self, symbol, position: int):
        super().__init__(f"unknown symbol {symbol!r} at position {position}")
        self.symbol = symbol
        self.position = position


class DimensionError(ValueError):
    pass


def from_register_display(text: str) -> str:
    """Positional sequence for a string written with position 1 rightmost."""
    return text[::-1]


def bits_to_positions(bits: int) -> list[int]:
    """Return the 1-based positions of the set bits of ``bits`` in ascending order."""
    if not bits:
        return []
    out = []
    s = bin(bits)[:1:-1]
    i = s.find("1")
    while i >= 0:
        out.append(i + 1)
        i = s.find("1", i + 1)
    return out


def positions_to_bits(positions: Iterable[int]) -> int:
    bits = 0
    for p in positions:
        bits |= 1 << (p - 1)
    return bits


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Codebook:
    """Bijection between alphabet symbols and one-hot codes.

    ``codes[s]`` is an int with exactly one bit set; bit 0 is the rightmost
    character of :meth:`code_string`.
    """

    symbols: tuple
    codes: Mapping
    code_width: int

    def __post_init__(self):
        if self.code_width != len(self.symbols):
            raise CodebookError("code_width must equal alphabet size")
        seen = 0
        for s in self.symbols:
            c = self.codes[s]
            if c <= 0 or c & (c - 1) or c >> self.code_width:
                raise CodebookError(f"code for {s!r} is not a one-hot {self.code_width}-bit code")
            if seen & c:
                raise CodebookError("codes must be pairwise distinct")
            seen |= c

    def __contains__(self, symbol) -> bool:
        return symbol in self.codes

    def bit_of(self, symbol) -> int:
        return self.codes[symbol].bit_length() - 1

    def code_string(self, symbol) -> str:
        return format(self.codes[symbol], f"0{self.code_width}b")


def build_codebook(alphabet: Sequence, bit_order: Sequence[int] | None = None) -> Codebook:
    """Assign one-hot codes to ``alphabet``.

    By default the symbol at ordinal ``i`` gets bit ``i`` (bit 0 least
    significant), so ``ATGC`` yields A=0001, T=0010, G=0100, C=1000.
    ``bit_order`` overrides the bit given to each ordinal; it must be a
    permutation of ``range(len(alphabet))``.
    """
    symbols = tuple(alphabet)
    if not symbols:
        raise CodebookError("empty alphabet")
    if len(set(symbols)) != len(symbols):
        dup = next(s for i, s in enumerate(symbols) if s in symbols[:i])
        raise CodebookError(f"duplicate alphabet symbol {dup!r}")
    k = len(symbols)
    if bit_order is None:
        bit_order = range(k)
    bit_order = tuple(bit_order)
    if sorted(bit_order) != list(range(k)):
        raise CodebookError("bit_order must be a permutation of the code bits")
    codes = {s: 1 << b for s, b in zip(symbols, bit_order)}
    return Codebook(symbols=symbols, codes=codes, code_width=k)


@dataclass(frozen=True)
class InputBitMatrix:
    """``code_width x length`` bit matrix, one column per sequence position.

    ``rows[r]`` is a bit block for code bit ``code_width - 1 - r``.
    """

    rows: tuple[int, ...]
    length: int
    code_width: int

    def column(self, position: int) -> int:
        """Code (as an int) stored in column ``position`` (1-based)."""
        if not 1 <= position <= self.length:
            raise IndexError(position)
        j = position - 1
        code = 0
        for r, row in enumerate(self.rows):
            if row >> j & 1:
                code |= 1 << (self.code_width - 1 - r)
        return code

    def column_string(self, position: int) -> str:
        return format(self.column(position), f"0{self.code_width}b")

    def to_lists(self) -> list[list[int]]:
        """Rows as 0/1 lists, position 1 first."""
        return [[row >> j & 1 for j in range(self.length)] for row in self.rows]

    def row_string(self, r: int) -> str:
        """Row ``r`` in register display, position ``length`` leftmost."""
        return format(self.rows[r], f"0{self.length}b") if self.length else ""


def _symbol_mask(seq: str, symbol: str) -> int:
    if not seq:
        return 0
    table = {ord(ch): "1" if ch == symbol else "0" for ch in set(seq)}
    return int(seq[::-1].translate(table), 2)


def encode_sequence(seq: Sequence, cb: Codebook, strict: bool = False) -> InputBitMatrix:
    """One-hot encode ``seq`` column by column.

    Symbols missing from the codebook become all-zero columns unless
    ``strict`` is set, in which case :class:`UnknownSymbolError` is raised
    for the first one.
    """
    k = cb.code_width
    rows = [0] * k
    if isinstance(seq, str) and all(isinstance(s, str) and len(s) == 1 for s in cb.symbols):
        if strict:
            for j, ch in enumerate(seq):
                if ch not in cb.codes:
                    raise UnknownSymbolError(ch, j + 1)
        present = set(seq)
        for s in cb.symbols:
            if s in present:
                rows[k - 1 - cb.bit_of(s)] = _symbol_mask(seq, s)
    else:
        bit_rows = {s: k - 1 - cb.bit_of(s) for s in cb.symbols}
        for j, s in enumerate(seq):
            r = bit_rows.get(s)
            if r is None:
                if strict:
                    raise UnknownSymbolError(s, j + 1)
                continue
            rows[r] |= 1 << j
    return InputBitMatrix(rows=tuple(rows), length=len(seq), code_width=k)


@dataclass(frozen=True)
class ReferenceMatrix:
    """Binary ``m x n`` matrix mapping code bits (rows) to symbol channels (columns).

    ``rows[r]`` has bit ``c`` set when code row ``r`` feeds channel ``c``.
    Rows follow the same display order as :class:`InputBitMatrix`.
    """

    rows: tuple[int, ...]
    n_channels: int
    channel_labels: tuple

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n_channels

    def to_lists(self) -> list[list[int]]:
        return [[row >> c & 1 for c in range(self.n_channels)] for row in self.rows]

    def row_string(self, r: int) -> str:
        return "".join(str(b) for b in self.to_lists()[r])

    def is_permutation(self) -> bool:
        m, n = self.shape
        if m != n:
            return False
        col_union = 0
        for row in self.rows:
            if _popcount(row) != 1 or col_union & row:
                return False
            col_union |= row
        return col_union == (1 << n) - 1


def build_reference_matrix(cb: Codebook) -> ReferenceMatrix:
    """Build ``D`` for ``cb``: channel ``c`` is the ``c``-th alphabet symbol."""
    k = cb.code_width
    rows = [0] * k
    for c, s in enumerate(cb.symbols):
        rows[k - 1 - cb.bit_of(s)] |= 1 << c
    return ReferenceMatrix(rows=tuple(rows), n_channels=len(cb.symbols), channel_labels=cb.symbols)


@dataclass(frozen=True)
class IncidenceMatrix:
    """``length x n_channels`` binary matrix, stored column-wise.

    ``columns[c]`` is a bit block over positions (bit ``i`` = row ``i + 1``).
    """

    columns: tuple[int, ...]
    length: int
    channel_labels: tuple

    def row(self, position: int) -> tuple[int, ...]:
        if not 1 <= position <= self.length:
            raise IndexError(position)
        i = position - 1
        return tuple(col >> i & 1 for col in self.columns)

    def to_lists(self) -> list[list[int]]:
        """Rows 1..length, top to bottom."""
        return [list(self.row(i)) for i in range(1, self.length + 1)]


def transform(inp: InputBitMatrix, d: ReferenceMatrix) -> IncidenceMatrix:
    """Boolean product ``Iᵀ · D`` (AND as multiply, OR as accumulate).

    Computed blockwise: output column ``c`` is the OR of every input row
    block whose ``D`` entry for ``c`` is set.
    """
    if inp.code_width != len(d.rows):
        raise DimensionError(
            f"input code width {inp.code_width} does not match reference matrix with {len(d.rows)} rows"
        )
    cols = [0] * d.n_channels
    for row_bits, d_row in zip(inp.rows, d.rows):
        if not row_bits:
            continue
        c = 0
        while d_row:
            if d_row & 1:
                cols[c] |= row_bits
            d_row >>= 1
            c += 1
    return IncidenceMatrix(columns=tuple(cols), length=inp.length, channel_labels=d.channel_labels)


@dataclass(frozen=True)
class SymbolIndexSets:
    """Symbol -> ascending list of 1-based positions where it occurs."""

    sets: Mapping
    sequence_length: int
    _bits: Mapping = field(default=None, repr=False, compare=False)

    def __getitem__(self, symbol) -> list[int]:
        return self.sets[symbol]

    @property
    def symbols(self) -> tuple:
        return tuple(self.sets)

    def bits(self, symbol) -> int:
        """Position bit block for ``symbol`` (bit ``i`` = position ``i + 1``)."""
        if self._bits is not None and symbol in self._bits:
            return self._bits[symbol]
        return positions_to_bits(self.sets.get(symbol, ()))

    def symbol_at(self, position: int):
        """Symbol occupying ``position``, or None if no set contains it."""
        bit = 1 << (position - 1)
        for s in self.sets:
            if self.bits(s) & bit:
                return s
        return None

    def render(self) -> str:
        """Compact form such as ``A(7);T(2,5,9);C(1,3,4,6,8,10)``; empty sets omitted."""
        return ";".join(
            f"{s}({','.join(map(str, ps))})" for s, ps in self.sets.items() if ps
        )


def extract_index_sets(o: IncidenceMatrix) -> SymbolIndexSets:
    sets = {}
    bits = {}
    for label, col in zip(o.channel_labels, o.columns):
        sets[label] = bits_to_positions(col)
        bits[label] = col
    return SymbolIndexSets(sets=sets, sequence_length=o.length, _bits=bits)
