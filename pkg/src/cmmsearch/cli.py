"""Command line: ``cmmsearch fetch | locate | verify``.

Results go to stdout; provenance, timing and errors go to stderr.
Flags override environment variables, which override defaults:

    CMMSEARCH_ALPHABET   alphabet, e.g. ATGC or A,T,G,C
    CMMSEARCH_CACHE_DIR  efetch cache directory
    CMMSEARCH_OFFLINE    1/true disables network access
    NCBI_API_KEY         passed to efetch when set
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path

from .cmm_core import (
    DEFAULT_ALPHABET,
    CodebookError,
    UnknownSymbolError,
    build_codebook,
    from_register_display,
)
from .logical_match import format_tuples
from .pipeline import timed_search, verify
from .sequence_io import (
    FastaFormatError,
    FastaRecord,
    FetchError,
    RangeError,
    SequenceRange,
    fetch_ncbi,
    parse_fasta,
    serialize_fasta,
    slice_range,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_RANGE = 4
EXIT_FETCH = 5

DEFAULT_CACHE_DIR = Path.home() / ".cache" / "cmmsearch"
ACCESSION_RE = re.compile(r"^[A-Za-z]{1,6}_?\d+(\.\d+)?[A-Za-z0-9]*$")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _err(msg: str) -> None:
    print(f"cmmsearch: {msg}", file=sys.stderr)


def _truthy(v: str | None) -> bool:
    return (v or "").strip().lower() in {"1", "true", "yes", "on"}


def parse_alphabet(text: str) -> tuple[str, ...]:
    text = text.strip()
    if "," in text:
        return tuple(s.strip() for s in text.split(",") if s.strip())
    return tuple(text)


def _codebook(args):
    alpha = args.alphabet or os.environ.get("CMMSEARCH_ALPHABET")
    symbols = parse_alphabet(alpha) if alpha else DEFAULT_ALPHABET
    try:
        return build_codebook(symbols)
    except CodebookError as e:
        raise CliError(f"bad alphabet: {e}", EXIT_USAGE)


def _cache_dir(args) -> Path:
    return Path(args.cache_dir or os.environ.get("CMMSEARCH_CACHE_DIR") or DEFAULT_CACHE_DIR)


def _offline(args) -> bool:
    return args.offline or _truthy(os.environ.get("CMMSEARCH_OFFLINE"))


def _range(text: str | None) -> SequenceRange | None:
    if text is None:
        return None
    try:
        return SequenceRange.parse(text)
    except RangeError as e:
        raise CliError(str(e), EXIT_USAGE)


def _normalize_pattern(pattern: str, cb) -> str:
    if not pattern:
        raise CliError("empty pattern", EXIT_USAGE)
    if all(isinstance(s, str) and s.isupper() for s in cb.symbols):
        pattern = pattern.upper()
    bad = [ch for ch in pattern if ch not in cb.codes]
    if bad:
        raise CliError(f"pattern symbol {bad[0]!r} is not in the alphabet {''.join(cb.symbols)}", EXIT_USAGE)
    return pattern


def _read_record(source: str) -> FastaRecord:
    try:
        if source == "-":
            data = sys.stdin.read()
        else:
            data = Path(source).read_text(encoding="ascii", errors="replace")
    except OSError as e:
        raise CliError(f"cannot read input {source}: {e.strerror or e}", EXIT_INPUT)
    if data.lstrip().startswith(">"):
        try:
            records = parse_fasta(data)
        except FastaFormatError as e:
            raise CliError(f"{source}: {e}", EXIT_INPUT)
        if len(records) > 1:
            _err(f"{source} has {len(records)} records; using {records[0].accession_id}")
        return records[0]
    # bare sequence text
    return FastaRecord(Path(source).name if source != "-" else "stdin", "", "".join(data.split()).upper())


def _load_text(args, rng: SequenceRange | None) -> tuple[str, str]:
    """Return ``(label, text)`` for the input and range."""
    source = args.input
    if source != "-" and not os.path.exists(source) and ACCESSION_RE.match(source):
        if rng is None:
            raise CliError("--range is required when the input is an accession", EXIT_USAGE)
        try:
            rec, how = fetch_ncbi(source, rng, _cache_dir(args), offline=_offline(args))
        except FetchError as e:
            raise CliError(str(e), EXIT_FETCH)
        _err(f"{source} {rng}: {len(rec.sequence)} bp from {how}")
        return source, rec.sequence
    rec = _read_record(source)
    if args.register_order:
        rec = FastaRecord(rec.accession_id, rec.description, from_register_display(rec.sequence))
    if rng is None:
        return source, rec.sequence
    try:
        return source, slice_range(rec, rng)
    except RangeError as e:
        raise CliError(str(e), EXIT_RANGE)


def cmd_fetch(args) -> int:
    rng = _range(args.range)
    try:
        rec, how = fetch_ncbi(args.accession, rng, _cache_dir(args), offline=_offline(args))
    except FetchError as e:
        raise CliError(str(e), EXIT_FETCH)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(serialize_fasta([rec]))
    _err(f"{args.accession} {rng or 'full'}: {len(rec.sequence)} bp from {how} -> {out}")
    return EXIT_OK


def render(report, fmt: str) -> str:
    occ = report.occurrences
    if fmt == "tuples":
        s = format_tuples(occ)
        return s + "\n" if s else ""
    if fmt == "starts":
        return "".join(f"{p}\n" for p in occ.starts)
    if fmt == "json-lines":
        L = occ.pattern_length
        return "".join(
            json.dumps({"start": p, "end": p + L - 1, "pattern": report.pattern}) + "\n" for p in occ.starts
        )
    raise CliError(f"unknown format {fmt!r}", EXIT_USAGE)


def cmd_locate(args) -> int:
    cb = _codebook(args)
    pattern = _normalize_pattern(args.pattern, cb)
    rng = _range(args.range)
    label, text = _load_text(args, rng)
    try:
        report = timed_search(label, text, pattern, cb, rng=rng, strict=args.strict)
    except UnknownSymbolError as e:
        raise CliError(f"{label}: {e}", EXIT_INPUT)
    sys.stdout.write(render(report, args.format))
    sys.stdout.flush()
    _err(f"{len(report.occurrences)} occurrences of {pattern} in {len(text)} positions, "
         f"{report.elapsed * 1e3:.3f} ms")
    if args.figure:
        from .plotting import plot_occurrences

        plot_occurrences(report, args.figure, text_length=len(text))
        _err(f"figure written to {args.figure}")
    return EXIT_OK


def _parse_corrupt(text: str):
    sym, _, pos = text.rpartition(":")
    return sym, int(pos)


def cmd_verify(args) -> int:
    cb = _codebook(args)
    pattern = _normalize_pattern(args.pattern, cb)
    label, text = _load_text(args, _range(args.range))
    corrupt = _parse_corrupt(args.corrupt_index) if args.corrupt_index else None
    res = verify(text, pattern, cb, corrupt=corrupt)
    if res.ok:
        print(f"OK, {len(res.cmm)} occurrences")
        return EXIT_OK
    print(f"MISMATCH at start {res.first_difference}: "
          f"cmm {len(res.cmm)} vs naive {len(res.naive)} occurrences")
    for p in res.only_cmm:
        print(f"- {p}\tcmm only")
    for p in res.only_naive:
        print(f"+ {p}\tnaive only")
    return EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", help="efetch cache directory")
    common.add_argument("--offline", action="store_true", help="never touch the network")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("input", help="FASTA or plain sequence file, '-' for stdin, or an NCBI accession")
    search.add_argument("--pattern", "-p", required=True)
    search.add_argument("--range", "-r", metavar="A:B", help="1-based inclusive range to search")
    search.add_argument("--alphabet", help="symbols in code order (default ATGC)")
    search.add_argument("--register-order", action="store_true",
                        help="input file text is written with position 1 at the right end")

    parser = argparse.ArgumentParser(
        prog="cmmsearch", description="Locate exact pattern occurrences with a binary correlation matrix memory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", parents=[common], help="download a sequence range into a FASTA file")
    p.add_argument("accession")
    p.add_argument("--range", "-r", metavar="A:B")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("locate", parents=[common, search], help="print every exact occurrence of a pattern")
    p.add_argument("--format", "-f", choices=["tuples", "starts", "json-lines"], default="tuples")
    p.add_argument("--strict", action="store_true", help="reject symbols outside the alphabet")
    p.add_argument("--figure", metavar="PATH", help="also save an occurrence map figure")
    p.set_defaults(func=cmd_locate)

    p = sub.add_parser("verify", parents=[common, search], help="cross-check against a naive scan")
    p.add_argument("--corrupt-index", metavar="SYMBOL:POS", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        _err(str(e))
        return e.code


if __name__ == "__main__":
    sys.exit(main())
