"""FASTA ingestion, NCBI efetch with an on-disk cache, and 1-based slicing."""

from __future__ import annotations

import io
import logging
import os
import re
import tempfile
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, TextIO

from filelock import FileLock

__all__ = [
    "EFETCH_URL",
    "FastaFormatError",
    "FastaRecord",
    "FetchError",
    "RangeError",
    "SequenceRange",
    "cache_paths",
    "efetch_url",
    "fetch_ncbi",
    "parse_fasta",
    "read_fasta",
    "read_metadata",
    "serialize_fasta",
    "slice_range",
]

log = logging.getLogger(__name__)

EFETCH_URL = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/efetch.fcgi"
API_KEY_ENV = "NCBI_API_KEY"


class FastaFormatError(ValueError):
    pass


class RangeError(ValueError):
    pass


class FetchError(RuntimeError):
    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class FastaRecord:
    accession_id: str
    description: str
    sequence: str

    @property
    def header(self) -> str:
        return f"{self.accession_id} {self.description}" if self.description else self.accession_id


@dataclass(frozen=True)
class SequenceRange:
    start: int
    stop: int

    def __post_init__(self):
        if not 1 <= self.start <= self.stop:
            raise RangeError(f"invalid range {self.start}:{self.stop}; need 1 <= start <= stop")

    @classmethod
    def parse(cls, text: str) -> "SequenceRange":
        """Parse ``A:B`` (``A-B`` is accepted too)."""
        m = re.fullmatch(r"\s*(\d+)\s*[:-]\s*(\d+)\s*", text)
        if not m:
            raise RangeError(f"cannot parse range {text!r}; expected START:STOP")
        return cls(int(m.group(1)), int(m.group(2)))

    def __len__(self):
        return self.stop - self.start + 1

    def __str__(self):
        return f"{self.start}:{self.stop}"


def parse_fasta(stream: TextIO | str | Iterable[str]) -> list[FastaRecord]:
    """Parse FASTA text into records.

    Sequence lines are joined and uppercased; whitespace inside them is dropped.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    records = []
    header = None
    chunks: list[str] = []

    def flush():
        if header is not None:
            acc, _, desc = header.partition(" ")
            records.append(FastaRecord(acc, desc.strip(), "".join(chunks).upper()))

    for lineno, line in enumerate(stream, 1):
        line = line.rstrip("\r\n")
        if line.startswith(">"):
            flush()
            header = line[1:].strip()
            chunks = []
        elif line.strip():
            if header is None:
                raise FastaFormatError(f"line {lineno}: sequence data before first '>' header")
            chunks.append("".join(line.split()))
    flush()
    return records


def read_fasta(path: str | os.PathLike) -> list[FastaRecord]:
    with open(path, encoding="ascii", errors="replace") as fh:
        return parse_fasta(fh)


def serialize_fasta(records: Iterable[FastaRecord], width: int = 70) -> str:
    out = []
    for rec in records:
        out.append(f">{rec.header}\n")
        seq = rec.sequence
        for i in range(0, len(seq), width):
            out.append(seq[i : i + width] + "\n")
    return "".join(out)


def slice_range(rec: FastaRecord, rng: SequenceRange) -> str:
    n = len(rec.sequence)
    if rng.stop > n:
        raise RangeError(f"range {rng} exceeds sequence length {n} of {rec.accession_id}")
    return rec.sequence[rng.start - 1 : rng.stop]


def efetch_url(accession: str, rng: SequenceRange | None, api_key: str | None = None) -> str:
    params = {"db": "nuccore", "id": accession, "rettype": "fasta", "retmode": "text"}
    if rng is not None:
        params["seq_start"] = rng.start
        params["seq_stop"] = rng.stop
    if api_key:
        params["api_key"] = api_key
    return EFETCH_URL + "?" + urllib.parse.urlencode(params)


def cache_paths(cache_dir: str | os.PathLike, accession: str, rng: SequenceRange | None) -> tuple[Path, Path]:
    """Return ``(fasta_path, metadata_path)`` for a cache key."""
    safe = re.sub(r"[^A-Za-z0-9_.-]", "_", accession)
    stem = f"{safe}_{rng.start}-{rng.stop}" if rng is not None else f"{safe}_full"
    base = Path(cache_dir)
    return base / f"{stem}.fasta", base / f"{stem}.meta"


def read_metadata(path: str | os.PathLike) -> dict[str, str]:
    meta = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if sep:
                meta[key.strip()] = value.strip()
    return meta


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _http_get(url: str, timeout: float = 30.0) -> bytes:
    req = urllib.request.Request(url, headers={"User-Agent": "cmmsearch/0.1"})
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            return resp.read()
    except urllib.error.HTTPError as e:
        raise FetchError(f"efetch returned HTTP {e.code} for {url}", status=e.code) from e
    except (urllib.error.URLError, OSError) as e:
        raise FetchError(f"efetch request failed: {e}") from e


def _single_record(raw: bytes, accession: str) -> FastaRecord:
    try:
        records = parse_fasta(raw.decode("ascii", errors="replace"))
    except FastaFormatError as e:
        raise FetchError(f"could not parse efetch response for {accession}: {e}") from e
    if not records:
        raise FetchError(f"efetch response for {accession} contained no FASTA record")
    return records[0]


def fetch_ncbi(
    accession: str,
    rng: SequenceRange | None,
    cache_dir: str | os.PathLike,
    *,
    offline: bool = False,
    api_key: str | None = None,
    http_get: Callable[[str], bytes] | None = None,
) -> tuple[FastaRecord, str]:
    """Fetch ``accession`` restricted to ``rng`` from nuccore, via the cache.

    Returns the record and its provenance, ``"cache"`` or ``"network"``.
    Raw response bytes go to ``<key>.fasta`` next to a ``key=value``
    metadata sidecar.  Writes for one key are serialized with a file lock.
    """
    fasta_path, meta_path = cache_paths(cache_dir, accession, rng)
    fasta_path.parent.mkdir(parents=True, exist_ok=True)
    if api_key is None:
        api_key = os.environ.get(API_KEY_ENV) or None

    with FileLock(str(fasta_path) + ".lock"):
        if fasta_path.exists():
            log.debug("cache hit %s", fasta_path)
            return _single_record(fasta_path.read_bytes(), accession), "cache"
        if offline:
            raise FetchError(f"{accession} {rng} not in cache {cache_dir} and network is disabled")
        url = efetch_url(accession, rng, api_key)
        log.info("fetching %s", efetch_url(accession, rng))
        raw = (http_get or _http_get)(url)
        rec = _single_record(raw, accession)
        _atomic_write(fasta_path, raw)
        meta = {
            "accession": accession,
            "range": str(rng) if rng is not None else "full",
            "retrieved": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "source_url": efetch_url(accession, rng),
            "record_id": rec.accession_id,
            "length": str(len(rec.sequence)),
        }
        _atomic_write(meta_path, "".join(f"{k}={v}\n" for k, v in meta.items()).encode())
        return rec, "network"
