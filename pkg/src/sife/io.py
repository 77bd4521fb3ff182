"""PGM (P2/P5) codec and CSV report writers.

Grey values are kept as floats internally and quantised only when an image
is encoded: clamp to ``[0, maxval]``, then round half up.
"""
from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .grid import Image2D

WHITESPACE = b" \t\n\r\v\f"
QUANTISE_COMMENT = b"# values clamped to [0, maxval] and rounded half up"


class PgmError(ValueError):
    """Malformed PGM data; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class PgmMagicError(PgmError):
    pass


class PgmHeaderError(PgmError):
    pass


class PgmTruncatedError(PgmError):
    pass


class PgmValueError(PgmError):
    """A pixel value exceeds the declared maxval."""


@dataclass(frozen=True)
class PgmImage:
    magic: str
    width: int
    height: int
    maxval: int
    pixels: np.ndarray  # (height, width) unsigned integers

    def to_image(self, h: float = 1.0) -> Image2D:
        return Image2D(self.pixels.astype(np.float64), h)


class _Scanner:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0
        self.token_start = 0

    def skip_space_and_comments(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in WHITESPACE:
                self.pos += 1
            else:
                return

    def integer(self, what: str) -> int:
        self.skip_space_and_comments()
        start = self.token_start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if self.pos >= len(self.data):
                raise PgmTruncatedError(f"unexpected end of data while reading {what}", self.pos)
            raise PgmHeaderError(f"expected {what}, found {self.data[self.pos:self.pos + 1]!r}", self.pos)
        return int(self.data[start:self.pos])


def _decode_ascii_payload(sc: _Scanner, count: int, maxval: int) -> np.ndarray:
    rest = sc.data[sc.pos:]
    tokens = rest.split()
    if b"#" not in rest and len(tokens) >= count and all(t.isdigit() for t in tokens[:count]):
        values = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        if values.max() <= maxval:
            return values
    # slow path: comments inside the payload, or an error whose offset we need
    values = np.empty(count, dtype=np.int64)
    for k in range(count):
        v = sc.integer(f"pixel {k}")
        if v > maxval:
            raise PgmValueError(f"pixel value {v} exceeds maxval {maxval}", sc.token_start)
        values[k] = v
    return values


def decode_pgm(data: bytes) -> PgmImage:
    """Parse P2 or P5 bytes; comments are allowed anywhere in the header."""
    if len(data) < 2:
        raise PgmTruncatedError("missing magic number", len(data))
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmMagicError(f"unsupported magic number {magic!r}", 0)
    sc = _Scanner(data)
    sc.pos = 2
    if sc.pos < len(data) and data[sc.pos:sc.pos + 1] not in WHITESPACE + b"#":
        raise PgmHeaderError("magic number must be followed by whitespace", sc.pos)
    width = sc.integer("width")
    dims_pos = sc.token_start
    height = sc.integer("height")
    if width < 1 or height < 1:
        raise PgmHeaderError(f"invalid dimensions {width}x{height}", dims_pos)
    maxval = sc.integer("maxval")
    if not 0 < maxval <= 65535:
        raise PgmHeaderError(f"maxval {maxval} outside 1..65535", sc.token_start)
    count = width * height

    if magic == b"P2":
        pixels = _decode_ascii_payload(sc, count, maxval)
    else:
        if sc.pos >= len(data):
            raise PgmTruncatedError("missing payload", sc.pos)
        if data[sc.pos:sc.pos + 1] not in WHITESPACE:
            raise PgmHeaderError("maxval must be followed by a single whitespace byte", sc.pos)
        start = sc.pos + 1
        nbytes = 2 if maxval > 255 else 1
        need = count * nbytes
        if len(data) - start < need:
            raise PgmTruncatedError(f"payload needs {need} bytes, found {len(data) - start}", len(data))
        dtype = ">u2" if nbytes == 2 else "u1"
        pixels = np.frombuffer(data, dtype=dtype, count=count, offset=start).astype(np.int64)
        if pixels.max() > maxval:
            bad = int(np.argmax(pixels > maxval))
            raise PgmValueError(f"pixel value {pixels[bad]} exceeds maxval {maxval}", start + bad * nbytes)
    return PgmImage(magic.decode(), width, height, maxval, pixels.reshape(height, width))


def read_pgm(data: bytes) -> Image2D:
    """Decode PGM bytes into an :class:`Image2D` with h = 1, without rescaling."""
    return decode_pgm(data).to_image()


def quantise(values: np.ndarray, maxval: int = 255) -> np.ndarray:
    v = np.clip(np.asarray(values, dtype=np.float64), 0, maxval)
    return np.floor(v + 0.5).astype(np.int64)


def encode_pgm(img: PgmImage) -> bytes:
    header = b"%s\n%s\n%d %d\n%d\n" % (img.magic.encode(), QUANTISE_COMMENT, img.width, img.height, img.maxval)
    px = np.asarray(img.pixels, dtype=np.int64)
    if img.magic == "P5":
        dtype = ">u2" if img.maxval > 255 else "u1"
        return header + px.astype(dtype).tobytes()
    rows = [b" ".join(b"%d" % v for v in row) for row in px.tolist()]
    return header + b"\n".join(rows) + b"\n"


def write_pgm(img: Image2D, mode: str = "P5", maxval: int = 255) -> bytes:
    if mode not in ("P2", "P5"):
        raise ValueError(f"mode must be 'P2' or 'P5', got {mode!r}")
    if not 0 < maxval <= 65535:
        raise ValueError(f"maxval {maxval} outside 1..65535")
    px = quantise(img.values, maxval)
    return encode_pgm(PgmImage(mode, img.width, img.height, maxval, px))


def load_pgm(path) -> Image2D:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path, img: Image2D, mode: str = "P5", maxval: int = 255) -> None:
    Path(path).write_bytes(write_pgm(img, mode, maxval))


# --------------------------------------------------------------------------
# CSV


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Comma-separated, header first, ``\\n`` line endings, ``repr``-exact floats."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


FLOW_REPORT_FIELDS = ("iteration", "max_update", "min", "max", "violation")


def flow_report_csv(report, timing: bool = False) -> str:
    """Per-iteration rows of a :class:`~sife.flows.FlowReport`.

    Wall-clock is only included when ``timing`` is set, so that reports of
    identical runs stay byte-identical by default.
    """
    header = FLOW_REPORT_FIELDS + (("elapsed_s",) if timing else ())
    rows = []
    for rec in report.records:
        row = [rec.iteration, rec.max_update, rec.min, rec.max, rec.violation]
        if timing:
            row.append(rec.elapsed)
        rows.append(row)
    return csv_text(header, rows)


def property_results_csv(results) -> str:
    from .harness import CSV_FIELDS

    return csv_text(CSV_FIELDS, ([r.row()[k] for k in CSV_FIELDS] for r in results))
