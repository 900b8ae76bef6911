"""Point files: JSON lines or CSV, complex numbers as ``[re, im]`` pairs.

JSON lines: one object per line, ``{"id": "a", "n": 2, "coords": [[re, im], ...]}``
with ``coords = [s1, ..., s_{n-1}, p]``.

CSV: header ``id,n,s1_re,s1_im,...,p_re,p_im``; a file may mix dimensions, in
which case the header carries the columns of the largest one and shorter rows
leave the extra cells empty.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import InputError
from .numerics import as_complex
from .polydisc import Region, SymPoint


class PointFileError(InputError):
    """A point file record failed to parse; the message names the line."""


@dataclass(frozen=True)
class PointRecord:
    id: str
    n: int
    coords: tuple[complex, ...]

    def __post_init__(self):
        if len(self.coords) != self.n:
            raise InputError(f"record {self.id!r}: {len(self.coords)} coordinates for n={self.n}")

    @property
    def point(self) -> SymPoint:
        return SymPoint.from_coords(self.coords)

    @classmethod
    def from_point(cls, id: str, pt: SymPoint) -> "PointRecord":
        return cls(id, pt.n, pt.coords)


def coord_names(n: int) -> list[str]:
    return [f"s{j}" for j in range(1, n)] + ["p"]


def to_jsonable(obj):
    """Convert complex numbers, tuples, arrays and regions to JSON-ready values."""
    if isinstance(obj, Region):
        return obj.label
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def dump_line(obj) -> str:
    return json.dumps(to_jsonable(obj), separators=(",", ":"))


def _parse_json_record(line: str, lineno: int) -> PointRecord:
    try:
        obj = json.loads(line)
        rid = str(obj["id"])
        n = int(obj["n"])
        coords = tuple(as_complex(c, f"coords[{i}]") for i, c in enumerate(obj["coords"]))
        if n < 1:
            raise InputError(f"n must be >= 1, got {n}")
        return PointRecord(rid, n, coords)
    except (ValueError, KeyError, TypeError) as exc:
        raise PointFileError(f"line {lineno}: {exc}") from exc


def _parse_csv_row(row: dict, lineno: int) -> PointRecord:
    try:
        rid = row["id"]
        n = int(row["n"])
        if n < 1:
            raise InputError(f"n must be >= 1, got {n}")
        coords = []
        for name in coord_names(n):
            coords.append(as_complex(complex(float(row[f"{name}_re"]), float(row[f"{name}_im"])), name))
        return PointRecord(rid, n, tuple(coords))
    except (ValueError, KeyError, TypeError) as exc:
        raise PointFileError(f"line {lineno}: {exc}") from exc


def iter_points(stream: IO[str], fmt: str = "json") -> Iterator[PointRecord]:
    if fmt == "csv":
        reader = csv.DictReader(stream)
        for row in reader:
            yield _parse_csv_row(row, reader.line_num)
        return
    for lineno, line in enumerate(stream, start=1):
        if line.strip():
            yield _parse_json_record(line, lineno)


def guess_format(path: str | Path) -> str:
    return "csv" if str(path).lower().endswith(".csv") else "json"


def read_points(path: str | Path, fmt: str | None = None) -> list[PointRecord]:
    fmt = fmt or guess_format(path)
    with open(path, newline="") as fh:
        return list(iter_points(fh, fmt))


def write_points(records: Iterable[PointRecord], stream: IO[str], fmt: str = "json") -> None:
    records = list(records)
    if fmt == "csv":
        width = max((r.n for r in records), default=1)
        header = ["id", "n"] + [f"{c}_{part}" for c in coord_names(width) for part in ("re", "im")]
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for r in records:
            # s-coordinates of a shorter record are padded before p
            cells = [""] * (2 * width)
            for i, z in enumerate(r.coords[:-1]):
                cells[2 * i], cells[2 * i + 1] = repr(z.real), repr(z.imag)
            cells[-2], cells[-1] = repr(r.coords[-1].real), repr(r.coords[-1].imag)
            writer.writerow([r.id, r.n] + cells)
        return
    for r in records:
        stream.write(dump_line({"id": r.id, "n": r.n, "coords": list(r.coords)}) + "\n")
