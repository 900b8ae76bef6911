"""Rasterize two-dimensional slices of the closed symmetrized polydisc.

Cells hold region codes: 0 Outside, 1 InteriorGn, 2 BoundaryGamma,
3 DistinguishedBoundary, 4 ToleranceBand. Row r corresponds to the r-th value
of the y axis (ascending), column c to the c-th value of the x axis.
"""
from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO

import numpy as np

from .errors import InputError
from .polydisc import DEFAULT_TOL, Region, SymPoint, ToleranceConfig, in_gamma_recursive

GRAY_LEVELS = {
    Region.OUTSIDE: 255,
    Region.INTERIOR: 128,
    Region.BOUNDARY: 64,
    Region.DISTINGUISHED: 0,
    Region.BAND: 192,
}

_SELECTOR = re.compile(r"^(?:s(\d+)|p)\.(re|im)$")


@dataclass(frozen=True)
class Selector:
    """Coordinate index (0-based, p is n-1) and which part of it varies."""

    index: int
    part: str

    @classmethod
    def parse(cls, text: str, n: int) -> "Selector":
        m = _SELECTOR.match(text.strip())
        if not m:
            raise InputError(f"bad coordinate selector {text!r}; use s<j>.re, s<j>.im, p.re or p.im")
        if m.group(1) is None:
            index = n - 1
        else:
            j = int(m.group(1))
            if not 1 <= j <= n - 1:
                raise InputError(f"selector {text!r}: s{j} does not exist for n={n}")
            index = j - 1
        return cls(index, m.group(2))

    def name(self, n: int) -> str:
        base = "p" if self.index == n - 1 else f"s{self.index + 1}"
        return f"{base}.{self.part}"


@dataclass(frozen=True)
class Axis:
    selector: Selector
    lo: float
    hi: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class GridSpec:
    n: int
    x: Axis
    y: Axis
    base: tuple[complex, ...]

    def __post_init__(self):
        if not 1 <= self.n <= 16:
            raise InputError("grid n must be in 1..16")
        if len(self.base) != self.n:
            raise InputError(f"base point has {len(self.base)} coordinates, expected {self.n}")
        for ax in (self.x, self.y):
            if ax.steps < 2:
                raise InputError("each axis needs at least 2 steps")
            if not (np.isfinite(ax.lo) and np.isfinite(ax.hi)) or ax.lo > ax.hi:
                raise InputError(f"bad axis range [{ax.lo}, {ax.hi}]")
        if self.x.selector == self.y.selector:
            raise InputError("the two free axes must select different coordinates or parts")

    def point(self, xv: float, yv: float) -> SymPoint:
        coords = list(self.base)
        for sel, v in ((self.x.selector, xv), (self.y.selector, yv)):
            c = coords[sel.index]
            coords[sel.index] = complex(v, c.imag) if sel.part == "re" else complex(c.real, v)
        return SymPoint.from_coords(coords)


def parse_axis(text: str, n: int) -> Axis:
    """``SELECTOR:MIN:MAX:STEPS``, e.g. ``s1.re:-3:3:601``."""
    parts = text.split(":")
    if len(parts) != 4:
        raise InputError(f"bad axis {text!r}; expected SELECTOR:MIN:MAX:STEPS")
    try:
        return Axis(Selector.parse(parts[0], n), float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError as exc:
        raise InputError(f"bad axis {text!r}: {exc}") from exc


def _row(spec: GridSpec, yv: float, tol: ToleranceConfig) -> list[int]:
    return [int(in_gamma_recursive(spec.point(xv, yv), tol).region) for xv in spec.x.values()]


def _row_task(args):
    return _row(*args)


def rasterize(spec: GridSpec, tol: ToleranceConfig = DEFAULT_TOL, jobs: int = 1) -> np.ndarray:
    """Region codes of ``in_gamma_recursive`` over the grid, shape ``(y.steps, x.steps)``."""
    tasks = [(spec, float(yv), tol) for yv in spec.y.values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [_row_task(t) for t in tasks]
    return np.array(rows, dtype=np.uint8)


def write_grid_csv(codes: np.ndarray, stream: IO[str]) -> None:
    for row in codes:
        stream.write(",".join(str(int(v)) for v in row) + "\n")


def pgm_bytes(codes: np.ndarray) -> bytes:
    """Binary portable graymap (P5) of the code grid."""
    lut = np.zeros(256, dtype=np.uint8)
    for region, level in GRAY_LEVELS.items():
        lut[int(region)] = level
    h, w = codes.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + lut[codes].tobytes()
