"""Signal and image containers with mirrored boundary handling.

All kernels in this package work on plain ``numpy`` arrays whose trailing
one (signals) or two (images) axes are spatial; leading axes are treated as
a batch.  :class:`Signal1D` and :class:`Image2D` are thin immutable wrappers
that carry the grid spacing alongside the grey values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

HALO = 2


class GridError(ValueError):
    """Invalid container contents or an impossible boundary extension."""


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise GridError(f"expected a {ndim}-D array, got shape {arr.shape}")
    if arr.size == 0:
        raise GridError("container must hold at least one value")
    if not np.all(np.isfinite(arr)):
        raise GridError("grey values must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Signal1D:
    """1-D grey-value signal on a uniform grid of spacing ``h``."""

    values: np.ndarray
    h: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 1))
        if not self.h > 0:
            raise GridError(f"grid spacing must be positive, got {self.h}")

    def __len__(self) -> int:
        return self.values.shape[0]

    def with_values(self, values) -> "Signal1D":
        return Signal1D(values, self.h)


@dataclass(frozen=True, eq=False)
class Image2D:
    """Row-major grey-value image; ``values[y, x]``."""

    values: np.ndarray
    h: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 2))
        if not self.h > 0:
            raise GridError(f"grid spacing must be positive, got {self.h}")

    @classmethod
    def from_flat(cls, width: int, height: int, values, h: float = 1.0) -> "Image2D":
        flat = np.asarray(values, dtype=np.float64).ravel()
        if width * height != flat.size:
            raise GridError(f"{width}x{height} image needs {width * height} values, got {flat.size}")
        return cls(flat.reshape(height, width), h)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    def with_values(self, values) -> "Image2D":
        return Image2D(values, self.h)


Field = Union[Signal1D, Image2D]


@dataclass(frozen=True)
class BoundaryPolicy:
    """Mirrored extension: index -1 copies 0, index -2 copies 1, per axis."""

    mode: str = "mirror"
    halo: int = HALO

    def __post_init__(self):
        if self.mode != "mirror":
            raise GridError(f"unsupported boundary mode {self.mode!r}")
        if self.halo not in (1, 2):
            raise GridError(f"halo must be 1 or 2, got {self.halo}")


def mirror_pad(u: np.ndarray, halo: int, ndim: int) -> np.ndarray:
    """Mirror-extend the trailing ``ndim`` axes of ``u`` by ``halo`` cells."""
    if halo not in (1, 2):
        raise GridError(f"halo must be 1 or 2, got {halo}")
    for n in u.shape[u.ndim - ndim:]:
        if halo > n:
            raise GridError(f"halo {halo} exceeds axis length {n}")
    pad = [(0, 0)] * (u.ndim - ndim) + [(halo, halo)] * ndim
    return np.pad(u, pad, mode="symmetric")


def extend_mirrored(img: Field, halo: int = HALO) -> np.ndarray:
    """Return a new array holding ``img`` with a mirrored border of width ``halo``.

    >>> extend_mirrored(Signal1D([1, 2, 3]), 2).tolist()
    [2.0, 1.0, 1.0, 2.0, 3.0, 3.0, 2.0]
    """
    return mirror_pad(img.values, halo, img.values.ndim)


def interior(extended: np.ndarray, halo: int, ndim: int) -> np.ndarray:
    sl = (Ellipsis,) + (slice(halo, -halo),) * ndim
    return extended[sl]


def range_stats(img) -> tuple[float, float]:
    values = img.values if isinstance(img, (Signal1D, Image2D)) else np.asarray(img)
    if values.size == 0:
        raise GridError("range of an empty array is undefined")
    return float(values.min()), float(values.max())
