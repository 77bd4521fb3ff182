"""PDE-based dilation and erosion with the Rouy-Tourin upwind scheme.

One explicit step of size ``tau`` approximates a dilation (erosion) with a
ball of radius ``tau``; ``k`` steps give radius ``k * tau``.  Stability of a
single step requires ``tau <= h`` in 1-D and ``tau <= h / sqrt(2)`` in 2-D.

The array kernels (:func:`rt_dilate`, :func:`rt_erode`, ...) act on the
trailing ``ndim`` axes of an array of any shape, so a stack of signals or
images can be processed in one call.  The ``*_1d`` / ``*_2d`` functions and
:func:`dilate` / :func:`erode` accept :class:`~sife.grid.Signal1D` and
:class:`~sife.grid.Image2D` containers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Field, Image2D, Signal1D

# relative slack when comparing a step size against its limit, so that e.g.
# tau = h / sqrt(2) computed by the caller is accepted
LIMIT_SLACK = 1e-12


class StabilityError(ValueError):
    """A step size exceeds the stability limit of the scheme."""


def rt_limit(h: float, ndim: int) -> float:
    """Largest stable Rouy-Tourin step size on a grid of spacing ``h``."""
    return h if ndim == 1 else h / math.sqrt(ndim)


def check_step(tau: float, limit: float, what: str) -> None:
    if not tau > 0:
        raise StabilityError(f"{what}: step size must be positive, got {tau}")
    if tau > limit * (1 + LIMIT_SLACK):
        raise StabilityError(f"{what}: step size {tau} exceeds stability limit {limit:.6g}")


@dataclass(frozen=True)
class StructuringRadius:
    """Ball radius ``r`` realised by ``rt_steps`` Rouy-Tourin steps of ``r / rt_steps``."""

    r: float
    rt_steps: int = 1

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"radius must be positive, got {self.r}")
        if int(self.rt_steps) != self.rt_steps or self.rt_steps < 1:
            raise ValueError(f"rt_steps must be a positive integer, got {self.rt_steps}")

    @property
    def tau_rt(self) -> float:
        return self.r / self.rt_steps

    @classmethod
    def auto(cls, r: float, h: float = 1.0, ndim: int = 2) -> "StructuringRadius":
        """Fewest steps that keep each step within the stability limit."""
        limit = rt_limit(h, ndim)
        steps = max(1, math.ceil(r / limit * (1 - LIMIT_SLACK)))
        return cls(r, steps)

    def validate(self, h: float, ndim: int) -> None:
        check_step(self.tau_rt, rt_limit(h, ndim), f"{ndim}-D Rouy-Tourin step")


def _axis_slopes(u: np.ndarray, axis: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """(u[i+1] - u[i]) / h and (u[i-1] - u[i]) / h along ``axis``, mirrored boundary.

    With the mirror rule u[-1] = u[0] both one-sided differences vanish at
    the border, so no padding is needed.
    """
    d = np.diff(u, axis=axis) / h
    shape = list(u.shape)
    shape[axis] = 1
    zero = np.zeros(shape)
    fwd = np.concatenate([d, zero], axis=axis)
    bwd = np.concatenate([zero, -d], axis=axis)
    return fwd, bwd


def _upwind_speed(u: np.ndarray, h: float, ndim: int) -> np.ndarray:
    """Per-pixel Rouy-Tourin approximation of |grad u| for dilation.

    Per axis: max(0, u_{i+1} - u_i, u_{i-1} - u_i) / h, mirrored boundary;
    the axis terms are combined in the Euclidean norm.
    """
    speed = None
    for axis in range(u.ndim - ndim, u.ndim):
        d = np.diff(u, axis=axis)
        lo = (Ellipsis, slice(None, -1)) + (slice(None),) * (u.ndim - 1 - axis)
        hi = (Ellipsis, slice(1, None)) + (slice(None),) * (u.ndim - 1 - axis)
        a = np.zeros_like(u)
        np.maximum(d, 0.0, out=a[lo])
        np.maximum(a[hi], -d, out=a[hi])
        if h != 1.0:
            a /= h
        if ndim == 1:
            return a
        if speed is None:
            speed = a * a
        else:
            speed += a * a
    return np.sqrt(speed, out=speed)


def rt_dilate(u: np.ndarray, tau: float, h: float = 1.0, ndim: int = 1, check: bool = True) -> np.ndarray:
    """One Rouy-Tourin dilation step of size ``tau`` on the trailing ``ndim`` axes."""
    if check:
        check_step(tau, rt_limit(h, ndim), f"{ndim}-D dilation")
    u = np.asarray(u, dtype=np.float64)
    return u + tau * _upwind_speed(u, h, ndim)


def rt_erode(u: np.ndarray, tau: float, h: float = 1.0, ndim: int = 1, check: bool = True) -> np.ndarray:
    """One Rouy-Tourin erosion step; uses max(0, u_i - u_{i+1}, u_i - u_{i-1}) per axis."""
    if check:
        check_step(tau, rt_limit(h, ndim), f"{ndim}-D erosion")
    u = np.asarray(u, dtype=np.float64)
    # (u_i - u_{i+1}) of u is (v_{i+1} - v_i) of v = -u; negation is exact
    return u - tau * _upwind_speed(-u, h, ndim)


def rt_dilate_step_1d(u: Signal1D, tau: float) -> Signal1D:
    return u.with_values(rt_dilate(u.values, tau, u.h, 1))


def rt_erode_step_1d(u: Signal1D, tau: float) -> Signal1D:
    return u.with_values(rt_erode(u.values, tau, u.h, 1))


def rt_dilate_step_2d(u: Image2D, tau: float) -> Image2D:
    return u.with_values(rt_dilate(u.values, tau, u.h, 2))


def rt_erode_step_2d(u: Image2D, tau: float) -> Image2D:
    return u.with_values(rt_erode(u.values, tau, u.h, 2))


def dilate_array(u: np.ndarray, sr: StructuringRadius, h: float = 1.0, ndim: int = 1,
                 check: bool = True) -> np.ndarray:
    if check:
        sr.validate(h, ndim)
    for _ in range(sr.rt_steps):
        u = rt_dilate(u, sr.tau_rt, h, ndim, check=False)
    return u


def erode_array(u: np.ndarray, sr: StructuringRadius, h: float = 1.0, ndim: int = 1,
                check: bool = True) -> np.ndarray:
    if check:
        sr.validate(h, ndim)
    for _ in range(sr.rt_steps):
        u = rt_erode(u, sr.tau_rt, h, ndim, check=False)
    return u


def dilate(u: Field, sr: StructuringRadius) -> Field:
    """Dilation with a ball of radius ``sr.r`` (interval in 1-D, disk in 2-D)."""
    return u.with_values(dilate_array(u.values, sr, u.h, u.values.ndim))


def erode(u: Field, sr: StructuringRadius) -> Field:
    return u.with_values(erode_array(u.values, sr, u.h, u.values.ndim))


def _ball_offsets(radius_px: int, ndim: int) -> list[tuple[int, ...]]:
    rng = range(-radius_px, radius_px + 1)
    if ndim == 1:
        return [(a,) for a in rng]
    return [(a, b) for a in rng for b in rng if a * a + b * b <= radius_px * radius_px]


def flat_dilate_oracle(u, radius_px: int):
    """Set-theoretic dilation: max over the discrete ball of pixel radius ``radius_px``.

    Brute force over all ball offsets on a mirrored extension.  Meant as a
    reference for tests, not for production use.
    """
    if radius_px < 0:
        raise ValueError("radius_px must be nonnegative")
    values = u.values if isinstance(u, (Signal1D, Image2D)) else np.asarray(u, dtype=np.float64)
    ndim = values.ndim
    R = int(radius_px)
    padded = np.pad(values, R, mode="symmetric")
    out = np.full(values.shape, -np.inf)
    for off in _ball_offsets(R, ndim):
        sl = tuple(slice(R + o, R + o + n) for o, n in zip(off, values.shape))
        out = np.maximum(out, padded[sl])
    return u.with_values(out) if isinstance(u, (Signal1D, Image2D)) else out


def flat_erode_oracle(u, radius_px: int):
    if isinstance(u, (Signal1D, Image2D)):
        return u.with_values(-flat_dilate_oracle(-u.values, radius_px))
    return -flat_dilate_oracle(-np.asarray(u, dtype=np.float64), radius_px)


def internal_gradient(u: Field, sr: StructuringRadius) -> np.ndarray:
    """(u - erosion) / r."""
    return (u.values - erode(u, sr).values) / sr.r


def external_gradient(u: Field, sr: StructuringRadius) -> np.ndarray:
    """(dilation - u) / r."""
    return (dilate(u, sr).values - u.values) / sr.r


def beucher_gradient(u: Field, sr: StructuringRadius) -> np.ndarray:
    return 0.5 * (internal_gradient(u, sr) + external_gradient(u, sr))


def second_flowline_derivative(u: Field, sr: StructuringRadius) -> np.ndarray:
    """Morphological estimate of the second derivative along the gradient direction."""
    return (external_gradient(u, sr) - internal_gradient(u, sr)) / sr.r
