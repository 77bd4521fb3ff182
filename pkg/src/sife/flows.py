"""Sharpening evolutions: SIFE, SILD and the shock filter.

Each ``*_step`` array kernel maps time level k to k+1 on the trailing
``ndim`` axes of its input, so stacks of signals/images advance together.
:func:`run_flow` drives any of them on a :class:`~sife.grid.Signal1D` or
:class:`~sife.grid.Image2D` and records per-iteration diagnostics.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.ndimage import correlate1d

from .grid import Field
from .morphology import (
    LIMIT_SLACK,
    StabilityError,
    StructuringRadius,
    _axis_slopes,
    check_step,
    rt_dilate,
    rt_erode,
    rt_limit,
)

FLOWS = ("sife", "sild", "shock")
DEFAULT_TAU = {"sife": 0.2, "sild": 0.2, "shock": 0.5}


def minmod(a: float, b: float, c: float) -> float:
    """Smallest-magnitude argument if all three share a sign, else 0."""
    if a > 0 and b > 0 and c > 0:
        return min(a, b, c)
    if a < 0 and b < 0 and c < 0:
        return max(a, b, c)
    return 0.0


def minmod3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Elementwise :func:`minmod`."""
    pos = np.minimum(np.minimum(a, b), c)
    neg = np.maximum(np.maximum(a, b), c)
    return np.where(pos > 0, pos, np.where(neg < 0, neg, 0.0))


# --------------------------------------------------------------------------
# SILD


def sild_limit(h: float, ndim: int) -> float:
    return h * h / (2 * ndim)


def _sild_bracket(u: np.ndarray, axis: int, h: float) -> np.ndarray:
    """mm(D+2, D+1, D-1) - mm(D+1, D-1, D-2) along one axis (mirror halo 2)."""
    pad = [(0, 0)] * u.ndim
    pad[axis] = (2, 2)
    d = np.diff(np.pad(u, pad, mode="symmetric"), axis=axis) / h
    n = u.shape[axis]

    def take(k):
        return np.take(d, np.arange(k, k + n), axis=axis)

    dm2, dm1, dp1, dp2 = take(0), take(1), take(2), take(3)
    return minmod3(dp2, dp1, dm1) - minmod3(dp1, dm1, dm2)


def sild_step(u: np.ndarray, tau: float, h: float = 1.0, ndim: int = 1, check: bool = True) -> np.ndarray:
    """Minmod scheme for stabilised inverse linear diffusion.

    In 2-D the 1-D bracket is applied along each axis and the results are
    summed; the stability limit drops from h^2/2 to h^2/4 accordingly.
    """
    if check:
        check_step(tau, sild_limit(h, ndim), f"{ndim}-D SILD")
    u = np.asarray(u, dtype=np.float64)
    bracket = sum(_sild_bracket(u, ax, h) for ax in range(u.ndim - ndim, u.ndim))
    return u - (tau / h) * bracket


# --------------------------------------------------------------------------
# SIFE


def check_sife(tau: float, sr: StructuringRadius, h: float, ndim: int) -> None:
    sr.validate(h, ndim)
    check_step(tau, sr.r * sr.r, f"{ndim}-D SIFE (tau <= r^2)")


def sife_step(u: np.ndarray, tau: float, sr: StructuringRadius, h: float = 1.0, ndim: int = 1,
              check: bool = True) -> np.ndarray:
    """Morphological SIFE step.

    Dilations/erosions of radius r and 2r come from ``sr.rt_steps`` and
    ``2 * sr.rt_steps`` Rouy-Tourin steps of size ``sr.tau_rt`` applied to
    the current iterate.  All first-order morphological differences are
    nonnegative, so the minmod switches of SILD reduce to plain minima.
    """
    if check:
        check_sife(tau, sr, h, ndim)
    u = np.asarray(u, dtype=np.float64)
    r, step = sr.r, sr.tau_rt
    dil_r = ero_r = u
    for _ in range(sr.rt_steps):
        dil_r = rt_dilate(dil_r, step, h, ndim, check=False)
        ero_r = rt_erode(ero_r, step, h, ndim, check=False)
    dil_2r, ero_2r = dil_r, ero_r
    for _ in range(sr.rt_steps):
        dil_2r = rt_dilate(dil_2r, step, h, ndim, check=False)
        ero_2r = rt_erode(ero_2r, step, h, ndim, check=False)

    outer_up = (dil_2r - dil_r) / r
    up = (dil_r - u) / r
    down = (u - ero_r) / r
    outer_down = (ero_r - ero_2r) / r
    inner = np.minimum(up, down)
    bracket = np.minimum(outer_up, inner) - np.minimum(inner, outer_down)
    return u - (tau / r) * bracket


# --------------------------------------------------------------------------
# shock filter


def laplacian(u: np.ndarray, h: float = 1.0, ndim: int = 2) -> np.ndarray:
    """5-point (2-D) / 3-point (1-D) Laplacian with mirrored boundary."""
    lap = np.zeros_like(u, dtype=np.float64)
    for axis in range(u.ndim - ndim, u.ndim):
        fwd, bwd = _axis_slopes(u, axis, h)
        lap += (fwd + bwd) / h
    return lap


def shock_step(u: np.ndarray, tau: float, h: float = 1.0, ndim: int = 2, check: bool = True) -> np.ndarray:
    """Dilate where the Laplacian is negative, erode where positive, freeze where zero."""
    if check:
        check_step(tau, rt_limit(h, ndim), f"{ndim}-D shock filter")
    u = np.asarray(u, dtype=np.float64)
    s = np.sign(laplacian(u, h, ndim))
    dil = rt_dilate(u, tau, h, ndim, check=False)
    ero = rt_erode(u, tau, h, ndim, check=False)
    return np.where(s < 0, dil, np.where(s > 0, ero, u))


# --------------------------------------------------------------------------
# container-level steps


@dataclass(frozen=True)
class FlowParams:
    """Configuration of one sharpening run.

    ``tau=None`` picks the experiment default of the flow (0.2 for SIFE and
    SILD, 0.5 for the shock filter).  ``converge_eps=None`` disables the
    steady-state stopping rule so that exactly ``iterations`` steps run.
    """

    flow: str = "sife"
    tau: Optional[float] = None
    sr: StructuringRadius = field(default_factory=lambda: StructuringRadius(0.5, 1))
    iterations: int = 100
    converge_eps: Optional[float] = 1e-6

    def __post_init__(self):
        if self.flow not in FLOWS:
            raise ValueError(f"unknown flow {self.flow!r}; choose from {FLOWS}")
        if self.tau is None:
            object.__setattr__(self, "tau", DEFAULT_TAU[self.flow])
        if self.iterations < 0:
            raise ValueError("iterations must be nonnegative")

    def validate(self, h: float, ndim: int) -> None:
        if self.flow == "sife":
            check_sife(self.tau, self.sr, h, ndim)
        elif self.flow == "sild":
            check_step(self.tau, sild_limit(h, ndim), f"{ndim}-D SILD")
        else:
            check_step(self.tau, rt_limit(h, ndim), f"{ndim}-D shock filter")

    def step(self, u: np.ndarray, h: float, ndim: int, check: bool = True) -> np.ndarray:
        if self.flow == "sife":
            return sife_step(u, self.tau, self.sr, h, ndim, check)
        if self.flow == "sild":
            return sild_step(u, self.tau, h, ndim, check)
        return shock_step(u, self.tau, h, ndim, check)


def sild_step_1d(u, tau):
    return u.with_values(sild_step(u.values, tau, u.h, 1))


def sild_step_2d(u, tau):
    return u.with_values(sild_step(u.values, tau, u.h, 2))


def sife_step_1d(u, params: FlowParams):
    return u.with_values(sife_step(u.values, params.tau, params.sr, u.h, 1))


def sife_step_2d(u, params: FlowParams):
    return u.with_values(sife_step(u.values, params.tau, params.sr, u.h, 2))


def shock_step_2d(u, tau):
    return u.with_values(shock_step(u.values, tau, u.h, 2))


# --------------------------------------------------------------------------
# blur


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled Gaussian truncated at ceil(3 sigma), normalised to sum 1."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return np.ones(1)
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-x * x / (2 * sigma * sigma))
    return k / k.sum()


def gaussian_blur_array(u: np.ndarray, sigma: float, h: float = 1.0, ndim: int = 2) -> np.ndarray:
    """Separable Gaussian convolution; ``sigma`` is in length units (pixels when h = 1)."""
    u = np.asarray(u, dtype=np.float64)
    if sigma == 0:
        return u.copy()
    k = gaussian_kernel(sigma / h)
    for axis in range(u.ndim - ndim, u.ndim):
        # scipy's "reflect" repeats the edge sample: the same mirror rule as the flows
        u = correlate1d(u, k, axis=axis, mode="reflect")
    return u


def gaussian_blur(img: Field, sigma: float) -> Field:
    return img.with_values(gaussian_blur_array(img.values, sigma, img.h, img.values.ndim))


# --------------------------------------------------------------------------
# driver


@dataclass
class IterationRecord:
    iteration: int
    max_update: float
    min: float
    max: float
    violation: float
    elapsed: float


@dataclass
class FlowReport:
    flow: str
    tau: float
    initial_range: tuple[float, float]
    records: list[IterationRecord] = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def elapsed(self) -> float:
        return self.records[-1].elapsed if self.records else 0.0

    @property
    def worst_violation(self) -> float:
        return max((rec.violation for rec in self.records), default=0.0)


def range_violation(u: np.ndarray, lo: float, hi: float) -> float:
    return max(0.0, float(u.max()) - hi, lo - float(u.min()))


def run_flow(u0: Field, params: FlowParams) -> tuple[Field, FlowReport]:
    """Iterate ``params.flow`` until the budget is spent or the update drops below eps."""
    ndim = u0.values.ndim
    params.validate(u0.h, ndim)
    u = u0.values
    lo, hi = float(u.min()), float(u.max())
    report = FlowReport(params.flow, params.tau, (lo, hi))
    start = time.perf_counter()
    for k in range(1, params.iterations + 1):
        nxt = params.step(u, u0.h, ndim, check=False)
        update = float(np.max(np.abs(nxt - u)))
        u = nxt
        report.records.append(IterationRecord(
            k, update, float(u.min()), float(u.max()), range_violation(u, lo, hi),
            time.perf_counter() - start,
        ))
        if params.converge_eps is not None and update < params.converge_eps:
            report.converged = True
            break
    return u0.with_values(u), report


__all__ = [
    "FLOWS", "FlowParams", "FlowReport", "IterationRecord", "StabilityError", "StructuringRadius",
    "gaussian_blur", "gaussian_blur_array", "gaussian_kernel", "laplacian", "minmod", "minmod3",
    "range_violation", "run_flow", "shock_step", "shock_step_2d", "sife_step", "sife_step_1d",
    "sife_step_2d", "sild_step", "sild_step_1d", "sild_step_2d", "LIMIT_SLACK",
]
