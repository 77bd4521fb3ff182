"""Seeded property checks for the flows, plus image-quality metrics.

Every check draws its inputs from ``numpy.random.default_rng(seed)``, runs
all trials as one batched array through the array kernels, and returns a
:class:`PropertyResult`.  Violations are results, never exceptions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .flows import FlowParams, gaussian_blur_array, sife_step, sild_step
from .grid import Image2D
from .morphology import StructuringRadius

EXACT_TOL = 1e-12
CONVERGENCE_TOL = 1e-6

CSV_FIELDS = ("property", "trials", "failures", "worst_violation", "tolerance", "seed", "guaranteed")


@dataclass
class PropertyResult:
    name: str
    trials: int
    failures: int
    worst: float
    seed: int
    tolerance: float = EXACT_TOL
    # False for informational runs (e.g. deliberately overdriven step sizes)
    guaranteed: bool = True

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def row(self) -> dict:
        return {
            "property": self.name,
            "trials": self.trials,
            "failures": self.failures,
            "worst_violation": f"{self.worst:.6e}",
            "tolerance": f"{self.tolerance:.0e}",
            "seed": self.seed,
            "guaranteed": "yes" if self.guaranteed else "no",
        }


def _result(name, per_trial: np.ndarray, seed, tol, guaranteed=True) -> PropertyResult:
    per_trial = np.asarray(per_trial, dtype=np.float64)
    # a blown-up iterate must count as a failure, not slip past a NaN comparison
    per_trial = np.where(np.isfinite(per_trial), per_trial, np.inf)
    return PropertyResult(
        name=name,
        trials=int(per_trial.size),
        failures=int(np.count_nonzero(per_trial > tol)),
        worst=float(per_trial.max(initial=0.0)),
        seed=seed,
        tolerance=tol,
        guaranteed=guaranteed,
    )


# --------------------------------------------------------------------------
# generators


def random_fields(rng: np.random.Generator, trials: int, shape: tuple[int, ...],
                  smooth_sigma: float = 2.0) -> np.ndarray:
    """Uniform [0, 255] noise; the second half of the batch gets one blur pass."""
    u = rng.uniform(0.0, 255.0, size=(trials,) + tuple(shape))
    half = trials // 2
    if half:
        u[half:] = gaussian_blur_array(u[half:], smooth_sigma, ndim=len(shape))
    return u


def random_monotone(rng: np.random.Generator, trials: int, n: int) -> np.ndarray:
    """Monotone signals from nonnegative increments; odd rows are decreasing.

    About a fifth of the increments are zero so that plateaus occur.
    """
    inc = rng.exponential(1.0, size=(trials, n))
    inc[rng.random((trials, n)) < 0.2] = 0.0
    inc[:, 0] = 0.0
    u = np.cumsum(inc, axis=1)
    top = u[:, -1:].copy()
    top[top == 0] = 1.0
    u = 255.0 * u / top
    u[1::2] = u[1::2, ::-1]
    return u


def random_binary(rng: np.random.Generator, trials: int, shape: tuple[int, ...]) -> np.ndarray:
    """Two-valued fields with a random pair of grey levels per trial."""
    lo = rng.uniform(0, 100, size=(trials,) + (1,) * len(shape))
    hi = lo + rng.uniform(1, 155, size=lo.shape)
    mask = rng.random((trials,) + tuple(shape)) < 0.5
    return np.where(mask, hi, lo)


def two_disc_image(n: int = 128, sigma: float = 3.0) -> Image2D:
    """Two overlapping flat discs on a flat background, Gaussian-blurred.

    Grey levels 30 (background), 120 and 200; the blur makes every edge a
    ramp for the sharpening flows to steepen.
    """
    y, x = np.mgrid[0:n, 0:n].astype(np.float64)
    s = n / 128.0
    u = np.full((n, n), 30.0)
    u[(x - 76 * s) ** 2 + (y - 70 * s) ** 2 <= (28 * s) ** 2] = 120.0
    u[(x - 46 * s) ** 2 + (y - 52 * s) ** 2 <= (22 * s) ** 2] = 200.0
    return Image2D(gaussian_blur_array(u, sigma))


def _spatial_axes(ndim: int) -> tuple[int, ...]:
    return tuple(range(1, ndim + 1))


# --------------------------------------------------------------------------
# checks


def check_maxmin(params: FlowParams, ndim: int = 1, seed: int = 0, trials: int = 100,
                 size: int = 64, h: float = 1.0, inputs: np.ndarray | None = None,
                 guaranteed: bool = True, name: str | None = None) -> PropertyResult:
    """Worst over- or undershoot of the initial range across all iterates."""
    if inputs is None:
        inputs = random_fields(np.random.default_rng(seed), trials, (size,) * ndim)
    if guaranteed:
        params.validate(h, ndim)
    axes = _spatial_axes(ndim)
    f = np.asarray(inputs, dtype=np.float64)
    lo, hi = f.min(axis=axes), f.max(axis=axes)
    worst = np.zeros(f.shape[0])
    u = f
    for _ in range(params.iterations):
        u = params.step(u, h, ndim, check=False)
        viol = np.maximum(u.max(axis=axes) - hi, lo - u.min(axis=axes))
        worst = np.maximum(worst, viol)
    name = name or f"maxmin-{ndim}d-{params.flow}-r{params.sr.r:g}-tau{params.tau:g}"
    return _result(name, worst, seed, EXACT_TOL, guaranteed)


def check_monotonicity(params: FlowParams, seed: int = 0, trials: int = 100, size: int = 64,
                       h: float = 1.0, inputs: np.ndarray | None = None,
                       guaranteed: bool = True, name: str | None = None) -> PropertyResult:
    """Largest step against the input's monotonicity direction, over all iterates (1-D)."""
    if inputs is None:
        inputs = random_monotone(np.random.default_rng(seed), trials, size)
    if guaranteed:
        params.validate(h, 1)
    f = np.asarray(inputs, dtype=np.float64)
    df = np.diff(f, axis=1)
    # +1 for non-decreasing inputs, -1 for non-increasing; constants count as increasing
    direction = np.where(np.all(df >= 0, axis=1), 1.0, -1.0)[:, None]
    worst = np.zeros(f.shape[0])
    u = f
    for _ in range(params.iterations):
        u = params.step(u, h, 1, check=False)
        against = np.max(-direction * np.diff(u, axis=1), axis=1, initial=0.0)
        worst = np.maximum(worst, against)
    name = name or f"monotonicity-1d-{params.flow}-r{params.sr.r:g}-tau{params.tau:g}"
    return _result(name, worst, seed, EXACT_TOL, guaranteed)


def check_equivalence_1d(seed: int = 0, trials: int = 100, size: int = 64, tau: float = 0.2,
                         steps: int = 20, h: float = 1.0,
                         inputs: np.ndarray | None = None) -> PropertyResult:
    """SIFE with r = h against SILD, one step at a time along the SIFE trajectory.

    Restricted to monotone signals: elsewhere the minmod of SILD can vanish
    while the morphological minima of SIFE do not.
    """
    if inputs is None:
        inputs = random_monotone(np.random.default_rng(seed), trials, size)
    sr = StructuringRadius(h, 1)
    u = np.asarray(inputs, dtype=np.float64)
    worst = np.zeros(u.shape[0])
    for _ in range(steps):
        a = sife_step(u, tau, sr, h, 1)
        b = sild_step(u, tau, h, 1)
        worst = np.maximum(worst, np.max(np.abs(a - b), axis=1))
        u = a
    return _result(f"equivalence-1d-sife-r{h:g}-vs-sild-tau{tau:g}", worst, seed, EXACT_TOL)


def check_binary_invariance(ndim: int, seed: int = 0, trials: int = 50, size: int = 32,
                            iterations: int = 100, params: FlowParams | None = None,
                            h: float = 1.0) -> PropertyResult:
    """Drift of two-valued inputs under SIFE."""
    params = params or FlowParams("sife", iterations=iterations)
    f = random_binary(np.random.default_rng(seed), trials, (size,) * ndim)
    axes = _spatial_axes(ndim)
    u = f
    for _ in range(iterations):
        u = params.step(u, h, ndim)
    drift = np.max(np.abs(u - f), axis=axes)
    return _result(f"binary-{ndim}d-{params.flow}", drift, seed, EXACT_TOL)


# --------------------------------------------------------------------------
# suites


def suite(name: str, seed: int = 0, trials: int = 100, iterations: int = 100) -> list[PropertyResult]:
    """Named bundles of checks run by the ``verify`` command."""
    if name == "all":
        out = []
        for sub in ("theorem1", "maxmin2d", "equivalence", "binary"):
            out += suite(sub, seed, trials, iterations)
        return out
    if name == "theorem1":
        out = []
        for r in (0.5, 1.0):
            p = FlowParams("sife", tau=r * r, sr=StructuringRadius(r, 1), iterations=iterations)
            out.append(check_maxmin(p, 1, seed, trials))
            out.append(check_monotonicity(p, seed, trials))
        over = FlowParams("sife", tau=4 * 0.25, sr=StructuringRadius(0.5, 1), iterations=iterations)
        out.append(check_monotonicity(over, seed, trials, guaranteed=False,
                                      name="monotonicity-1d-sife-r0.5-tau1-overdriven"))
        return out
    if name == "maxmin2d":
        p = FlowParams("sife", tau=0.25, sr=StructuringRadius(0.5, 1), iterations=iterations)
        return [check_maxmin(p, 2, seed, trials)]
    if name == "equivalence":
        return [check_equivalence_1d(seed, trials)]
    if name == "binary":
        return [check_binary_invariance(1, seed, trials), check_binary_invariance(2, seed, trials)]
    raise ValueError(f"unknown suite {name!r}")


SUITES = ("theorem1", "maxmin2d", "equivalence", "binary", "all")


def format_table(results: list[PropertyResult]) -> str:
    header = f"{'property':<48} {'trials':>6} {'fail':>5} {'worst':>12}  status"
    lines = [header, "-" * len(header)]
    for res in results:
        if res.guaranteed:
            status = "PASS" if res.passed else "FAIL"
        else:
            status = "info"
        lines.append(f"{res.name:<48} {res.trials:>6} {res.failures:>5} {res.worst:>12.3e}  {status}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# metrics


def _values(img) -> np.ndarray:
    return img.values if isinstance(img, Image2D) else np.asarray(img, dtype=np.float64)


def mse(a, b) -> float:
    a, b = _values(a), _values(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr(a, b, peak: float = 255.0) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    if not peak > 0:
        raise ValueError("peak must be positive")
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)


def edge_regularity_profile(img, threshold=None) -> int:
    """Perimeter of the thresholded image.

    Counts 4-neighbour pairs with one pixel ``>= threshold`` and the other
    below it.  The threshold defaults to the middle of the grey-value range;
    a sequence of thresholds gives the summed perimeter of all level sets.
    """
    u = _values(img)
    if threshold is None:
        threshold = 0.5 * (float(u.min()) + float(u.max()))
    total = 0
    for t in np.atleast_1d(np.asarray(threshold, dtype=np.float64)):
        above = u >= t
        total += int(np.count_nonzero(above[:, 1:] != above[:, :-1])
                     + np.count_nonzero(above[1:, :] != above[:-1, :]))
    return total
