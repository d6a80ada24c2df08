"""Numerical differentiation with Richardson extrapolation.

The default scheme is a central difference refined by a two-level Richardson
ladder with base step h = 1e-4 * (1 + |x|); the error estimate is the size of
the last extrapolation correction.  Functions may return scalars or ndarrays
(differentiation is elementwise).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANALYTIC = "analytic"
CENTRAL = "central-fd"
RICHARDSON = "richardson-fd"


@dataclass(frozen=True)
class DiffSpec:
    """How to differentiate with respect to the parameter.

    step=None selects the default base step 1e-4 * (1 + |x|); levels is the
    number of Richardson extrapolation levels (ignored for 'central-fd').
    """

    method: str = RICHARDSON
    step: float | None = None
    levels: int = 2

    def base_step(self, x: float) -> float:
        return self.step if self.step is not None else 1e-4 * (1.0 + abs(x))


DEFAULT_DIFF = DiffSpec()


def _absmax(v) -> float:
    return float(np.max(np.abs(v)))


def derivative(f, x: float, spec: DiffSpec = DEFAULT_DIFF):
    """d f / d x at x, returning (value, error_estimate).

    'central-fd' uses the plain stencil at the base step and estimates the
    error by one step halving; 'richardson-fd' runs the full ladder.
    """
    h = spec.base_step(x)
    if spec.method == CENTRAL:
        levels = 1
    elif spec.method == RICHARDSON:
        levels = max(int(spec.levels), 1)
    else:
        raise ValueError(f"cannot differentiate numerically with method {spec.method!r}")

    steps = [h / 2.0**k for k in range(levels + 1)]
    samples = [(f(x + hk), f(x - hk)) for hk in steps]
    scale = max(_absmax(fp) + _absmax(fm) for fp, fm in samples)
    # Cancellation of nearly equal function values floors the achievable accuracy.
    rounding_floor = np.finfo(float).eps * scale / steps[-1]

    rows = [[(fp - fm) / (2.0 * hk) for (fp, fm), hk in zip(samples, steps)]]
    if spec.method == CENTRAL:
        d_coarse, d_fine = rows[0]
        return d_fine, max(_absmax(np.asarray(d_fine) - np.asarray(d_coarse)), rounding_floor)
    while len(rows[-1]) > 1:
        fac = 4.0 ** len(rows)
        prev = rows[-1]
        rows.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    best = rows[-1][0]
    err = max(_absmax(np.asarray(best) - np.asarray(rows[-2][-1])), rounding_floor)
    return best, err


def stencil_radius(x: float, spec: DiffSpec) -> float:
    """Largest offset from x that derivative() will evaluate."""
    return spec.base_step(x)


def central5(f, x: float, h: float):
    """Five-point central difference (O(h^4)); used to validate analytic derivatives."""
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12.0 * h)
