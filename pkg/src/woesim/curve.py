"""Least-squares logistic curve for attainable-score guidelines.

The working model is f(a) = L / (1 + exp(-k * (a - x0))) with the ceiling
constrained to L <= 1 (the scores it summarizes are bounded by 1) and
k > 0, so every fitted curve is strictly increasing in the association
strength a.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

import numpy as np

from .errors import CurveFitError, InsufficientPoints

#: Default tabulation grid for guideline tables: 0.5, 1.0, ..., 7.0.
DEFAULT_AIV_GRID = tuple(0.5 * i for i in range(1, 15))

_L_STARTS = (0.5, 0.75, 1.0)
_K_STARTS = (0.2, 0.5, 1.0)
_MAX_ITER = 200
_REL_TOL = 1e-10
_L_MIN = 1e-8
_K_MIN = 1e-8


@dataclass(frozen=True)
class CurveFit:
    """Fitted ceiling L, slope k, midpoint x0, and the residual sum of squares."""

    L: float
    k: float
    x0: float
    rss: float

    def predict(self, aiv):
        """Curve value(s) at the given association strength(s)."""
        a = np.asarray(aiv, dtype=float)
        out = self.L / (1.0 + np.exp(-self.k * (a - self.x0)))
        return float(out) if out.ndim == 0 else out


def _project(theta: np.ndarray) -> np.ndarray:
    return np.array([
        min(max(theta[0], _L_MIN), 1.0),
        max(theta[1], _K_MIN),
        theta[2],
    ])


def _model_and_jacobian(theta: np.ndarray, a: np.ndarray):
    L, k, x0 = theta
    s = 1.0 / (1.0 + np.exp(-k * (a - x0)))
    f = L * s
    ds = s * (1.0 - s)
    J = np.column_stack([s, L * ds * (a - x0), -L * ds * k])
    return f, J


def _rss(theta: np.ndarray, a: np.ndarray, y: np.ndarray) -> float:
    f, _ = _model_and_jacobian(theta, a)
    r = y - f
    return float(r @ r)


def _damped_gauss_newton(a: np.ndarray, y: np.ndarray, start) -> tuple[np.ndarray, float]:
    theta = _project(np.asarray(start, dtype=float))
    rss = _rss(theta, a, y)
    damping = 1e-3
    for _ in range(_MAX_ITER):
        f, J = _model_and_jacobian(theta, a)
        r = y - f
        g = J.T @ r
        A = J.T @ J
        accepted = False
        for _ in range(40):
            try:
                step = np.linalg.solve(A + damping * np.eye(3), g)
            except np.linalg.LinAlgError:
                step, *_ = np.linalg.lstsq(A + damping * np.eye(3), g, rcond=None)
            candidate = _project(theta + step)
            new_rss = _rss(candidate, a, y)
            if np.isfinite(new_rss) and new_rss <= rss:
                accepted = True
                break
            damping *= 10.0
        if not accepted:
            break
        improvement = rss - new_rss
        theta, rss = candidate, new_rss
        damping = max(damping / 3.0, 1e-12)
        if improvement <= _REL_TOL * max(rss, 1e-300):
            break
    return theta, rss


def fit_logistic_curve(points: Sequence[tuple[float, float]]) -> CurveFit:
    """Fit the bounded logistic curve to (strength, score) points.

    Damped Gauss-Newton from a small multi-start lattice (ceiling and slope
    presets crossed with the data quartiles as midpoints); the best
    converged start wins.
    """
    pts = [(float(a), float(v)) for a, v in points]
    if len(pts) < 4:
        raise InsufficientPoints(f"curve fit needs at least 4 points, got {len(pts)}")
    a = np.asarray([p[0] for p in pts])
    y = np.asarray([p[1] for p in pts])
    if np.unique(a).size != a.size:
        raise InsufficientPoints("curve fit needs distinct strength values")

    x0_starts = np.quantile(a, (0.25, 0.50, 0.75))
    best: tuple[np.ndarray, float] | None = None
    for L0, k0, x00 in product(_L_STARTS, _K_STARTS, x0_starts):
        theta, rss = _damped_gauss_newton(a, y, (L0, k0, x00))
        if not (np.all(np.isfinite(theta)) and np.isfinite(rss)):
            continue
        if best is None or rss < best[1]:
            best = (theta, rss)
    if best is None:
        raise CurveFitError("all curve-fit starts diverged")
    theta, rss = best
    return CurveFit(L=float(theta[0]), k=float(theta[1]), x0=float(theta[2]), rss=rss)


@dataclass(frozen=True)
class GuidelineTable:
    """Predicted attainable scores on a (rate x strength) grid."""

    rates: tuple[float, ...]
    aiv_grid: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]

    def value(self, rate: float, aiv: float) -> float:
        i = self.rates.index(rate)
        j = self.aiv_grid.index(aiv)
        return self.values[i][j]

    def rows(self):
        """Flat (rate, strength, prediction) rows in table order."""
        for rate, row in zip(self.rates, self.values):
            for aiv, value in zip(self.aiv_grid, row):
                yield rate, aiv, value

    def render(self) -> str:
        """Fixed-width text table with predictions rounded to 2 decimals."""
        header = "rate    " + "  ".join(f"{a:5.2f}" for a in self.aiv_grid)
        lines = [header]
        for rate, row in zip(self.rates, self.values):
            cells = "  ".join(f"{v:5.2f}" for v in row)
            lines.append(f"{rate:<7.2%} {cells}")
        return "\n".join(lines)


def guideline_table(
    fits: Mapping[float, CurveFit],
    aiv_grid: Sequence[float] = DEFAULT_AIV_GRID,
    rates: Sequence[float] | None = None,
) -> GuidelineTable:
    """Tabulate each rate's fitted curve over the strength grid."""
    chosen = tuple(sorted(fits)) if rates is None else tuple(float(r) for r in rates)
    missing = [r for r in chosen if r not in fits]
    if missing:
        raise ValueError(f"no curve fit supplied for rate(s) {missing}")
    grid = tuple(float(a) for a in aiv_grid)
    values = tuple(
        tuple(float(fits[r].predict(a)) for a in grid) for r in chosen
    )
    return GuidelineTable(rates=chosen, aiv_grid=grid, values=values)
