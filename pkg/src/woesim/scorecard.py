"""Weight-of-evidence estimation and the logistic scorecard fit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateDesign, NoEvents, NoNonevents
from .sampling import Sample

#: Linear predictors are clamped to this magnitude inside every probability
#: evaluation, which keeps log-likelihoods finite under separation.
LINEAR_PREDICTOR_CLAMP = 30.0

_GRAD_TOL = 1e-8
_LOGLIK_TOL = 1e-10
_MAX_ITER = 50
_MAX_HALVINGS = 30


@dataclass(frozen=True)
class WoeTable:
    """Estimated weights of evidence with the counts behind them.

    One row of ``woe`` per predictor, one entry per bin known from the
    configuration shape; bins absent from the training sample keep zero
    counts and still get a finite estimate through the adjustment.
    """

    woe: tuple[tuple[float, ...], ...]
    event_counts: tuple[tuple[int, ...], ...]
    nonevent_counts: tuple[tuple[int, ...], ...]
    n_event: int
    n_nonevent: int
    theta_adj: float


@dataclass(frozen=True)
class FittedModel:
    """Maximum-likelihood coefficients: intercept first, one slope per WoE feature."""

    beta: tuple[float, ...]
    converged: bool
    iterations: int
    loglik: float


def adjusted_woe(
    n0jk: float, n1jk: float, n0: int, n1: int, theta_adj: float
) -> float:
    """Adjusted WoE for one bin: ln[((n0jk + t)/n0) / ((n1jk + t)/n1)]."""
    return float(
        np.log((n0jk + theta_adj) / n0) - np.log((n1jk + theta_adj) / n1)
    )


def estimate_woe(
    sample: Sample, bin_counts: Sequence[int], theta_adj: float = 0.5
) -> WoeTable:
    """Estimate per-bin weights of evidence from a training sample.

    The adjustment ``theta_adj`` (default 0.5, the common software default)
    is added to every bin count before normalizing, keeping estimates
    finite for bins one class never visited.  The table covers all bins in
    ``bin_counts``, including those absent from the sample.
    """
    if theta_adj < 0.0:
        raise ValueError(f"theta_adj must be nonnegative, got {theta_adj}")
    if len(bin_counts) != sample.d:
        raise ValueError(
            f"sample has {sample.d} predictors but {len(bin_counts)} bin counts given"
        )
    n1 = sample.n_events
    n0 = sample.n - n1
    if n1 == 0:
        raise NoEvents("training sample contains no events")
    if n0 == 0:
        raise NoNonevents("training sample contains no nonevents")

    event_mask = sample.Y == 1
    woe, c1s, c0s = [], [], []
    with np.errstate(divide="ignore"):
        for j, n_bins in enumerate(bin_counts):
            col = sample.X[:, j]
            if col.min() < 1 or col.max() > n_bins:
                raise IndexError(
                    f"predictor {j + 1}: bin index outside 1..{n_bins}"
                )
            c1 = np.bincount(col[event_mask] - 1, minlength=n_bins)
            c0 = np.bincount(col[~event_mask] - 1, minlength=n_bins)
            w = np.log((c0 + theta_adj) / n0) - np.log((c1 + theta_adj) / n1)
            woe.append(tuple(float(v) for v in w))
            c1s.append(tuple(int(v) for v in c1))
            c0s.append(tuple(int(v) for v in c0))
    return WoeTable(
        woe=tuple(woe),
        event_counts=tuple(c1s),
        nonevent_counts=tuple(c0s),
        n_event=n1,
        n_nonevent=n0,
        theta_adj=float(theta_adj),
    )


def transform(sample: Sample, table: WoeTable) -> np.ndarray:
    """Map a sample's bin indices to the training-estimated WoE features."""
    if sample.d != len(table.woe):
        raise ValueError(
            f"sample has {sample.d} predictors, table has {len(table.woe)}"
        )
    out = np.empty((sample.n, sample.d), dtype=float)
    for j, row in enumerate(table.woe):
        col = sample.X[:, j]
        if col.min() < 1 or col.max() > len(row):
            raise IndexError(f"predictor {j + 1}: unknown bin index in sample")
        out[:, j] = np.asarray(row)[col - 1]
    return out


def _clamped_probs(eta: np.ndarray) -> np.ndarray:
    eta = np.clip(eta, -LINEAR_PREDICTOR_CLAMP, LINEAR_PREDICTOR_CLAMP)
    return 1.0 / (1.0 + np.exp(-eta))


def _loglik(y: np.ndarray, p: np.ndarray) -> float:
    return float(np.sum(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def fit_logistic(features: np.ndarray, responses: np.ndarray) -> FittedModel:
    """Fit the Bernoulli MLE by Newton iterations with step halving.

    Starts at beta = 0 and declares convergence when the score vector's
    max-norm drops under 1e-8 or the log-likelihood moves by less than
    1e-10; a hard cap of 50 iterations keeps separated fits finite (they
    come back flagged, never infinite, thanks to the linear-predictor
    clamp).
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"features must be 2-dimensional, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")
    y = np.asarray(responses, dtype=float)
    if y.shape != (X.shape[0],):
        raise ValueError("responses length must match feature rows")
    n_events = int(y.sum())
    if n_events == 0 or n_events == len(y):
        raise DegenerateDesign("responses are all one class; MLE is unbounded")

    design = np.column_stack([np.ones(X.shape[0]), X])
    beta = np.zeros(design.shape[1])
    ll = _loglik(y, _clamped_probs(design @ beta))
    converged = False
    iterations = 0
    for iterations in range(1, _MAX_ITER + 1):
        p = _clamped_probs(design @ beta)
        grad = design.T @ (y - p)
        if np.max(np.abs(grad)) < _GRAD_TOL:
            converged = True
            break
        weights = p * (1.0 - p)
        hessian = (design * weights[:, None]).T @ design
        try:
            step = np.linalg.solve(hessian, grad)
        except np.linalg.LinAlgError:
            # singular curvature (e.g. constant feature columns): take the
            # minimum-norm ascent step instead
            step, *_ = np.linalg.lstsq(hessian, grad, rcond=None)
        new_beta = beta + step
        new_ll = _loglik(y, _clamped_probs(design @ new_beta))
        halvings = 0
        while new_ll < ll and halvings < _MAX_HALVINGS:
            step = 0.5 * step
            new_beta = beta + step
            new_ll = _loglik(y, _clamped_probs(design @ new_beta))
            halvings += 1
        moved = abs(new_ll - ll)
        beta, ll = new_beta, new_ll
        if moved < _LOGLIK_TOL:
            converged = True
            break
    return FittedModel(
        beta=tuple(float(b) for b in beta),
        converged=converged,
        iterations=iterations,
        loglik=ll,
    )


def predict_proba(model: FittedModel, features) -> float | np.ndarray:
    """Event probability from the clamped linear predictor; always in (0, 1).

    Accepts a single feature row or an (n, d) matrix.
    """
    arr = np.asarray(features, dtype=float)
    beta = np.asarray(model.beta)
    eta = beta[0] + arr @ beta[1:]
    p = _clamped_probs(eta)
    return float(p) if arr.ndim == 1 else p
