"""Classification metrics (confusion counts, F1, P4), rank concordance, and
grid-search cutoff optimization.

Conventions fixed here because results at tiny sample sizes depend on them:
an observation is classified positive when its score is >= the cutoff, and
every 0/0 metric value collapses to 0 rather than propagating NaN into
quantile summaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDesign

METRIC_F1 = "f1"
METRIC_P4 = "p4"


def default_cutoff_grid() -> np.ndarray:
    """The fixed cutoff grid 0.001, 0.002, ..., 0.999."""
    return np.arange(1, 1000) / 1000.0


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts: actual class versus predicted class."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "fn", "tn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class CutoffResult:
    """A cutoff chosen on the grid and the metric value it attains."""

    theta: float
    score: float
    metric_id: str


def _check_scores(probs, labels) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(probs, dtype=float)
    y = np.asarray(labels)
    if p.ndim != 1 or y.ndim != 1 or p.shape != y.shape:
        raise ValueError(f"probs and labels must be equal-length vectors, got {p.shape} and {y.shape}")
    if p.size == 0:
        raise ValueError("need at least one observation")
    return p, y


def confusion(probs, labels, theta: float) -> ConfusionMatrix:
    """Tally the confusion matrix at one cutoff (positive when prob >= theta)."""
    p, y = _check_scores(probs, labels)
    pos = p >= theta
    events = y == 1
    tp = int(np.count_nonzero(pos & events))
    fp = int(np.count_nonzero(pos & ~events))
    fn = int(np.count_nonzero(~pos & events))
    tn = int(np.count_nonzero(~pos & ~events))
    return ConfusionMatrix(tp=tp, fp=fp, fn=fn, tn=tn)


def f1(cm: ConfusionMatrix) -> float:
    """Harmonic mean of recall and precision; 0 when nothing is positive."""
    den = 2 * cm.tp + cm.fp + cm.fn
    return 0.0 if den == 0 else 2 * cm.tp / den


def p4(cm: ConfusionMatrix) -> float:
    """Symmetric four-way extension of F1; 0 whenever its denominator vanishes."""
    num = 4 * cm.tp * cm.tn
    den = num + (cm.tp + cm.tn) * (cm.fp + cm.fn)
    return 0.0 if den == 0 else num / den


def gini(probs, labels) -> float:
    """Somers' D of scores against the binary response.

    (concordant - discordant) mixed-class pairs over all mixed-class pairs;
    a pair is concordant when the event observation has the strictly larger
    score, and score ties land in the denominator only.  Pairs are
    aggregated over groups of identical score values after one sort, so the
    result equals full O(n^2) pair enumeration exactly.
    """
    p, y = _check_scores(probs, labels)
    events = y == 1
    n1 = int(np.count_nonzero(events))
    n0 = p.size - n1
    if n1 == 0 or n0 == 0:
        raise DegenerateDesign("gini needs at least one event and one nonevent")
    values, inverse = np.unique(p, return_inverse=True)
    e = np.bincount(inverse[events], minlength=values.size).astype(np.int64)
    g = np.bincount(inverse[~events], minlength=values.size).astype(np.int64)
    g_cum = np.cumsum(g)
    g_below = g_cum - g
    g_above = n0 - g_cum
    concordant = int(np.sum(e * g_below))
    discordant = int(np.sum(e * g_above))
    return (concordant - discordant) / (n1 * n0)


def _counts_on_grid(p: np.ndarray, y: np.ndarray, grid: np.ndarray):
    """tp/fp/fn/tn at every grid cutoff from a single sort.

    searchsorted(left) counts scores strictly below each cutoff, which is
    exactly the complement of the `>=` classification rule, so these counts
    match per-cutoff `confusion` tallies bit for bit.
    """
    order = np.argsort(p, kind="stable")
    sp = p[order]
    sy = (y[order] == 1).astype(np.int64)
    events_below = np.concatenate(([0], np.cumsum(sy)))
    n = sp.size
    n1 = int(events_below[-1])
    idx = np.searchsorted(sp, grid, side="left")
    tp = n1 - events_below[idx]
    fn = n1 - tp
    fp = (n - idx) - tp
    tn = (n - n1) - fp
    return tp, fp, fn, tn


def _f1_on_counts(tp, fp, fn) -> np.ndarray:
    den = 2 * tp + fp + fn
    out = np.zeros(np.shape(den), dtype=float)
    np.divide(2 * tp, den, out=out, where=den > 0)
    return out


def _p4_on_counts(tp, fp, fn, tn) -> np.ndarray:
    num = 4 * tp * tn
    den = num + (tp + tn) * (fp + fn)
    out = np.zeros(np.shape(den), dtype=float)
    np.divide(num, den, out=out, where=den > 0)
    return out


def optimize_cutoff(probs, labels, metric_id: str, grid=None) -> CutoffResult:
    """Grid-search the cutoff maximizing F1 or P4 on the given scores.

    Ties resolve deterministically to the smallest maximizing grid point.
    """
    p, y = _check_scores(probs, labels)
    g = default_cutoff_grid() if grid is None else np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("cutoff grid must be a nonempty vector")
    if np.any(np.diff(g) <= 0):
        raise ValueError("cutoff grid must be strictly increasing")
    if g[0] <= 0.0 or g[-1] >= 1.0:
        raise ValueError("cutoff grid must lie strictly inside (0, 1)")
    tp, fp, fn, tn = _counts_on_grid(p, y, g)
    if metric_id == METRIC_F1:
        scores = _f1_on_counts(tp, fp, fn)
    elif metric_id == METRIC_P4:
        scores = _p4_on_counts(tp, fp, fn, tn)
    else:
        raise ValueError(f"unknown metric_id {metric_id!r} (expected 'f1' or 'p4')")
    best = int(np.argmax(scores))  # first maximum = smallest cutoff
    return CutoffResult(theta=float(g[best]), score=float(scores[best]), metric_id=metric_id)
