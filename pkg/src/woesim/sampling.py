"""Seedable sample generation with an exact event count per sample."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .configs import ConfigSpec, EventRate
from .errors import DegeneratePlan, InsufficientEvents
from .rng import RngStream


@dataclass(frozen=True)
class SamplingPlan:
    """Sample size, exact event count, and the nominal rate behind them.

    ``clamped`` records that the floored event count was lifted from zero
    to one, so downstream records can flag the affected cells.
    """

    n: int
    n1: int
    pi1: float
    clamped: bool = False

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DegeneratePlan(f"need n >= 2, got n={self.n}")
        if self.n1 < 1:
            raise InsufficientEvents(f"plan has no events (n1={self.n1})")
        if self.n1 >= self.n:
            raise DegeneratePlan(f"plan has no nonevents (n1={self.n1}, n={self.n})")


def make_plan(n: int, rate: EventRate, clamp: bool = True) -> SamplingPlan:
    """Plan n observations holding floor(pi1 * n) events.

    When the floor lands on zero, ``clamp`` lifts the count to a single
    event and records the fact; with ``clamp`` unset the plan is refused,
    because a sample without events breaks every event-conditional
    estimate downstream.
    """
    if n < 2:
        raise DegeneratePlan(f"need n >= 2, got n={n}")
    # the epsilon guards against products like 0.29 * 100 rounding to
    # 28.999999999999996 and flooring one short of the intended count
    n1 = int(math.floor(rate.pi1 * n + 1e-9))
    if n1 == 0:
        if not clamp:
            raise InsufficientEvents(
                f"floor({rate.pi1} * {n}) = 0 events; pass clamp=True to force one"
            )
        return SamplingPlan(n=n, n1=1, pi1=rate.pi1, clamped=True)
    return SamplingPlan(n=n, n1=n1, pi1=rate.pi1)


@dataclass(frozen=True)
class Sample:
    """Bin-index design matrix (1-based entries) plus its 0/1 response vector.

    Event rows come first by construction; every downstream estimator is
    invariant under row permutation, so the fixed order is purely for
    reproducibility.
    """

    X: np.ndarray = field(repr=False)
    Y: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        X = np.ascontiguousarray(self.X, dtype=np.int64)
        Y = np.ascontiguousarray(self.Y, dtype=np.int64)
        if X.ndim != 2 or Y.ndim != 1 or X.shape[0] != Y.shape[0]:
            raise ValueError(
                f"X must be (n, d) and Y length n; got {X.shape} and {Y.shape}"
            )
        X.flags.writeable = False
        Y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def n_events(self) -> int:
        return int(self.Y.sum())


def _as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def invert_cdf(dist, u):
    """Map uniform variates in [0, 1) to 1-based bin indices.

    The bins partition [0, 1) into right-open intervals in cumulative bin
    order, so a variate equal to an interior boundary falls in the bin to
    the boundary's right.
    """
    cum = np.cumsum(np.asarray(dist, dtype=float))
    cum[-1] = 1.0  # guard the top edge against accumulated rounding
    idx = np.searchsorted(cum, u, side="right")
    if np.ndim(u) == 0:
        return int(idx) + 1
    return idx.astype(np.int64) + 1


def draw_categorical(dist, rng: RngStream | np.random.Generator, size=None):
    """Inverse-CDF draw from a bin distribution; returns 1-based indices.

    With ``size=None`` a single int is returned, otherwise an int64 array
    of that shape.
    """
    gen = _as_generator(rng)
    return invert_cdf(dist, gen.random(size))


def generate_sample(
    config: ConfigSpec,
    plan: SamplingPlan,
    rng: RngStream | np.random.Generator,
) -> Sample:
    """Draw a sample: n1 event rows from p_event, the rest from p_nonevent.

    Stream layout is fixed column-major: predictor j consumes its n1 event
    variates, then its n - n1 nonevent variates, before predictor j+1
    touches the stream.  Identical (config, plan, stream) inputs therefore
    reproduce bit-identical samples.
    """
    gen = _as_generator(rng)
    n, n1 = plan.n, plan.n1
    X = np.empty((n, config.n_predictors), dtype=np.int64)
    for j, pred in enumerate(config.predictors):
        X[:n1, j] = draw_categorical(pred.p_event, gen, size=n1)
        X[n1:, j] = draw_categorical(pred.p_nonevent, gen, size=n - n1)
    Y = np.zeros(n, dtype=np.int64)
    Y[:n1] = 1
    return Sample(X=X, Y=Y)
