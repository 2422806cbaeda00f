"""Monte Carlo orchestration: the per-iteration train/validate/test pipeline,
the (config x size x rate) grid sweep, and quantile summaries.

Every iteration derives its three sample streams solely from
(master_seed, iteration, role), so any execution schedule - serial, process
pool, any worker count - produces identical records; the merged output is
sorted by cell key to make that visible byte for byte.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .configs import ConfigSpec, EventRate, aggregate_iv
from .errors import DegenerateDesign, EmptyCell, NoEvents, NoNonevents
from .metrics import (
    METRIC_F1,
    METRIC_P4,
    confusion,
    default_cutoff_grid,
    f1,
    gini,
    optimize_cutoff,
    p4,
)
from .rng import RngStream
from .sampling import SamplingPlan, generate_sample, make_plan
from .scorecard import estimate_woe, fit_logistic, predict_proba, transform

#: Sample sizes the default grid sweeps.
STUDY_SIZES = (50, 100, 150, 200, 250, 300, 350, 400, 450, 500, 750, 1000, 1500, 2000, 2500)
#: Event rates the default grid sweeps.
DEFAULT_RATES = (0.01, 0.05, 0.10)

#: (metric, split) pairs summarized per cell; theta cutoffs are picked on
#: the validation split, so that is the split they are reported under.
SUMMARY_FIELDS = (
    ("f1", "val"),
    ("f1", "test"),
    ("p4", "val"),
    ("p4", "test"),
    ("gini", "val"),
    ("gini", "test"),
    ("theta_f1", "val"),
    ("theta_p4", "val"),
)


@dataclass(frozen=True)
class RunSpec:
    """Full description of one study run."""

    configs: tuple[ConfigSpec, ...]
    sizes: tuple[int, ...] = STUDY_SIZES
    rates: tuple[float, ...] = DEFAULT_RATES
    iterations: int = 500
    master_seed: int = 0
    theta_adj: float = 0.5
    cutoff_grid: tuple[float, ...] | None = None
    clamp: bool = True
    fixed_events: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "configs", tuple(self.configs))
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        if not self.configs:
            raise ValueError("RunSpec needs at least one config")
        if not self.sizes:
            raise ValueError("RunSpec needs at least one sample size")
        if not self.rates:
            raise ValueError("RunSpec needs at least one event rate")
        if any(not 0.0 < r < 1.0 for r in self.rates):
            raise ValueError("event rates must lie in (0, 1)")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.fixed_events is not None and self.fixed_events < 1:
            raise ValueError("fixed_events must be at least 1 when given")


@dataclass(frozen=True)
class IterationRecord:
    """Metric bundle produced by one Monte Carlo iteration.

    A degenerate iteration (an estimator refused its input) is kept as a
    record with NaN metric fields so that summaries can exclude it and
    still account for it.
    """

    config_id: str
    aiv: float
    n: int
    event_rate: float
    iteration: int
    clamped: bool
    converged: bool
    theta_f1: float
    theta_p4: float
    f1_val: float
    f1_test: float
    p4_val: float
    p4_test: float
    gini_val: float
    gini_test: float

    @property
    def valid(self) -> bool:
        return not math.isnan(self.f1_val)

    def sort_key(self):
        return (self.config_id, self.n, self.event_rate, self.iteration)


@dataclass(frozen=True)
class SummaryRecord:
    """Quantile summary of one metric/split within one grid cell."""

    config_id: str
    aiv: float
    n: int
    event_rate: float
    metric: str
    split: str
    median: float
    q25: float
    q75: float
    p05: float
    p95: float
    n_iter: int
    n_nonconverged: int

    def sort_key(self):
        return (self.config_id, self.n, self.event_rate, self.metric, self.split)


def run_iteration(
    config: ConfigSpec,
    plan: SamplingPlan,
    master_seed: int,
    iteration: int,
    *,
    theta_adj: float = 0.5,
    cutoff_grid=None,
    aiv: float | None = None,
) -> IterationRecord:
    """One full train/validate/test pass at a fixed sampling plan.

    The training split alone fixes the WoE table and the coefficients; the
    validation split alone picks the F1 and P4 cutoffs; the test split is
    only ever scored, once per metric at its own cutoff and once
    threshold-free for concordance.
    """
    if aiv is None:
        aiv = aggregate_iv(config).aiv
    grid = default_cutoff_grid() if cutoff_grid is None else np.asarray(cutoff_grid, dtype=float)
    base = dict(
        config_id=config.id,
        aiv=aiv,
        n=plan.n,
        event_rate=plan.pi1,
        iteration=iteration,
        clamped=plan.clamped,
    )
    try:
        train = generate_sample(config, plan, RngStream(master_seed, iteration, "train"))
        val = generate_sample(config, plan, RngStream(master_seed, iteration, "val"))
        test = generate_sample(config, plan, RngStream(master_seed, iteration, "test"))

        table = estimate_woe(train, config.bin_counts, theta_adj)
        model = fit_logistic(transform(train, table), train.Y)

        probs_val = predict_proba(model, transform(val, table))
        cut_f1 = optimize_cutoff(probs_val, val.Y, METRIC_F1, grid)
        cut_p4 = optimize_cutoff(probs_val, val.Y, METRIC_P4, grid)

        probs_test = predict_proba(model, transform(test, table))
        return IterationRecord(
            converged=model.converged,
            theta_f1=cut_f1.theta,
            theta_p4=cut_p4.theta,
            f1_val=cut_f1.score,
            f1_test=f1(confusion(probs_test, test.Y, cut_f1.theta)),
            p4_val=cut_p4.score,
            p4_test=p4(confusion(probs_test, test.Y, cut_p4.theta)),
            gini_val=gini(probs_val, val.Y),
            gini_test=gini(probs_test, test.Y),
            **base,
        )
    except (NoEvents, NoNonevents, DegenerateDesign):
        nan = float("nan")
        return IterationRecord(
            converged=False,
            theta_f1=nan,
            theta_p4=nan,
            f1_val=nan,
            f1_test=nan,
            p4_val=nan,
            p4_test=nan,
            gini_val=nan,
            gini_test=nan,
            **base,
        )


def _plans_for(spec: RunSpec) -> list[tuple[ConfigSpec, SamplingPlan]]:
    cells = []
    for config in spec.configs:
        for n in spec.sizes:
            if spec.fixed_events is not None:
                # fixed event count: the rate list is irrelevant, the
                # effective rate n1/n is what gets recorded
                plan = SamplingPlan(
                    n=n, n1=spec.fixed_events, pi1=spec.fixed_events / n
                )
                cells.append((config, plan))
            else:
                for rate in spec.rates:
                    plan = make_plan(n, EventRate(rate), clamp=spec.clamp)
                    cells.append((config, plan))
    return cells


def _run_cell(args) -> list[IterationRecord]:
    config, plan, master_seed, iterations, theta_adj, cutoff_grid, aiv = args
    return [
        run_iteration(
            config,
            plan,
            master_seed,
            iteration,
            theta_adj=theta_adj,
            cutoff_grid=cutoff_grid,
            aiv=aiv,
        )
        for iteration in range(iterations)
    ]


def run_grid(spec: RunSpec, workers: int = 1) -> list[IterationRecord]:
    """Execute the whole grid; output order is by cell key, never by schedule.

    ``workers`` > 1 fans the cells out to a process pool.  Results are
    identical to the serial run because every iteration's randomness is an
    addressable function of (master_seed, iteration, role).
    """
    cells = _plans_for(spec)
    aivs = {config.id: aggregate_iv(config).aiv for config in spec.configs}
    tasks = [
        (config, plan, spec.master_seed, spec.iterations, spec.theta_adj,
         spec.cutoff_grid, aivs[config.id])
        for config, plan in cells
    ]
    records: list[IterationRecord] = []
    if workers <= 1:
        for task in tasks:
            records.extend(_run_cell(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_run_cell, tasks):
                records.extend(chunk)
    records.sort(key=IterationRecord.sort_key)
    return records


def _quantiles(values: np.ndarray) -> tuple[float, float, float, float, float]:
    p05, q25, median, q75, p95 = np.quantile(values, (0.05, 0.25, 0.50, 0.75, 0.95))
    return float(median), float(q25), float(q75), float(p05), float(p95)


def summarize(records: Iterable[IterationRecord]) -> list[SummaryRecord]:
    """Per-cell, per-metric/split quantile summaries.

    Quantiles use linear interpolation between order statistics (the
    numpy default).  Degenerate records are excluded; ``n_iter`` counts
    what remains, ``n_nonconverged`` the flagged fits among them.
    """
    by_cell: dict[tuple, list[IterationRecord]] = {}
    for rec in records:
        by_cell.setdefault((rec.config_id, rec.n, rec.event_rate), []).append(rec)

    out: list[SummaryRecord] = []
    for (config_id, n, rate), cell in sorted(by_cell.items()):
        valid = [r for r in cell if r.valid]
        if not valid:
            raise EmptyCell(
                f"cell ({config_id!r}, n={n}, rate={rate}) has no valid records"
            )
        n_nonconverged = sum(1 for r in valid if not r.converged)
        for metric, split in SUMMARY_FIELDS:
            field = metric if metric.startswith("theta") else f"{metric}_{split}"
            values = np.asarray([getattr(r, field) for r in valid])
            median, q25, q75, p05, p95 = _quantiles(values)
            out.append(
                SummaryRecord(
                    config_id=config_id,
                    aiv=valid[0].aiv,
                    n=n,
                    event_rate=rate,
                    metric=metric,
                    split=split,
                    median=median,
                    q25=q25,
                    q75=q75,
                    p05=p05,
                    p95=p95,
                    n_iter=len(valid),
                    n_nonconverged=n_nonconverged,
                )
            )
    out.sort(key=SummaryRecord.sort_key)
    return out
