"""Monte Carlo estimation of recall sizes and analytic-vs-simulated sweeps.

The estimator runs many independent fulfillment trials and averages the
recalled quantities. Trials are embarrassingly parallel by construction:
trial i of an estimate uses the seed ``derive_seed(base_seed, i)``, and a
sweep gives the cell for sizes (o, b) the base seed
``derive_seed(base_seed, o, b)``, so any cell or trial can be recomputed
on its own with identical results. Recalled quantities are integers and
are summed exactly, which makes every estimate independent of scheduling.

For speed the trials of one estimate are evaluated as numpy array
operations rather than through :func:`batchfrag.simulation.run_trial`
objects. Both paths consume the same stream outputs through the same
float comparisons, so they agree bit-for-bit; the test suite asserts that
parity cell by cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import InvalidParamsError, ModelParams, expected_recall_size
from .seeding import derive_seed, derive_seeds, stream_outputs, unit_floats

__all__ = [
    "Z95",
    "Z98",
    "EstimateConfig",
    "TrialEstimate",
    "SweepGrid",
    "trial_recalls",
    "estimate_recall",
    "sweep",
    "crisis_prob_family",
]

# Normal-approximation critical values used for the reported half-widths.
Z95 = 1.960
Z98 = 2.326


@dataclass(frozen=True)
class EstimateConfig:
    params: ModelParams
    n_trials: int = 10_000
    base_seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n_trials, int) or isinstance(self.n_trials, bool) \
                or self.n_trials < 1:
            raise InvalidParamsError(
                f"n_trials must be a positive integer, got {self.n_trials!r}")


@dataclass(frozen=True)
class TrialEstimate:
    """Mean recalled quantity with its sampling uncertainty.

    ``mean_recall`` is exactly ``total_recalled / n_trials`` (one division
    of the exact integer sum).
    """

    mean_recall: float
    std_error: float
    ci95_half_width: float
    ci98_half_width: float
    n_trials: int
    total_recalled: int


@dataclass(frozen=True)
class SweepGrid:
    """Analytic and simulated recall sizes over an order-size x batch-size grid.

    The four cell matrices are indexed [order_size index, batch_size index].
    Simulation fields are None on analytic-only grids.
    ``mean_abs_error_pct`` is 100 * mean(|analytic - simulated|) / Q: the
    error is expressed as a percentage of the total quantity.
    """

    total_quantity: int
    crisis_prob: float
    order_sizes: tuple[int, ...]
    batch_sizes: tuple[int, ...]
    analytic: np.ndarray
    sim_mean: np.ndarray | None = None
    abs_error: np.ndarray | None = None
    ci95_half_width: np.ndarray | None = None
    mean_abs_error_pct: float | None = None
    n_trials: int | None = None
    base_seed: int | None = None


def trial_recalls(config: EstimateConfig) -> np.ndarray:
    """Recalled quantity of every trial, as an int64 array of length n_trials.

    Entry i equals ``run_trial(TrialConfig.from_seed(params,
    derive_seed(base_seed, i)))``, evaluated in vectorized form:

    * stream output 0 -> initial consumption ``u = floor(unit * B)``,
    * stream outputs 1.. -> per-batch crisis flags ``unit < p``,
    * unit j of the horizon lands in batch ``(u + j) // B``, so an order
      covering units [s, e] is recalled iff the prefix-sum of crisis flags
      differs between batch (u+s)//B and batch (u+e)//B + 1.
    """
    params = config.params
    o, b, q, p = (params.order_size, params.batch_size,
                  params.total_quantity, params.crisis_prob)
    n = config.n_trials

    sizes = [o] * (q // o)
    if q % o:
        sizes.append(q % o)
    sizes_arr = np.asarray(sizes, dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(sizes_arr)[:-1]))
    ends = starts + sizes_arr - 1

    # widest horizon over all initial consumptions: ceil((q + b - 1) / b)
    n_batches_max = (q + 2 * b - 2) // b

    seeds = derive_seeds(config.base_seed, np.arange(n, dtype=np.uint64))
    units = unit_floats(stream_outputs(seeds, n_batches_max + 1))

    u = np.minimum((units[:, 0] * b).astype(np.int64), b - 1)
    crisis = units[:, 1:] < p

    crisis_prefix = np.zeros((n, n_batches_max + 1), dtype=np.int32)
    np.cumsum(crisis, axis=1, dtype=np.int32, out=crisis_prefix[:, 1:])

    first_batch = (u[:, None] + starts[None, :]) // b
    last_batch = (u[:, None] + ends[None, :]) // b
    touched = (np.take_along_axis(crisis_prefix, last_batch + 1, axis=1)
               - np.take_along_axis(crisis_prefix, first_batch, axis=1))
    return ((touched > 0) * sizes_arr[None, :]).sum(axis=1, dtype=np.int64)


def estimate_recall(config: EstimateConfig) -> TrialEstimate:
    """Run the configured trials and summarize the recalled quantities.

    Reports the sample standard error and the Z95/Z98 normal-approximation
    half-widths around the mean.
    """
    recalls = trial_recalls(config)
    n = config.n_trials
    total = int(recalls.sum(dtype=np.int64))
    mean = total / n
    if n > 1:
        dev = recalls.astype(np.float64) - mean
        variance = float(np.sum(dev * dev)) / (n - 1)
        std_error = math.sqrt(variance / n)
    else:
        std_error = 0.0
    return TrialEstimate(mean_recall=mean, std_error=std_error,
                         ci95_half_width=Z95 * std_error,
                         ci98_half_width=Z98 * std_error,
                         n_trials=n, total_recalled=total)


def _check_axis(name: str, values: Sequence[int], upper: int | None = None) -> tuple[int, ...]:
    vals = tuple(int(v) for v in values)
    if not vals:
        raise InvalidParamsError(f"{name} must be nonempty")
    if any(v < 1 for v in vals):
        raise InvalidParamsError(f"{name} must be positive, got {vals}")
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise InvalidParamsError(f"{name} must be strictly ascending, got {vals}")
    if upper is not None and vals[-1] > upper:
        raise InvalidParamsError(
            f"{name} must not exceed the total quantity {upper}, got {vals[-1]}")
    return vals


def sweep(quantity: int, crisis_prob: float, order_sizes: Sequence[int],
          batch_sizes: Sequence[int], n_trials: int = 10_000,
          base_seed: int = 0, include_simulation: bool = True) -> SweepGrid:
    """Recall-size landscape over every (order size, batch size) cell.

    Always fills the analytic surface; with ``include_simulation`` each cell
    also gets a Monte Carlo estimate seeded from (base_seed, o, b) and the
    grid-level mean absolute error as a percentage of the quantity.
    """
    orders = _check_axis("order_sizes", order_sizes, upper=int(quantity))
    batches = _check_axis("batch_sizes", batch_sizes)

    analytic = np.empty((len(orders), len(batches)))
    for i, o in enumerate(orders):
        for j, b in enumerate(batches):
            analytic[i, j] = expected_recall_size(
                ModelParams(o, b, quantity, crisis_prob))

    if not include_simulation:
        return SweepGrid(total_quantity=int(quantity), crisis_prob=float(crisis_prob),
                         order_sizes=orders, batch_sizes=batches, analytic=analytic)

    sim_mean = np.empty_like(analytic)
    ci95 = np.empty_like(analytic)
    for i, o in enumerate(orders):
        for j, b in enumerate(batches):
            params = ModelParams(o, b, quantity, crisis_prob)
            est = estimate_recall(EstimateConfig(
                params, n_trials=n_trials,
                base_seed=derive_seed(base_seed, o, b)))
            sim_mean[i, j] = est.mean_recall
            ci95[i, j] = est.ci95_half_width
    abs_error = np.abs(analytic - sim_mean)
    return SweepGrid(total_quantity=int(quantity), crisis_prob=float(crisis_prob),
                     order_sizes=orders, batch_sizes=batches, analytic=analytic,
                     sim_mean=sim_mean, abs_error=abs_error, ci95_half_width=ci95,
                     mean_abs_error_pct=100.0 * float(abs_error.mean()) / quantity,
                     n_trials=n_trials, base_seed=base_seed)


def crisis_prob_family(quantity: int, crisis_probs: Sequence[float],
                       order_sizes: Sequence[int],
                       batch_sizes: Sequence[int]) -> list[SweepGrid]:
    """One analytic-only grid per crisis probability (same size axes)."""
    return [sweep(quantity, p, order_sizes, batch_sizes,
                  include_simulation=False)
            for p in crisis_probs]
