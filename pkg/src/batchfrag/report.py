"""Plain-text serialization of estimates, sweep grids, and curve data.

Two CSV layouts are emitted for sweeps: a long form (one row per cell,
the canonical interchange format) and a matrix form (one block per
metric). Metadata travels in ``#``-prefixed comment lines so ordinary CSV
readers skip it. Files are UTF-8 with lone line feeds and contain nothing
run-dependent: identical inputs give byte-identical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .model import ModelParams, expected_fragments
from .montecarlo import SweepGrid, TrialEstimate
from .simulation import FulfillmentOutcome

__all__ = [
    "ReportSpec",
    "write_sweep",
    "write_fragments_curve",
    "write_summary",
    "render_summary",
    "render_outcome",
]

LONG_CSV_HEADER = "order_size,batch_size,analytic_recall,sim_mean,abs_error,ci95_half_width"


@dataclass(frozen=True)
class ReportSpec:
    """Where and how to write: format is one of grid-csv, long-csv,
    summary-text; precision is the fixed-point decimal count."""

    output_path: str | Path
    format: str = "long-csv"
    precision: int = 6

    def __post_init__(self):
        if self.format not in ("grid-csv", "long-csv", "summary-text"):
            raise ValueError(f"unknown report format {self.format!r}")
        if not 1 <= self.precision <= 15:
            raise ValueError(f"precision must be in [1, 15], got {self.precision}")


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"


def _write(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _grid_comment(grid: SweepGrid, precision: int) -> str:
    n = "" if grid.n_trials is None else str(grid.n_trials)
    seed = "" if grid.base_seed is None else str(grid.base_seed)
    err = ("" if grid.mean_abs_error_pct is None
           else _fmt(grid.mean_abs_error_pct, precision))
    return (f"# quantity={grid.total_quantity}"
            f" crisis_prob={_fmt(grid.crisis_prob, precision)}"
            f" n_trials={n} base_seed={seed} mean_abs_error_pct={err}")


def _render_long(grid: SweepGrid, precision: int) -> str:
    lines = [LONG_CSV_HEADER]
    simulated = grid.sim_mean is not None
    for i, o in enumerate(grid.order_sizes):
        for j, b in enumerate(grid.batch_sizes):
            if simulated:
                tail = (f"{_fmt(grid.sim_mean[i, j], precision)},"
                        f"{_fmt(grid.abs_error[i, j], precision)},"
                        f"{_fmt(grid.ci95_half_width[i, j], precision)}")
            else:
                tail = ",,"
            lines.append(f"{o},{b},{_fmt(grid.analytic[i, j], precision)},{tail}")
    lines.append(_grid_comment(grid, precision))
    return "\n".join(lines) + "\n"


def _render_matrix(grid: SweepGrid, precision: int) -> str:
    metrics = [("analytic_recall", grid.analytic)]
    if grid.sim_mean is not None:
        metrics += [("sim_mean", grid.sim_mean),
                    ("abs_error", grid.abs_error),
                    ("ci95_half_width", grid.ci95_half_width)]
    lines = []
    header = "order_size\\batch_size," + ",".join(str(b) for b in grid.batch_sizes)
    for name, matrix in metrics:
        lines.append(f"# metric: {name}")
        lines.append(header)
        for i, o in enumerate(grid.order_sizes):
            row = ",".join(_fmt(matrix[i, j], precision)
                           for j in range(len(grid.batch_sizes)))
            lines.append(f"{o},{row}")
    lines.append(_grid_comment(grid, precision))
    return "\n".join(lines) + "\n"


def write_sweep(grid: SweepGrid, spec: ReportSpec) -> Path:
    """Write a sweep grid as long-form or matrix-form CSV.

    Long form: the fixed header, one row per cell in order-size-major
    order (simulation columns left empty on analytic-only grids), and a
    trailing comment recording quantity, crisis probability, trial count,
    base seed, and the mean absolute error in percent of the quantity.
    """
    if spec.format == "long-csv":
        text = _render_long(grid, spec.precision)
    elif spec.format == "grid-csv":
        text = _render_matrix(grid, spec.precision)
    else:
        raise ValueError("sweep reports require a CSV format, not summary-text")
    _write(spec.output_path, text)
    return Path(spec.output_path)


def write_fragments_curve(order_size: int, batch_range: Sequence[int],
                          spec: ReportSpec) -> Path:
    """Expected fragment count of one order size across batch sizes.

    Emits ``batch_size,expected_fragments`` rows, one per batch size.
    """
    lines = ["batch_size,expected_fragments"]
    for b in batch_range:
        fr = expected_fragments(ModelParams(order_size, b, order_size, 0.0))
        lines.append(f"{b},{_fmt(float(fr), spec.precision)}")
    _write(spec.output_path, "\n".join(lines) + "\n")
    return Path(spec.output_path)


def render_summary(estimate: TrialEstimate, analytic: float,
                   params: ModelParams, precision: int = 6) -> str:
    """Human-readable comparison of one estimate against the closed form.

    The percent deviation is relative to the total quantity, matching the
    sweep error metric.
    """
    dev = abs(estimate.mean_recall - analytic)
    f = lambda v: _fmt(v, precision)
    lines = [
        "recall estimate",
        f"  order_size          {params.order_size}",
        f"  batch_size          {params.batch_size}",
        f"  total_quantity      {params.total_quantity}",
        f"  crisis_prob         {f(params.crisis_prob)}",
        f"  n_trials            {estimate.n_trials}",
        f"  analytic_recall     {f(analytic)}",
        f"  simulated_mean      {f(estimate.mean_recall)}",
        f"  std_error           {f(estimate.std_error)}",
        f"  ci95                {f(estimate.mean_recall)} +/- {f(estimate.ci95_half_width)}",
        f"  ci98                {f(estimate.mean_recall)} +/- {f(estimate.ci98_half_width)}",
        f"  abs_deviation       {f(dev)}",
        f"  pct_deviation_of_q  {f(100.0 * dev / params.total_quantity)}",
    ]
    return "\n".join(lines) + "\n"


def write_summary(estimate: TrialEstimate, analytic: float, spec: ReportSpec,
                  params: ModelParams) -> Path:
    """Write :func:`render_summary` output to the configured path."""
    _write(spec.output_path, render_summary(estimate, analytic, params,
                                            spec.precision))
    return Path(spec.output_path)


def render_outcome(outcome: FulfillmentOutcome) -> str:
    """Structured text dump of one fulfillment trial, for inspection."""
    lines = ["batches (id: consumed/size, * = crisis):"]
    for b in outcome.batches:
        flag = " *" if b.in_crisis else ""
        lines.append(f"  b{b.id}: {b.consumed}/{b.size}{flag}")
    lines.append("orders (id, size, fragments as batch:quantity):")
    recalled = outcome.recalled_order_ids or frozenset()
    for o in outcome.orders:
        frags = " ".join(f"b{bid}:{qty}" for bid, qty in o.fragments)
        mark = "  RECALLED" if o.id in recalled else ""
        lines.append(f"  o{o.id} (size {o.size}): {frags}{mark}")
    if outcome.recalled_quantity is not None:
        total = sum(o.size for o in outcome.orders)
        lines.append(f"recalled orders: {len(recalled)} of {len(outcome.orders)}")
        lines.append(f"recalled quantity: {outcome.recalled_quantity} of {total}")
    return "\n".join(lines) + "\n"
