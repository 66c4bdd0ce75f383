"""Seed-ensemble experiments: the BDS/Lambda crossover sweep."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bds import BdsConfig, bds_residuals
from .core_stats import fit_polynomial
from .datagen import gen_polynomial
from .pipeline import LambdaConfig, lambda_from_residuals

__all__ = ["CellResult", "SweepRow", "CrossoverResult", "run_cell", "crossover_sweep", "parse_grid"]


@dataclass(frozen=True)
class CellResult:
    a: float
    seed: int
    lam: float | None
    statistic: float
    p_value: float


@dataclass(frozen=True)
class SweepRow:
    a: float
    mean_lambda: float | None
    mean_statistic: float
    reject_fraction: float
    seeds: int
    degenerate: int


@dataclass
class CrossoverResult:
    order: int
    n: int
    alpha: float
    rows: list[SweepRow] = field(default_factory=list)
    crossover_a: float | None = None
    crossover_lambda: float | None = None

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "n": self.n,
            "alpha": self.alpha,
            "crossover_a": self.crossover_a,
            "crossover_lambda": self.crossover_lambda,
            "rows": [r.__dict__ for r in self.rows],
        }


def parse_grid(spec: str) -> list[float]:
    """``"start:stop:step"`` (inclusive of stop) or a comma list."""
    if ":" in spec:
        start, stop, step = (float(v) for v in spec.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return [float(v) for v in spec.split(",") if v.strip()]


def run_cell(order: int, a: float, seed: int, n: int,
             lambda_config: LambdaConfig, bds_config: BdsConfig,
             ordering: str = "x") -> CellResult:
    """One sample: linear fit, Lambda and BDS on the residuals."""
    sample = gen_polynomial(a, order, n, seed)
    fit = fit_polynomial(sample, lambda_config.model_order)
    report = lambda_from_residuals(sample.x, sample.y, fit.residuals, lambda_config)
    bds = bds_residuals(sample.x, fit.residuals, bds_config, ordering=ordering)
    return CellResult(a=a, seed=seed, lam=report.lam, statistic=bds.statistic, p_value=bds.p_value)


def _run_cell_args(args):
    return run_cell(*args)


def _summarize(a: float, cells: list[CellResult], alpha: float) -> SweepRow:
    lams = [c.lam for c in cells if c.lam is not None]
    return SweepRow(
        a=a,
        mean_lambda=float(np.mean(lams)) if lams else None,
        mean_statistic=float(np.mean([c.statistic for c in cells])),
        reject_fraction=float(np.mean([c.p_value < alpha for c in cells])),
        seeds=len(cells),
        degenerate=len(cells) - len(lams),
    )


def crossover_sweep(order: int, grid, seeds, n: int = 10_000,
                    lambda_config: LambdaConfig | None = None,
                    bds_config: BdsConfig | None = None,
                    alpha: float = 0.05, ordering: str = "x",
                    stop_at_crossover: bool = False, workers: int = 1) -> CrossoverResult:
    """Sweep the nonlinearity coefficient and locate the BDS crossover.

    The crossover is the smallest `a` whose rejection fraction exceeds one
    half; its mean Lambda is reported alongside. Rows are ordered by the grid
    regardless of `workers`.
    """
    lambda_config = lambda_config or LambdaConfig()
    bds_config = bds_config or BdsConfig()
    seeds = list(seeds)
    grid = sorted(float(a) for a in grid)
    result = CrossoverResult(order=order, n=n, alpha=alpha)

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for a in grid:
            jobs = [(order, a, s, n, lambda_config, bds_config, ordering) for s in seeds]
            cells = list(pool.map(_run_cell_args, jobs)) if pool else [_run_cell_args(j) for j in jobs]
            row = _summarize(a, cells, alpha)
            result.rows.append(row)
            if result.crossover_a is None and row.reject_fraction > 0.5:
                result.crossover_a = a
                result.crossover_lambda = row.mean_lambda
                if stop_at_crossover:
                    break
    finally:
        if pool:
            pool.shutdown()
    return result
