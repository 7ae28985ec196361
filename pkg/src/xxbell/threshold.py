"""Temperature scans, threshold temperatures and field sweeps."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .bell.correlations import correlation_tensor
from .bell.expressions import BellExpression, expression_for
from .bell.optimize import OptimizationReport, OptimizerConfig, maximize_bell_tensor
from .errors import ConvergenceError, ThresholdSearchError
from .operators import ChainSpec, build_field_hamiltonian
from .spectral import EigenSystem, eigendecompose
from .thermal import boltzmann_weights

log = logging.getLogger(__name__)

# a maximized value must clear the bound by this much to count as a violation;
# product states sit exactly on the bound and roundoff must not flip them
VIOLATION_TOL = 1e-9


@dataclass(frozen=True)
class SearchConfig:
    t_lo: float = 0.01
    t_hi: float = 2.0
    step: float = 0.02
    # bisection stops once the bracket is narrower than tol * (its lower end)
    tol: float = 1e-3

    def __post_init__(self):
        if not (0 < self.t_lo < self.t_hi) or not np.isfinite(self.t_hi):
            raise ValueError(f"invalid scan range [{self.t_lo}, {self.t_hi}]")
        if not (0 < self.step <= self.t_hi - self.t_lo):
            raise ValueError(f"invalid scan step {self.step}")
        if not 0 < self.tol < 1:
            raise ValueError(f"invalid bisection tolerance {self.tol}")

    def grid(self) -> np.ndarray:
        count = int(np.floor((self.t_hi - self.t_lo) / self.step + 1e-9)) + 1
        grid = self.t_lo + self.step * np.arange(count)
        if grid[-1] < self.t_hi - 1e-12:
            grid = np.append(grid, self.t_hi)
        return grid


@dataclass(frozen=True)
class ThresholdReport:
    field: float
    threshold: Optional[float]
    scan: list[tuple[float, float]]
    bound: float
    n_sites: int = 4
    evaluations: int = 0
    bracket: Optional[tuple[float, float]] = None


class ThermalBell:
    """Bell maximization for the Gibbs states of one chain.

    The correlation tensor of rho(T) is the population-weighted sum of the
    eigenvector tensors, so those are computed once and reused for every T.
    """

    def __init__(self, spec: ChainSpec, expr: Optional[BellExpression] = None,
                 eigensystem: Optional[EigenSystem] = None):
        self.spec = spec
        self.expr = expr if expr is not None else expression_for(spec.n_sites)
        self.eigensystem = eigensystem or eigendecompose(build_field_hamiltonian(spec))
        vecs = self.eigensystem.vectors
        self._tensors = np.stack(
            [correlation_tensor(np.outer(vecs[:, k], vecs[:, k])) for k in range(vecs.shape[1])]
        )

    def tensor(self, temperature: float) -> np.ndarray:
        p = boltzmann_weights(self.eigensystem.values, temperature)
        return np.tensordot(p, self._tensors, axes=1)

    def maximize(self, temperature: float, config: OptimizerConfig,
                 warm: Optional[np.ndarray] = None) -> OptimizationReport:
        report = maximize_bell_tensor(self.tensor(temperature), self.expr, config, warm)
        if report.converged_starts == 0:
            raise ConvergenceError(
                f"no optimizer start converged at T={temperature}, B={self.spec.field} "
                f"({report.starts} starts, {report.iterations_total} iterations)"
            )
        return report


def bell_max_vs_temperature(
    spec: ChainSpec,
    temperatures: Sequence[float],
    expr: Optional[BellExpression] = None,
    config: OptimizerConfig = OptimizerConfig(),
    warm_start: bool = True,
) -> list[tuple[float, OptimizationReport]]:
    """Maximized Bell value of the Gibbs state at each temperature.

    With ``warm_start`` each temperature also starts from the previous
    optimum, in addition to the fresh random starts.
    """
    temps = np.asarray(temperatures, dtype=float)
    if temps.ndim != 1 or temps.size == 0 or np.any(temps <= 0) or np.any(np.diff(temps) <= 0):
        raise ValueError("temperatures must be a nonempty, positive, strictly ascending grid")
    tb = ThermalBell(spec, expr)
    out = []
    warm = None
    for t in temps:
        report = tb.maximize(float(t), config, warm)
        out.append((float(t), report))
        if warm_start:
            warm = report.best_angles[None, :]
    return out


def threshold_temperature(
    spec: ChainSpec,
    expr: Optional[BellExpression] = None,
    search: SearchConfig = SearchConfig(),
    config: OptimizerConfig = OptimizerConfig(),
) -> ThresholdReport:
    """Highest temperature below which the maximized Bell value beats the bound.

    A coarse scan finds the last grid point still violating the bound; the
    threshold is then bisected inside the following grid interval. The scan
    comes first because the Bell maximum need not be monotone in T.
    """
    tb = ThermalBell(spec, expr)
    bound = tb.expr.classical_bound
    grid = search.grid()
    scan = []
    warm = None
    optima = []
    for t in grid:
        report = tb.maximize(float(t), config, warm)
        scan.append((float(t), report.best_value))
        optima.append(report.best_angles)
        warm = report.best_angles[None, :]
    evaluations = len(grid)
    violating = [i for i, (_, v) in enumerate(scan) if v > bound + VIOLATION_TOL]
    if not violating:
        return ThresholdReport(spec.field, None, scan, bound, spec.n_sites, evaluations)
    i = violating[-1]
    if i == len(grid) - 1:
        raise ThresholdSearchError(
            f"Bell bound still violated at T={grid[-1]}; widen the scan range"
        )
    lo, hi = float(grid[i]), float(grid[i + 1])
    warm_lo, warm_hi = optima[i], optima[i + 1]
    while hi - lo > search.tol * lo:
        mid = 0.5 * (lo + hi)
        report = tb.maximize(mid, config, np.vstack([warm_lo, warm_hi]))
        evaluations += 1
        if report.best_value > bound + VIOLATION_TOL:
            lo, warm_lo = mid, report.best_angles
        else:
            hi, warm_hi = mid, report.best_angles
    threshold = 0.5 * (lo + hi)
    log.info("B=%g: threshold %.6f after %d evaluations", spec.field, threshold, evaluations)
    return ThresholdReport(spec.field, threshold, scan, bound, spec.n_sites, evaluations, (lo, hi))


def _threshold_job(args):
    spec, expr, search, config = args
    return threshold_temperature(spec, expr, search, config)


def field_sweep(
    template: ChainSpec,
    fields: Iterable[float],
    expr: Optional[BellExpression] = None,
    search: SearchConfig = SearchConfig(),
    config: OptimizerConfig = OptimizerConfig(),
    workers: Optional[int] = None,
) -> list[ThresholdReport]:
    """One independent threshold search per field value, in input order."""
    fields = [float(b) for b in fields]
    if not all(np.isfinite(b) for b in fields):
        raise ValueError("fields must be finite")
    jobs = [(template.with_field(b), expr, search, config) for b in fields]
    if workers is None or workers <= 1 or len(jobs) <= 1:
        return [_threshold_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_threshold_job, jobs))


def parse_range(text: str) -> list[float]:
    """Expand ``lo:hi:step`` (inclusive of hi) or a comma list into floats."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must look like lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"empty or invalid range {text!r}")
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        return [round(lo + k * step, 12) for k in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]
