"""Multi-start gradient ascent of Bell expressions over measurement angles.

All starts advance together as one batch: the objective is evaluated
through the state's x/z correlation tensor, so a Bell value for a batch of
angle vectors is a handful of small einsum contractions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import DimensionError, NonFiniteError
from .correlations import PAULI_XZ, correlation_tensor, n_sites_of
from .expressions import BellExpression

log = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
_PAIRS = "abcdefghijkl"


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    seed: int = 42
    gtol: float = 1e-8
    max_iter: int = 500
    # a start whose line search can no longer raise the objective counts as
    # converged if its gradient norm is below this (roundoff floor)
    stall_gtol: float = 1e-5
    # "newton" (saddle-free Newton directions) or "gradient" (BB steps)
    method: str = "newton"

    def __post_init__(self):
        if self.method not in ("newton", "gradient"):
            raise ValueError(f"unknown ascent method {self.method!r}")
        if self.starts < 1:
            raise ValueError("need at least one start")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass(frozen=True)
class OptimizationReport:
    best_value: float
    best_settings: np.ndarray
    starts: int
    converged_starts: int
    iterations_total: int
    start_values: np.ndarray = field(repr=False)
    best_alphas: Optional[np.ndarray] = None

    @property
    def best_angles(self) -> np.ndarray:
        """Flat angle vector, the layout used for warm starts."""
        return self.best_settings.reshape(-1)


@dataclass(frozen=True)
class AscentResult:
    x: np.ndarray
    values: np.ndarray
    grad_norms: np.ndarray
    converged: np.ndarray
    iterations: int


class BellObjective:
    """Bell value and angle gradient for a batch of setting vectors.

    ``tensor`` is a correlation tensor of shape ``(2,) * N`` shared by all
    starts, or ``(batch,) + (2,) * N`` with one tensor per start. Signs and
    correlations are folded into one kernel indexed by (component, setting)
    pairs, so each site contributes a length-4 vector per start.
    """

    def __init__(self, expr: BellExpression):
        self.expr = expr
        self.n = n = expr.n_sites
        pairs = _PAIRS[:n]
        self._site_eq = []
        for k in range(n):
            others = ",".join(f"Z{pairs[j]}" for j in range(n) if j != k)
            self._site_eq.append((others, f"Z{pairs[k]}"))
        self._pairs = pairs

    @staticmethod
    def local_vectors(x: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Per site, flattened (component, setting) vectors and derivatives.

        Entry ``2 * a + s`` is sin (a=0) or cos (a=1) of the setting-s angle.
        """
        ang = x.reshape(-1, n, 2)
        s, c = np.sin(ang), np.cos(ang)
        m = np.concatenate([s, c], axis=2)
        dm = np.concatenate([c, -s], axis=2)
        return m, dm

    def kernel(self, tensor: np.ndarray) -> np.ndarray:
        """``K[(a1,s1), ..., (aN,sN)] = T[a1..aN] * signs[s1..sN]``."""
        n = self.n
        batched = tensor.ndim == n + 1
        lead = tensor.shape[:1] if batched else ()
        k = tensor.reshape(lead + (2,) * n + (1,) * n) * self.expr.signs
        # interleave component and setting axes site by site
        off = len(lead)
        order = list(range(off)) + [off + i for k_ in range(n) for i in (k_, n + k_)]
        return k.transpose(order).reshape(lead + (4,) * n)

    def weights(self, x: np.ndarray) -> np.ndarray:
        """Coefficients ``W[z, a1..aN]`` of each x/z Pauli string."""
        n = self.n
        m, _ = self.local_vectors(np.atleast_2d(x), n)
        w = np.ones(len(m))
        for k in range(n):
            w = np.einsum("z...,zi->z...i", w, m[:, k])
        w = w.reshape((len(m),) + (2, 2) * n)
        w = np.einsum(w, [0] + list(range(1, 2 * n + 1)),
                      self.expr.signs, [2 * k + 2 for k in range(n)],
                      [0] + [2 * k + 1 for k in range(n)])
        return w

    def value_and_grad(self, x: np.ndarray, tensor: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.value_and_grad_kernel(x, self.kernel(tensor))

    def value_and_grad_kernel(self, x: np.ndarray, kern: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = self.n
        x = np.atleast_2d(x)
        m, dm = self.local_vectors(x, n)
        k_sub = ("Z" if kern.ndim == n + 1 else "") + self._pairs
        grad = np.empty((x.shape[0], n, 2))
        value = None
        for k, (others, out) in enumerate(self._site_eq):
            ops = [m[:, j] for j in range(n) if j != k]
            eq = (others + "," if others else "") + k_sub + "->" + out
            g = np.einsum(eq, *ops, kern)
            d = g * dm[:, k]
            grad[:, k, :] = d[:, :2] + d[:, 2:]
            if value is None:
                value = np.einsum("zi,zi->z", g, m[:, k])
        return value, grad.reshape(x.shape[0], 2 * n)

    def hessian_kernel(self, x: np.ndarray, kern: np.ndarray) -> np.ndarray:
        """Second derivatives, shape ``(batch, 2N, 2N)``."""
        n, pairs = self.n, self._pairs
        x = np.atleast_2d(x)
        m, dm = self.local_vectors(x, n)
        k_sub = ("Z" if kern.ndim == n + 1 else "") + pairs
        hess = np.zeros((x.shape[0], n, 2, n, 2))
        for k in range(n):
            # within one site only the diagonal survives: d2(sin, cos) = -(sin, cos)
            others = [j for j in range(n) if j != k]
            eq = ",".join([f"Z{pairs[j]}" for j in others] + [k_sub]) + f"->Z{pairs[k]}"
            g = np.einsum(eq, *[m[:, j] for j in others], kern)
            d = -g * m[:, k]
            hess[:, k, [0, 1], k, [0, 1]] = (d[:, :2] + d[:, 2:])
            for l in range(k + 1, n):
                rest = [j for j in range(n) if j not in (k, l)]
                eq = ",".join([f"Z{pairs[j]}" for j in rest] + [k_sub]) + f"->Z{pairs[k]}{pairs[l]}"
                if rest or kern.ndim == n + 1:
                    gkl = np.einsum(eq, *[m[:, j] for j in rest], kern)
                else:
                    gkl = np.broadcast_to(kern, (x.shape[0], 4, 4))
                block = gkl * dm[:, k, :, None] * dm[:, l, None, :]
                block = block.reshape(-1, 2, 2, 2, 2).sum(axis=(1, 3))
                hess[:, k, :, l, :] = block
                hess[:, l, :, k, :] = block.transpose(0, 2, 1)
        return hess.reshape(x.shape[0], 2 * n, 2 * n)


def gradient_ascent(
    fg: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    x0: np.ndarray,
    gtol: float = 1e-8,
    max_iter: int = 500,
    stall_gtol: float = 1e-5,
) -> AscentResult:
    """Batched ascent with Barzilai-Borwein steps and Armijo backtracking.

    ``fg`` maps a ``(batch, d)`` array to values ``(batch,)`` and gradients
    ``(batch, d)``. Coordinates are treated as angles and wrapped to
    [0, 2 pi) after every step.
    """
    x = np.mod(np.array(x0, dtype=float), TWO_PI)
    f, g = fg(x)
    _check_finite(f, g)
    gnorm = np.linalg.norm(g, axis=1)
    step = np.full(len(x), 0.1)
    converged = gnorm < gtol
    active = ~converged
    iterations = 0
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        iterations += 1
        xa, fa, ga, sa = x[idx], f[idx], g[idx], step[idx]
        gg = np.einsum("zd,zd->z", ga, ga)
        x_new, f_new, g_new = xa.copy(), fa.copy(), ga.copy()
        accepted = np.zeros(idx.size, dtype=bool)
        pending = np.arange(idx.size)
        for _ in range(60):
            trial = xa[pending] + sa[pending, None] * ga[pending]
            ft, gt = fg(trial)
            _check_finite(ft, gt)
            ok = ft >= fa[pending] + 1e-4 * sa[pending] * gg[pending]
            hit = pending[ok]
            x_new[hit], f_new[hit], g_new[hit] = trial[ok], ft[ok], gt[ok]
            accepted[hit] = True
            pending = pending[~ok]
            if pending.size == 0:
                break
            sa[pending] *= 0.5
        # starts whose line search failed sit on a roundoff plateau
        stalled = idx[~accepted]
        if stalled.size:
            active[stalled] = False
            converged[stalled] = gnorm[stalled] < stall_gtol
        ok_idx = idx[accepted]
        s = x_new[accepted] - xa[accepted]
        y = g_new[accepted] - ga[accepted]
        ss = np.einsum("zd,zd->z", s, s)
        sy = -np.einsum("zd,zd->z", s, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            bb = np.where(sy > 0, ss / sy, 2.0 * sa[accepted])
        step[ok_idx] = np.clip(bb, 1e-6, 1e3)
        x[ok_idx] = np.mod(x_new[accepted], TWO_PI)
        f[ok_idx], g[ok_idx] = f_new[accepted], g_new[accepted]
        gnorm[ok_idx] = np.linalg.norm(g[ok_idx], axis=1)
        gain = f_new[accepted] - fa[accepted]
        flat = gain <= 8 * np.finfo(float).eps * np.maximum(1.0, np.abs(fa[accepted]))
        done = ok_idx[(gnorm[ok_idx] < gtol) | (flat & (gnorm[ok_idx] < stall_gtol))]
        converged[done] = True
        active[done] = False
    return AscentResult(x, f, gnorm, converged, iterations)


def newton_ascent(
    fg: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
    hess: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    gtol: float = 1e-8,
    max_iter: int = 500,
    stall_gtol: float = 1e-5,
    max_step: float = 1.0,
) -> AscentResult:
    """Batched saddle-free Newton ascent with Armijo backtracking.

    The search direction is ``|A|^-1 g`` where ``A = -H`` and ``|A|`` takes
    absolute eigenvalues (floored), which is an ascent direction everywhere
    and a Newton step near a nondegenerate maximum. Directions longer than
    ``max_step`` radians are scaled down. Flat ridges that stall plain
    gradient ascent converge in a few steps.
    """
    x = np.mod(np.array(x0, dtype=float), TWO_PI)
    f, g = fg(x)
    _check_finite(f, g)
    gnorm = np.linalg.norm(g, axis=1)
    converged = gnorm < gtol
    active = ~converged
    iterations = 0
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        iterations += 1
        xa, fa, ga = x[idx], f[idx], g[idx]
        lam, vec = np.linalg.eigh(-hess(xa))
        scale = np.maximum(1.0, np.abs(lam).max(axis=1, keepdims=True))
        lam = np.maximum(np.abs(lam), 1e-10 * scale)
        d = np.einsum("zij,zj,zkj,zk->zi", vec, 1.0 / lam, vec, ga)
        dnorm = np.linalg.norm(d, axis=1)
        d *= np.minimum(1.0, max_step / np.maximum(dnorm, 1e-300))[:, None]
        slope = np.einsum("zd,zd->z", ga, d)
        t = np.ones(idx.size)
        x_new, f_new, g_new = xa.copy(), fa.copy(), ga.copy()
        accepted = np.zeros(idx.size, dtype=bool)
        pending = np.arange(idx.size)
        for _ in range(60):
            trial = xa[pending] + t[pending, None] * d[pending]
            ft, gt = fg(trial)
            _check_finite(ft, gt)
            ok = ft >= fa[pending] + 1e-4 * t[pending] * slope[pending]
            hit = pending[ok]
            x_new[hit], f_new[hit], g_new[hit] = trial[ok], ft[ok], gt[ok]
            accepted[hit] = True
            pending = pending[~ok]
            if pending.size == 0:
                break
            t[pending] *= 0.5
        stalled = idx[~accepted]
        if stalled.size:
            active[stalled] = False
            converged[stalled] = gnorm[stalled] < stall_gtol
        ok_idx = idx[accepted]
        x[ok_idx] = np.mod(x_new[accepted], TWO_PI)
        f[ok_idx], g[ok_idx] = f_new[accepted], g_new[accepted]
        gnorm[ok_idx] = np.linalg.norm(g[ok_idx], axis=1)
        gain = f_new[accepted] - fa[accepted]
        flat = gain <= 8 * eps * np.maximum(1.0, np.abs(fa[accepted]))
        done = ok_idx[(gnorm[ok_idx] < gtol) | (flat & (gnorm[ok_idx] < stall_gtol))]
        converged[done] = True
        active[done] = False
    return AscentResult(x, f, gnorm, converged, iterations)


def _check_finite(f: np.ndarray, g: np.ndarray) -> None:
    if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
        raise NonFiniteError("Bell objective produced a non-finite value or gradient")


def initial_points(
    config: OptimizerConfig, dim: int, warm: Optional[np.ndarray] = None
) -> np.ndarray:
    """Warm starts first (if any), then ``config.starts`` uniform draws."""
    rng = np.random.default_rng(config.seed)
    fresh = rng.uniform(0.0, TWO_PI, size=(config.starts, dim))
    if warm is None or len(warm) == 0:
        return fresh
    warm = np.atleast_2d(np.asarray(warm, dtype=float))
    if warm.shape[1] != dim:
        raise DimensionError(f"warm starts have width {warm.shape[1]}, expected {dim}")
    return np.vstack([warm, fresh])


def maximize_bell_tensor(
    tensor: np.ndarray,
    expr: BellExpression,
    config: OptimizerConfig = OptimizerConfig(),
    warm: Optional[np.ndarray] = None,
) -> OptimizationReport:
    """Maximize a Bell expression given the state's correlation tensor."""
    n = expr.n_sites
    if tensor.shape != (2,) * n:
        raise DimensionError(f"correlation tensor shape {tensor.shape} does not match {n} sites")
    objective = BellObjective(expr)
    kern = objective.kernel(tensor)
    x0 = initial_points(config, 2 * n, warm)
    fg = lambda x: objective.value_and_grad_kernel(x, kern)  # noqa: E731
    opts = dict(gtol=config.gtol, max_iter=config.max_iter, stall_gtol=config.stall_gtol)
    if config.method == "newton":
        res = newton_ascent(fg, lambda x: objective.hessian_kernel(x, kern), x0, **opts)
    else:
        res = gradient_ascent(fg, x0, **opts)
    best = int(np.argmax(res.values))
    log.debug(
        "bell ascent: best %.12f, %d/%d converged, %d iterations",
        res.values[best], res.converged.sum(), len(x0), res.iterations,
    )
    return OptimizationReport(
        best_value=float(res.values[best]),
        best_settings=res.x[best].reshape(n, 2).copy(),
        starts=len(x0),
        converged_starts=int(res.converged.sum()),
        iterations_total=res.iterations,
        start_values=res.values.copy(),
    )


def maximize_bell(
    state: np.ndarray,
    expr: BellExpression,
    config: OptimizerConfig = OptimizerConfig(),
    warm: Optional[np.ndarray] = None,
) -> OptimizationReport:
    """Largest Bell value over x-z measurement settings for ``state``.

    Deterministic for a fixed config: the winner is the highest final value,
    ties going to the lowest start index (warm starts come first).
    """
    n = n_sites_of(state)
    if n != expr.n_sites:
        raise DimensionError(f"expression for {expr.n_sites} sites applied to a {n}-site state")
    return maximize_bell_tensor(correlation_tensor(state), expr, config, warm)


def bell_operator(expr: BellExpression, settings: np.ndarray) -> np.ndarray:
    """Observable whose expectation is the Bell value at ``settings``."""
    n = expr.n_sites
    w = BellObjective(expr).weights(np.asarray(settings, dtype=float).reshape(1, -1))[0]
    op = np.zeros((2**n, 2**n))
    for idx in np.ndindex(*(2,) * n):
        if w[idx] != 0.0:
            term = PAULI_XZ[idx[0]]
            for a in idx[1:]:
                term = np.kron(term, PAULI_XZ[a])
            op += w[idx] * term
    return op
