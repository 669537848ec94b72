"""Deterministic multistart projected subgradient solver.

Two entry points: `minimize_over_ball` (constraint: element norm <= 1, the
reported value is a certified upper bound on the minimum) and
`maximize_over_sphere` (constraint: element norm = 1 via radial retraction,
the reported value is a certified lower bound on the supremum).

Problems expose a flat complex variable vector:

    dim             number of complex coefficients
    value(c)        objective, a float
    value_and_grad(c) -> (value, wirtinger_grad, smooth)
    norm(c)         constraint norm of the variable (an operator norm)

The step rule combines the guaranteed-safe decay schedule s0/sqrt(k) with a
Polyak-style step toward an adaptively tightened level; the effective step
length is the smaller of the two, so the decay guarantee is never violated
while sharp minima are still reached to high accuracy within the budget.
Determinism: every random draw comes from a generator seeded by
(root_seed, salt..., start_index), and ties across starts resolve to the
lowest start index, so results are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, SolverError

DEFAULT_T_GRID = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0)


@dataclass
class SolverConfig:
    root_seed: int = 7
    starts: int = 32
    max_iters: int = 500
    step_scale: float = 0.1
    stat_tol: float = 1e-9
    stall_window: int = 40
    t_grid: tuple = DEFAULT_T_GRID
    cert_tol: float = 1e-4
    fail_ratio: float = 10.0
    eps_stop: float = 1e-7
    fd_step: float = 1e-6

    @property
    def fail_tol(self) -> float:
        return self.fail_ratio * self.cert_tol

    def validate(self) -> None:
        if self.starts < 1 or self.max_iters < 1:
            raise InvalidInputError("starts and max_iters must be positive")
        for name in ("step_scale", "stat_tol", "stall_window", "cert_tol",
                     "eps_stop", "fd_step"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be positive")
        if self.fail_ratio < 1:
            raise InvalidInputError("fail_ratio must be at least 1")
        if not self.t_grid or any(t <= 0 for t in self.t_grid):
            raise InvalidInputError("t_grid must be positive")


@dataclass
class SolveResult:
    coeffs: np.ndarray
    value: float
    converged: bool
    best_start: int
    iterations: int
    fd_calls: int
    reached_target: bool
    start_values: list = field(default_factory=list)


def _fd_grad(problem, c: np.ndarray, f0: float, step: float) -> np.ndarray:
    grad = np.zeros(problem.dim, dtype=np.complex128)
    for j in range(problem.dim):
        e = np.zeros(problem.dim, dtype=np.complex128)
        e[j] = step
        da = (problem.value(c + e) - f0) / step
        e[j] = 1j * step
        db = (problem.value(c + e) - f0) / step
        grad[j] = da + 1j * db
    return grad


def _check_finite(f: float, c: np.ndarray) -> None:
    if not np.isfinite(f):
        raise SolverError("objective is not finite", iterate=c)


def _ball_starts(problem, n_starts: int, extra, rng_key) -> list:
    # caller-provided warm starts go first so a target hit ends the sweep early
    starts = []
    for c in extra:
        c = np.asarray(c, dtype=np.complex128)
        n = problem.norm(c)
        starts.append(c if n <= 1.0 else c / n)
    starts.append(np.zeros(problem.dim, dtype=np.complex128))
    for j in range(problem.dim):
        e = np.zeros(problem.dim, dtype=np.complex128)
        e[j] = 1.0
        starts.append(e / max(1.0, problem.norm(e)))
    idx = 0
    while len(starts) < n_starts and idx < 50 * n_starts:
        rng = np.random.default_rng(list(rng_key) + [idx])
        g = rng.standard_normal(problem.dim) + 1j * rng.standard_normal(problem.dim)
        n = problem.norm(g)
        if n > 1e-12:
            starts.append(g * (rng.uniform(0.0, 1.0) / n))
        idx += 1
    return starts[:max(n_starts, len(extra) + 1)]


def _sphere_starts(problem, n_starts: int, extra, rng_key) -> list:
    starts = []
    for j in range(problem.dim):
        e = np.zeros(problem.dim, dtype=np.complex128)
        e[j] = 1.0
        n = problem.norm(e)
        if n > 1e-12:
            starts.append(e / n)
    for c in extra:
        c = np.asarray(c, dtype=np.complex128)
        n = problem.norm(c)
        if n > 1e-12:
            starts.append(c / n)
    idx = 0
    # cap rejection sampling so a degenerate norm cannot spin forever
    while len(starts) < n_starts and idx < 50 * n_starts:
        rng = np.random.default_rng(list(rng_key) + [idx])
        g = rng.standard_normal(problem.dim) + 1j * rng.standard_normal(problem.dim)
        n = problem.norm(g)
        if n > 1e-12:
            starts.append(g / n)
        idx += 1
    return starts[:max(n_starts, len(extra))] if starts else starts


def _run_start(problem, config, c0, sign, target, stop_at_target):
    """One projected subgradient run. sign=+1 minimizes, sign=-1 maximizes.

    Returns (best_value, best_c, iterations, fd_calls, converged, hit_target).
    The adaptive level starts a fixed fraction below the incumbent and halves
    whenever a stall window passes without improvement; the run ends when the
    level collapses, the iteration budget runs out, or the target is reached.
    """
    c = np.asarray(c0, dtype=np.complex128).copy()
    f = problem.value(c)
    _check_finite(f, c)
    best_f, best_c = f, c.copy()
    scale = max(abs(f - target), 1.0)
    s0 = config.step_scale * scale
    delta = max(0.25 * abs(f - target), 100.0 * config.eps_stop)
    floor = 1e-12 * scale
    since_improve = 0
    fd_calls = 0
    it = 0
    while it < config.max_iters:
        it += 1
        gap = sign * (best_f - target)
        if stop_at_target and gap <= config.eps_stop:
            return best_f, best_c, it, fd_calls, True, True
        f, g, smooth = problem.value_and_grad(c)
        _check_finite(f, c)
        if sign * (f - best_f) < -config.stat_tol:
            best_f, best_c = f, c.copy()
            since_improve = 0
        else:
            since_improve += 1
        if since_improve >= config.stall_window:
            # a maximize run pinned at numerical zero has nothing to climb
            if sign < 0 and best_f <= 1e-8:
                return best_f, best_c, it, fd_calls, True, False
            delta *= 0.5
            since_improve = 0
            if delta < floor:
                return best_f, best_c, it, fd_calls, True, False
        if not smooth:
            g = _fd_grad(problem, c, f, config.fd_step)
            fd_calls += 1
        gnorm = float(np.linalg.norm(g))
        if gnorm < 1e-14:
            return best_f, best_c, it, fd_calls, True, False
        level = best_f - sign * delta
        len_polyak = max(sign * (f - level), 0.0) / gnorm
        len_decay = s0 / np.sqrt(it)
        step = min(len_polyak, len_decay)
        if step <= 0.0:
            step = len_decay
        c = c - sign * step * (g / gnorm)
        n = problem.norm(c)
        if sign > 0:
            if n > 1.0:
                c = c / n
        else:
            if n < 1e-12:
                c = best_c.copy()
            else:
                c = c / n
    f = problem.value(c)
    _check_finite(f, c)
    if sign * (f - best_f) < 0:
        best_f, best_c = f, c.copy()
    hit = stop_at_target and sign * (best_f - target) <= config.eps_stop
    return best_f, best_c, it, fd_calls, False, hit


def _reduce(problem, config, starts, sign, target, stop_at_target):
    best = None
    total_iters = 0
    total_fd = 0
    values = []
    any_converged = False
    for i, c0 in enumerate(starts):
        f, c, it, fd, conv, hit = _run_start(
            problem, config, c0, sign, target, stop_at_target)
        total_iters += it
        total_fd += fd
        values.append(f)
        any_converged = any_converged or conv
        if best is None or sign * (f - best[0]) < 0:
            best = (f, c, i, hit)
        if hit and stop_at_target:
            best = (f, c, i, True) if sign * (f - best[0]) <= 0 else best
            break
    f, c, i, hit = best
    return SolveResult(coeffs=c, value=float(f), converged=any_converged or hit,
                       best_start=i, iterations=total_iters, fd_calls=total_fd,
                       reached_target=hit, start_values=values)


def minimize_over_ball(problem, config: SolverConfig | None = None, *,
                       target: float = 0.0, stop_at_target: bool = True,
                       starts: int | None = None, extra_starts=(),
                       seed_salt=()) -> SolveResult:
    """Minimize problem.value over {c : problem.norm(c) <= 1}.

    The returned value is an upper bound on the true minimum (it is attained
    by the returned feasible point). With stop_at_target, the run ends at the
    first iterate within eps_stop of the target value.
    """
    config = config or SolverConfig()
    config.validate()
    n = starts if starts is not None else config.starts
    key = [config.root_seed, *seed_salt, 1]
    cands = _ball_starts(problem, n, extra_starts, key)
    return _reduce(problem, config, cands, +1, target, stop_at_target)


def maximize_over_sphere(problem, config: SolverConfig | None = None, *,
                         starts: int | None = None, extra_starts=(),
                         seed_salt=()) -> SolveResult:
    """Maximize problem.value over {c : problem.norm(c) = 1}.

    The returned value is a lower bound on the true supremum. Iterates are
    kept on the sphere by radial retraction after every step.
    """
    config = config or SolverConfig()
    config.validate()
    n = starts if starts is not None else config.starts
    key = [config.root_seed, *seed_salt, 2]
    cands = _sphere_starts(problem, n, extra_starts, key)
    if not cands:
        raise InvalidInputError("no feasible start on the unit sphere")
    return _reduce(problem, config, cands, -1, 0.0, False)


def spectral_subgradient(space, grid):
    """Norm and Wirtinger gradient of a block grid; see blocks module."""
    from .blocks import grid_value_and_grad
    return grid_value_and_grad(space, grid)
