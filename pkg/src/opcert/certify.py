"""Numerical unitarity certificates for a designated element.

The row defect of x at matrix level n is (|u_n|^2 + |x|^2) - |[u_n  x]|^2,
maximized over the unit sphere of M_n(X); the column defect uses the stacked
block instead. A designated u of norm one is certified unitary when both
defects stay at numerical zero across the requested levels, a coisometry
when only the row defect does, an isometry when only the column defect does.
The reported worst defect is a certified lower bound for the true supremum,
so "fail" verdicts are trustworthy; "pass" verdicts are evidence from a
converged multistart search, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import column_with_unit, grid_value_and_grad, row_with_unit
from .errors import InvalidInputError, PreconditionError, SolverError
from .opspace import ConcreteOpSpace
from .report import FAIL, INCONCLUSIVE, PASS, CertificateReport
from .solver import SolverConfig, maximize_over_sphere

UNIT_NORM_TOL = 1e-6


class _DefectProblem:
    """Maximize 1 + |x|^2 - |block(u_n, x)|^2 over the unit sphere of M_n(X)."""

    def __init__(self, space: ConcreteOpSpace, u: np.ndarray, n: int, direction: str):
        self.space = space
        self.u = u
        self.n = n
        self.direction = direction
        self.dim = n * n * space.dim
        self.u_norm = space.norm(u)
        self._build = row_with_unit if direction == "row" else column_with_unit

    def _grid(self, c: np.ndarray) -> np.ndarray:
        return c.reshape(self.n, self.n, self.space.dim)

    def norm(self, c: np.ndarray) -> float:
        return self.space.grid_norm(self._grid(c))

    def _invariant(self, nx: float, bn: float, c: np.ndarray) -> None:
        lo = self.u_norm ** 2 - 1e-6
        hi = self.u_norm ** 2 + nx * nx + 1e-6
        if bn * bn < lo or bn * bn > hi:
            raise SolverError(
                f"block norm {bn:.6g} escapes [{lo:.6g}, {hi:.6g}] bracket",
                iterate=c)

    def value(self, c: np.ndarray) -> float:
        x = self._grid(c)
        nx = self.space.grid_norm(x)
        bn = self.space.grid_norm(self._build(self.space, self.u, x))
        self._invariant(nx, bn, c)
        return 1.0 + nx * nx - bn * bn

    def value_and_grad(self, c: np.ndarray):
        x = self._grid(c)
        nx, gx, sx = grid_value_and_grad(self.space, x)
        full = self._build(self.space, self.u, x)
        bn, gf, sf = grid_value_and_grad(self.space, full)
        self._invariant(nx, bn, c)
        part = gf[:, self.n:, :] if self.direction == "row" else gf[self.n:, :, :]
        grad = 2.0 * nx * gx - 2.0 * bn * part
        return 1.0 + nx * nx - bn * bn, grad.reshape(-1), sx and sf


@dataclass
class DefectProfile:
    level: int
    direction: str
    worst_defect: float
    witness: np.ndarray       # (n, n, d) coefficient grid on the unit sphere
    converged: bool
    diagnostics: dict


def _diag_embed(witness: np.ndarray, n: int) -> np.ndarray:
    """Level-1 witness repeated down the diagonal of a level-n grid."""
    d = witness.shape[2]
    grid = np.zeros((n, n, d), dtype=np.complex128)
    grid[np.arange(n), np.arange(n), :] = witness[0, 0, :]
    return grid


def _pad_embed(witness: np.ndarray, n: int) -> np.ndarray:
    """Level-(n-1) witness in the upper-left corner, zero elsewhere."""
    k, _, d = witness.shape
    grid = np.zeros((n, n, d), dtype=np.complex128)
    grid[:k, :k, :] = witness
    return grid


def _resolve_unit(space: ConcreteOpSpace, u) -> np.ndarray:
    uc = space.unit_coeffs() if u is None else space.as_coeffs(u)
    nu = space.norm(uc)
    if nu > 1.0 + UNIT_NORM_TOL:
        raise PreconditionError(f"designated element has norm {nu:.6g} > 1")
    return uc


def _defect(space, u, level, direction, config, extra_starts, salt) -> DefectProfile:
    problem = _DefectProblem(space, u, level, direction)
    extras = [g.reshape(-1) for g in extra_starts]
    res = maximize_over_sphere(problem, config, extra_starts=extras,
                               seed_salt=(salt, level))
    worst = max(0.0, res.value)
    witness = res.coeffs.reshape(level, level, space.dim)
    diag = {"iterations": res.iterations, "fd_calls": res.fd_calls,
            "best_start": res.best_start}
    return DefectProfile(level=level, direction=direction, worst_defect=worst,
                         witness=witness, converged=res.converged,
                         diagnostics=diag)


def row_defect(space: ConcreteOpSpace, u=None, level: int = 1,
               config: SolverConfig | None = None,
               extra_starts=()) -> DefectProfile:
    uc = _resolve_unit(space, u)
    return _defect(space, uc, level, "row", config or SolverConfig(),
                   extra_starts, 11)


def column_defect(space: ConcreteOpSpace, u=None, level: int = 1,
                  config: SolverConfig | None = None,
                  extra_starts=()) -> DefectProfile:
    uc = _resolve_unit(space, u)
    return _defect(space, uc, level, "column", config or SolverConfig(),
                   extra_starts, 12)


def _certify(space, u, directions, max_level, config, name) -> CertificateReport:
    uc = _resolve_unit(space, u)
    config = config or SolverConfig()
    config.validate()
    if max_level < 1:
        raise InvalidInputError("max_level must be at least 1")
    profiles = []
    salts = {"row": 11, "column": 12}
    for direction in directions:
        level_witnesses = []
        for n in range(1, max_level + 1):
            extras = []
            if level_witnesses:
                extras.append(_diag_embed(level_witnesses[0], n))
                extras.append(_pad_embed(level_witnesses[-1], n))
            prof = _defect(space, uc, n, direction, config, extras,
                           salts[direction])
            level_witnesses.append(prof.witness)
            profiles.append(prof)
    worst = max(p.worst_defect for p in profiles)
    worst_prof = max(profiles, key=lambda p: p.worst_defect)
    all_converged = all(p.converged for p in profiles)
    if worst <= config.cert_tol:
        verdict = PASS
    elif worst >= config.fail_tol and worst_prof.converged:
        verdict = FAIL
    else:
        verdict = INCONCLUSIVE
    if verdict == PASS and not all_converged:
        verdict = INCONCLUSIVE
    detail = {f"{p.direction}_defect_level_{p.level}": p.worst_defect
              for p in profiles}
    detail["converged"] = all_converged
    return CertificateReport(
        name=name, verdict=verdict, margin=config.cert_tol - worst,
        witness={"level": worst_prof.level, "direction": worst_prof.direction,
                 "coeff_grid": worst_prof.witness},
        diagnostics=detail)


def certify_unitary(space: ConcreteOpSpace, u=None, max_level: int = 2,
                    config: SolverConfig | None = None) -> CertificateReport:
    return _certify(space, u, ("row", "column"), max_level, config, "unitary")


def certify_coisometry(space: ConcreteOpSpace, u=None, max_level: int = 2,
                       config: SolverConfig | None = None) -> CertificateReport:
    return _certify(space, u, ("row",), max_level, config, "coisometry")


def certify_isometry(space: ConcreteOpSpace, u=None, max_level: int = 2,
                     config: SolverConfig | None = None) -> CertificateReport:
    return _certify(space, u, ("column",), max_level, config, "isometry")
