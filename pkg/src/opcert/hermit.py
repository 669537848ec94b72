"""Detection of u-hermitian and u-positive elements and their span.

An element x is u-hermitian when |u + itx|^2 <= 1 + |x|^2 t^2 for all real
t; intrinsically, a contraction x is u-hermitian exactly when the level-2
block [[tu, x], [-x, tu]] has norm at most sqrt(t^2 + 1) for every t > 0.
Both criteria are evaluated on a fixed t grid. u-positives are the
u-hermitians x with | |x| u - x | <= |x|.

The span of the u-hermitians is computed two ways: an exact real-linear
ambient solve of adjoint(x) u = adjoint(u) x (available when a ternary
closure certifies u and is flagged envelope-exact), or intrinsic screening
of candidate combinations through the grid criteria. The intrinsic route
can only under-detect, so its non-spanning verdicts are reported as
inconclusive rather than failures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import two_by_two
from .errors import InvalidInputError
from .matcore import adjoint, real_kernel
from .opspace import ConcreteOpSpace
from .report import FAIL, INCONCLUSIVE, PASS, CertificateReport
from .solver import DEFAULT_T_GRID

HERMIT_TOL = 1e-8
SPAN_RANK_TOL = 1e-9


@dataclass
class HermitianProfile:
    coeffs: np.ndarray
    element_norm: float
    scaled: bool                  # matricial criterion ran on x/|x|
    scalar_t: np.ndarray          # signed grid
    scalar_slack: np.ndarray      # (1 + |x|^2 t^2) - |u + itx|^2
    matricial_t: np.ndarray       # positive grid
    matricial_slack: np.ndarray   # sqrt(t^2+1) - |[[tu, x],[-x, tu]]|
    min_slack: float
    tol: float
    passed: bool


def _resolve(space: ConcreteOpSpace, u) -> np.ndarray:
    return space.unit_coeffs() if u is None else space.as_coeffs(u)


def is_u_hermitian(space: ConcreteOpSpace, u, x, t_grid=None,
                   tol: float = HERMIT_TOL) -> HermitianProfile:
    uc = _resolve(space, u)
    xc = space.as_coeffs(x)
    nx = space.norm(xc)
    grid = tuple(t_grid if t_grid is not None else DEFAULT_T_GRID)
    if any(t <= 0 for t in grid):
        raise InvalidInputError("t grid must be positive")
    signed = np.array(sorted({s * t for t in grid for s in (1.0, -1.0)}))
    k = nx * nx
    scalar = np.empty(signed.size)
    for i, t in enumerate(signed):
        scalar[i] = (1.0 + k * t * t) - space.norm(uc + 1j * t * xc) ** 2
    scaled = nx > 1.0 + 1e-12
    xhat = xc / nx if scaled else xc
    pos = np.array(sorted(grid))
    matricial = np.empty(pos.size)
    for i, t in enumerate(pos):
        g = two_by_two(space, t * uc, xhat, -xhat, t * uc)
        matricial[i] = np.sqrt(t * t + 1.0) - space.grid_norm(g)
    min_slack = float(min(scalar.min(), matricial.min()))
    return HermitianProfile(
        coeffs=xc, element_norm=nx, scaled=scaled, scalar_t=signed,
        scalar_slack=scalar, matricial_t=pos, matricial_slack=matricial,
        min_slack=min_slack, tol=tol, passed=min_slack >= -tol)


def is_u_positive(space: ConcreteOpSpace, u, x, t_grid=None,
                  tol: float = HERMIT_TOL) -> CertificateReport:
    uc = _resolve(space, u)
    xc = space.as_coeffs(x)
    nx = space.norm(xc)
    prof = is_u_hermitian(space, uc, xc, t_grid=t_grid, tol=tol)
    shift = space.norm(nx * uc - xc)
    shift_ok = shift <= nx + tol
    diag = {"hermitian_min_slack": prof.min_slack, "shift_norm": shift,
            "element_norm": nx}
    if nx <= 1.0 + 1e-12:
        grid = np.array(sorted(t_grid if t_grid is not None else DEFAULT_T_GRID))
        slack = np.empty(grid.size)
        for i, t in enumerate(grid):
            g = two_by_two(space, t * uc, uc - xc, xc - uc, t * uc)
            slack[i] = np.sqrt(t * t + 1.0) - space.grid_norm(g)
        diag["ball_criterion_slack"] = slack
        diag["ball_criterion_pass"] = bool(slack.min() >= -tol)
    ok = prof.passed and shift_ok
    return CertificateReport(
        name="u-positive", verdict=PASS if ok else FAIL,
        margin=min(prof.min_slack + tol, nx + tol - shift),
        witness=None, diagnostics=diag)


@dataclass
class DeltaSpan:
    real_basis: np.ndarray     # (r, d) coefficient vectors, real-linear basis
    complex_basis: np.ndarray  # (k, d) spanning the complex span
    route: str                 # "ambient" or "numerical"

    @property
    def real_dim(self) -> int:
        return self.real_basis.shape[0]

    @property
    def complex_dim(self) -> int:
        return self.complex_basis.shape[0]


def _complex_row_span(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return rows[:0]
    rank = int(np.sum(s > SPAN_RANK_TOL * s[0]))
    return vh[:rank]


def _ambient_columns(space: ConcreteOpSpace, uc: np.ndarray) -> np.ndarray:
    """Columns of the real-linear map c -> adjoint(u) x(c) - adjoint(x(c)) u."""
    d = space.dim
    if space.diagonal:
        uv = space.point_values(uc)
        pb = space.point_basis
        col_a = np.conj(uv) * pb - np.conj(pb) * uv
        col_b = 1j * (np.conj(uv) * pb + np.conj(pb) * uv)
        return np.vstack([col_a, col_b])
    umat = space.embed(uc)
    ua = adjoint(umat)
    cols = []
    for k in range(d):
        b = space.basis[k]
        cols.append((ua @ b - adjoint(b) @ umat).reshape(-1))
    for k in range(d):
        b = space.basis[k]
        cols.append((1j * (ua @ b + adjoint(b) @ umat)).reshape(-1))
    return np.stack(cols)


def delta_span(space: ConcreteOpSpace, u=None, closure=None, t_grid=None,
               tol: float = HERMIT_TOL) -> DeltaSpan:
    """Real basis of the u-hermitians in the space and of their complex span.

    With an envelope-exact closure certifying u, the hermitians are the
    exact solution set of a real-linear system; otherwise candidate
    combinations of basis elements are screened through the grid criteria.
    """
    uc = _resolve(space, u)
    d = space.dim
    ambient = False
    if closure is not None and closure.envelope_exact:
        from .tro import ambient_unitary_check
        ambient = ambient_unitary_check(closure, uc).passed
    if ambient:
        kern = real_kernel(_ambient_columns(space, uc))
        real_rows = kern[:, :d] + 1j * kern[:, d:]
        real_rows = real_rows[np.linalg.norm(real_rows, axis=1) > 1e-12]
        # re-orthonormalize in the real (2d) coordinates
        flat = np.hstack([np.real(real_rows), np.imag(real_rows)])
        flat = _real_row_span(flat)
        real_basis = flat[:, :d] + 1j * flat[:, d:]
        route = "ambient"
    else:
        cands = _candidates(d)
        keep = [c for c in cands
                if is_u_hermitian(space, uc, c, t_grid=t_grid, tol=tol).passed]
        if keep:
            rows = np.stack(keep)
            flat = np.hstack([np.real(rows), np.imag(rows)])
            flat = _real_row_span(flat)
            real_basis = flat[:, :d] + 1j * flat[:, d:]
        else:
            real_basis = np.zeros((0, d), dtype=np.complex128)
        route = "numerical"
    complex_basis = _complex_row_span(real_basis)
    return DeltaSpan(real_basis=real_basis, complex_basis=complex_basis,
                     route=route)


def _real_row_span(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return rows[:0]
    rank = int(np.sum(s > SPAN_RANK_TOL * s[0]))
    return vt[:rank]


def _candidates(d: int) -> list:
    out = []
    eye = np.eye(d, dtype=np.complex128)
    for j in range(d):
        out.append(eye[j])
        out.append(1j * eye[j])
    for j in range(d):
        for k in range(j + 1, d):
            out.append(eye[j] + eye[k])
            out.append(eye[j] - eye[k])
            out.append(eye[j] + 1j * eye[k])
            out.append(eye[j] - 1j * eye[k])
    return out


def operator_system_check(space: ConcreteOpSpace, u=None, closure=None,
                          t_grid=None, tol: float = HERMIT_TOL) -> CertificateReport:
    """Do the u-hermitians span the whole space?"""
    uc = _resolve(space, u)
    ds = delta_span(space, uc, closure=closure, t_grid=t_grid, tol=tol)
    spanning = ds.complex_dim == space.dim
    if spanning:
        verdict = PASS
    elif ds.route == "ambient":
        verdict = FAIL
    else:
        # screening can miss hermitians, so a short span is not a disproof
        verdict = INCONCLUSIVE
    return CertificateReport(
        name="operator-system", verdict=verdict,
        margin=float(ds.complex_dim - space.dim),
        witness=None,
        diagnostics={"real_dim": ds.real_dim, "complex_dim": ds.complex_dim,
                     "space_dim": space.dim, "route": ds.route})
