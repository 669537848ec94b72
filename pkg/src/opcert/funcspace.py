"""Function-space certificates on sampled domains.

A sampled function space stores d basis functions by their values at m
domain points; the norm is the max of pointwise absolute values. Scalar
criteria here are cheaper than the matrix-level ones and, for the checks
below, equivalent at level one: a norm-one g acts like a unitary iff
sup over the unit sphere of |s f + t g| equals sqrt(2) for every norm-one
f in the space, and g-hermitian elements solve a pointwise real-linear
system instead of a matrix feasibility problem.

Sampling error scales like 1/m for Lipschitz data, so verdict tolerances
default to 10/m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidInputError, PreconditionError
from .matcore import real_kernel
from .opspace import ConcreteOpSpace, make_space, space_from_points
from .report import FAIL, PASS, CertificateReport

GRAM_MIN_EIG = 1e-10
UNIMODULAR_TOL = 1e-9


@dataclass
class SampledFunctionSpace:
    point_basis: np.ndarray        # (d, m) basis function values
    unit: np.ndarray | None = None  # (d,) coefficients or None

    def __post_init__(self):
        pb = np.asarray(self.point_basis, dtype=np.complex128)
        if pb.ndim != 2 or pb.shape[0] == 0:
            raise InvalidInputError("point_basis must be a (d, m) array")
        gram = pb @ np.conj(pb.T)
        eigs = np.linalg.eigvalsh(gram)
        if eigs[0] <= GRAM_MIN_EIG * max(1.0, eigs[-1]):
            raise InvalidInputError("basis functions are linearly dependent")
        self.point_basis = pb
        if self.unit is not None:
            uc = np.asarray(self.unit, dtype=np.complex128).reshape(-1)
            if uc.shape[0] != pb.shape[0]:
                raise InvalidInputError("unit length does not match basis")
            self.unit = uc

    @property
    def dim(self) -> int:
        return self.point_basis.shape[0]

    @property
    def m(self) -> int:
        return self.point_basis.shape[1]

    def as_coeffs(self, x) -> np.ndarray:
        c = np.asarray(x, dtype=np.complex128).reshape(-1)
        if c.shape[0] != self.dim:
            raise InvalidInputError("coefficient length does not match basis")
        return c

    def unit_coeffs(self) -> np.ndarray:
        if self.unit is None:
            raise InvalidInputError("space has no designated unit")
        return self.unit

    def values(self, coeffs) -> np.ndarray:
        return self.as_coeffs(coeffs) @ self.point_basis

    def norm(self, coeffs) -> float:
        return float(np.max(np.abs(self.values(coeffs))))

    def membership_values(self, vals) -> tuple[np.ndarray, float]:
        v = np.asarray(vals, dtype=np.complex128).reshape(-1)
        if v.shape[0] != self.m:
            raise InvalidInputError("value vector length does not match points")
        coeffs, *_ = np.linalg.lstsq(self.point_basis.T, v, rcond=None)
        resid = float(np.linalg.norm(coeffs @ self.point_basis - v))
        return coeffs, resid


def min_opspace(fspace: SampledFunctionSpace) -> ConcreteOpSpace:
    """Diagonal operator-space model: functions act by multiplication."""
    return space_from_points(fspace.point_basis, unit=fspace.unit)


def default_tol(fspace: SampledFunctionSpace) -> float:
    return 10.0 / fspace.m


def _sphere_sup(fv: np.ndarray, gv: np.ndarray,
                n_phi: int = 61, n_psi: int = 120,
                zoom_rounds: int = 3, zoom_pts: int = 11) -> float:
    """sup over s^2 + t^2 = 1 (complex t) of max_w |s f(w) + t g(w)|.

    Phase reduction: s = cos(phi) >= 0 and t = exp(i psi) sin(phi) lose no
    generality since a global phase does not change the modulus.
    """
    def grid_max(phis, psis):
        best, arg = -1.0, (0.0, 0.0)
        ct = np.exp(1j * psis)
        for phi in phis:
            vals = np.cos(phi) * fv[None, :] + \
                (np.sin(phi) * ct)[:, None] * gv[None, :]
            row = np.max(np.abs(vals), axis=1)
            j = int(np.argmax(row))
            if row[j] > best:
                best, arg = float(row[j]), (float(phi), float(psis[j]))
        return best, arg

    phis = np.linspace(0.0, np.pi / 2, n_phi)
    psis = np.linspace(0.0, 2 * np.pi, n_psi, endpoint=False)
    best, (p0, q0) = grid_max(phis, psis)
    dp, dq = np.pi / 2 / (n_phi - 1), 2 * np.pi / n_psi
    for _ in range(zoom_rounds):
        phis = np.clip(np.linspace(p0 - dp, p0 + dp, zoom_pts), 0, np.pi / 2)
        psis = np.linspace(q0 - dq, q0 + dq, zoom_pts)
        cand, (p0, q0) = grid_max(phis, psis)
        best = max(best, cand)
        dp, dq = 2 * dp / (zoom_pts - 1), 2 * dq / (zoom_pts - 1)
    return best


def scalar_unitary_check(fspace: SampledFunctionSpace, g=None,
                         samples: int = 5, seed: int = 7,
                         tol: float | None = None) -> CertificateReport:
    """Does g pair with every norm-one f at the extreme two-term norm?

    The sup never exceeds sqrt(2) for norm-one f and g, so the deficit
    sqrt(2) - sup is the per-sample score; the check passes when the worst
    deficit stays within tol (default 10/m).
    """
    if tol is None:
        tol = default_tol(fspace)
    gc = fspace.unit_coeffs() if g is None else fspace.as_coeffs(g)
    gn = fspace.norm(gc)
    if gn < 1e-12:
        raise InvalidInputError("g must be nonzero")
    gv = fspace.values(gc) / gn
    sample_coeffs = []
    for j in range(fspace.dim):
        e = np.zeros(fspace.dim, dtype=np.complex128)
        e[j] = 1.0
        sample_coeffs.append(e)
    rng = np.random.default_rng([seed, 51])
    for _ in range(samples):
        c = rng.standard_normal(fspace.dim) + 1j * rng.standard_normal(fspace.dim)
        sample_coeffs.append(c)
    worst, witness, sups = -1.0, None, []
    for c in sample_coeffs:
        n = fspace.norm(c)
        if n < 1e-12:
            continue
        fv = fspace.values(c) / n
        sup = _sphere_sup(fv, gv)
        deficit = np.sqrt(2.0) - sup
        sups.append(sup)
        if deficit > worst:
            worst, witness = deficit, c / n
    ok = worst <= tol
    return CertificateReport(
        name="function-unitary", verdict=PASS if ok else FAIL,
        margin=tol - worst, witness={"f_coeffs": witness},
        diagnostics={"worst_deficit": worst, "sups": np.asarray(sups),
                     "tol": tol, "g_norm": gn})


@dataclass
class GHermitianResult:
    real_basis: np.ndarray    # (r, d) real coefficient combinations
    real_dim: int
    complex_dim: int
    is_function_system: bool


def g_hermitian_solve(fspace: SampledFunctionSpace, g=None,
                      tol: float = 1e-9) -> GHermitianResult:
    """Exact pointwise solve for {x : conj(g) x is real at every point}.

    Requires |g| = 1 pointwise; for unimodular g the hermitian condition
    at level one reduces to Im(conj(g(w)) x(w)) = 0 for all w.
    """
    gc = fspace.unit_coeffs() if g is None else fspace.as_coeffs(g)
    gv = fspace.values(gc)
    if np.max(np.abs(np.abs(gv) - 1.0)) > tol:
        raise PreconditionError("g is not unimodular on the sample points")
    d = fspace.dim
    cols = np.empty((2 * d, fspace.m), dtype=np.complex128)
    for k in range(d):
        pb = fspace.point_basis[k]
        cols[k] = np.conj(gv) * pb - np.conj(pb) * gv
        cols[d + k] = 1j * (np.conj(gv) * pb + np.conj(pb) * gv)
    kern = real_kernel(cols)
    herms = kern[:, :d] + 1j * kern[:, d:]
    if herms.shape[0]:
        _, s, vt = np.linalg.svd(np.vstack([herms, 1j * herms]))
        cdim = int(np.sum(s > 1e-9 * s[0]))
    else:
        cdim = 0
    return GHermitianResult(real_basis=herms, real_dim=herms.shape[0],
                            complex_dim=cdim,
                            is_function_system=cdim == d)


def selfadjoint_unit_check(fspace: SampledFunctionSpace, v=None,
                           tol: float = 1e-8) -> CertificateReport:
    """For conjugation-closed spaces: is v a unit making x -> v conj(x) v
    the usual conjugation, with the v-hermitians spanning?

    Preconditions (violations raise): the space is closed under pointwise
    conjugation, and v is real-valued and unimodular.
    """
    vc = fspace.unit_coeffs() if v is None else fspace.as_coeffs(v)
    vv = fspace.values(vc)
    if np.max(np.abs(np.imag(vv))) > UNIMODULAR_TOL:
        raise PreconditionError("v is not real-valued on the sample points")
    if np.max(np.abs(np.abs(vv) - 1.0)) > UNIMODULAR_TOL:
        raise PreconditionError("v is not unimodular on the sample points")
    for k in range(fspace.dim):
        _, resid = fspace.membership_values(np.conj(fspace.point_basis[k]))
        scale = max(1.0, float(np.linalg.norm(fspace.point_basis[k])))
        if resid > 1e-6 * scale:
            raise PreconditionError(
                f"space is not conjugation-closed (basis {k})")
    ghs = g_hermitian_solve(fspace, vc)
    worst = 0.0
    for k in range(fspace.dim):
        x = fspace.point_basis[k]
        dev = np.max(np.abs(vv * np.conj(x) * vv - np.conj(x)))
        worst = max(worst, float(dev) / max(1.0, float(np.max(np.abs(x)))))
    ok = ghs.is_function_system and worst <= tol
    return CertificateReport(
        name="selfadjoint-unit", verdict=PASS if ok else FAIL,
        margin=tol - worst if ghs.is_function_system else -1.0,
        witness=None,
        diagnostics={"conjugation_residual": worst,
                     "real_dim": ghs.real_dim,
                     "complex_dim": ghs.complex_dim,
                     "is_function_system": bool(ghs.is_function_system)})


@dataclass
class CatalogEntry:
    name: str
    kind: str                      # "function" or "matrix"
    params: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    aliases: tuple = ()
    builder: Callable = None

    def build(self, points: int | None = None):
        if self.kind == "function":
            return self.builder(points or self.params.get("points", 360))
        return self.builder()

    def min_space(self, points: int | None = None) -> ConcreteOpSpace:
        built = self.build(points)
        if isinstance(built, SampledFunctionSpace):
            return min_opspace(built)
        return built


def _circle_points(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


def _build_circle_1zzbar(m: int) -> SampledFunctionSpace:
    z = _circle_points(m)
    basis = np.stack([np.ones(m), z, np.conj(z)])
    return SampledFunctionSpace(basis, unit=np.array([1.0, 0, 0]))


def _build_circle_1z(m: int) -> SampledFunctionSpace:
    z = _circle_points(m)
    basis = np.stack([np.ones(m), z])
    return SampledFunctionSpace(basis, unit=np.array([1.0, 0]))


def _build_two_circles(m: int) -> SampledFunctionSpace:
    """Two disjoint circles; f = 1 + z on each copy, g flips sign between
    the copies. Basis [1, g, f, conj(f)], designated unit g."""
    z = _circle_points(m)
    one = np.ones(m)
    f = np.concatenate([one + z, one + z])
    g = np.concatenate([one, -one])
    basis = np.stack([np.concatenate([one, one]), g, f, np.conj(f)])
    return SampledFunctionSpace(basis, unit=np.array([0, 1.0, 0, 0]))


def _build_m2_full() -> ConcreteOpSpace:
    e = np.eye(2, dtype=np.complex128)
    b = np.stack([e,
                  np.array([[0, 1], [0, 0]], dtype=np.complex128),
                  np.array([[0, 0], [1, 0]], dtype=np.complex128),
                  np.array([[0, 0], [0, 1]], dtype=np.complex128)])
    return make_space(b, unit=np.array([1.0, 0, 0, 0]))


def _build_m2_upper() -> ConcreteOpSpace:
    e = np.eye(2, dtype=np.complex128)
    b = np.stack([e, np.array([[0, 1], [0, 0]], dtype=np.complex128)])
    return make_space(b, unit=np.array([1.0, 0]))


def _build_m2_sym3() -> ConcreteOpSpace:
    e = np.eye(2, dtype=np.complex128)
    b = np.stack([e,
                  np.array([[0, 1], [0, 0]], dtype=np.complex128),
                  np.array([[0, 0], [1, 0]], dtype=np.complex128)])
    return make_space(b, unit=np.array([1.0, 0, 0]))


CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        name="circle-1zzbar", kind="function",
        params={"points": 360},
        expected={"unitary": "pass", "system": "pass", "cstar": "fail"},
        aliases=("circle-1zz̄",),
        builder=_build_circle_1zzbar),
    CatalogEntry(
        name="circle-1z", kind="function",
        params={"points": 360},
        expected={"unitary": "pass", "system": "fail"},
        aliases=(),
        builder=_build_circle_1z),
    CatalogEntry(
        name="two-circles", kind="function",
        params={"points": 360, "candidate_units": ("1", "g")},
        expected={"unitary": "pass", "system": "pass",
                  "selfadjoint-unit": "pass"},
        aliases=(),
        builder=_build_two_circles),
    CatalogEntry(
        name="m2-full", kind="matrix",
        expected={"unitary": "pass", "system": "pass", "cstar": "pass"},
        aliases=(),
        builder=_build_m2_full),
    CatalogEntry(
        name="m2-upper", kind="matrix",
        expected={"unitary": "pass", "system": "fail"},
        aliases=(),
        builder=_build_m2_upper),
    CatalogEntry(
        name="m2-sym3", kind="matrix",
        expected={"unitary": "pass", "system": "pass", "cstar": "fail"},
        aliases=(),
        builder=_build_m2_sym3),
)


def catalog_names() -> list[str]:
    return [e.name for e in CATALOG]


def catalog_entry(name: str) -> CatalogEntry:
    for e in CATALOG:
        if e.name == name or name in e.aliases:
            return e
    raise InvalidInputError(f"unknown catalog entry: {name!r}")


def catalog_space(name: str, points: int | None = None):
    return catalog_entry(name).build(points)


def catalog_closure(name: str, points: int | None = None):
    """Envelope-exact ternary closure of a catalog space's operator model.

    Catalog entries are small enough that the generated closure is the
    exact envelope, so downstream ambient checks are licensed.
    """
    from .tro import generate_tro
    space = catalog_entry(name).min_space(points)
    return generate_tro(space, envelope_exact=True)
