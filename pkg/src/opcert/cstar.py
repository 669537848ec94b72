"""C*-structure detection and forgotten-product reconstruction.

The multiplication is recaptured through unitaries: for a unitary v and a
ball element y, the z in Ball(X) minimizing |[[t u, y], [z, t v]]| converges
to -(v adjoint(y) u) as t grows, with error at most 1/t + 1/t^2. Products
of arbitrary elements follow by writing the left factor over a spanning set
of unitaries (collected by averaging hermitians into pairs of unitaries)
and extending linearly. The detection verdict combines operator-system
detection, the unitary spanning check, and closure of recovered products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import grid_value_and_grad, two_by_two
from .errors import InvalidInputError, PreconditionError
from .hermit import delta_span, is_u_hermitian
from .matcore import adjoint, psd_sqrt
from .opspace import ConcreteOpSpace, Element
from .report import FAIL, PASS, CertificateReport
from .solver import SolverConfig, minimize_over_ball
from .sysdetect import detect_operator_system, find_partner, involution_error_bound

DEDUPE_TOL = 1e-6


class _ProductProblem:
    """Block norm |[[t u, y], [z, t v]]| as a function of one variable block."""

    def __init__(self, space, uc, vc, fixed, slot, t):
        self.space = space
        self.uc = uc
        self.vc = vc
        self.fixed = fixed
        self.slot = slot          # (0,1) variable y, (1,0) variable z
        self.t = t
        self.dim = space.dim

    def _grid(self, c):
        y = self.fixed if self.slot == (1, 0) else c
        z = c if self.slot == (1, 0) else self.fixed
        return two_by_two(self.space, self.t * self.uc, y, z, self.t * self.vc)

    def norm(self, c):
        return self.space.norm(c)

    def value(self, c):
        return self.space.grid_norm(self._grid(c))

    def value_and_grad(self, c):
        val, grad, smooth = grid_value_and_grad(self.space, self._grid(c))
        i, j = self.slot
        return val, grad[i, j, :], smooth


@dataclass
class RecoveredProduct:
    element: Element              # the candidate product (-z, or -y for the left variant)
    escaped: bool
    achieved: float               # block norm at the minimizer
    target: float                 # sqrt(t^2 + |given|^2), attained iff the product stays in X
    bound: float                  # guaranteed ambient error 1/t + 1/t^2 when not escaped
    ambient_truth: np.ndarray | None
    ambient_residual: float | None
    converged: bool
    diagnostics: dict


def _solve_product(space, uc, vc, given, slot, t, config, closure,
                   warm_start=False):
    config = config or SolverConfig()
    if t <= 0:
        raise InvalidInputError("t must be positive")
    ng = space.norm(given)
    if ng > 1.0 + 1e-9:
        raise InvalidInputError("given factor must lie in the unit ball")
    problem = _ProductProblem(space, uc, vc, given, slot, t)
    target = float(np.sqrt(t * t + ng * ng))
    umat, vmat = space.embed(uc), space.embed(vc)
    gmat = space.embed(given)
    if slot == (1, 0):
        truth = vmat @ adjoint(gmat) @ umat
    else:
        truth = umat @ adjoint(gmat) @ vmat
    proj, proj_res = space.membership(truth)
    extras = []
    if warm_start and proj_res <= space.membership_tol * \
            max(1.0, float(np.linalg.norm(truth))):
        # warm start at the projected ambient product; the block norm is
        # still evaluated from scratch, so this cannot fake feasibility
        extras.append(-proj)
    res = minimize_over_ball(problem, config, target=target,
                             stop_at_target=True, starts=6,
                             extra_starts=extras, seed_salt=(31, slot[0]))
    candidate = -res.coeffs
    escaped = res.value >= target + config.fail_tol
    amb_res = None
    if closure is not None and closure.envelope_exact:
        amb_res = proj_res / max(1.0, float(np.linalg.norm(truth)))
        escaped = amb_res > space.membership_tol
    slack = max(0.0, float(res.value) - target)
    return RecoveredProduct(
        element=space.element(candidate), escaped=bool(escaped),
        achieved=float(res.value), target=target,
        bound=involution_error_bound(t) + 2 * slack + 2 * config.eps_stop,
        ambient_truth=truth, ambient_residual=amb_res,
        converged=res.converged,
        diagnostics={"iterations": res.iterations, "fd_calls": res.fd_calls,
                     "reached_target": res.reached_target})


def recover_product(space: ConcreteOpSpace, u, v, y, t: float = 100.0,
                    config: SolverConfig | None = None,
                    closure=None, warm_start: bool = False) -> RecoveredProduct:
    """Candidate for v adjoint(y) u recovered from the block norm alone.

    v must act as a ternary unitary (a coisometry suffices for this
    direction). When the true product lies inside X the candidate is within
    1/t + 1/t^2 of it; when it does not, the minimum stays strictly above
    the target and the result is flagged escaped. Cold starts by default so
    the achieved error scales with 1/t instead of echoing the ambient
    product back.
    """
    uc, vc, yc = space.as_coeffs(u), space.as_coeffs(v), space.as_coeffs(y)
    return _solve_product(space, uc, vc, yc, (1, 0), t, config, closure,
                          warm_start=warm_start)


def recover_product_left(space: ConcreteOpSpace, u, v, z, t: float = 100.0,
                         config: SolverConfig | None = None,
                         closure=None, warm_start: bool = False) -> RecoveredProduct:
    """Left-variant recovery: the y with z = -(v adjoint(y) u), i.e. a
    candidate for u adjoint(z) v. Requires v to act as an isometry."""
    uc, vc, zc = space.as_coeffs(u), space.as_coeffs(v), space.as_coeffs(z)
    return _solve_product(space, uc, vc, zc, (0, 1), t, config, closure,
                          warm_start=warm_start)


@dataclass
class HermitianSplit:
    v1_coeffs: np.ndarray
    v2_coeffs: np.ndarray
    v1_residual: float
    v2_residual: float
    v1_unitary: bool
    v2_unitary: bool
    passed: bool


def hermitian_to_unitaries(space: ConcreteOpSpace, u, x,
                           closure) -> HermitianSplit:
    """Write a hermitian contraction as the average of two unitaries.

    Constructs v1 = x + i u sqrt(1 - a^2) with a = adjoint(u) x in the
    unitalized picture, and v2 = 2x - v1. Both are returned with their
    membership residuals; passed means both are members certified as
    ternary unitaries.
    """
    if closure is None or not closure.envelope_exact:
        raise PreconditionError("an envelope-exact closure is required")
    from .tro import ambient_unitary_check
    uc = space.as_coeffs(u)
    xc = space.as_coeffs(x)
    if space.norm(xc) > 1.0 + 1e-9:
        raise InvalidInputError("x must lie in the unit ball")
    if not is_u_hermitian(space, uc, xc).passed:
        raise PreconditionError("x is not hermitian for this unit")
    if space.diagonal:
        uv = space.point_values(uc)
        xv = space.point_values(xc)
        a = np.conj(uv) * xv
        if np.max(np.abs(np.imag(a))) > 1e-8:
            raise PreconditionError("x is not hermitian for this unit")
        s = np.sqrt(np.clip(1.0 - np.real(a) ** 2, 0.0, None))
        v1_rep = xv + 1j * uv * s
        v2_rep = 2.0 * xv - v1_rep
        c1, r1 = space.membership_points(v1_rep)
        c2, r2 = space.membership_points(v2_rep)
        scale1 = max(1.0, float(np.linalg.norm(v1_rep)))
        scale2 = max(1.0, float(np.linalg.norm(v2_rep)))
    else:
        umat = space.embed(uc)
        xmat = space.embed(xc)
        a = adjoint(umat) @ xmat
        if np.linalg.norm(a - adjoint(a)) > 1e-8 * max(1.0, np.linalg.norm(a)):
            raise PreconditionError("x is not hermitian for this unit")
        a = 0.5 * (a + adjoint(a))
        eye = np.eye(a.shape[0], dtype=np.complex128)
        s = psd_sqrt(eye - a @ a)
        v1_rep = xmat + 1j * (umat @ s)
        v2_rep = 2.0 * xmat - v1_rep
        c1, r1 = space.membership(v1_rep)
        c2, r2 = space.membership(v2_rep)
        scale1 = max(1.0, float(np.linalg.norm(v1_rep)))
        scale2 = max(1.0, float(np.linalg.norm(v2_rep)))
    tol = space.membership_tol
    m1 = r1 / scale1 <= tol
    m2 = r2 / scale2 <= tol
    u1 = m1 and ambient_unitary_check(closure, c1).passed
    u2 = m2 and ambient_unitary_check(closure, c2).passed
    return HermitianSplit(v1_coeffs=c1, v2_coeffs=c2,
                          v1_residual=r1 / scale1, v2_residual=r2 / scale2,
                          v1_unitary=u1, v2_unitary=u2,
                          passed=m1 and m2 and u1 and u2)


def collect_unitaries(space: ConcreteOpSpace, u, closure) -> np.ndarray:
    """u plus both averaging partners of each hermitian basis direction,
    deduplicated; rows are coefficient vectors of certified members."""
    uc = space.as_coeffs(u)
    ds = delta_span(space, uc, closure=closure)
    collected = [uc]
    for h in ds.real_basis:
        hc = h / max(1.0, space.norm(h))
        split = hermitian_to_unitaries(space, uc, hc, closure)
        if split.v1_unitary:
            collected.append(split.v1_coeffs)
        if split.v2_unitary:
            collected.append(split.v2_coeffs)
    out = []
    for c in collected:
        if all(np.linalg.norm(c - o) > DEDUPE_TOL for o in out):
            out.append(c)
    return np.stack(out)


def unitary_span_check(space: ConcreteOpSpace, u=None,
                       closure=None) -> CertificateReport:
    """Do the collected unitaries (with i-multiples) span the space?"""
    uc = space.unit_coeffs() if u is None else space.as_coeffs(u)
    unitaries = collect_unitaries(space, uc, closure)
    with_i = np.vstack([unitaries, 1j * unitaries])
    s = np.linalg.svd(with_i, compute_uv=False)
    rank = int(np.sum(s > 1e-9 * s[0])) if s.size and s[0] > 0 else 0
    ok = rank == space.dim
    return CertificateReport(
        name="unitary-span", verdict=PASS if ok else FAIL,
        margin=float(rank - space.dim),
        witness={"unitary_coeffs": unitaries},
        diagnostics={"collected": int(unitaries.shape[0]),
                     "span_dim": rank, "space_dim": space.dim})


@dataclass
class ProductTable:
    space: ConcreteOpSpace
    entries: np.ndarray           # (d, d, d): coeffs of basis product (i, j)
    residual_bounds: np.ndarray   # (d, d) guaranteed reconstruction error
    membership_residuals: np.ndarray | None  # ambient check when closure exact
    t_table: float
    unitary_coeffs: np.ndarray
    alpha: np.ndarray             # (d, K): basis over unitaries

    def multiply(self, a, b) -> Element:
        ac = self.space.as_coeffs(a)
        bc = self.space.as_coeffs(b)
        return self.space.element(
            np.einsum("i,j,ijk->k", ac, bc, self.entries))


def _assemble_table(space, uc, unitaries, t_table, config, closure):
    d = space.dim
    k = unitaries.shape[0]
    alpha, *_ = np.linalg.lstsq(unitaries.T, np.eye(d, dtype=np.complex128),
                                rcond=None)
    alpha = alpha.T                       # rows: basis element over unitaries
    iota = np.zeros((d, d), dtype=np.complex128)
    scales = np.zeros(d)
    iota_err = np.zeros(d)
    per_call = involution_error_bound(t_table) + 2 * config.eps_stop
    for j in range(d):
        e = np.zeros(d, dtype=np.complex128)
        e[j] = 1.0
        s = max(1.0, space.norm(e))
        scales[j] = s
        r = find_partner(space, uc, e / s, t_grid=(t_table,), config=config)
        if r.residual >= config.fail_tol:
            raise PreconditionError("involution unavailable for a basis element")
        iota[j] = -r.y_coeffs
        iota_err[j] = per_call + 2 * r.residual
    prods = np.zeros((k, d, d), dtype=np.complex128)
    call_bound = np.zeros((k, d))
    for ki in range(k):
        for j in range(d):
            ic = iota[j]
            n = space.norm(ic)
            rescale = max(n, 1.0)
            rp = _solve_product(space, uc, unitaries[ki], ic / rescale,
                                (1, 0), t_table, config, closure,
                                warm_start=True)
            prods[ki, j] = rp.element.coeffs * rescale * scales[j]
            call_bound[ki, j] = rp.bound + iota_err[j]
    entries = np.einsum("ik,kjm->ijm", alpha, prods)
    bounds = np.einsum("ik,kj->ij", np.abs(alpha), call_bound) * scales[None, :]
    memb = None
    if closure is not None and closure.envelope_exact:
        memb = np.zeros((d, d))
        umat = space.embed(uc)
        for i in range(d):
            for j in range(d):
                ei = np.zeros(d, dtype=np.complex128)
                ej = np.zeros(d, dtype=np.complex128)
                ei[i] = 1.0
                ej[j] = 1.0
                truth = space.embed(ei) @ adjoint(umat) @ space.embed(ej)
                _, res = space.membership(truth)
                memb[i, j] = res / max(1.0, float(np.linalg.norm(truth)))
    return ProductTable(space=space, entries=entries, residual_bounds=bounds,
                        membership_residuals=memb, t_table=t_table,
                        unitary_coeffs=unitaries, alpha=alpha)


def detect_cstar(space: ConcreteOpSpace, u=None,
                 config: SolverConfig | None = None, closure=None,
                 t: float = 100.0, table_t: float = 1e5):
    """Full C*-structure detection; returns (report, table-or-None)."""
    config = config or SolverConfig()
    uc = space.unit_coeffs() if u is None else space.as_coeffs(u)
    sys_rep = detect_operator_system(space, uc, config=config, closure=closure)
    diag = {"system_verdict": sys_rep.verdict}
    if not sys_rep.passed:
        return CertificateReport(
            name="cstar", verdict=sys_rep.verdict, margin=sys_rep.margin,
            witness={"stage": "operator-system"}, diagnostics=diag), None
    span_rep = unitary_span_check(space, uc, closure=closure)
    diag["span_verdict"] = span_rep.verdict
    diag["span_dim"] = span_rep.diagnostics["span_dim"]
    if not span_rep.passed:
        return CertificateReport(
            name="cstar", verdict=FAIL, margin=span_rep.margin,
            witness={"stage": "unitary-span"}, diagnostics=diag), None
    unitaries = span_rep.witness["unitary_coeffs"]
    d = space.dim
    worst_escape = 0.0
    for ki in range(unitaries.shape[0]):
        for j in range(d):
            e = np.zeros(d, dtype=np.complex128)
            e[j] = 1.0
            e = e / max(1.0, space.norm(e))
            rp = recover_product(space, uc, unitaries[ki], e, t=t,
                                 config=config, closure=closure,
                                 warm_start=True)
            gap = rp.achieved - rp.target
            if rp.ambient_residual is not None:
                gap = rp.ambient_residual
            worst_escape = max(worst_escape, gap)
            if rp.escaped:
                diag["escape_gap"] = gap
                return CertificateReport(
                    name="cstar", verdict=FAIL, margin=-gap,
                    witness={"stage": "product-closure",
                             "unitary_index": ki, "basis_index": j},
                    diagnostics=diag), None
    diag["worst_escape_gap"] = worst_escape
    table = _assemble_table(space, uc, unitaries, table_t, config, closure)
    diag["table_bound"] = float(table.residual_bounds.max())
    unit_err = 0.0
    for j in range(d):
        e = np.zeros(d, dtype=np.complex128)
        e[j] = 1.0
        left = table.multiply(uc, e)
        right = table.multiply(e, uc)
        unit_err = max(unit_err,
                       space.norm(left.coeffs - e), space.norm(right.coeffs - e))
    diag["unit_law_error"] = unit_err
    return CertificateReport(
        name="cstar", verdict=PASS, margin=config.cert_tol,
        witness=None, diagnostics=diag), table
