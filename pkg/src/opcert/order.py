"""Ordered-space checks: finitely generated cones, norm-order units, and
agreement between a designated cone and the cone of u-positives.

A cone here is the set of nonnegative real combinations of finitely many
generators. Membership distance is a nonnegative least squares problem in
the Frobenius coordinates. The reverse inclusion (every u-positive lies in
the cone) is sampled: u-positive directions are drawn by shifting random
hermitian combinations until the ambient representative is positive
semidefinite, so a reported pass covers the sampled directions only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .errors import InvalidInputError
from .hermit import delta_span, is_u_positive
from .matcore import adjoint, herm_eigen
from .opspace import ConcreteOpSpace
from .report import FAIL, PASS, CertificateReport

CONE_TOL = 1e-6
PSD_TOL = 1e-8


@dataclass
class Cone:
    space: ConcreteOpSpace
    generators: np.ndarray   # (G, d) coefficient vectors

    def __post_init__(self):
        gens = np.atleast_2d(np.asarray(self.generators, dtype=np.complex128))
        if gens.size and gens.shape[1] != self.space.dim:
            raise InvalidInputError("generator length does not match space dim")
        for i, g in enumerate(gens):
            if np.linalg.norm(g) < 1e-12:
                raise InvalidInputError(f"generator {i} is zero")
        self.generators = gens


def _frob_vec(space: ConcreteOpSpace, coeffs: np.ndarray) -> np.ndarray:
    if space.diagonal:
        v = space.point_values(coeffs)
    else:
        v = space.embed(coeffs).reshape(-1)
    return np.concatenate([np.real(v), np.imag(v)])


def cone_membership(cone: Cone, x) -> tuple[float, np.ndarray]:
    """Frobenius distance from x to the cone and the optimal weights."""
    xc = cone.space.as_coeffs(x)
    b = _frob_vec(cone.space, xc)
    if cone.generators.shape[0] == 0:
        return float(np.linalg.norm(b)), np.zeros(0)
    a = np.stack([_frob_vec(cone.space, g) for g in cone.generators], axis=1)
    weights, resid = nnls(a, b)
    return float(resid), weights


def norm_order_unit_check(cone: Cone, u=None, hermitian_basis=None,
                          n_samples: int = 50, seed: int = 7,
                          tol: float = CONE_TOL) -> CertificateReport:
    """Is |x| u - x in the cone for hermitian x (sampled combinations)?"""
    space = cone.space
    uc = space.unit_coeffs() if u is None else space.as_coeffs(u)
    u_res, _ = cone_membership(cone, uc)
    if u_res > tol * max(1.0, float(np.linalg.norm(_frob_vec(space, uc)))):
        return CertificateReport(
            name="norm-order-unit", verdict=FAIL, margin=-u_res,
            witness={"element": uc, "reason": "unit outside cone"},
            diagnostics={"unit_residual": u_res})
    if hermitian_basis is None:
        hermitian_basis = delta_span(space, uc).real_basis
    hb = np.atleast_2d(np.asarray(hermitian_basis, dtype=np.complex128))
    samples = [row for row in hb]
    rng = np.random.default_rng([seed, 41])
    for _ in range(n_samples):
        r = rng.standard_normal(hb.shape[0])
        samples.append(r @ hb)
    worst = -1.0
    witness = None
    for xc in samples:
        g = space.norm(xc) * uc - xc
        res, _ = cone_membership(cone, g)
        rel = res / max(1.0, float(np.linalg.norm(_frob_vec(space, g))))
        if rel > worst:
            worst, witness = rel, xc
    ok = worst <= tol
    return CertificateReport(
        name="norm-order-unit", verdict=PASS if ok else FAIL,
        margin=tol - worst, witness={"element": witness},
        diagnostics={"worst_residual": worst, "samples": len(samples)})


def _ambient_psd_residual(space: ConcreteOpSpace, uc, xc) -> float:
    """How far adjoint(u) x is from positive semidefinite (0 when psd)."""
    if space.diagonal:
        a = np.conj(space.point_values(uc)) * space.point_values(xc)
        herm = float(np.max(np.abs(np.imag(a))))
        neg = float(max(0.0, -np.min(np.real(a))))
        return max(herm, neg)
    a = adjoint(space.embed(uc)) @ space.embed(xc)
    herm = float(np.linalg.norm(a - adjoint(a)))
    if herm > PSD_TOL * max(1.0, float(np.linalg.norm(a))):
        return herm
    eigs = herm_eigen(0.5 * (a + adjoint(a)))
    return float(max(0.0, -eigs[0]))


def cone_equals_delta_plus(cone: Cone, u=None, closure=None,
                           n_samples: int = 200, seed: int = 7,
                           tol: float = CONE_TOL) -> CertificateReport:
    """Two-sided comparison of the cone with the u-positives.

    Forward: every generator must be u-positive (ambient psd oracle when an
    envelope-exact closure is supplied, intrinsic criteria otherwise).
    Reverse: sampled u-positive directions must have small cone residual.
    """
    space = cone.space
    uc = space.unit_coeffs() if u is None else space.as_coeffs(u)
    ambient = closure is not None and closure.envelope_exact
    fwd_worst = 0.0
    fwd_witness = None
    for g in cone.generators:
        if ambient:
            r = _ambient_psd_residual(space, uc, g)
        else:
            rep = is_u_positive(space, uc, g)
            r = 0.0 if rep.passed else max(PSD_TOL * 10, -rep.margin)
        if r > fwd_worst:
            fwd_worst, fwd_witness = r, g
    forward_ok = fwd_worst <= PSD_TOL * 10
    hb = delta_span(space, uc, closure=closure).real_basis
    rng = np.random.default_rng([seed, 42])
    rev_worst = -1.0
    rev_witness = None
    for _ in range(n_samples):
        r = rng.standard_normal(hb.shape[0])
        h = r @ hb
        n = space.norm(h)
        if n < 1e-12:
            continue
        h = h / n
        if ambient:
            if space.diagonal:
                a = np.real(np.conj(space.point_values(uc))
                            * space.point_values(h))
                lam = float(max(0.0, -np.min(a)))
            else:
                amat = adjoint(space.embed(uc)) @ space.embed(h)
                lam = float(max(0.0, -herm_eigen(0.5 * (amat + adjoint(amat)))[0]))
        else:
            lam = 1.0  # |h| = 1, so h + u is u-positive by the shift criterion
        xc = h + lam * uc
        res, _ = cone_membership(cone, xc)
        rel = res / max(1.0, float(np.linalg.norm(_frob_vec(space, xc))))
        if rel > rev_worst:
            rev_worst, rev_witness = rel, xc
    reverse_ok = rev_worst <= tol
    ok = forward_ok and reverse_ok
    return CertificateReport(
        name="cone-equals-positives", verdict=PASS if ok else FAIL,
        margin=min(PSD_TOL * 10 - fwd_worst, tol - rev_worst),
        witness={"generator": fwd_witness} if not forward_ok
        else {"element": rev_witness},
        diagnostics={"forward_residual": fwd_worst,
                     "reverse_residual": max(rev_worst, 0.0),
                     "forward_ok": bool(forward_ok),
                     "reverse_ok": bool(reverse_ok),
                     "samples": n_samples})
