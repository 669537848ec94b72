import numpy as np
import pytest

from opcert.funcspace import catalog_closure, catalog_space
from opcert.hermit import delta_span, is_u_hermitian, is_u_positive, operator_system_check
from opcert.matcore import herm_eigen
from opcert.opspace import make_space

E11 = np.array([[1, 0], [0, 0]], dtype=np.complex128)


def random_hermitian_coeffs(rng, scale=1.0):
    """Coefficients of a random hermitian in the {I, E12, E21, E22} basis."""
    a, d = rng.standard_normal(2)
    b = complex(rng.standard_normal(), rng.standard_normal())
    mat = np.array([[a, b], [np.conj(b), a + d]])
    space = catalog_space("m2-full")
    coeffs, res = space.membership(mat)
    assert res <= 1e-10
    norm = space.norm(coeffs)
    return coeffs * (scale / norm), mat * (scale / norm)


def test_hermitian_contractions_pass():
    space = catalog_space("m2-full")
    rng = np.random.default_rng(11)
    for _ in range(8):
        coeffs, _ = random_hermitian_coeffs(rng, scale=rng.uniform(0.1, 1.0))
        prof = is_u_hermitian(space, None, coeffs)
        assert prof.passed
        assert np.max(np.abs(prof.scalar_slack)) <= 1e-8
        assert prof.matricial_slack.min() >= -1e-8
        assert not prof.scaled


def test_skew_element_fails():
    space = catalog_space("m2-full")
    prof = is_u_hermitian(space, None, [1j, 0, 0, -1j])   # i E11
    assert not prof.passed
    assert prof.min_slack < -1e-3


def test_large_element_scaled_for_matricial_branch():
    space = catalog_space("m2-full")
    prof = is_u_hermitian(space, None, [0, 2.0, 2.0, 0])
    assert prof.scaled
    assert prof.element_norm == pytest.approx(2.0, abs=1e-9)
    assert prof.passed


def test_positive_matches_eigenvalue_oracle():
    space = catalog_space("m2-full")
    rng = np.random.default_rng(12)
    checked = 0
    while checked < 10:
        coeffs, mat = random_hermitian_coeffs(rng, scale=rng.uniform(0.3, 1.0))
        eigs = herm_eigen(mat)[0]
        if abs(eigs.min()) < 1e-3:
            continue   # too close to the verdict fence
        rep = is_u_positive(space, None, coeffs)
        assert rep.passed == (eigs.min() > 0)
        assert rep.diagnostics["ball_criterion_pass"] == (eigs.min() > 0)
        checked += 1


def test_negative_element_rejected():
    space = catalog_space("m2-full")
    rep = is_u_positive(space, None, [-1.0, 0, 0, 1.0])   # -E11
    assert rep.verdict == "fail"


def test_delta_span_routes_differ_in_caution():
    space = catalog_space("m2-full")
    closure = catalog_closure("m2-full")

    certified = delta_span(space, None, closure=closure)
    assert certified.route == "ambient"
    assert certified.real_dim == 4
    assert certified.complex_dim == 4
    with_closure = operator_system_check(space, None, closure=closure)
    assert with_closure.passed

    screened = delta_span(space, None)
    assert screened.route == "numerical"
    assert screened.complex_dim <= 4
    bare = operator_system_check(space, None)
    # candidate screening may under-count, so it must never claim failure
    assert bare.verdict in ("pass", "inconclusive")
    if screened.complex_dim < 4:
        assert bare.verdict == "inconclusive"


def test_upper_triangular_fails_with_certificate():
    space = catalog_space("m2-upper")
    closure = catalog_closure("m2-upper")
    rep = operator_system_check(space, None, closure=closure)
    assert rep.verdict == "fail"
    assert rep.diagnostics["route"] == "ambient"
    assert rep.diagnostics["complex_dim"] == 1
    assert rep.margin == -1.0


def test_real_combinations_stay_hermitian():
    space = catalog_space("m2-full")
    closure = catalog_closure("m2-full")
    ds = delta_span(space, None, closure=closure)
    rng = np.random.default_rng(13)
    for _ in range(5):
        w = rng.standard_normal(ds.real_dim)
        combo = w @ ds.real_basis
        combo = combo / max(space.norm(combo), 1e-12)
        assert is_u_hermitian(space, None, combo).passed


def test_corner_compression_preserves_hermiticity():
    # x -> x_11 E11 is unital and contractive onto the corner span
    corner = make_space([E11], unit=[1.0])
    rng = np.random.default_rng(14)
    for _ in range(5):
        _, mat = random_hermitian_coeffs(rng, scale=rng.uniform(0.2, 1.0))
        prof = is_u_hermitian(corner, None, [mat[0, 0]])
        assert prof.passed
