import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from opcert.errors import InvalidInputError
from opcert.matcore import (adjoint, as_cmat, batched_spectral_norm, block2x2,
                            herm_eigen, psd_sqrt, real_kernel, spectral_norm,
                            top_singular_triple)

finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)


def cmat4():
    return st.tuples(arrays(np.float64, (4, 4), elements=finite),
                     arrays(np.float64, (4, 4), elements=finite)).map(
        lambda ab: ab[0] + 1j * ab[1])


def test_as_cmat_coerces_lists():
    m = as_cmat([[1, 2], [3, 4]])
    assert m.dtype == np.complex128
    assert m.shape == (2, 2)


def test_as_cmat_rejects_wrong_ndim():
    with pytest.raises(InvalidInputError):
        as_cmat([1, 2, 3])
    with pytest.raises(InvalidInputError):
        as_cmat(np.zeros((2, 2, 2)))


def test_adjoint_is_conjugate_transpose():
    m = np.array([[1 + 2j, 3], [0, 4 - 1j]])
    npt.assert_array_equal(adjoint(m), np.conj(m).T)


def test_spectral_norm_hand_values():
    assert spectral_norm(np.eye(3)) == pytest.approx(1.0)
    assert spectral_norm(np.diag([3.0, -7.0, 2.0])) == pytest.approx(7.0)
    # rank one: norm is the product of the factor lengths
    u = np.array([[1.0], [2.0]])
    v = np.array([[3.0, 4.0]])
    assert spectral_norm(u @ v) == pytest.approx(np.sqrt(5) * 5.0)


def test_spectral_norm_rejects_empty():
    with pytest.raises(InvalidInputError):
        spectral_norm(np.zeros((0, 3)))


@settings(max_examples=30, deadline=None)
@given(m=cmat4(), alpha=finite)
def test_spectral_norm_scalar_homogeneous(m, alpha):
    assert spectral_norm(alpha * m) == pytest.approx(
        abs(alpha) * spectral_norm(m), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(m=cmat4())
def test_spectral_norm_adjoint_invariant(m):
    assert spectral_norm(adjoint(m)) == pytest.approx(spectral_norm(m),
                                                      abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(m=cmat4())
def test_spectral_norm_cstar_identity(m):
    lhs = spectral_norm(m) ** 2
    rhs = spectral_norm(adjoint(m) @ m)
    assert lhs == pytest.approx(rhs, abs=1e-8, rel=1e-8)


def test_batched_matches_svd_on_all_shape_branches():
    rng = np.random.default_rng(7)
    for shape in [(5, 1, 4), (5, 4, 1), (5, 2, 6), (5, 6, 2), (5, 2, 2),
                  (5, 3, 3), (5, 4, 5)]:
        a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        want = np.array([np.linalg.norm(m, ord=2) for m in a])
        npt.assert_allclose(batched_spectral_norm(a), want, atol=1e-10)


def test_batched_accepts_leading_batch_axes():
    rng = np.random.default_rng(8)
    a = rng.standard_normal((3, 4, 2, 5)) + 1j * rng.standard_normal((3, 4, 2, 5))
    out = batched_spectral_norm(a)
    assert out.shape == (3, 4)
    want = np.linalg.norm(a[1, 2], ord=2)
    assert out[1, 2] == pytest.approx(want, abs=1e-10)


def test_top_singular_triple_reconstructs():
    rng = np.random.default_rng(9)
    m = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    sigma, w, v, gap = top_singular_triple(m)
    s = np.linalg.svd(m, compute_uv=False)
    assert sigma == pytest.approx(s[0])
    assert gap == pytest.approx(s[0] - s[1])
    assert np.linalg.norm(w) == pytest.approx(1.0)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    # m v = sigma w up to the SVD phase convention
    npt.assert_allclose(m @ v, sigma * w, atol=1e-10)


def test_top_singular_triple_rank_one_gap():
    m = np.array([[2.0]])
    sigma, _, _, gap = top_singular_triple(m)
    assert sigma == pytest.approx(2.0)
    assert gap == pytest.approx(2.0)


def test_block2x2_assembles():
    a = np.eye(2)
    b = np.zeros((2, 3))
    c = np.zeros((1, 2))
    d = np.ones((1, 3))
    m = block2x2(a, b, c, d)
    assert m.shape == (3, 5)
    npt.assert_array_equal(m[:2, :2], a)
    npt.assert_array_equal(m[2:, 2:], d)


def test_block2x2_zero_offdiagonal_norm_is_max():
    rng = np.random.default_rng(10)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    d = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    m = block2x2(a, np.zeros((2, 3)), np.zeros((3, 2)), d)
    assert spectral_norm(m) == pytest.approx(
        max(spectral_norm(a), spectral_norm(d)), abs=1e-12)


def test_block2x2_rejects_mismatched_blocks():
    with pytest.raises(InvalidInputError):
        block2x2(np.eye(2), np.zeros((3, 2)), np.zeros((2, 2)), np.eye(2))
    with pytest.raises(InvalidInputError):
        block2x2(np.eye(2), np.zeros((2, 2)), np.zeros((2, 3)), np.eye(2))


def test_herm_eigen_ascending_and_rejects():
    w = herm_eigen(np.diag([3.0, -1.0, 2.0]))
    npt.assert_allclose(w, [-1.0, 2.0, 3.0])
    with pytest.raises(InvalidInputError):
        herm_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        herm_eigen(np.zeros((2, 3)))


def test_psd_sqrt_hand_values():
    npt.assert_allclose(psd_sqrt(np.eye(3)), np.eye(3), atol=1e-12)
    npt.assert_allclose(psd_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]),
                        atol=1e-12)
    v = np.array([1.0, 1j]) / np.sqrt(2)
    proj = np.outer(v, np.conj(v))
    npt.assert_allclose(psd_sqrt(proj), proj, atol=1e-10)


def test_psd_sqrt_square_reproduces():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    m = a @ adjoint(a)
    r = psd_sqrt(m)
    npt.assert_allclose(r @ r, m, atol=1e-9)
    npt.assert_allclose(r, adjoint(r), atol=1e-10)


def test_psd_sqrt_rejects_negative_eigenvalue():
    with pytest.raises(InvalidInputError):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_real_kernel_known_kernel():
    # columns c0 = [1], c1 = [i]: r0*1 + r1*i = 0 over the reals only at 0
    cols = np.array([[1.0], [1j]])
    k = real_kernel(cols)
    assert k.shape == (0, 2)
    # c0 = [1], c1 = [2]: kernel spanned by (2, -1)/sqrt(5)
    cols = np.array([[1.0 + 0j], [2.0 + 0j]])
    k = real_kernel(cols)
    assert k.shape == (1, 2)
    npt.assert_allclose(np.abs(k[0]), np.array([2.0, 1.0]) / np.sqrt(5),
                        atol=1e-12)


def test_real_kernel_zero_map_is_full():
    k = real_kernel(np.zeros((3, 4)))
    npt.assert_allclose(k, np.eye(3), atol=1e-12)


def test_real_kernel_rows_annihilate():
    rng = np.random.default_rng(12)
    cols = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    k = real_kernel(cols)
    # 6 real parameters against 2 complex (4 real) constraints: rank-nullity
    assert k.shape[0] >= 2
    for row in k:
        npt.assert_allclose(row @ cols, 0.0, atol=1e-10)
    npt.assert_allclose(k @ k.T, np.eye(k.shape[0]), atol=1e-10)
