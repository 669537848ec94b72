import numpy as np
import numpy.testing as npt
import pytest

from opcert.errors import InvalidInputError, PreconditionError
from opcert.opspace import (AmplifiedElement, amplify_unit, make_space,
                            membership, norm, space_from_points)

E11 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
E12 = np.array([[0, 1], [0, 0]], dtype=np.complex128)
E21 = np.array([[0, 0], [1, 0]], dtype=np.complex128)
E22 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def m2_full():
    return make_space([np.eye(2), E12, E21, E22],
                      unit=np.array([1.0, 0, 0, 0]))


def test_make_space_rejects_empty_and_dependent():
    with pytest.raises(InvalidInputError):
        make_space([])
    with pytest.raises(InvalidInputError):
        make_space([np.eye(2), 2.0 * np.eye(2)])
    with pytest.raises(InvalidInputError):
        make_space([np.eye(2), np.eye(3)])


def test_make_space_rejects_non_matrix_entries():
    with pytest.raises(InvalidInputError):
        make_space([np.ones(3)])


def test_dense_space_basics():
    space = m2_full()
    assert space.dim == 4
    assert space.ambient_shape == (2, 2)
    assert not space.diagonal
    npt.assert_array_equal(space.embed([0, 1, 0, 0]), E12)
    assert space.norm([1.0, 0, 0, 0]) == pytest.approx(1.0)
    assert space.norm(np.zeros(4)) == pytest.approx(0.0)


def test_unit_coeffs_requires_unit():
    space = make_space([np.eye(2), E12])
    with pytest.raises(InvalidInputError):
        space.unit_coeffs()


def test_as_coeffs_validates():
    space = m2_full()
    with pytest.raises(InvalidInputError):
        space.as_coeffs([1.0, 0.0])
    other = m2_full()
    elem = other.element([1, 0, 0, 0])
    with pytest.raises(InvalidInputError):
        space.as_coeffs(elem)


def test_membership_round_trip():
    space = m2_full()
    rng = np.random.default_rng(7)
    for _ in range(10):
        c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        got, res = membership(space, space.embed(c))
        assert res <= 1e-10
        npt.assert_allclose(got, c, atol=1e-8)


def test_membership_detects_outside_component():
    space = make_space([np.eye(2), E12], unit=[1.0, 0])
    _, res = space.membership(E21)
    assert res == pytest.approx(1.0)
    assert not space.is_member(E21)
    assert space.is_member(np.eye(2) + 3j * E12)


def test_membership_rejects_wrong_shape():
    space = m2_full()
    with pytest.raises(InvalidInputError):
        space.membership(np.eye(3))


def test_direct_sum_norm_is_max():
    space = m2_full()
    rng = np.random.default_rng(8)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    grid = np.zeros((2, 2, 4), dtype=np.complex128)
    grid[0, 0] = x
    grid[1, 1] = y
    got = AmplifiedElement(space, 2, grid).norm()
    assert got == pytest.approx(max(space.norm(x), space.norm(y)), abs=1e-9)


def test_scalar_row_column_contraction():
    # |alpha . x . beta| <= |alpha| |x| |beta| for scalar matrices acting on
    # the grid: scaling grid rows by a and columns by b realizes diag(a) X diag(b)
    space = m2_full()
    rng = np.random.default_rng(9)
    for _ in range(5):
        grid = rng.standard_normal((2, 2, 4)) + 1j * rng.standard_normal((2, 2, 4))
        a = rng.standard_normal(2)
        b = rng.standard_normal(2)
        scaled = a[:, None, None] * grid * b[None, :, None]
        lhs = space.grid_norm(scaled)
        bound = np.max(np.abs(a)) * space.grid_norm(grid) * np.max(np.abs(b))
        assert lhs <= bound + 1e-9


def test_amplify_unit_norm():
    space = m2_full()
    for n in (1, 2, 3):
        amp = amplify_unit(space, n)
        assert norm(amp) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidInputError):
        amplify_unit(space, 0)
    unitless = make_space([np.eye(2)])
    with pytest.raises(PreconditionError):
        amplify_unit(unitless, 2)


def test_norm_rejects_raw_arrays():
    with pytest.raises(InvalidInputError):
        norm(np.eye(2))


def test_diagonal_layout_detected():
    space = make_space([np.diag([1.0, 0]), np.diag([0, 1.0])],
                       unit=[1.0, 1.0])
    assert space.diagonal
    npt.assert_allclose(space.point_values([2.0, 3.0]), [2.0, 3.0])
    assert space.norm([2.0, -3.0]) == pytest.approx(3.0)


def test_diagonal_membership_counts_offdiagonal_part():
    space = make_space([np.diag([1.0, 0]), np.diag([0, 1.0])])
    m = np.diag([1.0, 2.0]).astype(np.complex128)
    m[0, 1] = 0.5
    coeffs, res = space.membership(m)
    npt.assert_allclose(coeffs, [1.0, 2.0], atol=1e-12)
    assert res == pytest.approx(0.5)


def test_space_from_points():
    pb = np.stack([np.ones(5), np.linspace(-1, 1, 5)])
    space = space_from_points(pb, unit=[1.0, 0])
    assert space.diagonal
    assert space.dim == 2
    assert space.ambient_shape == (5, 5)
    assert space.norm([0, 1.0]) == pytest.approx(1.0)
    coeffs, res = space.membership_points(pb[0] + 2 * pb[1])
    npt.assert_allclose(coeffs, [1.0, 2.0], atol=1e-10)
    assert res <= 1e-10
    with pytest.raises(InvalidInputError):
        space_from_points(np.ones(5))


def test_diagonal_grid_norm_matches_dense_route():
    pb = np.stack([np.ones(4), np.exp(2j * np.pi * np.arange(4) / 4)])
    diag_space = space_from_points(pb)
    dense_space = make_space([np.diag(row) for row in pb])
    rng = np.random.default_rng(10)
    for n in (1, 2, 3):
        grid = rng.standard_normal((n, n, 2)) + 1j * rng.standard_normal((n, n, 2))
        assert diag_space.grid_norm(grid) == pytest.approx(
            dense_space.grid_norm(grid), abs=1e-10)


def test_amplified_matrix_agrees_between_layouts():
    pb = np.stack([np.ones(3), np.array([1.0, 2.0, 3.0])])
    diag_space = space_from_points(pb, unit=[1.0, 0])
    dense_space = make_space([np.diag(row) for row in pb], unit=[1.0, 0])
    grid = np.array([[[1.0, 2.0], [0, 1j]], [[0.5, 0], [1.0, -1.0]]],
                    dtype=np.complex128)
    a = AmplifiedElement(diag_space, 2, grid).matrix
    b = AmplifiedElement(dense_space, 2, grid).matrix
    # same operator up to the interleaved block ordering: compare norms and
    # singular values instead of entries
    npt.assert_allclose(np.linalg.svd(a, compute_uv=False),
                        np.linalg.svd(b, compute_uv=False), atol=1e-10)
