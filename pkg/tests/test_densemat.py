"""Dense arithmetic and the Jacobi eigensolver against independent oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockineq import (
    ConvergenceError,
    HermiticityError,
    ShapeError,
    as_matrix,
    conj_transpose,
    determinant,
    hermitian_eigenvalues,
    is_psd,
    kron,
    matmul,
    trace,
)
from oracles import (
    det_cofactor,
    dyadic_complex,
    eig_closed_form,
    eigvalsh_lapack,
    kron_loops,
    random_complex,
    random_hermitian,
    random_psd_lapack,
)

E12 = np.array([[0, 1], [0, 0]], dtype=np.complex128)
E21 = np.array([[0, 0], [1, 0]], dtype=np.complex128)
E11 = np.array([[1, 0], [0, 0]], dtype=np.complex128)


# ---------------------------------------------------------------- as_matrix


def test_as_matrix_rejects_nan_and_inf():
    with pytest.raises(ValueError):
        as_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf, 0], [0, 1]])
    with pytest.raises(ValueError):
        as_matrix([[complex(0, np.inf), 0], [0, 1]])


def test_as_matrix_rejects_non_2d_and_empty():
    with pytest.raises(ShapeError):
        as_matrix([1, 2, 3])
    with pytest.raises(ShapeError):
        as_matrix(np.zeros((0, 2)))
    assert as_matrix(np.zeros((0, 0)), allow_empty=True).shape == (0, 0)


# ------------------------------------------------------------------- matmul


def test_matmul_identity():
    eye = np.eye(2, dtype=np.complex128)
    assert np.array_equal(matmul(eye, eye), eye)


def test_matmul_matrix_units():
    assert np.array_equal(matmul(E12, E21), E11)


def test_matmul_annihilates_zero():
    rng = np.random.default_rng(7)
    x = random_complex(rng, 3, 4)
    assert np.array_equal(matmul(x, np.zeros((4, 2))), np.zeros((3, 2)))


def test_matmul_shape_mismatch():
    with pytest.raises(ShapeError):
        matmul(np.zeros((2, 3)), np.zeros((2, 3)))


# ----------------------------------------------------------- conj_transpose


def test_conj_transpose_scalar_i():
    assert np.array_equal(conj_transpose(np.array([[1j]])), np.array([[-1j]]))


def test_conj_transpose_unit():
    assert np.array_equal(conj_transpose(E12), E21)


def test_conj_transpose_involution():
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = random_complex(rng, 3, 5)
        assert np.array_equal(conj_transpose(conj_transpose(x)), x)


# -------------------------------------------------------------------- trace


@pytest.mark.parametrize("n", [1, 2, 5])
def test_trace_identity(n):
    assert trace(np.eye(n, dtype=np.complex128)) == n


def test_trace_unit_is_zero():
    assert trace(E12) == 0


def test_trace_cyclic_against_double_sum():
    rng = np.random.default_rng(13)
    for _ in range(50):
        x = random_complex(rng, 4, 3)
        y = random_complex(rng, 3, 4)
        xy = trace(matmul(x, y))
        yx = trace(matmul(y, x))
        # independent route: double sum over entry products
        direct = sum(x[i, j] * y[j, i] for i in range(4) for j in range(3))
        scale = max(1.0, abs(xy))
        assert abs(xy - yx) <= 1e-12 * scale
        assert abs(xy - direct) <= 1e-12 * scale


# --------------------------------------------------------------------- kron


def test_kron_identities():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_matrix_units_position():
    out = kron(E12, E21)
    expected = np.zeros((4, 4), dtype=np.complex128)
    expected[1, 2] = 1.0  # row 2, column 3 (1-based)
    assert np.array_equal(out, expected)


def test_kron_against_quadruple_loop():
    # dyadic entries keep every product exact, so the index-bookkeeping
    # comparison against the quadruple loop is elementwise-exact
    rng = np.random.default_rng(17)
    for _ in range(10):
        x = dyadic_complex(rng, 3, 2)
        y = dyadic_complex(rng, 2, 3)
        assert np.array_equal(kron(x, y), kron_loops(x, y))


# -------------------------------------------------------------- determinant


def test_determinant_empty_is_one():
    assert determinant(np.zeros((0, 0))) == 1.0


def test_determinant_2x2():
    assert determinant(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(3.0)


def test_determinant_against_cofactor_expansion():
    rng = np.random.default_rng(19)
    for _ in range(10):
        a = random_psd_lapack(rng, 5)
        lib = determinant(a)
        orc = det_cofactor(a)
        assert abs(lib - orc) <= 1e-9 * max(1.0, abs(orc))


# ------------------------------------------------------ hermitian eigenvalues


def test_eigenvalues_2x2_closed_form():
    vals = hermitian_eigenvalues(np.array([[0.0, -1.0], [-1.0, 0.0]])).values
    assert np.allclose(vals, [-1.0, 1.0], atol=1e-12)


def test_eigenvalues_diagonal_input():
    vals = hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])).values
    assert np.allclose(vals, [1.0, 2.0, 3.0], atol=0)


def test_eigenvalues_sizes_0_and_1():
    res = hermitian_eigenvalues(np.zeros((0, 0)))
    assert res.values.size == 0
    res1 = hermitian_eigenvalues(np.array([[2.5 + 0j]]))
    assert np.array_equal(res1.values, [2.5])


def test_eigenvalues_against_char_poly_oracle_3x3():
    rng = np.random.default_rng(23)
    for _ in range(50):
        a = random_hermitian(rng, 3)
        lib = hermitian_eigenvalues(a).values
        orc = eig_closed_form(a)
        assert np.allclose(lib, orc, atol=1e-8 * max(1.0, np.linalg.norm(a)))


def test_eigenvalues_against_lapack_6x6():
    rng = np.random.default_rng(29)
    for _ in range(25):
        a = random_hermitian(rng, 6)
        lib = hermitian_eigenvalues(a).values
        orc = eigvalsh_lapack(a)
        assert np.allclose(lib, orc, atol=1e-10 * max(1.0, np.linalg.norm(a)))


def test_eigenvalues_sorted_sum_equals_trace():
    rng = np.random.default_rng(31)
    for _ in range(20):
        a = random_hermitian(rng, 5)
        res = hermitian_eigenvalues(a)
        assert np.all(np.diff(res.values) >= 0)
        assert res.values.size == 5
        assert abs(res.values.sum() - trace(a).real) <= 1e-10 * max(
            1.0, np.linalg.norm(a)
        )


def test_eigenvalues_convergence_diagnostics():
    rng = np.random.default_rng(37)
    a = random_hermitian(rng, 8)
    res = hermitian_eigenvalues(a)
    assert res.offdiag_residual <= 1e-13 * max(1.0, np.linalg.norm(a))
    assert 0 < res.sweeps < 100


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(HermiticityError):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_convergence_error_carries_residual():
    # the exception type is part of the numerical-error contract
    err = ConvergenceError("no", offdiag_residual=0.5)
    assert err.offdiag_residual == 0.5


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.floats(min_value=-10, max_value=10, allow_nan=False),
        min_size=2,
        max_size=5,
    )
)
def test_eigenvalues_of_diagonal_are_sorted_entries(diag):
    vals = hermitian_eigenvalues(np.diag(np.array(diag, dtype=np.complex128))).values
    assert np.allclose(vals, np.sort(diag), atol=1e-12)


# ------------------------------------------------------------------- is_psd


@pytest.mark.parametrize("n", [1, 2, 4])
def test_is_psd_identity(n):
    ok, mineig = is_psd(np.eye(n))
    assert ok and mineig == pytest.approx(1.0, abs=1e-12)


def test_is_psd_indefinite():
    ok, mineig = is_psd(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    assert not ok
    assert mineig == pytest.approx(-1.0, abs=1e-12)


def test_is_psd_gram_always_true():
    rng = np.random.default_rng(41)
    for _ in range(200):
        a = random_psd_lapack(rng, 4)
        ok, _ = is_psd(a)
        assert ok


def test_is_psd_rejects_negative_tolerance():
    with pytest.raises(ValueError):
        is_psd(np.eye(2), tol=-1e-9)
