import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from opideal.sequences import MonotoneSequence, SequenceFormatError
from opideal.spectra import (
    JacobiConvergenceError,
    ProjectionFamily,
    _round_robin,
    characteristic_numbers,
    diagonal_operator,
    format_complex,
    jacobi_singular_values,
    operator_norm,
    parse_complex,
    product,
    random_unitary,
    read_matrix_csv,
    scaled_projection,
    write_matrix_csv,
)


def eig_oracle(T):
    """Square roots of the eigenvalues of T*T, independent of the Jacobi code."""
    w = np.linalg.eigvalsh(T.conj().T @ T)
    return np.sqrt(np.clip(np.sort(w)[::-1], 0, None))


def complex_gaussian(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def test_examples():
    np.testing.assert_array_equal(characteristic_numbers(np.diag([1, -3])).values, [3, 1])
    np.testing.assert_array_equal(characteristic_numbers([[0, 2], [0, 0]]).values, [2, 0])


@pytest.mark.parametrize("shape", [(8, 8), (5, 9), (9, 5), (1, 4), (4, 1), (1, 1)])
def test_matches_eigen_oracle(rng, shape):
    for _ in range(10):
        T = complex_gaussian(rng, *shape)
        mu = characteristic_numbers(T).values
        ref = eig_oracle(T if shape[0] >= shape[1] else T.conj().T)
        np.testing.assert_allclose(mu, ref[: len(mu)], atol=1e-9)


def test_real_and_rank_deficient(rng):
    A = rng.standard_normal((12, 3)) @ rng.standard_normal((3, 12))
    mu = characteristic_numbers(A).values
    np.testing.assert_allclose(mu[:3], np.linalg.svd(A, compute_uv=False)[:3], rtol=1e-12)
    assert np.all(mu[3:] < 1e-12 * mu[0])
    Z = np.zeros((4, 6))
    Z[:, 2] = [1, 2, 2, 0]
    np.testing.assert_allclose(characteristic_numbers(Z).values, [3, 0, 0, 0])
    assert np.all(characteristic_numbers(np.zeros((3, 3))).values == 0)


def test_unitary_and_adjoint_invariance(rng):
    for dim in (2, 7, 16):
        T = complex_gaussian(rng, dim, dim)
        U, V = random_unitary(dim, rng), random_unitary(dim, rng)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(dim), atol=1e-12)
        mu = characteristic_numbers(T).values
        np.testing.assert_allclose(characteristic_numbers(U @ T @ V).values, mu, atol=1e-9)
        np.testing.assert_allclose(characteristic_numbers(T.conj().T).values, mu, atol=1e-9)


@given(st.integers(1, 12), st.integers(0, 2**31))
def test_rank_one_norm(dim, seed):
    r = np.random.default_rng(seed)
    x, y = complex_gaussian(r, dim, 1), complex_gaussian(r, dim, 1)
    X = x @ y.conj().T
    mu = characteristic_numbers(X).values
    expected = np.linalg.norm(x) * np.linalg.norm(y)
    assert mu[0] == pytest.approx(expected, rel=1e-12)
    assert operator_norm(X) == mu[0]
    assert np.all(mu[1:] <= 1e-12 * mu[0])


def test_round_robin_covers_each_pair_once():
    for n in range(2, 12):
        seen = [tuple(p) for r in _round_robin(n) for p in r.T]
        assert len(seen) == len(set(seen)) == n * (n - 1) // 2
        for r in _round_robin(n):
            assert len(set(r.ravel())) == r.size  # disjoint pairs in a round


def test_sweep_cap_raises(rng):
    with pytest.raises(JacobiConvergenceError):
        jacobi_singular_values(complex_gaussian(rng, 16, 16), max_sweeps=1)


@pytest.mark.parametrize("bad", [np.zeros(3), np.zeros((0, 2)), np.array([[np.nan]])])
def test_as_operator_rejects(bad):
    with pytest.raises(ValueError):
        characteristic_numbers(bad)


def test_diagonal_and_projections():
    np.testing.assert_array_equal(diagonal_operator(MonotoneSequence([1, 0.5])), [[1, 0], [0, 0.5]])
    np.testing.assert_array_equal(diagonal_operator(MonotoneSequence([2.0])), [[2.0]])
    P = ProjectionFamily.singletons(2)
    np.testing.assert_array_equal(scaled_projection(P, 0, 2), [[2, 0], [0, 0]])
    blocks = ProjectionFamily(5, ((0, 2), (2, 5)))
    E = scaled_projection(blocks, 1, 1.0)
    np.testing.assert_array_equal(E @ E, E)
    with pytest.raises(ValueError):
        ProjectionFamily(3, ((0, 2), (1, 3)))
    with pytest.raises(ValueError):
        ProjectionFamily(3, ((0, 4),))
    with pytest.raises(IndexError):
        scaled_projection(P, 2, 1.0)
    with pytest.raises(ValueError):
        product(np.eye(2), np.eye(3))


@pytest.mark.parametrize(
    "text, value",
    [("3", 3), ("-1.5i", -1.5j), ("2-0.5i", 2 - 0.5j), ("1e-3+2e2i", 1e-3 + 200j), ("i", 1j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "1j", "2k", "1+2", "abc"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValueError):
        parse_complex(text)


def test_matrix_csv_round_trip(rng):
    T = complex_gaussian(rng, 3, 4)
    np.testing.assert_array_equal(read_matrix_csv(io.StringIO(write_matrix_csv(T))), T)
    assert format_complex(-0.0j + 1) == "1.0+0.0i"


@pytest.mark.parametrize("text, line", [("1,2\n3\n", 2), ("1,2\nx,1\n", 2), ("", None)])
def test_matrix_csv_errors(text, line):
    with pytest.raises(SequenceFormatError) as err:
        read_matrix_csv(io.StringIO(text), source="m.csv")
    assert err.value.lineno == line
