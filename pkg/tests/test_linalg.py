"""
Unit tests for exact sparse and dense linear algebra.
"""

import numpy as np
import pytest

from services.algebra.linalg import (
    NotASubspaceError,
    SparseMatrix,
    SubspaceBasis,
    column_space,
    complement_in,
    eliminate,
    quotient_complement,
    rank_and_nullspace,
    solve_linear,
    subspaces_equal,
)


def dense_rank(matrix) -> int:
    return int(np.linalg.matrix_rank(matrix))


def test_identity_and_zero(gf2_8):
    """Test the trivial ranks."""
    rank, kernel = rank_and_nullspace(SparseMatrix.from_dense(gf2_8, gf2_8.GF.Identity(4)))
    assert rank == 4
    assert kernel.dim == 0

    rank, kernel = rank_and_nullspace(SparseMatrix.zeros(gf2_8, 3, 5))
    assert rank == 0
    assert kernel.dim == 5


def test_random_rank_matches_dense(gf2_15, rng):
    """Test sparse elimination against galois row reduction."""
    dense = gf2_15.random(rng, (50, 80))
    dense[rng.random((50, 80)) < 0.8] = 0
    sparse = SparseMatrix.from_dense(gf2_15, dense)
    rank, kernel = rank_and_nullspace(sparse)
    assert rank == dense_rank(dense)
    assert kernel.dim == 80 - rank
    assert not np.any(dense @ kernel.vectors)


def test_low_rank_product(gf3_5, rng):
    """Test a matrix of known rank 40, finished by the dense tail."""
    left = gf3_5.random(rng, (60, 40))
    right = gf3_5.random(rng, (40, 60))
    dense = left @ right
    elim = eliminate(SparseMatrix.from_dense(gf3_5, dense), dense_threshold=0.01, min_dense_rows=4)
    assert elim.rank == dense_rank(dense) == 40
    kernel = elim.nullspace()
    assert not np.any(dense @ kernel.vectors)


def test_sparse_matrix_ops(f3):
    """Test transpose, matvec, matmul and column selection."""
    m = SparseMatrix.from_entries(f3, 2, 3, [(0, 0, 1), (0, 2, 2), (1, 1, 1)])
    assert m.transpose().shape == (3, 2)
    assert m.matvec(f3.array([1, 1, 1])).tolist() == [0, 1]
    product = m.matmul(m.transpose())
    assert product.to_dense().tolist() == [[2, 0], [0, 1]]
    assert m.select_columns([2, 0]).to_dense().tolist() == [[2, 1], [0, 0]]
    with pytest.raises(ValueError, match="Duplicate"):
        SparseMatrix.from_entries(f3, 1, 1, [(0, 0, 1), (0, 0, 2)])


def test_column_space(f3, gf2_15, rng):
    """Test image bases."""
    eye = column_space(SparseMatrix.from_dense(f3, f3.GF.Identity(3)))
    assert eye.vectors.tolist() == np.eye(3, dtype=int).tolist()

    col = f3.array([1, 2, 0])
    doubled = column_space(SparseMatrix.from_dense(f3, np.stack([col, col], axis=1)))
    assert doubled.dim == 1
    assert doubled.contains(col)

    dense = gf2_15.random(rng, (12, 20))
    sparse = SparseMatrix.from_dense(gf2_15, dense)
    assert column_space(sparse).dim == rank_and_nullspace(sparse)[0]


def test_complement_in(gf2_15, rng):
    """Test complements of nested subspaces."""
    eye = SubspaceBasis(gf2_15, gf2_15.GF.Identity(3))
    assert complement_in(eye, eye).dim == 0
    assert complement_in(SubspaceBasis.empty(gf2_15, 3), eye).dim == 3

    sup = SubspaceBasis(gf2_15, gf2_15.random(rng, (15, 9)))
    sub = SubspaceBasis(gf2_15, sup.vectors @ gf2_15.random(rng, (9, 4)))
    comp = complement_in(sub, sup)
    assert comp.dim == 5
    assert dense_rank(np.hstack((sub.vectors, comp.vectors))) == 9


def test_complement_rejects_non_subspace(f3):
    """Test the containment precondition."""
    e1 = SubspaceBasis(f3, f3.array([[1], [0]]))
    e2 = SubspaceBasis(f3, f3.array([[0], [1]]))
    with pytest.raises(NotASubspaceError):
        complement_in(e1, e2)


def test_subspaces_equal(f3):
    """Test span equality."""
    e1 = SubspaceBasis(f3, f3.array([[1], [0]]))
    twice = SubspaceBasis(f3, f3.array([[2], [0]]))
    e2 = SubspaceBasis(f3, f3.array([[0], [1]]))
    assert subspaces_equal(e1, e1)
    assert subspaces_equal(e1, twice)
    assert not subspaces_equal(e1, e2)
    with pytest.raises(ValueError, match="Ambient"):
        subspaces_equal(e1, SubspaceBasis(f3, f3.array([[1], [0], [0]])))


def test_solve_linear(gf3_5, rng):
    """Test consistent and inconsistent systems."""
    a = gf3_5.random(rng, (6, 9))
    x = gf3_5.random(rng, 9)
    solution = solve_linear(gf3_5, a, a @ x)
    assert np.array_equal(a @ solution, a @ x)

    singular = gf3_5.array([[1, 0], [1, 0]])
    assert solve_linear(gf3_5, singular, gf3_5.array([1, 2])) is None


def test_quotient_complement(gf2_15, rng):
    """Test the complement of span(G) inside ker(C)."""
    n = 30
    kernel_basis = gf2_15.random(rng, (n, 12))
    constraints = kernel_basis.T.null_space()
    generators = kernel_basis[:, :5] @ gf2_15.random(rng, (5, 8))

    comp, dim_g, pivots = quotient_complement(
        SparseMatrix.from_dense(gf2_15, constraints),
        SparseMatrix.from_dense(gf2_15, generators),
    )
    assert dim_g == 5
    assert comp.dim == 7
    assert len(pivots) == 5
    assert not np.any(constraints @ comp.vectors)
    assert not np.any(comp.vectors[pivots, :])
    assert dense_rank(np.hstack((generators, comp.vectors))) == 12


def span_rank_gf2(rows) -> int:
    """Rank over GF(2) by enumerating the row span of 0/1 rows."""
    span = {0}
    for row in rows:
        bits = int("".join(str(int(v)) for v in row) or "0", 2)
        span |= {s ^ bits for s in span}
    return len(span).bit_length() - 1


def test_rank_matches_span_enumeration(f2, rng):
    """Test GF(2) ranks against the size of the enumerated row span, up to 12 x 12."""
    for _ in range(60):
        n_rows, n_cols = (int(x) for x in rng.integers(1, 13, size=2))
        dense = (rng.random((n_rows, n_cols)) < rng.uniform(0.1, 0.7)).astype(int)
        rank, kernel = rank_and_nullspace(SparseMatrix.from_dense(f2, f2.array(dense)))
        assert rank == span_rank_gf2(dense.tolist())
        assert kernel.dim == n_cols - rank


@pytest.mark.parametrize("field_name", ["f2", "gf2_15", "f3", "gf3_9"])
def test_rank_of_transpose(field_name, rng, request):
    """Test rank(m) = rank(mᵀ) on random sparse matrices."""
    f = request.getfixturevalue(field_name)
    for _ in range(20):
        n_rows, n_cols = (int(x) for x in rng.integers(1, 16, size=2))
        dense = f.random(rng, (n_rows, n_cols))
        dense[rng.random((n_rows, n_cols)) < 0.6] = 0
        sparse = SparseMatrix.from_dense(f, dense)
        rank, _ = rank_and_nullspace(sparse)
        rank_t, _ = rank_and_nullspace(sparse.transpose())
        assert rank == rank_t
