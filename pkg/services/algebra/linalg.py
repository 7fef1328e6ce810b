"""
Exact Linear Algebra
Sparse elimination, ranks, null spaces and subspace bases over GF(p^k).

Sparse matrices keep one dict per row (column -> nonzero element). Elimination
is right-looking with Markowitz-style pivot choice and switches to galois'
dense row reduction once the active block fills in.
"""

import heapq
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from services.algebra.field import Field
from services.config import get_settings


class NotASubspaceError(ValueError):
    """Raised when a claimed subspace is not contained in the ambient space."""


class SparseMatrix:
    """
    Immutable sparse matrix over a finite field.

    Rows are stored as dicts without explicit zeros; ``entries()`` is the
    canonical (row, col)-sorted view used for equality.
    """

    def __init__(self, field: Field, n_rows: int, n_cols: int, rows: Sequence[Dict[int, int]]):
        if len(rows) != n_rows:
            raise ValueError(f"Expected {n_rows} rows, got {len(rows)}")
        self.field = field
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows: Tuple[Dict[int, int], ...] = tuple({c: v for c, v in r.items() if v} for r in rows)

    @classmethod
    def from_entries(cls, field: Field, n_rows: int, n_cols: int, entries: Iterable[Tuple[int, int, int]]) -> "SparseMatrix":
        rows: List[Dict[int, int]] = [{} for _ in range(n_rows)]
        for r, c, v in entries:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ValueError(f"Entry ({r}, {c}) outside a {n_rows}x{n_cols} matrix")
            if c in rows[r]:
                raise ValueError(f"Duplicate entry at ({r}, {c})")
            rows[r][c] = v
        return cls(field, n_rows, n_cols, rows)

    @classmethod
    def from_dense(cls, field: Field, matrix) -> "SparseMatrix":
        ints = np.asarray(field.GF(matrix).view(np.ndarray))
        n_rows, n_cols = ints.shape
        rows = []
        for i in range(n_rows):
            nz = np.flatnonzero(ints[i])
            rows.append({int(c): int(ints[i, c]) for c in nz})
        return cls(field, n_rows, n_cols, rows)

    @classmethod
    def zeros(cls, field: Field, n_rows: int, n_cols: int) -> "SparseMatrix":
        return cls(field, n_rows, n_cols, [{} for _ in range(n_rows)])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def entries(self) -> List[Tuple[int, int, int]]:
        return [(i, c, r[c]) for i, r in enumerate(self.rows) for c in sorted(r)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and self.entries() == other.entries()
        )

    def __repr__(self) -> str:
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz}, {self.field})"

    def to_dense(self) -> galois.FieldArray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                out[i, c] = v
        return self.field.GF(out)

    def transpose(self) -> "SparseMatrix":
        cols: List[Dict[int, int]] = [{} for _ in range(self.n_cols)]
        for i, r in enumerate(self.rows):
            for c, v in r.items():
                cols[c][i] = v
        return SparseMatrix(self.field, self.n_cols, self.n_rows, cols)

    def select_columns(self, columns: Sequence[int]) -> "SparseMatrix":
        """Submatrix on the given columns, renumbered in the given order."""
        position = {c: j for j, c in enumerate(columns)}
        rows = [{position[c]: v for c, v in r.items() if c in position} for r in self.rows]
        return SparseMatrix(self.field, self.n_rows, len(columns), rows)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        if other.n_cols != self.n_cols:
            raise ValueError(f"Column mismatch: {self.n_cols} vs {other.n_cols}")
        return SparseMatrix(self.field, self.n_rows + other.n_rows, self.n_cols, self.rows + other.rows)

    def matvec(self, vector) -> galois.FieldArray:
        f = self.field
        x = f.to_ints(vector)
        if len(x) != self.n_cols:
            raise ValueError(f"Vector of length {len(x)} for {self.n_cols} columns")
        out = []
        for r in self.rows:
            s = 0
            for c, v in r.items():
                if x[c]:
                    s = f.add(s, f.mul(v, x[c]))
            out.append(s)
        return f.array(out) if out else f.zeros(0)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")
        f = self.field
        rows = []
        for r in self.rows:
            acc: Dict[int, int] = {}
            for k, a in r.items():
                for c, b in other.rows[k].items():
                    acc[c] = f.add(acc.get(c, 0), f.mul(a, b))
            rows.append(acc)
        return SparseMatrix(f, self.n_rows, other.n_cols, rows)


class SubspaceBasis:
    """
    Linearly independent columns spanning a subspace of F^ambient_dim.
    """

    def __init__(self, field: Field, vectors, validate: bool = False):
        """
        Args:
            field: Coefficient field
            vectors: Column matrix (ambient_dim x dim) convertible to field.GF
            validate: Check that the columns are independent
        """
        if isinstance(vectors, galois.FieldArray):
            matrix = vectors
        else:
            matrix = field.GF(np.asarray(vectors, dtype=np.int64))
        if matrix.ndim != 2:
            raise ValueError(f"Basis vectors must form a column matrix, got shape {matrix.shape}")
        self.field = field
        self.vectors = matrix
        self.ambient_dim = matrix.shape[0]
        if validate and _rank(matrix) != matrix.shape[1]:
            raise ValueError("Basis columns are linearly dependent")

    @classmethod
    def empty(cls, field: Field, ambient_dim: int) -> "SubspaceBasis":
        return cls(field, field.zeros((ambient_dim, 0)))

    @classmethod
    def from_rows(cls, field: Field, rows) -> "SubspaceBasis":
        """Basis whose columns are the given (independent) rows."""
        return cls(field, rows.T)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def columns(self) -> List[galois.FieldArray]:
        return [self.vectors[:, j] for j in range(self.dim)]

    def contains(self, vector) -> bool:
        stacked = np.hstack((self.vectors, vector.reshape(-1, 1)))
        return _rank(stacked) == self.dim

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"


def _rank(matrix: galois.FieldArray) -> int:
    if matrix.size == 0:
        return 0
    return int(np.linalg.matrix_rank(matrix))


class Elimination:
    """
    Row echelon data produced by ``eliminate``.

    ``pivots`` lists (pivot column, normalized row) in elimination order; a
    pivot row never contains the pivot column of an earlier pivot, so the
    rows can be back-substituted in reverse order.
    """

    def __init__(self, field: Field, n_cols: int, pivots: List[Tuple[int, Dict[int, int]]]):
        self.field = field
        self.n_cols = n_cols
        self.pivots = pivots
        self.pivot_columns = [c for c, _ in pivots]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> List[int]:
        taken = set(self.pivot_columns)
        return [c for c in range(self.n_cols) if c not in taken]

    def nullspace(self) -> SubspaceBasis:
        """One basis vector per free column, by reverse back-substitution."""
        f = self.field
        free = self.free_columns()
        out = np.zeros((self.n_cols, len(free)), dtype=np.int64)
        for j, fc in enumerate(free):
            x = {fc: 1}
            for col, row in reversed(self.pivots):
                s = 0
                for c, v in row.items():
                    if c != col and c in x:
                        s = f.add(s, f.mul(v, x[c]))
                if s:
                    x[col] = f.neg(s)
            for c, v in x.items():
                out[c, j] = v
        return SubspaceBasis(f, f.GF(out))


def eliminate(matrix: SparseMatrix, dense_threshold: Optional[float] = None, min_dense_rows: int = 48) -> Elimination:
    """
    Gaussian elimination with Markowitz-style pivoting.

    Pivot row: shortest active row (ties: smallest row index). Pivot column:
    the row's column with fewest active entries (ties: smallest index).

    Args:
        matrix: Matrix to eliminate (not modified)
        dense_threshold: Active density that triggers dense reduction
        min_dense_rows: Smallest active block worth handing to dense code

    Returns:
        Elimination with pivots in elimination order
    """
    if dense_threshold is None:
        dense_threshold = get_settings().dense_threshold
    f = matrix.field
    add, mul, neg, inv = f.add, f.mul, f.neg, f.inv

    rows: Dict[int, Dict[int, int]] = {i: dict(r) for i, r in enumerate(matrix.rows) if r}
    col_rows: Dict[int, set] = defaultdict(set)
    for i, r in rows.items():
        for c in r:
            col_rows[c].add(i)
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    nnz = sum(len(r) for r in rows.values())

    pivots: List[Tuple[int, Dict[int, int]]] = []
    since_check = 0

    while heap:
        length, i = heapq.heappop(heap)
        row = rows.get(i)
        if row is None or len(row) != length:
            continue

        col = min(row, key=lambda c: (len(col_rows[c]), c))
        scale = inv(row[col])
        pivot_row = {c: mul(v, scale) for c, v in row.items()} if scale != 1 else row
        del rows[i]
        nnz -= len(row)
        for c in row:
            col_rows[c].discard(i)

        for r in sorted(col_rows[col]):
            target = rows[r]
            factor = target[col]
            nnz -= len(target)
            for c, v in pivot_row.items():
                new = add(target.get(c, 0), neg(mul(factor, v)))
                if new:
                    if c not in target:
                        col_rows[c].add(r)
                    target[c] = new
                elif c in target:
                    del target[c]
                    col_rows[c].discard(r)
            nnz += len(target)
            if target:
                heapq.heappush(heap, (len(target), r))
            else:
                del rows[r]
        pivots.append((col, pivot_row))

        since_check += 1
        if since_check >= 32 and len(rows) >= min_dense_rows:
            since_check = 0
            active_cols = sum(1 for s in col_rows.values() if s)
            if active_cols and nnz / (len(rows) * active_cols) > dense_threshold:
                pivots.extend(_dense_tail(f, rows, col_rows))
                break

    return Elimination(f, matrix.n_cols, pivots)


def _dense_tail(f: Field, rows: Dict[int, Dict[int, int]], col_rows: Dict[int, set]) -> List[Tuple[int, Dict[int, int]]]:
    """Finish the active block with galois row reduction."""
    row_ids = sorted(rows)
    cols = sorted(c for c, s in col_rows.items() if s)
    position = {c: j for j, c in enumerate(cols)}
    block = np.zeros((len(row_ids), len(cols)), dtype=np.int64)
    for a, r in enumerate(row_ids):
        for c, v in rows[r].items():
            block[a, position[c]] = v
    reduced = np.asarray(f.GF(block).row_reduce().view(np.ndarray))

    out = []
    for a in range(reduced.shape[0]):
        nz = np.flatnonzero(reduced[a])
        if len(nz) == 0:
            break
        out.append((cols[nz[0]], {cols[j]: int(reduced[a, j]) for j in nz}))
    return out


def rank_and_nullspace(matrix: SparseMatrix) -> Tuple[int, SubspaceBasis]:
    """Rank of the matrix and a basis of {v : matrix v = 0}."""
    elim = eliminate(matrix)
    return elim.rank, elim.nullspace()


def column_space(matrix: SparseMatrix) -> SubspaceBasis:
    """Basis of the image made of original columns (the pivot columns)."""
    elim = eliminate(matrix)
    chosen = sorted(elim.pivot_columns)
    dense = matrix.select_columns(chosen).to_dense()
    return SubspaceBasis(matrix.field, dense)


def complement_in(sub: SubspaceBasis, sup: SubspaceBasis) -> SubspaceBasis:
    """
    Columns of ``sup`` completing ``sub`` to a basis of span(sup).

    Greedy echelon selection: the pivot columns of [sub | sup] that fall in
    the ``sup`` block.
    """
    if sub.ambient_dim != sup.ambient_dim:
        raise ValueError(f"Ambient mismatch: {sub.ambient_dim} vs {sup.ambient_dim}")
    if sup.dim == 0:
        if sub.dim:
            raise NotASubspaceError("Nonzero subspace of the zero space")
        return SubspaceBasis.empty(sup.field, sup.ambient_dim)

    stacked = np.hstack((sub.vectors, sup.vectors))
    reduced = stacked.row_reduce()
    pivots = _pivot_columns(reduced)
    if len(pivots) != sup.dim or _rank(sup.vectors) != sup.dim:
        raise NotASubspaceError(f"Subspace of dim {sub.dim} is not contained in the given space of dim {sup.dim}")
    chosen = [j - sub.dim for j in pivots if j >= sub.dim]
    return SubspaceBasis(sup.field, sup.vectors[:, chosen])


def _pivot_columns(reduced: galois.FieldArray) -> List[int]:
    ints = np.asarray(reduced.view(np.ndarray))
    out = []
    for row in ints:
        nz = np.flatnonzero(row)
        if len(nz) == 0:
            break
        out.append(int(nz[0]))
    return out


def subspaces_equal(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    """span(a) == span(b), compared through rank(a), rank(b) and rank([a|b])."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"Ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    ra, rb = _rank(a.vectors), _rank(b.vectors)
    if ra != rb:
        return False
    return _rank(np.hstack((a.vectors, b.vectors))) == ra


def solve_linear(field: Field, a, b) -> Optional[galois.FieldArray]:
    """
    One solution of a x = b via augmented row reduction, or None.

    Free variables are set to zero.
    """
    a = field.GF(a) if not isinstance(a, galois.FieldArray) else a
    b = field.GF(b) if not isinstance(b, galois.FieldArray) else b
    n = a.shape[1]
    if a.shape[0] == 0:
        return field.zeros(n) if not np.any(b) else None
    augmented = np.hstack((a, b.reshape(-1, 1)))
    reduced = augmented.row_reduce()
    x = field.zeros(n)
    for row in reduced:
        nz = np.flatnonzero(np.asarray(row.view(np.ndarray)))
        if len(nz) == 0:
            continue
        if nz[0] == n:
            return None
        x[nz[0]] = row[n]
    return x


def quotient_complement(constraints: SparseMatrix, generators: SparseMatrix):
    """
    Complement of span(generators) inside ker(constraints).

    The generator columns are eliminated (as rows of their transpose) to get
    pivot coordinates P; the vectors of ker(constraints) vanishing on P form
    a complement, so only a small null space has to be expanded.

    Args:
        constraints: r x n matrix C
        generators: n x m matrix G with C G = 0

    Returns:
        (complement basis, dim span(G), pivot coordinates P)
    """
    f = constraints.field
    n = constraints.n_cols
    if generators.n_rows != n:
        raise ValueError(f"Generators live in dimension {generators.n_rows}, constraints in {n}")

    gen_elim = eliminate(generators.transpose())
    taken = set(gen_elim.pivot_columns)
    keep = [c for c in range(n) if c not in taken]

    reduced = eliminate(constraints.select_columns(keep))
    kernel = reduced.nullspace()
    out = np.zeros((n, kernel.dim), dtype=np.int64)
    if kernel.dim:
        out[keep, :] = np.asarray(kernel.vectors.view(np.ndarray))
    return SubspaceBasis(f, f.GF(out)), gen_elim.rank, sorted(taken)
