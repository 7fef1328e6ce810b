"""
Coloring Spaces
Permitted colorings of a complex, g-colorings, and full-polygon checks.

For a d-dimensional complex and a degree q = d-2 cocycle ω, every (d-1)-face
carries a color space of dimension d-2. A global coloring is permitted when
its restriction to every facet comes from a cocycle on that facet (V_p);
g-colorings are the colorings induced by global coboundaries δβ (V_g).
"""

import sys
from itertools import combinations
from typing import Dict, List, Optional, Sequence

import galois
import numpy as np

from services.algebra.field import Field
from services.algebra.linalg import (
    SparseMatrix,
    SubspaceBasis,
    column_space,
    quotient_complement,
    rank_and_nullspace,
    subspaces_equal,
)
from services.coloring.local import ColoringNotPermitted, OnvViolation, local_coloring, local_values
from services.simplicial.complex import Cochain, Complex, build_complex, coboundary_matrix, standard_simplex


class ColoringSpaces:
    """
    V_p, V_g and a complement of V_g in V_p, in global color coordinates.

    ``complement`` and the dimensions are computed eagerly; full bases of
    V_p and V_g are expanded only on request.
    """

    def __init__(self, framework: "ColoringFramework", complement: SubspaceBasis, dim_g: int, pivot_coords: List[int]):
        self.framework = framework
        self.complement = complement
        self.dim_g = dim_g
        self.pivot_coords = pivot_coords
        self._vp: Optional[SubspaceBasis] = None
        self._vg: Optional[SubspaceBasis] = None

    @property
    def quotient_dim(self) -> int:
        return self.complement.dim

    @property
    def dim_p(self) -> int:
        return self.dim_g + self.quotient_dim

    @property
    def vp_basis(self) -> SubspaceBasis:
        if self._vp is None:
            _, self._vp = rank_and_nullspace(self.framework.constraint_matrix())
        return self._vp

    @property
    def vg_basis(self) -> SubspaceBasis:
        if self._vg is None:
            self._vg = column_space(self.framework.g_map())
        return self._vg

    def __repr__(self) -> str:
        return f"ColoringSpaces(dim V_p={self.dim_p}, dim V_g={self.dim_g}, quotient={self.quotient_dim})"


class ColoringFramework:
    """
    Coloring coordinates of a closed complex under a fixed ω.

    Global coordinate of (color face f, frame vector i) is f * frame_dim + i,
    with color faces in faces[d-1] order.
    """

    def __init__(self, c: Complex, omega: Cochain):
        d = c.dim
        q = d - 2
        if q < 1:
            raise ValueError(f"Colorings need dimension >= 3, got a {d}-complex")
        if omega.degree != q:
            raise ValueError(f"A {d}-complex is colored by degree-{q} cocycles, got degree {omega.degree}")
        if omega.complex is not c and omega.complex != c:
            raise ValueError("ω lives on a different complex")
        if not omega.nonzero_everywhere():
            bad = int(np.flatnonzero(np.asarray(omega.values.view(np.ndarray)) == 0)[0])
            raise OnvViolation(f"ω vanishes on {q}-face {c.faces[q][bad]}")

        self.complex = c
        self.omega = omega
        self.field: Field = omega.field
        self.d = d
        self.q = q
        self.local = local_coloring(d, q, self.field)
        self.frame = self.local.frame
        self.frame_dim = self.frame.dim
        self.color_faces = c.faces[d - 1]
        self.n_coords = len(self.color_faces) * self.frame_dim

        # ω on the q-faces of every color face, local lexicographic order
        self.face_subfaces = c.subface_index_array(q, d - 1)
        omega_f = omega.values[self.face_subfaces]
        self.ratios = omega_f[:, self.frame.pivots] / omega_f[:, [0]]
        # color faces of every facet, local lexicographic order
        self.facet_faces = c.subface_index_array(d - 1, d)
        self.facet_subfaces = c.subface_index_array(q, d)

        self._constraints_cache: Dict[tuple, galois.FieldArray] = {}
        self._constraint_matrix: Optional[SparseMatrix] = None
        self._g_map: Optional[SparseMatrix] = None

    def coordinates(self, nu: Cochain) -> galois.FieldArray:
        """Global coloring induced by a q-cochain (meaningful for cocycles)."""
        nu_f = nu.values[self.face_subfaces]
        coords = nu_f[:, self.frame.pivots] - nu_f[:, [0]] * self.ratios
        return coords.reshape(-1)

    def facet_omega(self, w: int) -> galois.FieldArray:
        return self.omega.values[self.facet_subfaces[w]]

    def facet_constraints(self, w: int) -> galois.FieldArray:
        """Equations cutting out the permitted colorings of facet w (local coordinates)."""
        omega_w = self.facet_omega(w)
        key = tuple(self.field.to_ints(omega_w))
        if key not in self._constraints_cache:
            self._constraints_cache[key] = self.local.constraints(omega_w)
        return self._constraints_cache[key]

    def facet_columns(self, w: int) -> List[int]:
        dim = self.frame_dim
        return [int(f) * dim + i for f in self.facet_faces[w] for i in range(dim)]

    def permitted_subspace(self, w: int) -> SubspaceBasis:
        return self.local.permitted_subspace(self.facet_omega(w))

    def constraint_matrix(self) -> SparseMatrix:
        """Stacked facet equations; its kernel is V_p."""
        if self._constraint_matrix is None:
            rows = []
            for w in range(len(self.complex.facets)):
                cols = self.facet_columns(w)
                for k in self.field.to_ints(self.facet_constraints(w)):
                    rows.append({cols[j]: v for j, v in enumerate(k) if v})
            self._constraint_matrix = SparseMatrix(self.field, len(rows), self.n_coords, rows)
        return self._constraint_matrix

    def projection_matrix(self) -> SparseMatrix:
        """Sparse map from q-cochains to global color coordinates."""
        f = self.field
        ratios = f.to_ints(self.ratios)
        rows = []
        for face, subs in enumerate(self.face_subfaces):
            first = int(subs[0])
            for i, pv in enumerate(self.frame.pivots):
                row = {int(subs[pv]): 1}
                if ratios[face][i]:
                    row[first] = f.neg(ratios[face][i])
                rows.append(row)
        return SparseMatrix(f, self.n_coords, len(self.complex.faces[self.q]), rows)

    def g_map(self) -> SparseMatrix:
        """Columns: colorings induced by δ of the basis (q-1)-cochains."""
        if self._g_map is None:
            delta = coboundary_matrix(self.complex, self.q - 1, self.field)
            self._g_map = self.projection_matrix().matmul(delta)
        return self._g_map

    def is_permitted(self, coloring) -> bool:
        return not np.any(self.constraint_matrix().matvec(coloring))

    def global_spaces(self, verbose: bool = False) -> ColoringSpaces:
        c = self.constraint_matrix()
        g = self.g_map()
        if verbose:
            print(
                f"📐 Coloring system: {c.n_rows} equations, {c.n_cols} coordinates, {g.n_cols} generators",
                file=sys.stderr,
            )
        complement, dim_g, pivots = quotient_complement(c, g)
        if verbose:
            print(f"📐 dim V_g = {dim_g}, dim V_p/V_g = {complement.dim}", file=sys.stderr)
        return ColoringSpaces(self, complement, dim_g, pivots)


def permitted_subspace(c: Complex, simplex: Sequence[int], omega: Cochain) -> SubspaceBasis:
    """
    Permitted colorings of one d-simplex of ``c`` in its local coordinates
    (faces in lexicographic order, frame_dim coordinates each).
    """
    simplex = tuple(simplex)
    d = len(simplex) - 1
    local = local_coloring(d, omega.degree, omega.field)
    return local.permitted_subspace(local_values(omega, simplex))


def global_spaces(c: Complex, omega: Cochain, verbose: bool = False) -> ColoringSpaces:
    """V_p, V_g and the complement of V_g in V_p for a closed complex."""
    return ColoringFramework(c, omega).global_spaces(verbose=verbose)


def boundary_faces(cluster: Complex) -> List[tuple]:
    """(d-1)-faces lying in exactly one facet of the cluster."""
    counts: Dict[tuple, int] = {}
    for facet in cluster.facets:
        for face in combinations(facet, cluster.dim):
            counts[face] = counts.get(face, 0) + 1
    return sorted(face for face, n in counts.items() if n == 1)


def cluster_boundary_space(cluster: Complex, omega: Cochain) -> SubspaceBasis:
    """
    Restrictions to the boundary faces of the permitted colorings of a
    cluster (a union of facets of ∂Δ^{d+1}), coordinates ordered by the
    sorted boundary faces.
    """
    f = omega.field
    d = cluster.dim
    q = omega.degree
    local = local_coloring(d, q, f)
    dim = local.frame.dim
    faces = cluster.faces[d - 1]
    position = {face: j for j, face in enumerate(faces)}

    rows = []
    for facet in cluster.facets:
        cols = [position[face] * dim + i for face in combinations(facet, d) for i in range(dim)]
        for k in f.to_ints(local.constraints(local_values(omega, facet))):
            row = [0] * (len(faces) * dim)
            for j, v in enumerate(k):
                row[cols[j]] = v
            rows.append(row)
    system = f.array(rows)
    permitted = system.null_space()

    boundary = boundary_faces(cluster)
    picks = [position[face] * dim + i for face in boundary for i in range(dim)]
    if permitted.shape[0] == 0:
        return SubspaceBasis.empty(f, len(picks))
    restricted = permitted[:, picks].row_space()
    return SubspaceBasis.from_rows(f, restricted)


def split_clusters(d: int, removed: Sequence[int]):
    """
    The two sides of a move on ∂Δ^{d+1}: facets omitting a vertex of
    ``removed`` versus facets omitting any other vertex.
    """
    vertices = range(d + 2)
    omit = lambda x: tuple(v for v in vertices if v != x)  # noqa: E731
    chosen = set(removed)
    initial = build_complex(d + 2, [omit(x) for x in vertices if x in chosen])
    final = build_complex(d + 2, [omit(x) for x in vertices if x not in chosen])
    return initial, final


def check_full_polygon(d: int, omega: Cochain, m: Optional[int] = None, removed: Optional[Sequence[int]] = None) -> bool:
    """
    Compare the boundary coloring spaces of the two clusters of a split.

    Args:
        d: Dimension of the facets (3 pentagon, 4 hexagon, 5 heptagon)
        omega: Degree d-2 cocycle on Δ^{d+1}, nonzero on every face
        m: Split m|(d+2-m) using the first m vertices
        removed: Explicit vertex set for the initial cluster (overrides m)

    Returns:
        True when both sides have the same permitted boundary colorings
    """
    if removed is None:
        if m is None:
            raise ValueError("Give either m or the removed vertex set")
        removed = list(range(m))
    m = len(removed)
    if not 1 <= m <= d + 1:
        raise ValueError(f"Split {m}|{d + 2 - m} is not a move of ∂Δ^{d + 1}")
    if omega.degree != d - 2:
        raise ValueError(f"Full {d + 2}-gon checks need a degree-{d - 2} cocycle")
    if not omega.nonzero_everywhere():
        raise OnvViolation("ω vanishes on a face of the simplex")

    initial, final = split_clusters(d, removed)
    lhs = cluster_boundary_space(initial, omega.restrict(initial))
    rhs = cluster_boundary_space(final, omega.restrict(final))
    return subspaces_equal(lhs, rhs)


def random_simplex_cocycle(n: int, q: int, field: Field, rng: np.random.Generator, retries: int = 64) -> Cochain:
    """Random coboundary of degree q on Δ^n, nonzero on every q-face."""
    simplex = standard_simplex(n)
    for _ in range(retries):
        beta = Cochain.random(simplex, q - 1, field, rng)
        omega = beta.coboundary()
        if omega.nonzero_everywhere():
            return omega
    raise OnvViolation(f"No nonvanishing degree-{q} coboundary on Δ^{n} found over {field}")


__all__ = [
    "ColoringFramework",
    "ColoringNotPermitted",
    "ColoringSpaces",
    "OnvViolation",
    "boundary_faces",
    "check_full_polygon",
    "cluster_boundary_space",
    "global_spaces",
    "permitted_subspace",
    "random_simplex_cocycle",
    "split_clusters",
]
