"""
Simplicial Complexes
Complexes from facet lists, cochains, coboundary matrices and structural checks.

Vertices are integers; a simplex is a strictly increasing vertex tuple and all
orientation signs come from that order. The face omitting the k-th vertex of
an n-simplex has incidence number (-1)^k.
"""

from collections import deque
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np
from pydantic import BaseModel

from services.algebra.field import Field
from services.algebra.linalg import SparseMatrix

Simplex = Tuple[int, ...]


class Complex:
    """
    Immutable pure simplicial complex with every face materialized.

    Attributes:
        n_vertices: Size of the vertex range (vertices are 0..n_vertices-1)
        dim: Dimension of the facets
        facets: Lexicographically sorted facet tuples
        faces: faces[q] is the sorted list of q-simplices
        face_index: face_index[q] maps a q-simplex to its position in faces[q]
    """

    def __init__(self, n_vertices: int, facets: Sequence[Simplex]):
        self.n_vertices = n_vertices
        self.facets: Tuple[Simplex, ...] = tuple(sorted(facets))
        self.dim = len(self.facets[0]) - 1 if self.facets else -1

        self.faces: List[List[Simplex]] = []
        for q in range(self.dim + 1):
            found = {sub for facet in self.facets for sub in combinations(facet, q + 1)}
            self.faces.append(sorted(found))
        self.face_index: List[Dict[Simplex, int]] = [
            {face: i for i, face in enumerate(level)} for level in self.faces
        ]
        self._subface_arrays: Dict[Tuple[int, int], np.ndarray] = {}
        self._coboundaries: Dict[Tuple[int, int, int], SparseMatrix] = {}

    def __repr__(self) -> str:
        return f"Complex(dim={self.dim}, vertices={self.n_vertices}, facets={len(self.facets)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self.n_vertices == other.n_vertices and self.facets == other.facets

    def __hash__(self) -> int:
        return hash((self.n_vertices, self.facets))

    def f_vector(self) -> List[int]:
        return [len(level) for level in self.faces]

    def has_face(self, face: Simplex) -> bool:
        q = len(face) - 1
        return 0 <= q <= self.dim and tuple(face) in self.face_index[q]

    def subface_index_array(self, q: int, dim: int) -> np.ndarray:
        """
        Positions of the q-subfaces of every dim-face.

        Row i lists, in lexicographic order of the subfaces of faces[dim][i],
        their indices in faces[q]. Shape (len(faces[dim]), C(dim+1, q+1)).
        """
        key = (q, dim)
        if key not in self._subface_arrays:
            local = list(combinations(range(dim + 1), q + 1))
            index = self.face_index[q]
            table = np.array(
                [[index[tuple(face[p] for p in pos)] for pos in local] for face in self.faces[dim]],
                dtype=np.int64,
            ).reshape(len(self.faces[dim]), len(local))
            self._subface_arrays[key] = table
        return self._subface_arrays[key]

    def star(self, face: Simplex) -> List[Simplex]:
        """Facets containing the given face."""
        members = set(face)
        return [f for f in self.facets if members.issubset(f)]


def build_complex(n_vertices: int, facets: Sequence[Sequence[int]]) -> Complex:
    """
    Validate a facet list and build the complex.

    Args:
        n_vertices: Vertices are 0..n_vertices-1
        facets: Strictly increasing vertex tuples of equal length

    Returns:
        Complex with face tables populated
    """
    if not facets:
        raise ValueError("A complex needs at least one facet")
    size = len(facets[0])
    seen = set()
    clean = []
    for facet in facets:
        facet = tuple(int(v) for v in facet)
        if len(facet) != size:
            raise ValueError(f"Facet {facet} has {len(facet)} vertices, expected {size}")
        if any(a >= b for a, b in zip(facet, facet[1:])):
            raise ValueError(f"Facet {facet} is not strictly increasing")
        if facet[0] < 0 or facet[-1] >= n_vertices:
            raise ValueError(f"Facet {facet} uses a vertex outside 0..{n_vertices - 1}")
        if facet in seen:
            raise ValueError(f"Duplicate facet {facet}")
        seen.add(facet)
        clean.append(facet)
    return Complex(n_vertices, clean)


@lru_cache(maxsize=None)
def standard_simplex(n: int) -> Complex:
    """The full n-simplex on vertices 0..n."""
    return Complex(n + 1, [tuple(range(n + 1))])


@lru_cache(maxsize=4096)
def simplex_complex(simplex: Simplex) -> Complex:
    """The full simplex on the given (global) vertex labels."""
    return Complex(max(simplex) + 1, [tuple(simplex)])


def boundary_of_simplex(n: int) -> Complex:
    """Boundary of the n-simplex: the n+1 faces of Δ^n, a (n-1)-sphere."""
    return Complex(n + 1, list(combinations(range(n + 1), n)))


def codim1_signs(n: int) -> List[int]:
    """Incidence numbers of the faces of an n-simplex, in lexicographic face order."""
    # the j-th face in lexicographic order omits vertex n - j
    return [(-1) ** (n - j) for j in range(n + 1)]


def coboundary_matrix(c: Complex, q: int, field: Field) -> SparseMatrix:
    """
    Matrix of δ: C^q -> C^{q+1}.

    Entry ((q+1)-face, q-face) is (-1)^k when the q-face omits the k-th vertex.
    """
    if not 0 <= q < c.dim:
        raise ValueError(f"Coboundary degree {q} out of range for a {c.dim}-complex")
    key = (q, field.p, field.k)
    if key not in c._coboundaries:
        table = c.subface_index_array(q, q + 1)
        signs = [field.from_int(s) for s in codim1_signs(q + 1)]
        rows = [{int(col): signs[j] for j, col in enumerate(line)} for line in table]
        c._coboundaries[key] = SparseMatrix(field, len(c.faces[q + 1]), len(c.faces[q]), rows)
    return c._coboundaries[key]


class Cochain:
    """
    Degree-q cochain: one field element per q-face, in faces[q] order.
    """

    def __init__(self, complex: Complex, degree: int, field: Field, values):
        if not 0 <= degree <= complex.dim:
            raise ValueError(f"Degree {degree} out of range for a {complex.dim}-complex")
        values = values if isinstance(values, galois.FieldArray) else field.array(values)
        if values.shape != (len(complex.faces[degree]),):
            raise ValueError(
                f"A degree-{degree} cochain needs {len(complex.faces[degree])} values, got {values.shape}"
            )
        self.complex = complex
        self.degree = degree
        self.field = field
        self.values = values

    @classmethod
    def zeros(cls, complex: Complex, degree: int, field: Field) -> "Cochain":
        return cls(complex, degree, field, field.zeros(len(complex.faces[degree])))

    @classmethod
    def from_function(cls, complex: Complex, degree: int, field: Field, fn: Callable[[Simplex], int]) -> "Cochain":
        return cls(complex, degree, field, [fn(face) for face in complex.faces[degree]])

    @classmethod
    def random(cls, complex: Complex, degree: int, field: Field, rng: np.random.Generator) -> "Cochain":
        return cls(complex, degree, field, field.random(rng, len(complex.faces[degree])))

    def __getitem__(self, face: Simplex) -> int:
        return int(self.values[self.complex.face_index[self.degree][tuple(face)]])

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        return Cochain(self.complex, self.degree, self.field, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check_compatible(other)
        return Cochain(self.complex, self.degree, self.field, self.values - other.values)

    def scale(self, a: int) -> "Cochain":
        return Cochain(self.complex, self.degree, self.field, self.field.GF(a) * self.values)

    def _check_compatible(self, other: "Cochain"):
        if other.complex is not self.complex and other.complex != self.complex:
            raise ValueError("Cochains live on different complexes")
        if other.degree != self.degree or other.field != self.field:
            raise ValueError("Cochains differ in degree or field")

    def coboundary(self) -> "Cochain":
        """δ of this cochain, evaluated with the alternating-sign rule."""
        c, q, f = self.complex, self.degree, self.field
        if q >= c.dim:
            raise ValueError(f"No coboundary of a top-degree cochain on a {c.dim}-complex")
        table = c.subface_index_array(q, q + 1)
        out = f.zeros(len(c.faces[q + 1]))
        for j, sign in enumerate(codim1_signs(q + 1)):
            column = self.values[table[:, j]]
            out = out + column if sign > 0 else out - column
        return Cochain(c, q + 1, f, out)

    def is_cocycle(self) -> bool:
        if self.degree == self.complex.dim:
            return True
        return not np.any(self.coboundary().values)

    def restrict(self, target: Complex) -> "Cochain":
        """Values on the degree-q faces of a subcomplex (faces looked up by vertex tuple)."""
        index = self.complex.face_index[self.degree]
        picks = [index[face] for face in target.faces[self.degree]]
        return Cochain(target, self.degree, self.field, self.values[picks])

    def nonzero_everywhere(self) -> bool:
        return bool(np.all(self.values != 0))


def euler_characteristic(c: Complex) -> int:
    return sum((-1) ** q * len(level) for q, level in enumerate(c.faces))


def barycentric_subdivision(c: Complex) -> Tuple[Complex, Dict[Simplex, int]]:
    """
    First barycentric subdivision.

    One new vertex per nonempty face (numbered by dimension, then
    lexicographically); facets are the full flags of faces.

    Returns:
        (subdivided complex, map face -> new vertex)
    """
    vertex_of: Dict[Simplex, int] = {}
    for level in c.faces:
        for face in level:
            vertex_of[face] = len(vertex_of)

    facets = set()
    for facet in c.facets:
        for order in permutations(facet):
            flag = (vertex_of[tuple(sorted(order[: j + 1]))] for j in range(len(order)))
            facets.add(tuple(sorted(flag)))
    return Complex(len(vertex_of), sorted(facets)), vertex_of


class ValidationReport(BaseModel):
    """Outcome of the closed-pseudomanifold check."""

    passed: bool
    dim: int
    n_vertices: int
    n_facets: int
    euler_characteristic: int
    bad_ridges: List[Tuple[List[int], int]] = []
    components: int = 1
    orientable: Optional[bool] = None


def validate_closed_pseudomanifold(c: Complex, max_reported: int = 20) -> ValidationReport:
    """
    Check that every ridge lies in exactly two facets and that the facet
    adjacency graph is connected.
    """
    ridges: Dict[Simplex, List[int]] = {}
    for i, facet in enumerate(c.facets):
        for ridge in combinations(facet, c.dim):
            ridges.setdefault(ridge, []).append(i)

    bad = [(list(r), len(owners)) for r, owners in sorted(ridges.items()) if len(owners) != 2]
    components = _count_components(len(c.facets), ridges.values())
    passed = not bad and components == 1
    return ValidationReport(
        passed=passed,
        dim=c.dim,
        n_vertices=c.n_vertices,
        n_facets=len(c.facets),
        euler_characteristic=euler_characteristic(c),
        bad_ridges=bad[:max_reported],
        components=components,
        orientable=is_orientable(c) if passed else None,
    )


def _count_components(n: int, groups) -> int:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for owners in groups:
        for other in owners[1:]:
            ra, rb = find(owners[0]), find(other)
            if ra != rb:
                parent[ra] = rb
    return len({find(i) for i in range(n)})


def is_orientable(c: Complex) -> bool:
    """
    Facet-sign 2-colouring: orientations o(w) = ±1 such that every ridge
    receives opposite induced signs from its two facets.
    """
    owners: Dict[Simplex, List[Tuple[int, int]]] = {}
    for i, facet in enumerate(c.facets):
        for k in range(len(facet)):
            ridge = facet[:k] + facet[k + 1 :]
            owners.setdefault(ridge, []).append((i, (-1) ** k))

    neighbours: List[List[Tuple[int, int]]] = [[] for _ in c.facets]
    for pair in owners.values():
        if len(pair) != 2:
            continue
        (a, sa), (b, sb) = pair
        # o(a) * sa == -o(b) * sb
        relation = -sa * sb
        neighbours[a].append((b, relation))
        neighbours[b].append((a, relation))

    orientation: Dict[int, int] = {}
    for start in range(len(c.facets)):
        if start in orientation:
            continue
        orientation[start] = 1
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, relation in neighbours[a]:
                want = orientation[a] * relation
                if b not in orientation:
                    orientation[b] = want
                    queue.append(b)
                elif orientation[b] != want:
                    return False
    return True
