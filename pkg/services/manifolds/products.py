"""
Product Triangulations
Staircase products of simplicial complexes and the antipodal RP^n generator.
"""

from itertools import combinations
from typing import Dict, List

from services.simplicial.complex import Complex, Simplex, barycentric_subdivision, build_complex


def staircase_product(a: Complex, b: Complex) -> Complex:
    """
    Triangulate |a| x |b|.

    Vertex (u, v) gets index u * b.n_vertices + v, so the global order is
    lexicographic. Each facet pair (σ of dim p, τ of dim q) contributes the
    C(p+q, p) monotone lattice paths through the (p+1) x (q+1) grid.
    """
    p, q = a.dim, b.dim
    width = b.n_vertices
    steps = p + q
    paths = []
    for right in combinations(range(steps), p):
        moves = set(right)
        i = j = 0
        path = [(0, 0)]
        for s in range(steps):
            if s in moves:
                i += 1
            else:
                j += 1
            path.append((i, j))
        paths.append(path)

    facets = []
    for sigma in a.facets:
        for tau in b.facets:
            for path in paths:
                facets.append(tuple(sigma[i] * width + tau[j] for i, j in path))
    return build_complex(a.n_vertices * width, facets)


def cross_polytope_boundary(m: int) -> Complex:
    """
    Boundary of the cross-polytope in R^m: vertex 2i is +e_i, 2i+1 is -e_i.
    """
    facets = []
    for signs in range(2**m):
        facets.append(tuple(2 * i + ((signs >> i) & 1) for i in range(m)))
    return build_complex(2 * m, facets)


def antipodal_quotient_rp(n: int) -> Complex:
    """
    RP^n as the barycentric subdivision of the (n+1)-dimensional
    cross-polytope boundary modulo the antipodal map.
    """
    if not 2 <= n <= 4:
        raise ValueError(f"antipodal_quotient_rp supports 2 <= n <= 4, got {n}")
    sphere = cross_polytope_boundary(n + 1)
    subdivided, vertex_of = barycentric_subdivision(sphere)

    def antipode(face: Simplex) -> Simplex:
        return tuple(sorted(v ^ 1 for v in face))

    # one quotient vertex per orbit {F, -F}, numbered by the smaller face
    orbit_rep: Dict[int, Simplex] = {}
    for face, vertex in vertex_of.items():
        orbit_rep[vertex] = min(face, antipode(face))
    reps = sorted(set(orbit_rep.values()), key=lambda f: (len(f), f))
    label = {rep: i for i, rep in enumerate(reps)}

    facets = set()
    for facet in subdivided.facets:
        image = tuple(sorted(label[orbit_rep[v]] for v in facet))
        if len(set(image)) != len(image):
            raise RuntimeError(f"Antipodal map collapses facet {facet}")
        facets.add(image)
    return build_complex(len(reps), sorted(facets))


def product_of(factors: List[Complex]) -> Complex:
    """Left-associated staircase product of a list of complexes."""
    if not factors:
        raise ValueError("Empty product")
    result = factors[0]
    for factor in factors[1:]:
        result = staircase_product(result, factor)
    return result
