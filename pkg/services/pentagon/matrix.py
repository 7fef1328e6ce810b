"""
Pentagon Matrix
The d = 3 instance of the coloring framework: the 2x2 transfer matrix of a
tetrahedron, its normalized form and the full pentagon check.

Vertices carry values z_i with ω_ij = z_i - z_j. A triangle ijk is colored
by x_ijk = ν_ij - ν_jk ω_ij / ω_jk; on the tetrahedron 1234 the colors of
124 and 234 are determined by those of 123 and 134.
"""

from typing import List, Optional, Tuple

import numpy as np
import sympy
from pydantic import BaseModel, field_validator, model_validator

from services.algebra.field import Field, get_field
from services.coloring.local import local_coloring
from services.coloring.spaces import check_full_polygon
from services.simplicial.complex import Cochain, standard_simplex

Matrix2 = List[List[int]]


class PentagonData(BaseModel):
    """Vertex values z over GF(p^k); all pairwise differences must be nonzero."""

    p: int
    k: int = 1
    z: List[int]

    @field_validator("z")
    @classmethod
    def _enough_vertices(cls, z: List[int]) -> List[int]:
        if len(z) < 4:
            raise ValueError(f"Need at least four z values, got {len(z)}")
        return z

    @model_validator(mode="after")
    def _distinct(self) -> "PentagonData":
        order = self.p**self.k
        for v in self.z:
            if not 0 <= v < order:
                raise ValueError(f"z value {v} is not an element of GF({self.p}^{self.k})")
        if len(set(self.z)) != len(self.z):
            raise ValueError(f"z values must be pairwise distinct, got {self.z}")
        return self

    @property
    def field(self) -> Field:
        return get_field(self.p, self.k)

    def omega(self, i: int, j: int) -> int:
        return self.field.sub(self.z[i], self.z[j])

    def omega_cochain(self) -> Cochain:
        """ω on the edges of the simplex spanned by all vertices."""
        simplex = standard_simplex(len(self.z) - 1)
        return Cochain.from_function(simplex, 1, self.field, lambda e: self.omega(e[0], e[1]))


def pentagon_matrix(data: PentagonData) -> Matrix2:
    """
    Matrix [[a, b], [c, e]] with (x124, x234) = M (x123, x134).

    With d_ij = z_j - z_i and D = d13 d24:
    a = d23 d14 / D, b = d12 d34 / D, c = -d23 / d13, e = d23 / d13.
    """
    f = data.field
    z1, z2, z3, z4 = data.z[:4]
    d = lambda i, j: f.sub(j, i)  # noqa: E731
    denominator = f.mul(d(z1, z3), d(z2, z4))
    a = f.div(f.mul(d(z2, z3), d(z1, z4)), denominator)
    b = f.div(f.mul(d(z1, z2), d(z3, z4)), denominator)
    e = f.div(d(z2, z3), d(z1, z3))
    return [[a, b], [f.neg(e), e]]


def normalization_squares(data: PentagonData) -> Tuple[int, int, int, int]:
    """r_ijk² = (z_k - z_j) / ((z_k - z_i)(z_j - z_i)) for 123, 124, 134, 234."""
    f = data.field
    z = data.z

    def square(i: int, j: int, k: int) -> int:
        return f.div(f.sub(z[k], z[j]), f.mul(f.sub(z[k], z[i]), f.sub(z[j], z[i])))

    return square(0, 1, 2), square(0, 1, 3), square(0, 2, 3), square(1, 2, 3)


def normalized_pentagon_matrix(data: PentagonData) -> Optional[Matrix2]:
    """
    The matrix in normalized colors r_ijk x_ijk, or None when a square root
    is missing from the field.
    """
    f = data.field
    roots = [f.sqrt(s) for s in normalization_squares(data)]
    if any(r is None for r in roots):
        return None
    r123, r124, r134, r234 = roots
    (a, b), (c, e) = pentagon_matrix(data)
    return [
        [f.div(f.mul(a, r124), r123), f.div(f.mul(b, r124), r134)],
        [f.div(f.mul(c, r234), r123), f.div(f.mul(e, r234), r134)],
    ]


def _framework_scale(data: PentagonData, i: int, j: int, k: int) -> int:
    # frame coordinate over x_ijk, both evaluated on the cocycle (ν_ij, ν_ik, ν_jk) = (1, 1, 0)
    f = data.field
    return f.sub(1, f.div(data.omega(i, k), data.omega(i, j)))


def framework_pentagon_matrix(data: PentagonData) -> Matrix2:
    """
    The transfer matrix read off the permitted subspace of the tetrahedron
    0123, converted to x_ijk coordinates.
    """
    f = data.field
    omega = data.omega_cochain()
    tetra = standard_simplex(3)
    local = omega.values[[omega.complex.face_index[1][e] for e in tetra.faces[1]]]
    basis = local_coloring(3, 1, f).permitted_subspace(local).vectors

    # triangles in lexicographic order: 012, 013, 023, 123
    inputs, outputs = basis[[0, 2], :], basis[[1, 3], :]
    transfer = outputs @ np.linalg.inv(inputs)

    scale_in = [_framework_scale(data, 0, 1, 2), _framework_scale(data, 0, 2, 3)]
    scale_out = [_framework_scale(data, 0, 1, 3), _framework_scale(data, 1, 2, 3)]
    entries = f.to_ints(transfer)
    return [
        [f.div(f.mul(entries[r][s], scale_in[s]), scale_out[r]) for s in range(2)]
        for r in range(2)
    ]


def pentagon_relation_check(z: List[int], field: Field, m: int = 2) -> bool:
    """
    Full pentagon: both sides of the m|(5-m) split of ∂Δ⁴ have the same
    permitted boundary colorings under ω_ij = z_i - z_j.

    Raises:
        ValueError: if z has repeated values or does not have five entries
    """
    if len(z) != 5:
        raise ValueError(f"The pentagon check needs five z values, got {len(z)}")
    data = PentagonData(p=field.p, k=field.k, z=list(z))
    return check_full_polygon(3, data.omega_cochain(), m=m)


def cross_ratio_identity() -> bool:
    """
    Symbolic checks: (z3-z2)(z4-z1) + (z2-z1)(z4-z3) = (z3-z1)(z4-z2), and the
    normalized matrix has unit-norm rows with equal diagonal squares.
    """
    z1, z2, z3, z4 = sympy.symbols("z1:5")
    identity = sympy.expand((z3 - z2) * (z4 - z1) + (z2 - z1) * (z4 - z3) - (z3 - z1) * (z4 - z2))

    denominator = (z3 - z1) * (z4 - z2)
    a = (z3 - z2) * (z4 - z1) / denominator
    b = (z2 - z1) * (z4 - z3) / denominator
    e = (z3 - z2) / (z3 - z1)
    c = -e

    def square(i, j, k):
        return (k - j) / ((k - i) * (j - i))

    s123, s124, s134, s234 = square(z1, z2, z3), square(z1, z2, z4), square(z1, z3, z4), square(z2, z3, z4)
    a2 = a**2 * s124 / s123
    b2 = b**2 * s124 / s134
    c2 = c**2 * s234 / s123
    e2 = e**2 * s234 / s134
    checks = [
        identity,
        sympy.simplify(a2 + b2 - 1),
        sympy.simplify(c2 + e2 - 1),
        sympy.simplify(a2 - e2),
        sympy.simplify(b2 - c2),
    ]
    return all(check == 0 for check in checks)
