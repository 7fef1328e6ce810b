"""
Local Coloring Data
Cocycles, color frames and permitted colorings on a single simplex.

A color of a (q+1)-face f is a q-cocycle on f modulo ω|_f. Coordinates use a
fixed frame: the reduced echelon basis of {ν ∈ Z^q(f) : ν[0] = 0}, with ν
first shifted by a multiple of ω so that its value on the first q-face of f
vanishes. All local cochains are indexed by the lexicographic face order of
the standard simplex.
"""

from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence

import galois
import numpy as np
from pydantic import BaseModel

from services.algebra.field import Field
from services.algebra.linalg import SubspaceBasis, solve_linear
from services.simplicial.complex import codim1_signs, standard_simplex


class OnvViolation(ValueError):
    """ω vanishes on a face where a nonzero value is required."""


class ColoringNotPermitted(ValueError):
    """Colors do not come from a cocycle on the simplex."""


class ColorBasis(BaseModel):
    """Canonical color frame of one (q+1)-face."""

    face: List[int]
    basis: List[List[int]]
    pivots: List[int]

    @property
    def dim(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def coboundary_dense(n: int, q: int, field: Field) -> galois.FieldArray:
    """Dense δ^q on the standard n-simplex (rows: (q+1)-faces, cols: q-faces)."""
    simplex = standard_simplex(n)
    table = simplex.subface_index_array(q, q + 1)
    out = field.zeros((len(simplex.faces[q + 1]), len(simplex.faces[q])))
    for j, sign in enumerate(codim1_signs(q + 1)):
        out[np.arange(table.shape[0]), table[:, j]] = field.from_int(sign)
    return out


@lru_cache(maxsize=None)
def cocycle_rows(n: int, q: int, field: Field) -> galois.FieldArray:
    """Reduced echelon basis (as rows) of the q-cocycles on the standard n-simplex."""
    if q == n:
        return field.GF.Identity(1)
    return coboundary_dense(n, q, field).null_space().row_reduce()


class FaceFrame:
    """Color frame shared by every (q+1)-face: basis rows and their pivots."""

    def __init__(self, q: int, field: Field):
        rows = cocycle_rows(q + 1, q, field)
        ints = np.asarray(rows.view(np.ndarray))
        leads = [int(np.flatnonzero(r)[0]) for r in ints]
        if leads[0] != 0:
            raise RuntimeError("Cocycle frame has no vector supported on the first face")
        self.q = q
        self.field = field
        self.basis = rows[1:]
        self.pivots = leads[1:]
        self.n_subfaces = q + 2

    @property
    def dim(self) -> int:
        return len(self.pivots)


@lru_cache(maxsize=None)
def face_frame(q: int, field: Field) -> FaceFrame:
    return FaceFrame(q, field)


class LocalColoring:
    """
    Coloring data on the standard n-simplex for degree-q cocycles.

    Color-carrying faces are the (q+1)-faces, in lexicographic order; the
    coordinate of (face j, basis vector i) is j * dim + i.
    """

    def __init__(self, n: int, q: int, field: Field):
        if not 1 <= q <= n - 1:
            raise ValueError(f"Degree {q} needs an n-simplex with n >= {q + 1}, got n={n}")
        self.n = n
        self.q = q
        self.field = field
        self.simplex = standard_simplex(n)
        self.frame = face_frame(q, field)
        self.color_faces = self.simplex.faces[q + 1]
        # q-faces of every color face, in the face's own lexicographic order
        self.face_subfaces = self.simplex.subface_index_array(q, q + 1)
        self.cocycles = cocycle_rows(n, q, field)

    @property
    def n_coords(self) -> int:
        return len(self.color_faces) * self.frame.dim

    def check_onv(self, omega: galois.FieldArray):
        zero = np.flatnonzero(np.asarray(omega.view(np.ndarray)) == 0)
        if len(zero):
            face = self.simplex.faces[self.q][int(zero[0])]
            raise OnvViolation(f"ω vanishes on local {self.q}-face {face}")

    def projection(self, omega: galois.FieldArray) -> galois.FieldArray:
        """Matrix sending local q-cochains to color coordinates."""
        self.check_onv(omega)
        frame = self.frame
        out = self.field.zeros((self.n_coords, len(self.simplex.faces[self.q])))
        for j, subs in enumerate(self.face_subfaces):
            first = subs[0]
            for i, pv in enumerate(frame.pivots):
                row = j * frame.dim + i
                out[row, subs[pv]] += self.field.GF(1)
                out[row, first] -= omega[subs[pv]] / omega[first]
        return out

    def coordinates(self, omega: galois.FieldArray, nu: galois.FieldArray) -> galois.FieldArray:
        """Color coordinates of a local cochain, shape (n_color_faces, dim)."""
        return (self.projection(omega) @ nu).reshape(len(self.color_faces), self.frame.dim)

    def permitted_rows(self, omega: galois.FieldArray) -> galois.FieldArray:
        """Images of the cocycle basis; they span the permitted colorings."""
        return self.cocycles @ self.projection(omega).T

    def permitted_subspace(self, omega: galois.FieldArray) -> SubspaceBasis:
        rows = self.permitted_rows(omega).row_space()
        return SubspaceBasis.from_rows(self.field, rows)

    def constraints(self, omega: galois.FieldArray) -> galois.FieldArray:
        """Rows k with k·y = 0 exactly for permitted colorings y (reduced echelon)."""
        return self.permitted_rows(omega).null_space().row_reduce()

    def lift(self, omega: galois.FieldArray, colors) -> galois.FieldArray:
        """
        A cocycle on the simplex inducing the given colors.

        Raises:
            ColoringNotPermitted: if no cocycle induces them
        """
        if not isinstance(colors, galois.FieldArray):
            colors = self.field.array(colors)
        target = colors.reshape(-1)
        images = self.permitted_rows(omega)
        coeffs = solve_linear(self.field, images.T, target)
        if coeffs is None:
            raise ColoringNotPermitted("Colors are not induced by any cocycle on the simplex")
        return coeffs @ self.cocycles


@lru_cache(maxsize=None)
def local_coloring(n: int, q: int, field: Field) -> LocalColoring:
    return LocalColoring(n, q, field)


def local_values(cochain, simplex: Sequence[int], degree: Optional[int] = None) -> galois.FieldArray:
    """Values of a cochain on the faces of ``simplex`` in local lexicographic order."""
    degree = cochain.degree if degree is None else degree
    index = cochain.complex.face_index[degree]
    picks = [index[face] for face in combinations(tuple(simplex), degree + 1)]
    return cochain.values[picks]


def color_basis(c, face: Sequence[int], omega) -> ColorBasis:
    """
    Canonical color basis of a (q+1)-face of ``c`` (q = degree of ω).

    The basis is the same reduced echelon frame for every face; ω enters
    only through the (onv) check and the coordinate map.
    """
    face = tuple(face)
    q = omega.degree
    if len(face) != q + 2:
        raise ValueError(f"Color faces of a degree-{q} cocycle have {q + 2} vertices, got {face}")
    values = local_values(omega, face)
    if np.any(np.asarray(values.view(np.ndarray)) == 0):
        raise OnvViolation(f"ω vanishes on a {q}-face of {face}")
    frame = face_frame(q, omega.field)
    return ColorBasis(
        face=list(face),
        basis=omega.field.to_ints(frame.basis),
        pivots=list(frame.pivots),
    )
