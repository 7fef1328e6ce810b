"""
State Sum
Σ over the 5-simplices of M of the characteristic-2 5-cocycle, as a function
of two permitted colorings, and the matrix A of that sum on V_p / V_g.

Q on a 4-face depends only on the colors of that face, so the sum is
evaluated straight from global color coordinates: one bilinear form per
4-face, gathered per facet in omission order.
"""

import sys
from itertools import combinations
from typing import Dict, List, Optional

import galois
import numpy as np
from pydantic import BaseModel

from services.algebra.linalg import SparseMatrix, eliminate
from services.coloring.local import ColoringNotPermitted
from services.coloring.spaces import ColoringFramework, ColoringSpaces
from services.heptagon.cocycles import bilinear_forms, epsilon_tilde, evaluate_forms, facet_q_matrix, lift_to_cocycle
from services.simplicial.complex import Cochain, Complex


class StructureCertificate(BaseModel):
    """Checks that the state sum is a bilinear form in the squares of coordinates."""

    cross_terms_vanish: bool
    A_symmetric: bool

    @property
    def passed(self) -> bool:
        return self.cross_terms_vanish and self.A_symmetric


class InvariantResult(BaseModel):
    """(dim V_p/V_g, rank A) for one cohomology class, with the matrix itself."""

    class_id: str
    quotient_dim: int
    dim_p: int
    dim_g: int
    A: List[List[int]]
    rank_A: int
    seed: int
    certificate: StructureCertificate
    # filled only when the certificate fails: "i+j,l" / "l,i+j" -> state sum
    evaluations: Optional[Dict[str, int]] = None

    @property
    def pair(self):
        return (self.quotient_dim, self.rank_A)


class StateSum:
    """
    The state sum on a fixed (M, ω), ready to evaluate on color vectors.
    """

    def __init__(self, framework: ColoringFramework):
        field = framework.field
        if field.p != 2:
            raise ValueError(f"The state sum is defined in characteristic 2, got {field}")
        if framework.d != 5:
            raise ValueError(f"The state sum needs a 5-manifold, got dimension {framework.d}")
        self.framework = framework
        self.field = field
        self.forms = bilinear_forms(field, framework.omega.values[framework.face_subfaces])
        self.epsilon_tilde = [bool(t) for t in epsilon_tilde(framework.d)]

    @property
    def complex(self) -> Complex:
        return self.framework.complex

    def _as_coords(self, coloring) -> galois.FieldArray:
        if not isinstance(coloring, galois.FieldArray):
            coloring = self.field.array(coloring)
        if coloring.shape != (self.framework.n_coords,):
            raise ValueError(f"Expected {self.framework.n_coords} color coordinates, got {coloring.shape}")
        return coloring.reshape(-1, self.framework.frame_dim)

    def q_values(self, rho, sigma) -> galois.FieldArray:
        """Q(ρ, σ) per facet, shape (facets, 6), omission order."""
        per_face = evaluate_forms(self.forms, self._as_coords(rho), self._as_coords(sigma))
        return facet_q_matrix(per_face, self.framework.facet_faces)

    def facet_values(self, rho, sigma) -> galois.FieldArray:
        """c(ρ, σ) on every facet."""
        qs = self.q_values(rho, sigma)
        total = self.field.zeros(qs.shape[0])
        for a, b in combinations(range(qs.shape[1]), 2):
            total = total + qs[:, a] * qs[:, b]
        for k, tilde in enumerate(self.epsilon_tilde):
            if tilde:
                total = total + qs[:, k] ** 2
        return total

    def total(self, rho, sigma, check: bool = True) -> int:
        if check:
            for name, coloring in (("ρ", rho), ("σ", sigma)):
                if not self.framework.is_permitted(coloring):
                    raise ColoringNotPermitted(f"{name} is not a permitted coloring")
        return int(self.facet_values(rho, sigma).sum())

    def facet_lift(self, w: int, coloring) -> Cochain:
        """A cocycle on facet w inducing the coloring there."""
        facet = self.complex.facets[w]
        coords = self._as_coords(coloring)[self.framework.facet_faces[w]]
        return lift_to_cocycle(self.complex, facet, self.framework.omega, coords)


def state_sum(M: Complex, omega: Cochain, rho, sigma, check: bool = True) -> int:
    """
    Σ_{Δ⁵ ⊂ M} c(ρ, σ) for permitted colorings ρ, σ (char 2, ω nonzero everywhere).

    Raises:
        ColoringNotPermitted: if ``check`` and a coloring is not permitted
    """
    return StateSum(ColoringFramework(M, omega)).total(rho, sigma, check=check)


def extract_matrix(
    M: Complex,
    omega: Cochain,
    spaces: ColoringSpaces,
    class_id: str = "",
    seed: int = 0,
    verbose: bool = False,
) -> InvariantResult:
    """
    A_ij = state sum on the complement basis pair (e_i, e_j), with the
    cross-term and symmetry certificate and rank A.
    """
    framework = spaces.framework
    if framework.complex != M or not np.array_equal(framework.omega.values, omega.values):
        raise ValueError("Coloring spaces were computed for a different (M, ω)")
    f = framework.field
    n = spaces.quotient_dim
    basis = [spaces.complement.vectors[:, i] for i in range(n)]
    sums = StateSum(framework)

    def value(x, y) -> int:
        return sums.total(x, y, check=False)

    A = [[value(basis[i], basis[j]) for j in range(n)] for i in range(n)]
    symmetric = all(A[i][j] == A[j][i] for i in range(n) for j in range(i + 1, n))

    cross_ok = True
    evaluations: Dict[str, int] = {}
    for i, j in combinations(range(n), 2):
        both = basis[i] + basis[j]
        for l in range(n):
            first = value(both, basis[l])
            second = value(basis[l], both)
            evaluations[f"{i}+{j},{l}"] = first
            evaluations[f"{l},{i}+{j}"] = second
            if first != f.add(A[i][l], A[j][l]) or second != f.add(A[l][i], A[l][j]):
                cross_ok = False

    certificate = StructureCertificate(cross_terms_vanish=cross_ok, A_symmetric=symmetric)
    if not certificate.passed:
        print(
            f"⚠️ Class {class_id or '0'}: state sum is not a symmetric bilinear form in squares "
            f"(cross terms {'ok' if cross_ok else 'fail'}, symmetric {symmetric})",
            file=sys.stderr,
        )

    rank = eliminate(SparseMatrix.from_dense(f, f.array(A))).rank if n else 0
    if verbose:
        print(f"✅ Class {class_id or '0'}: dim V_p/V_g = {n}, rank A = {rank}", file=sys.stderr)

    return InvariantResult(
        class_id=class_id,
        quotient_dim=n,
        dim_p=spaces.dim_p,
        dim_g=spaces.dim_g,
        A=A,
        rank_A=rank,
        seed=seed,
        certificate=certificate,
        evaluations=None if certificate.passed else evaluations,
    )
