"""
Simplicial Cohomology
Cohomology bases over F_p, class enumeration and lifting to (onv) cocycles.
"""

import sys
from itertools import product
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from services.algebra.field import Field, get_field
from services.algebra.linalg import SparseMatrix, quotient_complement
from services.config import get_settings
from services.simplicial.complex import Cochain, Complex, coboundary_matrix


class ClassCapExceeded(ValueError):
    """Too many cohomology classes to enumerate."""


class LiftError(RuntimeError):
    """No random coboundary made the cocycle nonzero on every face."""


class CohomologyBasis:
    """
    Representative cocycles of a basis of H^q(c; F).

    Representatives are independent modulo coboundaries; they span a
    complement of B^q in Z^q.
    """

    def __init__(self, complex: Complex, degree: int, field: Field, representatives: List[Cochain]):
        self.complex = complex
        self.degree = degree
        self.field = field
        self.representatives = representatives

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def __repr__(self) -> str:
        return f"CohomologyBasis(degree={self.degree}, dim={self.dim}, {self.field})"


class CohomologyClass(BaseModel):
    """One enumerated class: bit vector over the basis plus a representative."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    class_id: str
    bits: List[int]
    representative: Cochain


class OmegaCocycle:
    """
    A degree-q cocycle over a large field, nonzero on every q-face.
    """

    def __init__(self, cochain: Cochain, class_id: str, seed: int, attempts: int = 1):
        self.cochain = cochain
        self.class_id = class_id
        self.seed = seed
        self.attempts = attempts

    @property
    def field(self) -> Field:
        return self.cochain.field

    @property
    def complex(self) -> Complex:
        return self.cochain.complex

    def __getitem__(self, face):
        return self.cochain[face]

    def __repr__(self) -> str:
        return f"OmegaCocycle(class={self.class_id or '0'}, seed={self.seed}, {self.field})"


def cohomology_basis(c: Complex, q: int, field: Field) -> CohomologyBasis:
    """
    Basis of H^q(c; field).

    Uses the quotient-complement reduction: eliminate the image of δ^{q-1}
    to get pivot coordinates, then expand the (small) kernel of δ^q on the
    remaining coordinates.
    """
    n = len(c.faces[q])
    if q < c.dim:
        cocycle_test = coboundary_matrix(c, q, field)
    else:
        cocycle_test = SparseMatrix.zeros(field, 0, n)
    if q > 0:
        boundaries = coboundary_matrix(c, q - 1, field)
    else:
        boundaries = SparseMatrix.zeros(field, n, 0)

    complement, _, _ = quotient_complement(cocycle_test, boundaries)
    reps = [Cochain(c, q, field, complement.vectors[:, j]) for j in range(complement.dim)]
    return CohomologyBasis(c, q, field, reps)


def betti_numbers(c: Complex, field: Optional[Field] = None) -> List[int]:
    """dim H^q(c; field) for q = 0..dim (default field F_2)."""
    field = field or get_field(2, 1)
    return [cohomology_basis(c, q, field).dim for q in range(c.dim + 1)]


def enumerate_classes(basis: CohomologyBasis, cap: Optional[int] = None) -> List[CohomologyClass]:
    """
    All 2^dim classes with 0/1 coefficients over the basis.

    Entry 0 is the zero class; the first basis vector is the leading bit.
    """
    cap = get_settings().class_cap if cap is None else cap
    if basis.dim > cap:
        raise ClassCapExceeded(f"dim H^{basis.degree} = {basis.dim} exceeds the class cap {cap}")

    field = basis.field
    zero = field.zeros(len(basis.complex.faces[basis.degree]))
    classes = []
    for bits in product((0, 1), repeat=basis.dim):
        values = zero.copy()
        for bit, rep in zip(bits, basis.representatives):
            if bit:
                values = values + rep.values
        classes.append(
            CohomologyClass(
                class_id="".join(str(b) for b in bits),
                bits=list(bits),
                representative=Cochain(basis.complex, basis.degree, field, values),
            )
        )
    return classes


def lift_omega_nonzero(
    c: Complex,
    rep: Cochain,
    field: Field,
    seed: int,
    retries: Optional[int] = None,
    class_id: str = "",
) -> OmegaCocycle:
    """
    Embed a small-field cocycle into ``field`` and add a random coboundary
    δβ until no face value vanishes.

    Args:
        c: Complex carrying the cocycle
        rep: Cocycle over the prime field of ``field``
        field: Target field GF(p^k)
        seed: Seed of the numpy Generator drawing β
        retries: Attempts before LiftError (default from settings)
        class_id: Label carried into the result

    Returns:
        OmegaCocycle with δω = 0 and ω nonzero on every face of its degree
    """
    retries = get_settings().lift_retries if retries is None else retries
    if rep.field.p != field.p or rep.field.k != 1:
        raise ValueError(f"Representative over {rep.field} cannot be embedded into {field}")
    q = rep.degree
    if q == 0:
        raise ValueError("Cannot lift a degree-0 class by coboundaries")
    if not rep.is_cocycle():
        raise ValueError("Representative is not a cocycle")

    embedded = Cochain(c, q, field, field.GF(np.asarray(rep.values.view(np.ndarray))))
    rng = np.random.default_rng(seed)
    for attempt in range(1, retries + 1):
        beta = Cochain.random(c, q - 1, field, rng)
        omega = embedded + beta.coboundary()
        if omega.nonzero_everywhere():
            if not omega.is_cocycle():
                raise RuntimeError("Lifted cochain is not a cocycle")
            return OmegaCocycle(omega, class_id, seed, attempt)

    print(f"❌ (onv) lift failed after {retries} attempts over {field}", file=sys.stderr)
    raise LiftError(
        f"No coboundary made the class nonzero on every {q}-face after {retries} attempts; "
        f"use a larger extension degree k (current {field})"
    )
