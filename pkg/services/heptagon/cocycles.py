"""
Heptagon Cocycles
The bilinear 4-cocycle Q, the bipolynomial 5-cocycles in characteristic 2
and 3, and the coboundary of a cochain given as a function of colorings.

Faces of a simplex are numbered by the position of the omitted vertex; face k
carries the incidence number ε_k = (-1)^k and ε̃_k = (ε_k + 1) / 2. In the
lexicographic face order the k-th omission face sits at position n - k.
"""

from functools import lru_cache
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Union

import galois
import numpy as np

from services.algebra.field import Field
from services.coloring.local import OnvViolation, local_coloring, local_values
from services.simplicial.complex import Cochain, Complex, codim1_signs, simplex_complex, standard_simplex

# ω, ν and η are 3-cochains; colors live on 4-faces; c is evaluated on 5-faces
DEGREE = 3


def omission_signs(n: int) -> List[int]:
    """ε_k for the faces of an n-simplex, k = 0..n."""
    return [(-1) ** k for k in range(n + 1)]


def epsilon_tilde(n: int, flip: bool = False) -> List[int]:
    """ε̃_k = (ε_k + 1) / 2, or 1 - ε̃_k when ``flip`` is set."""
    tilde = [(e + 1) // 2 for e in omission_signs(n)]
    return [1 - t for t in tilde] if flip else tilde


@lru_cache(maxsize=None)
def omission_face_positions(n: int, q: int) -> np.ndarray:
    """
    Row k: local indices (among the q-faces of Δ^n) of the q-faces of the
    face omitting vertex k, in that face's own lexicographic order.
    """
    simplex = standard_simplex(n)
    index = simplex.face_index[q]
    rows = []
    for k in range(n + 1):
        face = tuple(v for v in range(n + 1) if v != k)
        rows.append([index[sub] for sub in combinations(face, q + 1)])
    return np.array(rows, dtype=np.int64)


def _as_local(values, simplex: Sequence[int], degree: int = DEGREE) -> galois.FieldArray:
    if isinstance(values, Cochain):
        return local_values(values, simplex, degree)
    return values


def _field_of(values) -> Field:
    if isinstance(values, Cochain):
        return values.field
    raise TypeError("Pass the field explicitly when evaluating on raw arrays")


def bilinear_forms(field: Field, omega_faces: galois.FieldArray) -> galois.FieldArray:
    """
    Matrices of Q on the color frame, one per 4-face.

    Args:
        field: Coefficient field
        omega_faces: ω on the 3-subfaces of each 4-face, shape (m, 5), local order

    Returns:
        FieldArray of shape (m, dim, dim) with B[f, i, j] = Q_f(b_i, b_j)
    """
    if np.any(np.asarray(omega_faces.view(np.ndarray)) == 0):
        raise OnvViolation("ω vanishes on a tetrahedron of a color face")
    frame = local_coloring(DEGREE + 1, DEGREE, field).frame
    signs = field.array([field.from_int(s) for s in codim1_signs(DEGREE + 1)])
    weights = signs / omega_faces
    dim = frame.dim
    out = field.zeros((omega_faces.shape[0], dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            column = (weights * (frame.basis[i] * frame.basis[j])).sum(axis=1)
            out[:, i, j] = column
            out[:, j, i] = column
    return out


def evaluate_forms(forms: galois.FieldArray, x: galois.FieldArray, y: galois.FieldArray) -> galois.FieldArray:
    """Σ_ij x[f,i] B[f,i,j] y[f,j] for every face f."""
    dim = forms.shape[1]
    total = None
    for i in range(dim):
        for j in range(dim):
            term = x[:, i] * forms[:, i, j] * y[:, j]
            total = term if total is None else total + term
    return total


class LiftedPair:
    """
    Cocycles ν, η on one simplex representing a double coloring.

    Values are local arrays on the 3-faces of ``simplex`` in lexicographic order.
    """

    def __init__(self, simplex: Sequence[int], omega: galois.FieldArray, nu: galois.FieldArray, eta: galois.FieldArray):
        self.simplex = tuple(simplex)
        self.omega = omega
        self.nu = nu
        self.eta = eta

    @property
    def n(self) -> int:
        return len(self.simplex) - 1

    def face(self, k: int) -> "LiftedPair":
        picks = omission_face_positions(self.n, DEGREE)[k]
        face = tuple(v for pos, v in enumerate(self.simplex) if pos != k)
        return LiftedPair(face, self.omega[picks], self.nu[picks], self.eta[picks])


class DoubleColoring:
    """
    A pair of colorings (ρ, σ) on one simplex, with the ω they are taken modulo.

    ``colors1``/``colors2`` have one row of frame coordinates per 4-face of the
    simplex, in lexicographic order.
    """

    def __init__(
        self,
        simplex: Sequence[int],
        field: Field,
        omega: galois.FieldArray,
        colors1: galois.FieldArray,
        colors2: galois.FieldArray,
    ):
        self.simplex = tuple(simplex)
        self.field = field
        self.omega = omega
        self.colors1 = colors1
        self.colors2 = colors2

    @property
    def n(self) -> int:
        return len(self.simplex) - 1

    @classmethod
    def from_cocycles(cls, simplex: Sequence[int], field: Field, omega, nu, eta) -> "DoubleColoring":
        local = local_coloring(len(simplex) - 1, DEGREE, field)
        return cls(simplex, field, omega, local.coordinates(omega, nu), local.coordinates(omega, eta))

    @classmethod
    def random(cls, n: int, field: Field, rng: np.random.Generator, retries: int = 64) -> "DoubleColoring":
        """Random permitted double coloring of Δ^n under a random nonvanishing ω."""
        from services.coloring.spaces import random_simplex_cocycle

        omega = random_simplex_cocycle(n, DEGREE, field, rng, retries=retries).values
        rows = local_coloring(n, DEGREE, field).cocycles
        nu = field.random(rng, rows.shape[0]) @ rows
        eta = field.random(rng, rows.shape[0]) @ rows
        return cls.from_cocycles(tuple(range(n + 1)), field, omega, nu, eta)

    def restrict(self, k: int) -> "DoubleColoring":
        """The double coloring of the face omitting vertex k."""
        tetra = omission_face_positions(self.n, DEGREE)[k]
        colored = omission_face_positions(self.n, DEGREE + 1)[k]
        face = tuple(v for pos, v in enumerate(self.simplex) if pos != k)
        return DoubleColoring(face, self.field, self.omega[tetra], self.colors1[colored], self.colors2[colored])

    def lift(self) -> LiftedPair:
        local = local_coloring(self.n, DEGREE, self.field)
        return LiftedPair(
            self.simplex,
            self.omega,
            local.lift(self.omega, self.colors1),
            local.lift(self.omega, self.colors2),
        )

    def face_q_values(self) -> galois.FieldArray:
        """Q on every 4-face of the simplex, lexicographic order."""
        subs = standard_simplex(self.n).subface_index_array(DEGREE, DEGREE + 1)
        forms = bilinear_forms(self.field, self.omega[subs])
        return evaluate_forms(forms, self.colors1, self.colors2)


def lift_to_cocycle(c: Complex, simplex: Sequence[int], omega: Cochain, colors) -> Cochain:
    """
    A 3-cocycle on ``simplex`` whose face classes modulo ω are ``colors``.

    Args:
        c: Complex containing the simplex
        simplex: Vertex tuple of a face of c of dimension >= 4
        omega: Parameter cocycle on c
        colors: Frame coordinates, one row per 4-face of the simplex

    Returns:
        Cochain on the simplex (as its own complex)

    Raises:
        ColoringNotPermitted: if the colors lie outside the permitted subspace
    """
    simplex = tuple(simplex)
    if not c.has_face(simplex):
        raise ValueError(f"{simplex} is not a face of the complex")
    local = local_coloring(len(simplex) - 1, DEGREE, omega.field)
    values = local.lift(local_values(omega, simplex, DEGREE), colors)
    return Cochain(simplex_complex(simplex), DEGREE, omega.field, values)


def q_value(delta4: Sequence[int], omega, nu, eta, field: Optional[Field] = None) -> int:
    """
    Q(ν, η) on a 4-simplex: Σ_k (-1)^k ν η / ω over its tetrahedra.

    ω, ν, η are Cochains on a complex containing delta4, or local arrays in
    lexicographic order (then ``field`` is required).
    """
    field = field or _field_of(omega)
    delta4 = tuple(delta4)
    if len(delta4) != DEGREE + 2:
        raise ValueError(f"Q lives on 4-simplices, got {delta4}")
    w, x, y = (_as_local(v, delta4) for v in (omega, nu, eta))
    if np.any(np.asarray(w.view(np.ndarray)) == 0):
        raise OnvViolation(f"ω vanishes on a tetrahedron of {delta4}")
    signs = field.array([field.from_int(s) for s in codim1_signs(DEGREE + 1)])
    return int((signs * x * y / w).sum())


def _facet_q_values(w: Sequence[int], omega, nu, eta, field: Field) -> List[int]:
    """Q on the six 4-faces of a 5-simplex, omission order."""
    w = tuple(w)
    if len(w) != DEGREE + 3:
        raise ValueError(f"c lives on 5-simplices, got {w}")
    om, x, y = (_as_local(v, w) for v in (omega, nu, eta))
    pair = LiftedPair(w, om, x, y)
    values = []
    for k in range(len(w)):
        face = pair.face(k)
        values.append(q_value(face.simplex, face.omega, face.nu, face.eta, field=field))
    return values


def c_from_q(q_values: Sequence[int], field: Field, characteristic: int = 2, flip_epsilon: bool = False) -> int:
    """
    The bipolynomial 5-cocycle from the six Q values of a 5-simplex.

    Char 2: Σ_{k<l} Q_k Q_l + Σ_k ε̃_k Q_k².
    Char 3: Σ_{k<l<m} ε_k ε_l ε_m Q_k Q_l Q_m.
    """
    if field.p != characteristic:
        raise ValueError(f"Characteristic {characteristic} formula evaluated over {field}")
    n = len(q_values) - 1
    if characteristic == 2:
        total = 0
        for a, b in combinations(q_values, 2):
            total = field.add(total, field.mul(a, b))
        for t, qv in zip(epsilon_tilde(n, flip_epsilon), q_values):
            if t:
                total = field.add(total, field.mul(qv, qv))
        return total
    if characteristic == 3:
        signed = [qv if e > 0 else field.neg(qv) for e, qv in zip(omission_signs(n), q_values)]
        total = 0
        for a, b, d in combinations(signed, 3):
            total = field.add(total, field.mul(field.mul(a, b), d))
        return total
    raise ValueError(f"No closed-form 5-cocycle in characteristic {characteristic}")


def c_value(
    w: Sequence[int],
    omega,
    nu,
    eta,
    characteristic: int = 2,
    flip_epsilon: bool = False,
    field: Optional[Field] = None,
) -> int:
    """
    Value of the characteristic-2 or -3 bipolynomial 5-cocycle on a 5-simplex.

    ν and η must be cocycles on the whole of ``w``.
    """
    field = field or _field_of(omega)
    if characteristic not in (2, 3):
        raise ValueError(f"characteristic must be 2 or 3, got {characteristic}")
    qs = _facet_q_values(w, omega, nu, eta, field)
    return c_from_q(qs, field, characteristic, flip_epsilon)


def c_value_generic(w: Sequence[int], omega, nu, eta, k: int = 1, field: Optional[Field] = None) -> int:
    """The degree-p^k bipolynomial 5-cocycle, p = characteristic of the field."""
    from services.heptagon.universal import universal_polynomial

    field = field or _field_of(omega)
    qs = _facet_q_values(w, omega, nu, eta, field)
    return universal_polynomial(field.p, k).evaluate(qs, field)


Evaluator = Callable[[DoubleColoring], int]


def heptagon_coboundary(evaluator: Evaluator, simplex: Sequence[int], coloring: DoubleColoring) -> int:
    """Σ_k (-1)^k evaluator(restriction of the coloring to face k)."""
    if tuple(simplex) != coloring.simplex:
        raise ValueError(f"Coloring lives on {coloring.simplex}, not {tuple(simplex)}")
    f = coloring.field
    total = 0
    for k, sign in enumerate(omission_signs(coloring.n)):
        value = int(evaluator(coloring.restrict(k)))
        total = f.add(total, value if sign > 0 else f.neg(value))
    return total


def q_evaluator(coloring: DoubleColoring) -> int:
    if coloring.n != DEGREE + 1:
        raise ValueError(f"Q needs a 4-simplex, got {coloring.simplex}")
    return int(coloring.face_q_values()[0])


def c_evaluator(characteristic: int = 2, flip_epsilon: bool = False) -> Evaluator:
    def evaluate(coloring: DoubleColoring) -> int:
        if coloring.n != DEGREE + 2:
            raise ValueError(f"c needs a 5-simplex, got {coloring.simplex}")
        qs = coloring.face_q_values().tolist()[::-1]
        return c_from_q([int(v) for v in qs], coloring.field, characteristic, flip_epsilon)

    return evaluate


def universal_evaluator(p: int, k: int) -> Evaluator:
    from services.heptagon.universal import universal_polynomial

    polynomial = universal_polynomial(p, k)

    def evaluate(coloring: DoubleColoring) -> int:
        if coloring.n != DEGREE + 2:
            raise ValueError(f"c needs a 5-simplex, got {coloring.simplex}")
        qs = coloring.face_q_values().tolist()[::-1]
        return polynomial.evaluate([int(v) for v in qs], coloring.field)

    return evaluate


def facet_q_matrix(q_faces: Union[galois.FieldArray, np.ndarray], facet_faces: np.ndarray) -> galois.FieldArray:
    """Gather per-face Q values into (facets, 6) in omission order."""
    return q_faces[facet_faces[:, ::-1]]
