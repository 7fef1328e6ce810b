"""
Pachner Moves
Bistellar moves on closed d-complexes, extension of ω and colorings across
a move, and the invariance harness.

A move of kind m-n acts at a face B with |B| = n whose star is m facets with
vertex union U, |U| = d + 2. With A = U \\ B the move replaces the facets
U \\ {a} (a in A) by the facets U \\ {b} (b in B). A must not already be a
face. A 1-n move cones a facet over the new vertex n_vertices; an m-1 move
removes vertex B and shifts higher labels down by one.
"""

import sys
from collections import Counter
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np
from pydantic import BaseModel

from services.algebra.field import Field
from services.algebra.linalg import solve_linear
from services.cohomology.basis import LiftError, lift_omega_nonzero
from services.coloring.local import ColoringNotPermitted, coboundary_dense
from services.coloring.spaces import ColoringFramework, ColoringSpaces
from services.config import get_settings
from services.invariant.state_sum import InvariantResult, StateSum, extract_matrix
from services.simplicial.complex import Cochain, Complex, Simplex, build_complex, validate_closed_pseudomanifold


class MoveNotApplicable(ValueError):
    """The requested move violates a star or link condition."""


class MoveDescriptor(BaseModel):
    """
    A move kind "m-n" at location B (the n-vertex face whose star is replaced).

    ``location`` None means: pick the first applicable location.
    """

    kind: str
    location: Optional[List[int]] = None
    new_vertex: Optional[int] = None

    @property
    def m(self) -> int:
        return int(self.kind.split("-")[0])

    @property
    def n(self) -> int:
        return int(self.kind.split("-")[1])

    def token(self) -> str:
        where = "auto" if self.location is None else ":".join(str(v) for v in self.location)
        return f"{self.kind}@{where}"


class MoveResult:
    """
    Outcome of a move.

    Attributes:
        old: Complex before the move
        complex: Complex after the move
        descriptor: The applied move, location resolved
        a_set, b_set, union: A, B and U in old labels (a 1-n move's new vertex included)
        removed, added: Facets of the two clusters, in old labels
        vertex_map: Old label -> new label (identity except for m-1 moves)
        correspondence: Per dimension, old -> new labels of the faces the move keeps
    """

    def __init__(
        self,
        old: Complex,
        complex: Complex,
        descriptor: MoveDescriptor,
        a_set: Simplex,
        b_set: Simplex,
        removed: List[Simplex],
        added: List[Simplex],
        vertex_map: Dict[int, int],
    ):
        self.old = old
        self.complex = complex
        self.descriptor = descriptor
        self.a_set = a_set
        self.b_set = b_set
        self.union = tuple(sorted(a_set + b_set))
        self.removed = removed
        self.added = added
        self.vertex_map = vertex_map

    def map_face(self, face: Sequence[int]) -> Simplex:
        return tuple(sorted(self.vertex_map[v] for v in face))

    def created_faces(self, q: int) -> List[Simplex]:
        """New q-faces (they all contain A), in new labels."""
        a = set(self.a_set)
        return sorted(
            self.map_face(face) for face in combinations(self.union, q + 1)
            if a.issubset(face) and not set(self.b_set).issubset(face)
        )

    def destroyed_faces(self, q: int) -> List[Simplex]:
        """Removed q-faces (they all contain B), in old labels."""
        b = set(self.b_set)
        return sorted(
            face for face in combinations(self.union, q + 1)
            if b.issubset(face) and not set(self.a_set).issubset(face)
        )

    def unchanged_faces(self, q: int) -> Dict[Simplex, Simplex]:
        """Old q-face -> new q-face for every q-face the move keeps (those not containing B)."""
        b = set(self.b_set)
        return {face: self.map_face(face) for face in self.old.faces[q] if not b.issubset(face)}

    @property
    def correspondence(self) -> List[Dict[Simplex, Simplex]]:
        """unchanged_faces(q) for q = 0..d."""
        return [self.unchanged_faces(q) for q in range(self.old.dim + 1)]

    def inverse_descriptor(self) -> MoveDescriptor:
        """The move undoing this one on the new complex."""
        kind = f"{self.descriptor.n}-{self.descriptor.m}"
        return MoveDescriptor(kind=kind, location=list(self.map_face(self.a_set)))

    def __repr__(self) -> str:
        return f"MoveResult({self.descriptor.token()}: {len(self.old.facets)} -> {len(self.complex.facets)} facets)"


def _parse_kind(kind: str, d: int) -> Tuple[int, int]:
    try:
        m, n = (int(x) for x in kind.split("-"))
    except ValueError:
        raise MoveNotApplicable(f"Malformed move kind '{kind}'")
    if m < 1 or n < 1 or m + n != d + 2:
        raise MoveNotApplicable(f"Move {kind} does not exist in dimension {d}; need m + n = {d + 2}")
    return m, n


def _locate(M: Complex, kind: str, location: Sequence[int]) -> Tuple[Simplex, Simplex, Optional[int]]:
    """Check applicability; return (A, B, new vertex)."""
    d = M.dim
    m, n = _parse_kind(kind, d)
    b_set = tuple(sorted(int(v) for v in location))
    if len(b_set) != n:
        raise MoveNotApplicable(f"Move {kind} acts at a face with {n} vertices, got {b_set}")
    if not M.has_face(b_set):
        raise MoveNotApplicable(f"{b_set} is not a face of the complex")

    star = M.star(b_set)
    if len(star) != m:
        raise MoveNotApplicable(f"Star of {b_set} has {len(star)} facets, move {kind} needs {m}")

    if m == 1:
        new_vertex = M.n_vertices
        return (new_vertex,), b_set, new_vertex

    union = sorted({v for facet in star for v in facet})
    if len(union) != d + 2:
        raise MoveNotApplicable(
            f"Star of {b_set} spans {len(union)} vertices; link is not the boundary of a simplex"
        )
    a_set = tuple(v for v in union if v not in b_set)
    if M.has_face(a_set):
        raise MoveNotApplicable(f"{a_set} is already a face; the move would create a duplicate")
    return a_set, b_set, None


def apply_move(M: Complex, mv: MoveDescriptor, validate: bool = True) -> MoveResult:
    """
    Replace the star of mv.location by the complementary star.

    Raises:
        MoveNotApplicable: naming the failed condition
    """
    if mv.location is None:
        mv = find_move(M, mv.kind)
    a_set, b_set, new_vertex = _locate(M, mv.kind, mv.location)
    union = tuple(sorted(a_set + b_set))
    removed = [tuple(v for v in union if v != a) for a in a_set]
    added = [tuple(v for v in union if v != b) for b in b_set]

    n_vertices = M.n_vertices + (1 if new_vertex is not None else 0)
    vertex_map = {v: v for v in range(n_vertices)}
    if len(b_set) == 1:
        gone = b_set[0]
        vertex_map = {v: v - (1 if v > gone else 0) for v in range(M.n_vertices) if v != gone}
        n_vertices = M.n_vertices - 1

    drop = set(removed)
    facets = [f for f in M.facets if f not in drop] + added
    facets = [tuple(sorted(vertex_map[v] for v in f)) for f in facets]
    new = build_complex(n_vertices, facets)

    if validate:
        report = validate_closed_pseudomanifold(new)
        if not report.passed:
            raise RuntimeError(f"Move {mv.token()} produced an invalid complex: {report.bad_ridges[:3]}")

    resolved = MoveDescriptor(kind=mv.kind, location=list(b_set), new_vertex=new_vertex)
    return MoveResult(M, new, resolved, a_set, b_set, removed, added, vertex_map)


def find_move(M: Complex, kind: str) -> MoveDescriptor:
    """First applicable move of a kind, scanning faces of the right size in order."""
    _, n = _parse_kind(kind, M.dim)
    for face in M.faces[n - 1]:
        try:
            _locate(M, kind, face)
        except MoveNotApplicable:
            continue
        return MoveDescriptor(kind=kind, location=list(face))
    raise MoveNotApplicable(f"No applicable {kind} move in {M}")


def _candidates(M: Complex, kind: str) -> List[Simplex]:
    """Faces whose star has the size the move needs; _locate decides the rest."""
    m, n = _parse_kind(kind, M.dim)
    counts = Counter(face for facet in M.facets for face in combinations(facet, n))
    return [face for face, count in counts.items() if count == m]


def _random_move(M: Complex, kinds: Sequence[str], rng: np.random.Generator) -> Optional[MoveResult]:
    """An applicable move of the first kind that has one, at a random location."""
    for kind in kinds:
        faces = _candidates(M, kind)
        for i in rng.permutation(len(faces)):
            try:
                return apply_move(M, MoveDescriptor(kind=kind, location=list(faces[i])), validate=False)
            except MoveNotApplicable:
                continue
    return None


def simplify_complex(M: Complex, seed: int = 0, patience: int = 200, verbose: bool = False) -> Complex:
    """
    Shrink a closed triangulation with bistellar moves.

    Moves with m > n (vertex removals first) are applied while any exists.
    Then a random non-reducing move is made, an m = n move in even dimension
    or a burst of 2-3 style moves in odd dimension, and reduction resumes.
    Stops after ``patience`` rounds without a smaller complex and returns the
    smallest one seen, ordered by (vertices, facets). Deterministic per seed.
    """
    d = M.dim
    reducing = [f"{m}-{d + 2 - m}" for m in range(d + 1, 0, -1) if m > d + 2 - m]
    jiggle = f"{(d + 2) // 2}-{d + 2 - (d + 2) // 2}"
    rng = np.random.default_rng(seed)

    def size(c: Complex) -> Tuple[int, int]:
        return c.n_vertices, len(c.facets)

    best = current = M
    idle = 0
    while idle < patience:
        while (moved := _random_move(current, reducing, rng)) is not None:
            current = moved.complex
        if size(current) < size(best):
            best, idle = current, 0
            if verbose:
                print(f"📐 {best.n_vertices} vertices, {len(best.facets)} facets", file=sys.stderr)
        else:
            idle += 1

        burst = 1 if d % 2 == 0 else int(rng.integers(1, 4))
        made = 0
        while made < burst and (moved := _random_move(current, [jiggle], rng)) is not None:
            current = moved.complex
            made += 1
        if not made:
            break

    report = validate_closed_pseudomanifold(best)
    if not report.passed:
        raise RuntimeError(f"Simplification produced an invalid complex: {report.bad_ridges[:3]}")
    return best


def parse_script(text: str) -> List[MoveDescriptor]:
    """
    Parse "1-6@0:1:2:3:4:5,2-5@auto,..." into move descriptors.
    """
    moves = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        kind, _, where = token.partition("@")
        if "-" not in kind:
            raise ValueError(f"Malformed move token '{token}'")
        if not where or where == "auto":
            moves.append(MoveDescriptor(kind=kind))
            continue
        try:
            location = [int(v) for v in where.split(":")]
        except ValueError:
            raise ValueError(f"Malformed location in move token '{token}'")
        moves.append(MoveDescriptor(kind=kind, location=location))
    return moves


def _extend_omega(result: MoveResult, omega: Cochain, rng: np.random.Generator, retries: int) -> Cochain:
    f = omega.field
    q = omega.degree
    union = result.union
    a = set(result.a_set)
    local_faces = list(combinations(range(len(union)), q + 1))
    unknown = [j for j, pos in enumerate(local_faces) if a.issubset(union[p] for p in pos)]
    known = [j for j in range(len(local_faces)) if j not in set(unknown)]

    solved: Dict[Simplex, int] = {}
    if unknown:
        delta = coboundary_dense(len(union) - 1, q, f)
        known_values = f.array([omega[tuple(union[p] for p in local_faces[j])] for j in known])
        rhs = -(delta[:, known] @ known_values)
        lhs = delta[:, unknown]
        particular = solve_linear(f, lhs, rhs)
        if particular is None:
            raise LiftError("ω does not extend across the move; it is not a cocycle")
        homogeneous = lhs.null_space()
        for _ in range(retries):
            values = particular
            if homogeneous.shape[0]:
                values = particular + f.random(rng, homogeneous.shape[0]) @ homogeneous
            if np.all(values != 0):
                break
        else:
            print(f"❌ ω extension failed after {retries} attempts over {f}", file=sys.stderr)
            raise LiftError(
                f"No extension of ω across {result.descriptor.token()} is nonzero on every new "
                f"{q}-face after {retries} attempts; use a larger extension degree k (current {f})"
            )
        for j, value in zip(unknown, f.to_ints(values)):
            solved[tuple(union[p] for p in local_faces[j])] = value

    inverse = {new: old for old, new in result.vertex_map.items()}
    old_index = result.old.face_index[q]
    values = []
    for face in result.complex.faces[q]:
        original = tuple(sorted(inverse[v] for v in face))
        if original in old_index:
            values.append(int(omega.values[old_index[original]]))
        else:
            values.append(solved[original])
    return Cochain(result.complex, q, f, values)


def _extend_coloring(result: MoveResult, old: ColoringFramework, new: ColoringFramework, coloring) -> galois.FieldArray:
    f = new.field
    dim = new.frame_dim
    color_q = new.d - 1
    old_coords = f.to_ints(coloring if isinstance(coloring, galois.FieldArray) else f.array(coloring))
    inverse = {n: o for o, n in result.vertex_map.items()}
    old_index = result.old.face_index[color_q]

    values: List[Optional[int]] = [None] * new.n_coords
    unknown: List[int] = []
    for j, face in enumerate(new.color_faces):
        original = tuple(sorted(inverse[v] for v in face))
        if original in old_index:
            base = old_index[original] * dim
            values[j * dim:(j + 1) * dim] = old_coords[base:base + dim]
        else:
            unknown.extend(range(j * dim, (j + 1) * dim))

    if unknown:
        position = {c: i for i, c in enumerate(unknown)}
        added = {result.map_face(facet) for facet in result.added}
        rows, rhs = [], []
        for w, facet in enumerate(new.complex.facets):
            if facet not in added:
                continue
            cols = new.facet_columns(w)
            for k in f.to_ints(new.facet_constraints(w)):
                row = [0] * len(unknown)
                acc = 0
                for c, v in zip(cols, k):
                    if c in position:
                        row[position[c]] = v
                    elif v and values[c]:
                        acc = f.add(acc, f.mul(v, values[c]))
                rows.append(row)
                rhs.append(f.neg(acc))
        solution = solve_linear(f, f.array(rows), f.array(rhs))
        if solution is None:
            raise ColoringNotPermitted(f"Coloring does not extend across {result.descriptor.token()}")
        for c, v in zip(unknown, f.to_ints(solution)):
            values[c] = v

    extended = f.array(values)
    if not new.is_permitted(extended):
        raise ColoringNotPermitted(f"Extended coloring is not permitted after {result.descriptor.token()}")
    return extended


def extend_data(
    result: MoveResult,
    omega: Cochain,
    colorings: Optional[List] = None,
    field: Optional[Field] = None,
    seed: int = 0,
    retries: Optional[int] = None,
) -> Tuple[Cochain, List[galois.FieldArray]]:
    """
    Carry ω and permitted colorings across a move.

    ω is solved on Δ^{d+1} = U with its values on surviving faces fixed and
    the free parameters randomized until no new face value vanishes.
    Colorings keep their coordinates on surviving color faces; the new
    faces are solved from the constraints of the new facets.

    Returns:
        (ω on the new complex, extended colorings)
    """
    if field is not None and field != omega.field:
        raise ValueError(f"ω lives over {omega.field}, not {field}")
    retries = get_settings().lift_retries if retries is None else retries
    rng = np.random.default_rng(seed)
    new_omega = _extend_omega(result, omega, rng, retries)
    if not new_omega.is_cocycle():
        raise RuntimeError("Extended ω is not a cocycle")

    colorings = colorings or []
    if not colorings:
        return new_omega, []
    old_framework = ColoringFramework(result.old, omega)
    new_framework = ColoringFramework(result.complex, new_omega)
    return new_omega, [_extend_coloring(result, old_framework, new_framework, c) for c in colorings]


class HarnessStep(BaseModel):
    move: str
    facets: int
    quotient_dim: int
    rank_A: int
    values_preserved: bool


class HarnessReport(BaseModel):
    """(dim V_p/V_g, rank A) before and after every move of a script."""

    manifold: str
    class_id: str
    seed: int
    initial: Tuple[int, int]
    steps: List[HarnessStep]

    @property
    def constant(self) -> bool:
        return all((s.quotient_dim, s.rank_A) == self.initial for s in self.steps)

    @property
    def values_preserved(self) -> bool:
        return all(s.values_preserved for s in self.steps)


def _invariants(M: Complex, omega: Cochain, seed: int, class_id: str) -> Tuple[ColoringSpaces, InvariantResult]:
    spaces = ColoringFramework(M, omega).global_spaces()
    return spaces, extract_matrix(M, omega, spaces, class_id=class_id, seed=seed)


def invariance_harness(
    M: Complex,
    representative: Cochain,
    field: Field,
    seed: int,
    script: List[MoveDescriptor],
    name: str = "M",
    class_id: str = "",
    verbose: bool = False,
) -> HarnessReport:
    """
    Apply a move script, recomputing the invariant from scratch after each move.

    The complement basis of the starting complex is carried along as colorings;
    after each move the state sums of its pairs are compared with the
    previous complex.
    """
    omega = lift_omega_nonzero(M, representative, field, seed, class_id=class_id).cochain
    spaces, result = _invariants(M, omega, seed, class_id)
    initial = result.pair
    if verbose:
        print(f"🧮 {name} class {class_id or '0'}: start {initial}", file=sys.stderr)

    # state sums on complement basis pairs are exactly A
    colorings = [spaces.complement.vectors[:, i] for i in range(result.quotient_dim)]
    values = result.A

    steps = []
    current = M
    for index, mv in enumerate(script):
        move = apply_move(current, mv)
        omega, colorings = extend_data(move, omega, colorings, seed=seed + index + 1)
        spaces, result = _invariants(move.complex, omega, seed, class_id)
        sums = StateSum(spaces.framework)
        moved = [[sums.total(x, y, check=False) for y in colorings] for x in colorings]
        step = HarnessStep(
            move=move.descriptor.token(),
            facets=len(move.complex.facets),
            quotient_dim=result.quotient_dim,
            rank_A=result.rank_A,
            values_preserved=moved == values,
        )
        if verbose:
            mark = "✅" if (step.quotient_dim, step.rank_A) == initial and step.values_preserved else "❌"
            print(f"{mark} {step.move}: {step.facets} facets, {(step.quotient_dim, step.rank_A)}", file=sys.stderr)
        steps.append(step)
        values = moved
        current = move.complex

    return HarnessReport(manifold=name, class_id=class_id, seed=seed, initial=initial, steps=steps)
