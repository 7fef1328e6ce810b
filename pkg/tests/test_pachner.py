"""
Unit tests for bistellar moves, data extension and the invariance harness.
"""

import numpy as np
import pytest

from services.algebra.field import get_field
from services.cohomology.basis import betti_numbers, cohomology_basis, enumerate_classes, lift_omega_nonzero
from services.coloring.spaces import ColoringFramework
from services.manifolds.catalog import resolve_manifold
from services.manifolds.products import antipodal_quotient_rp
from services.pachner.moves import (
    MoveDescriptor,
    MoveNotApplicable,
    apply_move,
    extend_data,
    find_move,
    invariance_harness,
    parse_script,
    simplify_complex,
)
from services.simplicial.complex import Cochain, boundary_of_simplex, euler_characteristic, validate_closed_pseudomanifold


def test_one_six_and_back(sphere5):
    """Test a 1-6 move on ∂Δ⁶ and its inverse."""
    move = apply_move(sphere5, MoveDescriptor(kind="1-6", location=[0, 1, 2, 3, 4, 5]))
    assert len(move.complex.facets) == 12
    assert move.complex.n_vertices == 8
    assert move.descriptor.new_vertex == 7
    assert move.a_set == (7,)
    assert validate_closed_pseudomanifold(move.complex).passed

    assert len(move.created_faces(3)) == 20
    assert move.destroyed_faces(3) == []

    inverse = move.inverse_descriptor()
    assert inverse.kind == "6-1"
    assert inverse.location == [7]
    back = apply_move(move.complex, inverse)
    assert back.complex.n_vertices == 7
    assert sorted(back.complex.facets) == sorted(sphere5.facets)
    assert len(back.destroyed_faces(3)) == 20


def test_two_five_blocked_on_simplex_boundary(sphere5):
    """Test that ∂Δ⁶ admits no 2-5 move: the new edge already exists."""
    with pytest.raises(MoveNotApplicable, match="already a face"):
        apply_move(sphere5, MoveDescriptor(kind="2-5", location=[0, 1, 2, 3, 4]))
    with pytest.raises(MoveNotApplicable, match="No applicable"):
        find_move(sphere5, "2-5")


def test_move_kind_and_location_errors(sphere5):
    """Test malformed kinds, wrong dimensions and wrong location sizes."""
    with pytest.raises(MoveNotApplicable, match="does not exist"):
        apply_move(sphere5, MoveDescriptor(kind="3-3", location=[0, 1, 2]))
    with pytest.raises(MoveNotApplicable, match="Malformed"):
        apply_move(sphere5, MoveDescriptor(kind="a-b", location=[0]))
    with pytest.raises(MoveNotApplicable, match="5 vertices"):
        apply_move(sphere5, MoveDescriptor(kind="2-5", location=[0, 1, 2]))
    moved = apply_move(sphere5, MoveDescriptor(kind="1-6", location=[0, 1, 2, 3, 4, 5])).complex
    with pytest.raises(MoveNotApplicable, match="not a face"):
        apply_move(moved, MoveDescriptor(kind="1-6", location=[0, 1, 2, 3, 4, 5]))
    with pytest.raises(MoveNotApplicable, match="Star"):
        apply_move(moved, MoveDescriptor(kind="6-1", location=[0]))
    assert issubclass(MoveNotApplicable, ValueError)


def test_parse_script():
    """Test move scripts and their tokens."""
    moves = parse_script("1-6@0:1:2:3:4:5, 2-5@auto,6-1@20,")
    assert [m.kind for m in moves] == ["1-6", "2-5", "6-1"]
    assert moves[0].location == [0, 1, 2, 3, 4, 5]
    assert moves[1].location is None
    assert [m.token() for m in moves] == ["1-6@0:1:2:3:4:5", "2-5@auto", "6-1@20"]
    assert (moves[0].m, moves[0].n) == (1, 6)

    with pytest.raises(ValueError, match="Malformed move token"):
        parse_script("16@0")
    with pytest.raises(ValueError, match="Malformed location"):
        parse_script("1-6@a:b")


def test_find_move_auto(sphere5):
    """Test that auto picks the first facet for a 1-6 move."""
    found = find_move(sphere5, "1-6")
    assert found.location == [0, 1, 2, 3, 4, 5]
    moved = apply_move(sphere5, MoveDescriptor(kind="1-6"))
    assert moved.descriptor.location == [0, 1, 2, 3, 4, 5]


def test_two_five_on_product():
    """Test a 2-5 move on RP2 x S3."""
    M = resolve_manifold("RP2xS3")
    move = apply_move(M, MoveDescriptor(kind="2-5"))
    assert len(move.complex.facets) == 503
    assert len(move.a_set) == 2
    assert move.complex.n_vertices == M.n_vertices
    assert validate_closed_pseudomanifold(move.complex).passed


def test_extend_data(sphere5, f2, gf2_15, rng):
    """Test that ω and colorings carry across a 1-6 move."""
    omega = lift_omega_nonzero(sphere5, Cochain.zeros(sphere5, 3, f2), gf2_15, seed=2).cochain
    framework = ColoringFramework(sphere5, omega)
    colorings = [framework.coordinates(Cochain.random(sphere5, 2, gf2_15, rng).coboundary()) for _ in range(2)]

    move = apply_move(sphere5, MoveDescriptor(kind="1-6", location=[0, 1, 2, 3, 4, 5]))
    new_omega, extended = extend_data(move, omega, colorings, seed=5)
    assert new_omega.is_cocycle()
    assert new_omega.nonzero_everywhere()
    for face in sphere5.faces[3]:
        assert new_omega[face] == omega[face]

    new_framework = ColoringFramework(move.complex, new_omega)
    dim = new_framework.frame_dim
    old_index = sphere5.face_index[4]
    for old, new in zip(colorings, extended):
        assert new_framework.is_permitted(new)
        for j, face in enumerate(new_framework.color_faces):
            if face in old_index:
                i = old_index[face]
                assert np.array_equal(new[j * dim:(j + 1) * dim], old[i * dim:(i + 1) * dim])

    with pytest.raises(ValueError):
        extend_data(move, omega, field=get_field(2, 8))


def test_extend_data_is_seeded(sphere5, f2, gf2_15):
    """Test that the free parameters of ω' depend only on the seed."""
    omega = lift_omega_nonzero(sphere5, Cochain.zeros(sphere5, 3, f2), gf2_15, seed=2).cochain
    move = apply_move(sphere5, MoveDescriptor(kind="1-6", location=[0, 1, 2, 3, 4, 5]))
    first, _ = extend_data(move, omega, seed=9)
    second, _ = extend_data(move, omega, seed=9)
    assert first.values.tolist() == second.values.tolist()


def test_harness_round_trip(s2xs3, f2, gf2_15):
    """Test that the invariant of S2 x S3 survives a 1-6 move and its inverse."""
    report = invariance_harness(
        s2xs3, Cochain.zeros(s2xs3, 3, f2), gf2_15, 0, parse_script("1-6@auto,6-1@20"), name="S2xS3", class_id="0"
    )
    assert report.initial == (1, 0)
    assert [s.facets for s in report.steps] == [205, 200]
    assert report.constant
    assert report.values_preserved


def assert_faces_partitioned(move):
    """Old faces = kept + destroyed and new faces = kept + created, in every dimension."""
    for q in range(move.old.dim + 1):
        kept = move.unchanged_faces(q)
        destroyed = move.destroyed_faces(q)
        created = move.created_faces(q)
        assert set(kept).isdisjoint(destroyed)
        assert sorted(list(kept) + destroyed) == sorted(move.old.faces[q])
        assert set(kept.values()).isdisjoint(created)
        assert sorted(list(kept.values()) + created) == sorted(move.complex.faces[q])
    assert move.correspondence[2] == move.unchanged_faces(2)


def test_face_correspondence(sphere5):
    """Test the correspondence of kept faces across 1-6 and 6-1 moves."""
    move = apply_move(sphere5, MoveDescriptor(kind="1-6", location=[0, 1, 2, 3, 4, 5]))
    assert_faces_partitioned(move)
    assert len(move.unchanged_faces(5)) == 6
    assert all(old == new for old, new in move.unchanged_faces(3).items())

    back = apply_move(move.complex, move.inverse_descriptor())
    assert_faces_partitioned(back)
    assert len(back.unchanged_faces(3)) == 35


def test_two_five_keeps_cohomology_and_omega(f2, gf2_15):
    """Test that Betti numbers survive a 2-5 move and ω' agrees with ω on every kept face."""
    M = resolve_manifold("RP2xS3")
    move = apply_move(M, MoveDescriptor(kind="2-5"))
    assert_faces_partitioned(move)
    assert betti_numbers(move.complex) == betti_numbers(M)
    assert betti_numbers(move.complex, get_field(3, 1)) == betti_numbers(M, get_field(3, 1))

    omega = lift_omega_nonzero(M, Cochain.zeros(M, 3, f2), gf2_15, seed=4).cochain
    new_omega, _ = extend_data(move, omega, seed=6)
    assert new_omega.is_cocycle()
    for old, new in move.unchanged_faces(3).items():
        assert new_omega[new] == omega[old]


def run_all_classes(M, script, name):
    basis = cohomology_basis(M, 3, get_field(2, 1))
    reports = []
    for index, cls in enumerate(enumerate_classes(basis)):
        reports.append(
            invariance_harness(
                M, cls.representative, get_field(2, 15), index, parse_script(script), name=name, class_id=cls.class_id
            )
        )
    return reports


def test_harness_all_classes_s2xs3(s2xs3):
    """Test both classes of S2 x S3 along three moves of three kinds."""
    reports = run_all_classes(s2xs3, "1-6@auto,6-1@20,2-5@auto", "S2xS3")
    assert [r.initial for r in reports] == [(1, 0), (0, 0)]
    for report in reports:
        assert [s.facets for s in report.steps] == [205, 200, 203]
        assert report.constant
        assert report.values_preserved


def test_harness_all_classes_rp2xs3():
    """Test both classes of RP2 x S3 along 2-5, 1-6 and 6-1 moves."""
    M = resolve_manifold("RP2xS3")
    reports = run_all_classes(M, "2-5@auto,1-6@auto,6-1@30", "RP2xS3")
    assert [r.initial for r in reports] == [(2, 2), (0, 0)]
    for report in reports:
        assert [s.facets for s in report.steps] == [503, 508, 503]
        assert report.constant
        assert report.values_preserved


def test_simplify_undoes_a_subdivision():
    """Test that a coned facet of ∂Δ⁴ is removed again."""
    sphere = boundary_of_simplex(4)
    coned = apply_move(sphere, MoveDescriptor(kind="1-4", location=[0, 1, 2, 3])).complex
    assert (coned.n_vertices, len(coned.facets)) == (6, 8)
    small = simplify_complex(coned, seed=0)
    assert (small.n_vertices, len(small.facets)) == (5, 5)


def test_simplify_projective_plane():
    """Test that the generated RP2 shrinks and keeps its fingerprint."""
    rp2 = antipodal_quotient_rp(2)
    small = simplify_complex(rp2, seed=3, patience=40)
    assert small.n_vertices <= rp2.n_vertices
    assert len(small.facets) <= len(rp2.facets)
    assert small.n_vertices >= 6
    assert validate_closed_pseudomanifold(small).passed
    assert betti_numbers(small) == [1, 1, 1]
    assert euler_characteristic(small) == 1
    assert simplify_complex(rp2, seed=3, patience=40) == small
