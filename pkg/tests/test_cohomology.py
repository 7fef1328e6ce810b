"""
Unit tests for cohomology bases, class enumeration and ω lifting.
"""

import pytest

from services.algebra.field import get_field
from services.cohomology.basis import (
    ClassCapExceeded,
    LiftError,
    betti_numbers,
    cohomology_basis,
    enumerate_classes,
    lift_omega_nonzero,
)
from services.manifolds.catalog import catalog_get
from services.manifolds.products import staircase_product
from services.simplicial.complex import Cochain, boundary_of_simplex


def test_representatives_are_independent_cocycles(klein, f2):
    """Test that H^1 representatives are cocycles and not coboundaries."""
    basis = cohomology_basis(klein, 1, f2)
    assert basis.dim == 2
    for rep in basis.representatives:
        assert rep.is_cocycle()
        assert rep.values.any()


def test_betti_over_f3(klein, rp2, f3):
    """Test that F3 coefficients see the torsion difference."""
    assert betti_numbers(rp2, f3) == [1, 0, 0]
    assert betti_numbers(klein, f3) == [1, 1, 0]

    s1 = catalog_get("S1").complex
    torus = staircase_product(s1, s1)
    assert betti_numbers(torus, f3) == [1, 2, 1]


def test_enumerate_classes(s2xs3, f2):
    """Test class ids, the zero class first."""
    basis = cohomology_basis(s2xs3, 3, f2)
    classes = enumerate_classes(basis)
    assert [c.class_id for c in classes] == ["0", "1"]
    assert not classes[0].representative.values.any()
    assert classes[1].representative.is_cocycle()


def test_class_cap(klein, f2):
    """Test the enumeration cap."""
    basis = cohomology_basis(klein, 1, f2)
    assert len(enumerate_classes(basis)) == 4
    with pytest.raises(ClassCapExceeded):
        enumerate_classes(basis, cap=1)


def test_lift_zero_class(sphere5, f2, gf2_15):
    """Test that the zero class lifts to a coboundary nonzero everywhere."""
    zero = Cochain.zeros(sphere5, 3, f2)
    omega = lift_omega_nonzero(sphere5, zero, gf2_15, seed=3)
    assert omega.cochain.nonzero_everywhere()
    assert omega.cochain.is_cocycle()
    assert omega.class_id == ""
    assert omega.attempts >= 1


def test_lift_nonzero_class(s2xs3, f2, gf2_15):
    """Test lifting a nonzero class; the result is seed-deterministic."""
    rep = enumerate_classes(cohomology_basis(s2xs3, 3, f2))[1].representative
    first = lift_omega_nonzero(s2xs3, rep, gf2_15, seed=11, class_id="1")
    second = lift_omega_nonzero(s2xs3, rep, gf2_15, seed=11, class_id="1")
    assert first.cochain.nonzero_everywhere()
    assert first.cochain.is_cocycle()
    assert first.cochain.values.tolist() == second.cochain.values.tolist()


def test_lift_fails_over_gf2(sphere5, f2):
    """Test the failure path: over GF(2) no 3-cocycle of Δ⁵ is nonzero everywhere."""
    zero = Cochain.zeros(sphere5, 3, f2)
    with pytest.raises(LiftError, match="larger extension degree"):
        lift_omega_nonzero(sphere5, zero, f2, seed=0, retries=5)


def test_lift_preconditions(sphere5, f2, f3, gf2_15, rng):
    """Test that non-cocycles and foreign fields are rejected."""
    noise = Cochain.random(sphere5, 3, f2, rng)
    while noise.is_cocycle():
        noise = Cochain.random(sphere5, 3, f2, rng)
    with pytest.raises(ValueError, match="not a cocycle"):
        lift_omega_nonzero(sphere5, noise, gf2_15, seed=0)

    with pytest.raises(ValueError, match="cannot be embedded"):
        lift_omega_nonzero(sphere5, Cochain.zeros(sphere5, 3, f3), gf2_15, seed=0)


def test_betti_of_boundary_sphere():
    """Test ∂Δ⁶ has the cohomology of S⁵."""
    assert betti_numbers(boundary_of_simplex(6), get_field(2, 1)) == [1, 0, 0, 0, 0, 1]
