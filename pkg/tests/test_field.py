"""
Unit tests for GF(p^k) arithmetic.
"""

import numpy as np
import pytest

from services.algebra.field import Field, field_ops, get_field, parse_field


def test_small_field_facts(f2, f3):
    """Test characteristic and inverse facts in prime fields."""
    assert f2.add(1, 1) == 0
    assert f3.inv(2) == 2
    assert f3.neg(1) == 2
    assert f3.sub(0, 1) == 2


def test_inverse_property(gf2_15, rng):
    """Test a * inv(a) = 1 for many random nonzero elements."""
    for a in gf2_15.random(rng, 1000, nonzero=True).tolist():
        assert gf2_15.mul(a, gf2_15.inv(a)) == 1


def test_scalar_ops_match_galois(gf3_5, rng):
    """Test table arithmetic against galois array arithmetic."""
    GF = gf3_5.GF
    a = gf3_5.random(rng, 200)
    b = gf3_5.random(rng, 200, nonzero=True)
    for x, y, s, d, p, q in zip(
        a.tolist(), b.tolist(), (a + b).tolist(), (a - b).tolist(), (a * b).tolist(), (a / b).tolist()
    ):
        assert gf3_5.add(x, y) == s
        assert gf3_5.sub(x, y) == d
        assert gf3_5.mul(x, y) == p
        assert gf3_5.div(x, y) == q
    assert gf3_5.neg(int(a[0])) == int(-GF(int(a[0])))


def test_zero_has_no_inverse(gf2_8):
    """Test that inverting zero fails."""
    with pytest.raises(ZeroDivisionError, match="zero has no inverse"):
        gf2_8.inv(0)


def test_power_and_sqrt(gf2_8, gf3_5, rng):
    """Test powers and square roots."""
    for a in gf2_8.random(rng, 50).tolist():
        root = gf2_8.sqrt(a)
        assert gf2_8.mul(root, root) == a
    squares = 0
    for a in gf3_5.random(rng, 100, nonzero=True).tolist():
        root = gf3_5.sqrt(a)
        if root is not None:
            squares += 1
            assert gf3_5.mul(root, root) == a
    assert 0 < squares < 100
    assert gf2_8.power(7, 0) == 1
    assert gf2_8.power(0, 3) == 0


def test_coefficient_encoding(gf3_5):
    """Test that ints are base-p digit vectors, lowest degree first."""
    assert gf3_5.coefficients(5) == [2, 1, 0, 0, 0]
    assert gf3_5.from_coefficients([2, 1, 0, 0, 0]) == 5
    with pytest.raises(ValueError):
        gf3_5.from_coefficients([3, 0, 0, 0, 0])


def test_conway_modulus():
    """Test that extension fields use the Conway polynomial."""
    f = get_field(2, 2)
    # x^2 + x + 1: x * x = x + 1, and x encodes as 2
    assert f.mul(2, 2) == 3


def test_field_ops_dispatch(f3):
    """Test the operation dispatcher."""
    assert field_ops(1, 2, "add", f3) == 0
    assert field_ops(1, 2, "div", f3) == 2
    assert field_ops(2, 0, "inv", f3) == 2
    with pytest.raises(ValueError, match="Unknown field operation"):
        field_ops(1, 1, "pow", f3)


def test_parse_field():
    """Test 'p,k' parsing and its errors."""
    assert parse_field("2,15") == get_field(2, 15)
    assert parse_field("3") == get_field(3, 1)
    with pytest.raises(ValueError):
        parse_field("two")
    with pytest.raises(ValueError):
        Field(4, 1)


def test_get_field_is_shared():
    """Test that fields are cached per (p, k)."""
    assert get_field(2, 8) is get_field(2, 8)


def test_random_is_seeded(gf2_15):
    """Test that equal seeds give equal draws."""
    a = gf2_15.random(np.random.default_rng(5), 10)
    b = gf2_15.random(np.random.default_rng(5), 10)
    assert a.tolist() == b.tolist()


@pytest.mark.parametrize("p, k", [(2, 1), (2, 15), (3, 1), (3, 9)])
def test_field_axioms(p, k, rng):
    """Test associativity, distributivity, identities and inverses on random triples."""
    f = get_field(p, k)
    triples = f.random(rng, (300, 3)).tolist()
    for a, b, c in triples:
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
            assert f.div(f.mul(b, a), a) == b


@pytest.mark.parametrize("p, k", [(2, 1), (2, 15), (3, 1), (3, 9)])
def test_multiplicative_group_order(p, k, rng):
    """Test a^(p^k - 1) = 1 for nonzero a, and that the Frobenius map is additive."""
    f = get_field(p, k)
    for a, b in f.random(rng, (50, 2), nonzero=True).tolist():
        assert f.power(a, f.order - 1) == 1
        assert f.power(f.add(a, b), p) == f.add(f.power(a, p), f.power(b, p))
