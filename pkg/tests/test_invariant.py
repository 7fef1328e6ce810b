"""
Unit tests for the state sum, the matrix A and class tables.
"""

import numpy as np
import pytest

from services.algebra.field import get_field
from services.algebra.linalg import SubspaceBasis
from services.cohomology.basis import lift_omega_nonzero
from services.coloring.local import ColoringNotPermitted
from services.coloring.spaces import ColoringFramework, ColoringSpaces
from services.invariant.state_sum import InvariantResult, StateSum, StructureCertificate, extract_matrix, state_sum
from services.invariant.tables import ClassTable, class_seed, class_table, compute_class, is_zero_class
from services.manifolds.catalog import resolve_manifold
from services.simplicial.complex import Cochain


@pytest.fixture(scope="module")
def zero_class():
    """S2 x S3 with ω lifted from the zero class, and its coloring spaces."""
    M = resolve_manifold("S2xS3")
    field = get_field(2, 15)
    omega = lift_omega_nonzero(M, Cochain.zeros(M, 3, get_field(2, 1)), field, seed=0).cochain
    framework = ColoringFramework(M, omega)
    return framework, framework.global_spaces()


def g_coloring(framework, rng):
    beta = Cochain.random(framework.complex, 2, framework.field, rng)
    return framework.coordinates(beta.coboundary())


def test_state_sum_of_zero_coloring(zero_class, rng):
    """Test that the sum vanishes when one coloring is zero."""
    framework, _ = zero_class
    sigma = g_coloring(framework, rng)
    zero = framework.field.zeros(framework.n_coords)
    assert state_sum(framework.complex, framework.omega, zero, sigma) == 0
    assert state_sum(framework.complex, framework.omega, sigma, zero) == 0


def test_state_sum_ignores_g_colorings(zero_class, rng):
    """Test Σ c(ρ + g, σ) = Σ c(ρ, σ) for g in V_g."""
    framework, spaces = zero_class
    sums = StateSum(framework)
    rho = spaces.complement.vectors[:, 0]
    sigma = spaces.complement.vectors[:, 0]
    base = sums.total(rho, sigma)
    for _ in range(3):
        g = g_coloring(framework, rng)
        assert sums.total(rho + g, sigma) == base
        assert sums.total(rho, sigma + g) == base
        assert sums.total(g, sigma) == 0


def test_state_sum_rejects_unpermitted(zero_class, rng):
    """Test that a random vector is not accepted as a coloring."""
    framework, _ = zero_class
    noise = framework.field.random(rng, framework.n_coords, nonzero=True)
    zero = framework.field.zeros(framework.n_coords)
    with pytest.raises(ColoringNotPermitted):
        state_sum(framework.complex, framework.omega, noise, zero)
    with pytest.raises(ValueError):
        StateSum(framework).total(zero[:-1], zero, check=False)


def test_state_sum_needs_characteristic_two():
    """Test that odd-characteristic ω is refused."""
    M = resolve_manifold("S2xS3")
    omega = lift_omega_nonzero(M, Cochain.zeros(M, 3, get_field(3, 1)), get_field(3, 5), seed=0).cochain
    with pytest.raises(ValueError, match="characteristic 2"):
        StateSum(ColoringFramework(M, omega))


def test_extract_matrix_zero_class(zero_class):
    """Test A on the zero class of S2 x S3: a single zero entry."""
    framework, spaces = zero_class
    result = extract_matrix(framework.complex, framework.omega, spaces, class_id="0")
    assert result.pair == (1, 0)
    assert result.A == [[0]]
    assert result.certificate.passed
    assert result.evaluations is None
    assert result.dim_p == result.dim_g + 1


def test_extract_matrix_mismatch(zero_class):
    """Test that spaces computed for another ω are refused."""
    framework, spaces = zero_class
    M = framework.complex
    other = lift_omega_nonzero(M, Cochain.zeros(M, 3, get_field(2, 1)), framework.field, seed=1).cochain
    with pytest.raises(ValueError, match="different"):
        extract_matrix(M, other, spaces)


def test_class_seed():
    """Test that class seeds are deterministic and distinct."""
    assert class_seed(0, 1) == class_seed(0, 1)
    assert class_seed(0, 1) != class_seed(0, 2)
    assert class_seed(0, 1) != class_seed(1, 1)


def test_compute_class_is_seed_independent():
    """Test that lifting the zero class with different seeds gives the same pair."""
    M = resolve_manifold("S2xS3")
    zero = Cochain.zeros(M, 3, get_field(2, 1))
    first = compute_class(M, zero, get_field(2, 15), seed=3, class_id="0")
    second = compute_class(M, zero, get_field(2, 15), seed=4, class_id="0")
    assert first.pair == second.pair == (1, 0)
    assert (first.seed, second.seed) == (3, 4)


def test_class_table_s2xs3():
    """Test the S2 x S3 table: zero class (1, 0), one nonzero class (0, 0)."""
    M = resolve_manifold("S2xS3")
    table = class_table(M, field=get_field(2, 15), seed=0, name="S2xS3", threads=1)
    assert [r.class_id for r in table.results] == ["0", "1"]
    assert table.zero_class.pair == (1, 0)
    assert table.nonzero_multiset() == {(0, 0): 1}
    assert table.certificates_passed()

    empty = table.results[1]
    assert empty.A == []
    assert empty.rank_A == 0

    payload = table.to_payload()
    assert payload["field"] == {"p": 2, "k": 15}
    assert [c["dim"] for c in payload["classes"]] == [1, 0]


def test_class_table_subset():
    """Test computing selected classes only, and unknown ids."""
    M = resolve_manifold("S2xS3")
    table = class_table(M, field=get_field(2, 15), seed=0, name="S2xS3", classes=["1"])
    assert [r.class_id for r in table.results] == ["1"]
    assert table.zero_class is None
    assert table.nonzero_multiset() == {(0, 0): 1}

    lines = table.format_table().splitlines()
    assert len(lines) == 3
    assert lines[2].split() == ["nonzero", "0", "0", "1"]
    with pytest.raises(ValueError, match="Unknown class ids"):
        class_table(M, field=get_field(2, 15), seed=0, classes=["11"])


def test_is_zero_class():
    """Test that the zero class is recognized by its bits, not its position."""
    assert is_zero_class("000")
    assert is_zero_class("")
    assert not is_zero_class("010")


def test_format_table():
    """Test the text table layout."""
    certificate = StructureCertificate(cross_terms_vanish=True, A_symmetric=True)

    def result(class_id, dim, rank):
        A = np.zeros((dim, dim), dtype=int).tolist()
        return InvariantResult(
            class_id=class_id, quotient_dim=dim, dim_p=dim + 4, dim_g=4, A=A, rank_A=rank, seed=0, certificate=certificate
        )

    table = ClassTable(
        manifold="X", field_p=2, field_k=15, seed=3, results=[result("00", 3, 2), result("01", 1, 0), result("10", 1, 0)]
    )
    text = table.format_table()
    lines = text.splitlines()
    assert lines[0] == "X over GF(2^15), seed 3"
    assert lines[2].split() == ["zero", "3", "2", "1"]
    assert lines[3].split() == ["nonzero", "1", "0", "2"]
    assert table.multiset() == {(3, 2): 1, (1, 0): 2}


@pytest.fixture(scope="module")
def rp2xs3_zero():
    """RP2 x S3 with ω lifted from the zero class; quotient dimension 2."""
    M = resolve_manifold("RP2xS3")
    omega = lift_omega_nonzero(M, Cochain.zeros(M, 3, get_field(2, 1)), get_field(2, 15), seed=0).cochain
    framework = ColoringFramework(M, omega)
    spaces = framework.global_spaces()
    return framework, spaces, extract_matrix(M, omega, spaces, class_id="0")


def test_matrix_under_change_of_complement(rp2xs3_zero, rng):
    """Test that another complement of V_g gives A' = Pᵀ A P with the same dimension and rank."""
    framework, spaces, result = rp2xs3_zero
    f = framework.field
    n = spaces.quotient_dim
    assert result.pair == (2, 2)

    # 0/1 coefficients: the sum is additive in each argument
    for P in ([[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 1]]):
        P = f.array(P)
        shifts = f.array([f.to_ints(g_coloring(framework, rng)) for _ in range(n)]).T
        vectors = spaces.complement.vectors @ P + shifts
        other = ColoringSpaces(framework, SubspaceBasis(f, vectors, validate=True), spaces.dim_g, spaces.pivot_coords)

        changed = extract_matrix(framework.complex, framework.omega, other, class_id="0")
        assert changed.pair == result.pair
        assert changed.certificate.passed
        assert changed.A == (P.T @ f.array(result.A) @ P).tolist()


def test_class_table_seed_stability():
    """Test that the multisets do not depend on the seed."""
    M = resolve_manifold("S2xS3")
    first = class_table(M, field=get_field(2, 15), seed=0)
    second = class_table(M, field=get_field(2, 15), seed=7)
    assert first.multiset() == second.multiset()
    assert [r.seed for r in first.results] != [r.seed for r in second.results]
