"""
Tests for multisegments, complex types and hom dimensions.
"""

import pytest

from src.services.exceptions import (
    DeformationOutOfRange,
    IndexOutOfRange,
    NegativeMultiplicity,
    NotAComponent,
    RankMismatch,
)
from src.services.repquiver import (
    ComplexType,
    MatrixRep,
    Multisegment,
    closure_leq,
    codim_shift,
    complex_to_multisegment,
    component_dimension,
    component_for,
    deform,
    deformation_indices,
    dotplus,
    enumerate_components,
    enumerate_multisegments,
    enumerate_orbits,
    euler_form,
    hom_dim,
    hom_dim_additive,
    hom_order_leq,
    hom_vector,
    is_sparse,
    mm_closed_form,
    multisegment_from_matrices,
    multisegment_from_ranks,
    normal_form_matrices,
    omega,
    orbit_dimension,
    root,
)

S1 = Multisegment.simple(2, 1)
S2 = Multisegment.simple(2, 2)
U12 = Multisegment.interval(2, 1, 2)


def test_multisegment_basics():
    """Test dimension vectors, direct sums and rendering."""
    M = Multisegment.from_dict(2, {(1, 2): 1, (2, 2): 3})
    assert M.dim_vector == (1, 4)
    assert M.total_dim == 5
    assert str(M) == "[1..2]+[2..2]^3"
    assert S1 + S2 == Multisegment(2, (1, 0, 1))
    assert str(Multisegment.zero(3)) == "0"

    with pytest.raises(NegativeMultiplicity):
        Multisegment(2, (1, -1, 0))
    with pytest.raises(IndexOutOfRange):
        Multisegment.interval(2, 1, 3)
    with pytest.raises(RankMismatch):
        S1 + Multisegment.simple(3, 1)


def test_euler_form_and_roots():
    """Test the Euler form of the equioriented quiver."""
    assert euler_form((1, 0), (0, 1)) == -1
    assert euler_form((0, 1), (1, 0)) == 0
    assert euler_form((1, 1), (1, 1)) == 1
    assert root(3, 2, 3) == (0, 1, 1)

    with pytest.raises(RankMismatch):
        euler_form((1,), (1, 1))


def test_interval_hom_dimensions():
    """Test Hom between simples and the interval module U_{1,2}."""
    assert hom_dim(S1, U12) == 0
    assert hom_dim(U12, S1) == 1
    assert hom_dim(S2, U12) == 1
    assert hom_dim(U12, S2) == 0
    assert hom_dim(U12, U12) == 1


def test_hom_additivity():
    """Test that the additive hom agrees with the direct linear solve."""
    for M in enumerate_multisegments((1, 2, 1)):
        for N in enumerate_multisegments((1, 1, 1)):
            assert hom_dim_additive(M, N) == hom_dim(M, N)


def test_hom_order():
    """Test that S1 + S2 lies below U_{1,2} and not conversely."""
    assert hom_vector(S1 + S2) == (1, 1, 1)
    assert hom_vector(U12) == (0, 1, 1)
    assert hom_order_leq(S1 + S2, U12)
    assert not hom_order_leq(U12, S1 + S2)
    assert hom_order_leq(U12, U12)


def test_enumerate_multisegments():
    """Test the classes of small dimension vectors."""
    assert set(enumerate_multisegments((1, 1))) == {S1 + S2, U12}
    classes = enumerate_multisegments((1, 1, 1))
    assert len(classes) == 4
    assert len(set(classes)) == 4
    for M in enumerate_multisegments((2, 2, 1)):
        assert M.dim_vector == (2, 2, 1)


def test_complex_type_derives_h():
    """Test h_i = d_i - r_{i-1} - r_i."""
    c = ComplexType((1, 3, 1), (1, 1))
    assert c.h == (0, 1, 0)
    assert c.n == 3
    assert c.r_at(0) == 0 and c.r_at(3) == 0
    assert ComplexType.from_r_h((1, 1), (0, 1, 0)) == c
    assert dotplus((0, 1, 0), (1, 1)) == (1, 3, 1)

    with pytest.raises(NotAComponent):
        ComplexType((1, 1, 1), (1, 1))
    with pytest.raises(RankMismatch):
        ComplexType((1, 1), (1, 1))


def test_complex_to_multisegment():
    """Test M(r, h) = sum S_i^h_i + U_{i,i+1}^r_i."""
    M = complex_to_multisegment(ComplexType((1, 3, 1), (1, 1)))
    assert str(M) == "[1..2]+[2..2]+[2..3]"
    assert M.dim_vector == (1, 3, 1)


def test_orbits_and_components():
    """Test the orbits and components of Com(1,1,1)."""
    orbits = enumerate_orbits((1, 1, 1))
    assert [c.r for c in orbits] == [(1, 0), (0, 1), (0, 0)]
    assert [c.r for c in enumerate_components((1, 1, 1))] == [(1, 0), (0, 1)]
    assert omega(ComplexType((1, 1, 1), (0, 0))) == [1, 2, 3]
    assert is_sparse([1, 3])
    assert not is_sparse([2, 3])


def test_component_for():
    """Test that only sparse supports give components."""
    assert component_for((1, 3, 1), (1, 1)).h == (0, 1, 0)

    with pytest.raises(NotAComponent):
        component_for((1, 1, 1), (0, 0))
    with pytest.raises(NotAComponent):
        component_for((1, 1, 1), (2, 0))


def test_closure_order():
    """Test that degenerations lower ranks."""
    top = ComplexType((1, 3, 1), (1, 1))
    assert closure_leq(ComplexType((1, 3, 1), (0, 1)), top)
    assert not closure_leq(top, ComplexType((1, 3, 1), (0, 1)))


def test_deformations():
    """Test deform and the range of k."""
    c = ComplexType((1, 3, 1), (1, 1))
    assert deformation_indices(c) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert deform(c, (1, 1)).h == (1, 3, 1)
    assert deform(c, (0, 0)) == c

    with pytest.raises(DeformationOutOfRange):
        deform(c, (2, 0))


def test_dimension_formulas():
    """Test [M, M], orbit dimensions and codimension shifts."""
    c = ComplexType((1, 3, 1), (1, 1))
    M = complex_to_multisegment(c)
    assert mm_closed_form(c) == 6
    assert hom_dim_additive(M, M) == 6
    assert orbit_dimension(c) == 5
    assert component_dimension(c) == 5
    assert codim_shift(c, (1, 1)) == 5
    assert codim_shift(ComplexType((1, 2, 1), (1, 1)), (1, 1)) == 3
    assert component_dimension(ComplexType((1, 1, 1), (1, 0))) == 1


def test_codim_shift_matches_hom_dims():
    """Test codim_shift against [N, N] - [M, M] computed from homs."""
    c = ComplexType((2, 3, 2), (1, 1))
    M = complex_to_multisegment(c)
    for k in deformation_indices(c):
        N = complex_to_multisegment(deform(c, k))
        assert codim_shift(c, k) == hom_dim_additive(N, N) - hom_dim_additive(M, M)


def test_classes_of_matrices():
    """Test recovery of the isomorphism class from explicit matrices."""
    assert multisegment_from_matrices(MatrixRep(3, (1, 1), [[[1]]])) == U12
    assert multisegment_from_matrices(MatrixRep(3, (1, 1), [[[0]]])) == S1 + S2
    for M in enumerate_multisegments((1, 2, 1)):
        assert multisegment_from_matrices(normal_form_matrices(M, 2)) == M


def test_inconsistent_ranks():
    """Test that impossible rank invariants are rejected."""
    with pytest.raises(NegativeMultiplicity):
        multisegment_from_ranks(2, {(1, 1): 1, (1, 2): 2, (2, 2): 1})
