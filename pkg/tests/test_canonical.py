"""
Tests for the explicit canonical basis elements of components.
"""

import pytest

from src.services.canonical import (
    OmegaDecomposition,
    b_element,
    c_words,
    canonical_expansion,
    e_omega,
    e_omega_words,
    expansion_from_element,
    summand_degree,
    summand_degree_closed_form,
    verify_canonical,
    zeta_closed_form,
    zeta_summands,
)
from src.services.exceptions import IndexOutOfRange, NotSparse
from src.services.hall import HallAlgebra, HallElement
from src.services.ic import stalk_from_element, stalk_poincare
from src.services.laurent import ONE, V_INV, LaurentPolynomial
from src.services.repquiver import (
    ComplexType,
    Multisegment,
    complex_to_multisegment,
    deformation_indices,
    enumerate_components,
)


def test_omega_decomposition():
    """Test that the support must be sparse."""
    assert OmegaDecomposition.of(ComplexType((1, 3, 1), (1, 1))).vertices == (2,)

    with pytest.raises(NotSparse):
        OmegaDecomposition.of(ComplexType((1, 1, 1), (0, 0)))


def test_b_element():
    """Test the B factors, including the empty boundary case."""
    c = ComplexType((1, 2, 1), (1, 1))
    assert str(b_element(1, 3, c)) == "E_2*E_3*E_1*E_2"
    assert b_element(2, 1, c).is_empty()
    assert b_element(4, 3, c).is_empty()

    with pytest.raises(IndexOutOfRange):
        b_element(0, 2, c)


def test_c_words():
    """Test the summands of C_i and their binomial scalars."""
    c = ComplexType((1, 3, 1), (1, 1))
    words = c_words(2, c)
    assert [str(w) for w in words] == ["E_2*E_3*E_1*E_2^(2)", "(-1)*E_3*E_1*E_2^(3)"]

    with pytest.raises(IndexOutOfRange):
        c_words(4, c)


def test_e_omega_words():
    """Test the expansion of E_Omega into words."""
    assert len(e_omega_words(ComplexType((1, 3, 1), (1, 1)))) == 2
    assert len(e_omega_words(ComplexType((1, 2, 1), (1, 1)))) == 1


def test_closed_form_golden_values():
    """Test the closed-form coefficients of two small components."""
    c = ComplexType((1, 3, 1), (1, 1))
    assert zeta_closed_form(c, (0, 0)) == ONE
    assert zeta_closed_form(c, (1, 1)) == LaurentPolynomial({-1: 1, -5: 1})
    assert str(zeta_closed_form(c, (1, 1))) == "v^-1 + v^-5"

    c = ComplexType((1, 2, 1), (1, 1))
    assert canonical_expansion(c) == {
        (0, 0): ONE,
        (0, 1): V_INV,
        (1, 0): V_INV,
        (1, 1): LaurentPolynomial({-1: 1, -3: 1}),
    }


@pytest.mark.parametrize("d,r", [((1, 3, 1), (1, 1)), ((2, 3, 2), (2, 1)), ((2, 4, 2), (2, 2))])
def test_closed_form_lies_in_the_lattice(d, r):
    """Test that every coefficient off the leading term lies in v^-1 Z[v^-1]."""
    c = ComplexType(d, r)
    for k in deformation_indices(c):
        value = zeta_closed_form(c, k)
        if any(k):
            assert value.in_negative_lattice()
        else:
            assert value == ONE


def test_summand_degrees():
    """Test the per-summand degree formula against the summands."""
    c = ComplexType((1, 3, 1), (1, 1))
    assert summand_degree(c, (1, 1), (0,)) == -5
    assert summand_degree(c, (1, 1), (1,)) == -1
    c = ComplexType((2, 4, 2), (2, 2))
    for k in deformation_indices(c):
        for t, _ in zeta_summands(c, k):
            assert summand_degree(c, k, t) == summand_degree_closed_form(c, k, t)

    with pytest.raises(IndexOutOfRange):
        summand_degree(ComplexType((1, 3, 1), (1, 1)), (1, 1), (2,))


def test_e_omega_of_a_plane():
    """Test E_Omega for Com(1, 1), which is E1*E2."""
    c = ComplexType((1, 1), (1,))
    element = e_omega(c, HallAlgebra(2))
    assert element == HallElement(2, {Multisegment.interval(2, 1, 2): 1, Multisegment(2, (1, 0, 1)): V_INV})
    assert expansion_from_element(c, element) == canonical_expansion(c)


def test_e_omega_rank_mismatch():
    """Test that the algebra rank must match the complex."""
    with pytest.raises(IndexOutOfRange):
        e_omega(ComplexType((1, 1), (1,)), HallAlgebra(3))


def test_verify_canonical_quadric_cone():
    """Test the Hall-multiplied element of Com(1, 2, 1) against the closed form."""
    c = ComplexType((1, 2, 1), (1, 1))
    algebra = HallAlgebra(3)
    element = e_omega(c, algebra)
    assert expansion_from_element(c, element) == canonical_expansion(c)
    report = verify_canonical(c, algebra, element)
    assert report.passed, [f"{f.name}: {f.detail}" for f in report.failures]
    assert len(report.checks) == 4


def test_verify_canonical_flags_a_wrong_element():
    """Test that a perturbed element fails the closed-form and bar checks."""
    c = ComplexType((1, 1), (1,))
    algebra = HallAlgebra(2)
    wrong = HallElement.basis(Multisegment.interval(2, 1, 2))
    report = verify_canonical(c, algebra, wrong)
    assert not report.passed
    failed = {f.name for f in report.failures}
    assert "closed form d=(1, 1) r=(1,)" in failed
    assert "bar-fixed d=(1, 1) r=(1,)" in failed


@pytest.mark.slow
def test_verify_canonical_with_homology():
    """Test a component with nonzero homology at the middle vertex."""
    c = ComplexType((1, 3, 1), (1, 1))
    algebra = HallAlgebra(3)
    report = verify_canonical(c, algebra)
    assert report.passed, [f"{f.name}: {f.detail}" for f in report.failures]


@pytest.fixture(scope="module")
def rank_three():
    return HallAlgebra(3)


@pytest.mark.parametrize("d", [(1, 2, 1), (1, 3, 1), (2, 2, 1)])
def test_e_omega_is_the_triangular_basis_member(rank_three, d):
    """Test E_Omega against the independently computed canonical basis, and its stalks."""
    basis = rank_three.triangular_canonical_basis(d)
    components = enumerate_components(d)
    assert components
    for c in components:
        element = e_omega(c, rank_three)
        assert basis[complex_to_multisegment(c)] == element
        for k in deformation_indices(c):
            assert stalk_from_element(c, k, element) == stalk_poincare(c, k)
