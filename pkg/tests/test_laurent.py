"""
Tests for Laurent polynomial arithmetic and quantum numbers.
"""

from fractions import Fraction

import pytest

from src.services.exceptions import (
    NegativePowerPresent,
    NonDivisible,
    OddPowerPresent,
    ZeroBase,
)
from src.services.laurent import (
    ONE,
    V,
    V_INV,
    ZERO,
    LaurentPolynomial,
    QPolynomial,
    bar,
    evaluate,
    exact_divide,
    gauss_binomial,
    normalized_binomial,
    q_pascal_rhs,
    quantum_factorial,
    quantum_integer,
    xi_identity_sides,
)


def test_zero_coefficients_are_dropped():
    """Test that the canonical form has no zero coefficients."""
    p = LaurentPolynomial({2: 0, -1: 3, 0: 0})
    assert p.terms == [(-1, 3)]
    assert LaurentPolynomial({5: 0}) == ZERO
    assert LaurentPolynomial({5: 0}).is_zero()


def test_ring_operations():
    """Test addition, subtraction and multiplication with integers mixed in."""
    p = V + V_INV
    assert p * p == LaurentPolynomial({2: 1, 0: 2, -2: 1})
    assert p - p == ZERO
    assert 1 + V == V + ONE
    assert 2 * V == V + V
    assert 1 - V == -(V - 1)


def test_rendering():
    """Test the descending-exponent text form."""
    assert str(LaurentPolynomial({4: 1, 0: 2, -4: 1})) == "v^4 + 2 + v^-4"
    assert str(LaurentPolynomial({1: -1, -1: 1})) == "-v + v^-1"
    assert str(LaurentPolynomial({3: 2, 0: -3})) == "2*v^3 - 3"
    assert str(ZERO) == "0"
    assert str(V) == "v"


def test_bar_is_an_involution():
    """Test that bar swaps v and v^-1 and squares to the identity."""
    p = LaurentPolynomial({3: 2, 0: -1, -2: 5})
    assert bar(p) == LaurentPolynomial({-3: 2, 0: -1, 2: 5})
    assert bar(bar(p)) == p
    assert bar(p * V) == bar(p) * V_INV


def test_powers():
    """Test nonnegative powers and inverses of monomials."""
    assert V ** 0 == ONE
    assert (1 + V) ** 2 == LaurentPolynomial({0: 1, 1: 2, 2: 1})
    assert V_INV ** -2 == LaurentPolynomial.monomial(2)
    assert (-V) ** -1 == -V_INV

    with pytest.raises(NonDivisible):
        (1 + V) ** -1


def test_exact_division():
    """Test exact division and the remainder error."""
    assert exact_divide(LaurentPolynomial({2: 1, -2: -1}), V - V_INV) == V + V_INV
    assert exact_divide(ZERO, V + 1) == ZERO
    assert exact_divide(LaurentPolynomial({3: 6, 1: 4}), 2) == LaurentPolynomial({3: 3, 1: 2})

    with pytest.raises(NonDivisible):
        exact_divide(LaurentPolynomial({2: 1, 0: 1}), V + 1)
    with pytest.raises(NonDivisible):
        exact_divide(3, 2)
    with pytest.raises(NonDivisible):
        exact_divide(V, 0)


def test_evaluation():
    """Test exact evaluation at rational points."""
    assert evaluate(quantum_integer(3), 1) == 3
    assert evaluate(V + V_INV, 2) == Fraction(5, 2)
    assert evaluate(1 + V, 0) == 1

    with pytest.raises(ZeroBase):
        evaluate(V_INV, 0)


def test_to_qpolynomial():
    """Test the reinterpretation in q = v^2."""
    p = LaurentPolynomial({0: 1, 4: 1})
    assert p.to_qpolynomial() == QPolynomial([1, 0, 1])
    assert str(p.to_qpolynomial()) == "1+q^2"
    assert ZERO.to_qpolynomial().is_zero()

    with pytest.raises(OddPowerPresent):
        V.to_qpolynomial()
    with pytest.raises(NegativePowerPresent):
        LaurentPolynomial.monomial(-2).to_qpolynomial()


def test_quantum_integers_and_factorials():
    """Test [n] and [n]! for small n."""
    assert quantum_integer(0) == ZERO
    assert quantum_integer(1) == ONE
    assert quantum_integer(2) == V + V_INV
    assert quantum_integer(3) == LaurentPolynomial({2: 1, 0: 1, -2: 1})
    assert quantum_factorial(0) == ONE
    assert quantum_factorial(3) == LaurentPolynomial({3: 1, 1: 2, -1: 2, -3: 1})


def test_gauss_binomial_values():
    """Test quantum binomials, including negative upper arguments."""
    assert str(gauss_binomial(4, 2)) == "v^4 + v^2 + 2 + v^-2 + v^-4"
    assert gauss_binomial(3, 0) == ONE
    assert gauss_binomial(2, 3) == ZERO
    assert gauss_binomial(-1, 1) == -ONE
    assert gauss_binomial(-1, 2) == ONE
    assert gauss_binomial(-2, 1) == -(V + V_INV)


@pytest.mark.parametrize("a", range(1, 6))
def test_q_pascal_recursion(a):
    """Test [a over n] = v^n [a-1 over n] + v^(n-a) [a-1 over n-1]."""
    for n in range(1, a + 1):
        assert gauss_binomial(a, n) == q_pascal_rhs(a, n)


def test_gauss_binomials_are_bar_invariant():
    """Test that every binomial [a over n] with a >= 0 is fixed by bar."""
    for a in range(6):
        for n in range(a + 1):
            assert bar(gauss_binomial(a, n)) == gauss_binomial(a, n)


def test_normalized_binomial():
    """Test the q-binomial (a over n)_q."""
    assert normalized_binomial(4, 2) == QPolynomial([1, 1, 2, 1, 1])
    assert normalized_binomial(3, 1) == QPolynomial([1, 1, 1])
    assert normalized_binomial(2, 3).is_zero()
    assert normalized_binomial(5, 2).evaluate(1) == 10
    assert normalized_binomial(5, 2).is_palindromic()

    with pytest.raises(ValueError):
        normalized_binomial(-1, 0)


@pytest.mark.parametrize("c1,c2,c3,t", [
    (1, 0, 1, 1),
    (1, 1, 1, 1),
    (2, 0, 1, 1),
    (2, 1, 2, 2),
    (0, 2, 1, 2),
])
def test_binomial_convolution_identity(c1, c2, c3, t):
    """Test that both sides of the three-parameter convolution agree."""
    left, right = xi_identity_sides(c1, c2, c3, t)
    assert left == right


def test_qpolynomial_basics():
    """Test arithmetic and rendering of polynomials in q."""
    p = QPolynomial([1, 1])
    assert p * p == QPolynomial([1, 2, 1])
    assert p + 1 == QPolynomial([2, 1])
    assert p.shift(2) == QPolynomial([0, 0, 1, 1])
    assert p.to_laurent() == LaurentPolynomial({0: 1, 2: 1})
    assert QPolynomial([1, 0, 0]) == 1
    assert QPolynomial([1, 0, 0]).degree() == 0
    assert str(QPolynomial([1, -2, 0, 3])) == "1-2*q+3*q^3"
    assert QPolynomial([0, 0]).is_zero()
    assert not QPolynomial([1, -1]).has_nonnegative_coefficients()

    with pytest.raises(ValueError):
        QPolynomial(()).degree()
