"""
Exact arithmetic in Z[v, v^-1] and the quantum-number kernel.

Laurent polynomials are stored sparsely as exponent -> coefficient with
arbitrary-precision integer coefficients. Polynomials in q = v^2 with
nonnegative exponents (stalk Poincare polynomials, normalized binomials)
use the dense ``QPolynomial`` type.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.services.exceptions import (
    NegativePowerPresent,
    NonDivisible,
    OddPowerPresent,
    ShiftNotEven,
    ZeroBase,
)


Scalar = Union[int, "LaurentPolynomial"]


class LaurentPolynomial:
    """Immutable element of Z[v, v^-1] in canonical sparse form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        if terms:
            for exponent, coefficient in terms.items():
                if coefficient:
                    clean[int(exponent)] = int(coefficient)
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def constant(cls, value: int) -> "LaurentPolynomial":
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "LaurentPolynomial":
        return cls({exponent: coefficient})

    @classmethod
    def coerce(cls, value: Scalar) -> "LaurentPolynomial":
        if isinstance(value, LaurentPolynomial):
            return value
        if isinstance(value, int):
            return cls.constant(value)
        raise TypeError(f"Cannot coerce {value!r} to a Laurent polynomial")

    # Inspection

    @property
    def terms(self) -> List[Tuple[int, int]]:
        """(exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._terms.items())

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(exponent == 0 for exponent in self._terms)

    def degree(self) -> int:
        """Highest exponent; raises on the zero polynomial."""
        if not self._terms:
            raise ValueError("The zero polynomial has no degree")
        return max(self._terms)

    def valuation(self) -> int:
        """Lowest exponent; raises on the zero polynomial."""
        if not self._terms:
            raise ValueError("The zero polynomial has no valuation")
        return min(self._terms)

    def in_negative_lattice(self) -> bool:
        """True iff the polynomial lies in v^-1 Z[v^-1]."""
        return all(exponent <= -1 for exponent in self._terms)

    # Ring structure

    def __add__(self, other: Scalar) -> "LaurentPolynomial":
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        result = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            result[exponent] = result.get(exponent, 0) + coefficient
        return LaurentPolynomial(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Scalar) -> "LaurentPolynomial":
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPolynomial":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "LaurentPolynomial":
        if isinstance(other, int):
            return LaurentPolynomial({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        result: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPolynomial":
        if exponent < 0:
            if len(self._terms) == 1:
                (e, c), = self._terms.items()
                if c in (1, -1):
                    return LaurentPolynomial.monomial(-e, c) ** (-exponent)
            raise NonDivisible(f"{self} is not a unit of Z[v, v^-1]")
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by v^k."""
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()})

    def exact_divide(self, other: Scalar) -> "LaurentPolynomial":
        """
        Divide exactly in Z[v, v^-1].

        Args:
            other: Nonzero divisor

        Returns:
            The quotient

        Raises:
            NonDivisible: If the division leaves a remainder
        """
        divisor = LaurentPolynomial.coerce(other)
        if divisor.is_zero():
            raise NonDivisible("Division by the zero polynomial")
        if self.is_zero():
            return ZERO

        top_divisor = divisor.degree()
        lead_divisor = divisor.coefficient(top_divisor)
        lowest_quotient = self.valuation() - divisor.valuation()

        quotient: Dict[int, int] = {}
        remainder = self
        while not remainder.is_zero():
            top = remainder.degree()
            step = top - top_divisor
            lead = remainder.coefficient(top)
            if step < lowest_quotient or lead % lead_divisor:
                raise NonDivisible(f"{self} is not divisible by {divisor}")
            factor = lead // lead_divisor
            quotient[step] = factor
            remainder = remainder - divisor.shift(step) * factor
        return LaurentPolynomial(quotient)

    def bar(self) -> "LaurentPolynomial":
        """The ring involution v -> v^-1."""
        return LaurentPolynomial({-e: c for e, c in self._terms.items()})

    def evaluate(self, x: Union[int, Fraction]) -> Fraction:
        x = Fraction(x)
        if x == 0:
            if any(e < 0 for e in self._terms):
                raise ZeroBase(f"Cannot evaluate {self} at v=0")
            return Fraction(self.coefficient(0))
        return sum((Fraction(c) * x ** e for e, c in self._terms.items()), Fraction(0))

    def to_qpolynomial(self) -> "QPolynomial":
        """
        Reinterpret a polynomial with even nonnegative exponents in q = v^2.

        Raises:
            NegativePowerPresent: If an exponent is negative
            OddPowerPresent: If an exponent is odd
        """
        for exponent in self._terms:
            if exponent < 0:
                raise NegativePowerPresent(f"{self} has a negative power of v")
            if exponent % 2:
                raise OddPowerPresent(f"{self} has an odd power of v")
        if not self._terms:
            return QPolynomial(())
        coeffs = [0] * (self.degree() // 2 + 1)
        for exponent, coefficient in self._terms.items():
            coeffs[exponent // 2] = coefficient
        return QPolynomial(coeffs)

    # Comparison and rendering

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self.terms))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"LaurentPolynomial('{self}')"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: List[str] = []
        for exponent, coefficient in sorted(self._terms.items(), reverse=True):
            magnitude = abs(coefficient)
            if exponent == 0:
                body = str(magnitude)
            else:
                power = "v" if exponent == 1 else f"v^{exponent}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            if not parts:
                parts.append(body if coefficient > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coefficient > 0 else f"- {body}")
        return " ".join(parts)


ZERO = LaurentPolynomial()
ONE = LaurentPolynomial.constant(1)
V = LaurentPolynomial.monomial(1)
V_INV = LaurentPolynomial.monomial(-1)


class QPolynomial:
    """Immutable polynomial in q with integer coefficients, ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        values = [int(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.coeffs: Tuple[int, ...] = tuple(values)

    @classmethod
    def constant(cls, value: int) -> "QPolynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> "QPolynomial":
        return cls([0] * exponent + [coefficient])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("The zero polynomial has no degree")
        return len(self.coeffs) - 1

    def constant_term(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def has_nonnegative_coefficients(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_palindromic(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs))

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        if isinstance(other, int):
            other = QPolynomial.constant(other)
        size = max(len(self.coeffs), len(other.coeffs))
        padded_a = self.coeffs + (0,) * (size - len(self.coeffs))
        padded_b = other.coeffs + (0,) * (size - len(other.coeffs))
        return QPolynomial(a + b for a, b in zip(padded_a, padded_b))

    __radd__ = __add__

    def __mul__(self, other: Union[int, "QPolynomial"]) -> "QPolynomial":
        if isinstance(other, int):
            return QPolynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return QPolynomial(())
        result = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    result[i + j] += a * b
        return QPolynomial(result)

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPolynomial":
        """Multiply by q^k (k >= 0)."""
        if not self.coeffs:
            return self
        return QPolynomial([0] * k + list(self.coeffs))

    def evaluate(self, x: Union[int, Fraction]) -> Fraction:
        result = Fraction(0)
        for coefficient in reversed(self.coeffs):
            result = result * x + coefficient
        return result

    def to_laurent(self) -> LaurentPolynomial:
        """Substitute q = v^2."""
        return LaurentPolynomial({2 * i: c for i, c in enumerate(self.coeffs)})

    def as_list(self) -> List[int]:
        return list(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QPolynomial.constant(other)
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QPolynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        """Render as ``1+q^2`` (ascending, no spaces)."""
        if not self.coeffs:
            return "0"
        parts: List[str] = []
        for exponent, coefficient in enumerate(self.coeffs):
            if coefficient == 0:
                continue
            magnitude = abs(coefficient)
            if exponent == 0:
                body = str(magnitude)
            else:
                power = "q" if exponent == 1 else f"q^{exponent}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            sign = "-" if coefficient < 0 else ("+" if parts else "")
            parts.append(sign + body)
        return "".join(parts)


def exact_divide(a: Scalar, b: Scalar) -> LaurentPolynomial:
    """Exact quotient a / b in Z[v, v^-1]."""
    return LaurentPolynomial.coerce(a).exact_divide(b)


def bar(p: Scalar) -> LaurentPolynomial:
    """Interchange v and v^-1."""
    return LaurentPolynomial.coerce(p).bar()


def evaluate(p: Union[LaurentPolynomial, QPolynomial], x: Union[int, Fraction]) -> Fraction:
    """
    Evaluate exactly at a rational point.

    Raises:
        ZeroBase: For x = 0 when p has negative exponents
    """
    return p.evaluate(Fraction(x))


def _v_difference(exponent: int) -> LaurentPolynomial:
    """v^e - v^-e."""
    if exponent == 0:
        return ZERO
    return LaurentPolynomial({exponent: 1, -exponent: -1})


@lru_cache(maxsize=None)
def quantum_integer(n: int) -> LaurentPolynomial:
    """[n] = (v^n - v^-n) / (v - v^-1)."""
    if n < 0:
        raise ValueError(f"Quantum integers are defined here for n >= 0, got {n}")
    return LaurentPolynomial({n - 1 - 2 * i: 1 for i in range(n)})


@lru_cache(maxsize=None)
def quantum_factorial(n: int) -> LaurentPolynomial:
    """[n]! = [1][2]...[n], with [0]! = 1."""
    if n < 0:
        raise ValueError(f"Quantum factorials are defined for n >= 0, got {n}")
    result = ONE
    for i in range(1, n + 1):
        result = result * quantum_integer(i)
    return result


@lru_cache(maxsize=None)
def gauss_binomial(a: int, n: int) -> LaurentPolynomial:
    """
    Quantum binomial coefficient [a over n] for any integer a.

    Computed from the defining product over i = 1..n of
    (v^(a+1-i) - v^-(a+1-i)) / (v^i - v^-i); the product of numerators is
    divided exactly by the product of denominators.

    Args:
        a: Upper argument, may be negative
        n: Lower argument, n >= 0

    Returns:
        The binomial as a Laurent polynomial
    """
    if n < 0:
        raise ValueError(f"Lower binomial argument must be >= 0, got {n}")
    numerator = ONE
    denominator = ONE
    for i in range(1, n + 1):
        factor = _v_difference(a + 1 - i)
        if factor.is_zero():
            return ZERO
        numerator = numerator * factor
        denominator = denominator * _v_difference(i)
    return numerator.exact_divide(denominator)


@lru_cache(maxsize=None)
def normalized_binomial(a: int, n: int) -> QPolynomial:
    """
    Normalized binomial (a over n)_q = v^(n(a-n)) [a over n] in Z[q].

    Args:
        a: Upper argument, a >= 0
        n: Lower argument, n >= 0

    Returns:
        Polynomial in q; zero when n > a

    Raises:
        ShiftNotEven: If the shifted binomial has an odd power of v
    """
    if a < 0 or n < 0:
        raise ValueError(f"Normalized binomials need a, n >= 0, got ({a}, {n})")
    if n > a:
        return QPolynomial(())
    shifted = gauss_binomial(a, n).shift(n * (a - n))
    try:
        return shifted.to_qpolynomial()
    except (OddPowerPresent, NegativePowerPresent) as exc:
        raise ShiftNotEven(f"v^{n * (a - n)}*[{a} over {n}] = {shifted} is not in Z[q]") from exc


def q_pascal_rhs(a: int, n: int) -> LaurentPolynomial:
    """v^n [a-1 over n] + v^(n-a) [a-1 over n-1], the q-Pascal right-hand side."""
    return gauss_binomial(a - 1, n).shift(n) + gauss_binomial(a - 1, n - 1).shift(n - a)


def xi_identity_sides(c1: int, c2: int, c3: int, t: int) -> Tuple[LaurentPolynomial, LaurentPolynomial]:
    """
    Both sides of the three-parameter binomial convolution identity.

    Left:  sum over t1 + t23 = t of v^((c2-c3)t1 - c1 t23) [c1 over t1][c2+c3 over t23]
    Right: sum over t12 + t3 = t of v^((c2-c1)t3 - c3 t12) [c1+c2 over t12][c3 over t3]
    """
    left = ZERO
    right = ZERO
    for first in range(t + 1):
        second = t - first
        left = left + (gauss_binomial(c1, first) * gauss_binomial(c2 + c3, second)).shift(
            (c2 - c3) * first - c1 * second
        )
        right = right + (gauss_binomial(c1 + c2, second) * gauss_binomial(c3, first)).shift(
            (c2 - c1) * first - c3 * second
        )
    return left, right


def sum_laurent(values: Sequence[LaurentPolynomial]) -> LaurentPolynomial:
    total = ZERO
    for value in values:
        total = total + value
    return total
