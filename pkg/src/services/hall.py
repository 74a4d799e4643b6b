"""
The generic twisted Hall algebra of the equioriented A_n quiver.

E_M * E_N = sum over X of v^([M,M] + [N,N] + <dim M, dim N> - [X,X]) F^X_{M,N}(v^2) E_X,
where F^X_{M,N} counts subrepresentations U ~ N of X with X/U ~ M.
Under E_i -> E_{S_i} this is the positive part of the quantized
enveloping algebra, with the isomorphism classes as a PBW basis.
"""

import logging
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.services.counting import HallCounter
from src.services.exceptions import (
    DimensionMismatch,
    IndexOutOfRange,
    NoSolutionInLattice,
    NotUnitriangular,
    OrderConventionViolation,
    RankMismatch,
)
from src.services.laurent import ONE, V, V_INV, LaurentPolynomial, quantum_factorial
from src.services.repquiver import (
    DimVector,
    Multisegment,
    euler_form,
    enumerate_multisegments as _enumerate_multisegments,
    hom_dim_additive,
    hom_order_leq,
    hom_vector,
)

LOGGER = logging.getLogger(__name__)

Scalar = Union[int, LaurentPolynomial]

# Root vectors E_{i,j} for j > i + 1: "left" is E_i E_{i+1,j} - v^-1 E_{i+1,j} E_i,
# "right" is E_{i,j-1} E_j - v^-1 E_j E_{i,j-1}.
BRACKETINGS = ("left", "right")


@lru_cache(maxsize=None)
def enumerate_multisegments(d: DimVector) -> Tuple[Multisegment, ...]:
    """All isomorphism classes of dimension vector d."""
    return tuple(_enumerate_multisegments(d))


def degeneration_key(M: Multisegment) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: generic classes (small Hom spaces from intervals) first."""
    return (sum(hom_vector(M)), M.m)


class HallElement:
    """Immutable homogeneous linear combination of isomorphism classes."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[Multisegment, Scalar]] = None):
        self.n = n
        clean: Dict[Multisegment, LaurentPolynomial] = {}
        weight = None
        for M, coefficient in (terms or {}).items():
            if M.n != n:
                raise RankMismatch(f"Multisegment {M} of rank {M.n} in an element of rank {n}")
            coefficient = LaurentPolynomial.coerce(coefficient)
            if coefficient.is_zero():
                continue
            if weight is None:
                weight = M.dim_vector
            elif M.dim_vector != weight:
                raise DimensionMismatch(f"Inhomogeneous element: {M.dim_vector} and {weight}")
            clean[M] = coefficient
        self._terms = clean
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> "HallElement":
        return cls(n)

    @classmethod
    def unit(cls, n: int) -> "HallElement":
        return cls(n, {Multisegment.zero(n): ONE})

    @classmethod
    def basis(cls, M: Multisegment, coefficient: Scalar = 1) -> "HallElement":
        return cls(M.n, {M: coefficient})

    @property
    def terms(self) -> Dict[Multisegment, LaurentPolynomial]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Multisegment, LaurentPolynomial]]:
        """Terms with generic classes first."""
        return sorted(self._terms.items(), key=lambda item: degeneration_key(item[0]))

    def support(self) -> List[Multisegment]:
        return [M for M, _ in self.items()]

    def coefficient(self, M: Multisegment) -> LaurentPolynomial:
        return self._terms.get(M, LaurentPolynomial())

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def dim_vector(self) -> Optional[DimVector]:
        for M in self._terms:
            return M.dim_vector
        return None

    def _check_rank(self, other: "HallElement"):
        if self.n != other.n:
            raise RankMismatch(f"Hall elements of rank {self.n} and {other.n}")

    def __add__(self, other: "HallElement") -> "HallElement":
        self._check_rank(other)
        result = dict(self._terms)
        for M, coefficient in other._terms.items():
            result[M] = result.get(M, LaurentPolynomial()) + coefficient
        return HallElement(self.n, result)

    def __neg__(self) -> "HallElement":
        return HallElement(self.n, {M: -c for M, c in self._terms.items()})

    def __sub__(self, other: "HallElement") -> "HallElement":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "HallElement":
        scalar = LaurentPolynomial.coerce(scalar)
        return HallElement(self.n, {M: c * scalar for M, c in self._terms.items()})

    def map_coefficients(self, func) -> "HallElement":
        return HallElement(self.n, {M: func(c) for M, c in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"HallElement(n={self.n}, {self})"

    def __str__(self) -> str:
        """Render as `[1..2] + v^-1*([1..1]+[2..2])`."""
        if not self._terms:
            return "0"
        parts: List[str] = []
        for M, coefficient in self.items():
            basis = "1" if M.is_zero() else str(M)
            if len(M.segments()) > 1:
                basis = f"({basis})"
            negative = False
            if coefficient == ONE:
                body = basis
            elif coefficient == -ONE:
                body, negative = basis, True
            elif len(coefficient.terms) == 1:
                exponent, value = coefficient.terms[0]
                negative = value < 0
                magnitude = str(LaurentPolynomial.monomial(exponent, abs(value)))
                body = magnitude if M.is_zero() else f"{magnitude}*{basis}"
            else:
                body = f"({coefficient})" if M.is_zero() else f"({coefficient})*{basis}"
            if not parts:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)


@dataclass(frozen=True)
class Factor:
    """
    A divided power E_{start,end}^(exponent).

    start == end is a Chevalley generator; otherwise a root vector. A
    barred factor stands for the bar image of the root vector.
    """

    start: int
    end: int
    exponent: int = 1
    barred: bool = False

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError(f"Factor exponent must be >= 1, got {self.exponent}")
        if self.start > self.end:
            raise IndexOutOfRange(f"Factor ({self.start}, {self.end}) has start > end")

    @property
    def is_chevalley(self) -> bool:
        return self.start == self.end

    def bar(self) -> "Factor":
        if self.is_chevalley:
            return self
        return Factor(self.start, self.end, self.exponent, not self.barred)

    def __str__(self) -> str:
        name = f"E_{self.start}" if self.is_chevalley else f"E_{{{self.start},{self.end}}}"
        if self.barred:
            name = f"bar({name})"
        return name if self.exponent == 1 else f"{name}^({self.exponent})"


@dataclass(frozen=True)
class GeneratorWord:
    """Scalar times an ordered product of divided-power factors."""

    factors: Tuple[Factor, ...] = ()
    scalar: LaurentPolynomial = field(default_factory=lambda: ONE)

    @classmethod
    def build(cls, pieces: Iterable[Tuple[int, int, int]], scalar: Scalar = 1) -> "GeneratorWord":
        """Word from (start, end, exponent) triples; zero exponents are dropped."""
        factors = tuple(Factor(start, end, exponent) for start, end, exponent in pieces if exponent)
        return cls(factors, LaurentPolynomial.coerce(scalar))

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        return GeneratorWord(self.factors + other.factors, self.scalar * other.scalar)

    def scaled(self, scalar: Scalar) -> "GeneratorWord":
        return GeneratorWord(self.factors, self.scalar * LaurentPolynomial.coerce(scalar))

    def bar(self) -> "GeneratorWord":
        return GeneratorWord(tuple(f.bar() for f in self.factors), self.scalar.bar())

    def is_empty(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        body = "*".join(str(f) for f in self.factors) or "1"
        if self.scalar == ONE:
            return body
        return f"({self.scalar})*{body}"


class HallAlgebra:
    """
    Hall algebra of rank n, backed by a HallCounter for the structure constants.

    Products of basis elements and evaluated factors are memoized; the
    memo tables are shared between threads under a lock.
    """

    def __init__(self, n: int, counter: Optional[HallCounter] = None, bracketing: str = "left"):
        if n < 1:
            raise IndexOutOfRange(f"Quiver rank must be >= 1, got {n}")
        if bracketing not in BRACKETINGS:
            raise ValueError(f"Unknown bracketing '{bracketing}'")
        self.n = n
        self.counter = counter if counter is not None else HallCounter()
        self.bracketing = bracketing
        self._lock = threading.Lock()
        self._products: Dict[Tuple[Multisegment, Multisegment], HallElement] = {}
        self._factors: Dict[Factor, HallElement] = {}
        self._roots: Dict[Tuple[int, int, bool, str], HallElement] = {}
        self._conventions: Dict[Tuple[int, int], str] = {}
        self._pbw_checked: Dict[Multisegment, GeneratorWord] = {}
        self._bar_basis: Dict[Multisegment, HallElement] = {}

    # Products

    def basis_product(self, M: Multisegment, N: Multisegment) -> HallElement:
        """E_M * E_N."""
        key = (M, N)
        with self._lock:
            cached = self._products.get(key)
        if cached is not None:
            return cached
        d = tuple(a + b for a, b in zip(M.dim_vector, N.dim_vector))
        twist = hom_dim_additive(M, M) + hom_dim_additive(N, N) + euler_form(M.dim_vector, N.dim_vector)
        terms: Dict[Multisegment, LaurentPolynomial] = {}
        for X in enumerate_multisegments(d):
            poly = self.counter.hall_polynomial(M, N, X)
            if poly.is_zero():
                continue
            terms[X] = poly.to_laurent().shift(twist - hom_dim_additive(X, X))
        result = HallElement(self.n, terms)
        with self._lock:
            self._products[key] = result
        return result

    def multiply(self, A: HallElement, B: HallElement) -> HallElement:
        """Bilinear extension of the basis product."""
        if A.n != self.n or B.n != self.n:
            raise RankMismatch(f"Multiplying elements of rank {A.n} and {B.n} in rank {self.n}")
        result: Dict[Multisegment, LaurentPolynomial] = {}
        for M, a in A.terms.items():
            for N, b in B.terms.items():
                scalar = a * b
                for X, c in self.basis_product(M, N).terms.items():
                    result[X] = result.get(X, LaurentPolynomial()) + scalar * c
        return HallElement(self.n, result)

    def product(self, elements: Sequence[HallElement]) -> HallElement:
        """Left-to-right product; the empty product is 1."""
        result = HallElement.unit(self.n)
        for element in elements:
            result = self.multiply(result, element)
        return result

    def divided_power(self, A: HallElement, exponent: int) -> HallElement:
        """
        A^(exponent) = A^exponent / [exponent]!.

        Raises:
            NonDivisible: If some coefficient of the power is not divisible
        """
        if exponent < 0:
            raise ValueError(f"Divided power exponent must be >= 0, got {exponent}")
        if exponent == 0:
            return HallElement.unit(self.n)
        power = A
        for _ in range(exponent - 1):
            power = self.multiply(power, A)
        denominator = quantum_factorial(exponent)
        return power.map_coefficients(lambda c: c.exact_divide(denominator))

    # Generators

    def _check_vertex(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(f"Vertex {i} is outside 1..{self.n}")

    def chevalley(self, i: int) -> HallElement:
        """E_i = E_{S_i}."""
        self._check_vertex(i)
        return HallElement.basis(Multisegment.simple(self.n, i))

    def _bracket(self, i: int, j: int, barred: bool, bracketing: str) -> HallElement:
        """E_{i,j} (or its bar image) by the given bracketing, without checks."""
        key = (i, j, barred, bracketing)
        with self._lock:
            cached = self._roots.get(key)
        if cached is not None:
            return cached
        if i == j:
            result = self.chevalley(i)
        else:
            twist = V if barred else V_INV
            if bracketing == "left":
                head, tail = self.chevalley(i), self._bracket(i + 1, j, barred, bracketing)
            else:
                head, tail = self._bracket(i, j - 1, barred, bracketing), self.chevalley(j)
            result = self.multiply(head, tail) - self.multiply(tail, head).scale(twist)
        with self._lock:
            self._roots[key] = result
        return result

    def root_convention(self, i: int, j: int) -> str:
        """The bracketing under which E_{i,j} equals E_{U_{i,j}}, found by root_element."""
        with self._lock:
            convention = self._conventions.get((i, j))
        if convention is None:
            self.root_element(i, j)
            with self._lock:
                convention = self._conventions[(i, j)]
        return convention

    def root_element(self, i: int, j: Optional[int] = None) -> HallElement:
        """
        Root vector E_{i,j} (j defaults to i + 1), checked to equal E_{U_{i,j}}.

        The preferred bracketing is tried first, then the other one. The
        bracketing that passes is recorded per root; the preference itself
        never changes, so concurrent callers see one convention per root.

        Raises:
            IndexOutOfRange: If the interval is not inside 1..n
            OrderConventionViolation: If neither bracketing gives E_{U_{i,j}}
        """
        j = i + 1 if j is None else j
        self._check_vertex(i)
        self._check_vertex(j)
        if j < i:
            raise IndexOutOfRange(f"Root ({i}, {j}) has i > j")
        expected = HallElement.basis(Multisegment.interval(self.n, i, j))
        alternative = BRACKETINGS[1 - BRACKETINGS.index(self.bracketing)]
        element = None
        for bracketing in (self.bracketing, alternative):
            element = self._bracket(i, j, False, bracketing)
            if element == expected:
                LOGGER.debug(f"Root vector E_{{{i},{j}}} passes with {bracketing} bracketing")
                with self._lock:
                    self._conventions.setdefault((i, j), bracketing)
                return element
            LOGGER.warning(f"{bracketing} bracketing fails for E_{{{i},{j}}}: got {element}")
        raise OrderConventionViolation(f"No bracketing gives E_{{{i},{j}}} = [{i}..{j}]; last result {element}")

    def factor_element(self, factor: Factor) -> HallElement:
        """Evaluate a single divided-power factor."""
        with self._lock:
            cached = self._factors.get(factor)
        if cached is not None:
            return cached
        self._check_vertex(factor.start)
        self._check_vertex(factor.end)
        if factor.is_chevalley:
            base = self.chevalley(factor.start)
        elif factor.barred:
            convention = self.root_convention(factor.start, factor.end)
            base = self._bracket(factor.start, factor.end, True, convention)
        else:
            base = self.root_element(factor.start, factor.end)
        result = self.divided_power(base, factor.exponent)
        with self._lock:
            self._factors[factor] = result
        return result

    # Words

    def evaluate_word(self, word: GeneratorWord) -> HallElement:
        """Multiply the factors left to right and apply the scalar."""
        result = HallElement.unit(self.n).scale(word.scalar)
        for factor in word.factors:
            result = self.multiply(result, self.factor_element(factor))
        return result

    def evaluate_words(self, words: Iterable[GeneratorWord]) -> HallElement:
        total = HallElement.zero(self.n)
        for word in words:
            total = total + self.evaluate_word(word)
        return total

    @staticmethod
    def bar_word(word: GeneratorWord) -> GeneratorWord:
        """
        The word evaluating to the bar image of the input word.

        Chevalley divided powers are bar-fixed; root factors are replaced
        by their barred counterparts and the scalar is conjugated.
        """
        return word.bar()

    def pbw_word(self, M: Multisegment) -> GeneratorWord:
        """Divided powers E_{i,j}^(m_ij), ordered by i descending, then j descending."""
        if M.n != self.n:
            raise RankMismatch(f"Multisegment of rank {M.n} in a rank {self.n} algebra")
        segments = sorted(M.segments(), key=lambda item: (-item[0][0], -item[0][1]))
        return GeneratorWord.build((i, j, count) for (i, j), count in segments)

    def pbw_monomial_general(self, M: Multisegment) -> GeneratorWord:
        """
        The PBW word of M, checked to evaluate to E_M exactly.

        Raises:
            OrderConventionViolation: If the word does not evaluate to E_M
        """
        with self._lock:
            cached = self._pbw_checked.get(M)
        if cached is not None:
            return cached
        word = self.pbw_word(M)
        value = self.evaluate_word(word)
        if value != HallElement.basis(M):
            raise OrderConventionViolation(f"PBW word {word} evaluates to {value}, not {M}")
        with self._lock:
            self._pbw_checked[M] = word
        return word

    # Bar involution

    def bar_basis(self, M: Multisegment) -> HallElement:
        """bar(E_M), through the bar image of its PBW word."""
        with self._lock:
            cached = self._bar_basis.get(M)
        if cached is not None:
            return cached
        word = self.pbw_monomial_general(M)
        result = self.evaluate_word(self.bar_word(word))
        with self._lock:
            self._bar_basis[M] = result
        return result

    def bar_element(self, A: HallElement) -> HallElement:
        """bar(A) = sum of bar(c_M) bar(E_M)."""
        result = HallElement.zero(self.n)
        for M, coefficient in A.terms.items():
            result = result + self.bar_basis(M).scale(coefficient.bar())
        return result

    def bar_matrix(self, d: Sequence[int]) -> Dict[Multisegment, HallElement]:
        """bar(E_M) for every class M of dimension vector d."""
        return {M: self.bar_basis(M) for M in enumerate_multisegments(tuple(d))}

    # Canonical basis

    def triangular_canonical_basis(self, d: Sequence[int]) -> Dict[Multisegment, HallElement]:
        """
        The canonical basis of weight d by the unitriangular fixed-point recursion.

        Each element is bar-fixed, has coefficient 1 at its own class and
        coefficients in v^-1 Z[v^-1] at classes strictly below it in the
        hom-order.

        Raises:
            NotUnitriangular: If bar(E_L) has a term outside the hom-order cone of L
            NoSolutionInLattice: If the recursion meets a remainder that is not antisymmetric
        """
        d = tuple(d)
        classes = sorted(enumerate_multisegments(d), key=degeneration_key)
        bars = self.bar_matrix(d)

        for L in classes:
            image = bars[L]
            if image.coefficient(L) != ONE:
                raise NotUnitriangular(f"bar(E_{L}) has diagonal coefficient {image.coefficient(L)}")
            for N in image.support():
                if N != L and not hom_order_leq(N, L):
                    raise NotUnitriangular(f"bar(E_{L}) has a term at {N}, which is not below {L}")

        basis: Dict[Multisegment, HallElement] = {}
        for L in classes:
            zeta: Dict[Multisegment, LaurentPolynomial] = {L: ONE}
            for K in classes:
                if K == L or not hom_order_leq(K, L):
                    continue
                remainder = LaurentPolynomial()
                for N, value in zeta.items():
                    remainder = remainder + value.bar() * bars[N].coefficient(K)
                if remainder.bar() != -remainder:
                    raise NoSolutionInLattice(f"Remainder {remainder} at {K} below {L} is not antisymmetric")
                negative = LaurentPolynomial({e: c for e, c in remainder.terms if e < 0})
                if not negative.is_zero():
                    zeta[K] = negative
            basis[L] = HallElement(self.n, zeta)
        LOGGER.info(f"Canonical basis of weight {d}: {len(basis)} elements")
        return basis
