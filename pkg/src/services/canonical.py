"""
Explicit canonical basis elements attached to components of varieties of complexes.

For a complex type (r, h) with sparse support Omega = {i_1 < ... < i_s}
of h, the element

    E_Omega = B_{i_s+1,n} C_{i_s} B_{i_{s-1}+1,i_s-1} ... C_{i_1} B_{1,i_1-1}

is built from divided powers of Chevalley generators and multiplied out
in the Hall algebra. Its coefficients at the degenerations
M(r - k, h dotplus k) are compared against a closed form computed
without any Hall multiplication.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from src.services.exceptions import IndexOutOfRange, NotSparse
from src.services.hall import GeneratorWord, HallAlgebra, HallElement
from src.services.laurent import ONE, LaurentPolynomial, gauss_binomial, sum_laurent
from src.services.report import Report
from src.services.repquiver import (
    ComplexType,
    DeformationIndex,
    check_deformation,
    complex_to_multisegment,
    deform,
    deformation_indices,
    is_sparse,
    omega,
)

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class OmegaDecomposition:
    """A complex type together with its sorted, sparse support."""

    c: ComplexType
    vertices: Tuple[int, ...]

    @classmethod
    def of(cls, c: ComplexType) -> "OmegaDecomposition":
        vertices = tuple(omega(c))
        if not is_sparse(vertices):
            raise NotSparse(f"Omega={set(vertices)} of h={c.h} contains consecutive vertices")
        return cls(c, vertices)


def _padded_k(k: Sequence[int]) -> Tuple[int, ...]:
    """k_0, k_1, ..., k_{n-1}, k_n with k_0 = k_n = 0."""
    return (0,) + tuple(k) + (0,)


def b_element(i: int, j: int, c: ComplexType) -> GeneratorWord:
    """
    B_{i,j} = E_{j-1}^(r_{j-1}) E_j^(r_{j-1}) ... E_i^(r_i) E_{i+1}^(r_i).

    Empty (the unit) when j <= i.
    """
    if not (1 <= i <= c.n + 1 and 0 <= j <= c.n):
        raise IndexOutOfRange(f"B_{{{i},{j}}} is outside 1..{c.n}")
    pieces = []
    for p in range(j - 1, i - 1, -1):
        pieces.append((p, p, c.r_at(p)))
        pieces.append((p + 1, p + 1, c.r_at(p)))
    return GeneratorWord.build(pieces)


def c_words(i: int, c: ComplexType) -> List[GeneratorWord]:
    """
    The summands of C_i as words:
    [-h_i over u] E_i^(r_i-u) E_{i+1}^(r_i) E_{i-1}^(r_{i-1}) E_i^(h_i+r_{i-1}+u), u = 0..r_i.
    """
    if not 1 <= i <= c.n:
        raise IndexOutOfRange(f"C_{i} is outside 1..{c.n}")
    r_i, r_prev, h_i = c.r_at(i), c.r_at(i - 1), c.h_at(i)
    words = []
    for u in range(r_i + 1):
        scalar = gauss_binomial(-h_i, u)
        if scalar.is_zero():
            continue
        words.append(GeneratorWord.build(
            [(i, i, r_i - u), (i + 1, i + 1, r_i), (i - 1, i - 1, r_prev), (i, i, h_i + r_prev + u)],
            scalar,
        ))
    return words


def c_element(i: int, c: ComplexType, algebra: HallAlgebra) -> HallElement:
    """C_i evaluated in the Hall algebra."""
    return algebra.evaluate_words(c_words(i, c))


def e_omega_words(c: ComplexType) -> List[GeneratorWord]:
    """
    E_Omega expanded into a list of words, one per choice of C-summands.

    Raises:
        NotSparse: If the support of h is not sparse
    """
    vertices = OmegaDecomposition.of(c).vertices
    slots: List[List[GeneratorWord]] = []
    upper = c.n
    for vertex in reversed(vertices):
        slots.append([b_element(vertex + 1, upper, c)])
        slots.append(c_words(vertex, c))
        upper = vertex - 1
    slots.append([b_element(1, upper, c)])

    words = []
    for choice in product(*slots):
        word = GeneratorWord()
        for piece in choice:
            word = word * piece
        words.append(word)
    return words


def e_omega(c: ComplexType, algebra: HallAlgebra) -> HallElement:
    """The element E_Omega(r, h), multiplied out in the Hall algebra."""
    if algebra.n != c.n:
        raise IndexOutOfRange(f"Algebra of rank {algebra.n} for a complex of rank {c.n}")
    return algebra.evaluate_words(e_omega_words(c))


def zeta_summands(c: ComplexType, k: Sequence[int]) -> List[Tuple[Tuple[int, ...], LaurentPolynomial]]:
    """
    The summands of the closed form for the coefficient at M(r - k, h dotplus k).

    One summand per choice of t_i in 0..min(k_{i-1}, k_i) for i in Omega.
    """
    vertices = OmegaDecomposition.of(c).vertices
    k = check_deformation(c, k)
    kk = _padded_k(k)
    n = c.n

    base = -sum(x * x for x in k)
    base -= sum(kk[i - 1] * kk[i] for i in vertices)
    base -= sum(c.h_at(i) * (kk[i - 1] + kk[i]) for i in vertices)

    outside = ONE
    for i in range(1, n + 1):
        if i not in vertices:
            outside = outside * gauss_binomial(kk[i - 1] + kk[i], kk[i])

    summands = []
    ranges = [range(min(kk[i - 1], kk[i]) + 1) for i in vertices]
    for t in product(*ranges):
        exponent = base + sum((2 * c.h_at(i) + kk[i - 1] + kk[i]) * t_i for i, t_i in zip(vertices, t))
        value = LaurentPolynomial.monomial(exponent) * outside
        for i, t_i in zip(vertices, t):
            value = value * gauss_binomial(kk[i], kk[i] - t_i) * gauss_binomial(kk[i - 1], t_i)
        summands.append((tuple(t), value))
    return summands


def zeta_closed_form(c: ComplexType, k: Sequence[int]) -> LaurentPolynomial:
    """Coefficient of E_{M(r-k, h dotplus k)} in E_Omega(r, h), without Hall multiplication."""
    return sum_laurent([value for _, value in zeta_summands(c, k)])


def summand_degree(c: ComplexType, k: Sequence[int], t: Sequence[int]) -> int:
    """v-degree of the (k, t) summand of the closed form, read off the polynomial."""
    for key, value in zeta_summands(c, k):
        if key == tuple(t):
            return value.degree()
    raise IndexOutOfRange(f"t={tuple(t)} is not a summation index for k={tuple(k)}")


def summand_degree_closed_form(c: ComplexType, k: Sequence[int], t: Sequence[int]) -> int:
    """
    -(sum k_i^2 - sum k_{i-1} k_i) - sum_Omega h_i (k_{i-1} - t_i + k_i - t_i)
    - 2 sum_Omega (k_{i-1} - t_i)(k_i - t_i).
    """
    vertices = OmegaDecomposition.of(c).vertices
    kk = _padded_k(check_deformation(c, k))
    degree = -(sum(x * x for x in kk) - sum(kk[i - 1] * kk[i] for i in range(1, c.n + 1)))
    for i, t_i in zip(vertices, t):
        a, b = kk[i - 1] - t_i, kk[i] - t_i
        degree -= c.h_at(i) * (a + b) + 2 * a * b
    return degree


def expansion_from_element(c: ComplexType, element: HallElement) -> Dict[DeformationIndex, LaurentPolynomial]:
    """Coefficients of an element at M(r - k, h dotplus k), for every k."""
    return {
        k: element.coefficient(complex_to_multisegment(deform(c, k)))
        for k in deformation_indices(c)
    }


def canonical_expansion(c: ComplexType) -> Dict[DeformationIndex, LaurentPolynomial]:
    """The closed-form coefficients for every k <= r."""
    return {k: zeta_closed_form(c, k) for k in deformation_indices(c)}


def verify_canonical(c: ComplexType, algebra: HallAlgebra, element: Optional[HallElement] = None) -> Report:
    """
    Check E_Omega(r, h) against the closed form and the canonical-basis conditions.

    Checks: (a) support inside the degenerations M(r - k, h dotplus k);
    (b) each coefficient equals the closed form; (c) bar-fixed, through a
    recomputation of the bar image; (d) unit leading coefficient and all
    other coefficients in v^-1 Z[v^-1].

    Args:
        c: Complex type with sparse support
        algebra: Hall algebra of rank c.n
        element: Element to check instead of the multiplied-out E_Omega
    """
    report = Report()
    label = f"d={c.d} r={c.r}"
    if element is None:
        element = e_omega(c, algebra)

    allowed = {complex_to_multisegment(deform(c, k)): k for k in deformation_indices(c)}
    stray = [str(M) for M in element.support() if M not in allowed]
    report.add("canonical", f"support {label}", not stray, f"unexpected terms {stray}" if stray else "")

    mismatches = []
    for M, k in allowed.items():
        actual, expected = element.coefficient(M), zeta_closed_form(c, k)
        if actual != expected:
            mismatches.append(f"k={k}: {actual} != {expected}")
    report.add("canonical", f"closed form {label}", not mismatches, "; ".join(mismatches))

    barred = algebra.bar_element(element)
    report.add("canonical", f"bar-fixed {label}", barred == element, "" if barred == element else f"bar gives {barred}")

    lattice_failures = []
    for M, k in allowed.items():
        coefficient = element.coefficient(M)
        if not any(k):
            if coefficient != ONE:
                lattice_failures.append(f"leading coefficient {coefficient}")
        elif not coefficient.in_negative_lattice():
            lattice_failures.append(f"k={k}: {coefficient}")
    report.add("canonical", f"lattice {label}", not lattice_failures, "; ".join(lattice_failures))

    LOGGER.info(f"verify_canonical {label}: {'pass' if report.passed else 'FAIL'}")
    return report
