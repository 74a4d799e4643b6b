"""
Local intersection cohomology of the components of varieties of complexes.

The stalk of the IC sheaf of a component, at a point of the orbit
O(r - k, h dotplus k), has vanishing odd cohomology; its even Betti
numbers are the coefficients of a polynomial in q, obtained either from
a closed formula or from the canonical-basis coefficient shifted by the
codimension of the orbit.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import List, Sequence

from src.services.canonical import OmegaDecomposition, zeta_closed_form
from src.services.exceptions import DeformationOutOfRange
from src.services.hall import HallElement
from src.services.laurent import LaurentPolynomial, QPolynomial, normalized_binomial
from src.services.repquiver import (
    ComplexType,
    DeformationIndex,
    check_deformation,
    closure_leq,
    codim_shift,
    complex_to_multisegment,
    deform,
    deformation_indices,
    enumerate_components,
)

LOGGER = logging.getLogger(__name__)


@dataclass
class StalkRow:
    k: DeformationIndex
    orbit: ComplexType
    poincare: QPolynomial
    codim: int


@dataclass
class StalkTable:
    component: ComplexType
    rows: List[StalkRow] = field(default_factory=list)

    def row(self, k: Sequence[int]) -> StalkRow:
        for row in self.rows:
            if row.k == tuple(k):
                return row
        raise DeformationOutOfRange(f"k={tuple(k)} is not a row of the table for r={self.component.r}")


def stalk_poincare(c: ComplexType, k: Sequence[int]) -> QPolynomial:
    """
    IC stalk Poincare polynomial of the component c at the orbit deform(c, k).

    Sum over t_i in 0..min(k_{i-1}, k_i), i in Omega, of
    q^(sum (h_i + t_i) t_i) prod_Omega (k_i over k_i - t_i)_q (k_{i-1} over t_i)_q
    times prod over i outside Omega of (k_{i-1} + k_i over k_i)_q.

    Raises:
        NotSparse: If c is not the open orbit of a component
        DeformationOutOfRange: If k is not between 0 and r
    """
    vertices = OmegaDecomposition.of(c).vertices
    kk = (0,) + check_deformation(c, k) + (0,)

    outside = QPolynomial.constant(1)
    for i in range(1, c.n + 1):
        if i not in vertices:
            outside = outside * normalized_binomial(kk[i - 1] + kk[i], kk[i])

    total = QPolynomial(())
    for t in product(*(range(min(kk[i - 1], kk[i]) + 1) for i in vertices)):
        term = QPolynomial.monomial(sum((c.h_at(i) + t_i) * t_i for i, t_i in zip(vertices, t)))
        for i, t_i in zip(vertices, t):
            term = term * normalized_binomial(kk[i], kk[i] - t_i) * normalized_binomial(kk[i - 1], t_i)
        total = total + term * outside
    return total


def ic_from_zeta(c: ComplexType, k: Sequence[int]) -> QPolynomial:
    """
    v^codim times the canonical-basis coefficient, read as a polynomial in q.

    Raises:
        OddPowerPresent: If an odd power of v survives
        NegativePowerPresent: If a negative power of v survives
    """
    return zeta_closed_form(c, k).shift(codim_shift(c, k)).to_qpolynomial()


def stalk_from_coefficient(c: ComplexType, k: Sequence[int], coefficient: LaurentPolynomial) -> QPolynomial:
    """The stalk polynomial encoded by a coefficient taken from any canonical basis element."""
    return coefficient.shift(codim_shift(c, k)).to_qpolynomial()


def stalk_from_element(c: ComplexType, k: Sequence[int], element: HallElement) -> QPolynomial:
    """Stalk polynomial from the coefficient of element at M(r - k, h dotplus k)."""
    coefficient = element.coefficient(complex_to_multisegment(deform(c, k)))
    return stalk_from_coefficient(c, k, coefficient)


def stalk_table(c: ComplexType) -> StalkTable:
    """One row per k <= r, in lexicographic k-order."""
    OmegaDecomposition.of(c)
    table = StalkTable(component=c)
    for k in deformation_indices(c):
        table.rows.append(StalkRow(
            k=k,
            orbit=deform(c, k),
            poincare=stalk_poincare(c, k),
            codim=codim_shift(c, k),
        ))
    return table


def component_report(d: Sequence[int]) -> List[StalkTable]:
    """A StalkTable for every component of Com(d)."""
    tables = [stalk_table(c) for c in enumerate_components(d)]
    LOGGER.info(f"Component report for d={tuple(d)}: {len(tables)} components")
    return tables


def support_condition_check(c: ComplexType, k: Sequence[int]) -> bool:
    """
    The IC support bound at a proper degeneration: 2 deg_q(stalk) < codim.

    Raises:
        DeformationOutOfRange: If k = 0
    """
    if not any(k):
        raise DeformationOutOfRange("The support condition concerns k != 0")
    return 2 * stalk_poincare(c, k).degree() < codim_shift(c, k)


def stalk_at_orbit(c: ComplexType, orbit: ComplexType) -> QPolynomial:
    """Stalk of the IC sheaf of the component c at any orbit of Com(d); zero off the closure."""
    if not closure_leq(orbit, c):
        return QPolynomial(())
    k = tuple(a - b for a, b in zip(c.r, orbit.r))
    return stalk_poincare(c, k)


def is_rationally_smooth(table: StalkTable) -> bool:
    """Every stalk of the component is 1."""
    return all(row.poincare == 1 for row in table.rows)


def total_stalk_rank(c: ComplexType, k: Sequence[int]) -> int:
    """Total dimension of the stalk cohomology."""
    return int(stalk_poincare(c, k).evaluate(1))
