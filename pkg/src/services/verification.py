"""
Verification suites: identities, dimension formulas, formula cross-checks,
the explicit construction against its closed form, the canonical-basis
oracle, golden values and Hall-algebra structure.

Each suite appends named checks to a Report; nothing here raises on a
failed check. Grids are traversed in a fixed order and worker results
are collected in submission order, so reports do not depend on the
number of threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import nextprime, prime

from src.services.canonical import (
    e_omega,
    summand_degree,
    summand_degree_closed_form,
    verify_canonical,
    zeta_closed_form,
    zeta_summands,
)
from src.services.counting import HallCounter, subrep_tally
from src.services.exceptions import ConsistencyError, InfeasibleInput
from src.services.hall import GeneratorWord, HallAlgebra, HallElement
from src.services.hall_cache import HallCache
from src.services.ic import (
    component_report,
    ic_from_zeta,
    is_rationally_smooth,
    stalk_from_element,
    stalk_poincare,
    support_condition_check,
)
from src.services.laurent import (
    V,
    QPolynomial,
    bar,
    gauss_binomial,
    normalized_binomial,
    q_pascal_rhs,
    quantum_integer,
    xi_identity_sides,
)
from src.services.report import Report
from src.services.repquiver import (
    ComplexType,
    Multisegment,
    closure_leq,
    codim_shift,
    complex_to_multisegment,
    deform,
    deformation_indices,
    enumerate_components,
    enumerate_multisegments,
    enumerate_orbits,
    euler_form,
    hom_dim,
    hom_dim_additive,
    intervals,
    is_sparse,
    mm_closed_form,
    multisegment_from_matrices,
    normal_form_matrices,
    root,
)

LOGGER = logging.getLogger(__name__)

# golden last: its held-out check covers the tallies requested by the other suites.
SUITES = ("laurent", "dimensions", "formula", "construction", "oracle", "structure", "golden")

# Number of failing instances quoted in a check's detail.
DETAIL_LIMIT = 5

# Held-out primes: every requested tally up to this total dimension, plus
# a full grid of tallies up to HELD_OUT_GRID_TOTAL.
HELD_OUT_MAX_TOTAL = 5
HELD_OUT_GRID_TOTAL = 3

# Entry bound of the formula sweep unless --max-entry is given.
FORMULA_DEFAULT_ENTRY = 2


@dataclass
class VerifyBounds:
    max_rank: int = 4
    max_entry: Optional[int] = None
    max_total_dim: int = 6

    def entry_bound(self, default: int) -> int:
        return self.max_entry if self.max_entry is not None else default


def _summarize(failures: List[str]) -> str:
    if not failures:
        return ""
    shown = "; ".join(failures[:DETAIL_LIMIT])
    more = len(failures) - DETAIL_LIMIT
    return shown + (f"; and {more} more" if more > 0 else "")


def complex_grid(n: int, max_entry: int, sparse_only: bool = False) -> Iterator[ComplexType]:
    """All (r, h) of rank n with entries <= max_entry, in lexicographic order."""
    for r in product(range(max_entry + 1), repeat=n - 1):
        for h in product(range(max_entry + 1), repeat=n):
            if sparse_only and not is_sparse([i for i, value in enumerate(h, start=1) if value]):
                continue
            yield ComplexType.from_r_h(r, h)


def dimension_vectors(max_rank: int, max_total: int, min_rank: int = 1) -> Iterator[Tuple[int, ...]]:
    """Nonzero dimension vectors with n <= max_rank and total dimension <= max_total."""
    for n in range(min_rank, max_rank + 1):
        for d in product(range(max_total + 1), repeat=n):
            if 0 < sum(d) <= max_total:
                yield d


def divided_power_commutation_sides(
    algebra: HallAlgebra, i: int, m: int, top: int
) -> Tuple[HallElement, HallElement]:
    """
    Both sides of E_i^(m) E_{i+1}^(top) =
    sum_k v^{-(top-m+k)k} E_{i+1}^(top-m+k) E_{i,i+1}^(m-k) E_i^(k), for m <= top.
    """
    left = algebra.evaluate_word(GeneratorWord.build([(i, i, m), (i + 1, i + 1, top)]))
    right = algebra.evaluate_words(
        GeneratorWord.build(
            [(i + 1, i + 1, top - m + k), (i, i + 1, m - k), (i, i, k)],
            V.bar() ** ((top - m + k) * k),
        )
        for k in range(m + 1)
    )
    return left, right


class VerificationService:
    """Runs the verification suites against one shared Hall cache."""

    def __init__(self, cache: Optional[HallCache] = None, threads: int = 1, extra_primes: int = 1):
        self.cache = cache if cache is not None else HallCache()
        self.threads = max(1, threads)
        self.counter = HallCounter(self.cache, threads=1, extra_primes=extra_primes)
        self._algebras: Dict[int, HallAlgebra] = {}

    def algebra(self, n: int) -> HallAlgebra:
        if n not in self._algebras:
            self._algebras[n] = HallAlgebra(n, self.counter)
        return self._algebras[n]

    def _map(self, func: Callable, items: Sequence) -> List:
        items = list(items)
        if self.threads == 1 or len(items) < 2:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(func, items))

    def run(self, suites: Sequence[str], bounds: VerifyBounds) -> Report:
        report = Report()
        runners = {
            "laurent": self.laurent_suite,
            "dimensions": self.dimensions_suite,
            "formula": self.formula_suite,
            "construction": self.construction_suite,
            "oracle": self.oracle_suite,
            "golden": self.golden_suite,
            "structure": self.structure_suite,
        }
        for suite in suites:
            LOGGER.info(f"Running suite '{suite}'")
            try:
                report.extend(runners[suite](bounds))
            except (ConsistencyError, InfeasibleInput) as e:
                report.add(suite, "suite aborted", False, f"{type(e).__name__}: {e}")
            LOGGER.info(f"Suite '{suite}' done: {len(report.names(suite))} checks")
        return report

    # Pure arithmetic

    def laurent_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        symmetric, at_one, bar_fixed, normalized = [], [], [], []
        for a in range(0, 9):
            for n in range(0, a + 1):
                value = gauss_binomial(a, n)
                if value != gauss_binomial(a, a - n):
                    symmetric.append(f"({a},{n})")
                if value.evaluate(1) != comb(a, n):
                    at_one.append(f"({a},{n})")
                if bar(value) != value:
                    bar_fixed.append(f"({a},{n})")
                poly = normalized_binomial(a, n)
                if not (poly.is_palindromic() and poly.has_nonnegative_coefficients()
                        and poly.constant_term() == 1 and poly.degree() == n * (a - n)):
                    normalized.append(f"({a},{n})")
        report.add("laurent", "binomial symmetry", not symmetric, _summarize(symmetric))
        report.add("laurent", "binomial at v=1", not at_one, _summarize(at_one))
        report.add("laurent", "binomial bar-symmetry", not bar_fixed, _summarize(bar_fixed))
        report.add("laurent", "normalized binomial shape", not normalized, _summarize(normalized))

        negative = [
            f"(-{a},{n})"
            for a in range(1, 7) for n in range(0, 7)
            if gauss_binomial(-a, n) != gauss_binomial(a + n - 1, n) * (-1) ** n
        ]
        report.add("laurent", "negative-argument law", not negative, _summarize(negative))

        pascal = [
            f"({a},{n})"
            for a in range(-5, 9) for n in range(1, 7)
            if gauss_binomial(a, n) != q_pascal_rhs(a, n)
        ]
        report.add("laurent", "q-Pascal recurrence", not pascal, _summarize(pascal))

        xi = []
        for c1, c2, c3 in product(range(-4, 5), repeat=3):
            for t in range(0, 7):
                left, right = xi_identity_sides(c1, c2, c3, t)
                if left != right:
                    xi.append(f"c=({c1},{c2},{c3}) t={t}")
        report.add("laurent", "three-parameter binomial identity", not xi, _summarize(xi))
        return report

    def dimensions_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        max_entry = bounds.entry_bound(2)
        memo: Dict[Multisegment, int] = {}

        def self_hom(M: Multisegment) -> int:
            if M not in memo:
                memo[M] = hom_dim(M, M)
            return memo[M]

        roots = [
            f"n={n} ({i},{j})"
            for n in range(1, 6) for i, j in intervals(n)
            if euler_form(root(n, i, j), root(n, i, j)) != 1
            or hom_dim(Multisegment.interval(n, i, j), Multisegment.interval(n, i, j)) != 1
        ]
        report.add("dimensions", "roots are real and bricks", not roots, _summarize(roots))

        for n in range(1, bounds.max_rank + 1):
            mm_failures, codim_failures, positivity = [], [], []
            for c in complex_grid(n, max_entry):
                M = complex_to_multisegment(c)
                if mm_closed_form(c) != self_hom(M):
                    mm_failures.append(f"r={c.r} h={c.h}")
                for k in deformation_indices(c):
                    N = complex_to_multisegment(deform(c, k))
                    shift = codim_shift(c, k)
                    if shift != self_hom(N) - self_hom(M):
                        codim_failures.append(f"r={c.r} h={c.h} k={k}")
                    if any(k) and shift <= 0:
                        positivity.append(f"r={c.r} h={c.h} k={k}")
            report.add("dimensions", f"[M,M] closed form n={n}", not mm_failures, _summarize(mm_failures))
            report.add("dimensions", f"codimension shift n={n}", not codim_failures, _summarize(codim_failures))
            report.add("dimensions", f"codimension positive n={n}", not positivity, _summarize(positivity))

        additivity = []
        for n in range(1, min(bounds.max_rank, 3) + 1):
            for d in dimension_vectors(n, 3, min_rank=n):
                classes = enumerate_multisegments(d)
                for M, N in product(classes, repeat=2):
                    if hom_dim(M, N) != hom_dim_additive(M, N):
                        additivity.append(f"{M} , {N}")
        report.add("dimensions", "hom additivity", not additivity, _summarize(additivity))

        partial_order, round_trip = [], []
        for d in dimension_vectors(min(bounds.max_rank, 3), 4):
            orbits = enumerate_orbits(d)
            for a, b in product(orbits, repeat=2):
                if a != b and closure_leq(a, b) and closure_leq(b, a):
                    partial_order.append(f"d={d} {a.r} {b.r}")
                for c in orbits:
                    if closure_leq(a, b) and closure_leq(b, c) and not closure_leq(a, c):
                        partial_order.append(f"d={d} {a.r} {b.r} {c.r}")
            for M in enumerate_multisegments(d):
                if multisegment_from_matrices(normal_form_matrices(M, 2)) != M:
                    round_trip.append(str(M))
        report.add("dimensions", "closure order is a partial order", not partial_order, _summarize(partial_order))
        report.add("dimensions", "normal form round trip", not round_trip, _summarize(round_trip))
        return report

    def formula_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        max_entry = bounds.entry_bound(FORMULA_DEFAULT_ENTRY)

        def check(c: ComplexType) -> Tuple[List[str], List[str], List[str]]:
            path, structure, degrees = [], [], []
            label = f"r={c.r} h={c.h}"
            for k in deformation_indices(c):
                stalk = stalk_poincare(c, k)
                if stalk != ic_from_zeta(c, k):
                    path.append(f"{label} k={k}")
                zeta = zeta_closed_form(c, k)
                if stalk.constant_term() != 1 or not stalk.has_nonnegative_coefficients():
                    structure.append(f"{label} k={k}: stalk {stalk}")
                if any(k):
                    if not support_condition_check(c, k) or not zeta.in_negative_lattice():
                        structure.append(f"{label} k={k}: support")
                elif zeta != 1:
                    structure.append(f"{label}: zeta_0={zeta}")
                for t, _ in zeta_summands(c, k):
                    if summand_degree(c, k, t) != summand_degree_closed_form(c, k, t):
                        degrees.append(f"{label} k={k} t={t}")
            return path, structure, degrees

        for n in range(1, bounds.max_rank + 2):
            results = self._map(check, list(complex_grid(n, max_entry, sparse_only=True)))
            path = [item for result in results for item in result[0]]
            structure = [item for result in results for item in result[1]]
            degrees = [item for result in results for item in result[2]]
            report.add("formula", f"stalk formula equals shifted closed form n={n}", not path, _summarize(path))
            report.add("formula", f"stalk structure n={n}", not structure, _summarize(structure))
            report.add("formula", f"summand degrees n={n}", not degrees, _summarize(degrees))
        return report

    # Hall-based suites

    def _components_in_range(self, bounds: VerifyBounds, max_total: int) -> List[ComplexType]:
        return [
            c
            for d in dimension_vectors(bounds.max_rank, max_total)
            for c in enumerate_components(d)
        ]

    def construction_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        components = self._components_in_range(bounds, bounds.max_total_dim)
        for result in self._map(lambda c: verify_canonical(c, self.algebra(c.n)), components):
            report.extend(result)
        return report

    def oracle_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        for d in dimension_vectors(bounds.max_rank, bounds.max_total_dim):
            components = enumerate_components(d)
            if not components:
                continue
            algebra = self.algebra(len(d))
            basis = algebra.triangular_canonical_basis(d)
            for c in components:
                label = f"d={c.d} r={c.r}"
                element = e_omega(c, algebra)
                member = basis.get(complex_to_multisegment(c))
                report.add("oracle", f"canonical basis member {label}", member == element,
                           "" if member == element else f"{element} vs {member}")
                stalks = [
                    f"k={k}" for k in deformation_indices(c)
                    if stalk_from_element(c, k, member) != stalk_poincare(c, k)
                ] if member is not None else ["missing member"]
                report.add("oracle", f"stalks from canonical basis {label}", not stalks, _summarize(stalks))
        return report

    def golden_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        one_plus_q = QPolynomial([1, 1])
        one_plus_q2 = QPolynomial([1, 0, 1])

        for d, expected in (((1, 2, 1), one_plus_q), ((1, 3, 1), one_plus_q2)):
            c = ComplexType(d, (1, 1))
            algebra = self.algebra(3)
            coefficient_path = stalk_from_element(c, (1, 1), e_omega(c, algebra))
            values = (stalk_poincare(c, (1, 1)), ic_from_zeta(c, (1, 1)), coefficient_path)
            report.add("golden", f"stalk d={d} k=(1, 1)", all(v == expected for v in values),
                       ", ".join(str(v) for v in values))

        smooth = []
        for d in ((1, 1), (2, 2), (2, 1), (1, 2), (1, 1, 1)):
            for table in component_report(d):
                if not is_rationally_smooth(table):
                    smooth.append(f"d={d} r={table.component.r}")
                if any(ic_from_zeta(table.component, row.k) != 1 for row in table.rows):
                    smooth.append(f"d={d} r={table.component.r} via zeta")
        report.add("golden", "smooth components", not smooth, _summarize(smooth))

        orbits = enumerate_orbits((1, 1, 1))
        report.add("golden", "orbits of d=(1, 1, 1)", len(orbits) == 3, f"{len(orbits)} orbits")
        components = [c.r for c in enumerate_components((1, 1, 1))]
        report.add("golden", "components of d=(1, 1, 1)", components == [(1, 0), (0, 1)], str(components))

        s1, s2 = Multisegment.simple(2, 1), Multisegment.simple(2, 2)
        u12 = Multisegment.interval(2, 1, 2)
        checks = (
            ("F^{S1+S1}_{S1,S1}", self.counter.hall_polynomial(s1, s1, s1 + s1), QPolynomial([1, 1])),
            ("F^{U12}_{S1,S2}", self.counter.hall_polynomial(s1, s2, u12), QPolynomial([1])),
            ("a_{S1+S1}", self.counter.count_automorphisms(s1 + s1), QPolynomial([0, 1, -1, -1, 1])),
            ("a_{S1}", self.counter.count_automorphisms(s1), QPolynomial([-1, 1])),
            ("a_{U12}", self.counter.count_automorphisms(u12), QPolynomial([-1, 1])),
        )
        for name, actual, expected in checks:
            report.add("golden", name, actual == expected, f"{actual}")

        algebra = self.algebra(2)
        e1, e2 = algebra.chevalley(1), algebra.chevalley(2)
        e1e2 = HallElement(2, {u12: 1, s1 + s2: V.bar()})
        report.add("golden", "E1*E2", algebra.multiply(e1, e2) == e1e2, str(algebra.multiply(e1, e2)))
        report.add("golden", "E2*E1", algebra.multiply(e2, e1) == HallElement.basis(s1 + s2),
                   str(algebra.multiply(e2, e1)))
        report.add("golden", "E1^(2)", algebra.divided_power(e1, 2) == HallElement.basis(s1 + s1),
                   str(algebra.divided_power(e1, 2)))

        limit = min(bounds.max_total_dim, HELD_OUT_MAX_TOTAL)
        targets = {
            (X, e)
            for d in dimension_vectors(bounds.max_rank, min(limit, HELD_OUT_GRID_TOTAL))
            for X in enumerate_multisegments(d)
            for e in product(*(range(x + 1) for x in d))
        }
        targets.update(
            (X, e) for X, e in self.counter.requested_tallies()
            if X.n <= bounds.max_rank and X.total_dim <= limit
        )
        held_out = [
            failure
            for failures in self._map(self.held_out_failures, sorted(targets))
            for failure in failures
        ]
        report.add("golden", "held-out prime counts", not held_out, _summarize(held_out))
        return report

    def held_out_failures(self, target: Tuple[Multisegment, Tuple[int, ...]]) -> List[str]:
        """Recount one tally (X, e) at the first prime after those used to interpolate it."""
        X, e = target
        quotient = tuple(a - b for a, b in zip(X.dim_vector, e))
        used = self.counter.degree_bound(X, e) + 1 + self.counter.extra_primes
        p = nextprime(prime(used))
        tally = subrep_tally(X, e, p)
        failures = []
        for N in enumerate_multisegments(e):
            for M in enumerate_multisegments(quotient):
                poly = self.counter.hall_polynomial(M, N, X)
                if poly.evaluate(p) != tally.get((N, M), 0):
                    failures.append(f"F^{X}_{{{M},{N}}} at q={p}")
        return failures

    def structure_suite(self, bounds: VerifyBounds) -> Report:
        report = Report()
        max_total = bounds.max_total_dim

        serre = []
        for n in range(2, min(bounds.max_rank, 4) + 1):
            algebra = self.algebra(n)
            for i, j in product(range(1, n + 1), repeat=2):
                if i == j:
                    continue
                ei, ej = algebra.chevalley(i), algebra.chevalley(j)
                if abs(i - j) >= 2:
                    if algebra.multiply(ei, ej) != algebra.multiply(ej, ei):
                        serre.append(f"n={n} commute ({i},{j})")
                elif max_total >= 3:
                    relation = (
                        algebra.product([ei, ei, ej])
                        - algebra.product([ei, ej, ei]).scale(quantum_integer(2))
                        + algebra.product([ej, ei, ei])
                    )
                    if not relation.is_zero():
                        serre.append(f"n={n} cubic ({i},{j})")
        report.add("structure", "Serre relations", not serre, _summarize(serre))

        associativity = []
        for n in range(1, min(bounds.max_rank, 3) + 1):
            algebra = self.algebra(n)
            pieces = [algebra.chevalley(i) for i in range(1, n + 1)]
            pieces += [algebra.root_element(i) for i in range(1, n)]
            for a, b, c in product(pieces, repeat=3):
                if sum(a.dim_vector) + sum(b.dim_vector) + sum(c.dim_vector) > min(max_total, 5):
                    continue
                left = algebra.multiply(algebra.multiply(a, b), c)
                right = algebra.multiply(a, algebra.multiply(b, c))
                if left != right:
                    associativity.append(f"n={n} {a} * {b} * {c}")
        report.add("structure", "associativity", not associativity, _summarize(associativity))

        lusztig = []
        for n in range(2, min(bounds.max_rank, 3) + 1):
            algebra = self.algebra(n)
            for i in range(1, n):
                for top in range(1, 4):
                    for m in range(0, top + 1):
                        if m + top > max_total:
                            continue
                        left, right = divided_power_commutation_sides(algebra, i, m, top)
                        if left != right:
                            lusztig.append(f"n={n} i={i} m={m} top={top}")
        report.add("structure", "divided-power commutation identity", not lusztig, _summarize(lusztig))

        pbw = []
        for n in range(1, min(bounds.max_rank, 3) + 1):
            algebra = self.algebra(n)
            for c in complex_grid(n, 2):
                if sum(c.d) > max_total:
                    continue
                M = complex_to_multisegment(c)
                try:
                    algebra.pbw_monomial_general(M)
                except ConsistencyError as e:
                    pbw.append(f"r={c.r} h={c.h}: {e}")
        report.add("structure", "PBW words evaluate to basis elements", not pbw, _summarize(pbw))

        involution = []
        for n in range(1, min(bounds.max_rank, 3) + 1):
            algebra = self.algebra(n)
            for d in dimension_vectors(n, min(max_total, 3), min_rank=n):
                for M in enumerate_multisegments(d):
                    element = HallElement.basis(M, V + 2)
                    if algebra.bar_element(algebra.bar_element(element)) != element:
                        involution.append(str(M))
        report.add("structure", "bar is an involution", not involution, _summarize(involution))
        return report
