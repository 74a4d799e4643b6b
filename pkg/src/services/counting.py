"""
Finite-field counting oracle for Hall polynomials and automorphism groups.

Subrepresentations of a normal-form representative over F_p are
enumerated backward along the quiver: U_n is any subspace of V_n, and
U_i is any subspace of f_i^{-1}(U_{i+1}) of the requested dimension. The
isomorphism types of U and X/U are read off rank invariants. Counts at
enough primes are interpolated to integer polynomials in q, and held-out
primes are checked against the interpolated values.
"""

import logging
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from sympy import Poly, QQ, Symbol, interpolate, prime

from src.services.exceptions import (
    DimensionMismatch,
    ExtraPrimeMismatch,
    NonIntegerInterpolation,
    RankMismatch,
)
from src.services.finite_field import (
    Vector,
    apply_mod_p,
    enumerate_subspaces,
    is_invertible_mod_p,
    nullspace_mod_p,
    preimage_mod_p,
    rank_mod_p,
)
from src.services.hall_cache import HallCache
from src.services.laurent import QPolynomial
from src.services.repquiver import (
    DimVector,
    MatrixRep,
    Multisegment,
    enumerate_multisegments,
    hom_dim_additive,
    intertwiner_equations,
    intervals,
    multisegment_from_ranks,
    normal_form_matrices,
)

LOGGER = logging.getLogger(__name__)

Q = Symbol("q")

SubrepTally = Dict[Tuple[Multisegment, Multisegment], int]


def _subtract(d: Sequence[int], e: Sequence[int]) -> DimVector:
    return tuple(a - b for a, b in zip(d, e))


def enumerate_subreps(x: MatrixRep, e: Sequence[int]) -> Iterator[List[List[Vector]]]:
    """
    Yield every subrepresentation of x with dimension vector e.

    Each subrepresentation is a list, per vertex, of basis vectors of U_i.
    """
    n = len(x.dims)
    if len(e) != n:
        raise RankMismatch(f"Sub-dimension vector {tuple(e)} has rank {len(e)}, expected {n}")
    if any(not 0 <= a <= b for a, b in zip(e, x.dims)):
        return

    chosen: List[List[Vector]] = [[] for _ in range(n)]

    def recurse(vertex: int) -> Iterator[List[List[Vector]]]:
        if vertex < 0:
            yield [list(basis) for basis in chosen]
            return
        dim = x.dims[vertex]
        if vertex == n - 1:
            ambient = [[int(a == b) for b in range(dim)] for a in range(dim)]
        else:
            ambient = preimage_mod_p(x.maps[vertex], chosen[vertex + 1], dim, x.dims[vertex + 1], x.p)
        for basis in enumerate_subspaces(ambient, e[vertex], x.p):
            chosen[vertex] = basis
            yield from recurse(vertex - 1)
        chosen[vertex] = []

    yield from recurse(n - 1)


class _CompositeTable:
    """Column lists of the composite maps V_a -> V_b of one representation."""

    def __init__(self, x: MatrixRep):
        self.p = x.p
        self.matrices: Dict[Tuple[int, int], List[Vector]] = {}
        self.columns: Dict[Tuple[int, int], List[Vector]] = {}
        for a, b in intervals(len(x.dims)):
            if a < b:
                matrix = x.composite(a, b)
                self.matrices[(a, b)] = matrix
                self.columns[(a, b)] = [
                    [row[c] for row in matrix] for c in range(x.dims[a - 1])
                ]

    def image(self, a: int, b: int, vectors: Sequence[Vector]) -> List[Vector]:
        matrix = self.matrices[(a, b)]
        return [apply_mod_p(matrix, v, self.p) for v in vectors]


def subrep_types(x: MatrixRep, table: _CompositeTable, sub: List[List[Vector]]) -> Tuple[Multisegment, Multisegment]:
    """Isomorphism types (U, X/U) of a subrepresentation, from rank invariants."""
    n = len(x.dims)
    p = x.p
    sub_ranks: Dict[Tuple[int, int], int] = {}
    quot_ranks: Dict[Tuple[int, int], int] = {}
    for a, b in intervals(n):
        e_a, e_b = len(sub[a - 1]), len(sub[b - 1])
        if a == b:
            sub_ranks[(a, b)] = e_a
            quot_ranks[(a, b)] = x.dims[a - 1] - e_a
            continue
        images = table.image(a, b, sub[a - 1])
        sub_ranks[(a, b)] = rank_mod_p(images, p) if images else 0
        spanning = table.columns[(a, b)] + sub[b - 1]
        quot_ranks[(a, b)] = (rank_mod_p(spanning, p) if spanning else 0) - e_b
    return multisegment_from_ranks(n, sub_ranks), multisegment_from_ranks(n, quot_ranks)


def subrep_tally(X: Multisegment, e: Sequence[int], p: int) -> SubrepTally:
    """
    Count subrepresentations of X over F_p with dimension vector e, by type.

    Returns:
        Mapping (N, M) -> number of U with U ~ N and X/U ~ M
    """
    x = normal_form_matrices(X, p)
    table = _CompositeTable(x)
    tally: Counter = Counter()
    for sub in enumerate_subreps(x, e):
        tally[subrep_types(x, table, sub)] += 1
    return dict(tally)


def count_subreps(x: MatrixRep, sub: Multisegment, quot: Multisegment) -> int:
    """
    Number of subrepresentations U of x with U ~ sub and x/U ~ quot.

    Raises:
        DimensionMismatch: If dim sub + dim quot != dim x
    """
    total = tuple(a + b for a, b in zip(sub.dim_vector, quot.dim_vector))
    if total != tuple(x.dims):
        raise DimensionMismatch(
            f"dim {sub} + dim {quot} = {total} does not match {tuple(x.dims)}"
        )
    table = _CompositeTable(x)
    return sum(
        1 for U in enumerate_subreps(x, sub.dim_vector)
        if subrep_types(x, table, U) == (sub, quot)
    )


def count_automorphisms_mod_p(M: Multisegment, p: int) -> int:
    """|Aut(M)| over F_p: invertible intertwiners among all endomorphisms."""
    rows, offsets, total = intertwiner_equations(M, M)
    basis = nullspace_mod_p(rows, total, p) if rows else [
        [int(a == b) for b in range(total)] for a in range(total)
    ]
    d = M.dim_vector
    count = 0
    for coefficients in product(range(p), repeat=len(basis)):
        phi = [sum(c * v[col] for c, v in zip(coefficients, basis)) % p for col in range(total)]
        invertible = True
        for vertex, dim in enumerate(d):
            start = offsets[vertex]
            block = [phi[start + row * dim:start + (row + 1) * dim] for row in range(dim)]
            if not is_invertible_mod_p(block, p):
                invertible = False
                break
        if invertible:
            count += 1
    return count


def interpolate_counts(points: Sequence[Tuple[int, int]]) -> QPolynomial:
    """
    The polynomial through (p, count) points, with integer coefficients.

    Raises:
        NonIntegerInterpolation: If a coefficient is not an integer
    """
    if all(y == 0 for _, y in points):
        return QPolynomial([])
    poly = Poly(interpolate(list(points), Q), Q, domain=QQ)
    coefficients = []
    for c in reversed(poly.all_coeffs()):
        if c.q != 1:
            raise NonIntegerInterpolation(f"Interpolation through {list(points)} has coefficient {c}")
        coefficients.append(int(c.p))
    return QPolynomial(coefficients)


def check_extra_primes(poly: QPolynomial, points: Sequence[Tuple[int, int]], label: str):
    """Raise ExtraPrimeMismatch if poly disagrees with any held-out count."""
    for p, count in points:
        if poly.evaluate(p) != count:
            raise ExtraPrimeMismatch(
                f"{label}: interpolated {poly} gives {poly.evaluate(p)} at q={p}, counted {count}"
            )


def grassmannian_degree(d: Sequence[int], e: Sequence[int]) -> int:
    """Dimension of the product of Grassmannians Gr(e_i, d_i)."""
    return sum(a * (b - a) for a, b in zip(e, d))


class HallCounter:
    """
    Hall polynomials and automorphism polynomials from point counts.

    All pairs (M, N) of one tally (X, dim N) are interpolated together
    and stored in the cache, zeros included, so that a cached triple is
    authoritative.
    """

    def __init__(self, cache: Optional[HallCache] = None, threads: int = 1, extra_primes: int = 1):
        self.cache = cache if cache is not None else HallCache()
        self.threads = max(1, threads)
        self.extra_primes = max(1, extra_primes)
        self._automorphisms: Dict[Multisegment, QPolynomial] = {}
        self._requested: Set[Tuple[Multisegment, DimVector]] = set()
        self._lock = threading.Lock()

    def _map(self, func, items: Sequence) -> List:
        if self.threads == 1 or len(items) < 2:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(func, items))

    def requested_tallies(self) -> List[Tuple[Multisegment, DimVector]]:
        """Every (X, dim N) asked for through hall_polynomial, cached or not, in sorted order."""
        with self._lock:
            return sorted(self._requested)

    def degree_bound(self, X: Multisegment, e: Sequence[int]) -> int:
        """
        Degree bound for every Hall polynomial of the tally (X, e).

        Every count is at most the number of points of the product of
        Grassmannians Gr(e_i, d_i), so the degree is at most its dimension
        sum_i e_i (d_i - e_i). The tangent bound max dim Hom(N, M) over the
        pairs of the tally is never smaller: the semisimple pair alone has
        exactly that Hom dimension.
        """
        return grassmannian_degree(X.dim_vector, e)

    def tally_polynomials(self, X: Multisegment, e: Sequence[int]) -> Dict[Tuple[Multisegment, Multisegment], QPolynomial]:
        """Interpolate F^X_{M,N} for every (N, M) with dim N = e; keys are (M, N)."""
        e = tuple(e)
        degree = self.degree_bound(X, e)
        primes = [prime(i) for i in range(1, degree + 2 + self.extra_primes)]
        LOGGER.info(f"Counting subrepresentations of {X} of dimension {e} at primes {primes}")
        tallies = self._map(lambda p: subrep_tally(X, e, p), primes)
        for p, tally in zip(primes, tallies):
            LOGGER.debug(f"p={p}: {sum(tally.values())} subrepresentations of {X} of dimension {e}")

        polynomials: Dict[Tuple[Multisegment, Multisegment], QPolynomial] = {}
        pairs = sorted({pair for tally in tallies for pair in tally})
        for N, M in pairs:
            counts = [(p, tally.get((N, M), 0)) for p, tally in zip(primes, tallies)]
            poly = interpolate_counts(counts[:degree + 1])
            check_extra_primes(poly, counts[degree + 1:], f"F^{X}_{{{M},{N}}}")
            polynomials[(M, N)] = poly

        zero = QPolynomial([])
        records = [
            (M, N, X, polynomials.get((M, N), zero))
            for N in enumerate_multisegments(e)
            for M in enumerate_multisegments(_subtract(X.dim_vector, e))
        ]
        self.cache.put_many(records)
        LOGGER.info(f"Interpolated {len(polynomials)} nonzero Hall polynomials for {X}, dimension {e}")
        return polynomials

    def hall_polynomial(self, M: Multisegment, N: Multisegment, X: Multisegment) -> QPolynomial:
        """
        F^X_{M,N}(q): subrepresentations U ~ N of X with X/U ~ M.

        Raises:
            DimensionMismatch: If dim M + dim N != dim X
        """
        if not M.n == N.n == X.n:
            raise RankMismatch(f"Hall polynomial of ranks {M.n}, {N.n}, {X.n}")
        total = tuple(a + b for a, b in zip(M.dim_vector, N.dim_vector))
        if total != X.dim_vector:
            raise DimensionMismatch(f"dim {M} + dim {N} = {total} but dim {X} = {X.dim_vector}")
        with self._lock:
            self._requested.add((X, N.dim_vector))
        cached = self.cache.get(M, N, X)
        if cached is not None:
            return cached
        return self.tally_polynomials(X, N.dim_vector).get((M, N), QPolynomial([]))

    def count_automorphisms(self, M: Multisegment) -> QPolynomial:
        """a_M(q) = |Aut(M)| over F_q, interpolated from prime fields."""
        if M in self._automorphisms:
            return self._automorphisms[M]
        degree = hom_dim_additive(M, M)
        primes = [prime(i) for i in range(1, degree + 2 + self.extra_primes)]
        counts = list(zip(primes, self._map(lambda p: count_automorphisms_mod_p(M, p), primes)))
        poly = interpolate_counts(counts[:degree + 1])
        check_extra_primes(poly, counts[degree + 1:], f"a_{M}")
        self._automorphisms[M] = poly
        return poly


def hall_polynomial(M: Multisegment, N: Multisegment, X: Multisegment) -> QPolynomial:
    """F^X_{M,N}(q) with a throwaway in-memory cache."""
    return HallCounter().hall_polynomial(M, N, X)


def count_automorphisms(M: Multisegment) -> QPolynomial:
    return HallCounter().count_automorphisms(M)
