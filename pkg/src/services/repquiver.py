"""
Discrete invariants of representations of the equioriented quiver 1 -> 2 -> ... -> n.

Isomorphism classes are multisegments (multiplicities of the interval
modules U_{i,j}); orbits of the variety of complexes are complex types
(d, r) with Betti numbers h derived from d and r. Nothing here touches
explicit group actions: every object is a tuple of integers.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.services.exceptions import (
    DeformationOutOfRange,
    DimensionMismatch,
    IndexOutOfRange,
    InfeasibleInput,
    NegativeMultiplicity,
    NotAComponent,
    RankMismatch,
)
from src.services.finite_field import Matrix, rank_mod_p

LOGGER = logging.getLogger(__name__)

DimVector = Tuple[int, ...]
DeformationIndex = Tuple[int, ...]
Interval = Tuple[int, int]


def as_dim_vector(values: Sequence[int]) -> DimVector:
    """Validate and freeze a dimension vector."""
    d = tuple(int(x) for x in values)
    if not d:
        raise InfeasibleInput("A dimension vector needs at least one entry")
    if any(x < 0 for x in d):
        raise InfeasibleInput(f"Dimension vector {d} has a negative entry")
    return d


@lru_cache(maxsize=None)
def intervals(n: int) -> Tuple[Interval, ...]:
    """All intervals (i, j), 1 <= i <= j <= n, ordered by i then j."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(i, n + 1))


@lru_cache(maxsize=None)
def _interval_position(n: int) -> Dict[Interval, int]:
    return {interval: pos for pos, interval in enumerate(intervals(n))}


@dataclass(frozen=True, order=True)
class Multisegment:
    """Isomorphism class of a representation: multiplicities of U_{i,j}."""

    n: int
    m: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InfeasibleInput(f"Quiver rank must be >= 1, got {self.n}")
        if len(self.m) != len(intervals(self.n)):
            raise InfeasibleInput(f"Expected {len(intervals(self.n))} multiplicities for n={self.n}")
        if any(x < 0 for x in self.m):
            raise NegativeMultiplicity(f"Negative multiplicity in {self.m}")

    @classmethod
    def zero(cls, n: int) -> "Multisegment":
        return cls(n, (0,) * len(intervals(n)))

    @classmethod
    def from_dict(cls, n: int, multiplicities: Dict[Interval, int]) -> "Multisegment":
        positions = _interval_position(n)
        m = [0] * len(positions)
        for (i, j), count in multiplicities.items():
            if (i, j) not in positions:
                raise IndexOutOfRange(f"Interval [{i}..{j}] is not inside 1..{n}")
            m[positions[(i, j)]] += count
        return cls(n, tuple(m))

    @classmethod
    def interval(cls, n: int, i: int, j: int, multiplicity: int = 1) -> "Multisegment":
        return cls.from_dict(n, {(i, j): multiplicity})

    @classmethod
    def simple(cls, n: int, i: int, multiplicity: int = 1) -> "Multisegment":
        return cls.interval(n, i, i, multiplicity)

    def multiplicity(self, i: int, j: int) -> int:
        return self.m[_interval_position(self.n)[(i, j)]]

    def segments(self) -> List[Tuple[Interval, int]]:
        """Nonzero (interval, multiplicity) pairs in interval order."""
        return [(iv, c) for iv, c in zip(intervals(self.n), self.m) if c]

    @property
    def dim_vector(self) -> DimVector:
        d = [0] * self.n
        for (i, j), count in self.segments():
            for vertex in range(i, j + 1):
                d[vertex - 1] += count
        return tuple(d)

    @property
    def total_dim(self) -> int:
        return sum(self.dim_vector)

    def is_zero(self) -> bool:
        return not any(self.m)

    def __add__(self, other: "Multisegment") -> "Multisegment":
        """Direct sum."""
        if self.n != other.n:
            raise RankMismatch(f"Cannot add multisegments of rank {self.n} and {other.n}")
        return Multisegment(self.n, tuple(a + b for a, b in zip(self.m, other.m)))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return "+".join(
            f"[{i}..{j}]" if count == 1 else f"[{i}..{j}]^{count}"
            for (i, j), count in self.segments()
        )


@dataclass(frozen=True)
class ComplexType:
    """
    An orbit O(r, h) of the variety of complexes Com(d).

    The Betti numbers h are derived: h_i = d_i - r_{i-1} - r_i with
    r_0 = r_n = 0.
    """

    d: DimVector
    r: Tuple[int, ...]
    h: Tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        d = as_dim_vector(self.d)
        r = tuple(int(x) for x in self.r)
        if len(r) != len(d) - 1:
            raise RankMismatch(f"r must have {len(d) - 1} entries for d={d}, got {r}")
        if any(x < 0 for x in r):
            raise NotAComponent(f"Ranks {r} must be nonnegative")
        padded = (0,) + r + (0,)
        h = tuple(d[i] - padded[i] - padded[i + 1] for i in range(len(d)))
        if any(x < 0 for x in h):
            raise NotAComponent(f"r={r} is infeasible for d={d} (h={h})")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "h", h)

    @classmethod
    def from_r_h(cls, r: Sequence[int], h: Sequence[int]) -> "ComplexType":
        """Build the type from ranks and Betti numbers, deriving d."""
        h = tuple(h)
        r = tuple(r)
        if len(r) != len(h) - 1:
            raise RankMismatch(f"r has {len(r)} entries but h has {len(h)}")
        padded = (0,) + r + (0,)
        d = tuple(h[i] + padded[i] + padded[i + 1] for i in range(len(h)))
        return cls(d, r)

    @property
    def n(self) -> int:
        return len(self.d)

    def r_at(self, i: int) -> int:
        """r_i with the boundary convention r_0 = r_n = 0."""
        if 1 <= i <= self.n - 1:
            return self.r[i - 1]
        return 0

    def h_at(self, i: int) -> int:
        if 1 <= i <= self.n:
            return self.h[i - 1]
        return 0

    def __str__(self) -> str:
        return f"d={self.d} r={self.r} h={self.h}"


@dataclass
class MatrixRep:
    """Explicit representation over F_p: maps[i-1] is f_i, of shape d_{i+1} x d_i."""

    p: int
    dims: DimVector
    maps: List[Matrix]

    def __post_init__(self):
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise DimensionMismatch(f"Expected {len(self.dims) - 1} maps for dims {self.dims}")
        for i, matrix in enumerate(self.maps):
            rows, cols = self.dims[i + 1], self.dims[i]
            if len(matrix) != rows or any(len(row) != cols for row in matrix):
                raise DimensionMismatch(f"f_{i + 1} must have shape {rows}x{cols}")

    def composite(self, i: int, j: int) -> Matrix:
        """Matrix of f_{j-1} o ... o f_i : V_i -> V_j (identity when i == j)."""
        current = [[int(a == b) for b in range(self.dims[i - 1])] for a in range(self.dims[i - 1])]
        for arrow in range(i, j):
            f = self.maps[arrow - 1]
            inner = self.dims[arrow - 1]
            current = [
                [sum(f[a][c] * current[c][b] for c in range(inner)) % self.p for b in range(self.dims[i - 1])]
                for a in range(self.dims[arrow])
            ]
        return current


# Dimension vectors and forms

def euler_form(d: Sequence[int], e: Sequence[int]) -> int:
    """
    Euler form <d, e> = sum d_i e_i - sum d_i e_{i+1}.

    Raises:
        RankMismatch: If the vectors have different lengths
    """
    if len(d) != len(e):
        raise RankMismatch(f"Euler form of vectors of length {len(d)} and {len(e)}")
    return sum(a * b for a, b in zip(d, e)) - sum(d[i] * e[i + 1] for i in range(len(d) - 1))


def root(n: int, i: int, j: int) -> DimVector:
    """The positive root alpha_{i,j} = e_i + ... + e_j."""
    if not 1 <= i <= j <= n:
        raise IndexOutOfRange(f"Root ({i}, {j}) is outside 1..{n}")
    return tuple(int(i <= vertex <= j) for vertex in range(1, n + 1))


# Normal forms and Hom spaces

def basis_labels(M: Multisegment) -> List[List[Tuple[Interval, int]]]:
    """For every vertex, the (interval, copy) labels of its basis vectors."""
    labels: List[List[Tuple[Interval, int]]] = [[] for _ in range(M.n)]
    for (i, j), count in M.segments():
        for copy in range(count):
            for vertex in range(i, j + 1):
                labels[vertex - 1].append(((i, j), copy))
    return labels


def normal_form_maps(M: Multisegment) -> List[Matrix]:
    """0/1 matrices of the normal-form representative (valid over any field)."""
    labels = basis_labels(M)
    maps: List[Matrix] = []
    for i in range(M.n - 1):
        source, target = labels[i], labels[i + 1]
        index = {label: pos for pos, label in enumerate(target)}
        matrix = [[0] * len(source) for _ in range(len(target))]
        for col, label in enumerate(source):
            if label in index:
                matrix[index[label]][col] = 1
        maps.append(matrix)
    return maps


def normal_form_matrices(M: Multisegment, p: int) -> MatrixRep:
    """The normal-form representative of M as a representation over F_p."""
    return MatrixRep(p=p, dims=M.dim_vector, maps=normal_form_maps(M))


def intertwiner_equations(M: Multisegment, N: Multisegment) -> Tuple[List[List[int]], List[int], int]:
    """
    Linear equations phi_{i+1} f_i^M = f_i^N phi_i on the vertex maps phi_i : M_i -> N_i.

    Unknown phi_i[row][col] sits at column offsets[i] + row * dim M_i + col.

    Returns:
        Tuple of (nonzero equation rows, per-vertex offsets, number of unknowns)
    """
    if M.n != N.n:
        raise RankMismatch(f"hom_dim of ranks {M.n} and {N.n}")
    dm, dn = M.dim_vector, N.dim_vector
    fm, fn = normal_form_maps(M), normal_form_maps(N)

    offsets = []
    total = 0
    for i in range(M.n):
        offsets.append(total)
        total += dn[i] * dm[i]

    def var(vertex: int, row: int, col: int) -> int:
        return offsets[vertex] + row * dm[vertex] + col

    rows: List[List[int]] = []
    for i in range(M.n - 1):
        for a in range(dn[i + 1]):
            for b in range(dm[i]):
                equation = [0] * total
                for c in range(dm[i + 1]):
                    if fm[i][c][b]:
                        equation[var(i + 1, a, c)] += fm[i][c][b]
                for c in range(dn[i]):
                    if fn[i][a][c]:
                        equation[var(i, c, b)] -= fn[i][a][c]
                if any(equation):
                    rows.append(equation)
    return rows, offsets, total


def hom_dim(M: Multisegment, N: Multisegment) -> int:
    """
    dim Hom(M, N), as the nullity of the intertwiner equations.

    The rank is computed exactly over Q on normal-form representatives.
    """
    rows, _, total = intertwiner_equations(M, N)
    if not rows:
        return total
    sparse = {
        index: {col: QQ(value) for col, value in enumerate(row) if value}
        for index, row in enumerate(rows)
    }
    system = DomainMatrix(sparse, (len(rows), total), QQ)
    return total - system.rank()


@lru_cache(maxsize=None)
def interval_hom_dim(n: int, source: Interval, target: Interval) -> int:
    """dim Hom(U_source, U_target), solved once per pair of intervals."""
    return hom_dim(Multisegment.interval(n, *source), Multisegment.interval(n, *target))


def hom_dim_additive(M: Multisegment, N: Multisegment) -> int:
    """dim Hom(M, N) by additivity over interval summands."""
    if M.n != N.n:
        raise RankMismatch(f"hom_dim of ranks {M.n} and {N.n}")
    return sum(
        a * b * interval_hom_dim(M.n, source, target)
        for source, a in M.segments()
        for target, b in N.segments()
    )


def hom_vector(M: Multisegment) -> Tuple[int, ...]:
    """([U, M])_U over all interval modules U."""
    return tuple(
        sum(count * interval_hom_dim(M.n, source, target) for target, count in M.segments())
        for source in intervals(M.n)
    )


def hom_order_leq(N: Multisegment, M: Multisegment) -> bool:
    """N lies below M (or equals it): [U, N] >= [U, M] for every interval U."""
    return all(a >= b for a, b in zip(hom_vector(N), hom_vector(M)))


# Complex types

def dotplus(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    """(a_1+b_1, a_2+b_1+b_2, ..., a_n+b_{n-1})."""
    if len(b) != len(a) - 1:
        raise RankMismatch(f"dotplus needs len(b) = len(a) - 1, got {len(a)} and {len(b)}")
    padded = (0,) + tuple(b) + (0,)
    return tuple(a[i] + padded[i] + padded[i + 1] for i in range(len(a)))


def complex_to_multisegment(c: ComplexType) -> Multisegment:
    """M(r, h) = sum of S_i^h_i and U_{i,i+1}^r_i."""
    counts: Dict[Interval, int] = {}
    for i, value in enumerate(c.h, start=1):
        if value:
            counts[(i, i)] = value
    for i, value in enumerate(c.r, start=1):
        if value:
            counts[(i, i + 1)] = value
    return Multisegment.from_dict(c.n, counts)


def check_deformation(c: ComplexType, k: Sequence[int]) -> DeformationIndex:
    k = tuple(int(x) for x in k)
    if len(k) != len(c.r):
        raise RankMismatch(f"k must have {len(c.r)} entries, got {k}")
    if any(x < 0 or x > bound for x, bound in zip(k, c.r)):
        raise DeformationOutOfRange(f"k={k} is not between 0 and r={c.r}")
    return k


def deform(c: ComplexType, k: Sequence[int]) -> ComplexType:
    """(r - k, h dotplus k) over the same d."""
    k = check_deformation(c, k)
    return ComplexType(c.d, tuple(a - b for a, b in zip(c.r, k)))


def deformation_indices(c: ComplexType) -> List[DeformationIndex]:
    """All k with 0 <= k <= r, lexicographically ascending."""
    return [tuple(k) for k in product(*(range(bound + 1) for bound in c.r))]


def omega(c: ComplexType) -> List[int]:
    """Support of h, ascending."""
    return [i for i, value in enumerate(c.h, start=1) if value]


def is_sparse(vertices: Sequence[int]) -> bool:
    """No two consecutive vertices."""
    chosen = set(vertices)
    return not any(i + 1 in chosen for i in chosen)


def _rank_candidates(d: DimVector) -> Iterator[Tuple[int, ...]]:
    bounds = [min(d[i], d[i + 1]) for i in range(len(d) - 1)]
    for r in product(*(range(bound, -1, -1) for bound in bounds)):
        padded = (0,) + r + (0,)
        if all(d[i] - padded[i] - padded[i + 1] >= 0 for i in range(len(d))):
            yield r


def enumerate_orbits(d: Sequence[int]) -> List[ComplexType]:
    """Every orbit of Com(d), r lexicographically descending."""
    d = as_dim_vector(d)
    return [ComplexType(d, r) for r in _rank_candidates(d)]


def enumerate_components(d: Sequence[int]) -> List[ComplexType]:
    """Orbits whose closures are the irreducible components (sparse support of h)."""
    return [c for c in enumerate_orbits(d) if is_sparse(omega(c))]


def closure_leq(a: ComplexType, b: ComplexType) -> bool:
    """O(a) lies in the closure of O(b): r(a) <= r(b) componentwise."""
    if a.d != b.d:
        raise DimensionMismatch(f"Orbits of different dimension vectors {a.d} and {b.d}")
    return all(x <= y for x, y in zip(a.r, b.r))


def component_for(d: Sequence[int], r: Sequence[int]) -> ComplexType:
    """
    The component of Com(d) with open orbit of rank r.

    Raises:
        NotAComponent: If (d, r) is infeasible or its support is not sparse
    """
    c = ComplexType(as_dim_vector(d), tuple(r))
    if not is_sparse(omega(c)):
        raise NotAComponent(f"r={c.r} gives h={c.h}, whose support is not sparse")
    return c


# Closed dimension formulas

def mm_closed_form(c: ComplexType) -> int:
    """[M, M] for M = M(r, h): sum of h_i^2 + h_i r_i + r_i^2 + h_i r_{i-1} + r_{i-1} r_i."""
    total = 0
    for i in range(1, c.n + 1):
        h, r, r_prev = c.h_at(i), c.r_at(i), c.r_at(i - 1)
        total += h * h + h * r + r * r + h * r_prev + r_prev * r
    return total


def codim_shift(c: ComplexType, k: Sequence[int]) -> int:
    """[N, N] - [M, M] for N = M(r - k, h dotplus k)."""
    k = check_deformation(c, k)
    padded = (0,) + k + (0,)
    total = 0
    for i in range(1, c.n + 1):
        h, k_i, k_prev = c.h_at(i), padded[i], padded[i - 1]
        total += h * k_i + h * k_prev + k_i * k_i + k_prev * k_i
    return total


def orbit_dimension(c: ComplexType) -> int:
    """dim O(r, h) = sum d_i^2 - [M, M]."""
    return sum(x * x for x in c.d) - mm_closed_form(c)


def component_dimension(c: ComplexType) -> int:
    """Dimension of the component whose open orbit is c."""
    if not is_sparse(omega(c)):
        raise NotAComponent(f"{c} is not the open orbit of a component")
    return orbit_dimension(c)


# Isomorphism classes from matrices

def multisegment_from_ranks(n: int, ranks: Dict[Interval, int]) -> Multisegment:
    """
    Recover multiplicities from rank invariants rk_{i,j}.

    m_{i,j} = rk_{i,j} - rk_{i-1,j} - rk_{i,j+1} + rk_{i-1,j+1}, with
    out-of-range ranks zero.

    Raises:
        NegativeMultiplicity: If the ranks are inconsistent
    """
    def rk(i: int, j: int) -> int:
        if i < 1 or j > n:
            return 0
        return ranks[(i, j)]

    counts = []
    for i, j in intervals(n):
        value = rk(i, j) - rk(i - 1, j) - rk(i, j + 1) + rk(i - 1, j + 1)
        if value < 0:
            raise NegativeMultiplicity(f"Rank invariants {ranks} give m[{i},{j}]={value}")
        counts.append(value)
    return Multisegment(n, tuple(counts))


def multisegment_from_matrices(x: MatrixRep) -> Multisegment:
    """Isomorphism class of an explicit representation via ranks of composites."""
    n = len(x.dims)
    ranks: Dict[Interval, int] = {}
    for i, j in intervals(n):
        ranks[(i, j)] = x.dims[i - 1] if i == j else rank_mod_p(x.composite(i, j), x.p)
    return multisegment_from_ranks(n, ranks)


def enumerate_multisegments(d: Sequence[int]) -> List[Multisegment]:
    """All multisegments of dimension vector d, in a fixed order."""
    d = tuple(d)
    n = len(d)
    ivals = intervals(n)
    remaining = list(d)
    chosen: List[int] = []
    results: List[Multisegment] = []

    def recurse(index: int) -> None:
        if index == len(ivals):
            if not any(remaining):
                results.append(Multisegment(n, tuple(chosen)))
            return
        i, j = ivals[index]
        if i == j and i > 1 and remaining[i - 2]:
            return
        cap = min(remaining[i - 1:j])
        for count in range(cap + 1):
            for vertex in range(i - 1, j):
                remaining[vertex] -= count
            chosen.append(count)
            recurse(index + 1)
            chosen.pop()
            for vertex in range(i - 1, j):
                remaining[vertex] += count

    recurse(0)
    return results
