"""
Linear algebra over the prime field F_p.

Matrices are lists of rows, vectors are lists of residues in 0..p-1.
Elimination is done by sympy's DomainMatrix over GF(p); enumeration of
subspaces goes through reduced row-echelon coefficient matrices, one per
subspace.
"""

from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, List, Sequence, Tuple

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

Matrix = List[List[int]]
Vector = List[int]


@lru_cache(maxsize=None)
def prime_field(p: int):
    return GF(p)


def to_domain_matrix(rows: Sequence[Sequence[int]], ncols: int, p: int) -> DomainMatrix:
    """Wrap a list of rows as a DomainMatrix over GF(p)."""
    field = prime_field(p)
    elements = [[field(x % p) for x in row] for row in rows]
    return DomainMatrix(elements, (len(elements), ncols), field)


def from_domain_matrix(matrix: DomainMatrix, p: int) -> Matrix:
    """Rows of a DomainMatrix over GF(p), as residues in 0..p-1."""
    return [[int(x) % p for x in row] for row in matrix.to_Matrix().tolist()]


def rref_mod_p(rows: Sequence[Sequence[int]], p: int) -> Tuple[Matrix, List[int]]:
    """
    Reduced row-echelon form over F_p.

    Args:
        rows: Matrix as a list of rows
        p: Prime modulus

    Returns:
        Tuple of (nonzero rows of the echelon form, pivot columns)
    """
    if not rows:
        return [], []
    echelon, pivots = to_domain_matrix(rows, len(rows[0]), p).rref()
    return from_domain_matrix(echelon, p)[:len(pivots)], list(pivots)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows or not rows[0]:
        return 0
    return to_domain_matrix(rows, len(rows[0]), p).rank()


def nullspace_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> List[Vector]:
    """Basis of {x : A x = 0} over F_p for an (m x ncols) matrix A."""
    if ncols == 0:
        return []
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    kernel = to_domain_matrix(rows, ncols, p).nullspace()
    return [row for row in from_domain_matrix(kernel, p) if any(row)]


def apply_mod_p(matrix: Sequence[Sequence[int]], vector: Sequence[int], p: int) -> Vector:
    return [sum(a * x for a, x in zip(row, vector)) % p for row in matrix]


def preimage_mod_p(
    matrix: Sequence[Sequence[int]],
    target_basis: Sequence[Sequence[int]],
    source_dim: int,
    target_dim: int,
    p: int,
) -> List[Vector]:
    """
    Basis of f^-1(W) for f: F_p^source_dim -> F_p^target_dim.

    Args:
        matrix: Rows of f (target_dim rows, source_dim columns)
        target_basis: Spanning vectors of W
        source_dim: Dimension of the source
        target_dim: Dimension of the target
        p: Prime modulus

    Returns:
        Basis vectors of the preimage
    """
    annihilator = nullspace_mod_p([list(w) for w in target_basis], target_dim, p)
    if not annihilator:
        return [[int(i == j) for j in range(source_dim)] for i in range(source_dim)]
    composed = to_domain_matrix(annihilator, target_dim, p) * to_domain_matrix(matrix, source_dim, p)
    return nullspace_mod_p(from_domain_matrix(composed, p), source_dim, p)


def gaussian_count(s: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^s."""
    if k < 0 or k > s:
        return 0
    numerator = 1
    denominator = 1
    for i in range(k):
        numerator *= p ** (s - i) - 1
        denominator *= p ** (i + 1) - 1
    return numerator // denominator


def enumerate_subspaces(basis: Sequence[Sequence[int]], k: int, p: int) -> Iterator[List[Vector]]:
    """
    Yield every k-dimensional subspace of span(basis), once each.

    The basis vectors must be linearly independent. Each subspace is yielded
    as k spanning vectors, obtained from the unique reduced row-echelon
    coefficient matrix with respect to the basis.
    """
    s = len(basis)
    if k < 0 or k > s:
        return
    if k == 0:
        yield []
        return
    length = len(basis[0])
    for pivots in combinations(range(s), k):
        pivot_set = set(pivots)
        free_slots = [
            (row, col)
            for row, pivot in enumerate(pivots)
            for col in range(pivot + 1, s)
            if col not in pivot_set
        ]
        for values in product(range(p), repeat=len(free_slots)):
            coefficients = [[0] * s for _ in range(k)]
            for row, pivot in enumerate(pivots):
                coefficients[row][pivot] = 1
            for (row, col), value in zip(free_slots, values):
                coefficients[row][col] = value
            yield [
                [sum(c * b[i] for c, b in zip(coeff_row, basis)) % p for i in range(length)]
                for coeff_row in coefficients
            ]


def is_invertible_mod_p(square: Sequence[Sequence[int]], p: int) -> bool:
    return rank_mod_p(square, p) == len(square)
