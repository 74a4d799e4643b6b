"""
Tests for linear algebra over prime fields.
"""

from src.services.finite_field import (
    apply_mod_p,
    enumerate_subspaces,
    from_domain_matrix,
    gaussian_count,
    is_invertible_mod_p,
    nullspace_mod_p,
    preimage_mod_p,
    prime_field,
    rank_mod_p,
    rref_mod_p,
    to_domain_matrix,
)


def test_rank_depends_on_the_prime():
    """Test that [[1, 1], [1, -1]] is singular exactly in characteristic 2."""
    matrix = [[1, 1], [1, -1]]
    assert rank_mod_p(matrix, 2) == 1
    assert rank_mod_p(matrix, 3) == 2
    assert is_invertible_mod_p(matrix, 5)
    assert not is_invertible_mod_p(matrix, 2)


def test_rref():
    """Test the reduced row-echelon form and pivots."""
    echelon, pivots = rref_mod_p([[2, 4, 1], [1, 2, 0]], 5)
    assert pivots == [0, 2]
    assert echelon == [[1, 2, 0], [0, 0, 1]]
    assert rref_mod_p([], 3) == ([], [])


def test_nullspace():
    """Test that nullspace vectors are annihilated and have the right count."""
    rows = [[1, 2, 3], [2, 4, 6]]
    basis = nullspace_mod_p(rows, 3, 7)
    assert len(basis) == 2
    for vector in basis:
        assert apply_mod_p(rows, vector, 7) == [0, 0]


def test_preimage():
    """Test the preimage of a line under a projection."""
    projection = [[1, 0, 0], [0, 1, 0]]
    preimage = preimage_mod_p(projection, [[1, 0]], 3, 2, 3)
    assert rank_mod_p(preimage, 3) == 2
    for vector in preimage:
        assert apply_mod_p(projection, vector, 3)[1] == 0
    # the whole target pulls back to everything
    assert len(preimage_mod_p(projection, [[1, 0], [0, 1]], 3, 2, 3)) == 3


def test_gaussian_count():
    """Test the number of subspaces of F_p^s."""
    assert gaussian_count(2, 1, 2) == 3
    assert gaussian_count(4, 2, 2) == 35
    assert gaussian_count(3, 0, 5) == 1
    assert gaussian_count(2, 3, 3) == 0


def test_enumerate_subspaces_matches_count():
    """Test that enumeration yields each subspace exactly once."""
    basis = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    for k in range(5):
        subspaces = list(enumerate_subspaces(basis, k, 2))
        assert len(subspaces) == gaussian_count(4, k, 2)
        keys = {tuple(map(tuple, rref_mod_p(s, 2)[0])) for s in subspaces}
        assert len(keys) == len(subspaces)


def test_elimination_runs_over_the_prime_field():
    """Test that matrices are wrapped over GF(p) and come back as residues."""
    matrix = to_domain_matrix([[-1, 8]], 2, 7)
    assert matrix.domain == prime_field(7)
    assert from_domain_matrix(matrix, 7) == [[6, 1]]

    echelon, pivots = rref_mod_p([[3, -1, 4], [6, 5, 1]], 7)
    assert all(0 <= x < 7 for row in echelon for x in row)
    assert echelon[0][pivots[0]] == 1
    assert rref_mod_p([[1, 3]], 5) == ([[1, 3]], [0])


def test_nullspace_edge_cases():
    """Test full-rank, column-free and row-free kernels."""
    assert nullspace_mod_p([[1, 0], [0, 1]], 2, 3) == []
    assert nullspace_mod_p([[1]], 0, 3) == []
    assert nullspace_mod_p([], 2, 3) == [[1, 0], [0, 1]]
    assert rank_mod_p([], 5) == 0
    assert rank_mod_p([[0, 0], [0, 0]], 5) == 0
