# tests/test_linalg.py
import numpy as np
import pytest

from core.linalg import (
    MAX_MODULUS, block_diagonal, inverse_mod_p, jordan_block, jordan_blocks_of_unipotent, kron_mod,
    nilpotent_rank_sequence, row_echelon_rank, sym_power_matrix, wedge_power_matrix,
)


@pytest.mark.parametrize("matrix, q, rank", [
    ([[1, 2], [2, 4]], 7, 1),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 5, 3),
    ([[1, 1], [1, -1]], 2, 1),
    ([[1, 1], [1, -1]], 3, 2),
    ([[0, 0], [0, 0]], 3, 0),
    ([[3, 6, 9]], 3, 0),
])
def test_row_echelon_rank(matrix, q, rank):
    assert row_echelon_rank(matrix, q) == rank


def test_modulus_range():
    with pytest.raises(ValueError):
        row_echelon_rank([[1]], MAX_MODULUS)
    with pytest.raises(ValueError):
        row_echelon_rank([[1]], 1)


def test_inverse():
    M = np.array([[2, 1], [1, 1]])
    inv = inverse_mod_p(M, 5)
    assert np.array_equal((M @ inv) % 5, np.eye(2, dtype=np.int64))


def test_inverse_of_singular_matrix():
    with pytest.raises(ZeroDivisionError):
        inverse_mod_p([[1, 2], [2, 4]], 7)


def test_jordan_blocks_of_block_diagonal():
    U = block_diagonal([jordan_block(3), jordan_block(1), jordan_block(2)])
    assert jordan_blocks_of_unipotent(U, 5) == [3, 2, 1]
    assert nilpotent_rank_sequence(U, 5) == [6, 3, 1, 0]


def test_non_unipotent_matrix():
    with pytest.raises(ValueError):
        jordan_blocks_of_unipotent(np.array([[2, 0], [0, 1]]), 5)


@pytest.mark.parametrize("q, blocks", [(2, [2, 2]), (3, [3, 1]), (5, [3, 1])])
def test_tensor_square_of_a_two_block(q, blocks):
    assert jordan_blocks_of_unipotent(kron_mod(jordan_block(2), jordan_block(2), q), q) == blocks


def test_wedge_square_of_three_block():
    matrix = wedge_power_matrix(jordan_block(3), 2, 5)
    assert matrix.shape == (3, 3)
    assert jordan_blocks_of_unipotent(matrix, 5) == [3]


def test_wedge_square_of_identity_is_identity():
    assert np.array_equal(wedge_power_matrix(np.eye(4, dtype=np.int64), 2, 7), np.eye(6, dtype=np.int64))


def test_symmetric_powers_of_two_block():
    assert jordan_blocks_of_unipotent(sym_power_matrix(jordan_block(2), 2, 3), 3) == [3]
    # Sym^2 of J_2 in characteristic 2 splits
    assert jordan_blocks_of_unipotent(sym_power_matrix(jordan_block(2), 2, 2), 2) == [2, 1]
    assert sym_power_matrix(jordan_block(3), 3, 7).shape == (10, 10)
