# core/linalg.py
"""
Dense linear algebra over prime fields on numpy int64 arrays.

Moduli are kept below 2**20 so that products of two reduced entries and
their row sums fit in int64 for the matrix sizes handled here.
"""
import math
from itertools import combinations, combinations_with_replacement, permutations
from typing import List, Sequence

import numpy as np

MAX_MODULUS = 1 << 20


def _check_modulus(q: int) -> None:
    if q < 2 or q >= MAX_MODULUS:
        raise ValueError(f"Modulus {q} outside the supported range [2, {MAX_MODULUS})")


def row_echelon_rank(M, q: int) -> int:
    """
    Rank of a matrix over F_q by Gaussian elimination.

    Args:
        M: Integer matrix (m x n)
        q: Prime modulus

    Returns:
        Rank over F_q
    """
    _check_modulus(q)
    A = np.array(M, dtype=np.int64) % q
    if A.ndim != 2 or A.size == 0:
        return 0
    m, n = A.shape
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nonzero = np.nonzero(A[rank:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            A[[rank, pivot]] = A[[pivot, rank]]
        inverse = pow(int(A[rank, col]), q - 2, q)
        A[rank] = (A[rank] * inverse) % q
        below = np.nonzero(A[rank + 1:, col])[0] + rank + 1
        if below.size:
            A[below] = (A[below] - np.outer(A[below, col], A[rank])) % q
        rank += 1
    return rank


rank_mod_p = row_echelon_rank


def inverse_mod_p(M, q: int) -> np.ndarray:
    """
    Inverse over F_q by Gauss-Jordan elimination on [M | I].

    Raises:
        ZeroDivisionError: If M is singular over F_q
    """
    _check_modulus(q)
    A = np.array(M, dtype=np.int64) % q
    n = A.shape[0]
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        nonzero = np.nonzero(aug[col:, col])[0]
        if nonzero.size == 0:
            raise ZeroDivisionError("Matrix is singular over the prime field")
        pivot = col + int(nonzero[0])
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = (aug[col] * pow(int(aug[col, col]), q - 2, q)) % q
        others = np.nonzero(aug[:, col])[0]
        others = others[others != col]
        if others.size:
            aug[others] = (aug[others] - np.outer(aug[others, col], aug[col])) % q
    return aug[:, n:]


def matmul_mod(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    return (A @ B) % q


def jordan_block(n: int) -> np.ndarray:
    """Unipotent Jordan block of size n (ones on the diagonal and superdiagonal)."""
    return np.eye(n, dtype=np.int64) + np.eye(n, k=1, dtype=np.int64)


def block_diagonal(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    offset = 0
    for b in blocks:
        k = b.shape[0]
        out[offset:offset + k, offset:offset + k] = b
        offset += k
    return out


def kron_mod(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    return np.kron(A % q, B % q) % q


def nilpotent_rank_sequence(U: np.ndarray, q: int) -> List[int]:
    """
    Ranks of (U - I)^k for k = 0, 1, ... until the rank reaches 0.

    Raises:
        ValueError: If U - I is not nilpotent
    """
    n = U.shape[0]
    N = (np.array(U, dtype=np.int64) - np.eye(n, dtype=np.int64)) % q
    ranks = [n]
    power = np.eye(n, dtype=np.int64)
    while ranks[-1] > 0:
        power = matmul_mod(power, N, q)
        rank = row_echelon_rank(power, q)
        if rank == ranks[-1]:
            raise ValueError("Element is not unipotent")
        ranks.append(rank)
    return ranks


def jordan_blocks_of_unipotent(U: np.ndarray, q: int) -> List[int]:
    """
    Jordan block sizes of a unipotent matrix over F_q from the rank sequence of U - I.

    Returns:
        Weakly decreasing list of block sizes
    """
    ranks = nilpotent_rank_sequence(U, q) + [0]
    blocks: List[int] = []
    for k in range(1, len(ranks) - 1):
        at_least_k = ranks[k - 1] - ranks[k]
        at_least_next = ranks[k] - ranks[k + 1]
        blocks.extend([k] * (at_least_k - at_least_next))
    return sorted(blocks, reverse=True)


def wedge_power_matrix(g: np.ndarray, k: int, q: int) -> np.ndarray:
    """
    Matrix of g on the k-th exterior power in the basis of increasing index subsets.

    Entries are the k x k minors of g, assembled with np.ix_ per permutation.
    """
    n = g.shape[0]
    g = np.array(g, dtype=np.int64) % q
    subsets = np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(-1, k)
    out = np.zeros((len(subsets), len(subsets)), dtype=np.int64)
    for perm in permutations(range(k)):
        sign = _permutation_sign(perm)
        term = np.ones_like(out)
        for row, col in enumerate(perm):
            term = (term * g[np.ix_(subsets[:, row], subsets[:, col])]) % q
        out = (out + sign * term) % q
    return out


def sym_power_matrix(g: np.ndarray, k: int, q: int) -> np.ndarray:
    """
    Matrix of g on the k-th symmetric power in the monomial basis.

    The coefficient of a monomial is the permanent of the k x k submatrix
    divided by the factorials of the row multiplicities; it is computed
    modulo q * k! so that the division is exact.
    """
    n = g.shape[0]
    wide = q * math.factorial(k)
    g = np.array(g, dtype=np.int64) % q
    monomials = np.array(list(combinations_with_replacement(range(n), k)), dtype=np.int64).reshape(-1, k)
    out = np.zeros((len(monomials), len(monomials)), dtype=np.int64)
    for perm in permutations(range(k)):
        term = np.ones_like(out)
        for row, col in enumerate(perm):
            term = (term * g[np.ix_(monomials[:, row], monomials[:, col])]) % wide
        out = (out + term) % wide
    divisors = np.array(
        [math.prod(math.factorial(list(m).count(i)) for i in set(m)) for m in monomials.tolist()],
        dtype=np.int64,
    )
    # Permanents with repeated rows are divisible by the row multiplicity factorials
    out = (out // divisors[:, None]) % q
    return out


def _permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign
