"""SU(3) generators: fundamental matrices, structure constants and the
Schwinger-boson operators ``Q^a = a^dag lam^a a - b^dag conj(lam^a) b``.

Generators are the Gell-Mann matrices divided by two, so
``[lam^a, lam^b] = i f^{abc} lam^c`` with ``f^{123} = 1``.  Indices ``a``
are 1-based throughout the public API.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .fock import apply_word, enumerate_sector, hopping_matrix, operator_matrix


def gell_mann() -> np.ndarray:
    """Array of shape ``(8, 3, 3)``; ``[a - 1]`` is ``lam^a``."""
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = np.diag([1, 1, -2]) / math.sqrt(3)
    lam = lam / 2
    lam.setflags(write=False)
    return lam


LAMBDA = gell_mann()


def structure_constants(lam: np.ndarray = LAMBDA, tol: float = 1e-13) -> np.ndarray:
    """``f[a-1, b-1, c-1] = -2i Tr([lam^a, lam^b] lam^c)``.

    Raises if the traces are not real, which means ``lam`` is not a
    Hermitian, trace-orthonormal generator set.
    """
    comm = np.einsum("aij,bjk->abik", lam, lam) - np.einsum("bij,ajk->abik", lam, lam)
    f = -2j * np.einsum("abij,cji->abc", comm, lam)
    if np.abs(f.imag).max() > tol:
        raise ValueError("structure constants are not real; generator set is broken")
    return f.real


F = structure_constants()


def _check_index(a: int):
    if not 1 <= a <= 8:
        raise ValueError(f"generator index must be 1..8, got {a}")


@lru_cache(maxsize=None)
def q_operator(a: int, N: int, M: int) -> np.ndarray:
    """Dense matrix of ``Q^a`` on sector ``(N, M)`` in canonical order."""
    _check_index(a)
    lam = LAMBDA[a - 1]
    dim = len(enumerate_sector(N, M))
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(3):
        for j in range(3):
            if lam[i, j] != 0:
                out += lam[i, j] * hopping_matrix("a", i + 1, j + 1, N, M)
                out -= np.conj(lam[i, j]) * hopping_matrix("b", i + 1, j + 1, N, M)
    out.setflags(write=False)
    return out


def q_operators(N: int, M: int) -> np.ndarray:
    """All eight ``Q^a`` stacked as ``(8, d, d)``."""
    return np.stack([q_operator(a, N, M) for a in range(1, 9)])


def casimir(N: int, M: int) -> np.ndarray:
    Q = q_operators(N, M)
    return np.einsum("aij,ajk->ik", Q, Q)


@lru_cache(maxsize=None)
def contraction_matrix(N: int, M: int) -> np.ndarray:
    """``a . b`` from sector ``(N, M)`` to ``(N-1, M-1)``."""
    if N < 1 or M < 1:
        return np.zeros((0, len(enumerate_sector(N, M))), dtype=complex)
    words = [[("a", "annihilate", i), ("b", "annihilate", i)] for i in (1, 2, 3)]
    return operator_matrix(lambda k: _sum_words(words, k), (N, M), (N - 1, M - 1))


@lru_cache(maxsize=None)
def pair_creation_matrix(N: int, M: int) -> np.ndarray:
    """``a^dag . b^dag`` from sector ``(N, M)`` to ``(N+1, M+1)``."""
    words = [[("a", "create", i), ("b", "create", i)] for i in (1, 2, 3)]
    return operator_matrix(lambda k: _sum_words(words, k), (N, M), (N + 1, M + 1))


def invariant_operators(N: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of ``a . b`` and ``a^dag . b^dag`` leaving sector ``(N, M)``."""
    return contraction_matrix(N, M), pair_creation_matrix(N, M)


def _sum_words(words, ket):
    total = None
    for word in words:
        image = apply_word(word, ket)
        if not image.amps:
            continue
        total = image if total is None else total + image
    if total is None:
        return type(ket)(ket.sector)
    return total


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def closure_residual(Q: np.ndarray, f: np.ndarray = F) -> float:
    """``max |[Q^a, Q^b] - i f^{abc} Q^c|`` over all pairs."""
    worst = 0.0
    for a in range(8):
        for b in range(a + 1, 8):
            rhs = 1j * np.tensordot(f[a, b], Q, axes=(0, 0))
            worst = max(worst, np.abs(commutator(Q[a], Q[b]) - rhs).max())
    return float(worst)
