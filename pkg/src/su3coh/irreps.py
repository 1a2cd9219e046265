"""Irreducible representations ``(N, M)`` inside the Fock sector ``(N, M)``.

Every occupation ``(n; m)`` of the sector labels a traceless state: the
monomial ``O = prod a_i^dag^{n_i} b_i^dag^{m_i}`` acting on the vacuum, minus
its traces, with trace terms

    L_q sum_{alpha, |alpha| = q} prod_i C(n_i, alpha_i) C(m_i, alpha_i) alpha_i!
        O^{n - alpha}_{m - alpha}

and ``L_q = (-1)^q (a^dag . b^dag)^q / (q! (N+M+1)(N+M)...(N+M+2-q))``.
``L_q`` is normalized for a sum over ordered tuples of distinct index
positions, which visits each set of ``q`` contracted pairs ``q!`` times; the
multinomial weights above count each set once, so the trace terms carry
``q! L_q``.  The weights are carried as exact fractions; only the final Fock
amplitudes (which pick up ``sqrt(prod n_i! m_i!)``) are converted to floats.

The traceless states are overcomplete.  Their span has dimension
``(N+1)(M+1)(N+M+2)/2`` and is the kernel of ``a . b``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .algebra import contraction_matrix, q_operator
from .fock import KetVector, Occupation, enumerate_sector

MAX_QUANTA = 6
RANK_TOL = 1e-9


class IrrepLabel(NamedTuple):
    N: int
    M: int


def check_label(N: int, M: int) -> IrrepLabel:
    if N < 0 or M < 0:
        raise ValueError(f"irrep label ({N}, {M}) must be non-negative")
    if N > MAX_QUANTA or M > MAX_QUANTA:
        raise ValueError(f"irrep label ({N}, {M}) exceeds the cap N, M <= {MAX_QUANTA}")
    return IrrepLabel(N, M)


def dimension(N: int, M: int) -> int:
    return (N + 1) * (M + 1) * (N + M + 2) // 2


def l_coefficient(q: int, N: int, M: int) -> Fraction:
    """Scalar part of ``L_q`` as an exact fraction."""
    if not 1 <= q <= min(N, M):
        raise ValueError(f"q={q} outside 1..min(N, M)={min(N, M)}")
    denom = math.factorial(q) * math.prod(N + M + 1 - k for k in range(q))
    return Fraction((-1) ** q, denom)


def _compositions(total: int):
    for i in range(total, -1, -1):
        for j in range(total - i, -1, -1):
            yield (i, j, total - i - j)


def traceless_polynomial(leading: Occupation) -> dict[Occupation, Fraction]:
    """Exact coefficients of the traceless state in the monomial basis.

    Keys are occupations ``k`` standing for the *unnormalized* monomial
    ``prod a_i^dag^{k_i} b_i^dag^{k'_i} |0>``.
    """
    N, M = leading.sector
    poly: dict[Occupation, Fraction] = {leading: Fraction(1)}
    for q in range(1, min(N, M) + 1):
        lq = math.factorial(q) * l_coefficient(q, N, M)
        for alpha in _compositions(q):
            rest = leading.shifted(tuple(-x for x in alpha), tuple(-x for x in alpha))
            if rest is None:
                continue
            weight = math.prod(math.comb(n, x) * math.comb(m, x) * math.factorial(x)
                               for n, m, x in zip(leading.n, leading.m, alpha))
            # (a^dag . b^dag)^q = sum_beta q!/beta! prod (a_i^dag b_i^dag)^beta_i
            for beta in _compositions(q):
                mult = math.factorial(q) // math.prod(math.factorial(x) for x in beta)
                key = rest.shifted(beta, beta)
                poly[key] = poly.get(key, Fraction(0)) + lq * weight * mult
    return {k: v for k, v in poly.items() if v != 0}


def polynomial_to_ket(poly: dict[Occupation, Fraction], sector) -> KetVector:
    return KetVector(sector, {k: float(v) * math.sqrt(k.factorial_product())
                              for k, v in poly.items()})


@dataclass(frozen=True)
class TracelessState:
    label: IrrepLabel
    occupations: Occupation
    vector: KetVector


def traceless_state(leading: Occupation, label: tuple[int, int] | None = None) -> TracelessState:
    """Trace-subtracted state whose leading term is ``O^{n}_{m}|0>``."""
    sector = leading.sector
    if label is not None and tuple(label) != sector:
        raise ValueError(f"leading occupation {leading.label()} is not in sector {tuple(label)}")
    lab = check_label(*sector)
    return TracelessState(lab, leading, polynomial_to_ket(traceless_polynomial(leading), sector))


def verify_tracelessness(state: TracelessState) -> float:
    """Max modulus of ``(a . b)|psi>``; zero for an exactly traceless state."""
    N, M = state.label
    if N == 0 or M == 0:
        return 0.0
    return float(np.abs(contraction_matrix(N, M) @ state.vector.to_dense()).max())


def trace_relation_residual(lower: Occupation) -> float:
    """Contract one upper with one lower index of the ``(N+1, M+1)`` tensor.

    ``lower`` lies in sector ``(N, M)``; returns the max modulus of
    ``sum_g |psi>^{n + e_g}_{m + e_g}`` built in ``(N+1, M+1)``.
    """
    total = None
    for g in range(3):
        e = tuple(int(k == g) for k in range(3))
        vec = traceless_state(lower.shifted(e, e)).vector
        total = vec if total is None else total + vec
    return total.max_abs()


@lru_cache(maxsize=None)
def traceless_family(N: int, M: int) -> np.ndarray:
    """Columns are the traceless states of every occupation, canonical order."""
    check_label(N, M)
    basis = enumerate_sector(N, M)
    cols = [traceless_state(occ).vector.to_dense() for occ in basis.states]
    out = np.column_stack(cols)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class IrrepBasis:
    label: IrrepLabel
    vectors: np.ndarray  # (sector_dim, D), orthonormal columns

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def kets(self) -> list[KetVector]:
        return [KetVector.from_dense(self.label, v) for v in self.vectors.T]

    def projector(self) -> np.ndarray:
        return self.vectors @ self.vectors.conj().T


def span_rank(vectors: np.ndarray, tol: float = RANK_TOL) -> tuple[int, np.ndarray]:
    """Rank by SVD (singular values above ``tol`` relative to the largest) and left singular vectors."""
    U, s, _ = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return 0, U[:, :0]
    rank = int(np.sum(s > tol * s[0]))
    return rank, U[:, :rank]


def canonical_basis(span: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of ``span`` independent of how ``span`` was rotated.

    Gram-Schmidt on the projector columns in canonical occupation order, then
    the first nonzero entry of each vector is made real and positive.
    """
    P = span @ span.conj().T
    out = []
    for k in range(P.shape[0]):
        v = P[:, k].copy()
        for u in out:
            v -= u * np.vdot(u, v)
        for u in out:  # second pass keeps orthogonality at roundoff level
            v -= u * np.vdot(u, v)
        nrm = np.linalg.norm(v)
        if nrm > tol:
            out.append(v / nrm)
        if len(out) == span.shape[1]:
            break
    B = np.column_stack(out) if out else np.zeros((P.shape[0], 0), dtype=complex)
    for j in range(B.shape[1]):
        first = np.flatnonzero(np.abs(B[:, j]) > tol)[0]
        B[:, j] *= abs(B[first, j]) / B[first, j]
    return B


@lru_cache(maxsize=None)
def irrep_basis(N: int, M: int) -> IrrepBasis:
    label = check_label(N, M)
    rank, span = span_rank(np.asarray(traceless_family(N, M)))
    if rank != dimension(N, M):
        raise ArithmeticError(f"traceless span of {label} has rank {rank}, expected {dimension(N, M)}")
    B = canonical_basis(span)
    B.setflags(write=False)
    return IrrepBasis(label, B)


def irrep_projector(N: int, M: int) -> np.ndarray:
    return irrep_basis(N, M).projector()


@lru_cache(maxsize=None)
def generator_in_irrep(a: int, N: int, M: int) -> np.ndarray:
    """``B^dag Q^a B`` on the orthonormal irrep basis."""
    B = irrep_basis(N, M).vectors
    out = B.conj().T @ q_operator(a, N, M) @ B
    out.setflags(write=False)
    return out


def generators_in_irrep(N: int, M: int) -> np.ndarray:
    return np.stack([generator_in_irrep(a, N, M) for a in range(1, 9)])
