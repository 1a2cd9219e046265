"""Fock space of two bosonic triplets ``a`` and ``b``.

A sector ``(N, M)`` holds every state with ``N`` a-quanta and ``M`` b-quanta.
States are addressed by :class:`Occupation` and the canonical order inside a
sector is *descending* lexicographic on ``(n, m)``, so ``a_1^dag|0>`` comes
first in the ``(1, 0)`` sector and the 3x3 block of an operator reads in the
usual ``i = 1, 2, 3`` order.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import numpy as np

PRUNE_TOL = 1e-14

Sector = tuple[int, int]


@dataclass(frozen=True, order=True)
class Occupation:
    """Six occupation numbers ``(N1, N2, N3; M1, M2, M3)``."""

    n: tuple[int, int, int]
    m: tuple[int, int, int]

    def __post_init__(self):
        if len(self.n) != 3 or len(self.m) != 3:
            raise ValueError("occupations are triples")
        if min(self.n) < 0 or min(self.m) < 0:
            raise ValueError(f"negative occupation in {self}")

    @classmethod
    def of(cls, n1, n2, n3, m1, m2, m3) -> "Occupation":
        return cls((n1, n2, n3), (m1, m2, m3))

    @property
    def sector(self) -> Sector:
        return sum(self.n), sum(self.m)

    def shifted(self, dn=(0, 0, 0), dm=(0, 0, 0)) -> "Occupation | None":
        """Occupation with ``dn``/``dm`` added, or None if any entry goes negative."""
        n = tuple(x + d for x, d in zip(self.n, dn))
        m = tuple(x + d for x, d in zip(self.m, dm))
        if min(n) < 0 or min(m) < 0:
            return None
        return Occupation(n, m)

    def factorial_product(self) -> int:
        """``N1! N2! N3! M1! M2! M3!`` as an exact integer."""
        return math.prod(math.factorial(k) for k in self.n + self.m)

    def label(self) -> str:
        return "{}{}{};{}{}{}".format(*self.n, *self.m)

    @classmethod
    def parse(cls, text: str) -> "Occupation":
        """Inverse of :meth:`label` for single-digit occupations (``'100;010'``)."""
        top, _, bottom = text.partition(";")
        if len(top) != 3 or len(bottom) != 3:
            raise ValueError(f"cannot parse occupation {text!r}")
        return cls(tuple(map(int, top)), tuple(map(int, bottom)))


def _compositions(total: int) -> list[tuple[int, int, int]]:
    return [(i, j, total - i - j) for i in range(total, -1, -1)
            for j in range(total - i, -1, -1)]


@dataclass(frozen=True)
class SectorBasis:
    sector: Sector
    states: tuple[Occupation, ...]
    index: Mapping[Occupation, int] = field(repr=False, compare=False)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


@lru_cache(maxsize=None)
def enumerate_sector(N: int, M: int) -> SectorBasis:
    """All occupations with ``sum(n) = N`` and ``sum(m) = M`` in canonical order."""
    if N < 0 or M < 0:
        raise ValueError(f"sector ({N}, {M}) has a negative quantum number")
    states = tuple(sorted((Occupation(n, m) for n, m in
                           itertools.product(_compositions(N), _compositions(M))),
                          reverse=True))
    return SectorBasis((N, M), states, {s: k for k, s in enumerate(states)})


def sector_size(N: int, M: int) -> int:
    return (N + 1) * (N + 2) // 2 * (M + 1) * (M + 2) // 2


class KetVector:
    """Sparse vector in one Fock sector, ``Occupation -> complex``.

    Immutable; amplitudes with modulus below ``tol`` are dropped at
    construction.
    """

    __slots__ = ("sector", "amps")

    def __init__(self, sector: Sector, amps: Mapping[Occupation, complex] | None = None,
                 tol: float = PRUNE_TOL):
        sector = (int(sector[0]), int(sector[1]))
        clean = {}
        for occ, amp in (amps or {}).items():
            if occ.sector != sector:
                raise ValueError(f"{occ.label()} is not in sector {sector}")
            if abs(amp) >= tol:
                clean[occ] = complex(amp)
        object.__setattr__(self, "sector", sector)
        object.__setattr__(self, "amps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("KetVector is immutable")

    @classmethod
    def basis_state(cls, occ: Occupation, amp: complex = 1.0) -> "KetVector":
        return cls(occ.sector, {occ: amp})

    @classmethod
    def vacuum(cls) -> "KetVector":
        return cls.basis_state(Occupation((0, 0, 0), (0, 0, 0)))

    @classmethod
    def from_dense(cls, sector: Sector, vec: np.ndarray, tol: float = PRUNE_TOL) -> "KetVector":
        basis = enumerate_sector(*sector)
        if len(vec) != len(basis):
            raise ValueError(f"vector length {len(vec)} does not match sector {sector}")
        return cls(sector, dict(zip(basis.states, np.asarray(vec, dtype=complex))), tol)

    def to_dense(self) -> np.ndarray:
        basis = enumerate_sector(*self.sector)
        out = np.zeros(len(basis), dtype=complex)
        for occ, amp in self.amps.items():
            out[basis.index[occ]] = amp
        return out

    def __getitem__(self, occ: Occupation) -> complex:
        return self.amps.get(occ, 0j)

    def __len__(self):
        return len(self.amps)

    def __add__(self, other: "KetVector") -> "KetVector":
        if other.sector != self.sector:
            raise ValueError(f"cannot add sectors {self.sector} and {other.sector}")
        out = dict(self.amps)
        for occ, amp in other.amps.items():
            out[occ] = out.get(occ, 0j) + amp
        return KetVector(self.sector, out)

    def __sub__(self, other: "KetVector") -> "KetVector":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "KetVector":
        return KetVector(self.sector, {k: scalar * v for k, v in self.amps.items()})

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.amps.values()))

    def max_abs(self) -> float:
        return max((abs(v) for v in self.amps.values()), default=0.0)

    def __repr__(self):
        terms = ", ".join(f"{k.label()}: {v:.6g}" for k, v in sorted(self.amps.items(), reverse=True))
        return f"KetVector({self.sector}, {{{terms}}})"


_SPECIES = {"a": 0, "b": 1}


def apply_ladder(species: str, kind: str, index: int, ket: KetVector) -> KetVector:
    """Apply ``a_i^dag``, ``a_i``, ``b_i^dag`` or ``b_i`` (``index`` is 1-based)."""
    if species not in _SPECIES:
        raise ValueError(f"unknown species {species!r}")
    if kind not in ("create", "annihilate"):
        raise ValueError(f"unknown ladder kind {kind!r}")
    if index not in (1, 2, 3):
        raise ValueError(f"mode index must be 1..3, got {index}")
    step = 1 if kind == "create" else -1
    delta = [0, 0, 0]
    delta[index - 1] = step
    zero = (0, 0, 0)
    dn, dm = (delta, zero) if species == "a" else (zero, delta)
    N, M = ket.sector
    target = (N + sum(dn), M + sum(dm))
    if target[0] < 0 or target[1] < 0:
        # lowering below the vacuum: zero vector, parked in the input sector
        return KetVector(ket.sector)
    out = {}
    for occ, amp in ket.amps.items():
        new = occ.shifted(dn, dm)
        if new is None:
            continue
        k = (occ.n if species == "a" else occ.m)[index - 1]
        out[new] = amp * math.sqrt(k + 1 if step > 0 else k)
    return KetVector(target, out)


def apply_word(word: Iterable[tuple[str, str, int]], ket: KetVector) -> KetVector:
    """Apply ladder operators right-to-left as written: the last entry acts first."""
    for species, kind, index in reversed(list(word)):
        ket = apply_ladder(species, kind, index, ket)
    return ket


def inner(bra: KetVector, ket: KetVector) -> complex:
    """``<bra|ket>``, conjugate-linear in ``bra``."""
    if bra.sector != ket.sector:
        raise ValueError(f"sector mismatch: {bra.sector} vs {ket.sector}")
    small, large = (bra.amps, ket.amps) if len(bra.amps) <= len(ket.amps) else (ket.amps, bra.amps)
    total = 0j
    for occ in small:
        if occ in large:
            total += bra.amps[occ].conjugate() * ket.amps[occ]
    return total


def operator_matrix(op: Callable[[KetVector], KetVector], src: Sector, dst: Sector) -> np.ndarray:
    """Dense matrix of a linear map between two sectors, in canonical order."""
    src_basis, dst_basis = enumerate_sector(*src), enumerate_sector(*dst)
    out = np.zeros((len(dst_basis), len(src_basis)), dtype=complex)
    for col, occ in enumerate(src_basis.states):
        image = op(KetVector.basis_state(occ))
        if not image.amps:
            continue
        if image.sector != dst:
            raise ValueError(f"operator maps {src} to {image.sector}, expected {dst}")
        for occ2, amp in image.amps.items():
            out[dst_basis.index[occ2], col] = amp
    return out


@lru_cache(maxsize=None)
def hopping_matrix(species: str, i: int, j: int, N: int, M: int) -> np.ndarray:
    """Matrix of ``c_i^dag c_j`` (``c`` = a or b) on sector ``(N, M)``."""
    mat = operator_matrix(
        lambda k: apply_word([(species, "create", i), (species, "annihilate", j)], k),
        (N, M), (N, M))
    mat.setflags(write=False)
    return mat
