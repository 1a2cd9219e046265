"""SU(2) from a doublet of Schwinger bosons: the reference case.

The spin-``j`` irrep lives on two-mode states ``|N1, N2>`` with
``N1 + N2 = N = 2j``, ordered by descending ``N1`` (so ``m = (N1 - N2)/2``
runs ``j, j-1, ..., -j``).  Generators ``J^a = a^dag sigma^a a / 2`` are built
from the same ladder machinery as the SU(3) operators, using the ``a``
species with the third mode left empty.

Two coherent-state definitions are compared:

* Schwinger: ``F_{N1,N2} = sqrt(N!/(N1! N2!)) z1^N1 z2^N2`` with
  ``z = (cos chi e^{i b1}, sin chi e^{i b2})``;
* Euler rotation of ``|j, j>``:
  ``C_m = e^{-i m phi} sqrt((2j)!/((j+m)!(j-m)!)) sin(theta/2)^{j-m} cos(theta/2)^{j+m}``.

With ``theta = 2 chi`` the moduli always agree.  The phases agree up to the
global factor ``e^{ij(b1 + b2)}`` when ``phi = b2 - b1``; equivalently
``|z1, z2> = (z1 / cos(theta/2))^{2j} e^{ij phi} |n(theta, phi)>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .fock import enumerate_sector, hopping_matrix
from .manifold import integrate_outer

PAULI = np.array([[[0, 1], [1, 0]],
                  [[0, -1j], [1j, 0]],
                  [[1, 0], [0, -1]]], dtype=complex)

CONSTRAINT_TOL = 1e-12
CHART_TOL = 1e-12


@dataclass(frozen=True)
class Su2CohParams:
    """Point of S^3: ``z1 = cos chi e^{i b1}``, ``z2 = sin chi e^{i b2}``."""

    chi: float
    beta1: float = 0.0
    beta2: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.chi <= math.pi / 2 + 1e-12:
            raise ValueError(f"chi={self.chi} outside [0, pi/2]")

    @property
    def z(self) -> np.ndarray:
        return np.array([math.cos(self.chi) * np.exp(1j * self.beta1),
                         math.sin(self.chi) * np.exp(1j * self.beta2)])

    @classmethod
    def from_z(cls, z1: complex, z2: complex) -> "Su2CohParams":
        if abs(abs(z1) ** 2 + abs(z2) ** 2 - 1) > CONSTRAINT_TOL:
            raise ValueError("|z1|^2 + |z2|^2 must equal 1")
        chi = math.atan2(abs(z2), abs(z1))
        return cls(chi, float(np.angle(z1)), float(np.angle(z2)))


@dataclass(frozen=True)
class Su2Irrep:
    N: int
    J: np.ndarray        # (3, N+1, N+1)

    @property
    def dim(self) -> int:
        return self.N + 1

    @property
    def j(self) -> float:
        return self.N / 2

    @property
    def raising(self) -> np.ndarray:
        return self.J[0] + 1j * self.J[1]

    @property
    def lowering(self) -> np.ndarray:
        return self.J[0] - 1j * self.J[1]

    def casimir(self) -> np.ndarray:
        return np.einsum("aij,ajk->ik", self.J, self.J)


def _doublet_indices(N: int) -> np.ndarray:
    """Positions of the ``n3 = 0`` states of sector ``(N, 0)``, descending ``N1``."""
    basis = enumerate_sector(N, 0)
    return np.array([k for k, s in enumerate(basis.states) if s.n[2] == 0])


@lru_cache(maxsize=None)
def su2_generators(N: int) -> Su2Irrep:
    if N < 0:
        raise ValueError("N must be non-negative")
    idx = _doublet_indices(N)
    J = np.zeros((3, N + 1, N + 1), dtype=complex)
    for i in range(2):
        for j in range(2):
            hop = hopping_matrix("a", i + 1, j + 1, N, 0)[np.ix_(idx, idx)]
            J += 0.5 * PAULI[:, i, j, None, None] * hop
    J.setflags(write=False)
    return Su2Irrep(N, J)


def schwinger_amplitudes(z: np.ndarray, N: int) -> np.ndarray:
    """``F_{N1, N2}`` for ``N1 = N..0``; batched over leading axes of ``z``."""
    z = np.asarray(z, dtype=complex)
    n1 = np.arange(N, -1, -1)
    binom = np.sqrt([math.comb(N, int(k)) for k in n1])
    return binom * z[..., 0, None] ** n1 * z[..., 1, None] ** (N - n1)


def su2_coherent_schwinger(p: Su2CohParams, N: int) -> np.ndarray:
    if N < 0:
        raise ValueError("N must be non-negative")
    return schwinger_amplitudes(p.z, N)


def su2_coherent_euler(theta: float, phi: float, N: int) -> np.ndarray:
    """``C_m`` for ``m = j, j-1, ..., -j`` with ``j = N/2``."""
    if not -1e-12 <= theta <= math.pi + 1e-12:
        raise ValueError(f"theta={theta} outside [0, pi]")
    j = N / 2
    s, c = math.sin(theta / 2), math.cos(theta / 2)
    out = np.empty(N + 1, dtype=complex)
    for k in range(N + 1):
        m = j - k
        up, down = N - k, k          # j + m, j - m
        out[k] = (np.exp(-1j * m * phi) * math.sqrt(math.comb(N, k))
                  * s ** down * c ** up)
    return out


def euler_angles(p: Su2CohParams) -> tuple[float, float]:
    """``(theta, phi) = (2 chi, b2 - b1)``."""
    return 2 * p.chi, p.beta2 - p.beta1


def align_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the largest-modulus entry is real and positive."""
    k = int(np.argmax(np.abs(v)))
    if abs(v[k]) == 0:
        return v
    return v * (abs(v[k]) / v[k])


def su2_equivalence_check(p: Su2CohParams, N: int) -> float:
    """Deviation between the Schwinger and Euler states up to one global phase."""
    if abs(math.cos(p.chi)) < CHART_TOL:
        raise ValueError("z1 = 0 is outside the stereographic chart")
    F = su2_coherent_schwinger(p, N)
    C = su2_coherent_euler(*euler_angles(p), N)
    return float(np.abs(align_phase(F) - align_phase(C)).max())


def su2_modulus_check(p: Su2CohParams, N: int) -> float:
    """``max ||F|^2 - |C|^2|`` with ``theta = 2 chi``, ``phi = b1 - b2``.

    Phases are deliberately not compared, so the sign of ``phi`` is moot.
    """
    F = su2_coherent_schwinger(p, N)
    C = su2_coherent_euler(2 * p.chi, p.beta1 - p.beta2, N)
    return float(np.abs(np.abs(F) ** 2 - np.abs(C) ** 2).max())


def su2_lowering_check(p: Su2CohParams, N: int) -> float:
    """``z1^N exp((z2/z1) J-) |j, j>`` against the Schwinger amplitudes."""
    z1, z2 = p.z
    if abs(z1) < CHART_TOL:
        raise ValueError("z1 = 0 is outside the chart")
    rep = su2_generators(N)
    top = np.zeros(N + 1, dtype=complex)
    top[0] = 1.0
    lhs = z1 ** N * (expm((z2 / z1) * rep.lowering) @ top)
    return float(np.abs(lhs - su2_coherent_schwinger(p, N)).max())


def su2_roi_check(N: int, degree: int | None = None, workers: int | None = None) -> np.ndarray:
    """``int dOmega_{S^3} |z><z|`` by exact quadrature; should be ``I / (N+1)``."""
    degree = 2 * N + 2 if degree is None else degree
    if degree < 2 * N:
        raise ValueError(f"degree {degree} cannot resolve N={N}")
    return integrate_outer(lambda b: schwinger_amplitudes(b.z, N), degree,
                           space="s3", workers=workers)
