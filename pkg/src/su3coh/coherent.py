"""Coherent states of the irrep ``(N, M)``.

Two families:

* ``|z, w>`` with ``|z| = |w| = 1`` and ``z . w = 0`` (eight real
  parameters).  Amplitudes are
  ``sqrt(N! M! / prod N_i! M_i!) prod z_i^{N_i} w_i^{M_i}``; the state is
  unit-norm and automatically traceless because ``z . w = 0``.
* ``|z, zbar>`` with ``|z| = 1`` only (five real parameters), built on the
  traceless states with weights ``z^N zbar^M / prod N_i! M_i!``.  These are
  left unnormalized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .algebra import LAMBDA, q_operator
from .fock import KetVector, Occupation, enumerate_sector, hopping_matrix, inner
from .irreps import (IrrepLabel, check_label, dimension, irrep_basis, irrep_projector,
                     traceless_family)
from .manifold import CohParams, integrate_outer, make_grid

CHART_TOL = 1e-8


@lru_cache(maxsize=None)
def _exponents(N: int, M: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Occupation exponents ``(d, 3)`` for a and b, and ``prod N_i! M_i!``."""
    states = enumerate_sector(N, M).states
    n = np.array([s.n for s in states], dtype=int)
    m = np.array([s.m for s in states], dtype=int)
    fac = np.array([s.factorial_product() for s in states], dtype=float)
    return n, m, fac


def _monomials(x: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """``prod_i x_i^{powers_i}`` for batched ``x`` of shape ``(..., 3)``."""
    x = np.asarray(x, dtype=complex)
    top = int(powers.max(initial=0))
    cols = []
    for i in range(3):
        pw = [np.ones(x.shape[:-1], dtype=complex)]
        for _ in range(top):
            pw.append(pw[-1] * x[..., i])
        cols.append(pw)
    out = np.empty((len(powers),) + x.shape[:-1], dtype=complex)
    for k, (p0, p1, p2) in enumerate(powers):
        out[k] = cols[0][p0] * cols[1][p1] * cols[2][p2]
    return np.moveaxis(out, 0, -1)


def zw_amplitudes(z: np.ndarray, w: np.ndarray, N: int, M: int) -> np.ndarray:
    """Fock amplitudes of ``|z, w>_(N,M)``; batched over leading axes.

    No constraint is imposed on ``z`` and ``w``.
    """
    n, m, fac = _exponents(N, M)
    scale = math.sqrt(math.factorial(N) * math.factorial(M)) / np.sqrt(fac)
    return scale * _monomials(z, n) * _monomials(w, m)


@dataclass(frozen=True)
class CoherentZW:
    z: np.ndarray
    w: np.ndarray
    label: IrrepLabel
    vector: KetVector
    params: CohParams | None = None


def coherent_zw(p: CohParams, N: int, M: int) -> CoherentZW:
    return coherent_zw_from(p.z, p.w, N, M, params=p)


def coherent_zw_from(z, w, N: int, M: int, params: CohParams | None = None) -> CoherentZW:
    """Coherent state from raw triplets (constraints are the caller's business)."""
    label = check_label(N, M)
    z, w = np.asarray(z, complex), np.asarray(w, complex)
    return CoherentZW(z, w, label, KetVector.from_dense(label, zw_amplitudes(z, w, N, M)), params)


def overlap(c1: CoherentZW, c2: CoherentZW) -> complex:
    """``<c1|c2>`` by the sparse inner product."""
    if c1.label != c2.label:
        raise ValueError(f"label mismatch: {tuple(c1.label)} vs {tuple(c2.label)}")
    return inner(c1.vector, c2.vector)


def overlap_closed_form(z1, w1, z2, w2, N: int, M: int) -> complex:
    return np.vdot(z1, z2) ** N * np.vdot(w1, w2) ** M


def diff_residual(p: CohParams, q: CohParams, N: int, M: int) -> float:
    """``|<p|q> - (1 + N zbar.dz + M wbar.dw)|`` with ``dz = z(q) - z(p)``."""
    lhs = overlap(coherent_zw(p, N, M), coherent_zw(q, N, M))
    dz, dw = q.z - p.z, q.w - p.w
    return abs(lhs - (1 + N * np.vdot(p.z, dz) + M * np.vdot(p.w, dw)))


def default_degree(N: int, M: int) -> int:
    return 2 * (N + M) + 2


@dataclass(frozen=True)
class RoiReport:
    label: IrrepLabel
    integral: np.ndarray
    projector: np.ndarray       # D * integral
    idempotency: float          # max |P^2 - P|
    hermiticity: float          # max |P - P^dag|
    trace: float                # tr P
    basis_residual: float       # max |P v - v| over irrep basis vectors
    irrep_residual: float       # max |P - P_irrep|


def roi_zw(N: int, M: int, degree: int | None = None, workers: int | None = None) -> RoiReport:
    """Haar integral of ``|z,w><z,w|`` and its comparison with ``P_irrep / D``."""
    label = check_label(N, M)
    degree = default_degree(N, M) if degree is None else degree
    if degree < 2 * (N + M):
        raise ValueError(f"degree {degree} too low for label {tuple(label)}")
    grid = make_grid(degree, "su3")
    integral = integrate_outer(lambda b: zw_amplitudes(b.z, b.w, N, M), degree,
                               grid=grid, workers=workers)
    D = dimension(N, M)
    P = D * integral
    B = irrep_basis(N, M).vectors
    return RoiReport(
        label=label,
        integral=integral,
        projector=P,
        idempotency=float(np.abs(P @ P - P).max()),
        hermiticity=float(np.abs(P - P.conj().T).max()),
        trace=float(np.trace(P).real),
        basis_residual=float(np.abs(P @ B - B).max()),
        irrep_residual=float(np.abs(P - irrep_projector(N, M)).max()),
    )


def expectation_formula(z, w, N: int, M: int, a: int) -> float:
    lam = LAMBDA[a - 1]
    return float((N * np.vdot(z, lam @ z) - M * np.vdot(w, lam.conj() @ w)).real)


def expectation_matrix_element(state: CoherentZW, a: int) -> float:
    v = state.vector.to_dense()
    return float(np.vdot(v, q_operator(a, *state.label) @ v).real)


EXPECTATION_TOL = 1e-11


def expectation_zw(p: CohParams, N: int, M: int, a: int) -> float:
    """``N zbar lam^a z - M wbar conj(lam^a) w``, cross-checked against ``<Q^a>``."""
    value = expectation_formula(p.z, p.w, N, M, a)
    oracle = expectation_matrix_element(coherent_zw(p, N, M), a)
    if abs(value - oracle) > EXPECTATION_TOL:
        raise ArithmeticError(f"<Q^{a}> formula {value!r} disagrees with matrix element {oracle!r}")
    return value


GROUP_FORMS = ("literal", "ordered")


def _lowering_parts(z, w, N: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    """``Y = (z2/z1)(Q1 - iQ2) + (z3/z1)(Q4 - iQ5)`` and ``Z = -(w3/w2)(Q6 + iQ7)``."""
    Q = lambda a: q_operator(a, N, M)  # noqa: E731
    Y = (z[1] / z[0]) * (Q(1) - 1j * Q(2)) + (z[2] / z[0]) * (Q(4) - 1j * Q(5))
    Z = -(w[2] / w[1]) * (Q(6) + 1j * Q(7))
    return Y, Z


def highest_weight_exponent(z, w, N: int, M: int) -> np.ndarray:
    """``(z2/z1)(Q1 - iQ2) + (z3/z1)(Q4 - iQ5) - (w3/w2)(Q6 + iQ7)`` on sector ``(N, M)``."""
    Y, Z = _lowering_parts(z, w, N, M)
    return Y + Z


def highest_weight_state(N: int, M: int) -> np.ndarray:
    basis = enumerate_sector(N, M)
    hw = np.zeros(len(basis), dtype=complex)
    hw[basis.index[Occupation((N, 0, 0), (0, M, 0))]] = 1.0
    return hw


def group_action_state(p: CohParams, N: int, M: int, form: str = "literal") -> np.ndarray:
    """``z1^N w2^M`` times the lowering exponential acting on ``|N00; 0M0>``.

    ``form="literal"`` exponentiates the single sum ``Y + Z``.  The two
    pieces do not commute (``[Y, Z] = (z3 w3 / z1 w2)(Q1 - iQ2)``), so this
    is not the coherent state; ``form="ordered"`` applies ``exp(Y) exp(Z)``,
    which is.
    """
    check_label(N, M)
    if form not in GROUP_FORMS:
        raise ValueError(f"unknown form {form!r}; expected one of {GROUP_FORMS}")
    z, w = p.z, p.w
    if abs(z[0]) < CHART_TOL or abs(w[1]) < CHART_TOL:
        raise ValueError("chart condition z1 != 0, w2 != 0 violated")
    Y, Z = _lowering_parts(z, w, N, M)
    hw = highest_weight_state(N, M)
    if form == "literal":
        out = expm(Y + Z) @ hw
    else:
        out = expm(Y) @ (expm(Z) @ hw)
    return (z[0] ** N) * (w[1] ** M) * out


def group_action_from_highest(p: CohParams, N: int, M: int, form: str = "literal") -> float:
    """Max deviation between the rotated highest-weight state and ``|z, w>``."""
    lhs = group_action_state(p, N, M, form)
    return float(np.abs(lhs - zw_amplitudes(p.z, p.w, N, M)).max())


@dataclass(frozen=True)
class CoherentZZbar:
    z: np.ndarray
    label: IrrepLabel
    vector: KetVector


def zzbar_weights(z: np.ndarray, N: int, M: int) -> np.ndarray:
    """``z^N zbar^M / prod N_i! M_i!`` per occupation; batched."""
    n, m, fac = _exponents(N, M)
    return _monomials(z, n) * _monomials(np.conj(z), m) / fac


def zzbar_amplitudes(z: np.ndarray, N: int, M: int) -> np.ndarray:
    T = np.asarray(traceless_family(N, M))
    return zzbar_weights(z, N, M) @ T.T


def coherent_zzbar(z, N: int, M: int, tol: float = 1e-12) -> CoherentZZbar:
    label = check_label(N, M)
    z = np.asarray(z, complex)
    if abs(np.vdot(z, z) - 1) > tol:
        raise ValueError("z must be a unit vector")
    return CoherentZZbar(z, label, KetVector.from_dense(label, zzbar_amplitudes(z, N, M)))


def zzbar_constant(N: int, M: int) -> float:
    return 2.0 / (math.factorial(N) * math.factorial(M) * math.factorial(N + M + 2))


def tensor_frame_sum(N: int, M: int) -> np.ndarray:
    """``sum |psi><psi|`` over index tuples ``(i_1..i_N; j_1..j_M)``.

    Each occupation stands for ``N! M! / prod N_i! M_i!`` index tuples.
    """
    _, _, fac = _exponents(N, M)
    mult = math.factorial(N) * math.factorial(M) / fac
    T = np.asarray(traceless_family(N, M))
    return (T * mult) @ T.conj().T


@dataclass(frozen=True)
class ZZbarRoiReport:
    label: IrrepLabel
    integral: np.ndarray
    frame: np.ndarray
    measured_constant: float
    expected_constant: float
    relative_error: float
    fit_residual: float


def roi_zzbar(N: int, M: int, degree: int | None = None, workers: int | None = None) -> ZZbarRoiReport:
    """S^5 integral of ``|z,zbar><z,zbar|`` fitted as ``C * tensor_frame_sum``."""
    label = check_label(N, M)
    degree = default_degree(N, M) if degree is None else degree
    integral = integrate_outer(lambda b: zzbar_amplitudes(b.z, N, M), degree,
                               space="s5", workers=workers)
    frame = tensor_frame_sum(N, M)
    C = float((np.vdot(frame, integral) / np.vdot(frame, frame)).real)
    expected = zzbar_constant(N, M)
    return ZZbarRoiReport(label, integral, frame, C, expected,
                          abs(C - expected) / expected,
                          float(np.abs(integral - C * frame).max()))


def expectation_zzbar(z, N: int, M: int, a: int) -> float:
    """``(N - M) zbar lam^a z``."""
    return float(((N - M) * np.vdot(z, LAMBDA[a - 1] @ z)).real)


def expectation_zzbar_matrix(state: CoherentZZbar, a: int) -> float:
    """``<Q^a>`` in the normalized ``|z, zbar>``."""
    v = state.vector.to_dense()
    return float((np.vdot(v, q_operator(a, *state.label) @ v) / np.vdot(v, v)).real)


def generating_function_residual(z, w, N: int, M: int) -> float:
    """Order-(N, M) check of ``<e^{zbar a + wbar b} c_i^dag c_j e^{z a^dag + w b^dag}>``.

    The sector-(N, M) part of ``exp(z.a^dag + w.b^dag)|0>`` has amplitudes
    ``z^N w^M / sqrt(prod N_i! M_i!)``; its a-hopping matrix elements must be
    ``zbar_i z_j |z|^{2(N-1)}/(N-1)! |w|^{2M}/M!`` and likewise for b.
    """
    n, m, fac = _exponents(N, M)
    g = _monomials(z, n) * _monomials(w, m) / np.sqrt(fac)
    zz, ww = np.vdot(z, z).real, np.vdot(w, w).real
    worst = 0.0
    for i in range(3):
        for j in range(3):
            if N:
                lhs = np.vdot(g, hopping_matrix("a", i + 1, j + 1, N, M) @ g)
                rhs = np.conj(z[i]) * z[j] * zz ** (N - 1) / math.factorial(N - 1) * ww ** M / math.factorial(M)
                worst = max(worst, abs(lhs - rhs))
            if M:
                lhs = np.vdot(g, hopping_matrix("b", i + 1, j + 1, N, M) @ g)
                rhs = np.conj(w[i]) * w[j] * zz ** N / math.factorial(N) * ww ** (M - 1) / math.factorial(M - 1)
                worst = max(worst, abs(lhs - rhs))
    return float(worst)


def projector_residual(state: CoherentZW | CoherentZZbar) -> float:
    v = state.vector.to_dense()
    return float(np.abs(irrep_projector(*state.label) @ v - v).max())
