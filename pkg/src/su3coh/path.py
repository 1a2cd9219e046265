"""Energy functionals, the discretized coherent-state action and kernel checks.

Single site: for ``H = sum_a c_a Q^a`` the coherent-state energy is
``sum_a c_a (N zbar lam^a z - M wbar conj(lam^a) w)``.  Several sites: the
Heisenberg energy of a product state factorizes into products of one-site
expectations, one term per bond ``x < y``.

The action over slices ``n = 0..n_slices-1`` is

    S = sum_n sum_x [ -N_x K(z_x) - M_x K(w_x) ] + eps sum_n E(slice n)

with forward differences ``dz = z^(n+1) - z^(n)`` and the antisymmetrized
kinetic form ``K(z) = (zbar.dz - dz-bar.z) / 2``, which is purely imaginary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from .algebra import LAMBDA, q_operator
from .coherent import coherent_zw, zw_amplitudes
from .irreps import check_label
from .manifold import CohParams

Label = tuple[int, int]
CONSTRAINT_TOL = 1e-12


@dataclass(frozen=True)
class LinearHamiltonian:
    """``H = sum_a c_a Q^a`` with real coefficients."""

    c: tuple[float, ...]

    def __post_init__(self):
        c = np.asarray(self.c)
        if c.shape != (8,):
            raise ValueError("need eight coefficients")
        if np.iscomplexobj(c) and np.abs(c.imag).max() > 0:
            raise ValueError("coefficients must be real for a Hermitian H")
        object.__setattr__(self, "c", tuple(float(x) for x in c.real))

    @classmethod
    def single(cls, a: int, value: float = 1.0) -> "LinearHamiltonian":
        c = [0.0] * 8
        c[a - 1] = value
        return cls(tuple(c))

    def fundamental(self) -> np.ndarray:
        """``sum_a c_a lam^a`` as a 3x3 matrix."""
        return np.tensordot(np.array(self.c), LAMBDA, axes=(0, 0))

    def matrix(self, N: int, M: int) -> np.ndarray:
        out = np.zeros_like(q_operator(1, N, M))
        for a, c in enumerate(self.c, start=1):
            if c:
                out = out + c * q_operator(a, N, M)
        return out


def expectation_vector(z, w, N: int, M: int) -> np.ndarray:
    """All eight ``<Q^a>`` in ``|z, w>``."""
    z, w = np.asarray(z, complex), np.asarray(w, complex)
    vals = N * np.einsum("i,aij,j->a", z.conj(), LAMBDA, z) \
        - M * np.einsum("i,aij,j->a", w.conj(), LAMBDA.conj(), w)
    return vals.real


def energy_linear(h: LinearHamiltonian, p: CohParams, N: int, M: int) -> float:
    return float(np.dot(h.c, expectation_vector(p.z, p.w, N, M)))


def energy_linear_matrix(h: LinearHamiltonian, p: CohParams, N: int, M: int) -> float:
    """Oracle: ``<z,w| H |z,w>`` from the sector matrix."""
    v = coherent_zw(p, N, M).vector.to_dense()
    return float(np.vdot(v, h.matrix(N, M) @ v).real)


@dataclass(frozen=True)
class HeisenbergModel:
    """``H = sum_{x<y} J_xy sum_a Q^a(x) Q^a(y)`` on sites carrying irreps."""

    labels: tuple[Label, ...]
    J: np.ndarray = field(repr=False)

    def __post_init__(self):
        labels = tuple(tuple(check_label(*lab)) for lab in self.labels)
        J = np.array(self.J, dtype=float)
        n = len(labels)
        if J.shape != (n, n):
            raise ValueError(f"couplings of shape {J.shape} do not match {n} sites")
        if not np.allclose(J, J.T, rtol=0, atol=1e-14):
            raise ValueError("couplings must be symmetric")
        if np.any(np.diag(J) != 0):
            raise ValueError("couplings must have a zero diagonal")
        J.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "J", J)

    @property
    def sites(self) -> int:
        return len(self.labels)

    def bonds(self):
        for x in range(self.sites):
            for y in range(x + 1, self.sites):
                if self.J[x, y]:
                    yield x, y, self.J[x, y]


def energy_heisenberg(model: HeisenbergModel, config: Sequence[CohParams]) -> float:
    """Product-state energy from one-site expectation values."""
    if len(config) != model.sites:
        raise ValueError(f"{len(config)} site states for {model.sites} sites")
    ex = [expectation_vector(p.z, p.w, *lab) for p, lab in zip(config, model.labels)]
    return float(sum(J * np.dot(ex[x], ex[y]) for x, y, J in model.bonds()))


def _embed(ops: dict[int, np.ndarray], dims: Sequence[int]) -> np.ndarray:
    return reduce(np.kron, [ops.get(x, np.eye(d)) for x, d in enumerate(dims)])


def heisenberg_matrix(model: HeisenbergModel) -> np.ndarray:
    """Dense operator on the tensor product of the site sectors."""
    dims = [q_operator(1, *lab).shape[0] for lab in model.labels]
    H = np.zeros((math.prod(dims),) * 2, dtype=complex)
    for x, y, J in model.bonds():
        for a in range(1, 9):
            H += J * _embed({x: q_operator(a, *model.labels[x]),
                             y: q_operator(a, *model.labels[y])}, dims)
    return H


def product_state(model: HeisenbergModel, config: Sequence[CohParams]) -> np.ndarray:
    return reduce(np.kron, [zw_amplitudes(p.z, p.w, *lab) for p, lab in zip(config, model.labels)])


def energy_heisenberg_exact(model: HeisenbergModel, config: Sequence[CohParams]) -> float:
    psi = product_state(model, config)
    return float(np.vdot(psi, heisenberg_matrix(model) @ psi).real)


@dataclass(frozen=True)
class Trajectory:
    """Per-site (z, w) at slices ``0..n_slices``; arrays of shape ``(n+1, sites, 3)``."""

    z: np.ndarray
    w: np.ndarray
    T: float

    def __post_init__(self):
        z, w = np.array(self.z, dtype=complex), np.array(self.w, dtype=complex)
        if z.ndim != 3 or z.shape[2] != 3 or z.shape != w.shape:
            raise ValueError("z and w must both have shape (slices + 1, sites, 3)")
        if z.shape[0] < 2:
            raise ValueError("a trajectory needs at least one slice")
        if not self.T > 0:
            raise ValueError("total time must be positive")
        err = max(np.abs(np.einsum("nsi,nsi->ns", z.conj(), z) - 1).max(),
                  np.abs(np.einsum("nsi,nsi->ns", w.conj(), w) - 1).max(),
                  np.abs(np.einsum("nsi,nsi->ns", z, w)).max())
        if err > CONSTRAINT_TOL:
            raise ValueError(f"trajectory violates the (z, w) constraints by {err:.2e}")
        z.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "T", float(self.T))

    @classmethod
    def from_params(cls, slices: Sequence[Sequence[CohParams]], T: float) -> "Trajectory":
        z = np.array([[p.z for p in row] for row in slices])
        w = np.array([[p.w for p in row] for row in slices])
        return cls(z, w, T)

    @property
    def n_slices(self) -> int:
        return self.z.shape[0] - 1

    @property
    def sites(self) -> int:
        return self.z.shape[1]

    @property
    def eps(self) -> float:
        return self.T / self.n_slices


def _kinetic(x: np.ndarray) -> np.ndarray:
    """``(xbar.dx - dxbar.x) / 2`` per slice and site, shape ``(n, sites)``."""
    dx = np.diff(x, axis=0)
    xb = x[:-1].conj()
    return 0.5 * (np.einsum("nsi,nsi->ns", xb, dx) - np.einsum("nsi,nsi->ns", dx.conj(), x[:-1]))


def _site_labels(labels: Sequence[Label], sites: int) -> np.ndarray:
    labels = np.array([tuple(lab) for lab in labels], dtype=float)
    if labels.shape != (sites, 2):
        raise ValueError(f"need one (N, M) label per site, got {labels.shape[0]} for {sites}")
    return labels


def kinetic_action(traj: Trajectory, labels: Sequence[Label]) -> complex:
    lab = _site_labels(labels, traj.sites)
    return complex(-(np.sum(_kinetic(traj.z) @ lab[:, 0]) + np.sum(_kinetic(traj.w) @ lab[:, 1])))


def discretized_action(traj: Trajectory, labels: Sequence[Label],
                       energy: Callable[[np.ndarray, np.ndarray], float] | None = None) -> complex:
    """Kinetic part plus ``eps * sum_n E(z^(n), w^(n))`` for ``n < n_slices``.

    ``energy`` receives one slice as ``(z, w)`` arrays of shape ``(sites, 3)``.
    """
    S = kinetic_action(traj, labels)
    if energy is not None:
        S += traj.eps * sum(energy(traj.z[n], traj.w[n]) for n in range(traj.n_slices))
    return S


def heisenberg_energy_functional(model: HeisenbergModel) -> Callable[[np.ndarray, np.ndarray], float]:
    def energy(z, w):
        ex = [expectation_vector(z[x], w[x], *lab) for x, lab in enumerate(model.labels)]
        return float(sum(J * np.dot(ex[x], ex[y]) for x, y, J in model.bonds()))
    return energy


def overlap_phase(traj: Trajectory, labels: Sequence[Label]) -> float:
    """``sum_x arg prod_n <z^(n)|z^(n+1)>`` with per-site ``(N, M)`` powers.

    For a closed loop this is gauge invariant, and ``-i`` times it is the
    continuum limit of :func:`kinetic_action`.
    """
    lab = _site_labels(labels, traj.sites)
    total = 0.0
    for s in range(traj.sites):
        zz = np.einsum("ni,ni->n", traj.z[:-1, s].conj(), traj.z[1:, s])
        ww = np.einsum("ni,ni->n", traj.w[:-1, s].conj(), traj.w[1:, s])
        total += lab[s, 0] * np.sum(np.angle(zz)) + lab[s, 1] * np.sum(np.angle(ww))
    return float(total)


KERNEL_ORDERS = ("ket", "bra")


def short_time_kernel(h: LinearHamiltonian, p: CohParams, q: CohParams, eps: float,
                      N: int, M: int, order: str = "ket") -> tuple[complex, complex]:
    """Exact one-slice matrix element and its first-order exponential form.

    ``order="ket"`` takes ``<p| exp(-eps H) |q>`` with ``q`` the later slice;
    then ``exp[N zbar.dz + M wbar.dw - eps E(p)]`` with ``dz = z(q) - z(p)``
    is correct to first order.  ``order="bra"`` swaps the states, which flips
    the sign of the first-order kinetic term.
    """
    if order not in KERNEL_ORDERS:
        raise ValueError(f"unknown order {order!r}; expected one of {KERNEL_ORDERS}")
    check_label(N, M)
    left, right = (p, q) if order == "ket" else (q, p)
    u = zw_amplitudes(left.z, left.w, N, M)
    v = zw_amplitudes(right.z, right.w, N, M)
    exact = np.vdot(u, expm(-eps * h.matrix(N, M)) @ v)
    dz, dw = q.z - p.z, q.w - p.w
    approx = np.exp(N * np.vdot(p.z, dz) + M * np.vdot(p.w, dw) - eps * energy_linear(h, p, N, M))
    return complex(exact), complex(approx)


def short_time_check(h: LinearHamiltonian, p: CohParams, q: CohParams, eps: float,
                     N: int, M: int, order: str = "ket") -> float:
    exact, approx = short_time_kernel(h, p, q, eps, N, M, order)
    return abs(exact - approx)


def displaced(p: CohParams, direction: np.ndarray, step: float) -> CohParams:
    """Move ``p`` along ``direction`` in chart angles (radial angles clipped)."""
    angles = p.angles() + step * np.asarray(direction, float)
    angles[:3] = np.clip(angles[:3], 0.0, math.pi / 2)
    return CohParams.from_angles(angles)


def richardson_ratios(residual: Callable[[float], float], step: float, halvings: int = 2) -> list[float]:
    """``r(h) / r(h/2)`` for successive halvings of ``step``."""
    values = [residual(step / 2 ** k) for k in range(halvings + 1)]
    return [a / b for a, b in zip(values, values[1:])]

