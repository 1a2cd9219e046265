"""Explicit SU(3) chart, invariant measures, Haar sampler and quadrature.

The group element is built from two complex triplets

    z = (sin t cos f e^{i a1}, sin t sin f e^{i a2}, cos t e^{i a3})
    w = e^{-i a_k} (e^{i b1} cos c p_k + e^{i b2} sin c q_k)

with ``p = (cos t cos f, cos t sin f, -sin t)``, ``q = (sin f, -cos f, 0)``,
so that ``|z| = |w| = 1`` and ``z . w = 0`` (no conjugation).  The matrix
``S = [z, conj(w), conj(z) x w]`` is special unitary and factorizes as
``S = A3 A2``.

Radial angles ``t, f, c`` live in ``[0, pi/2]``.  After averaging over the
five phases, every integrand built from (z, w) monomials is a polynomial in
``sin^2`` of each radial angle (reflection of an angle is a phase shift), so
the engine uses Gauss-Legendre in ``u = sin^2(angle)``; with the measure
weights ``sin^3 t cos t dt = u du / 2`` and ``cos f sin f df = du / 2`` the
rule is exact.  Phases use uniform grids, exact for trigonometric
polynomials whose frequency is below the point count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
THREADS_ENV = "SU3COH_THREADS"


def make_z(theta, phi, a1, a2, a3) -> np.ndarray:
    """Unit complex triplet parameterizing S^5.  Broadcasts over array inputs."""
    theta, phi = np.asarray(theta, float), np.asarray(phi, float)
    st, ct = np.sin(theta), np.cos(theta)
    return np.stack([st * np.cos(phi) * np.exp(1j * np.asarray(a1)),
                     st * np.sin(phi) * np.exp(1j * np.asarray(a2)),
                     ct * np.exp(1j * np.asarray(a3)) * np.ones_like(st)], axis=-1)


def make_w(theta, phi, chi, a1, a2, a3, b1, b2) -> np.ndarray:
    """Unit triplet with ``z . w = 0`` for the z of the same angles."""
    theta, phi, chi = (np.asarray(x, float) for x in (theta, phi, chi))
    st, ct, sf, cf = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    sc, cc = np.sin(chi), np.cos(chi)
    e1, e2 = np.exp(1j * np.asarray(b1)), np.exp(1j * np.asarray(b2))
    ea = [np.exp(-1j * np.asarray(a)) for a in (a1, a2, a3)]
    return np.stack([ea[0] * (e1 * cc * ct * cf + e2 * sc * sf),
                     ea[1] * (e1 * cc * ct * sf - e2 * sc * cf),
                     -ea[2] * e1 * cc * st * np.ones_like(sf)], axis=-1)


@dataclass(frozen=True)
class CohParams:
    """Angular chart of a (z, w) pair.  ``alpha`` has three phases, ``beta`` two."""

    theta: float
    phi: float
    chi: float
    alpha: tuple[float, float, float] = (0.0, 0.0, 0.0)
    beta: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        for name in ("theta", "phi", "chi"):
            val = getattr(self, name)
            if not -1e-12 <= val <= math.pi / 2 + 1e-12:
                raise ValueError(f"{name}={val} outside [0, pi/2]")
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if len(self.alpha) != 3 or len(self.beta) != 2:
            raise ValueError("need three alpha phases and two beta phases")

    @cached_property
    def z(self) -> np.ndarray:
        return make_z(self.theta, self.phi, *self.alpha)

    @cached_property
    def w(self) -> np.ndarray:
        return make_w(self.theta, self.phi, self.chi, *self.alpha, *self.beta)

    def angles(self) -> np.ndarray:
        return np.array([self.theta, self.phi, self.chi, *self.alpha, *self.beta])

    @classmethod
    def from_angles(cls, angles: Sequence[float]) -> "CohParams":
        t, f, c, a1, a2, a3, b1, b2 = angles
        return cls(t, f, c, (a1, a2, a3), (b1, b2))

    def constraint_residual(self) -> float:
        """Largest violation of ``|z|=1``, ``|w|=1``, ``z.w=0``."""
        z, w = self.z, self.w
        return max(abs(np.vdot(z, z) - 1), abs(np.vdot(w, w) - 1), abs(z @ w))


def random_params(rng: np.random.Generator, margin: float = 0.05) -> CohParams:
    """Uniform angles kept ``margin`` away from the chart boundaries."""
    t, f, c = rng.uniform(margin, math.pi / 2 - margin, 3)
    return CohParams(t, f, c, tuple(rng.uniform(0, TWO_PI, 3)), tuple(rng.uniform(0, TWO_PI, 2)))


@dataclass(frozen=True)
class GroupElement:
    S: np.ndarray
    A3: np.ndarray
    A2: np.ndarray


FACTOR_TOL = 1e-10


def group_matrix(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``S = [z, conj(w), conj(z) x w]``; batched over leading axes."""
    v = np.cross(np.conj(z), w)
    return np.stack([z, np.conj(w), v], axis=-1)


def make_group_element(p: CohParams) -> GroupElement:
    """SU(3) matrix of the chart together with its ``A3 A2`` factorization."""
    t, f, c = p.theta, p.phi, p.chi
    a1, a2, a3 = p.alpha
    b1, b2 = p.beta
    e = lambda x: np.exp(1j * x)  # noqa: E731
    st, ct, sf, cf, sc, cc = math.sin(t), math.cos(t), math.sin(f), math.cos(f), math.sin(c), math.cos(c)
    A3 = np.array([[st * cf * e(a1), ct * cf * e(a1), -sf * e(-a2 - a3)],
                   [st * sf * e(a2), ct * sf * e(a2), cf * e(-a1 - a3)],
                   [ct * e(a3), -st * e(a3), 0]], dtype=complex)
    g = a1 + a2 + a3
    A2 = np.array([[1, 0, 0],
                   [0, cc * e(-b1), sc * e(b2 - g)],
                   [0, -sc * e(-b2 + g), cc * e(b1)]], dtype=complex)
    S = group_matrix(p.z, p.w)
    err = np.abs(S - A3 @ A2).max()
    if err > FACTOR_TOL:
        raise ArithmeticError(f"S != A3 A2 (max deviation {err:.3e})")
    return GroupElement(S, A3, A2)


def haar_weight(p: CohParams) -> float:
    """Density of the normalized SU(3) measure in the chart coordinates."""
    return (math.sin(p.theta) ** 3 * math.cos(p.theta) * math.cos(p.phi) * math.sin(p.phi)
            * math.cos(p.chi) * math.sin(p.chi)) / (2 * math.pi ** 5)


def sample_angles(rng: np.random.Generator, count: int) -> np.ndarray:
    """``(count, 8)`` Haar-distributed chart angles by inverse CDF.

    Marginals: ``sin^4 theta``, ``sin^2 phi`` and ``sin^2 chi`` are uniform;
    phases are uniform on ``[0, 2 pi)``.
    """
    u = rng.random((count, 3))
    theta = np.arcsin(u[:, 0] ** 0.25)
    phi = np.arcsin(np.sqrt(u[:, 1]))
    chi = np.arcsin(np.sqrt(u[:, 2]))
    phases = rng.uniform(0.0, TWO_PI, (count, 5))
    return np.column_stack([theta, phi, chi, phases])


def sample_haar(rng: np.random.Generator, count: int) -> list[CohParams]:
    return [CohParams.from_angles(row) for row in sample_angles(rng, count)]


# -- quadrature -------------------------------------------------------------

@dataclass(frozen=True)
class PointBatch:
    """Chart angles of a block of quadrature points, plus the derived triplets."""

    angles: dict[str, np.ndarray]

    def __len__(self):
        return len(next(iter(self.angles.values())))

    def __getitem__(self, name: str) -> np.ndarray:
        return self.angles[name]

    @cached_property
    def z(self) -> np.ndarray:
        a = self.angles
        if "theta" in a:
            return make_z(a["theta"], a["phi"], a["alpha1"], a["alpha2"], a["alpha3"])
        # S^3 grids: the pair (z1, z2) = (cos chi e^{i b1}, sin chi e^{i b2})
        return np.stack([np.cos(a["chi"]) * np.exp(1j * a["beta1"]),
                         np.sin(a["chi"]) * np.exp(1j * a["beta2"])], axis=-1)

    @cached_property
    def w(self) -> np.ndarray:
        a = self.angles
        return make_w(a["theta"], a["phi"], a["chi"], a["alpha1"], a["alpha2"], a["alpha3"],
                      a["beta1"], a["beta2"])

    @cached_property
    def S(self) -> np.ndarray:
        return group_matrix(self.z, self.w)

    def params(self, k: int) -> CohParams:
        a = self.angles
        return CohParams(a["theta"][k], a["phi"][k], a["chi"][k],
                         (a["alpha1"][k], a["alpha2"][k], a["alpha3"][k]),
                         (a["beta1"][k], a["beta2"][k]))


RADIAL = ("theta", "phi", "chi")
SPACES = {
    "su3": ("theta", "phi", "chi", "alpha1", "alpha2", "alpha3", "beta1", "beta2"),
    "s5": ("theta", "phi", "alpha1", "alpha2", "alpha3"),
    "s3": ("chi", "beta1", "beta2"),
}


def _radial_rule(name: str, npts: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes in the angle and weights for the normalized radial density."""
    x, wts = np.polynomial.legendre.leggauss(npts)
    u = 0.5 * (x + 1.0)
    wts = 0.5 * wts
    if name == "theta":
        wts = 2.0 * u * wts          # sin^3 cos dt = u du / 2, normalized by 1/4
    return np.arcsin(np.sqrt(u)), wts


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor-product rule on one of ``su3``, ``s5``, ``s3``.

    ``degree`` bounds the phase frequency (and the sin/cos degree) of the
    integrands the rule integrates exactly.
    """

    space: str
    degree: int
    nodes: dict[str, np.ndarray] = field(repr=False)
    weights: dict[str, np.ndarray] = field(repr=False)

    @property
    def coords(self) -> tuple[str, ...]:
        return SPACES[self.space]

    @property
    def size(self) -> int:
        return math.prod(len(self.nodes[c]) for c in self.coords)

    def total_weight(self) -> float:
        return math.prod(math.fsum(self.weights[c]) for c in self.coords)

    def batches(self, chunk: int = 1 << 18):
        """Yield ``(PointBatch, weights)`` blocks in a fixed order."""
        coords = self.coords
        shape = [len(self.nodes[c]) for c in coords]
        total = self.size
        for start in range(0, total, chunk):
            flat = np.arange(start, min(start + chunk, total))
            idx = np.unravel_index(flat, shape)
            angles = {c: self.nodes[c][i] for c, i in zip(coords, idx)}
            wts = np.ones(len(flat))
            for c, i in zip(coords, idx):
                wts = wts * self.weights[c][i]
            yield PointBatch(angles), wts


def make_grid(degree: int, space: str = "su3", radial_points: int | None = None,
              phase_points: int | None = None) -> QuadratureGrid:
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}; expected one of {sorted(SPACES)}")
    if degree < 0:
        raise ValueError("degree must be non-negative")
    n_phase = phase_points if phase_points is not None else degree + 1
    n_rad = radial_points if radial_points is not None else degree // 2 + 2
    if n_phase < degree + 1:
        raise ValueError(f"{n_phase} phase points cannot resolve degree {degree}")
    nodes, weights = {}, {}
    for c in SPACES[space]:
        if c in RADIAL:
            nodes[c], weights[c] = _radial_rule(c, n_rad)
        else:
            nodes[c] = TWO_PI * np.arange(n_phase) / n_phase
            weights[c] = np.full(n_phase, 1.0 / n_phase)
    return QuadratureGrid(space, degree, nodes, weights)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def integrate(f: Callable[[PointBatch], np.ndarray], degree: int, space: str = "su3",
              grid: QuadratureGrid | None = None, workers: int | None = None,
              chunk: int = 1 << 18):
    """Integrate a batched integrand against the normalized invariant measure.

    ``f`` receives a :class:`PointBatch` and returns an array whose leading
    axis runs over the batch (trailing axes give matrix-valued integrals).
    Blocks are reduced in grid order, so the result does not depend on
    ``workers``.
    """
    grid = grid or make_grid(degree, space)
    if grid.degree < degree:
        raise ValueError(f"grid of degree {grid.degree} cannot integrate degree {degree}")
    workers = workers or default_workers()

    def block(item):
        batch, wts = item
        vals = np.asarray(f(batch))
        return np.tensordot(wts, vals, axes=(0, 0))

    if workers == 1:
        parts = [block(item) for item in grid.batches(chunk)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(block, grid.batches(chunk)))
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def integrate_outer(amplitudes: Callable[[PointBatch], np.ndarray], degree: int,
                    space: str = "su3", grid: QuadratureGrid | None = None,
                    workers: int | None = None, chunk: int = 1 << 16) -> np.ndarray:
    """``sum_p w_p v_p v_p^dag`` for ``v_p = amplitudes(batch)[p]`` (shape ``(n, d)``)."""
    grid = grid or make_grid(degree, space)
    workers = workers or default_workers()

    def block(item):
        batch, wts = item
        v = np.asarray(amplitudes(batch))
        return (v.T * wts) @ v.conj()

    if workers == 1:
        parts = [block(item) for item in grid.batches(chunk)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(block, grid.batches(chunk)))
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def pointwise(f: Callable[[CohParams], complex]) -> Callable[[PointBatch], np.ndarray]:
    """Lift a per-point function of :class:`CohParams` to a batched integrand."""
    def batched(batch: PointBatch):
        return np.array([f(batch.params(k)) for k in range(len(batch))])
    return batched


def invariance_check(U: np.ndarray, f: Callable[[np.ndarray], np.ndarray], degree: int,
                     grid: QuadratureGrid | None = None) -> float:
    """``|int f(U S) - int f(S)|`` for ``f`` acting on stacked ``(n, 3, 3)`` matrices."""
    grid = grid or make_grid(degree, "su3")
    left = integrate(lambda b: f(U @ b.S), degree, grid=grid)
    right = integrate(lambda b: f(b.S), degree, grid=grid)
    return float(np.max(np.abs(np.asarray(left - right))))


def random_su3(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(3) matrix via QR of a complex Ginibre matrix."""
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return q / np.linalg.det(q) ** (1 / 3)
