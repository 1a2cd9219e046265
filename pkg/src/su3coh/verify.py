"""Named invariant suites shared by the CLI and the acceptance tests.

Each suite returns a list of :class:`Check` records.  A check compares a
residual against a tolerance; a suite passes when all of its checks do.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import algebra, coherent, irreps, manifold, path, su2
from .fock import enumerate_sector


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-11
    quadrature: float = 1e-9
    mc_sigma: float = 4.0

    def __post_init__(self):
        if min(self.algebraic, self.quadrature, self.mc_sigma) <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "residual", float(self.residual))
        object.__setattr__(self, "tolerance", float(self.tolerance))
        object.__setattr__(self, "passed", bool(self.residual < self.tolerance))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SuiteOptions:
    labels: tuple[tuple[int, int], ...] | None = None
    max_label: tuple[int, int] = (3, 3)
    degree: int | None = None
    draws: int | None = None
    samples: int = 20000
    seed: int = 0
    workers: int | None = None
    tol: Tolerances = Tolerances()


def _rng(opts: SuiteOptions) -> np.random.Generator:
    return np.random.default_rng(opts.seed)


def _labels(opts: SuiteOptions, default):
    return tuple(tuple(lab) for lab in (opts.labels or default))


def _sectors(opts: SuiteOptions):
    Nmax, Mmax = opts.max_label
    return [(N, M) for N in range(Nmax + 1) for M in range(Mmax + 1)]


def suite_algebra(opts: SuiteOptions) -> list[Check]:
    tol = opts.tol.algebraic
    out = [Check("structure constants antisymmetric", "totally antisymmetric f^{abc}",
                 np.abs(algebra.F + algebra.F.transpose(1, 0, 2)).max(), tol)]
    for N, M in _sectors(opts):
        Q = algebra.q_operators(N, M)
        C = algebra.casimir(N, M)
        out.append(Check(f"closure ({N},{M})", "Schwinger-boson SU(3) commutation relations",
                         algebra.closure_residual(Q), tol))
        out.append(Check(f"hermiticity ({N},{M})", "Q^a are Hermitian",
                         np.abs(Q - Q.conj().transpose(0, 2, 1)).max(), tol))
        out.append(Check(f"casimir commutes ({N},{M})", "quadratic Casimir is invariant",
                         max(np.abs(algebra.commutator(C, q)).max() for q in Q), tol))
    return out


def suite_irreps(opts: SuiteOptions) -> list[Check]:
    tol = opts.tol.algebraic
    out = []
    for N, M in _sectors(opts):
        rank, _ = irreps.span_rank(np.asarray(irreps.traceless_family(N, M)))
        out.append(Check(f"rank ({N},{M})", "dimension formula (N+1)(M+1)(N+M+2)/2",
                         abs(rank - irreps.dimension(N, M)), 0.5))
        worst = max(irreps.verify_tracelessness(irreps.traceless_state(occ))
                    for occ in enumerate_sector(N, M))
        out.append(Check(f"traceless ({N},{M})", "a.b annihilates every traceless state",
                         worst, tol))
        if N + 1 <= irreps.MAX_QUANTA and M + 1 <= irreps.MAX_QUANTA:
            rel = max(irreps.trace_relation_residual(occ) for occ in enumerate_sector(N, M))
            out.append(Check(f"trace relation ({N},{M})",
                             "contracting one upper and one lower index vanishes", rel, tol))
    return out


def _monomials_degree2(S: np.ndarray) -> np.ndarray:
    """Every ``S_ij conj(S_kl)`` per point, shape ``(n, 81)``."""
    return np.einsum("nij,nkl->nijkl", S, S.conj()).reshape(len(S), -1)


def suite_measures(opts: SuiteOptions) -> list[Check]:
    out = []
    for space in ("s3", "s5", "su3"):
        grid = manifold.make_grid(4, space)
        total = manifold.integrate(lambda b: np.ones(len(b)), 0, space, grid=grid)
        out.append(Check(f"normalization {space}", "invariant measure integrates to one",
                         abs(total - 1), 1e-13))
    rng = _rng(opts)
    grid = manifold.make_grid(2, "su3")
    for k in range(5):
        U = manifold.random_su3(rng)
        out.append(Check(f"left invariance U{k}", "Haar measure is left invariant",
                         manifold.invariance_check(U, _monomials_degree2, 2, grid=grid),
                         opts.tol.quadrature))
    # Monte-Carlo cross-check of the sampler against E|S_11|^2 = 1/3
    n = opts.samples
    angles = manifold.sample_angles(rng, n)
    z1 = manifold.make_z(*angles[:, [0, 1, 3, 4, 5]].T)[:, 0]
    x = np.abs(z1) ** 2
    sigma = x.std(ddof=1) / math.sqrt(n)
    out.append(Check("sampler mean |z1|^2", "Haar sampler reproduces the measure",
                     abs(x.mean() - 1 / 3) / sigma, opts.tol.mc_sigma))
    return out


def suite_roi_zw(opts: SuiteOptions) -> list[Check]:
    out = []
    tq = opts.tol.quadrature
    for N, M in _labels(opts, [(1, 0), (0, 1), (1, 1)]):
        rep = coherent.roi_zw(N, M, opts.degree, opts.workers)
        tag = f"({N},{M})"
        out += [
            Check(f"idempotent {tag}", "D times the coherent-state integral is a projector",
                  rep.idempotency, 1e-8),
            Check(f"hermitian {tag}", "resolution of identity is Hermitian", rep.hermiticity, tq),
            Check(f"trace {tag}", "trace equals the irrep dimension",
                  abs(rep.trace - irreps.dimension(N, M)), 1e-6),
            Check(f"fixes basis {tag}", "projector fixes every irrep basis vector",
                  rep.basis_residual, tq),
            Check(f"matches irrep projector {tag}", "resolution of identity on the irrep",
                  rep.irrep_residual, tq),
        ]
    return out


def suite_roi_zzbar(opts: SuiteOptions) -> list[Check]:
    out = []
    for N, M in _labels(opts, [(1, 0), (1, 1), (2, 1)]):
        rep = coherent.roi_zzbar(N, M, opts.degree, opts.workers)
        out += [
            Check(f"constant ({N},{M})", "C = 2 / (N! M! (N+M+2)!)", rep.relative_error, 1e-8),
            Check(f"proportional to frame sum ({N},{M})",
                  "S^5 integral is C times the traceless frame sum", rep.fit_residual,
                  opts.tol.quadrature),
        ]
    return out


EXPECTATION_LABELS = [(N, M) for N in range(3) for M in range(3)]


def suite_expectation(opts: SuiteOptions) -> list[Check]:
    rng = _rng(opts)
    draws = opts.draws or 100
    labels = _labels(opts, EXPECTATION_LABELS)
    tol = opts.tol.algebraic
    worst_zw = worst_zz = worst_self = 0.0
    for _ in range(draws):
        N, M = labels[rng.integers(len(labels))]
        a = int(rng.integers(1, 9))
        p = manifold.random_params(rng, 0.0)
        state = coherent.coherent_zw(p, N, M)
        worst_zw = max(worst_zw, abs(coherent.expectation_formula(p.z, p.w, N, M, a)
                                     - coherent.expectation_matrix_element(state, a)))
        z = p.z
        if N != M:
            zz = coherent.coherent_zzbar(z, N, M)
            worst_zz = max(worst_zz, abs(coherent.expectation_zzbar(z, N, M, a)
                                         - coherent.expectation_zzbar_matrix(zz, a)))
        for K in (1, 2):
            worst_self = max(worst_self, abs(coherent.expectation_zzbar(z, K, K, a)))
    return [
        Check("(z,w) formula vs matrix element", "<Q^a> = N zbar lam z - M wbar lam* w",
              worst_zw, tol),
        Check("(z,zbar) formula vs matrix element", "<Q^a> = (N - M) zbar lam z", worst_zz, tol),
        Check("(z,zbar) self-conjugate vanishing", "expectation vanishes for N = M",
              worst_self, tol),
    ]


def suite_group_action(opts: SuiteOptions, forms=coherent.GROUP_FORMS) -> list[Check]:
    rng = _rng(opts)
    draws = opts.draws or 50
    out = []
    for N, M in _labels(opts, [(1, 0), (1, 1), (2, 1)]):
        ps = [manifold.random_params(rng) for _ in range(draws)]
        for form in forms:
            worst = max(coherent.group_action_from_highest(p, N, M, form) for p in ps)
            anchor = ("single exponential of the lowering generators"
                      if form == "literal" else "ordered product exp(Y) exp(Z) of the lowering generators")
            out.append(Check(f"{form} ({N},{M})", anchor, worst, 1e-10))
    return out


def _ratio_residual(ratios) -> float:
    return max(abs(r - 4.0) for r in ratios)


def suite_path(opts: SuiteOptions) -> list[Check]:
    rng = _rng(opts)
    tol = opts.tol.algebraic
    out = []
    hams = {"Q3": path.LinearHamiltonian.single(3),
            "random": path.LinearHamiltonian(tuple(rng.normal(size=8)))}
    for N, M in ((1, 0), (1, 1)):
        for name, h in hams.items():
            p = manifold.random_params(rng, 0.2)
            d = rng.normal(size=8)
            ratios = path.richardson_ratios(
                lambda e: path.short_time_check(h, p, path.displaced(p, d, e), e, N, M), 1e-2)
            out.append(Check(f"short-time ratio {name} ({N},{M})",
                             "one-slice kernel correct to first order", _ratio_residual(ratios), 0.5))
    # Heisenberg functional against the product-state matrix element
    up = manifold.CohParams(math.pi / 2, 0.0, 0.0)                   # z = (1, 0, 0)
    side = manifold.CohParams(math.pi / 2, math.pi / 2, 0.0)         # z = (0, 1, 0)
    pair = path.HeisenbergModel(((1, 0), (1, 0)), np.array([[0, 1], [1, 0]]))
    out.append(Check("two-site parallel", "Heisenberg energy 1/3",
                     abs(path.energy_heisenberg(pair, [up, up]) - 1 / 3), tol))
    out.append(Check("two-site orthogonal", "Heisenberg energy -1/6",
                     abs(path.energy_heisenberg(pair, [up, side]) + 1 / 6), tol))
    worst = 0.0
    for labels in (((1, 0), (0, 1)), ((1, 1), (1, 0), (0, 1)), ((1, 1), (1, 1))):
        n = len(labels)
        J = rng.normal(size=(n, n))
        J = np.triu(J, 1) + np.triu(J, 1).T
        model = path.HeisenbergModel(labels, J)
        config = [manifold.random_params(rng, 0.0) for _ in labels]
        worst = max(worst, abs(path.energy_heisenberg(model, config)
                               - path.energy_heisenberg_exact(model, config)))
    out.append(Check("product-state energy", "energy functional of a product state", worst, 1e-10))
    # kinetic term is purely imaginary
    slices = [[manifold.random_params(rng)] for _ in range(6)]
    traj = path.Trajectory.from_params(slices, 1.0)
    out.append(Check("kinetic term imaginary", "antisymmetrized kinetic term is imaginary",
                     abs(path.kinetic_action(traj, [(2, 1)]).real), tol))
    # overlap expansion: second-order Richardson
    worst = 0.0
    for _ in range(opts.draws or 20):
        N, M = [(1, 1), (2, 0), (2, 1), (0, 2), (2, 2)][rng.integers(5)]
        p = manifold.random_params(rng, 0.2)
        d = rng.normal(size=8)
        ratios = path.richardson_ratios(
            lambda e: coherent.diff_residual(p, path.displaced(p, d, e), N, M), 1e-3, 1)
        worst = max(worst, _ratio_residual(ratios))
    out.append(Check("overlap expansion ratio", "overlap is 1 + N zbar.dz + M wbar.dw to first order",
                     worst, 0.5))
    return out


def suite_su2(opts: SuiteOptions) -> list[Check]:
    rng = _rng(opts)
    tol = opts.tol.algebraic
    out = []
    for N in range(9):
        rep = su2.su2_generators(N)
        J3, Jp, Jm = rep.J[2], rep.raising, rep.lowering
        alg = max(np.abs(J3 @ Jp - Jp @ J3 - Jp).max(), np.abs(J3 @ Jm - Jm @ J3 + Jm).max(),
                  np.abs(Jp @ Jm - Jm @ Jp - 2 * J3).max())
        out.append(Check(f"algebra N={N}", "angular momentum commutation relations", alg, tol))
        out.append(Check(f"casimir N={N}", "Casimir N(N+2)/4",
                         np.abs(rep.casimir() - N * (N + 2) / 4 * np.eye(N + 1)).max(), tol))
        roi = su2.su2_roi_check(N, workers=opts.workers)
        out.append(Check(f"resolution of identity N={N}", "S^3 integral is identity/(N+1)",
                         np.abs(roi - np.eye(N + 1) / (N + 1)).max(), opts.tol.quadrature))
        ps = [su2.Su2CohParams(rng.uniform(0.05, 1.5), *rng.uniform(0, 2 * math.pi, 2))
              for _ in range(10)]
        out.append(Check(f"modulus equivalence N={N}", "Schwinger and Euler states, moduli",
                         max(su2.su2_modulus_check(p, N) for p in ps), tol))
        out.append(Check(f"phase-aligned equivalence N={N}",
                         "Schwinger and Euler states up to a global phase",
                         max(su2.su2_equivalence_check(p, N) for p in ps), tol))
        out.append(Check(f"lowering operator N={N}", "z1^N exp((z2/z1) J-)|j,j>",
                         max(su2.su2_lowering_check(p, N) for p in ps), tol))
    return out


SUITES: dict[str, Callable[[SuiteOptions], list[Check]]] = {
    "algebra": suite_algebra,
    "irreps": suite_irreps,
    "measures": suite_measures,
    "roi-zw": suite_roi_zw,
    "roi-zzbar": suite_roi_zzbar,
    "expectation": suite_expectation,
    "group-action": suite_group_action,
    "path": suite_path,
    "su2": suite_su2,
}


def run_suite(name: str, opts: SuiteOptions | None = None) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    return SUITES[name](opts or SuiteOptions())
