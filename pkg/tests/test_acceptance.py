"""Acceptance criteria, each evaluated at its stated tolerance."""
import math
import time

import numpy as np
import pytest

from su3coh import algebra, coherent, irreps, manifold, path, su2
from su3coh.fock import enumerate_sector
from su3coh.verify import _monomials_degree2

SECTORS = [(N, M) for N in range(4) for M in range(4)]
SEED = 7


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def test_criterion_01_closure(acceptance):
    start = time.perf_counter()
    worst = max(algebra.closure_residual(algebra.q_operators(N, M)) for N, M in SECTORS)
    elapsed = time.perf_counter() - start
    ok = acceptance(1, "algebra closure, N,M <= 3", worst < 1e-11 and elapsed < 60,
                    f"max residual {worst:.2e}, {elapsed:.1f} s")
    assert ok


def _adjoint_explicit_states() -> np.ndarray:
    index = {s.label(): k for k, s in enumerate(enumerate_sector(1, 1).states)}
    rows = [
        {"100;100": 1 / math.sqrt(2), "010;010": -1 / math.sqrt(2)},
        {"100;100": 1 / math.sqrt(6), "010;010": 1 / math.sqrt(6), "001;001": -2 / math.sqrt(6)},
        {"100;010": 1}, {"010;100": 1}, {"100;001": 1},
        {"001;100": 1}, {"010;001": 1}, {"001;010": 1},
    ]
    V = np.zeros((len(index), 8))
    for k, row in enumerate(rows):
        for lab, c in row.items():
            V[index[lab], k] = c
    return V


def test_criterion_02_dimension(acceptance):
    bad = []
    for N, M in SECTORS:
        rank, _ = irreps.span_rank(np.asarray(irreps.traceless_family(N, M)), 1e-9)
        if rank != (N + 1) * (M + 1) * (N + M + 2) // 2:
            bad.append((N, M, rank))
    V = _adjoint_explicit_states()
    explicit = np.abs(V @ V.T - irreps.irrep_projector(1, 1)).max()
    ok = acceptance(2, "rank of traceless span equals D(N,M)", not bad and explicit < 1e-12,
                    f"mismatches {bad}, explicit (1,1) states vs projector {explicit:.1e}")
    assert ok


def test_criterion_03_tracelessness(acceptance):
    worst = 0.0
    for N, M in SECTORS:
        for occ in enumerate_sector(N, M):
            worst = max(worst, irreps.verify_tracelessness(irreps.traceless_state(occ)))
            if N + 1 <= irreps.MAX_QUANTA and M + 1 <= irreps.MAX_QUANTA:
                worst = max(worst, irreps.trace_relation_residual(occ))
    ok = acceptance(3, "tracelessness for every leading occupation", worst < 1e-11,
                    f"max residual {worst:.2e}")
    assert ok


def test_criterion_04_measures(acceptance, rng):
    norm = 0.0
    for space in ("s3", "s5", "su3"):
        for deg in (coherent.default_degree(1, 0), coherent.default_degree(1, 1)):
            total = manifold.integrate(lambda b: np.ones(len(b)), deg, space)
            norm = max(norm, abs(total - 1))
    grid = manifold.make_grid(2, "su3")
    inv = max(manifold.invariance_check(manifold.random_su3(rng), _monomials_degree2, 2, grid=grid)
              for _ in range(5))
    ok = acceptance(4, "measures normalized, Haar invariance", norm < 1e-13 and inv < 1e-9,
                    f"normalization {norm:.1e}, invariance {inv:.1e}")
    assert ok


def test_criterion_05_roi_zw(acceptance):
    idem = trace = 0.0
    start = time.perf_counter()
    for N, M in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]:
        rep = coherent.roi_zw(N, M)
        idem = max(idem, rep.idempotency)
        trace = max(trace, abs(rep.trace - irreps.dimension(N, M)))
    elapsed = time.perf_counter() - start
    ok = acceptance(5, "(z,w) resolution of identity is the irrep projector",
                    idem < 1e-8 and trace < 1e-6,
                    f"||P^2-P|| {idem:.1e}, |tr P - D| {trace:.1e}, {elapsed:.0f} s")
    assert ok


def test_criterion_06_roi_zzbar(acceptance):
    worst = 0.0
    details = []
    for N, M in [(1, 0), (1, 1), (2, 1)]:
        rep = coherent.roi_zzbar(N, M)
        worst = max(worst, rep.relative_error)
        details.append(f"C({N},{M})={rep.measured_constant:.6g}")
    exact_11 = coherent.zzbar_constant(1, 1)
    ok = acceptance(6, "(z,zbar) constant 2/(N! M! (N+M+2)!)",
                    worst < 1e-8 and abs(exact_11 - 1 / 12) < 1e-15,
                    f"max relative error {worst:.1e}; " + ", ".join(details))
    assert ok


def test_criterion_07_expectation(acceptance, rng):
    labels = [(N, M) for N in range(3) for M in range(3)]
    worst = 0.0
    for _ in range(100):
        N, M = labels[rng.integers(len(labels))]
        a = int(rng.integers(1, 9))
        p = manifold.random_params(rng, 0.0)
        state = coherent.coherent_zw(p, N, M)
        worst = max(worst, abs(coherent.expectation_formula(p.z, p.w, N, M, a)
                               - coherent.expectation_matrix_element(state, a)))
    vanish = 0.0
    for _ in range(100):
        z = manifold.random_params(rng, 0.0).z
        for K in (1, 2):
            state = coherent.coherent_zzbar(z, K, K)
            for a in range(1, 9):
                vanish = max(vanish, abs(coherent.expectation_zzbar(z, K, K, a)),
                             abs(coherent.expectation_zzbar_matrix(state, a)))
    ok = acceptance(7, "coherent-state expectation values", worst < 1e-11 and vanish < 1e-11,
                    f"(z,w) {worst:.1e}, self-conjugate (z,zbar) {vanish:.1e}")
    assert ok


def test_criterion_08_group_action(acceptance, rng):
    """Single exponential of the lowering generators applied to the highest weight.

    Evaluated literally.  Y = (z2/z1)(Q1 - iQ2) + (z3/z1)(Q4 - iQ5) and
    Z = -(w3/w2)(Q6 + iQ7) do not commute, so exp(Y + Z) misses the
    -[Y, Z]/2 correction and this criterion fails at O(1).  The ordered
    product exp(Y) exp(Z) is reported alongside and is exact.
    """
    draws = {lab: [manifold.random_params(rng) for _ in range(50)]
             for lab in [(1, 0), (1, 1), (2, 1)]}
    literal = {lab: max(coherent.group_action_from_highest(p, *lab, "literal") for p in ps)
               for lab, ps in draws.items()}
    ordered = max(coherent.group_action_from_highest(p, *lab, "ordered")
                  for lab, ps in draws.items() for p in ps)
    worst = max(literal.values())
    per = ", ".join(f"{lab}: {r:.2f}" for lab, r in literal.items())
    ok = acceptance(8, "group action exp(Y + Z) on the highest weight", worst < 1e-10,
                    f"literal max residual {per}; ordered exp(Y)exp(Z) {ordered:.1e}")
    assert ordered < 1e-10
    assert ok, "single-exponential form does not reproduce the coherent state (see README)"


def test_criterion_09_overlap_differential(acceptance, rng):
    # (1,0) and (0,1) overlaps are exactly linear in dp, so no second-order residual exists
    labels = [(N, M) for N in range(3) for M in range(3) if N + M >= 2]
    ratios = []
    for _ in range(20):
        N, M = labels[rng.integers(len(labels))]
        p = manifold.random_params(rng, 0.2)
        d = rng.normal(size=8)
        ratios += path.richardson_ratios(
            lambda e: coherent.diff_residual(p, path.displaced(p, d, e), N, M), 1e-3, 1)
    worst = max(abs(r - 4) for r in ratios)
    ok = acceptance(9, "overlap differential is second order", worst < 0.5,
                    f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]")
    assert ok


def test_criterion_10_short_time(acceptance, rng):
    hams = {"Q3": path.LinearHamiltonian.single(3),
            "random": path.LinearHamiltonian(tuple(rng.normal(size=8)))}
    ratios = []
    for N, M in [(1, 0), (1, 1)]:
        for h in hams.values():
            p = manifold.random_params(rng, 0.2)
            d = rng.normal(size=8)
            ratios += path.richardson_ratios(
                lambda e: path.short_time_check(h, p, path.displaced(p, d, e), e, N, M), 1e-2)
    worst = max(abs(r - 4) for r in ratios)
    ok = acceptance(10, "short-time kernel residual is O(eps^2)", worst < 0.5,
                    f"ratios in [{min(ratios):.3f}, {max(ratios):.3f}]")
    assert ok


def test_criterion_11_heisenberg(acceptance, rng):
    up = manifold.CohParams(math.pi / 2, 0.0, 0.0)
    side = manifold.CohParams(math.pi / 2, math.pi / 2, 0.0)
    pair = path.HeisenbergModel(((1, 0), (1, 0)), np.array([[0.0, 1.0], [1.0, 0.0]]))
    derived = max(abs(path.energy_heisenberg(pair, [up, up]) - 1 / 3),
                  abs(path.energy_heisenberg(pair, [up, side]) + 1 / 6))
    worst = 0.0
    small = [(1, 0), (0, 1), (1, 1)]
    for sites in (2, 3):
        for _ in range(5):
            labels = tuple(small[k] for k in rng.integers(3, size=sites))
            J = np.triu(rng.normal(size=(sites, sites)), 1)
            model = path.HeisenbergModel(labels, J + J.T)
            config = [manifold.random_params(rng, 0.0) for _ in labels]
            worst = max(worst, abs(path.energy_heisenberg(model, config)
                                   - path.energy_heisenberg_exact(model, config)))
    ok = acceptance(11, "Heisenberg functional vs product-state matrix element",
                    worst < 1e-10 and derived < 1e-10,
                    f"random models {worst:.1e}, two-site 1/3 and -1/6 {derived:.1e}")
    assert ok


def test_criterion_12_su2(acceptance, rng):
    casimir = roi = modulus = 0.0
    for N in range(9):
        rep = su2.su2_generators(N)
        casimir = max(casimir, np.abs(rep.casimir() - N * (N + 2) / 4 * np.eye(N + 1)).max())
        roi = max(roi, np.abs(su2.su2_roi_check(N) - np.eye(N + 1) / (N + 1)).max())
        for _ in range(10):
            p = su2.Su2CohParams(rng.uniform(0, math.pi / 2), *rng.uniform(0, 2 * math.pi, 2))
            modulus = max(modulus, su2.su2_modulus_check(p, N))
    ok = acceptance(12, "SU(2) regression, N <= 8",
                    casimir < 1e-11 and roi < 1e-9 and modulus < 1e-11,
                    f"Casimir {casimir:.1e}, ROI {roi:.1e}, modulus {modulus:.1e}")
    assert ok
