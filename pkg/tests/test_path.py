import math

import numpy as np
import pytest

from su3coh.coherent import coherent_zw
from su3coh.manifold import CohParams, make_w, make_z, random_params
from su3coh.path import (HeisenbergModel, LinearHamiltonian, Trajectory, discretized_action,
                         displaced, energy_heisenberg, energy_heisenberg_exact, energy_linear,
                         energy_linear_matrix, expectation_vector, heisenberg_energy_functional,
                         kinetic_action, overlap_phase, richardson_ratios, short_time_check,
                         short_time_kernel)

TOP = CohParams(math.pi / 2, 0.0, math.pi / 2, beta=(0.0, math.pi))
UP = CohParams(math.pi / 2, 0.0, 0.0)            # z = (1, 0, 0)
SIDE = CohParams(math.pi / 2, math.pi / 2, 0.0)  # z = (0, 1, 0)
PAIR = np.array([[0.0, 1.0], [1.0, 0.0]])


def test_linear_energy_examples(rng):
    assert energy_linear(LinearHamiltonian.single(3), TOP, 2, 1) == pytest.approx(1.5)
    assert energy_linear(LinearHamiltonian((0.0,) * 8), random_params(rng), 1, 1) == 0
    h = LinearHamiltonian(tuple(rng.normal(size=8)))
    p = random_params(rng)
    assert abs(energy_linear(h, p, 1, 1) - energy_linear_matrix(h, p, 1, 1)) < 1e-11


def test_linear_hamiltonian_validation():
    with pytest.raises(ValueError):
        LinearHamiltonian((1.0, 2.0))
    with pytest.raises(ValueError):
        LinearHamiltonian((1j,) + (0,) * 7)
    h = LinearHamiltonian.single(8, 2.0)
    assert np.allclose(h.fundamental(), np.diag([1, 1, -2]) / math.sqrt(3))


def test_heisenberg_two_site_values():
    model = HeisenbergModel(((1, 0), (1, 0)), PAIR)
    # hand evaluation over lam^3, lam^8: 1/4 + 1/12 and -1/4 + 1/12
    assert energy_heisenberg(model, [UP, UP]) == pytest.approx(1 / 3)
    assert energy_heisenberg(model, [UP, SIDE]) == pytest.approx(-1 / 6)
    assert energy_heisenberg_exact(model, [UP, UP]) == pytest.approx(1 / 3)
    assert energy_heisenberg_exact(model, [UP, SIDE]) == pytest.approx(-1 / 6)


def test_heisenberg_zero_coupling(rng):
    model = HeisenbergModel(((1, 1), (2, 0)), np.zeros((2, 2)))
    assert energy_heisenberg(model, [random_params(rng), random_params(rng)]) == 0


@pytest.mark.parametrize("labels", [((1, 0), (0, 1)), ((1, 1), (1, 1)),
                                    ((1, 0), (1, 1), (0, 1)), ((1, 1), (1, 0), (1, 1))])
def test_heisenberg_matches_product_state(rng, labels):
    n = len(labels)
    J = np.triu(rng.normal(size=(n, n)), 1)
    model = HeisenbergModel(labels, J + J.T)
    for _ in range(3):
        config = [random_params(rng, 0.0) for _ in labels]
        assert abs(energy_heisenberg(model, config) - energy_heisenberg_exact(model, config)) < 1e-10


def test_heisenberg_validation(rng):
    with pytest.raises(ValueError):
        HeisenbergModel(((1, 0), (1, 0)), np.array([[0, 1], [2, 0]]))
    with pytest.raises(ValueError):
        HeisenbergModel(((1, 0), (1, 0)), np.eye(2))
    with pytest.raises(ValueError):
        HeisenbergModel(((1, 0),), PAIR)
    model = HeisenbergModel(((1, 0), (1, 0)), PAIR)
    with pytest.raises(ValueError):
        energy_heisenberg(model, [UP])


def test_expectation_vector(rng):
    p = random_params(rng)
    v = coherent_zw(p, 2, 1).vector.to_dense()
    from su3coh.algebra import q_operator
    direct = [np.vdot(v, q_operator(a, 2, 1) @ v).real for a in range(1, 9)]
    assert np.allclose(expectation_vector(p.z, p.w, 2, 1), direct, atol=1e-13)


def _random_trajectory(rng, slices, sites):
    rows = [[random_params(rng) for _ in range(sites)] for _ in range(slices + 1)]
    return Trajectory.from_params(rows, 2.0)


def test_constant_trajectory_zero_action():
    traj = Trajectory.from_params([[TOP]] * 5, 1.0)
    assert discretized_action(traj, [(2, 1)]) == 0


def test_kinetic_action_imaginary(rng):
    for sites, labels in [(1, [(1, 1)]), (2, [(2, 0), (1, 2)])]:
        traj = _random_trajectory(rng, 7, sites)
        S = discretized_action(traj, labels)
        assert abs(S.real) < 1e-15 and abs(S.imag) > 1e-3


def test_energy_term(rng):
    model = HeisenbergModel(((1, 0), (1, 0)), PAIR)
    traj = Trajectory.from_params([[UP, UP]] * 4, 3.0)
    S = discretized_action(traj, model.labels, heisenberg_energy_functional(model))
    # eps * n_slices * E = T * E
    assert S == pytest.approx(3.0 / 3)


def test_trajectory_validation():
    z = np.zeros((3, 1, 3), complex)
    with pytest.raises(ValueError):
        Trajectory(z, z, 1.0)
    good = Trajectory.from_params([[TOP]] * 3, 1.0)
    with pytest.raises(ValueError):
        Trajectory(good.z, good.w, 0.0)
    with pytest.raises(ValueError):
        Trajectory(good.z[:1], good.w[:1], 1.0)
    assert good.eps == pytest.approx(0.5) and good.n_slices == 2 and good.sites == 1
    with pytest.raises(ValueError):
        kinetic_action(good, [(1, 0), (1, 0)])


def _loop(n, center=(0.7, 0.5), radius=0.05, alpha2=0.0):
    """Small closed loop in (theta, phi, alpha2) for an (N, 0) site."""
    rows = []
    for k in range(n + 1):
        t = 2 * math.pi * k / n
        th = center[0] + radius * math.cos(t)
        a2 = alpha2 + 4 * radius * math.sin(t)
        rows.append([CohParams(th, center[1], 0.3, (0.0, a2, 0.0))])
    return Trajectory.from_params(rows, 1.0)


def test_loop_kinetic_matches_overlap_phase():
    errs = []
    for n in (16, 32, 64):
        traj = _loop(n)
        errs.append(abs(kinetic_action(traj, [(1, 0)]).imag + overlap_phase(traj, [(1, 0)])))
    assert errs[0] / errs[1] == pytest.approx(4, abs=0.5)
    assert errs[1] / errs[2] == pytest.approx(4, abs=0.5)
    # and the enclosed phase is nonzero
    assert abs(overlap_phase(_loop(64), [(1, 0)])) > 1e-4


def test_gauge_covariance():
    # z -> e^{i g(tau)} z shifts the kinetic action by -i N (g(T) - g(0))
    n, N = 200, 2
    base = [CohParams(0.6 + 0.2 * k / n, 0.4, 0.3, (0.1, 0.2, 0.3)) for k in range(n + 1)]
    g = [0.9 * (k / n) ** 2 for k in range(n + 1)]
    gauged = [CohParams(p.theta, p.phi, p.chi, tuple(a + gk for a in p.alpha), p.beta)
              for p, gk in zip(base, g)]
    S0 = kinetic_action(Trajectory.from_params([[p] for p in base], 1.0), [(N, 0)])
    S1 = kinetic_action(Trajectory.from_params([[p] for p in gauged], 1.0), [(N, 0)])
    assert abs((S1 - S0) - (-1j * N * (g[-1] - g[0]))) < 1e-4


@pytest.mark.parametrize("N,M", [(1, 0), (1, 1)])
def test_short_time_ratio(rng, N, M):
    for h in (LinearHamiltonian.single(3), LinearHamiltonian(tuple(rng.normal(size=8)))):
        p = random_params(rng, 0.2)
        d = rng.normal(size=8)
        ratios = richardson_ratios(
            lambda e: short_time_check(h, p, displaced(p, d, e), e, N, M), 1e-2)
        assert all(abs(r - 4) < 0.5 for r in ratios)


def test_short_time_literal_order_is_first_order_only(rng):
    h = LinearHamiltonian.single(3)
    p = random_params(rng, 0.2)
    d = rng.normal(size=8)
    ratios = richardson_ratios(
        lambda e: short_time_check(h, p, displaced(p, d, e), e, 1, 1, order="bra"), 1e-2)
    assert all(abs(r - 2) < 0.2 for r in ratios)


def test_short_time_trivial_and_no_hamiltonian(rng):
    p = random_params(rng)
    exact, approx = short_time_kernel(LinearHamiltonian.single(3), p, p, 0.0, 1, 1)
    assert exact == pytest.approx(1) and approx == pytest.approx(1)
    zero = LinearHamiltonian((0.0,) * 8)
    q = displaced(p, rng.normal(size=8), 1e-3)
    from su3coh.coherent import diff_residual
    # with H = 0 the kernel check is the overlap expansion up to exp vs 1 + x
    assert short_time_check(zero, p, q, 0.3, 2, 1) < 1e-4
    assert diff_residual(p, q, 2, 1) < 1e-4
    with pytest.raises(ValueError):
        short_time_check(zero, p, q, 0.1, 1, 1, order="sideways")


def test_displaced_clips_radial_angles():
    q = displaced(TOP, np.ones(8), 1.0)
    assert q.theta == pytest.approx(math.pi / 2)
