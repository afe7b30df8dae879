import numpy as np
import pytest

from pseudoanalytic import dirac as dr
from pseudoanalytic.algebra import as_bq, qmul, unit
from pseudoanalytic.calculus import Grid, ResidualReport, grid3
from pseudoanalytic.errors import DependentSetError, GridMismatchError, StepTooLargeError
from pseudoanalytic.sampling import random_biquaternion, random_tuple

DATA = dr.DiracData(1.0, 0.5, 0.3)


def line(n):
    return Grid.uniform([(0, 1)], [n], ("x1",))


def test_data_validation_and_b():
    np.testing.assert_allclose(DATA.b(), [0, -0.8j, -1.0, 0])
    assert DATA.b((3, 2)).shape == (3, 2, 4)
    with pytest.raises(ValueError):
        dr.DiracData(-1.0, 0.0)
    with pytest.raises(ValueError):
        dr.DiracData(1.0, 0.0, a=[1.0, 0, 0, 0])
    with pytest.raises(ValueError):
        dr.DiracData(1.0, 0.0, phi=1j)


def test_residual_examples():
    g = grid3([(0, 1)] * 3, [9] * 3)
    W = np.broadcast_to(as_bq([1, 2j, 0, 1]), g.shape + (4,))
    assert dr.dirac_residual(W, dr.DiracData(0, 0), g).max_norm == 0
    one = np.broadcast_to(unit(0), g.shape + (4,))
    assert dr.dirac_residual(one, dr.DiracData(1.0, 0.0), g).max_norm == pytest.approx(1.0)
    with pytest.raises(GridMismatchError):
        dr.dirac_residual(np.zeros((9, 4)), DATA, g)


def test_magnetic_potential_from_the_left():
    g = grid3([(0, 1)] * 3, [5] * 3)
    a = as_bq([0, 0.5, -1j, 0])
    W = np.broadcast_to(as_bq([1, 0, 2, 0]), g.shape + (4,))
    r = dr.dirac_operator(W, dr.DiracData(0.0, 0.0, a=a), g)
    np.testing.assert_allclose(r, np.broadcast_to(qmul(a, W[0, 0, 0]), r.shape), atol=1e-15)


def test_oracle_trivial_case():
    q = dr.ode_oracle_solutions(dr.DiracData(0.0, 0.0), (0, 1), 11)
    for k in range(4):
        np.testing.assert_allclose(q.trajectories[k], np.broadcast_to(unit(k), (11, 4)))


def test_oracle_against_matrix_exponential():
    from scipy.linalg import expm

    # W' = e1 W b is linear; as a 4x4 complex system it is solved by expm
    b = DATA.b()
    A = np.stack([qmul(qmul(unit(1), unit(k)), b) for k in range(4)], axis=-1)
    q = dr.ode_oracle_solutions(DATA, (0, 1), 21)
    for k in range(4):
        exact = np.stack([expm(A * x) @ unit(k) for x in q.x])
        np.testing.assert_allclose(q.trajectories[k], exact, atol=1e-10)


def test_oracle_residual_converges():
    reps = [[], [], [], []]
    for n in (17, 33, 65):
        g = line(n)
        for k, F in enumerate(dr.ode_oracle_solutions(DATA, (0, 1), n).on_grid(g)):
            reps[k].append(dr.dirac_residual(F, DATA, g))
    for r in reps:
        assert ResidualReport.combine(r).order >= 1.9


def test_integrator_order():
    order, diffs = dr.integrator_order(DATA, (0, 1))
    assert order >= 3.9
    assert diffs[0] / diffs[1] == pytest.approx(16, rel=0.05)


def test_step_too_large():
    with pytest.raises(StepTooLargeError):
        dr.ode_oracle_solutions(dr.DiracData(50.0, 0.0), (0, 1), 3, substeps=1)


def test_quartet_independence():
    assert dr.quartet_independence([unit(k) for k in range(4)]) == pytest.approx(1.0)
    assert dr.quartet_independence([unit(0), unit(1), unit(2), unit(0)]) == 0
    q = dr.ode_oracle_solutions(DATA, (0, 1), 201)
    assert dr.quartet_independence(list(q.trajectories)) > 0.1
    # the trace of W -> e1 W b vanishes, so the fundamental determinant stays 1
    np.testing.assert_allclose(np.abs(dr.component_det(list(q.trajectories))), 1.0, atol=1e-9)


def test_second_kind_examples():
    g = grid3([(0, 1)] * 3, [9] * 3)
    members = [np.broadcast_to(unit(k), g.shape + (4,)) for k in range(4)]
    consts = [np.full(g.shape, c) for c in (1, 1j, 2, -1)]
    assert dr.second_kind_residual_dirac(consts, members, DATA, g).max_norm == 0
    z = np.zeros(g.shape)
    rep = dr.second_kind_residual_dirac([g.mesh()[0], z, z, z], members, dr.DiracData(0, 0), g)
    assert rep.max_norm == pytest.approx(1.0)
    with pytest.raises(DependentSetError):
        dr.second_kind_residual_dirac(consts, members[:3] + members[:1], DATA, g)


def test_equivalence_random_tuples(rng):
    g = grid3([(0, 1)] * 3, [33] * 3)
    members = dr.ode_oracle_solutions(DATA, (0, 1), 33).on_grid(g)
    for _ in range(5):
        phis = random_tuple(rng, g, 4, complex_valued=True, freq=(0.5, 2.0))
        eq = dr.quartet_equivalence(phis, members, DATA, g)
        assert eq.holds and eq.defect > 0.05 * eq.bound


def test_right_multiplication_covariance(rng):
    b, c, q = random_biquaternion(rng, 3)
    lhs = qmul(qmul(q, c), b)
    np.testing.assert_allclose(lhs, qmul(q, qmul(c, b)), atol=1e-12)


def test_on_grid_requires_matching_nodes():
    q = dr.ode_oracle_solutions(DATA, (0, 1), 9)
    with pytest.raises(GridMismatchError):
        q.on_grid(line(17))
