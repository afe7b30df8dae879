import numpy as np
import pytest

from pseudoanalytic import forcefree as ff
from pseudoanalytic.algebra import E0, E1, as_bq, qmul, unit, vector
from pseudoanalytic.calculus import Grid, ResidualReport, dyadic_grids, grid3
from pseudoanalytic.errors import GridMismatchError, NotInvertibleError
from pseudoanalytic.sampling import random_biquaternion, random_tuple

ALPHAS = [1.0, 1j, 1 + 1j]


def cube(n):
    return grid3([(0, 1)] * 3, [n] * 3)


def study(grids, fn):
    return ResidualReport.combine([ResidualReport.from_residual("r", fn(g), g) for g in grids])


def test_residual_examples():
    g = cube(9)
    const = np.broadcast_to(as_bq([1, 2j, 0, -1]), g.shape + (4,))
    assert ff.ff_residual(const, 0.0, g).max_norm == 0
    e1 = np.broadcast_to(unit(1), g.shape + (4,))
    assert ff.ff_residual(e1, 1.0, g).max_norm == pytest.approx(1.0)
    with pytest.raises(GridMismatchError):
        ff.ff_residual(np.zeros((9, 9, 4)), 1.0, g)


def test_exp_solution_values():
    g = cube(9)
    np.testing.assert_allclose(ff.exp_solution(0.0, 2, g), np.broadcast_to(unit(0), g.shape + (4,)))
    assert ff.exp_value(np.pi, 1, 0.5).isclose(E1)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("axis", [1, 2, 3])
def test_exp_solution_converges(alpha, axis):
    rep = study(dyadic_grids(cube(9)), lambda g: ff.ff_operator(ff.exp_solution(alpha, axis, g), alpha, g))
    assert rep.order >= 1.9


@pytest.mark.parametrize("alpha", ALPHAS)
def test_exp_inverse_identity(alpha, rng):
    for x in rng.uniform(-3, 3, 20):
        prod = ff.exp_value(alpha, 2, x) * ff.exp_value(alpha, 2, -x)
        assert prod.isclose(E0, 1e-12)


def test_quartet_from_b():
    g = cube(9)
    q = ff.quartet_from_b(np.broadcast_to(unit(0), g.shape + (4,)))
    assert q.min_abs_det == pytest.approx(1.0)
    b = ff.exp_solution(1 + 1j, 1, g)
    q = ff.quartet_from_b(b)
    assert q.min_abs_det == pytest.approx(1.0)
    with pytest.raises(NotInvertibleError):
        ff.quartet_from_b(np.broadcast_to(as_bq([1, 1j, 0, 0]), g.shape + (4,)))


def test_quartet_determinant_formula(rng):
    b = random_biquaternion(rng, 50)
    det = ff.component_det([qmul(b, unit(k)) for k in range(4)])
    np.testing.assert_allclose(det, ff.quartet_det_expected(b), rtol=1e-10)


def test_second_kind_examples():
    g = cube(9)
    one = np.broadcast_to(unit(0), g.shape + (4,))
    consts = [np.full(g.shape, c) for c in (1, 2j, -1, 0.5)]
    assert ff.second_kind_residual_ff(consts, one, g).max_norm == 0
    x1 = g.mesh()[0]
    z = np.zeros(g.shape)
    assert ff.second_kind_residual_ff([x1, z, z, z], one, g).max_norm == pytest.approx(1.0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_quotient_of_exp_solutions(alpha):
    pairs = [ff.quotient_check(ff.exp_solution(alpha, 1, g), ff.exp_solution(alpha, 2, g), alpha, g)
             for g in dyadic_grids(cube(9))]
    for k in range(2):
        assert ResidualReport.combine([p[k] for p in pairs]).passes()


@pytest.mark.parametrize("alpha", [1.0, 1j])
def test_quotient_non_separable(alpha):
    lam = as_bq([0.3, 0.2j, -0.1, 0.25])
    pairs = [ff.quotient_check(ff.exp_solution(alpha, 1, g),
                               ff.exp_solution(alpha, 2, g) + qmul(ff.exp_solution(alpha, 3, g), lam),
                               alpha, g)
             for g in dyadic_grids(cube(17))]
    inverse = ResidualReport.combine([p[1] for p in pairs])
    assert inverse.order >= 1.9


def test_quotient_trivial_cases():
    g = cube(9)
    b = ff.exp_solution(1.0, 3, g)
    r1, r2 = ff.quotient_check(b, b, 1.0, g)
    assert r1.max_norm < 1e-13 and r2.max_norm < 1e-13
    one = np.broadcast_to(unit(0), g.shape + (4,))
    e3 = np.broadcast_to(unit(3), g.shape + (4,))
    r1, r2 = ff.quotient_check(one, e3, 0.0, g)
    assert r1.max_norm == 0 and r2.max_norm == 0
    with pytest.raises(NotInvertibleError):
        ff.quotient_check(np.broadcast_to(as_bq([1, 1j, 0, 0]), g.shape + (4,)), one, 0.0, g)


def test_right_module(rng):
    for lam in random_biquaternion(rng, 10):
        rep = study(dyadic_grids(cube(9)),
                    lambda g: ff.ff_operator(qmul(ff.exp_solution(1 + 1j, 2, g), lam), 1 + 1j, g))
        assert rep.passes()


@pytest.mark.parametrize("alpha", [1.0, 1 + 1j])
def test_quartet_equivalence_random_tuples(alpha, rng):
    g = cube(33)
    b = ff.exp_solution(alpha, 1, g)
    for _ in range(3):
        phis = random_tuple(rng, g, 4, complex_valued=True, freq=(0.5, 2.0))
        eq = ff.quartet_equivalence(phis, b, alpha, g)
        assert eq.holds and eq.defect > 0.05 * eq.bound


def test_biquaternion_alpha_identity(rng):
    # the splitting holds for any b and any left multiplier; only FD product defects remain
    g0 = cube(9)
    alpha = random_biquaternion(rng)
    modes = [random_tuple(np.random.default_rng(1), g, 4, complex_valued=True, freq=(0.5, 1.5))
             for g in dyadic_grids(g0)]
    rep = ResidualReport.combine([
        ResidualReport.from_residual("id", ff.splitting_defect(
            phis, ff.exp_solution(0.7, 2, g) + 0.3 * unit(1), alpha, g), g)
        for phis, g in zip(modes, dyadic_grids(g0))])
    assert rep.max_norm < 0.05


def test_alpha_field_forms():
    g = cube(9)
    B = ff.exp_solution(1.0, 1, g)
    a_scalar = ff.ff_operator(B, 2.0, g)
    a_field = ff.ff_operator(B, np.full(g.shape, 2.0), g)
    a_bq = ff.ff_operator(B, ff.Biquaternion(2.0), g)
    np.testing.assert_allclose(a_field, a_scalar)
    np.testing.assert_allclose(a_bq, a_scalar)
    assert ff.AlphaField(unit(2)).is_biquaternion
    assert not ff.AlphaField(np.ones(g.shape)).is_biquaternion
    with pytest.raises(GridMismatchError):
        ff.ff_operator(B, np.ones((3, 3)), g)
    with pytest.raises(ValueError):
        ff.AlphaField(np.nan)


def test_divergence():
    reps = study(dyadic_grids(cube(9)),
                 lambda g: ff.divergence_operator(ff.exp_solution(1.0, 2, g), 1.0, g))
    assert reps.order >= 1.9
    g = cube(9)
    x = g.mesh()
    # a classical purely vectorial force-free field, rot B = -B
    B = vector(np.cos(x[2]), np.sin(x[2]), 0)
    assert ff.divergence_residual(B, 1.0, g).max_norm < 1e-13
    B2 = qmul(ff.exp_solution(1.0, 3, g), unit(1))
    np.testing.assert_allclose(B2, B, atol=1e-15)
