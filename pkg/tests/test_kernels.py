import numpy as np
import pytest
from scipy.integrate import cumulative_simpson

from pseudoanalytic import _backend, _kernels_py

try:
    from pseudoanalytic import _kernels
except ImportError:
    _kernels = None

BACKENDS = [pytest.param(_kernels_py, id="numpy")]
if _kernels is not None:
    BACKENDS.append(pytest.param(_kernels, id="cython"))


def reference_qmul(p, q):
    p0, pv = p[:, 0], p[:, 1:]
    q0, qv = q[:, 0], q[:, 1:]
    out = np.empty_like(p)
    out[:, 0] = p0 * q0 - np.sum(pv * qv, axis=1)
    out[:, 1:] = p0[:, None] * qv + q0[:, None] * pv + np.cross(pv, qv)
    return out


@pytest.mark.parametrize("mod", BACKENDS)
def test_qmul_matches_vector_formula(mod, rng):
    p = rng.normal(size=(257, 4)) + 1j * rng.normal(size=(257, 4))
    q = rng.normal(size=(257, 4)) + 1j * rng.normal(size=(257, 4))
    np.testing.assert_allclose(np.asarray(mod.qmul(p, q)), reference_qmul(p, q), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("mod", BACKENDS)
@pytest.mark.parametrize("n", [3, 4, 5, 10, 101, 2000])
def test_cumsimpson_matches_scipy(mod, n, rng):
    h = 0.37
    y = rng.normal(size=n)
    ours = np.asarray(mod.cumsimpson(y, h))
    ref = np.concatenate([[0.0], cumulative_simpson(y, dx=h)])
    assert ours[0] == 0.0
    # even nodes use the composite rule, so they must agree with scipy there
    np.testing.assert_allclose(ours[::2], ref[::2], rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("mod", BACKENDS)
def test_cumsimpson_exact_on_cubics(mod):
    x = np.linspace(0, 2, 41)
    y = 1 + x - 3 * x ** 2 + 0.5 * x ** 3
    exact = x + x ** 2 / 2 - x ** 3 + x ** 4 / 8
    np.testing.assert_allclose(np.asarray(mod.cumsimpson(y, x[1] - x[0]))[::2], exact[::2], atol=1e-12)
    # odd nodes use a one-interval rule that is exact for quadratics
    y2 = 2 - x + x ** 2
    exact2 = 2 * x - x ** 2 / 2 + x ** 3 / 3
    np.testing.assert_allclose(np.asarray(mod.cumsimpson(y2, x[1] - x[0])), exact2, atol=1e-12)


@pytest.mark.parametrize("mod", BACKENDS)
def test_cumsimpson_fourth_order(mod):
    errs = []
    for n in (33, 65, 129):
        x = np.linspace(0, 1, n)
        errs.append(np.max(np.abs(np.asarray(mod.cumsimpson(np.exp(x), x[1] - x[0])) - (np.exp(x) - 1))))
    assert errs[0] / errs[1] > 14 and errs[1] / errs[2] > 14


def test_backends_agree(rng):
    if _kernels is None:
        pytest.skip("compiled extension not built")
    y = rng.normal(size=1001)
    np.testing.assert_allclose(_kernels.cumsimpson(y, 0.1), _kernels_py.cumsimpson(y, 0.1), rtol=1e-13, atol=1e-13)


def test_backend_selection_is_reported():
    assert _backend.BACKEND in ("cython", "python")
