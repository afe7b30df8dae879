"""Formal powers of the hyperbolic Vekua equation with generating pair (f, j/f).

For a positive ``f(xi)`` the equation

    d_zbar w - (f_zbar / f) conj(w) = 0,   d_zbar = (d_xi - j d_t) / 2,

has the generating pair ``(f, j/f)``. Its formal powers ``Z^(n)(a, 0, z)``
centered at ``z = 0`` are assembled from the iterated integrals

    X^(n)  = n int_0^xi X^(n-1)  / f^2   (n odd),   n int_0^xi X^(n-1)  f^2  (n even)
    X~^(n) = n int_0^xi X~^(n-1) f^2     (n odd),   n int_0^xi X~^(n-1) / f^2 (n even)

with ``X^(0) = X~^(0) = 1`` and ``f`` rescaled so that ``f(0) = 1``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from . import _backend
from .algebra import Hyperbolic, hyp_conj
from .calculus import ResidualReport, dbar_hyperbolic, check_field
from .errors import DegreeOutOfRangeError, NonPositiveFError, OutOfDomainError

DEFAULT_N_MAX = 6
DEFAULT_SAMPLES = 2001


@dataclass(frozen=True)
class HyperbolicPoint:
    xi: float
    t: float

    @property
    def z(self):
        return Hyperbolic(self.xi, self.t)


class FormalPowerTable:
    """Sampled ``X^(n)``, ``X~^(n)`` on a uniform xi-grid starting at 0.

    ``f`` and ``df`` are stored normalized (``f[0] == 1``); ``f_scale`` is the
    original ``f(0)``.
    """

    def __init__(self, xi, f, df, X, Xt, f_scale=1.0):
        self.xi = xi
        self.f = f
        self.df = df
        self.X = X
        self.Xt = Xt
        self.f_scale = float(f_scale)
        self.n_max = X.shape[0] - 1
        self._f = CubicHermiteSpline(xi, f, df)
        f2 = f * f
        weight = {True: 1.0 / f2, False: f2}  # keyed by "n is odd"
        self._X = [_interp(xi, X[0], np.zeros_like(xi))]
        self._Xt = [_interp(xi, Xt[0], np.zeros_like(xi))]
        for n in range(1, self.n_max + 1):
            odd = n % 2 == 1
            self._X.append(_interp(xi, X[n], n * X[n - 1] * weight[odd]))
            self._Xt.append(_interp(xi, Xt[n], n * Xt[n - 1] * weight[not odd]))

    @property
    def xi_max(self):
        return float(self.xi[-1])

    def _check(self, n, xi):
        if not 0 <= n <= self.n_max:
            raise DegreeOutOfRangeError(f"degree {n} outside 0..{self.n_max}")
        xi = np.asarray(xi, dtype=float)
        slack = 1e-12 * (1.0 + self.xi_max)
        if np.any(xi < -slack) or np.any(xi > self.xi_max + slack):
            raise OutOfDomainError(f"xi outside [0, {self.xi_max}]")
        return np.clip(xi, 0.0, self.xi_max)

    def f_at(self, xi):
        return self._f(self._check(0, xi))

    def df_at(self, xi):
        return self._f(self._check(0, xi), 1)

    def X_at(self, n, xi):
        return self._X[n](self._check(n, xi))

    def Xt_at(self, n, xi):
        return self._Xt[n](self._check(n, xi))


def _interp(xi, y, dy):
    return CubicHermiteSpline(xi, y, dy)


def build_x_tables(f, xi, n_max=DEFAULT_N_MAX, df=None):
    """Run the ``X``/``X~`` recursion by cumulative Simpson quadrature.

    ``xi`` must be uniform and start at 0. ``df`` (samples of f') is optional;
    without it a cubic spline derivative is used.
    """
    xi = np.asarray(xi, dtype=float)
    f = np.asarray(f, dtype=float)
    if xi.ndim != 1 or xi.shape != f.shape or xi.size < 3:
        raise ValueError("xi and f must be 1-D arrays of equal length >= 3")
    h = xi[1] - xi[0]
    if abs(xi[0]) > 1e-14 or not np.allclose(np.diff(xi), h, rtol=1e-9, atol=0):
        raise ValueError("xi must be a uniform grid starting at 0")
    if n_max < 0:
        raise DegreeOutOfRangeError("n_max must be >= 0")
    if not np.all(np.isfinite(f)) or np.any(f <= 0):
        raise NonPositiveFError("f must be positive on the whole grid")
    if df is None:
        df = CubicSpline(xi, f).derivative()(xi)
    scale = f[0]
    f = f / scale
    df = np.asarray(df, dtype=float) / scale

    f2 = f * f
    inv_f2 = 1.0 / f2
    X = np.empty((n_max + 1, xi.size))
    Xt = np.empty((n_max + 1, xi.size))
    X[0] = 1.0
    Xt[0] = 1.0
    for n in range(1, n_max + 1):
        if n % 2:
            X[n] = n * _backend.cumsimpson(np.ascontiguousarray(X[n - 1] * inv_f2), h)
            Xt[n] = n * _backend.cumsimpson(np.ascontiguousarray(Xt[n - 1] * f2), h)
        else:
            X[n] = n * _backend.cumsimpson(np.ascontiguousarray(X[n - 1] * f2), h)
            Xt[n] = n * _backend.cumsimpson(np.ascontiguousarray(Xt[n - 1] * inv_f2), h)
    return FormalPowerTable(xi, f, df, X, Xt, scale)


def table_from_function(f, df, xi_max, n_max=DEFAULT_N_MAX, samples=DEFAULT_SAMPLES):
    """Tabulate callables ``f``, ``df`` on ``samples`` nodes of ``[0, xi_max]``."""
    xi = np.linspace(0.0, xi_max, samples)
    return build_x_tables(f(xi) * np.ones_like(xi), xi, n_max, df(xi) * np.ones_like(xi))


def table_from_medium(tables, n_max=DEFAULT_N_MAX, samples=DEFAULT_SAMPLES, inverse=False):
    """Formal-power tables for ``f = sqrt(C)``, or ``1/sqrt(C)`` when ``inverse``.

    The physical 1D Maxwell fields correspond to ``inverse=True``.
    """
    xi = np.linspace(*tables.xi_range, samples)
    f = tables.f(xi)
    df = tables.df(xi)
    if inverse:
        df = -df / (f * f)
        f = 1.0 / f
    return build_x_tables(f, xi, n_max, df)


def _split_sums(Y, n, xi, t):
    """``sum_m C(n,m) Y^(n-m)(xi) (j t)^m`` split into (1-part, j-part)."""
    t = np.asarray(t, dtype=float)
    one = 0.0
    jay = 0.0
    tm = np.ones_like(t)
    for m in range(n + 1):
        term = comb(n, m) * Y[n - m](xi) * tm
        if m % 2:
            jay = jay + term
        else:
            one = one + term
        tm = tm * t
    return one, jay


def _coeff(a):
    if isinstance(a, Hyperbolic):
        return float(a.u), float(a.v)
    return float(a), 0.0


def star_z(n, a, xi, t, table):
    """The auxiliary power ``*Z^(n)(a, 0, xi + j t)``; ``a`` real or Hyperbolic."""
    xi = table._check(n, xi)
    xi, t = np.broadcast_arrays(xi, np.asarray(t, dtype=float))
    a1, a2 = _coeff(a)
    if n % 2:
        P, Q = table._X, table._Xt
    else:
        P, Q = table._Xt, table._X
    p1, pj = _split_sums(P, n, xi, t)
    q1, qj = _split_sums(Q, n, xi, t)
    # a' (p1 + pj j) + j a'' (q1 + qj j)
    u = a1 * p1 + a2 * qj
    v = a1 * pj + a2 * q1
    return Hyperbolic(np.asarray(u) * np.ones_like(xi), np.asarray(v) * np.ones_like(xi))


def z_formal_power(n, a, xi, t, table):
    """``Z^(n)(a, 0, z) = f Re(*Z) + (j / f) Im(*Z)`` at ``z = xi + j t``."""
    s = star_z(n, a, xi, t, table)
    f = table.f_at(np.broadcast_to(xi, np.shape(s.u)))
    return Hyperbolic(f * s.u, s.v / f)


def z_on_grid(n, a, table, grid):
    xi, t = grid.mesh()[grid.axis("xi")], grid.mesh()[grid.axis("t")]
    return z_formal_power(n, a, xi, t, table)


def hyperbolic_vekua_operator(w, table, grid):
    """``d_zbar w - (f'/(2 f)) conj(w)`` on the (xi, t) grid."""
    check_field(w, grid)
    xi = grid.mesh()[grid.axis("xi")]
    coef = table.df_at(xi) / (2.0 * table.f_at(xi))
    d = dbar_hyperbolic(w, grid)
    wc = hyp_conj(w)
    return Hyperbolic(d.u - coef * wc.u, d.v - coef * wc.v)


def verify_formal_power(n, a, table, grids):
    """Residual report for ``Z^(n)(a, 0, .)``; a list of grids gives a convergence study."""
    if not isinstance(grids, (list, tuple)):
        grids = [grids]
    reports = []
    for g in grids:
        table._check(n, [g.origins[g.axis("xi")], g.upper("xi")])
        w = z_on_grid(n, a, table, g)
        reports.append(ResidualReport.from_residual(
            f"hyperbolic-vekua n={n}", hyperbolic_vekua_operator(w, table, g), g))
    return ResidualReport.combine(reports)


def write_x_tables_csv(table, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["xi"] + [f"X{n}" for n in range(table.n_max + 1)]
                   + [f"Xt{n}" for n in range(table.n_max + 1)])
        for i, xi in enumerate(table.xi):
            w.writerow([repr(float(xi))] + [repr(float(v)) for v in table.X[:, i]]
                       + [repr(float(v)) for v in table.Xt[:, i]])


def write_z_samples_csv(n, a, table, grid, path):
    z = z_on_grid(n, a, table, grid)
    xi, t = grid.mesh()[grid.axis("xi")], grid.mesh()[grid.axis("t")]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["xi", "t", "re", "im_j"])
        for row in zip(xi.ravel(), t.ravel(), z.u.ravel(), z.v.ravel()):
            w.writerow([repr(float(v)) for v in row])
