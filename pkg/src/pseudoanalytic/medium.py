"""Stratified dielectric media and the stretched coordinate ``xi = N(x)``.

A medium has permittivity ``eps(x) > 0`` along one Cartesian axis and a
constant permeability ``mu``. From it we tabulate the wave speed
``c = 1/sqrt(eps mu)``, refraction index ``n = 1/c``, impedance
``Z = sqrt(mu/eps)``, the antiderivative ``N`` of ``n`` (normalized so that
``N(x_min) = 0``), its inverse ``x(xi)``, and ``f(xi) = sqrt(c(x(xi)))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from . import _backend
from .errors import NonMonotoneError, NonPositivePermittivityError, OutOfDomainError

DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class MediumProfile:
    x_range: tuple
    eps: Callable
    mu: float = 1.0
    samples: int = 2001
    description: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        lo, hi = self.x_range
        if not hi > lo:
            raise ValueError(f"empty x interval {self.x_range}")
        if not self.mu > 0:
            raise ValueError(f"permeability must be positive, got {self.mu}")
        if self.samples < 3:
            raise ValueError("need at least 3 quadrature samples")


def exp_profile(rate, amplitude=1.0, x_range=(0.0, 1.0), mu=1.0, samples=2001):
    """``eps(x) = amplitude * exp(rate * x)``."""
    return MediumProfile(
        tuple(x_range),
        lambda x: amplitude * np.exp(rate * np.asarray(x, dtype=float)),
        mu,
        samples,
        {"kind": "exp", "rate": rate, "amplitude": amplitude},
    )


def poly_profile(coeffs, power=1.0, x_range=(0.0, 1.0), mu=1.0, samples=2001):
    """``eps(x) = (coeffs[0] + coeffs[1] x + ...) ** power``."""
    coeffs = [float(c) for c in coeffs]
    poly = np.polynomial.Polynomial(coeffs)

    def eps(x):
        base = poly(np.asarray(x, dtype=float))
        if power == int(power):
            return base ** int(power)
        return np.power(base, power)

    return MediumProfile(tuple(x_range), eps, mu, samples,
                         {"kind": "poly", "coeffs": coeffs, "power": power})


def table_profile(xs, eps_values, mu=1.0, samples=2001, x_range=None):
    """Cubic-spline permittivity through tabulated samples."""
    xs = np.asarray(xs, dtype=float)
    ev = np.asarray(eps_values, dtype=float)
    if np.any(ev <= 0):
        raise NonPositivePermittivityError("tabulated permittivity must be positive")
    spline = CubicSpline(xs, ev)
    rng = tuple(x_range) if x_range is not None else (float(xs[0]), float(xs[-1]))
    return MediumProfile(rng, spline, mu, samples,
                         {"kind": "table", "x": xs.tolist(), "eps": ev.tolist()})


def vacuum(x_range=(0.0, 1.0), samples=2001):
    return exp_profile(0.0, 1.0, x_range, 1.0, samples)


def monotone_hermite(x, y, dydx):
    """Cubic Hermite interpolant with Fritsch-Carlson derivative limiting.

    With exact derivatives the interpolant is fourth-order accurate; the
    limiter only engages where that would break monotonicity.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.array(dydx, dtype=float)
    delta = np.diff(y) / np.diff(x)
    if np.any(delta <= 0):
        raise NonMonotoneError("data to interpolate is not strictly increasing")
    d = np.maximum(d, 0.0)
    alpha = d[:-1] / delta
    beta = d[1:] / delta
    s = alpha ** 2 + beta ** 2
    over = np.flatnonzero(s > 9.0)
    if over.size:
        tau = 3.0 / np.sqrt(s[over])
        left = tau * alpha[over] * delta[over]
        right = tau * beta[over] * delta[over]
        np.minimum.at(d, over, left)
        np.minimum.at(d, over + 1, right)
    return CubicHermiteSpline(x, y, d)


class MediumTables:
    """Tabulated quantities derived from a :class:`MediumProfile`.

    Do not construct directly; use :func:`build_tables`.
    """

    def __init__(self, profile, x, eps, N, c_spline, xi_of_x, x_of_xi):
        self.profile = profile
        self.mu = float(profile.mu)
        self.x = x
        self.eps_samples = eps
        self.n_samples = np.sqrt(eps * self.mu)
        self.c_samples = 1.0 / self.n_samples
        self.Z_samples = np.sqrt(self.mu / eps)
        self.N_samples = N
        self._c_spline = c_spline
        self._dc_spline = c_spline.derivative()
        self._xi_of_x = xi_of_x
        self._x_of_xi = x_of_xi

    @property
    def x_range(self):
        return (float(self.x[0]), float(self.x[-1]))

    @property
    def xi_range(self):
        return (0.0, float(self.N_samples[-1]))

    def _check_x(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.x_range
        slack = DOMAIN_SLACK * (1.0 + hi - lo)
        if np.any(x < lo - slack) or np.any(x > hi + slack):
            raise OutOfDomainError(f"x outside [{lo}, {hi}]")
        return np.clip(x, lo, hi)

    def _check_xi(self, xi):
        xi = np.asarray(xi, dtype=float)
        lo, hi = self.xi_range
        slack = DOMAIN_SLACK * (1.0 + hi - lo)
        if np.any(xi < lo - slack) or np.any(xi > hi + slack):
            raise OutOfDomainError(f"xi outside [{lo}, {hi}]")
        return np.clip(xi, lo, hi)

    # functions of x
    def eps(self, x):
        return np.asarray(self.profile.eps(self._check_x(x)), dtype=float)

    def c(self, x):
        return 1.0 / np.sqrt(self.eps(x) * self.mu)

    def n(self, x):
        return np.sqrt(self.eps(x) * self.mu)

    def Z(self, x):
        return np.sqrt(self.mu / self.eps(x))

    def dc(self, x):
        """``c'(x)``, from the cubic spline through the c samples."""
        return self._dc_spline(self._check_x(x))

    def c1(self, x):
        """``c'(x) / (2 c(x))``: the e1 coefficient of grad(sqrt c)/sqrt c."""
        x = self._check_x(x)
        return self.dc(x) / (2.0 * self.c(x))

    def xi_of_x(self, x):
        return self._xi_of_x(self._check_x(x))

    # functions of xi
    def x_of_xi(self, xi):
        return self._x_of_xi(self._check_xi(xi))

    def C(self, xi):
        return self.c(self.x_of_xi(xi))

    def f(self, xi):
        """``sqrt(C(xi))``."""
        return np.sqrt(self.C(xi))

    def df(self, xi):
        """``f'(xi) = c'(x) sqrt(c(x)) / 2`` since ``dx/dxi = c``."""
        x = self.x_of_xi(xi)
        return 0.5 * self.dc(x) * np.sqrt(self.c(x))

    def dC(self, xi):
        x = self.x_of_xi(xi)
        return self.dc(x) * self.c(x)


def build_tables(profile):
    """Tabulate a medium on ``profile.samples`` equispaced nodes."""
    lo, hi = profile.x_range
    x = np.linspace(lo, hi, profile.samples)
    eps = np.asarray(profile.eps(x), dtype=float) * np.ones_like(x)
    if not np.all(np.isfinite(eps)) or np.any(eps <= 0):
        raise NonPositivePermittivityError("permittivity must be positive on the whole interval")
    n = np.sqrt(eps * profile.mu)
    N = _backend.cumsimpson(np.ascontiguousarray(n), float(x[1] - x[0]))
    if np.any(np.diff(N) <= 0):
        raise NonMonotoneError("cumulative refraction index is not strictly increasing")
    c = 1.0 / n
    c_spline = CubicSpline(x, c)
    xi_of_x = monotone_hermite(x, N, n)
    x_of_xi = monotone_hermite(N, x, c)
    return MediumTables(profile, x, eps, N, c_spline, xi_of_x, x_of_xi)


def c_vector(tables, x):
    """``c1(x) = c'(x) / (2 c(x))``; raises OutOfDomainError outside the interval."""
    return tables.c1(x)
