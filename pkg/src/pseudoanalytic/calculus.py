"""Uniform grids, finite-difference operators and residual reports.

Fields are plain arrays whose leading axes match ``grid.shape``; trailing
axes carry the value (nothing for complex scalars, length 4 for
biquaternions). Hyperbolic and bicomplex fields are :class:`Hyperbolic` /
:class:`Bicomplex` instances holding component arrays.

Derivatives are second-order central differences with second-order
one-sided stencils at the boundary nodes. Residual norms only look at
interior nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Bicomplex,
    Hyperbolic,
    bicomplex_mul_j,
    qmul,
    unit,
)
from .errors import DegeneratePairError, GridMismatchError, GridTooSmallError

MIN_NODES = 5
DEGENERACY_RTOL = 1e-10
# residuals below this are treated as exact (roundoff) and get no slope
ROUNDOFF_FLOOR = 1e-11


@dataclass(frozen=True)
class Grid:
    """A uniform tensor-product grid with named axes.

    Axis names matter to the operators: ``x1``, ``x2``, ``x3`` are spatial
    coordinates seen by the Moisil-Theodoresco operator, ``t`` is time,
    ``xi`` the stretched coordinate of the 1D Maxwell reduction, and ``x``,
    ``y`` the coordinates of the complex plane.
    """

    origins: tuple
    spacings: tuple
    counts: tuple
    names: tuple

    def __post_init__(self):
        n = len(self.counts)
        if not (len(self.origins) == len(self.spacings) == len(self.names) == n):
            raise ValueError("origins, spacings, counts and names must have equal length")
        for h in self.spacings:
            if not h > 0:
                raise ValueError(f"grid spacing must be positive, got {h}")
        for c in self.counts:
            if c < MIN_NODES:
                raise GridTooSmallError(f"need at least {MIN_NODES} nodes per axis, got {c}")
        if len(set(self.names)) != n:
            raise ValueError(f"duplicate axis names {self.names}")

    @classmethod
    def uniform(cls, ranges, counts, names):
        """Grid spanning ``ranges[k] = (lo, hi)`` with ``counts[k]`` nodes."""
        origins, spacings = [], []
        for (lo, hi), c in zip(ranges, counts):
            if c < MIN_NODES:
                raise GridTooSmallError(f"need at least {MIN_NODES} nodes per axis, got {c}")
            origins.append(float(lo))
            spacings.append((float(hi) - float(lo)) / (c - 1))
        return cls(tuple(origins), tuple(spacings), tuple(int(c) for c in counts), tuple(names))

    @property
    def ndim(self):
        return len(self.counts)

    @property
    def shape(self):
        return tuple(self.counts)

    @property
    def h(self):
        return max(self.spacings)

    def axis(self, name):
        if isinstance(name, int):
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"grid has no axis {name!r}; axes are {self.names}") from None

    def coords(self, axis):
        k = self.axis(axis)
        return self.origins[k] + self.spacings[k] * np.arange(self.counts[k])

    def upper(self, axis):
        k = self.axis(axis)
        return self.origins[k] + self.spacings[k] * (self.counts[k] - 1)

    def mesh(self):
        """Coordinate arrays of full grid shape, one per axis."""
        return np.meshgrid(*[self.coords(k) for k in range(self.ndim)], indexing="ij")

    def refined(self, factor=2):
        """Same box, spacing divided by ``factor``."""
        return Grid(
            self.origins,
            tuple(h / factor for h in self.spacings),
            tuple((c - 1) * factor + 1 for c in self.counts),
            self.names,
        )

    def interior(self):
        return tuple(slice(1, -1) for _ in range(self.ndim))

    def cell_volume(self):
        return float(np.prod(self.spacings))


def grid2(xi_range, t_range, n_xi, n_t):
    """The (xi, t) plane of the hyperbolic reduction."""
    return Grid.uniform([xi_range, t_range], [n_xi, n_t], ("xi", "t"))


def grid3(ranges, counts):
    return Grid.uniform(ranges, counts, ("x1", "x2", "x3"))


def plane(x_range, y_range, nx, ny):
    """The (x, y) complex plane."""
    return Grid.uniform([x_range, y_range], [nx, ny], ("x", "y"))


# ---------------------------------------------------------------------------
# differentiation


def _check_array(values, grid):
    values = np.asarray(values)
    if values.shape[: grid.ndim] != grid.shape:
        raise GridMismatchError(
            f"field shape {values.shape} does not start with grid shape {grid.shape}"
        )
    return values


def check_field(values, grid):
    if isinstance(values, Hyperbolic):
        _check_array(np.broadcast_to(values.u, grid.shape), grid)
        return values
    if isinstance(values, Bicomplex):
        _check_array(np.broadcast_to(values.a, grid.shape), grid)
        return values
    return _check_array(values, grid)


def _partial_array(values, grid, k):
    values = _check_array(values, grid)
    if grid.counts[k] < MIN_NODES:
        raise GridTooSmallError(f"axis {grid.names[k]} has {grid.counts[k]} nodes")
    return np.gradient(values, grid.spacings[k], axis=k, edge_order=2)


def partial(values, grid, axis):
    """Derivative along ``axis`` (name or index) of any field kind."""
    k = grid.axis(axis)
    if isinstance(values, Hyperbolic):
        return Hyperbolic(
            _partial_array(np.broadcast_to(values.u, grid.shape), grid, k),
            _partial_array(np.broadcast_to(values.v, grid.shape), grid, k),
        )
    if isinstance(values, Bicomplex):
        return Bicomplex(*[
            _partial_array(np.broadcast_to(c, grid.shape), grid, k)
            for c in (values.a, values.b, values.c, values.d)
        ])
    return _partial_array(values, grid, k)


_SPATIAL = {"x1": 1, "x2": 2, "x3": 3}


def spatial_axes(grid):
    """(grid axis index, quaternion unit index) for each spatial axis present."""
    return [(i, _SPATIAL[n]) for i, n in enumerate(grid.names) if n in _SPATIAL]


def moisil_theodoresco(q, grid):
    """``D q = sum_k e_k d_k q`` for a biquaternion field.

    Spatial axes absent from the grid are axes the field does not depend on.
    """
    q = _check_array(q, grid)
    if q.shape[-1] != 4 or q.ndim != grid.ndim + 1:
        raise GridMismatchError("moisil_theodoresco expects a biquaternion field")
    out = np.zeros_like(q, dtype=np.complex128)
    for ax, k in spatial_axes(grid):
        out += qmul(unit(k), _partial_array(q, grid, ax))
    return out


def scalar_gradient_bq(phi, grid):
    """``D phi`` for a scalar (real or complex) field: the vector ``sum e_k d_k phi``."""
    phi = _check_array(phi, grid)
    out = np.zeros(grid.shape + (4,), dtype=np.complex128)
    for ax, k in spatial_axes(grid):
        out[..., k] = _partial_array(phi, grid, ax)
    return out


def divergence(q, grid):
    """``sum_k d_k q_k`` of the vector part of a biquaternion field."""
    q = _check_array(q, grid)
    out = np.zeros(grid.shape, dtype=np.complex128)
    for ax, k in spatial_axes(grid):
        out += _partial_array(q[..., k], grid, ax)
    return out


def dbar_hyperbolic(w, grid):
    """``(d_xi - j d_t) / 2`` on a hyperbolic or bicomplex field over (xi, t)."""
    dxi = partial(w, grid, "xi")
    dt = partial(w, grid, "t")
    if isinstance(w, Hyperbolic):
        # j (u + v j) = v + u j
        return Hyperbolic(0.5 * (dxi.u - dt.v), 0.5 * (dxi.v - dt.u))
    if isinstance(w, Bicomplex):
        jdt = bicomplex_mul_j(dt)
        return Bicomplex(*[0.5 * (p - q) for p, q in
                           zip((dxi.a, dxi.b, dxi.c, dxi.d), (jdt.a, jdt.b, jdt.c, jdt.d))])
    raise TypeError("dbar_hyperbolic expects a Hyperbolic or Bicomplex field")


def dbar_elliptic(w, grid):
    """``(d_x + i d_y) / 2`` on a complex field over (x, y)."""
    return 0.5 * (partial(w, grid, "x") + 1j * partial(w, grid, "y"))


def dz_elliptic(w, grid):
    """``(d_x - i d_y) / 2`` on a complex field over (x, y)."""
    return 0.5 * (partial(w, grid, "x") - 1j * partial(w, grid, "y"))


# ---------------------------------------------------------------------------
# residual reports


def pointwise_magnitude(r, grid):
    if isinstance(r, Hyperbolic):
        u = np.broadcast_to(r.u, grid.shape)
        v = np.broadcast_to(r.v, grid.shape)
        return np.sqrt(u ** 2 + v ** 2)
    if isinstance(r, Bicomplex):
        comps = [np.broadcast_to(c, grid.shape) for c in (r.a, r.b, r.c, r.d)]
        return np.sqrt(sum(c ** 2 for c in comps))
    r = _check_array(r, grid)
    if r.ndim == grid.ndim:
        return np.abs(r)
    return np.sqrt(np.sum(np.abs(r.reshape(grid.shape + (-1,))) ** 2, axis=-1))


@dataclass(frozen=True)
class ResidualReport:
    """Interior norms of a residual, optionally across refinement levels.

    ``levels`` holds ``(h, max_norm, l2_norm)`` per grid, coarse to fine.
    ``max_norm``/``l2_norm``/``h`` refer to the finest level. ``order`` is the
    least-squares slope of log(max_norm) against log(h); it is only computed
    with three or more levels and when the finest norm is above roundoff.
    """

    operator: str
    max_norm: float
    l2_norm: float
    h: float
    levels: tuple = field(default_factory=tuple)
    order: float | None = None

    @classmethod
    def from_residual(cls, operator, r, grid):
        mag = pointwise_magnitude(r, grid)[grid.interior()]
        mx = float(np.max(mag)) if mag.size else 0.0
        l2 = float(math.sqrt(np.sum(mag ** 2) * grid.cell_volume()))
        return cls(operator, mx, l2, grid.h, ((grid.h, mx, l2),), None)

    @classmethod
    def combine(cls, reports, operator=None):
        reports = sorted(reports, key=lambda rep: -rep.h)
        levels = tuple(lv for rep in reports for lv in rep.levels)
        finest = reports[-1]
        return cls(
            operator or finest.operator,
            finest.max_norm,
            finest.l2_norm,
            finest.h,
            levels,
            observed_order(levels),
        )

    @property
    def pairwise_orders(self):
        out = []
        for (h0, m0, _), (h1, m1, _) in zip(self.levels, self.levels[1:]):
            if m0 > ROUNDOFF_FLOOR and m1 > ROUNDOFF_FLOOR:
                out.append(math.log(m0 / m1) / math.log(h0 / h1))
            else:
                out.append(None)
        return out

    @property
    def exact(self):
        """All levels at roundoff level."""
        return all(m <= ROUNDOFF_FLOOR for _, m, _ in self.levels)

    def passes(self, min_order=1.9, zero_tol=1e-9):
        if self.order is not None:
            return self.order >= min_order
        return self.max_norm <= zero_tol


def observed_order(levels):
    if len(levels) < 3:
        return None
    hs = np.array([lv[0] for lv in levels])
    ms = np.array([lv[1] for lv in levels])
    if np.min(ms) <= ROUNDOFF_FLOOR:
        return None
    slope, _ = np.polyfit(np.log(hs), np.log(ms), 1)
    return float(slope)


def refinement_study(operator, grids, residual_fn):
    """Evaluate ``residual_fn(grid)`` on each grid and combine the reports."""
    reports = [ResidualReport.from_residual(operator, residual_fn(g), g) for g in grids]
    return ResidualReport.combine(reports, operator)


def dyadic_grids(base, levels=3):
    grids = [base]
    for _ in range(levels - 1):
        grids.append(grids[-1].refined())
    return grids


# ---------------------------------------------------------------------------
# Bers characteristic coefficients


def check_generating_pair(F, G):
    F = np.asarray(F, dtype=np.complex128)
    G = np.asarray(G, dtype=np.complex128)
    orient = np.imag(np.conj(F) * G)
    tol = DEGENERACY_RTOL * (np.abs(F) ** 2 + np.abs(G) ** 2)
    bad = ~(orient > tol)
    if np.any(bad):
        raise DegeneratePairError(
            f"Im(conj(F) G) is not positive at {int(np.sum(bad))} node(s)"
        )


def characteristic_coefficients(F, G, grid):
    """Vekua coefficients ``(a, b)`` for which F and G are both solutions."""
    F = _check_array(np.asarray(F, dtype=np.complex128), grid)
    G = _check_array(np.asarray(G, dtype=np.complex128), grid)
    check_generating_pair(F, G)
    dF = dbar_elliptic(F, grid)
    dG = dbar_elliptic(G, grid)
    den = F * np.conj(G) - np.conj(F) * G
    a = -(np.conj(F) * dG - np.conj(G) * dF) / den
    b = (F * dG - G * dF) / den
    return a, b


def vekua_operator(W, a, b, grid):
    W = np.asarray(W, dtype=np.complex128)
    return dbar_elliptic(W, grid) - a * W - b * np.conj(W)


def vekua_residual(W, a, b, grid):
    """Report on ``d_zbar W - a W - b conj(W)``."""
    for arr in (W, a, b):
        _check_array(np.broadcast_to(arr, grid.shape), grid)
    return ResidualReport.from_residual("vekua", vekua_operator(W, a, b, grid), grid)


def intertwine_residual_elliptic(f, phi, a, b, grid):
    """Report on ``(d_zbar - a - b C)(phi f) - f d_zbar(phi)`` for real ``phi``."""
    f = _check_array(np.asarray(f, dtype=np.complex128), grid)
    phi = _check_array(np.asarray(phi, dtype=float), grid)
    lhs = vekua_operator(phi * f, a, b, grid)
    rhs = f * dbar_elliptic(phi.astype(np.complex128), grid)
    return ResidualReport.from_residual("intertwine-elliptic", lhs - rhs, grid)


# ---------------------------------------------------------------------------
# paired-residual equivalence


def _sup(arr, grid):
    mag = pointwise_magnitude(arr, grid)[grid.interior()]
    return float(np.max(mag)) if mag.size else 0.0


def product_rule_bound(phis, members, grid, weights=None):
    """Constant ``C`` with ``|R_full - R_second| <= C h^2`` to leading order.

    ``R_full`` is an FD residual of ``sum_k phi_k G_k`` and ``R_second`` the
    matching second-kind residual, for first-order operators whose
    derivative terms carry unit-norm (or ``weights[axis]``) coefficients.
    Central differences give, per axis,

        d_h(phi G) - phi d_h G - G d_h phi = h^2/2 (phi' G'' + phi'' G') + O(h^4)

    and each member's own residual contributes ``h^2/6 phi G'''``. Derivative
    sizes are estimated by repeated differencing on ``grid``. The returned
    value already includes the ``h^2`` factors.
    """
    weights = weights or {}
    total = 0.0
    for ax, name in enumerate(grid.names):
        h = grid.spacings[ax]
        w = float(weights.get(name, 1.0))
        if w == 0.0:
            continue
        acc = 0.0
        for phi, G in zip(phis, members):
            p1 = _partial_array(phi, grid, ax)
            p2 = _partial_array(p1, grid, ax)
            g1 = _partial_array(G, grid, ax)
            g2 = _partial_array(g1, grid, ax)
            g3 = _partial_array(g2, grid, ax)
            acc += 0.5 * (_sup(p1, grid) * _sup(g2, grid) + _sup(p2, grid) * _sup(g1, grid))
            acc += _sup(phi, grid) * _sup(g3, grid) / 6.0
        total += w * acc * h * h
    return total


@dataclass(frozen=True)
class EquivalenceCheck:
    """Paired residuals for ``W = sum phi_k G_k``.

    ``holds`` is the two-sided bound ``|R_full| <= |R_second| + C h^2`` and
    ``|R_second| <= |R_full| + C h^2``, evaluated nodewise through
    ``defect = max |R_full - R_second|``.
    """

    full: ResidualReport
    second: ResidualReport
    defect: float
    bound: float

    @property
    def holds(self):
        return self.defect <= self.bound


def paired_equivalence(name, full, second, grid, bound):
    return EquivalenceCheck(
        ResidualReport.from_residual(f"{name}-full", full, grid),
        ResidualReport.from_residual(f"{name}-second-kind", second, grid),
        _sup(np.asarray(full) - np.asarray(second), grid),
        bound,
    )
