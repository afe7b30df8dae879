"""The fixed-energy Dirac system in biquaternionic form ``(D + a + M^b) W = 0``.

Here ``a`` is the vectorial magnetic potential acting from the left and
``b = -i (phi + omega) e1 - m e2`` acts from the right. For constant ``phi``
and ``a = 0`` a solution depending on ``x1`` alone satisfies the linear ODE
``W' = e1 W b``; integrating it from ``W(0) = e_k`` gives an independent
quartet used as the oracle here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import as_bq, component_det, qmul, unit
from .calculus import (
    ResidualReport,
    _check_array,
    moisil_theodoresco,
    paired_equivalence,
    product_rule_bound,
    scalar_gradient_bq,
)
from .errors import DependentSetError, GridMismatchError, StepTooLargeError

INDEPENDENCE_TOL = 1e-10
DEFAULT_ODE_TOL = 1e-10


@dataclass(frozen=True)
class DiracData:
    """Mass, energy, electric potential and magnetic potential.

    ``phi`` is a real constant or a real field of grid shape; ``a`` is None
    (zero), a constant vectorial biquaternion or a field of shape
    ``grid.shape + (4,)``.
    """

    m: float
    omega: float
    phi: object = 0.0
    a: object = None

    def __post_init__(self):
        if not self.m >= 0:
            raise ValueError(f"mass must be non-negative, got {self.m}")
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")
        if np.iscomplexobj(np.asarray(self.phi)):
            raise ValueError("the electric potential must be real")
        if self.a is not None:
            a = as_bq(self.a)
            if np.any(a[..., 0] != 0):
                raise ValueError("the magnetic potential must be purely vectorial")

    @property
    def constant(self):
        return np.ndim(self.phi) == 0 and (self.a is None or not np.any(as_bq(self.a)))

    def b(self, shape=()):
        """``-i (phi + omega) e1 - m e2``, recomputed on every call."""
        phi = np.asarray(self.phi, dtype=float)
        if shape:
            phi = np.broadcast_to(phi, shape)
        out = np.zeros(np.shape(phi) + (4,), dtype=np.complex128)
        out[..., 1] = -1j * (phi + self.omega)
        out[..., 2] = -self.m
        return out


def dirac_operator(W, data, grid):
    """``D W + a W + W b``."""
    W = _check_array(np.asarray(W, dtype=np.complex128), grid)
    if W.shape != grid.shape + (4,):
        raise GridMismatchError(f"W has shape {W.shape}, expected {grid.shape + (4,)}")
    out = moisil_theodoresco(W, grid) + qmul(W, data.b(grid.shape))
    if data.a is not None:
        out = out + qmul(as_bq(data.a), W)
    return out


def dirac_residual(W, data, grid):
    return ResidualReport.from_residual("dirac", dirac_operator(W, data, grid), grid)


# ---------------------------------------------------------------------------
# ODE oracle


def _rhs(W, b):
    return qmul(qmul(unit(1), W), b)


def _rk4_step(W, b, h):
    k1 = _rhs(W, b)
    k2 = _rhs(W + 0.5 * h * k1, b)
    k3 = _rhs(W + 0.5 * h * k2, b)
    k4 = _rhs(W + h * k3, b)
    return W + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass(frozen=True)
class OracleQuartet:
    """Four trajectories ``F_k(x1)`` with ``F_k(x0) = e_k``."""

    x: np.ndarray
    trajectories: np.ndarray  # shape (4, len(x), 4)
    max_error_estimate: float

    def on_grid(self, grid):
        """Sample the quartet on a grid whose x1 nodes are the trajectory nodes."""
        x1 = grid.coords("x1")
        if x1.shape != self.x.shape or not np.allclose(x1, self.x, rtol=0, atol=1e-12):
            raise GridMismatchError("grid x1 nodes differ from the oracle nodes")
        k = grid.axis("x1")
        shape = [1] * grid.ndim
        shape[k] = -1
        members = []
        for traj in self.trajectories:
            arr = traj.reshape(tuple(shape) + (4,))
            members.append(np.broadcast_to(arr, grid.shape + (4,)).copy())
        return tuple(members)


def ode_oracle_solutions(data, x_range, nodes, substeps=4, tol=DEFAULT_ODE_TOL):
    """Integrate ``W' = e1 W b`` with classical RK4 from ``W(x0) = e_k``.

    The result is sampled at ``nodes`` equispaced points of ``x_range``,
    taking ``substeps`` RK4 steps between nodes. Each step is checked by
    step doubling; an estimated local error above ``tol`` (relative to the
    size of the state) raises StepTooLargeError.
    """
    if not data.constant:
        raise ValueError("the ODE oracle needs constant phi and a = 0")
    if nodes < 2 or substeps < 1:
        raise ValueError("need at least 2 nodes and 1 substep")
    x0, x1 = map(float, x_range)
    x = np.linspace(x0, x1, nodes)
    h = (x1 - x0) / ((nodes - 1) * substeps)
    b = data.b()
    W = np.eye(4, dtype=np.complex128)  # row k is the state started at e_k
    out = np.empty((nodes, 4, 4), dtype=np.complex128)
    out[0] = W
    worst = 0.0
    for i in range(1, nodes):
        for _ in range(substeps):
            full = _rk4_step(W, b, h)
            half = _rk4_step(_rk4_step(W, b, 0.5 * h), b, 0.5 * h)
            err = float(np.max(np.abs(half - full))) / 15.0
            scale = 1.0 + float(np.max(np.abs(half)))
            worst = max(worst, err / scale)
            if err > tol * scale:
                raise StepTooLargeError(
                    f"local error estimate {err:.3e} exceeds {tol:.1e} near x1={x[i]:.4g}")
            W = half
        out[i] = W
    return OracleQuartet(x, np.transpose(out, (1, 0, 2)).copy(), worst)


def integrator_order(data, x_range, steps=(8, 16, 32, 64)):
    """Observed order of the RK4 oracle from endpoint differences under halving."""
    ends = []
    for n in steps:
        q = ode_oracle_solutions(data, x_range, n + 1, substeps=1, tol=np.inf)
        ends.append(q.trajectories[:, -1, :])
    diffs = [float(np.max(np.abs(a - b))) for a, b in zip(ends, ends[1:])]
    orders = [math.log2(d0 / d1) for d0, d1 in zip(diffs, diffs[1:])]
    return min(orders), diffs


def quartet_independence(members):
    """Minimum over the grid of the modulus of the 4x4 component determinant."""
    return float(np.min(np.abs(component_det(members))))


def second_kind_operator(phis, members, grid):
    """``sum_k (D phi_k) F_k`` for complex scalar fields ``phi_k``."""
    if len(phis) != 4 or len(members) != 4:
        raise ValueError("need four scalar fields and four quartet members")
    out = np.zeros(grid.shape + (4,), dtype=np.complex128)
    for phi, F in zip(phis, members):
        phi = _check_array(np.asarray(phi, dtype=np.complex128), grid)
        F = _check_array(np.asarray(F, dtype=np.complex128), grid)
        out += qmul(scalar_gradient_bq(phi, grid), F)
    return out


def second_kind_residual_dirac(phis, members, data, grid, tol=INDEPENDENCE_TOL):
    """Report on ``sum_k (D phi_k) F_k``; the quartet must be independent."""
    del data
    mn = quartet_independence(members)
    if mn <= tol:
        raise DependentSetError(f"quartet determinant drops to {mn:.3e}")
    return ResidualReport.from_residual(
        "dirac-second-kind", second_kind_operator(phis, members, grid), grid)


def combine(phis, members):
    return sum(np.asarray(p, dtype=np.complex128)[..., None] * F for p, F in zip(phis, members))


def quartet_equivalence(phis, members, data, grid):
    """Compare ``(D + a + M^b)(sum phi_k F_k)`` with ``sum (D phi_k) F_k``."""
    mn = quartet_independence(members)
    if mn <= INDEPENDENCE_TOL:
        raise DependentSetError(f"quartet determinant drops to {mn:.3e}")
    full = dirac_operator(combine(phis, members), data, grid)
    second = second_kind_operator(phis, members, grid)
    bound = product_rule_bound(phis, members, grid)
    return paired_equivalence("dirac", full, second, grid, bound)
