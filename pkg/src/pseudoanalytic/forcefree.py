"""Force-free magnetic fields as solutions of ``(D + alpha) B = 0``.

For a purely vectorial ``B`` this is ``rot B + alpha B = 0`` together with
``div B = 0``. Any nodewise invertible solution ``b`` generates the quartet
``(b, b e1, b e2, b e3)``, and ``B = b Phi`` solves the equation exactly
when ``sum_k (D Phi_k) b e_k = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    Biquaternion,
    as_bq,
    component_det,
    invertible_mask,
    qinv,
    qmul,
    qnorm2,
    unit,
)
from .calculus import (
    ResidualReport,
    _check_array,
    divergence,
    moisil_theodoresco,
    paired_equivalence,
    product_rule_bound,
    scalar_gradient_bq,
)
from .errors import GridMismatchError, NotInvertibleError, ZeroDivisorError

_AXES = {1: "x1", 2: "x2", 3: "x3"}


class AlphaField:
    """The proportionality factor, applied to ``B`` from the left.

    ``value`` may be a complex constant, a :class:`Biquaternion`, a complex
    array of grid shape, or a biquaternion array of shape ``grid.shape + (4,)``.
    """

    def __init__(self, value):
        if isinstance(value, AlphaField):
            value = value.value
        if isinstance(value, Biquaternion):
            value = value.coeffs
        arr = np.asarray(value, dtype=np.complex128)
        if not np.all(np.isfinite(arr)):
            raise ValueError("alpha must be finite")
        self.value = arr

    @property
    def is_scalar(self):
        return self.value.ndim == 0

    @property
    def is_biquaternion(self):
        # grid axes have at least five nodes, so a trailing 4 is a component axis
        return self.value.ndim >= 1 and self.value.shape[-1] == 4

    def on(self, grid):
        """Return ``alpha`` as a biquaternion array broadcastable to the grid."""
        v = self.value
        if v.ndim == 0:
            return as_bq(v)
        if v.shape == grid.shape:
            out = np.zeros(grid.shape + (4,), dtype=np.complex128)
            out[..., 0] = v
            return out
        if v.shape == (4,) or v.shape == grid.shape + (4,):
            return v
        raise GridMismatchError(f"alpha of shape {v.shape} does not fit grid {grid.shape}")

    def apply(self, B, grid):
        return qmul(self.on(grid), B)


def ff_operator(B, alpha, grid):
    """``D B + alpha B``."""
    B = _check_array(np.asarray(B, dtype=np.complex128), grid)
    if B.shape != grid.shape + (4,):
        raise GridMismatchError(f"B has shape {B.shape}, expected {grid.shape + (4,)}")
    return moisil_theodoresco(B, grid) + AlphaField(alpha).apply(B, grid)


def ff_residual(B, alpha, grid):
    return ResidualReport.from_residual("force-free", ff_operator(B, alpha, grid), grid)


def exp_solution(alpha, axis, grid):
    """``cos(alpha x_k) + e_k sin(alpha x_k)`` sampled on ``grid``.

    Solves ``(D + alpha) b = 0`` for constant complex ``alpha``; its inverse
    is the same expression at ``-x_k``.
    """
    k = int(axis)
    if k not in _AXES:
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    alpha = complex(alpha)
    name = _AXES[k]
    out = np.zeros(grid.shape + (4,), dtype=np.complex128)
    if name in grid.names:
        x = grid.mesh()[grid.axis(name)]
    else:
        x = np.zeros(grid.shape)
    out[..., 0] = np.cos(alpha * x)
    out[..., k] = np.sin(alpha * x)
    return out


def exp_value(alpha, axis, x):
    """Single-point version of :func:`exp_solution` at coordinate ``x``."""
    alpha = complex(alpha)
    q = np.zeros(4, dtype=np.complex128)
    q[0] = np.cos(alpha * x)
    q[int(axis)] = np.sin(alpha * x)
    return Biquaternion.from_array(q)


@dataclass(frozen=True)
class GeneratingQuartet:
    members: tuple
    min_abs_det: float

    def combine(self, phis):
        """``sum_k phi_k b_k`` for four complex scalar fields."""
        return sum(np.asarray(p, dtype=np.complex128)[..., None] * m
                   for p, m in zip(phis, self.members))


def quartet_from_b(b, tol=1e-10):
    """``(b, b e1, b e2, b e3)``; raises NotInvertibleError where b is a zero divisor."""
    b = as_bq(b)
    if not np.all(invertible_mask(b)):
        raise NotInvertibleError("b is not invertible at every node")
    members = tuple(qmul(b, unit(k)) for k in range(4))
    det = np.abs(component_det(members))
    mn = float(np.min(det))
    if mn <= tol:
        raise NotInvertibleError(f"quartet determinant drops to {mn:.3e}")
    return GeneratingQuartet(members, mn)


def quartet_det_expected(b):
    """``(b0^2 + b1^2 + b2^2 + b3^2)^2``, the determinant of the quartet."""
    return qnorm2(as_bq(b)) ** 2


def second_kind_operator_ff(phis, b, grid):
    """``sum_k (D Phi_k) b e_k`` for four complex scalar fields."""
    if len(phis) != 4:
        raise ValueError("need four scalar fields")
    b = _check_array(as_bq(b), grid)
    out = np.zeros(grid.shape + (4,), dtype=np.complex128)
    for k, phi in enumerate(phis):
        phi = _check_array(np.asarray(phi, dtype=np.complex128), grid)
        out += qmul(scalar_gradient_bq(phi, grid), qmul(b, unit(k)))
    return out


def second_kind_residual_ff(phis, b, grid):
    if isinstance(b, GeneratingQuartet):
        b = b.members[0]
    return ResidualReport.from_residual(
        "force-free-second-kind", second_kind_operator_ff(phis, b, grid), grid)


def components(q):
    """The four complex scalar fields ``Phi_k`` of ``Phi = sum Phi_k e_k``."""
    q = as_bq(q)
    return [q[..., k] for k in range(4)]


def quotient_check(f, g, alpha, grid):
    """Reports on ``sum D Phi_k f e_k`` and ``sum D Psi_k g e_k``.

    ``Phi = f^-1 g`` and ``Psi = g^-1 f``; both vanish to discretization
    order when ``f`` and ``g`` solve the equation with the same ``alpha``.
    ``alpha`` is accepted for symmetry with the other checks; the quotient
    equations do not involve it.
    """
    del alpha
    f = _check_array(as_bq(f), grid)
    g = _check_array(as_bq(g), grid)
    try:
        phi = qmul(qinv(f), g)
    except ZeroDivisorError as exc:
        raise NotInvertibleError(f"f: {exc}") from None
    try:
        psi = qmul(qinv(g), f)
    except ZeroDivisorError as exc:
        raise NotInvertibleError(f"g: {exc}") from None
    r_phi = second_kind_operator_ff(components(phi), f, grid)
    r_psi = second_kind_operator_ff(components(psi), g, grid)
    return (ResidualReport.from_residual("force-free-quotient", r_phi, grid),
            ResidualReport.from_residual("force-free-quotient-inverse", r_psi, grid))


def quartet_equivalence(phis, b, alpha, grid):
    """Compare ``(D + alpha)(b Phi)`` with ``sum (D Phi_k) b e_k``."""
    q = quartet_from_b(b)
    full = ff_operator(q.combine(phis), alpha, grid)
    second = second_kind_operator_ff(phis, b, grid)
    bound = product_rule_bound(phis, q.members, grid, {"t": 0.0})
    return paired_equivalence("force-free", full, second, grid, bound)


def splitting_defect(phis, b, alpha, grid):
    """``(D + alpha)(b Phi) - sum (D Phi_k) b e_k - sum Phi_k ((D + alpha) b) e_k``.

    This splitting holds for any ``b`` and any left multiplier ``alpha``,
    including biquaternion-valued ones; numerically only the product-rule
    defect of the central differences remains.
    """
    b = _check_array(as_bq(b), grid)
    members = [qmul(b, unit(k)) for k in range(4)]
    B = sum(np.asarray(p, dtype=np.complex128)[..., None] * m for p, m in zip(phis, members))
    lb = ff_operator(b, alpha, grid)
    rest = sum(np.asarray(p, dtype=np.complex128)[..., None] * qmul(lb, unit(k))
               for k, p in enumerate(phis))
    return ff_operator(B, alpha, grid) - second_kind_operator_ff(phis, b, grid) - rest


def divergence_operator(B, alpha, grid):
    """``div(vec B) - alpha B0``: the scalar part of ``(D + alpha) B`` up to sign.

    For purely vectorial ``B`` this is the plain divergence.
    """
    B = _check_array(np.asarray(B, dtype=np.complex128), grid)
    a = AlphaField(alpha)
    if not a.is_scalar:
        raise ValueError("the divergence form needs a constant scalar alpha")
    return divergence(B, grid) - complex(a.value) * B[..., 0]


def divergence_residual(B, alpha, grid):
    return ResidualReport.from_residual("force-free-divergence",
                                        divergence_operator(B, alpha, grid), grid)
