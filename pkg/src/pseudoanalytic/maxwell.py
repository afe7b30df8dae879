"""Biquaternionic Maxwell system in a stratified medium.

With ``V = sqrt(eps) E + i sqrt(mu) H`` the sourceless Maxwell system reads

    (1/c d_t + i D) V - V (i cvec) - V* (i Zvec) = 0,

where ``cvec = grad(sqrt c)/sqrt c`` and ``Zvec = grad(sqrt Z)/sqrt Z``. For
``eps = eps(x1)`` and constant ``mu`` both equal ``c1(x1) e1``.

Fields live on grids whose axes are a subset of ``t, x1, x2, x3``; a missing
axis means no dependence on that variable. The medium varies along ``x1``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .algebra import (
    Bicomplex,
    Hyperbolic,
    bicomplex_conj_i,
    bicomplex_join,
    bicomplex_split,
    qcconj,
    qmul,
    unit,
    vector,
)
from .calculus import (
    ResidualReport,
    _check_array,
    moisil_theodoresco,
    paired_equivalence,
    partial,
    product_rule_bound,
    scalar_gradient_bq,
)
from .errors import DependentSetError, GridMismatchError
from .formal_powers import z_formal_power

INDEPENDENCE_TOL = 1e-10


def _x1(grid):
    if "x1" not in grid.names:
        raise GridMismatchError("a stratified medium needs an x1 axis")
    return grid.mesh()[grid.axis("x1")]


def _e1_field(values):
    out = np.zeros(np.shape(values) + (4,), dtype=np.complex128)
    out[..., 1] = values
    return out


def assemble_V(E, H, eps, mu):
    """``sqrt(eps) E + i sqrt(mu) H`` for real 3-vector fields of shape (..., 3)."""
    E = np.asarray(E, dtype=float)
    H = np.asarray(H, dtype=float)
    if E.shape != H.shape or E.shape[-1] != 3:
        raise GridMismatchError(f"E {E.shape} and H {H.shape} must match with last axis 3")
    eps = np.asarray(eps, dtype=float)
    if eps.ndim:
        eps = eps[..., None]
    return np.sqrt(eps) * E + 1j * np.sqrt(mu) * H


def vector_bq(V):
    """Embed a complex 3-vector field as a purely vectorial biquaternion field."""
    V = np.asarray(V, dtype=np.complex128)
    return vector(V[..., 0], V[..., 1], V[..., 2])


def _time_term(V, grid, c):
    if "t" not in grid.names:
        return np.zeros_like(V)
    return partial(V, grid, "t") / c[..., None]


def maxmain_operator(V, grid, tables):
    """``(1/c d_t + i D) V - M^{i c} V - M^{i Z} V*`` for a biquaternion field."""
    V = _check_array(np.asarray(V, dtype=np.complex128), grid)
    x = _x1(grid)
    c = tables.c(x)
    c1 = tables.c1(x)
    # mu constant, so grad(sqrt Z)/sqrt Z coincides with grad(sqrt c)/sqrt c
    ic = _e1_field(1j * c1)
    iZ = ic
    return (_time_term(V, grid, c) + 1j * moisil_theodoresco(V, grid)
            - qmul(V, ic) - qmul(qcconj(V), iZ))


def maxmain_residual(V, grid, tables):
    V = np.asarray(V, dtype=np.complex128)
    if np.any(V[..., 0] != 0):
        raise ValueError("the Maxwell field must be purely vectorial")
    return ResidualReport.from_residual("maxwell-main", maxmain_operator(V, grid, tables), grid)


def wave_operator_scalar(phi, grid, tables):
    """``(1/c d_t + i D)[phi]`` for a real scalar field: a biquaternion field."""
    phi = _check_array(np.asarray(phi, dtype=float), grid)
    c = tables.c(_x1(grid))
    out = 1j * scalar_gradient_bq(phi, grid)
    if "t" in grid.names:
        out[..., 0] += partial(phi, grid, "t") / c
    return out


def intertwine_operator_maxwell(V, phi, grid, tables):
    phi = np.asarray(phi, dtype=float)
    lhs = maxmain_operator(phi[..., None] * V, grid, tables)
    rhs = qmul(wave_operator_scalar(phi, grid, tables), V)
    return lhs - rhs


def intertwine_residual_maxwell(V, phi, grid, tables):
    """Defect of ``L[phi V] = (1/c d_t + i D)[phi] V``; vanishes iff V solves."""
    return ResidualReport.from_residual(
        "maxwell-intertwine", intertwine_operator_maxwell(V, phi, grid, tables), grid)


@dataclass(frozen=True)
class GeneratingSextet:
    fields: tuple
    grid: object
    min_abs_det: float

    def combine(self, phis):
        """``sum_k phi_k V_k`` for six real scalar fields."""
        return sum(np.asarray(p, dtype=float)[..., None] * v for p, v in zip(phis, self.fields))


def sextet_det(fields):
    """Nodewise determinant of the 6x6 real matrix with columns (Re V_k, Im V_k)."""
    cols = [np.concatenate([v[..., 1:].real, v[..., 1:].imag], axis=-1) for v in fields]
    return np.linalg.det(np.stack(cols, axis=-1))


def build_sextet(tables, grid):
    """``(c e1, e2/c, e3/c, i e1, i e2, i e3)`` sampled on ``grid``."""
    x = _x1(grid)
    c = tables.c(x)
    ones = np.ones(grid.shape)
    zero = np.zeros(grid.shape)
    fields = (
        vector(c, zero, zero),
        vector(zero, 1.0 / c, zero),
        vector(zero, zero, 1.0 / c),
        vector(1j * ones, zero, zero),
        vector(zero, 1j * ones, zero),
        vector(zero, zero, 1j * ones),
    )
    det = np.abs(sextet_det(fields))
    if np.min(det) <= INDEPENDENCE_TOL:
        raise DependentSetError(f"sextet determinant drops to {np.min(det):.3e}")
    return GeneratingSextet(fields, grid, float(np.min(det)))


def second_kind_operator(phis, sextet, grid, tables):
    """``sum_k (1/c d_t + i D)[phi_k] V_k``."""
    if len(phis) != 6:
        raise ValueError("need six scalar fields")
    if sextet.grid.shape != grid.shape:
        raise GridMismatchError("sextet sampled on a different grid")
    out = np.zeros(grid.shape + (4,), dtype=np.complex128)
    for phi, v in zip(phis, sextet.fields):
        out += qmul(wave_operator_scalar(phi, grid, tables), v)
    return out


def second_kind_residual(phis, sextet, grid, tables):
    return ResidualReport.from_residual(
        "maxwell-second-kind", second_kind_operator(phis, sextet, grid, tables), grid)


# ---------------------------------------------------------------------------
# the (t, x) reduction


def v1_closed_form(a1, a2, tables, grid):
    """``V1 = a1 c(x) + i a2`` sampled on a (t, x1) grid."""
    return a1 * tables.c(_x1(grid)) + 1j * a2 * np.ones(grid.shape)


def maxone1_operator(V1, grid, tables):
    """``(1/c d_t + i e1 d_x) V1 - i (V1 + V1*) c1 e1`` for a complex scalar V1."""
    V1 = _check_array(np.asarray(V1, dtype=np.complex128), grid)
    x = _x1(grid)
    q = np.zeros(grid.shape + (4,), dtype=np.complex128)
    q[..., 0] = V1
    out = _time_term(q, grid, tables.c(x))
    out = out + 1j * qmul(unit(1), partial(q, grid, "x1"))
    return out - 1j * qmul(q + qcconj(q), _e1_field(tables.c1(x)))


def maxone1_residual(V1, grid, tables):
    return ResidualReport.from_residual("maxwell-1d-longitudinal",
                                        maxone1_operator(V1, grid, tables), grid)


@dataclass(frozen=True)
class EMField1D:
    """Transverse fields on a (t, x1) grid, plus the longitudinal V1."""

    grid: object
    E2: np.ndarray
    E3: np.ndarray
    H2: np.ndarray
    H3: np.ndarray
    V1: np.ndarray | None = None

    def __post_init__(self):
        for name in ("E2", "E3", "H2", "H3"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != self.grid.shape or not np.all(np.isfinite(arr)):
                raise GridMismatchError(f"{name} must be finite with shape {self.grid.shape}")

    def V2(self, tables):
        x = _x1(self.grid)
        return np.sqrt(tables.eps(x)) * self.E2 + 1j * np.sqrt(tables.mu) * self.H2

    def V3(self, tables):
        x = _x1(self.grid)
        return np.sqrt(tables.eps(x)) * self.E3 + 1j * np.sqrt(tables.mu) * self.H3


def maxone2_operator(em, tables):
    """``(1/c d_t + i e1 d_x)(V2 e2 + V3 e3) - i ((V2+V2*) e2 + (V3+V3*) e3) c1 e1``."""
    grid = em.grid
    x = _x1(grid)
    zero = np.zeros(grid.shape)
    Vq = vector(zero, em.V2(tables), em.V3(tables))
    out = _time_term(Vq, grid, tables.c(x))
    out = out + 1j * qmul(unit(1), partial(Vq, grid, "x1"))
    return out - 1j * qmul(Vq + qcconj(Vq), _e1_field(tables.c1(x)))


def maxwell_1d_residual(em, tables):
    return ResidualReport.from_residual("maxwell-1d-transverse", maxone2_operator(em, tables), em.grid)


# explicit transforms of the bicomplex chain; each has an inverse


def phi_from_fields(em, tables):
    """``Phi = V2 + V3 e1``."""
    return Bicomplex.from_complex_pair(em.V2(tables), em.V3(tables))


def fields_from_phi(Phi, grid, tables):
    V2, V3 = Phi.complex_pair()
    x = _x1(grid)
    se = np.sqrt(tables.eps(x))
    sm = np.sqrt(tables.mu)
    return EMField1D(grid, V2.real / se, V3.real / se, V2.imag / sm, V3.imag / sm)


def xi_of_nodes(x, tables):
    """The change of variable: ``Psi(t, N(x)) = Phi(t, x)`` is a relabeling."""
    return tables.xi_of_x(x)


def w_from_psi(Psi, xi, tables):
    """``W = sqrt(C(xi)) Psi*``."""
    return bicomplex_conj_i(Psi) * tables.f(xi)


def psi_from_w(W, xi, tables):
    return bicomplex_conj_i(W * (1.0 / tables.f(xi)))


def w_from_fields(em, tables):
    """(w1, w2) with ``W = w1 + w2 e1``, as functions on the grid nodes."""
    xi = xi_of_nodes(_x1(em.grid), tables)
    W = w_from_psi(phi_from_fields(em, tables), xi, tables)
    return bicomplex_split(W)


def fields_from_w(w1, w2, grid, tables):
    """Invert :func:`w_from_fields`; ``w1``, ``w2`` are sampled at the (t, x1) nodes."""
    xi = xi_of_nodes(_x1(grid), tables)
    W = bicomplex_join(w1, w2)
    return fields_from_phi(psi_from_w(W, xi, tables), grid, tables)


def w_closed_form(em, tables):
    """The printed maps ``w1 = sqrt C (sqrt eps E2 - sqrt mu H3 j)``, ``w2 = sqrt C (sqrt eps E3 + sqrt mu H2 j)``."""
    x = _x1(em.grid)
    sC = np.sqrt(tables.c(x))
    se = np.sqrt(tables.eps(x))
    sm = np.sqrt(tables.mu)
    return (Hyperbolic(sC * se * em.E2, -sC * sm * em.H3),
            Hyperbolic(sC * se * em.E3, sC * sm * em.H2))


def fields_from_formal_powers(n, a1, a2, fp_table, grid, tables):
    """Fields on a (t, x1) grid from ``w1 = Z^(n)(a1)`` and ``w2 = Z^(n)(a2)``.

    ``fp_table`` must be built for ``f = 1/sqrt(C)`` (see
    ``formal_powers.table_from_medium(..., inverse=True)``); that generating
    function is the one under which W solves the transverse Maxwell pair.
    """
    mesh = grid.mesh()
    x = mesh[grid.axis("x1")]
    t = mesh[grid.axis("t")]
    xi = xi_of_nodes(x, tables)
    w1 = z_formal_power(n, a1, xi, t, fp_table)
    w2 = z_formal_power(n, a2, xi, t, fp_table)
    return fields_from_w(w1, w2, grid, tables)


def write_fields_csv(em, path):
    mesh = em.grid.mesh()
    t = mesh[em.grid.axis("t")]
    x = mesh[em.grid.axis("x1")]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "E2", "E3", "H2", "H3"])
        for row in zip(t.ravel(), x.ravel(), em.E2.ravel(), em.E3.ravel(),
                       em.H2.ravel(), em.H3.ravel()):
            w.writerow([repr(float(v)) for v in row])


def sextet_equivalence(phis, grid, tables, sextet=None):
    """Compare the Maxwell residual of ``sum phi_k V_k`` with the second-kind residual."""
    sextet = sextet or build_sextet(tables, grid)
    full = maxmain_operator(sextet.combine(phis), grid, tables)
    second = second_kind_operator(phis, sextet, grid, tables)
    weights = {"t": float(np.max(1.0 / tables.c(_x1(grid))))}
    bound = product_rule_bound(phis, sextet.fields, grid, weights)
    return paired_equivalence("maxwell", full, second, grid, bound)
