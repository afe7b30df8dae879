"""Biquaternion, hyperbolic and bicomplex arithmetic.

Biquaternions are stored as complex arrays whose last axis holds the four
components over ``e0 = 1, e1, e2, e3``. Every array function here therefore
works equally on a single value (shape ``(4,)``) and on a sampled field
(shape ``grid.shape + (4,)``). :class:`Biquaternion` is a thin immutable
wrapper for single values.

:class:`Hyperbolic` and :class:`Bicomplex` hold their real components as
scalars or as equally shaped arrays, so the same classes serve for values and
for fields.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ZeroDivisorError

ZERO_DIVISOR_RTOL = 1e-12


# ---------------------------------------------------------------------------
# array-level biquaternion operations


def as_bq(q):
    """Coerce a Biquaternion, a scalar or a (..., 4) array to a complex array."""
    if isinstance(q, Biquaternion):
        return q.coeffs
    arr = np.asarray(q, dtype=np.complex128)
    if arr.ndim == 0:
        out = np.zeros(4, dtype=np.complex128)
        out[0] = arr
        return out
    if arr.shape[-1] != 4:
        raise ValueError(f"last axis must have length 4, got shape {arr.shape}")
    return arr


def qmul(p, q):
    """Biquaternion product of broadcastable (..., 4) arrays."""
    p = as_bq(p)
    q = as_bq(q)
    shape = np.broadcast_shapes(p.shape, q.shape)
    pb = np.ascontiguousarray(np.broadcast_to(p, shape).reshape(-1, 4))
    qb = np.ascontiguousarray(np.broadcast_to(q, shape).reshape(-1, 4))
    return _backend.qmul(pb, qb).reshape(shape)


def qconj(q):
    """Quaternionic conjugation: flip the sign of the vector part."""
    q = as_bq(q)
    out = -q
    out[..., 0] = q[..., 0]
    return out


def qcconj(q):
    """Complex conjugation of each component."""
    return np.conj(as_bq(q))


def qnorm2(q):
    """The complex scalar ``q0**2 + q1**2 + q2**2 + q3**2`` (no moduli)."""
    q = as_bq(q)
    return np.sum(q * q, axis=-1)


def qabs(q):
    """Euclidean length of the component vector, sqrt(sum |q_k|^2)."""
    q = as_bq(q)
    return np.sqrt(np.sum(np.abs(q) ** 2, axis=-1))


def invertible_mask(q):
    q = as_bq(q)
    n2 = qnorm2(q)
    scale = 1.0 + np.sum(np.abs(q) ** 2, axis=-1)
    return np.abs(n2) >= ZERO_DIVISOR_RTOL * scale


def qinv(q):
    """Nodewise inverse ``conj(q) / (q0^2 + ... + q3^2)``.

    Raises ZeroDivisorError if any node is a zero divisor.
    """
    q = as_bq(q)
    ok = invertible_mask(q)
    if not np.all(ok):
        bad = np.argwhere(~np.atleast_1d(ok))
        raise ZeroDivisorError(
            f"biquaternion is a zero divisor at {len(bad)} node(s), first {tuple(bad[0])}"
        )
    return qconj(q) / qnorm2(q)[..., None]


def unit(k, dtype=np.complex128):
    out = np.zeros(4, dtype=dtype)
    out[k] = 1.0
    return out


def vector(v1, v2, v3, scalar=0.0):
    """Stack component arrays into a biquaternion array."""
    v1, v2, v3, scalar = np.broadcast_arrays(
        np.asarray(v1, dtype=np.complex128),
        np.asarray(v2, dtype=np.complex128),
        np.asarray(v3, dtype=np.complex128),
        np.asarray(scalar, dtype=np.complex128),
    )
    return np.stack([scalar, v1, v2, v3], axis=-1)


def scalar_times(s, q):
    """Multiply a complex scalar field by a biquaternion field."""
    return np.asarray(s)[..., None] * as_bq(q)


def component_det(quartet):
    """Nodewise 4x4 complex determinant of the component matrix.

    ``quartet`` is a sequence of four (..., 4) arrays; column k holds the
    components of the k-th member.
    """
    mat = np.stack([as_bq(b) for b in quartet], axis=-1)
    return np.linalg.det(mat)


# ---------------------------------------------------------------------------
# value wrapper


class Biquaternion:
    """An immutable complex quaternion ``q0 + q1 e1 + q2 e2 + q3 e3``."""

    __slots__ = ("_c",)

    def __init__(self, q0=0.0, q1=0.0, q2=0.0, q3=0.0):
        c = np.array([q0, q1, q2, q3], dtype=np.complex128)
        c.flags.writeable = False
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("Biquaternion is immutable")

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=np.complex128)
        if arr.shape != (4,):
            raise ValueError(f"expected shape (4,), got {arr.shape}")
        return cls(*arr)

    @property
    def coeffs(self):
        return self._c

    q0 = property(lambda self: complex(self._c[0]))
    q1 = property(lambda self: complex(self._c[1]))
    q2 = property(lambda self: complex(self._c[2]))
    q3 = property(lambda self: complex(self._c[3]))

    @property
    def scalar(self):
        return self.q0

    @property
    def vector(self):
        return self._c[1:].copy()

    def __add__(self, other):
        return Biquaternion.from_array(self._c + as_bq(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Biquaternion.from_array(self._c - as_bq(other))

    def __rsub__(self, other):
        return Biquaternion.from_array(as_bq(other) - self._c)

    def __neg__(self):
        return Biquaternion.from_array(-self._c)

    def __mul__(self, other):
        if isinstance(other, Biquaternion):
            return bq_mul(self, other)
        if np.isscalar(other):
            return Biquaternion.from_array(self._c * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Biquaternion.from_array(other * self._c)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Biquaternion.from_array(self._c / other)
        return NotImplemented

    def __eq__(self, other):
        try:
            return bool(np.array_equal(self._c, as_bq(other)))
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(tuple(self._c))

    def isclose(self, other, tol=1e-12):
        o = as_bq(other)
        return bool(np.max(np.abs(self._c - o)) <= tol * (1.0 + np.max(np.abs(o))))

    def __repr__(self):
        return "Biquaternion({}, {}, {}, {})".format(*[repr(complex(c)) for c in self._c])


E0 = Biquaternion(1)
E1 = Biquaternion(0, 1)
E2 = Biquaternion(0, 0, 1)
E3 = Biquaternion(0, 0, 0, 1)


def _wrap_like(template, arr):
    if isinstance(template, Biquaternion):
        return Biquaternion.from_array(arr)
    return arr


def bq_mul(p, q):
    """Product ``p q``. Returns a Biquaternion when ``p`` is one, else an array."""
    return _wrap_like(p, qmul(p, q))


def bq_conj(q):
    return _wrap_like(q, qconj(q))


def bq_complex_conj(q):
    return _wrap_like(q, qcconj(q))


def bq_inverse(q):
    return _wrap_like(q, qinv(q))


def right_mul(p):
    """The operator ``M^p: q -> q p``."""

    def apply(q):
        return _wrap_like(q, qmul(q, p))

    return apply


# ---------------------------------------------------------------------------
# hyperbolic numbers


@dataclass(frozen=True)
class Hyperbolic:
    """``u + v j`` with ``j**2 = +1``. Components may be arrays."""

    u: object = 0.0
    v: object = 0.0

    def __add__(self, other):
        other = _as_hyp(other)
        return Hyperbolic(self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_hyp(other)
        return Hyperbolic(self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        return _as_hyp(other) - self

    def __neg__(self):
        return Hyperbolic(-self.u, -self.v)

    def __mul__(self, other):
        if isinstance(other, Hyperbolic):
            return hyp_mul(self, other)
        return Hyperbolic(self.u * other, self.v * other)

    def __rmul__(self, other):
        return Hyperbolic(other * self.u, other * self.v)

    def conj(self):
        return hyp_conj(self)

    def modulus2(self):
        """``u**2 - v**2``, the real number ``w * conj(w)``."""
        return self.u * self.u - self.v * self.v

    def isclose(self, other, tol=1e-12):
        other = _as_hyp(other)
        du = np.max(np.abs(np.asarray(self.u) - other.u))
        dv = np.max(np.abs(np.asarray(self.v) - other.v))
        return bool(max(du, dv) <= tol)


J = Hyperbolic(0.0, 1.0)


def _as_hyp(x):
    if isinstance(x, Hyperbolic):
        return x
    if np.iscomplexobj(x):
        raise TypeError("complex values do not embed in the hyperbolic numbers")
    return Hyperbolic(x, 0.0)


def hyp_mul(a, b):
    a, b = _as_hyp(a), _as_hyp(b)
    return Hyperbolic(a.u * b.u + a.v * b.v, a.u * b.v + a.v * b.u)


def hyp_conj(a):
    a = _as_hyp(a)
    return Hyperbolic(a.u, -a.v)


def hyp_inverse(a):
    """``conj(a) / (u^2 - v^2)``; zero divisors lie on the lines ``u = +-v``."""
    a = _as_hyp(a)
    m = np.asarray(a.modulus2(), dtype=float)
    scale = 1.0 + np.asarray(a.u, dtype=float) ** 2 + np.asarray(a.v, dtype=float) ** 2
    if np.any(np.abs(m) < ZERO_DIVISOR_RTOL * scale):
        raise ZeroDivisorError("hyperbolic number is a zero divisor (u**2 == v**2)")
    return Hyperbolic(a.u / m, -a.v / m)


def hyp_pow(a, n):
    out = Hyperbolic(np.ones_like(np.asarray(a.u, dtype=float)), np.zeros_like(np.asarray(a.v, dtype=float)))
    for _ in range(n):
        out = hyp_mul(out, a)
    return out


# ---------------------------------------------------------------------------
# bicomplex numbers


@dataclass(frozen=True)
class Bicomplex:
    """``a + b i + c e1 + d (i e1)`` with commuting units ``i``, ``e1``.

    ``i**2 = e1**2 = -1`` and ``(i e1)**2 = +1``.
    """

    a: object = 0.0
    b: object = 0.0
    c: object = 0.0
    d: object = 0.0

    @classmethod
    def from_complex_pair(cls, p, q):
        """``P + Q e1`` with P, Q complex in the ``i`` unit."""
        p = np.asarray(p)
        q = np.asarray(q)
        return cls(p.real, p.imag, q.real, q.imag)

    def complex_pair(self):
        return (np.asarray(self.a) + 1j * np.asarray(self.b),
                np.asarray(self.c) + 1j * np.asarray(self.d))

    def __add__(self, o):
        return Bicomplex(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Bicomplex(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Bicomplex(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Bicomplex):
            return bicomplex_mul(self, other)
        return Bicomplex(self.a * other, self.b * other, self.c * other, self.d * other)

    def __rmul__(self, other):
        return Bicomplex(other * self.a, other * self.b, other * self.c, other * self.d)

    def isclose(self, o, tol=1e-12):
        diffs = [np.max(np.abs(np.asarray(x) - y)) for x, y in
                 zip((self.a, self.b, self.c, self.d), (o.a, o.b, o.c, o.d))]
        return bool(max(diffs) <= tol)


def bicomplex_mul(x, y):
    p1, q1 = x.complex_pair()
    p2, q2 = y.complex_pair()
    return Bicomplex.from_complex_pair(p1 * p2 - q1 * q2, p1 * q2 + q1 * p2)


def bicomplex_conj_i(x):
    """Complex conjugation ``i -> -i`` with ``e1`` fixed."""
    return Bicomplex(x.a, -x.b, x.c, -x.d)


def bicomplex_split(w):
    """Write ``W = w1 + w2 e1`` with ``w1``, ``w2`` hyperbolic in ``j = i e1``.

    Matching coefficients uses ``(u + v j) e1 = u e1 - v i``.
    """
    return Hyperbolic(w.a, w.d), Hyperbolic(w.c, -w.b)


def bicomplex_join(w1, w2):
    w1, w2 = _as_hyp(w1), _as_hyp(w2)
    return Bicomplex(w1.u, -w2.v, w2.u, w1.v)


def bicomplex_conj_j(x):
    """Conjugation ``j -> -j`` applied to each hyperbolic part of the split.

    This fixes ``e1`` and so coincides with :func:`bicomplex_conj_i`; it is
    computed through the split as an independent path.
    """
    w1, w2 = bicomplex_split(x)
    return bicomplex_join(hyp_conj(w1), hyp_conj(w2))


def bicomplex_mul_j(x):
    """Multiply by ``j = i e1``."""
    return Bicomplex(x.d, -x.c, -x.b, x.a)
