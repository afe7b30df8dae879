"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def qmul(p, q):
    """Row-wise biquaternion product of two (N, 4) arrays."""
    p0, p1, p2, p3 = p[:, 0], p[:, 1], p[:, 2], p[:, 3]
    q0, q1, q2, q3 = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    out = np.empty(p.shape, dtype=np.complex128)
    out[:, 0] = p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3
    out[:, 1] = p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2
    out[:, 2] = p0 * q2 + p2 * q0 + p3 * q1 - p1 * q3
    out[:, 3] = p0 * q3 + p3 * q0 + p1 * q2 - p2 * q1
    return out


def cumsimpson(y, h):
    """Cumulative composite Simpson integral from the first node.

    Even nodes get the plain composite rule. Odd nodes add the integral of
    the quadratic through the neighbouring three samples over one interval.
    """
    y = np.asarray(y, dtype=np.float64)
    n = y.shape[0]
    if n < 3:
        raise ValueError("need at least 3 samples")
    out = np.zeros(n)
    pairs = h / 3.0 * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(pairs)
    # odd nodes with a right neighbour
    odd = np.arange(1, n - 1, 2)
    out[odd] = out[odd - 1] + h / 12.0 * (5.0 * y[odd - 1] + 8.0 * y[odd] - y[odd + 1])
    if n % 2 == 0:
        i = n - 1
        out[i] = out[i - 1] + h / 12.0 * (-y[i - 2] + 8.0 * y[i - 1] + 5.0 * y[i])
    return out
