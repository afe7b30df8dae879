"""Random smooth test fields for the equivalence checks."""

from __future__ import annotations

import numpy as np


def random_trig_field(rng, grid, modes=3, freq=(0.5, 3.0), complex_valued=False):
    """A sum of ``modes`` random plane waves sampled on ``grid``.

    Frequencies are drawn from ``+-[freq[0], freq[1]]`` per axis and
    amplitudes from a standard normal. Real fields use sines with random
    phases; complex fields use ``exp(i k.x)``.
    """
    mesh = grid.mesh()
    out = np.zeros(grid.shape, dtype=np.complex128 if complex_valued else float)
    for _ in range(modes):
        k = rng.uniform(freq[0], freq[1], grid.ndim) * rng.choice([-1.0, 1.0], grid.ndim)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        arg = sum(kk * x for kk, x in zip(k, mesh)) + phase
        if complex_valued:
            amp = rng.normal() + 1j * rng.normal()
            out += amp * np.exp(1j * arg)
        else:
            out += rng.normal() * np.sin(arg)
    return out


def random_tuple(rng, grid, count, **kwargs):
    return [random_trig_field(rng, grid, **kwargs) for _ in range(count)]


def random_biquaternion(rng, size=None):
    shape = (4,) if size is None else (size, 4)
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)
