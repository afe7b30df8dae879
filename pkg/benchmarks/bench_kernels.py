"""Compare the compiled and pure-numpy kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from pseudoanalytic import _kernels_py

try:
    from pseudoanalytic import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)

    cases = []
    for n in (10_000, 1_000_000):
        p = rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))
        q = rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))
        cases.append((f"qmul n={n}", "qmul", (p, q)))
    for n in (2001, 1_000_001):
        cases.append((f"cumsimpson n={n}", "cumsimpson", (rng.normal(size=n), 1e-3)))

    print(f"{'kernel':<24}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}")
    for label, name, fargs in cases:
        t_py = _time(lambda: getattr(_kernels_py, name)(*fargs), args.repeat)
        if _kernels is None:
            print(f"{label:<24}{1e3 * t_py:>12.3f}{'n/a':>13}{'':>9}")
            continue
        t_c = _time(lambda: getattr(_kernels, name)(*fargs), args.repeat)
        ref = getattr(_kernels_py, name)(*fargs)
        got = np.asarray(getattr(_kernels, name)(*fargs))
        assert np.allclose(ref, got, rtol=1e-12, atol=1e-12), label
        print(f"{label:<24}{1e3 * t_py:>12.3f}{1e3 * t_c:>13.3f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
