"""Compare the compiled kernels with their pure-Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from deltatrap import _fallback
from deltatrap import kernels

try:
    from deltatrap import _kernels as compiled
except ImportError:
    compiled = None


def _hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def cases(rng):
    y = np.linspace(0.0, 12.0, 100_001)
    g = y * y - 2.0 * 0.7335
    d = rng.normal(size=256)
    e = rng.normal(size=255)
    h128 = _hermitian(128, rng)
    h48 = _hermitian(48, rng)
    return [
        ("numerov, 1e5 steps", lambda m: m.numerov(g, 1.0, 1.0, y[1] - y[0])),
        ("tridiag_ql, n=256 values", lambda m: m.tridiag_ql(d, e)),
        ("tridiag_ql, n=256 vectors", lambda m: m.tridiag_ql(d, e, np.eye(256))),
        ("householder_tridiag, n=128", lambda m: m.householder_tridiag(h128)),
        ("jacobi_hermitian, n=48", lambda m: m.jacobi_hermitian(h48)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(7)
    print(f"active backend: {kernels.BACKEND}")
    if compiled is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':30s} {'compiled [s]':>13s} {'python [s]':>11s} {'speedup':>8s}")
    for name, fn in cases(rng):
        t_py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:30s} {'-':>13s} {t_py:11.4f} {'-':>8s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        print(f"{name:30s} {t_c:13.4f} {t_py:11.4f} {t_py / t_c:8.1f}")


if __name__ == "__main__":
    main()
