"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the Hermitian Jacobi solver and one oracle search on both backends and
checks that they return the same numbers.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from entsuper import _fallback
from entsuper.linalg import SIGMA_YY
from entsuper.oracle import eigen_ensemble, random_isometry
from entsuper.states import rng_for, sample_random

try:
    from entsuper import _kernels as compiled
except ImportError:
    compiled = None


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_jacobi(impl, mats, repeat):
    return _best_of(lambda: [impl.jacobi_eigh(m)[0] for m in mats], repeat)


def bench_sweeps(impl, problem, repeat):
    tau, mu, u0 = problem

    def run():
        u = u0.copy()
        return [impl.rotation_sweeps(u, tau, mu, 0, -1.0, 20, 1e-9, 0.0)[-1]]

    return _best_of(run, repeat)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1

    rng = rng_for(7)
    mats = []
    for n in (4, 8):
        for _ in range(50):
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            mats.append((a + a.conj().T) / 2)

    rho = sample_random((2, 2, 4), 7).reduced_ab()
    mu, s = eigen_ensemble(rho)
    tau = np.ascontiguousarray(s.T @ SIGMA_YY @ s)
    problem = (tau, mu, random_isometry(rng, 2 * mu.size, mu.size))

    print(f"{'kernel':<28}{'compiled':>12}{'fallback':>12}{'speedup':>10}  agree")
    for name, fn, arg in (("jacobi_eigh x100 (4, 8)", bench_jacobi, mats),
                          ("rotation_sweeps x20 (8x4)", bench_sweeps, problem)):
        tc, oc = fn(compiled, arg, args.repeat)
        tf, of = fn(_fallback, arg, args.repeat)
        agree = all(np.allclose(a, b, atol=1e-12, rtol=0) for a, b in zip(oc, of))
        print(f"{name:<28}{tc * 1e3:>10.2f}ms{tf * 1e3:>10.2f}ms{tf / tc:>9.1f}x  {agree}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
