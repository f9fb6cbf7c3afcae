"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each case runs through the public solver API with an explicit ``backend`` so
that the rhs call overhead is included, as it is in real use.
"""

import argparse
import timeit

import numpy as np

from reparam import CaputoIVP, Method, SolverConfig, integrate_caputo_abm, integrate_classical
from reparam._kernels import compiled_available
from reparam.systems import DEFAULT_IC, LorenzParams, classical_lorenz, lorenz_rhs

P = LorenzParams()


def _abm(backend, n):
    ivp = CaputoIVP(lambda t, y: lorenz_rhs(P, y), 0.9, DEFAULT_IC, 5.0, 5.0 / n)
    return integrate_caputo_abm(ivp, backend)


def _rk45(backend):
    cfg = SolverConfig(abs_tol=1e-10, rel_tol=1e-10, backend=backend)
    return integrate_classical(classical_lorenz(P, DEFAULT_IC, 10.0), cfg)


def _rk4(backend):
    cfg = SolverConfig(Method.RK4, h=1e-3, backend=backend)
    return integrate_classical(classical_lorenz(P, DEFAULT_IC, 10.0), cfg)


CASES = {
    "abm_lorenz_n2000": lambda b: _abm(b, 2000),
    "abm_lorenz_n5000": lambda b: _abm(b, 5000),
    "rk45_lorenz_tau10": _rk45,
    "rk4_lorenz_tau10": _rk4,
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--case", choices=tuple(CASES), action="append")
    args = ap.parse_args()
    if not compiled_available():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")

    print(f"{'case':<20} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8} {'max |diff|':>11}")
    for name in args.case or CASES:
        fn = CASES[name]
        py = min(timeit.repeat(lambda: fn("python"), number=1, repeat=args.repeat))
        cc = min(timeit.repeat(lambda: fn("compiled"), number=1, repeat=args.repeat))
        a, b = fn("python"), fn("compiled")
        diff = float(np.max(np.abs(a.states - b.states))) if a.states.shape == b.states.shape else float("nan")
        print(f"{name:<20} {py:>11.3f} {cc:>13.3f} {py / cc:>7.1f}x {diff:>11.1e}")


if __name__ == "__main__":
    main()
