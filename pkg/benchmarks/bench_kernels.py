"""Compare the compiled and pure-Python estimator kernels.

Usage: python benchmarks/bench_kernels.py [--n 500] [--k-max 360] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from weibulltail import _backend
from weibulltail.distributions import Gamma, SeededStream, sample
from weibulltail.estimators import estimator_curves


def best_of(fn, repeat: int, number: int) -> float:
    """Best mean seconds per call over ``repeat`` rounds of ``number`` calls."""
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=500)
    parser.add_argument("--k-max", type=int, default=360)
    parser.add_argument("--replications", type=int, default=100, help="curves per simulated study")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = _backend.available_backends()
    samples = [sample(Gamma(4, 1), args.n, SeededStream(0, i)) for i in range(args.replications)]
    x = samples[0]

    results = {}
    for name, kernel in backends.items():
        one = best_of(lambda: estimator_curves(x, args.k_max, kernel), args.repeat, 20)
        study = best_of(lambda: [estimator_curves(s, args.k_max, kernel) for s in samples], args.repeat, 1)
        results[name] = (one, study)

    print(f"n={args.n} k_max={args.k_max} replications={args.replications}")
    print(f"{'backend':<8} {'one curve set':>16} {'study':>12}")
    for name, (one, study) in results.items():
        print(f"{name:<8} {one * 1e6:>13.1f} us {study * 1e3:>9.2f} ms")
    if "cython" in results:
        py, cy = results["python"], results["cython"]
        print(f"speedup  {py[0] / cy[0]:>15.1f}x {py[1] / cy[1]:>11.1f}x")
        py_curves = estimator_curves(x, args.k_max, backends["python"])
        cy_curves = estimator_curves(x, args.k_max, backends["cython"])
        fields = ["theta_tilde", "theta_check", "theta_hat", "b_hat", "amse_hat"]
        same = all(np.array_equal(getattr(py_curves, f), getattr(cy_curves, f), equal_nan=True) for f in fields)
        print(f"bit-identical: {same}")
    else:
        print("compiled kernel not built; only the fallback was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
