"""Time the compiled and numpy counting kernels on one simulated day.

    python benchmarks/bench_core.py [--n 23400] [--repeat 20]
"""

import argparse
import timeit

import numpy as np

from jumpact import _core_py
from jumpact.simulate import SimulationModel, simulate_path

try:
    from jumpact import _core
except ImportError:
    _core = None


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=23_400)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    x = simulate_path(SimulationModel(1.2, 0.01, n=args.n, seed=1))[1]
    tau = 0.05 * args.n**0.375
    taus = [tau, 2 * tau]

    backends = {"numpy": _core_py}
    if _core is not None:
        backends["cython"] = _core
    else:
        print("compiled core not built; timing numpy only")

    results = {}
    for name, mod in backends.items():
        for label, call in (("smoothed_counts", lambda: mod.smoothed_counts(x, taus, 3)),
                            ("threshold_counts", lambda: mod.threshold_counts(x, taus))):
            best = min(timeit.repeat(call, number=1, repeat=args.repeat))
            results[(name, label)] = best
            print(f"{name:<7} {label:<17} {best * 1e3:8.3f} ms")

    if _core is not None:
        for label in ("smoothed_counts", "threshold_counts"):
            print(f"speedup {label:<17} {results[('numpy', label)] / results[('cython', label)]:6.1f}x")
        np.testing.assert_allclose(_core.smoothed_counts(x, taus, 3), _core_py.smoothed_counts(x, taus, 3),
                                   rtol=1e-12)


if __name__ == "__main__":
    main()
