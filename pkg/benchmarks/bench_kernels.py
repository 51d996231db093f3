"""Time the compiled round kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--rounds N] [--repeat R]
"""

import argparse
import timeit

import numpy as np

from ptsim._kernels import compiled, fallback

# conditional probabilities of a maximally entangled pair at the exceptional point
PS0 = PS1 = 0.5
PZ0, PZ1 = 1.0, 0.0


def _cases(mod, n):
    bits = fallback.source_bits(2, 0.2, 42, 0, n)
    return {
        "uniforms": lambda: mod.uniforms(42, 0, n),
        "source_bits[iid]": lambda: mod.source_bits(1, 0.2, 42, 0, n),
        "source_bits[markov]": lambda: mod.source_bits(2, 0.2, 42, 0, n),
        "sample_rounds": lambda: mod.sample_rounds(bits, PS0, PS1, PZ0, PZ1, 42, 1, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    core = compiled()
    backends = [("python", fallback)] + ([("cython", core)] if core is not None else [])
    if core is None:
        print("compiled kernels not built; timing the fallback only")

    results = {}
    for name, mod in backends:
        for case, fn in _cases(mod, args.rounds).items():
            fn()  # warm up
            results[case, name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    print(f"{'kernel':<22}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for case in _cases(fallback, 1):
        py = results[case, "python"]
        cy = results.get((case, "cython"))
        if cy is None:
            print(f"{case:<22}{py * 1e3:>14.2f}{'-':>14}{'-':>10}")
        else:
            print(f"{case:<22}{py * 1e3:>14.2f}{cy * 1e3:>14.2f}{py / cy:>9.1f}x")

    if core is not None:
        bits = fallback.source_bits(2, 0.2, 7, 0, 10_000)
        same = all(
            np.array_equal(a, b)
            for a, b in zip(
                fallback.sample_rounds(bits, 0.3, 0.6, 0.2, 0.9, 7, 1, 2),
                core.sample_rounds(bits, 0.3, 0.6, 0.2, 0.9, 7, 1, 2),
            )
        )
        print(f"outputs identical: {same}")


if __name__ == "__main__":
    main()
