"""Compiled versus pure-Python matroid kernels.

Times beta and specialness over random rank-4 matroids on 8 and 9 elements,
the workload of the database tallies.

    python benchmarks/bench_kernels.py [--count 300] [--repeat 3]
"""
import argparse
import random
import time

from mldeg import _kernels_py, kernels
from mldeg.matroid import matroid_from_matrix


def random_bases(rng, n, r, count):
    out = []
    while len(out) < count:
        M = [[rng.choice([0, 1, 1, -1, 2, 3]) for _ in range(n)] for _ in range(r)]
        try:
            mat = matroid_from_matrix(M)
        except ValueError:
            continue
        if mat.rank == r:
            out.append(mat.sorted_bases())
    return out


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled_backend is None:
        print("compiled extension not built; only the Python backend is available")
    backends = [("python", _kernels_py)]
    if kernels.compiled_backend is not None:
        backends.append(("cython", kernels.compiled_backend))
    rng = random.Random(0)
    print(f"{'workload':<28}{'backend':<9}{'seconds':>10}{'per item (us)':>16}{'speedup':>9}")
    for n, r in ((8, 4), (9, 4)):
        data = random_bases(rng, n, r, args.count)
        for label, op in (("beta", "beta_crapo"), ("special", "special_basis")):
            base = None
            results = []
            for name, mod in backends:
                f = getattr(mod, op)
                results.append([f(b, n, r) for b in data])
                t = timed(lambda: [f(b, n, r) for b in data], args.repeat)
                base = base or t
                print(f"{f'{label} ({n},{r}) x{len(data)}':<28}{name:<9}{t:>10.4f}"
                      f"{1e6 * t / len(data):>16.1f}{base / t:>8.1f}x")
            assert all(res == results[0] for res in results), "backends disagree"


if __name__ == "__main__":
    main()
