"""Compare the compiled and pure-Python interval Horner kernels.

Two workloads: the final-level certificate replay of a depth-3 standard tree
(what ``verify`` does), and random dense polynomials of higher degree on
boxes with large denominators.

    python3 benchmarks/bench_kernel.py [--repeat 5]
"""
import argparse
import random
import time
from fractions import Fraction

from algcantor import kernels
from algcantor.builder import Caps, build, conditions, poly_window
from algcantor.interval import Box, RationalInterval
from algcantor.polyenum import IntPolynomial, enumerate_poly, evaluate_interval


def replay_jobs():
    tree = build("standard", Caps(k_max=3, n_max=2))
    level = tree.level(3)
    jobs = []
    for n, m, phi in conditions(3, 2, poly_window(3, True, 50)):
        jobs.append((enumerate_poly(n, m), Box(tuple(level[i] for i in phi))))
    return jobs


def dense_jobs(count=300, seed=0):
    rng = random.Random(seed)
    jobs = []
    for _ in range(count):
        n = rng.randint(1, 3)
        terms = {
            tuple(rng.randint(0, 6) for _ in range(n)): rng.randint(-10**6, 10**6)
            for _ in range(rng.randint(5, 25))
        }
        factors = []
        for _ in range(n):
            lo = Fraction(rng.randint(-10**5, 10**5), rng.randint(1, 10**5))
            factors.append(RationalInterval(lo, lo + Fraction(1, rng.randint(1, 10**5))))
        jobs.append((IntPolynomial.from_dict(n, terms), Box(tuple(factors))))
    return jobs


def timed(jobs, kernel, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for p, box in jobs:
            evaluate_interval(p, box, kernel=kernel)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.compiled_horner_enclosure is None:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"default backend: {kernels.BACKEND}")
    for name, jobs in (("replay depth-3 final level", replay_jobs()), ("dense random", dense_jobs())):
        for p, box in jobs:  # warm the cached Horner plans
            p.horner_plan()
        py = timed(jobs, kernels.python_horner_enclosure, args.repeat)
        line = f"{name:28s} {len(jobs):5d} boxes  python {py * 1e3:8.1f} ms"
        if kernels.compiled_horner_enclosure is not None:
            c = timed(jobs, kernels.compiled_horner_enclosure, args.repeat)
            line += f"  cython {c * 1e3:8.1f} ms  speedup {py / c:4.2f}x"
        print(line)


if __name__ == "__main__":
    main()
