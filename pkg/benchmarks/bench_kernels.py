"""Compare the compiled and pure-Python simplex kernels.

Runs the same workload (Opt-Menu and Opt-Single on a fixed batch of random
instances) under each available backend, checks that both return identical
values and reports wall-clock time.

    python3 benchmarks/bench_kernels.py [--instances 30] [--seed 7] [--repeat 3]
"""

import argparse
import random
import time
from fractions import Fraction

from typed_contracts import make_instance, opt_menu, opt_single
from typed_contracts.lp import available_backends, set_backend
from typed_contracts.lp import kernels


def _dist(rng, m, den=12):
    cuts = sorted(rng.randint(0, den) for _ in range(m - 1))
    return [Fraction(b - a, den) for a, b in zip([0] + cuts, cuts + [den])]


def workload(count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        T, n, m = rng.randint(2, 4), rng.randint(2, 4), rng.randint(2, 4)
        costs = [Fraction(0)] + sorted(Fraction(rng.randint(1, 12), 12) for _ in range(n - 1))
        out.append(
            make_instance(
                rewards=[Fraction(rng.randint(0, 24), 12) for _ in range(m)],
                forecasts=[[_dist(rng, m) for _ in range(n)] for _ in range(T)],
                costs=costs,
            )
        )
    return out


def run(instances):
    return [(opt_menu(inst).value, opt_single(inst).value) for inst in instances]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instances", type=int, default=30)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    instances = workload(args.instances, args.seed)
    original = kernels.BACKEND
    timings, answers = {}, {}
    try:
        for backend in available_backends():
            set_backend(backend)
            best = float("inf")
            for _ in range(args.repeat):
                start = time.perf_counter()
                answers[backend] = run(instances)
                best = min(best, time.perf_counter() - start)
            timings[backend] = best
    finally:
        set_backend(original)

    for backend, seconds in timings.items():
        print(f"{backend:>9}: {seconds:8.3f} s  (best of {args.repeat})")
    if len(timings) == 2:
        print(f"  speedup: {timings['python'] / timings['compiled']:8.2f}x")
        same = answers["compiled"] == answers["python"]
        print(f"identical results: {same}")
        return 0 if same else 1
    print("compiled kernels not built; only the Python backend was timed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
