"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row times one kernel on the same random max-plus data in both modes and
checks that the results agree.
"""

import argparse
import random
import time
from fractions import Fraction

from tropopt import MAX_PLUS, MAX_TIMES, kernels


def random_matrix(rng, sf, n, density=0.8):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() > density:
                row.append(None)
            elif sf.additive:
                row.append(Fraction(rng.randint(-20, 20), rng.choice((1, 2, 4))))
            else:
                row.append(2.0 ** rng.uniform(-5, 5))
        rows.append(tuple(row))
    return tuple(rows)


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def cases(rng):
    for sf in (MAX_PLUS, MAX_TIMES):
        for n in (8, 16, 32):
            A = random_matrix(rng, sf, n)
            yield f"star        {sf.name:9} n={n:<3}", lambda sf=sf, A=A: kernels.star(sf, A)
        for n in (4, 6, 8):
            A = random_matrix(rng, sf, n)
            B = random_matrix(rng, sf, n, density=0.4)
            ident = tuple(tuple(sf.one if i == j else None for j in range(n)) for i in range(n))
            yield (f"word_traces {sf.name:9} n={n:<3}",
                   lambda sf=sf, A=A, B=B, R=ident, n=n: kernels.word_traces(sf, A, B, R, False, 1, n - 1))
    sf = MAX_PLUS
    A = random_matrix(rng, sf, 3, density=1.0)
    z = (None,) * 3
    axis = [Fraction(k, 2) for k in range(-8, 9)]
    points = [(a, b, c) for a in axis for b in axis for c in axis]
    p = tuple(Fraction(rng.randint(0, 6)) for _ in range(3))
    yield (f"eval_points {sf.name:9} {len(points)} pts",
           lambda: kernels.eval_points(sf, points, A, p, z, None, (z,) * 3, z, (), ()))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    if not kernels.HAVE_COMPILED:
        print("compiled kernels are not available; only the fallback can run")
        return
    rng = random.Random(args.seed)
    print(f"{'kernel':36} {'python':>10} {'compiled':>10} {'speedup':>8}  agree")
    for label, fn in cases(rng):
        with kernels.mode("python"):
            t_py, r_py = timed(fn, args.repeat)
        with kernels.mode("compiled"):
            t_c, r_c = timed(fn, args.repeat)
        agree = _agree(r_py, r_c)
        print(f"{label:36} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms {t_py / t_c:7.1f}x  {agree}")


def _agree(a, b):
    if isinstance(a, (tuple, list)):
        return len(a) == len(b) and all(_agree(x, y) for x, y in zip(a, b))
    if isinstance(a, float) and isinstance(b, float):
        return abs(a - b) <= 1e-9 * max(abs(a), abs(b), 1.0)
    return a == b


if __name__ == "__main__":
    main()
