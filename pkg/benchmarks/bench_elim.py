"""Timing comparison of the elimination kernels.

Runs every importable kernel (pure Python, and the compiled one when
built) over the same random integer matrices and reports best-of-N
wall times.  Ranks are cross-checked; a disagreement aborts the run.

    python3 benchmarks/bench_elim.py
    python3 benchmarks/bench_elim.py --sizes 60 120 240 --repeats 5
"""

import argparse
import random
import time

from drcalc import elim


def random_matrix(rng, size, density):
    rows = []
    for _ in range(size):
        row = [
            rng.randint(-9, 9) if rng.random() < density else 0
            for _ in range(size)
        ]
        rows.append(row)
    # inject some dependent rows so the pivot search does real work
    for _ in range(size // 8):
        i, j = rng.randrange(size), rng.randrange(size)
        scale = rng.randint(-3, 3)
        rows[i] = [a + scale * b for a, b in zip(rows[i], rows[j])]
    return rows


def best_time(fn, rows, size, repeats):
    best = None
    rank = None
    for _ in range(repeats):
        work = [list(r) for r in rows]  # kernels consume input
        started = time.perf_counter()
        rank = fn(work, size)
        elapsed = time.perf_counter() - started
        best = elapsed if best is None else min(best, elapsed)
    return best, rank


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    parser.add_argument("--density", type=float, default=0.3)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    kernels = elim.available_kernels()
    print(f"active backend: {elim.backend_name()}")
    print(f"kernels: {', '.join(name for name, _ in kernels)}")
    header = f"{'size':>6} {'density':>8}"
    for name, _ in kernels:
        header += f" {name + ' (ms)':>14}"
    if len(kernels) == 2:
        header += f" {'speedup':>8}"
    header += f" {'rank':>6}"
    print(header)

    rng = random.Random(args.seed)
    for size in args.sizes:
        rows = random_matrix(rng, size, args.density)
        times = []
        ranks = []
        for _, fn in kernels:
            elapsed, rank = best_time(fn, rows, size, args.repeats)
            times.append(elapsed)
            ranks.append(rank)
        if len(set(ranks)) != 1:
            raise SystemExit(
                f"kernel disagreement at size {size}: {ranks}"
            )
        line = f"{size:>6} {args.density:>8.2f}"
        for elapsed in times:
            line += f" {elapsed * 1000:>14.2f}"
        if len(times) == 2:
            line += f" {times[0] / times[1]:>7.1f}x"
        line += f" {ranks[0]:>6}"
        print(line)


if __name__ == "__main__":
    main()
