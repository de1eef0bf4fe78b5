"""Time the compiled and pure-Python brute-force kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--atoms 8 12 16] [--programs 20] [--seed 1]
"""
import argparse
import random
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from corpus import random_ground_program  # noqa: E402

from frmagic import _kernels_py  # noqa: E402
from frmagic.grounder import GroundProgram  # noqa: E402
from frmagic.solver import _Encoded, _masks  # noqa: E402

try:
    from frmagic import _kernels
except ImportError:
    _kernels = None


def instances(rng, atoms, count):
    out = []
    while len(out) < count:
        rules = random_ground_program(rng, max_atoms=atoms, max_rules=2 * atoms).rules
        enc = _Encoded(GroundProgram.from_rules(rules))
        if len(enc.atoms) == atoms:
            out.append((*_masks(enc), len(enc.atoms)))
    return out


def timed(fn, cases, repeat):
    best = []
    for heads, pos, neg, n in cases:
        runs = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn(heads, pos, neg, n)
            runs.append(time.perf_counter() - t0)
        best.append(min(runs))
    return statistics.median(best)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, nargs="+", default=[8, 12, 16])
    ap.add_argument("--programs", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the Python kernel is available")
    rng = random.Random(args.seed)
    print(f"{'atoms':>5} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for n in args.atoms:
        cases = instances(rng, n, args.programs)
        if _kernels is not None:
            for heads, pos, neg, k in cases:
                assert _kernels.brute_force_stable_masks(heads, pos, neg, k) == \
                    _kernels_py.brute_force_stable_masks(heads, pos, neg, k)
        py = timed(_kernels_py.brute_force_stable_masks, cases, args.repeat)
        if _kernels is None:
            print(f"{n:>5} {py * 1e3:>12.3f} {'-':>12} {'-':>8}")
            continue
        cy = timed(_kernels.brute_force_stable_masks, cases, args.repeat)
        print(f"{n:>5} {py * 1e3:>12.3f} {cy * 1e3:>12.3f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
