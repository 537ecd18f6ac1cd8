"""Compare the compiled and pure-Python order kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Inputs are a rho box, the club box for widths 4,4,4 and the Boolean lattice
on six atoms.  Each kernel is timed per backend (best of ``--repeat`` runs) and
the results are checked for equality before timing.
"""
import argparse
import timeit

import numpy as np

from ladders import kernels
from ladders.club_ladder import build_club
from ladders.generators import boolean, substream
from ladders.rho_lattice import BuildChoices, Box, box_poset, build_rho, random_f_family


def inputs(seed):
    rng = substream(seed, "bench")
    t = build_rho(5, random_f_family(rng, 5, 4), BuildChoices())
    yield "rho box 5x4", box_poset(t, Box(5, 4, t.max_value + 4)).leq
    yield "club 4,4,4", build_club([4, 4, 4], seed=seed).poset.leq
    yield "boolean lattice (64)", boolean(6).leq


def cases(impl, leq):
    join = impl.join_table(leq)
    members = list(range(min(len(leq), 24)))
    return {
        "transitive_closure": lambda: impl.transitive_closure(leq),
        "order_violation": lambda: impl.order_violation(leq),
        "join_table": lambda: impl.join_table(leq),
        "cover_matrix": lambda: impl.cover_matrix(leq),
        "breadth_violation(2)": lambda: impl.breadth_violation(join, members, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    backs = kernels.backends()
    if "compiled" not in backs:
        print("compiled kernels are not built; timing the Python backend only")
    print(f"{'input':<24} {'kernel':<22}" + "".join(f"{b:>12}" for b in backs) + "   speedup")
    for name, leq in inputs(args.seed):
        leq = np.ascontiguousarray(leq)
        results = {b: cases(impl, leq) for b, impl in backs.items()}
        for kernel in results["python"]:
            outs = [results[b][kernel]() for b in backs]
            assert all(np.array_equal(np.asarray(outs[0], dtype=object), np.asarray(o, dtype=object))
                       for o in outs[1:]), kernel
            times = {b: min(timeit.repeat(results[b][kernel], number=1, repeat=args.repeat))
                     for b in backs}
            row = f"{name:<24} {kernel:<22}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backs)
            if "compiled" in times:
                row += f"   {times['python'] / max(times['compiled'], 1e-9):7.1f}x"
            print(row)


if __name__ == "__main__":
    main()
