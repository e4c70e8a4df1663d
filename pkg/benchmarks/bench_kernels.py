#!/usr/bin/env python3
"""Compare the numba and numpy homomorphism-search backends.

Usage:
    python benchmarks/bench_kernels.py [--repeat N] [--scale small|large]
"""
import argparse
import random
import time
from itertools import permutations

from symremoval import kernels
from symremoval.cayley import TRIANGLE, cayley_graph
from symremoval.cayley_hyper import ap_instance, complete_partite_template
from symremoval.groups import cyclic_product_group
from symremoval.hypergraph import _Plan, new_directed

K4_3 = new_directed({1, 2, 3, 4}, 3, [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])


def cases(scale):
    rnd = random.Random(0)
    sizes = [40, 120] if scale == "small" else [120, 400]
    for n in sizes:
        s = {x for x in range(1, n) if rnd.random() < 0.3}
        yield f"triangle -> Cy(Z_{n}, |S|={len(s)})", TRIANGLE, cayley_graph(cyclic_product_group([n]), s).graph
    for n in ([9, 13] if scale == "small" else [13, 19]):
        d = {(x, y) for x in range(1, n) for y in range(1, n) if x != y and rnd.random() < 0.3}
        edges = [(a, b, c) for a, b, c in permutations(range(n), 3) if ((a - c) % n, (b - c) % n) in d]
        yield f"K4(3) -> Cayley 3-graph Z_{n}", K4_3, new_directed(range(n), 3, edges)
    for n in ([7, 11] if scale == "small" else [11, 17]):
        sets = [{x for x in range(n) if rnd.random() < 0.5} for _ in range(4)]
        yield f"AP template t=4 -> H(Z_{n})", complete_partite_template(4), ap_instance(
            cyclic_product_group([n]), 4, sets).graph


def bench(plan, backend, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = kernels.count(plan, 10**9, backend)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", choices=["small", "large"], default="small")
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if kernels.BACKEND == "numba" else [])
    if "numba" in backends:
        warm = _Plan(TRIANGLE, cayley_graph(cyclic_product_group([5]), {1, 2}).graph).plan
        kernels.count(warm, 10**6, "numba")  # JIT / cache load

    print(f"{'case':<40} {'count':>12} {'nodes':>12} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, template, graph in cases(args.scale):
        plan = _Plan(template, graph).plan
        timings = {}
        outcome = None
        for b in backends:
            timings[b], res = bench(plan, b, args.repeat)
            if outcome is not None and res != outcome:
                raise SystemExit(f"backend disagreement on {name}: {outcome} vs {res}")
            outcome = res
        cols = " ".join(f"{timings[b] * 1000:>8.1f}ms" for b in backends)
        speed = f"{timings['numpy'] / timings['numba']:8.1f}x" if "numba" in timings else ""
        print(f"{name:<40} {outcome[0]:>12} {outcome[1]:>12} {cols} {speed}")


if __name__ == "__main__":
    main()
