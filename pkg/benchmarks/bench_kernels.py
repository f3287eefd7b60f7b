"""Benchmark the pure and compiled kernels on representative workloads.

Runs batch scoring, exhaustive search, steepest ascent, and annealing on
the same instances through both backends and prints the timings side by
side.  The compiled backend must be importable for the comparison; pure
figures are printed either way.
"""

import argparse
import time

import numpy as np

from gestmap import kernels
from gestmap.catalog import TaskCatalog, builtin_catalog
from gestmap.criteria import CriterionContext, WeightVector, default_criteria
from gestmap.optimize import compile_instance
from gestmap.vocabulary import Vocabulary, builtin_document


def _instance(tasks: int, gestures: int):
    catalog = TaskCatalog(tuple(builtin_catalog("both"))[:tasks])
    vocabulary = Vocabulary(tuple(builtin_document("touch").enumerate())[:gestures])
    ctx = CriterionContext(catalog, vocabulary)
    weights = WeightVector.uniform(default_criteria())
    return compile_instance(ctx, weights)


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _run(label: str, make_call, repeat: int):
    pure_call = make_call(kernels.pure)
    t_pure = _time(pure_call, repeat)
    if kernels.compiled_available():
        compiled_call = make_call(kernels.compiled)
        t_comp = _time(compiled_call, repeat)
        ratio = t_pure / t_comp if t_comp > 0 else float("inf")
        print(f"{label:<28s} pure {t_pure*1e3:9.2f} ms   compiled {t_comp*1e3:9.2f} ms   x{ratio:.1f}")
    else:
        print(f"{label:<28s} pure {t_pure*1e3:9.2f} ms   compiled unavailable")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Kernel backend benchmark")
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions, best wins")
    args = parser.parse_args(argv)

    rng = np.random.Generator(np.random.PCG64(42))

    inst = _instance(8, 60)
    perms = np.array([rng.permutation(60)[:8] for _ in range(20000)], dtype=np.intp)
    _run("score_batch 20k x (8 of 60)", lambda mod: (lambda: mod.score_batch(inst, perms)), args.repeat)

    small = _instance(5, 12)
    _run("brute_force 5 of 12 (95k)", lambda mod: (lambda: mod.brute_force(small, 1e-9)), args.repeat)

    starts = [rng.permutation(60)[:8].astype(np.intp) for _ in range(20)]
    def make_steepest(mod):
        def call():
            for s in starts:
                mod.steepest_ascent(inst, s.copy(), 200, 1e-9)
        return call
    _run("steepest_ascent 20 runs", make_steepest, args.repeat)

    iters = 4000
    kinds = rng.integers(0, 2, size=iters, dtype=np.uint8)
    task_sel = rng.integers(0, 8, size=iters).astype(np.intp)
    alt_swap = rng.integers(0, 7, size=iters).astype(np.intp)
    alt_re = rng.integers(0, 52, size=iters).astype(np.intp)
    accept_u = rng.random(size=iters)
    start = rng.permutation(60)[:8].astype(np.intp)
    def make_anneal(mod):
        return lambda: mod.anneal_run(
            inst, start.copy(), 0.15, 0.997, kinds, task_sel, alt_swap, alt_re, accept_u
        )
    _run("anneal_run 4000 iterations", make_anneal, args.repeat)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
