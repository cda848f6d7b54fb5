#!/usr/bin/env python3
"""Benchmark the Gibbs sweep kernels: compiled extension vs pure Python.

Generates the default synthetic corpus, runs timed sweeps on each available
backend, and prints tokens/second plus the speedup.  Both backends consume
identical random streams, so the resulting states are asserted equal.
"""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from lglda import backend, synthgen
from lglda.model import Hyperparameters, init_state, sweep


def run(backend_name, corpus, hp, n_sweeps):
    backend.use(backend_name)
    state = init_state(corpus, hp)
    # warm up one sweep so jit-ish costs (imports, allocation) stay out
    sweep(state)
    start = time.perf_counter()
    for _ in range(n_sweeps):
        sweep(state)
    elapsed = time.perf_counter() - start
    backend.use(None)
    return elapsed, state


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sweeps", type=int, default=50)
    parser.add_argument("--num-topics", type=int, default=20)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    spec = synthgen.default_spec(args.seed)
    corpus, _ = synthgen.generate(spec)
    hp = Hyperparameters(num_topics=args.num_topics, iterations=1, seed=args.seed)
    tokens = corpus.num_tokens
    print(f"corpus: {corpus.num_documents} docs, {tokens} tokens, "
          f"K={args.num_topics}, {args.sweeps} sweeps per backend")

    results = {}
    states = {}
    for name in backend.available():
        elapsed, state = run(name, corpus, hp, args.sweeps)
        rate = tokens * args.sweeps / elapsed
        results[name] = (elapsed, rate)
        states[name] = state
        print(f"  {name:9s} {elapsed:8.2f} s   {rate:12,.0f} tokens/s")

    if len(states) == 2:
        same = np.array_equal(states["python"].z, states["compiled"].z) and np.array_equal(
            states["python"].e, states["compiled"].e
        )
        print(f"  backends agree bit-for-bit: {same}")
        if not same:
            return 1
        speedup = results["python"][0] / results["compiled"][0]
        print(f"  speedup: {speedup:.1f}x")
    else:
        print("  (compiled extension not built; python backend only)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
