"""Benchmark the compiled scoring kernel against the pure-Python twin.

    python benchmarks/bench_scoring.py [--tweets 20000] [--tokens 18]

Generates synthetic token arrays shaped like real normalized tweets, runs
both kernels over the full batch, verifies identical outputs, and reports
throughput for each backend.
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

from crowdsent import _scoring_py

try:
    from crowdsent import _scoring as _scoring_c
except ImportError:
    _scoring_c = None


def make_batch(n_tweets: int, mean_tokens: int, seed: int = 11):
    rng = random.Random(seed)
    batch = []
    for _ in range(n_tweets):
        n = max(1, int(rng.gauss(mean_tokens, mean_tokens / 3)))
        values = array("d", (
            rng.choice((0.0, 0.0, 0.0, 1.0, -1.0, 1.5, -2.0)) for _ in range(n)
        ))
        flags = array("b", (1 if rng.random() < 0.06 else 0 for _ in range(n)))
        mults = array("d", (
            rng.choice((1.0, 1.0, 1.0, 1.5, 0.6, 1.8)) for _ in range(n)
        ))
        batch.append((values, flags, mults))
    return batch


def run(kernel, batch) -> tuple[float, list[float]]:
    started = time.perf_counter()
    scores = [kernel.valence_score(v, f, m, 3, 2) for v, f, m in batch]
    return time.perf_counter() - started, scores


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tweets", type=int, default=20_000)
    parser.add_argument("--tokens", type=int, default=18)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    batch = make_batch(args.tweets, args.tokens)
    total_tokens = sum(len(v) for v, _, _ in batch)
    print(f"{args.tweets} tweets, {total_tokens} tokens total")

    py_time, py_scores = min(
        (run(_scoring_py, batch) for _ in range(args.repeat)), key=lambda r: r[0]
    )
    print(f"python kernel  : {py_time:8.4f}s  ({total_tokens / py_time / 1e6:6.2f} Mtok/s)")

    if _scoring_c is None:
        print("compiled kernel: not built (pip install -e . with Cython available)")
        return

    c_time, c_scores = min(
        (run(_scoring_c, batch) for _ in range(args.repeat)), key=lambda r: r[0]
    )
    print(f"compiled kernel: {c_time:8.4f}s  ({total_tokens / c_time / 1e6:6.2f} Mtok/s)")
    print(f"speedup        : {py_time / c_time:8.2f}x")

    assert c_scores == py_scores, "kernels disagree"
    print("outputs identical across kernels")


if __name__ == "__main__":
    main()
