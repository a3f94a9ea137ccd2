"""Compare the numba kernels with their pure-numpy counterparts.

    python3 benchmarks/bench_kernels.py [--n 1000000] [--repeat 3]

Both implementations live side by side in ``fuzzyfind.kernels``; the
``FUZZYFIND_DISABLE_JIT`` flag only chooses which one the package uses.
"""
import argparse
import time

import numpy as np

from fuzzyfind import kernels
from fuzzyfind._jit import NUMBA_AVAILABLE
from fuzzyfind.lexicon import index_words, read_word_list, signature
from fuzzyfind.ffd import ON_THE_FLY


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1 << 20, help="indices per kernel call")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--words", default="tests/data/words_100k.txt")
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not importable; nothing to compare")

    rng = np.random.default_rng(0)
    idx = rng.integers(0, 1 << 23, size=args.n)
    store = index_words(read_word_list(args.words))
    sigs = [signature(w).bits for w in store.words[:2000]]
    recs = [ON_THE_FLY.record(s) for s in sigs]

    def probes(fn):
        return lambda: [fn(store.addresses, store.word_ids, store.signatures, r, s, 2) for r, s in zip(recs, sigs)]

    cases = [
        ("entries", lambda: kernels.entries_numba(idx), lambda: kernels.entries_numpy(idx), args.n),
        ("label_counts", lambda: kernels.label_counts_range_numba(0, args.n),
         lambda: kernels.label_counts_range_numpy(0, args.n), args.n),
        ("probe", probes(kernels.probe_numba), probes(kernels.probe_numpy), len(sigs)),
    ]
    print(f"{'kernel':<14}{'items':>10}{'numba s':>10}{'numpy s':>10}{'ratio':>8}")
    for name, nb, npy, items in cases:
        nb()  # compile outside the timing
        t_nb, t_np = best_of(nb, args.repeat), best_of(npy, args.repeat)
        print(f"{name:<14}{items:>10}{t_nb:>10.3f}{t_np:>10.3f}{t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
