"""Compare the numba and numpy kernels.

    python3 benchmarks/bench_kernels.py
    CLUSTERLOOPS_NO_NUMBA=1 python3 benchmarks/bench_kernels.py   # numpy only

Reports the best of several runs for each kernel and checks the two
implementations agree on the same inputs.
"""

import argparse
import time

import numpy as np

from clusterloops import _kernels as K
from clusterloops import loops, quiver as qv


def best_of(f, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        f()
        times.append(time.perf_counter() - t0)
    return min(times)


def chart_inputs(k, n, samples, seed):
    q = loops.torus_fence(k, n).quiver()
    phi = loops.kalman_rho(k, n)
    cols, b = [], q.b
    for v in phi.word:
        cols.append(b[:, v].copy())
        b = qv.mutate(qv.Quiver(b, q.n_mut), v).b
    rng = np.random.default_rng(seed)
    U = rng.uniform(-3, 3, size=(samples, q.n))
    return U, np.array(cols, dtype=np.int64), np.array(phi.word, dtype=np.int64), np.array(phi.perm, dtype=np.int64)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("numba active:", K.HAVE_NUMBA)
    rng = np.random.default_rng(args.seed)

    # mutation along a long random word on a 12-vertex acyclic quiver
    n = 12
    b = np.triu(rng.integers(0, 2, size=(n, n)), 1)
    b = (b - b.T).astype(np.int64)
    word = rng.integers(0, n, size=400).astype(np.int64)
    ref, _ = K.np_mutate_word(b, word)
    t_np = best_of(lambda: K.np_mutate_word(b, word), args.repeat)
    print("mutate_word  numpy %.4fs" % t_np)
    if K.HAVE_NUMBA:
        K._nb_mutate_word(b, word)  # compile
        got, _ = K._nb_mutate_word(b, word)
        assert np.array_equal(got, ref), "numba and numpy mutation disagree"
        t_nb = best_of(lambda: K._nb_mutate_word(b, word), args.repeat)
        print("mutate_word  numba %.4fs  (x%.1f)" % (t_nb, t_np / t_nb))

    # batched chart map of the rho loop on T(3,5)
    U, cols, ks, perm = chart_inputs(3, 5, args.samples, args.seed)
    ref = K.np_log_chart(U, cols, ks, perm)
    t_np = best_of(lambda: K.np_log_chart(U, cols, ks, perm), args.repeat)
    print("log_chart    numpy %.4fs  (%d points)" % (t_np, len(U)))
    if K.HAVE_NUMBA:
        K._nb_log_chart(U[:2], cols, ks, perm)
        got = K._nb_log_chart(U, cols, ks, perm)
        assert np.allclose(got, ref, rtol=1e-12, atol=1e-12), "numba and numpy charts disagree"
        t_nb = best_of(lambda: K._nb_log_chart(U, cols, ks, perm), args.repeat)
        print("log_chart    numba %.4fs  (x%.1f)" % (t_nb, t_np / t_nb))


if __name__ == "__main__":
    main()
