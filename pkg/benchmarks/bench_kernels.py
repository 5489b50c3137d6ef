"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends run the same workloads and must produce identical results;
the script refuses to print timings otherwise.
"""

import argparse
import time

import numpy as np

from fqzeros import accel
from fqzeros.bounds import BoundParams
from fqzeros.gf import field_make
from fqzeros.projgeom import proj_monomial_table
from fqzeros.search import exhaustive_max


def _time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads():
    F = field_make(5)
    V = proj_monomial_table(5, 2, 3)
    B = np.random.default_rng(0).integers(0, 5, size=(20000, 4, V.shape[0]))

    def scan():
        rep = exhaustive_max(BoundParams(4, 2, 2, 2), threads=1)
        return rep.max_count, rep.maximizers

    def count():
        return accel.count_zeros_batch(B, V, F.add_table, F.mul_table).tolist()

    def rank():
        return accel.rank_batch(B, F.add_table, F.mul_table, F.neg_table, F.inv_table).tolist()

    return {"exhaustive scan q=4 d=2 m=2 r=2": scan, "count 20000 families q=5 d=3": count,
            "rank 20000 4x10 matrices q=5": rank}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    before = accel.backend()
    print(f"{'workload':36s} {'numba s':>9s} {'numpy s':>9s} {'speedup':>8s}")
    try:
        for name, fn in workloads().items():
            accel.set_backend("numba")
            fn()  # compile outside the timed region
            t_nb, r_nb = _time(fn, args.repeat)
            accel.set_backend("numpy")
            t_np, r_np = _time(fn, args.repeat)
            if r_nb != r_np:
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:36s} {t_nb:9.3f} {t_np:9.3f} {t_np / t_nb:7.1f}x")
    finally:
        accel.set_backend(before)


if __name__ == "__main__":
    main()
