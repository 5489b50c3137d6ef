"""Hot counting kernels, in a numba flavour and a pure-numpy flavour.

The numba versions are used when numba imports and the environment variable
``FQZEROS_DISABLE_NUMBA`` is unset (or "0").  Both flavours take the same
arguments and return identical results; ``tests/test_accel.py`` checks that
and ``benchmarks/bench_kernels.py`` times them against each other.

All field data enters as int64 index arrays: ``add`` and ``mul`` are the
full q x q tables of the field, ``V`` is a monomial-value table with one
row per monomial and one column per point.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _flag_disabled() -> bool:
    return os.environ.get("FQZEROS_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _flag_disabled()


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def set_backend(name: str) -> None:
    """Switch between "numba" and "numpy" at runtime (tests, benchmarks)."""
    global USE_NUMBA
    if name == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        USE_NUMBA = True
    elif name == "numpy":
        USE_NUMBA = False
    else:
        raise ValueError(f"unknown backend {name!r}")


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# ---------------------------------------------------------------------------------
# RREF subspace scan
# ---------------------------------------------------------------------------------

@_njit
def _scan_nb(pivots, free_r, free_c, M, q, V, add, mul, hyper, check_hyper,
             t_start, t_stop, wcap):
    r = pivots.shape[0]
    nf = free_r.shape[0]
    N = V.shape[1]
    H = hyper.shape[0]
    B = np.zeros((r, M), dtype=np.int64)
    for i in range(r):
        B[i, pivots[i]] = 1
    zero = np.zeros(N, dtype=np.bool_)
    wit = np.zeros(wcap, dtype=np.int64)
    nwit = 0
    best = -1
    nmax = 0
    nlin = 0
    digits = np.zeros(nf, dtype=np.int64)
    # odometer start: the last free position is the least significant digit
    t = t_start
    for k in range(nf - 1, -1, -1):
        digits[k] = t % q
        t //= q
    for t in range(t_start, t_stop):
        for k in range(nf):
            B[free_r[k], free_c[k]] = digits[k]
        cnt = 0
        for P in range(N):
            ok = True
            for i in range(r):
                acc = 0
                for j in range(M):
                    b = B[i, j]
                    if b != 0:
                        acc = add[acc, mul[b, V[j, P]]]
                if acc != 0:
                    ok = False
                    break
            zero[P] = ok
            if ok:
                cnt += 1
        if cnt >= best:
            if cnt > best:
                best = cnt
                nmax = 0
                nlin = 0
                nwit = 0
            nmax += 1
            if nwit < wcap:
                wit[nwit] = t
                nwit += 1
            if check_hyper:
                for h in range(H):
                    inside = True
                    for P in range(N):
                        if hyper[h, P] and not zero[P]:
                            inside = False
                            break
                    if inside:
                        nlin += 1
                        break
        # advance odometer
        k = nf - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] < q:
                break
            digits[k] = 0
            k -= 1
    return best, nmax, nlin, wit[:nwit].copy()


def _eval_rows_np(B, V, add, mul):
    """Values of every row of every basis in B (K x r x M) at every point: K x r x N."""
    K, r, M = B.shape
    N = V.shape[1]
    acc = np.zeros((K, r, N), dtype=np.int64)
    for j in range(M):
        col = B[:, :, j]
        if not col.any():
            continue
        acc = add[acc, mul[col[:, :, None], V[j][None, None, :]]]
    return acc


def _scan_np(pivots, free_r, free_c, M, q, V, add, mul, hyper, check_hyper,
             t_start, t_stop, wcap, chunk=8192):
    r = len(pivots)
    nf = len(free_r)
    best, nmax, nlin = -1, 0, 0
    wit: list[int] = []
    weights = q ** np.arange(nf - 1, -1, -1, dtype=np.int64)
    for lo in range(t_start, t_stop, chunk):
        hi = min(lo + chunk, t_stop)
        ts = np.arange(lo, hi, dtype=np.int64)
        K = len(ts)
        B = np.zeros((K, r, M), dtype=np.int64)
        B[:, np.arange(r), pivots] = 1
        if nf:
            dig = (ts[:, None] // weights[None, :]) % q
            B[:, free_r, free_c] = dig
        zero = (_eval_rows_np(B, V, add, mul) == 0).all(axis=1)
        counts = zero.sum(axis=1)
        cbest = int(counts.max())
        if cbest < best:
            continue
        if cbest > best:
            best, nmax, nlin, wit = cbest, 0, 0, []
        hit = np.nonzero(counts == best)[0]
        nmax += len(hit)
        room = wcap - len(wit)
        if room > 0:
            wit.extend(int(t) for t in ts[hit[:room]])
        if check_hyper and len(hyper):
            z = zero[hit]
            # a maximiser has a hyperplane inside its zero set
            inside = ~(hyper[None, :, :] & ~z[:, None, :]).any(axis=2)
            nlin += int(inside.any(axis=1).sum())
    return best, nmax, nlin, np.array(wit, dtype=np.int64)


def scan_rref(pivots, free_r, free_c, M, q, V, add, mul, hyper, check_hyper,
              t_start, t_stop, wcap):
    """Scan subspaces with a fixed pivot set, free-entry codes in [t_start, t_stop).

    Returns (best, number of maximisers, maximisers whose zero set contains a
    row of ``hyper``, first ``wcap`` maximiser codes).
    """
    args = (np.asarray(pivots, dtype=np.int64), np.asarray(free_r, dtype=np.int64),
            np.asarray(free_c, dtype=np.int64), int(M), int(q), V, add, mul,
            np.asarray(hyper, dtype=np.bool_), bool(check_hyper), int(t_start), int(t_stop), int(wcap))
    if USE_NUMBA:
        best, nmax, nlin, wit = _scan_nb(*args)
        return int(best), int(nmax), int(nlin), wit
    return _scan_np(*args)


# ---------------------------------------------------------------------------------
# explicit bases: zero counts and ranks
# ---------------------------------------------------------------------------------

@_njit
def _count_nb(B, V, add, mul):
    K, r, M = B.shape
    N = V.shape[1]
    out = np.zeros(K, dtype=np.int64)
    for k in range(K):
        cnt = 0
        for P in range(N):
            ok = True
            for i in range(r):
                acc = 0
                for j in range(M):
                    b = B[k, i, j]
                    if b != 0:
                        acc = add[acc, mul[b, V[j, P]]]
                if acc != 0:
                    ok = False
                    break
            if ok:
                cnt += 1
        out[k] = cnt
    return out


@_njit
def _zero_mask_nb(B, V, add, mul):
    r, M = B.shape
    N = V.shape[1]
    out = np.zeros(N, dtype=np.bool_)
    for P in range(N):
        ok = True
        for i in range(r):
            acc = 0
            for j in range(M):
                b = B[i, j]
                if b != 0:
                    acc = add[acc, mul[b, V[j, P]]]
            if acc != 0:
                ok = False
                break
        out[P] = ok
    return out


def count_zeros_batch(B, V, add, mul) -> np.ndarray:
    """Common-zero counts for a batch of bases B (K x r x M)."""
    B = np.ascontiguousarray(B, dtype=np.int64)
    if USE_NUMBA:
        return _count_nb(B, V, add, mul)
    out = np.empty(len(B), dtype=np.int64)
    step = max(1, 2 ** 22 // max(1, B.shape[1] * V.shape[1]))
    for lo in range(0, len(B), step):
        part = B[lo:lo + step]
        out[lo:lo + step] = (_eval_rows_np(part, V, add, mul) == 0).all(axis=1).sum(axis=1)
    return out


def zero_mask(B, V, add, mul) -> np.ndarray:
    """Boolean mask over points of the common zeros of the rows of B (r x M)."""
    B = np.ascontiguousarray(B, dtype=np.int64)
    if USE_NUMBA:
        return _zero_mask_nb(B, V, add, mul)
    return (_eval_rows_np(B[None], V, add, mul)[0] == 0).all(axis=0)


@_njit
def _rank_nb(B, add, mul, neg, inv):
    K, r, M = B.shape
    out = np.zeros(K, dtype=np.int64)
    A = np.zeros((r, M), dtype=np.int64)
    for k in range(K):
        for i in range(r):
            for j in range(M):
                A[i, j] = B[k, i, j]
        rk = 0
        for c in range(M):
            if rk == r:
                break
            piv = -1
            for i in range(rk, r):
                if A[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rk:
                for j in range(M):
                    tmp = A[rk, j]
                    A[rk, j] = A[piv, j]
                    A[piv, j] = tmp
            s = inv[A[rk, c]]
            for j in range(M):
                A[rk, j] = mul[s, A[rk, j]]
            for i in range(rk + 1, r):
                f = A[i, c]
                if f != 0:
                    nf = neg[f]
                    for j in range(M):
                        A[i, j] = add[A[i, j], mul[nf, A[rk, j]]]
            rk += 1
        out[k] = rk
    return out


def _rank_np(B, add, mul, neg, inv):
    A = np.array(B, dtype=np.int64, copy=True)
    K, r, M = A.shape
    rank = np.zeros(K, dtype=np.int64)
    idx = np.arange(K)
    for c in range(M):
        active = rank < r
        if not active.any():
            break
        # pivot search among rows >= rank
        rows = np.arange(r)[None, :]
        cand = (A[:, :, c] != 0) & (rows >= rank[:, None]) & active[:, None]
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        k = idx[has]
        pr = piv[has]
        rk = rank[has]
        rowp = A[k, pr].copy()
        A[k, pr] = A[k, rk]
        A[k, rk] = rowp
        s = inv[A[k, rk, c]]
        A[k, rk] = mul[s[:, None], A[k, rk]]
        pivot_rows = A[k, rk]
        f = A[k, :, c]
        below = rows >= (rk[:, None] + 1)
        factor = np.where(below, neg[f], 0)
        A[k] = add[A[k], mul[factor[:, :, None], pivot_rows[:, None, :]]]
        rank[has] += 1
    return rank


def rank_batch(B, add, mul, neg, inv) -> np.ndarray:
    """Rank of each r x M matrix in a batch."""
    B = np.ascontiguousarray(B, dtype=np.int64)
    if USE_NUMBA:
        return _rank_nb(B, add, mul, neg, inv)
    return _rank_np(B, add, mul, neg, inv)
