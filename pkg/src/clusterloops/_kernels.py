"""Hot numeric kernels: integer matrix mutation and batched positive chart maps.

Every kernel has a numba version and a plain numpy version with identical
semantics.  The numba versions are used when numba imports cleanly and the
environment variable ``CLUSTERLOOPS_NO_NUMBA`` is unset (or "0").
"""

import os

import numpy as np

_DISABLED = os.environ.get("CLUSTERLOOPS_NO_NUMBA", "0") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("disabled by CLUSTERLOOPS_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

# int64 entries above this are treated as an overflow risk by the tropical kernel
OVERFLOW_GUARD = 1 << 30


# ---------------------------------------------------------------------------
# numpy implementations


def np_mutate(b, k):
    """Mutate a rectangular exchange matrix (rows: all vertices, cols: mutable) at k."""
    col = b[:, k].copy()
    row = b[k, :].copy()
    out = b + (np.abs(col)[:, None] * row[None, :] + col[:, None] * np.abs(row)[None, :]) // 2
    out[k, :] = -row
    out[:, k] = -col
    return out


def np_mutate_word(b, word):
    """Mutate along ``word``.  Returns (matrix, overflowed)."""
    out = b.copy()
    for k in word:
        out = np_mutate(out, k)
        if np.abs(out).max(initial=0) > OVERFLOW_GUARD:
            return out, True
    return out, False


def np_log_chart(logx, cols, ks, perm):
    """Batched A-mutation in log coordinates.

    logx: (S, n) log of positive points.  cols[t] is the exchange column
    b_{., k_t} *before* mutation step t.  perm[v] is the destination of v.
    """
    y = logx.copy()
    for t in range(ks.shape[0]):
        k = ks[t]
        c = cols[t]
        pos = y @ np.where(c > 0, c, 0).astype(np.float64)
        neg = y @ np.where(c < 0, -c, 0).astype(np.float64)
        y[:, k] = np.logaddexp(pos, neg) - y[:, k]
    out = np.empty_like(y)
    out[:, perm] = y
    return out


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_mutate_inplace(b, k):
        m, n = b.shape
        col = b[:, k].copy()
        row = b[k, :].copy()
        for i in range(m):
            if i == k:
                continue
            ci = col[i]
            if ci == 0:
                continue
            for j in range(n):
                if j == k:
                    continue
                rj = row[j]
                if ci > 0 and rj > 0:
                    b[i, j] += ci * rj
                elif ci < 0 and rj < 0:
                    b[i, j] -= ci * rj
        for j in range(n):
            b[k, j] = -row[j]
        for i in range(m):
            b[i, k] = -col[i]

    @njit(cache=True)
    def _nb_mutate(b, k):
        out = b.copy()
        _nb_mutate_inplace(out, k)
        return out

    @njit(cache=True)
    def _nb_mutate_word(b, word):
        out = b.copy()
        m, n = out.shape
        for t in range(word.shape[0]):
            _nb_mutate_inplace(out, word[t])
            for i in range(m):
                for j in range(n):
                    if out[i, j] > OVERFLOW_GUARD or out[i, j] < -OVERFLOW_GUARD:
                        return out, True
        return out, False

    @njit(cache=True)
    def _nb_log_chart(logx, cols, ks, perm):
        s, n = logx.shape
        out = np.empty_like(logx)
        y = np.empty(n)
        for p in range(s):
            for v in range(n):
                y[v] = logx[p, v]
            for t in range(ks.shape[0]):
                k = ks[t]
                pos = 0.0
                neg = 0.0
                for i in range(n):
                    c = cols[t, i]
                    if c > 0:
                        pos += c * y[i]
                    elif c < 0:
                        neg -= c * y[i]
                hi = max(pos, neg)
                lo = min(pos, neg)
                y[k] = hi + np.log1p(np.exp(lo - hi)) - y[k]
            for v in range(n):
                out[p, perm[v]] = y[v]
        return out


def mutate(b, k):
    b = np.ascontiguousarray(b, dtype=np.int64)
    if HAVE_NUMBA:
        return _nb_mutate(b, int(k))
    return np_mutate(b, k)


def mutate_word(b, word):
    b = np.ascontiguousarray(b, dtype=np.int64)
    w = np.asarray(list(word), dtype=np.int64)
    if HAVE_NUMBA:
        return _nb_mutate_word(b, w)
    return np_mutate_word(b, w)


def log_chart(logx, cols, ks, perm):
    logx = np.ascontiguousarray(logx, dtype=np.float64)
    cols = np.ascontiguousarray(cols, dtype=np.int64)
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    if HAVE_NUMBA:
        return _nb_log_chart(logx, cols, ks, perm)
    return np_log_chart(logx, cols, ks, perm)
