"""numpy fallback for the compiled kernels (same signatures)."""
from functools import lru_cache

import numpy as np


def gauss_counts(a, b, s, n):
    j = np.arange(n, dtype=np.int64)
    aa, bb = (a * s) % n, (b * s) % n
    e = ((aa * j) % n * j + bb * j) % n
    return np.bincount(e, minlength=n).astype(np.int64)


def cyclic_mul(x, y):
    n = len(x)
    full = np.convolve(x, y)
    out = full[:n].copy()
    out[: len(full) - n] += full[n:]
    return out


@lru_cache(maxsize=512)
def _reduction_matrix(phi, n):
    # row j holds x^j mod phi
    m = len(phi) - 1
    low = -np.array(phi[:m], dtype=np.int64)
    R = np.zeros((max(n, m), m), dtype=np.int64)
    cur = np.zeros(m, dtype=np.int64)
    if m == 0:
        return R
    cur[0] = 1
    for j in range(max(n, m)):
        R[j] = cur
        top = cur[m - 1]
        cur = np.roll(cur, 1)
        cur[0] = 0
        if top:
            cur += top * low
    return R


def cyclo_rem(x, phi):
    R = _reduction_matrix(tuple(int(c) for c in phi), len(x))
    return x @ R[: len(x)]
