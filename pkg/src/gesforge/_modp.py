"""Compiled GF(p) kernels for exhaustive tuple-rank checks.

A nonzero determinant mod ``p`` implies a nonzero determinant over Q, so
full rank mod ``p`` is a sound certificate. Rank deficiency mod ``p`` can
be an unlucky prime and must be rechecked over Q by the caller.
"""

import numpy as np
from numba import njit

PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563)


@njit(cache=True, nogil=True)
def _inv(a, p):
    # Fermat inverse; a and p < 2**31 keep every product inside int64
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True, nogil=True)
def rank_mod_p(mat, p):
    a = mat.copy() % p
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        piv = -1
        for i in range(rank, nrows):
            if a[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(ncols):
                t = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = t
        inv = _inv(a[rank, col], p)
        for j in range(col, ncols):
            a[rank, j] = (a[rank, j] * inv) % p
        for i in range(rank + 1, nrows):
            f = a[i, col]
            if f != 0:
                for j in range(col, ncols):
                    a[i, j] = (a[i, j] - f * a[rank, j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


@njit(cache=True, nogil=True)
def all_tuples_independent(rows, p):
    """Depth-first scan of every ``m``-subset of the ``u`` rows of ``rows``.

    ``rows`` is ``u x m``. Each search level keeps the prefix in reduced
    echelon form, so extending a prefix costs ``O(k m)``. Returns
    ``(ok, witness, leaves)`` where ``witness[:k]`` holds the indices of
    the first dependent prefix (``k`` is ``witness[m]``).
    """
    u, m = rows.shape
    basis = np.zeros((m, m), dtype=np.int64)
    piv = np.zeros(m, dtype=np.int64)
    idx = np.full(m, -1, dtype=np.int64)
    witness = np.full(m + 1, -1, dtype=np.int64)
    v = np.zeros(m, dtype=np.int64)
    leaves = 0
    k = 0
    idx[0] = -1
    while k >= 0:
        idx[k] += 1
        if idx[k] > u - (m - k):
            k -= 1
            continue
        r = idx[k]
        for j in range(m):
            v[j] = rows[r, j] % p
        for j in range(k):
            c = v[piv[j]]
            if c != 0:
                for t in range(m):
                    if basis[j, t] != 0:
                        v[t] = (v[t] - c * basis[j, t]) % p
        pc = -1
        for t in range(m):
            if v[t] != 0:
                pc = t
                break
        if pc < 0:
            for j in range(k + 1):
                witness[j] = idx[j]
            witness[m] = k + 1
            return False, witness, leaves
        inv = _inv(v[pc], p)
        for t in range(m):
            basis[k, t] = (v[t] * inv) % p
        piv[k] = pc
        if k == m - 1:
            leaves += 1
        else:
            k += 1
            idx[k] = idx[k - 1]
    return True, witness, leaves


def to_residues(values, p):
    """Exact ints/Fractions to an int64 array of residues mod ``p``."""
    out = np.empty(len(values), dtype=np.int64)
    for i, x in enumerate(values):
        num = x.numerator % p
        den = x.denominator % p
        if den == 0:
            raise ZeroDivisionError
        out[i] = num * pow(den, -1, p) % p
    return out
