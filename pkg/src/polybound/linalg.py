"""Exact and floating rank/kernel routines shared by homology and stress.

Two exact routes are provided:

* ``rank_over_rationals`` -- fraction-free sparse elimination on integer
  rows (gcd-normalised), with a static Markowitz column order.  Suited to
  boundary matrices (entries in {-1, 0, 1}, very sparse).
* ``certified_rank`` -- multi-modular rank of a dense integer matrix.  The
  rank modulo any prime is a lower bound for the rational rank; once the
  product of primes that never exceeded rank r is larger than a Hadamard
  bound on the (r+1)-minors, r is also an upper bound.
"""

from __future__ import annotations

from math import gcd, log2
from typing import Iterable, Mapping, Sequence

import numpy as np

SparseRow = Mapping[int, int]


def _normalize(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        return {c: x // g for c, x in row.items()}
    return row


def sparse_rows(M) -> list[dict[int, int]]:
    """Convert a dense matrix (array or nested lists) to integer sparse rows."""
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if arr.dtype.kind == "f":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("entries must be integers")
    rows = []
    for r in arr:
        nz = np.nonzero(r)[0]
        rows.append({int(c): int(r[c]) for c in nz})
    return rows


def rank_over_rationals(M: Sequence[SparseRow] | np.ndarray | Sequence[Sequence[int]]) -> int:
    """Exact rank over Q of an integer matrix.

    ``M`` may be a dense matrix or a sequence of sparse rows ``{col: value}``.
    """
    if isinstance(M, np.ndarray) or (len(M) and not isinstance(M[0], Mapping)):
        rows = sparse_rows(M) if len(M) else []
    else:
        rows = [{c: int(x) for c, x in r.items() if x} for r in M]
    rows = [r for r in rows if r]
    if not rows:
        return 0
    # static Markowitz order: eliminate sparse columns first
    count: dict[int, int] = {}
    for r in rows:
        for c in r:
            count[c] = count.get(c, 0) + 1
    order = {c: i for i, c in enumerate(sorted(count, key=lambda c: (count[c], c)))}
    rows = [{order[c]: x for c, x in r.items()} for r in rows]
    rows.sort(key=len)

    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        r = row
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = _normalize(r)
                break
            a, b = r[c], p[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {k: b * v for k, v in r.items() if k != c}
            for k, v in p.items():
                if k == c:
                    continue
                val = new.get(k, 0) - a * v
                if val:
                    new[k] = val
                else:
                    new.pop(k, None)
            r = _normalize(new) if new else new
    return len(pivots)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below(start: int) -> Iterable[int]:
    n = start
    while True:
        n -= 1
        if _is_prime(n):
            yield n


_PRIME_CEILING = 2 ** 31


def rank_mod_p(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p); p < 2**31."""
    A = np.mod(np.asarray(M, dtype=np.int64), p)
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        below = r + 1 + np.flatnonzero(A[r + 1:, c])
        if below.size:
            A[below] = (A[below] - A[below, c][:, None] * A[r]) % p
        r += 1
    return r


def _log2_norm(v: np.ndarray) -> float:
    s = sum(int(x) * int(x) for x in v)
    return 0.5 * log2(s) if s else float("-inf")


def certified_rank(M: np.ndarray) -> int:
    """Exact rational rank of a dense integer matrix by multi-modular elimination."""
    A = np.asarray(M, dtype=object)
    if A.size == 0:
        return 0
    if A.shape[0] > A.shape[1]:
        A = A.T
    max_abs = max(abs(int(x)) for x in A.flat)
    if max_abs == 0:
        return 0
    if max_abs >= 2 ** 62:
        raise ValueError("entries too large for certified_rank")
    A64 = A.astype(np.int64)
    row_logs = sorted((_log2_norm(r) for r in A), reverse=True)
    col_logs = sorted((_log2_norm(c) for c in A.T), reverse=True)
    # every prime tried so far has rank <= best, so all its primes count
    best = -1
    budget = 0.0
    needed = 0.0
    for p in _primes_below(_PRIME_CEILING):
        r = rank_mod_p(A64, p)
        budget += log2(p)
        if r > best:
            best = r
            if best >= min(A.shape):
                return best
            rows = [x for x in row_logs[:best + 1] if x > float("-inf")]
            cols = [x for x in col_logs[:best + 1] if x > float("-inf")]
            needed = min(sum(rows), sum(cols))
        if budget > needed + 1:
            return best


def float_rank(M: np.ndarray, rtol: float = 1e-8) -> int:
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def left_kernel(M: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (rows) of {w : w @ M = 0} with a relative SVD cutoff."""
    M = np.asarray(M, dtype=float)
    if M.shape[0] == 0:
        return np.zeros((0, 0))
    if M.shape[1] == 0:
        return np.eye(M.shape[0])
    u, s, _ = np.linalg.svd(M, full_matrices=True)
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return u[:, rank:].T.copy()


def right_kernel(M: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (rows) of {x : M @ x = 0}."""
    return left_kernel(np.asarray(M, dtype=float).T, rtol)
