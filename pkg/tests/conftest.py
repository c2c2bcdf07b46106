from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
import pytest


def exact_det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def brute_force_facets(points, exact: bool = False) -> set[tuple[int, ...]]:
    """Facets of conv(points) by testing every d-subset's hyperplane against all points."""
    pts = [list(p) for p in points]
    n, d = len(pts), len(pts[0])
    out = set()
    for S in itertools.combinations(range(n), d):
        signs = set()
        for w in range(n):
            if w in S:
                continue
            rows = [pts[i] + [1] for i in S] + [pts[w] + [1]]
            if exact:
                s = exact_det(rows)
            else:
                s = float(np.linalg.det(np.array(rows, dtype=float)))
                s = 0 if abs(s) < 1e-12 else s
            signs.add((s > 0) - (s < 0))
        if 0 not in signs and len(signs) == 1:
            out.add(S)
    return out


def f_vector_from_facets(facets, d: int) -> tuple[int, ...]:
    faces = [set() for _ in range(d)]
    for F in facets:
        for i in range(1, d + 1):
            faces[i - 1].update(itertools.combinations(sorted(F), i))
    return (1,) + tuple(len(x) for x in faces)


def h_by_polynomial(f) -> tuple[int, ...]:
    """h from sum_i h_i x^{d-i} = sum_i f_{i-1} (x-1)^{d-i}."""
    d = len(f) - 1
    total = np.poly1d([0])
    for i, fi in enumerate(f):
        total = total + fi * np.poly1d([1, -1]) ** (d - i)
    coeffs = [int(round(c)) for c in total.coeffs]
    coeffs = [0] * (d + 1 - len(coeffs)) + coeffs
    return tuple(coeffs)


def dense_rank_fraction(M) -> int:
    m = [[Fraction(int(x)) for x in r] for r in M]
    rank, rows = 0, len(m)
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


# -- compressed multicomplex oracle ---------------------------------------

@lru_cache(maxsize=None)
def colex_monomials(k: int, count: int) -> tuple[tuple[int, ...], ...]:
    """First ``count`` degree-k monomials (sorted variable multisets) in colex order."""
    nvars = 1
    while comb(nvars + k - 1, k) < count:
        nvars += 1
    mons = list(itertools.combinations_with_replacement(range(nvars + 1), k))
    mons.sort(key=lambda m: tuple(reversed(m)))
    return tuple(mons[:count])


def oracle_shadow(k: int, n: int) -> int:
    """Number of degree-(k-1) divisors of the compressed set of n degree-k monomials."""
    if n == 0:
        return 0
    mons = colex_monomials(k, n)
    return len({m[:i] + m[i + 1:] for m in mons for i in range(k)})


def oracle_pseudopower(n: int, k: int) -> int:
    """Degree-(k+1) monomials all of whose degree-k divisors lie in the compressed n-set."""
    if n == 0:
        return 0
    mons = set(colex_monomials(k, n))
    nvars = max(max(m) for m in mons) + 2
    count = 0
    for m in itertools.combinations_with_replacement(range(nvars), k + 1):
        if all(m[:i] + m[i + 1:] in mons for i in range(k + 1)):
            count += 1
    return count


@pytest.fixture(scope="session")
def scaling_reports():
    from polybound.harness.experiments import scaling_report

    return {d: scaling_report(d, d // 2) for d in (3, 4)}


@pytest.fixture(scope="session")
def witness_reports():
    from polybound.harness.experiments import witness_strips

    return {3: witness_strips(3, 1, (0.015, 0.005, 0.002, 0.001, 0.0005)),
            4: witness_strips(4, 2, (0.01, 0.005, 0.003))}
