"""f-, h- and g-vectors, Dehn-Sommerville and Macaulay's numerical conditions.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence


@dataclass(frozen=True)
class FaceVector:
    """(f_{-1}, f_0, ..., f_{d-1}) of a (d-1)-dimensional complex / d-polytope."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries or self.entries[0] != 1:
            raise ValueError("f_{-1} must equal 1")
        if any(x < 0 for x in self.entries):
            raise ValueError("face numbers must be non-negative")

    @property
    def d(self) -> int:
        return len(self.entries) - 1


@dataclass(frozen=True)
class HVector:
    entries: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.entries) - 1


@dataclass(frozen=True)
class GVector:
    entries: tuple[int, ...]


def _entries(v) -> tuple[int, ...]:
    return tuple(int(x) for x in getattr(v, "entries", v))


def h_from_f(f: FaceVector | Sequence[int]) -> HVector:
    fe = _entries(f)
    d = len(fe) - 1
    return HVector(tuple(
        sum((-1) ** (i - j) * comb(d - j, i - j) * fe[j] for j in range(i + 1))
        for i in range(d + 1)))


def f_from_h(h: HVector | Sequence[int]) -> FaceVector:
    he = _entries(h)
    d = len(he) - 1
    # f_{j-1} = sum_{i<=j} C(d-i, j-i) h_i
    return FaceVector(tuple(sum(comb(d - i, j - i) * he[i] for i in range(j + 1))
                            for j in range(d + 1)))


def g_from_h(h: HVector | Sequence[int]) -> GVector:
    he = _entries(h)
    d = len(he) - 1
    return GVector((he[0],) + tuple(he[i] - he[i - 1] for i in range(1, d // 2 + 1)))


def g_from_f(f: FaceVector | Sequence[int]) -> GVector:
    return g_from_h(h_from_f(f))


def check_dehn_sommerville(h: HVector | Sequence[int]) -> bool:
    he = _entries(h)
    return he == he[::-1]


def macaulay_rep(n: int, k: int) -> list[tuple[int, int]]:
    """Greedy k-th Macaulay representation of n as a list of (a_j, j).

    n = C(a_k, k) + C(a_{k-1}, k-1) + ... + C(a_i, i) with
    a_k > a_{k-1} > ... > a_i >= i >= 1.
    """
    if n < 1 or k < 1:
        raise ValueError("macaulay_rep needs n >= 1 and k >= 1")
    terms = []
    j = k
    while n > 0 and j >= 1:
        a = j
        while comb(a + 1, j) <= n:
            a += 1
        terms.append((a, j))
        n -= comb(a, j)
        j -= 1
    return terms


def shadow(k: int, n: int) -> int:
    """Macaulay shadow: sum of C(a_j - 1, j - 1) over the k-th representation."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n <= 0:
        return 0
    return sum(comb(a - 1, j - 1) for a, j in macaulay_rep(n, k))


def pseudopower(n: int, k: int) -> int:
    """n^<k> = sum of C(a_j + 1, j + 1) over the k-th representation of n."""
    if n <= 0:
        return 0
    return sum(comb(a + 1, j + 1) for a, j in macaulay_rep(n, k))


def is_m_sequence(g: GVector | Sequence[int]) -> bool:
    ge = _entries(g)
    if not ge or ge[0] != 1 or any(x < 0 for x in ge):
        return False
    return all(shadow(k + 1, ge[k + 1]) <= ge[k] for k in range(len(ge) - 1))


def kalai_ii_statistic(g: GVector | Sequence[int], k: int) -> int:
    """g_k - shadow^{k+1}(g_{k+1}); reported only, never asserted."""
    ge = _entries(g)
    return ge[k] - shadow(k + 1, ge[k + 1])
