"""Reduced simplicial homology over Q.

Faces are oriented by their sorted vertex order, so the boundary of
(v_0 < ... < v_k) is sum_i (-1)^i (v_0, ..., v_i-hat, ..., v_k).  The chain
complex is augmented (the empty face spans C_{-1}), which makes the Betti
numbers reduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import Face, SimplicialComplex
from .linalg import float_rank, rank_over_rationals

__all__ = ["BoundaryMatrix", "BettiProfile", "boundary_matrix", "betti", "reduced_betti",
           "rank_over_rationals"]


@dataclass(frozen=True)
class BoundaryMatrix:
    """Matrix of the k-th boundary map: rows are (k-1)-faces, columns k-faces."""

    k: int
    row_faces: tuple[Face, ...]
    col_faces: tuple[Face, ...]
    columns: tuple[dict[int, int], ...] = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_faces), len(self.col_faces)

    def to_dense(self) -> np.ndarray:
        M = np.zeros(self.shape, dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                M[i, j] = x
        return M

    def rank(self) -> int:
        return rank_over_rationals(self.columns)


def boundary_matrix(K: SimplicialComplex, k: int) -> BoundaryMatrix:
    rows = tuple(sorted(K.faces(k - 1))) if k >= 0 else ()
    cols = tuple(sorted(K.faces(k)))
    index = {f: i for i, f in enumerate(rows)}
    columns = []
    for f in cols:
        col = {}
        for i in range(len(f)):
            col[index[f[:i] + f[i + 1:]]] = -1 if i % 2 else 1
        columns.append(col)
    return BoundaryMatrix(k, rows, cols, tuple(columns))


@dataclass(frozen=True)
class BettiProfile:
    """Reduced Betti numbers beta~_{-1}, ..., beta~_dim."""

    values: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        if k < -1 or k + 1 >= len(self.values):
            return 0
        return self.values[k + 1]

    def as_dict(self) -> dict[int, int]:
        return {k - 1: b for k, b in enumerate(self.values)}


def _components(K: SimplicialComplex) -> int:
    parent = {v: v for v in K.vertex_set}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in K.faces(1):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(v) for v in parent})


def _boundary_rank(K: SimplicialComplex, k: int, exact: bool = True) -> int:
    if k < 0 or k > K.dim:
        return 0
    if k == 0:
        return 1 if K.vertex_set else 0
    if k == 1:
        return len(K.vertex_set) - _components(K)
    B = boundary_matrix(K, k)
    if not exact:
        return float_rank(B.to_dense(), 1e-9)
    # boundary columns have k+1 nonzeros, so sparse elimination stays cheap
    return B.rank()


def reduced_betti(K: SimplicialComplex, k: int) -> int:
    """A single reduced Betti number, computing only the two ranks it needs."""
    if k < -1 or k > K.dim:
        return 0
    nk = len(K.faces(k))
    return nk - _boundary_rank(K, k) - _boundary_rank(K, k + 1)


def betti(K: SimplicialComplex) -> BettiProfile:
    ranks = [_boundary_rank(K, k) for k in range(0, K.dim + 2)]
    values = []
    for k in range(-1, K.dim + 1):
        below = ranks[k] if k >= 0 else 0
        values.append(len(K.faces(k)) - below - ranks[k + 1])
    return BettiProfile(tuple(values))


def float_betti(K: SimplicialComplex) -> BettiProfile:
    """Floating-point Betti numbers; a quick pre-filter, never an acceptance value."""
    ranks = [_boundary_rank(K, k, exact=False) for k in range(0, K.dim + 2)]
    return BettiProfile(tuple(len(K.faces(k)) - (ranks[k] if k >= 0 else 0) - ranks[k + 1]
                              for k in range(-1, K.dim + 1)))
