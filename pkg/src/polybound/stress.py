"""Rigidity matrices, classical stresses and affine k-stresses.

Dimensions are computed by two independent routes:

``float``  SVD kernel with singular-value cutoff ``1e-8 * sigma_max``; the
           "mod span" condition is encoded by projecting onto an
           orthonormal complement of each span.
``exact``  the embedding is rounded to a dyadic grid (``bits`` bits) and
           scaled to integers; the "mod span" condition gets explicit
           multiplier unknowns, and the rank is certified multi-modularly.

Comparing the two is only meaningful on the same embedding, so
``rational_embedding`` is exposed and ``stress_crosscheck`` style callers
should round first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complex import ComplexError, Face, SimplicialComplex, chordless_cycle, is_stacked_2sphere, link, star
from .linalg import certified_rank, float_rank, left_kernel, right_kernel

RTOL = 1e-8


class StressError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Framework:
    """A graph with an embedding of its vertices in R^d."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    positions: np.ndarray  # row i is the position of vertices[i]

    @property
    def d(self) -> int:
        return self.positions.shape[1]

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], coords) -> "Framework":
        """``coords`` maps vertex id -> point (array indexed by id, or a dict)."""
        es = tuple(sorted({tuple(sorted((int(a), int(b)))) for a, b in edges}))
        if any(a == b for a, b in es):
            raise StressError("loops are not allowed")
        vs = tuple(sorted({v for e in es for v in e}))
        pos = np.array([coords[v] for v in vs], dtype=float).reshape(len(vs), -1)
        return cls(vs, es, pos)

    @classmethod
    def from_complex(cls, K: SimplicialComplex, coords) -> "Framework":
        fw = cls.from_edges(K.faces(1), coords)
        isolated = sorted(K.vertex_set - set(fw.vertices))
        if isolated:
            vs = tuple(sorted(set(fw.vertices) | set(isolated)))
            pos = np.array([coords[v] for v in vs], dtype=float)
            return cls(vs, fw.edges, pos)
        return fw


@dataclass(frozen=True, eq=False)
class StressBasis:
    """Basis (rows of ``vectors``) of a stress space on the (k-1)-faces ``faces``."""

    k: int
    faces: tuple[Face, ...]
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[0])

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "faces": [list(f) for f in self.faces],
                           "vectors": self.vectors.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "StressBasis":
        data = json.loads(text)
        faces = tuple(tuple(f) for f in data["faces"])
        vecs = np.array(data["vectors"], dtype=float).reshape(-1, len(faces))
        return cls(int(data["k"]), faces, vecs)


def rational_embedding(points, bits: int = 24) -> tuple[np.ndarray, np.ndarray]:
    """Round to the grid 2^-bits; returns (float coordinates, integer numerators)."""
    pts = np.asarray(points, dtype=float)
    scale = float(2 ** bits)
    ints = np.rint(pts * scale).astype(np.int64)
    return ints / scale, ints


def homogenize(points) -> np.ndarray:
    """phi~ : v -> (phi(v), 1)."""
    pts = np.asarray(points, dtype=float)
    return np.hstack([pts, np.ones((pts.shape[0], 1))])


# -- classical stresses ----------------------------------------------------

def rigidity_matrix(F: Framework) -> np.ndarray:
    n, d = F.positions.shape
    index = {v: i for i, v in enumerate(F.vertices)}
    R = np.zeros((len(F.edges), d * n))
    for row, (u, v) in enumerate(F.edges):
        iu, iv = index[u], index[v]
        diff = F.positions[iu] - F.positions[iv]
        R[row, d * iu:d * iu + d] = diff
        R[row, d * iv:d * iv + d] = -diff
    return R


def stress_space(F: Framework) -> StressBasis:
    """Left kernel of the rigidity matrix: edge weights in equilibrium at every vertex."""
    R = rigidity_matrix(F)
    if R.shape[0] == 0:
        return StressBasis(2, F.edges, np.zeros((0, 0)))
    return StressBasis(2, F.edges, left_kernel(R, RTOL))


def stress_dim(F: Framework, backend: str = "float", bits: int = 24) -> int:
    if not F.edges:
        return 0
    if backend == "float":
        return stress_space(F).dim
    if backend == "exact":
        _, ints = rational_embedding(F.positions, bits)
        Fi = Framework(F.vertices, F.edges, ints.astype(float))
        R = rigidity_matrix(Fi).astype(np.int64)
        return len(F.edges) - certified_rank(R)
    raise ValueError(f"unknown backend {backend!r}")


def stress_residual(F: Framework, weights: np.ndarray) -> float:
    """max over vertices of |sum_u w(uv)(phi(u) - phi(v))|."""
    return float(np.abs(np.asarray(weights) @ rigidity_matrix(F)).max(initial=0.0))


def rigid_rank_target(n: int, d: int) -> int:
    """Rank of the rigidity matrix of a generically d-rigid graph on n >= d+1 vertices."""
    return d * n - comb(d + 1, 2)


def is_generically_rigid(edges: Iterable[Sequence[int]], d: int, seeds: Sequence[int] = (0, 1, 2),
                         vertices: Iterable[int] | None = None) -> bool:
    es = [tuple(e) for e in edges]
    vs = sorted(set(vertices) if vertices is not None else {v for e in es for v in e})
    if len(vs) < d + 1:
        raise StressError("need at least d+1 vertices")
    votes = 0
    for seed in seeds:
        rng = np.random.default_rng(seed)
        coords = {v: rng.standard_normal(d) for v in vs}
        pos = np.array([coords[v] for v in vs])
        F = Framework(tuple(vs), tuple(tuple(sorted(e)) for e in es), pos)
        R = rigidity_matrix(F)
        votes += float_rank(R, RTOL) == rigid_rank_target(len(vs), d) if R.size else 0
    return votes * 2 > len(seeds)


# -- affine k-stresses -----------------------------------------------------

def _faces_and_ridges(K: SimplicialComplex, k: int):
    sigmas = tuple(sorted(K.faces(k - 1)))
    taus = tuple(sorted(K.faces(k - 2)))
    return sigmas, taus


def _coords_lookup(coords, vertices: Iterable[int]) -> dict[int, np.ndarray]:
    if isinstance(coords, Mapping):
        return {v: np.asarray(coords[v], dtype=float) for v in vertices}
    arr = np.asarray(coords, dtype=float)
    return {v: arr[v] for v in vertices}


def _check_independent(K: SimplicialComplex, phi: dict[int, np.ndarray], k: int) -> None:
    d = len(next(iter(phi.values())))
    for i in (k - 1, k - 2):
        if i < 0:
            continue
        faces = np.array(sorted(K.faces(i)), dtype=np.int64)
        if faces.size == 0:
            continue
        H = np.stack([[np.append(phi[v], 1.0) for v in f] for f in faces])
        s = np.linalg.svd(H, compute_uv=False)
        if np.any(s[:, -1] < 1e-12 * max(1.0, s[:, 0].max())):
            bad = faces[int(np.argmin(s[:, -1]))]
            raise StressError(f"degenerate span: face {tuple(int(v) for v in bad)} "
                              f"is affinely dependent in R^{d}")


def affine_stress_matrix(K: SimplicialComplex, coords, k: int) -> tuple[np.ndarray, tuple[Face, ...]]:
    """Balancing system (float, orthonormal-complement encoding); columns = (k-1)-faces."""
    if k < 1:
        raise StressError("k must be >= 1")
    phi = _coords_lookup(coords, K.vertex_set)
    _check_independent(K, phi, k)
    sigmas, taus = _faces_and_ridges(K, k)
    col = {s: j for j, s in enumerate(sigmas)}
    tilde = {v: np.append(p, 1.0) for v, p in phi.items()}
    D = len(next(iter(tilde.values())))
    cofaces: dict[Face, list[tuple[int, int]]] = {t: [] for t in taus}
    for s in sigmas:
        for i in range(len(s)):
            cofaces[s[:i] + s[i + 1:]].append((col[s], s[i]))
    blocks = []
    for t in taus:
        if t:
            A = np.array([tilde[v] for v in t])
            _, _, vh = np.linalg.svd(A, full_matrices=True)
            C = vh[len(t):]
        else:
            C = np.eye(D)
        block = np.zeros((C.shape[0], len(sigmas)))
        for j, v in cofaces[t]:
            block[:, j] = C @ tilde[v]
        blocks.append(block)
    M = np.vstack(blocks) if blocks else np.zeros((0, len(sigmas)))
    return M, sigmas


def affine_stress_matrix_exact(K: SimplicialComplex, int_coords, k: int, scale: int,
                               ) -> tuple[np.ndarray, tuple[Face, ...]]:
    """Integer balancing system with explicit span multipliers.

    Unknowns are omega(sigma) for the (k-1)-faces followed by lambda_{tau,j};
    rows assert sum_sigma omega(sigma) phi~(sigma - tau) = sum_j lambda_{tau,j} phi~(tau_j).
    ``int_coords`` are the integer numerators and ``scale`` the common denominator.
    """
    phi = _coords_lookup(int_coords, K.vertex_set)
    tilde = {v: np.append(np.asarray(p, dtype=np.int64), scale).astype(np.int64) for v, p in phi.items()}
    sigmas, taus = _faces_and_ridges(K, k)
    D = len(next(iter(tilde.values())))
    n_lam = sum(len(t) for t in taus)
    M = np.zeros((D * len(taus), len(sigmas) + n_lam), dtype=np.int64)
    row_of = {t: D * i for i, t in enumerate(taus)}
    for j, s in enumerate(sigmas):
        for i in range(len(s)):
            r = row_of[s[:i] + s[i + 1:]]
            M[r:r + D, j] = tilde[s[i]]
    c = len(sigmas)
    for t in taus:
        r = row_of[t]
        for v in t:
            M[r:r + D, c] = -tilde[v]
            c += 1
    return M, sigmas


def affine_stress_space(K: SimplicialComplex, coords, k: int) -> StressBasis:
    """Affine k-stresses: weights on (k-1)-faces satisfying Minkowski balancing."""
    M, sigmas = affine_stress_matrix(K, coords, k)
    if not sigmas:
        return StressBasis(k, sigmas, np.zeros((0, 0)))
    if M.shape[0] == 0:
        return StressBasis(k, sigmas, np.eye(len(sigmas)))
    return StressBasis(k, sigmas, right_kernel(M, RTOL))


def _support_columns(sigmas: Sequence[Face], support: SimplicialComplex | None) -> list[int]:
    if support is None:
        return list(range(len(sigmas)))
    return [j for j, s in enumerate(sigmas) if s in support]


def affine_stress_dim(K: SimplicialComplex, coords, k: int, backend: str = "float",
                      bits: int = 24, support: SimplicialComplex | None = None) -> int:
    if backend == "float":
        M, sigmas = affine_stress_matrix(K, coords, k)
        cols = _support_columns(sigmas, support)
        if not cols:
            return 0
        sub = M[:, cols]
        return len(cols) - (float_rank(sub, RTOL) if sub.shape[0] else 0)
    if backend == "exact":
        phi = _coords_lookup(coords, K.vertex_set)
        _check_independent(K, phi, k)
        vs = sorted(phi)
        _, ints = rational_embedding(np.array([phi[v] for v in vs]), bits)
        int_coords = {v: ints[i] for i, v in enumerate(vs)}
        M, sigmas = affine_stress_matrix_exact(K, int_coords, k, 2 ** bits)
        cols = _support_columns(sigmas, support)
        keep = cols + list(range(len(sigmas), M.shape[1]))
        if not cols:
            return 0
        sub = M[:, keep]
        return len(keep) - certified_rank(sub)
    raise ValueError(f"unknown backend {backend!r}")


def stress_dim_supported_on(K: SimplicialComplex, coords, k: int, support: SimplicialComplex,
                            backend: str = "float") -> int:
    """Dimension of the k-stresses vanishing outside the (k-1)-faces of ``support``."""
    if not all(f in K for f in support.facets):
        raise ComplexError("support is not a subcomplex of K")
    return affine_stress_dim(K, coords, k, backend=backend, support=support)


def affine_stress_residual(K: SimplicialComplex, coords, k: int, weights: np.ndarray) -> float:
    M, _ = affine_stress_matrix(K, coords, k)
    return float(np.abs(M @ np.asarray(weights)).max(initial=0.0))


# -- local stresses near vertices with non-stacked links -------------------

@dataclass(frozen=True, eq=False)
class LocalStress:
    vertex: int
    case: str  # "i": a chord of the link cycle is an edge of K; "ii": the cycle is induced in K
    cycle: tuple[int, ...]
    framework: Framework
    weights: np.ndarray

    @property
    def support(self) -> frozenset[int]:
        live = np.abs(self.weights) > 1e-9 * np.abs(self.weights).max()
        return frozenset(v for e, w in zip(self.framework.edges, live) if w for v in e)

    def as_edge_dict(self) -> dict[tuple[int, int], float]:
        return {e: float(w) for e, w in zip(self.framework.edges, self.weights)}


def _closed_star_edges(K: SimplicialComplex, v: int) -> set[tuple[int, int]]:
    return set(star(K, (v,)).faces(1))


def local_stress_near_vertex(K: SimplicialComplex, coords, v: int) -> LocalStress | None:
    """Nonzero stress supported near v when link(v) is not stacked, else None.

    Follows the two-case construction: with an induced cycle C of length
    >= 4 in link(v), either some chord of C is an edge of K (stress on the
    cone over the link plus that edge) or C is induced in K (stress on the
    union of the cones at v_3..v_m plus the edge v_1 v_2).
    """
    L = link(K, (v,))
    if L.dim != 2:
        raise StressError("local stresses are defined for boundaries of 4-polytopes")
    if is_stacked_2sphere(L):
        return None
    cycle = chordless_cycle(L.graph())
    assert cycle is not None and len(cycle) >= 4
    m = len(cycle)
    edges_K = K.faces(1)
    chord = None
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            e = tuple(sorted((cycle[i], cycle[j])))
            if e in edges_K:
                chord = e
                break
        if chord:
            break
    if chord is not None:
        case = "i"
        graph = _closed_star_edges(K, v)
        extra = chord
    else:
        case = "ii"
        graph = set()
        for u in cycle[2:]:
            graph |= _closed_star_edges(K, u)
        extra = tuple(sorted((cycle[0], cycle[1])))
        if extra in graph:
            raise StressError("edge v1 v2 unexpectedly lies in the union of cones")
    phi = _coords_lookup(coords, K.vertex_set)
    F = Framework.from_edges(graph | {extra}, phi)
    basis = stress_space(F)
    if basis.dim == 0:
        raise StressError(f"no stress found near vertex {v}; embedding may be non-generic")
    e_idx = F.edges.index(extra)
    w = basis.vectors.T @ basis.vectors[:, e_idx]
    if np.linalg.norm(w) < 1e-12:
        w = basis.vectors[0]
    w = w / np.linalg.norm(w)
    return LocalStress(v, case, tuple(cycle), F, w)


def embed_edge_weights(weights: Mapping[tuple[int, int], float], edges: Sequence[tuple[int, int]]) -> np.ndarray:
    index = {e: i for i, e in enumerate(edges)}
    out = np.zeros(len(edges))
    for e, w in weights.items():
        out[index[e]] = w
    return out
