"""Point configurations, simplicial polytopes and convex-body metrics.

Hulls are computed with Qhull (via scipy) and then re-verified here: facet
planes are recomputed from the facet vertices, local convexity is checked
across every ridge, and any orientation test that comes out within
tolerance of zero is redone in exact rational arithmetic.  A zero exact
determinant means the input is not in general position and is reported
together with the offending (d+1)-subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, sqrt
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .complex import SimplicialComplex
from .enumeration import FaceVector, GVector, HVector, g_from_h, h_from_f

MAX_HULL_DIM = 6
DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    pass


class DegenerateInputError(GeometryError):
    """Input points do not span the ambient space."""


class NonGenericError(GeometryError):
    """Input is not in general position; ``subset`` names the witnesses."""

    def __init__(self, message: str, subset: Sequence[int] = ()):
        super().__init__(message)
        self.subset = tuple(int(i) for i in subset)


def as_points(pts) -> np.ndarray:
    arr = np.array(pts, dtype=float, ndmin=2)
    if arr.ndim != 2:
        raise GeometryError("points must be an (n, d) array")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("points must be finite")
    return arr


def exact_orientation(rows: np.ndarray) -> Fraction:
    """Exact determinant of the homogenised (d+1) x (d+1) matrix [p_i, 1]."""
    m = [[Fraction(float(x)) for x in r] + [Fraction(1)] for r in rows]
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
            if m[r][c]:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def facet_planes(points: np.ndarray, facets: np.ndarray, interior: np.ndarray | None = None,
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Unit outer normals and offsets of the hyperplanes through each facet."""
    points = np.asarray(points, dtype=float)
    facets = np.asarray(facets, dtype=np.int64)
    if interior is None:
        interior = points.mean(axis=0)
    V = points[facets]
    diffs = V[:, 1:, :] - V[:, :1, :]
    _, _, vh = np.linalg.svd(diffs, full_matrices=True)
    normals = vh[:, -1, :]
    offsets = np.einsum("fd,fd->f", normals, V.mean(axis=1))
    flip = normals @ interior > offsets
    normals[flip] *= -1
    offsets[flip] *= -1
    return normals, offsets


@dataclass(frozen=True, eq=False)
class Polytope:
    """Simplicial d-polytope: vertex coordinates, facets and facet planes.

    ``facets[i]`` lists vertex indices (sorted); the plane of facet i is
    {x : normals[i] . x = offsets[i]} with the polytope on the side <= .
    """

    points: np.ndarray
    facets: tuple[tuple[int, ...], ...]
    normals: np.ndarray = field(repr=False)
    offsets: np.ndarray = field(repr=False)
    simplicial: bool = True
    source_index: np.ndarray | None = field(default=None, repr=False)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.points.shape[0]

    @cached_property
    def boundary_complex(self) -> SimplicialComplex:
        return SimplicialComplex._trusted(frozenset(self.facets))

    @cached_property
    def f_vector(self) -> FaceVector:
        K = self.boundary_complex
        return FaceVector(tuple(len(K.faces(i)) for i in range(-1, self.d)))

    @property
    def h_vector(self) -> HVector:
        return h_from_f(self.f_vector)

    @property
    def g_vector(self) -> GVector:
        return g_from_h(self.h_vector)

    def g(self, k: int) -> int:
        return self.g_vector.entries[k]

    def __repr__(self) -> str:
        return f"Polytope(d={self.d}, n={self.n_vertices}, f={self.f_vector.entries})"


def _ridge_pairs(facets: np.ndarray) -> np.ndarray | None:
    """Pair up facets across ridges.

    Returns rows (facet_a, vertex_a, facet_b, vertex_b) where vertex_x is the
    vertex of facet_x opposite the shared ridge, or None if some ridge is
    not shared by exactly two facets.
    """
    F, d = facets.shape
    cols = np.arange(d)
    ridges = np.concatenate([facets[:, cols != i] for i in range(d)])
    owner = np.tile(np.arange(F), d)
    opposite = np.concatenate([facets[:, i] for i in range(d)])
    order = np.lexsort(ridges.T[::-1])
    ridges, owner, opposite = ridges[order], owner[order], opposite[order]
    if len(ridges) % 2:
        return None
    a, b = ridges[0::2], ridges[1::2]
    if not np.array_equal(a, b):
        return None
    if len(a) > 1 and np.any(np.all(a[1:] == a[:-1], axis=1)):
        return None
    return np.stack([owner[0::2], opposite[0::2], owner[1::2], opposite[1::2]], axis=1)


def _ridge_degrees_ok(facets: Sequence[tuple[int, ...]]) -> bool:
    return _ridge_pairs(np.asarray(facets, dtype=np.int64)) is not None


def _check_side(points, facet, normal, offset, w, tol, scale) -> None:
    dist = float(normal @ points[w] - offset)
    if dist < -tol * scale:
        return
    if dist > tol * scale:
        raise GeometryError(f"vertex {w} lies outside facet {facet}")
    det = exact_orientation(points[list(facet) + [w]])
    if det == 0:
        raise NonGenericError("affinely dependent (d+1)-subset on a facet plane",
                              tuple(facet) + (w,))
    # exact side: compare with the sign of a strictly interior reference
    ref = exact_orientation(np.vstack([points[list(facet)], points.mean(axis=0)]))
    if ref == 0 or (det > 0) != (ref > 0):
        raise GeometryError(f"vertex {w} is not beneath facet {facet}")


def polytope_from_facets(points, facets: Iterable[Iterable[int]], tol: float = DEFAULT_TOL,
                         check: bool = True, source_index=None) -> Polytope:
    points = as_points(points)
    facet_list = tuple(sorted(tuple(sorted(int(v) for v in f)) for f in facets))
    d = points.shape[1]
    if any(len(f) != d for f in facet_list):
        raise GeometryError("every facet of a simplicial d-polytope has d vertices")
    arr = np.array(facet_list, dtype=np.int64)
    normals, offsets = facet_planes(points, arr)
    P = Polytope(points, facet_list, normals, offsets, True, source_index)
    if check:
        verify_polytope(P, tol)
    return P


def verify_polytope(P: Polytope, tol: float = DEFAULT_TOL) -> None:
    """Check the Polytope invariants; raises GeometryError on failure."""
    if not _ridge_degrees_ok(P.facets):
        raise GeometryError("some ridge is not shared by exactly two facets")
    pts, scale = P.points, max(1.0, float(np.abs(P.points).max()))
    used = {v for f in P.facets for v in f}
    if used != set(range(P.n_vertices)):
        raise GeometryError("some point is not a vertex of any facet")
    n, F = P.n_vertices, len(P.facets)
    if n * F <= 20_000_000:
        D = pts @ P.normals.T - P.offsets  # (n, F)
        D[np.asarray(P.facets, dtype=np.int64), np.arange(F)[:, None]] = -np.inf
        for w, j in np.argwhere(D >= -tol * scale):
            _check_side(pts, P.facets[j], P.normals[j], P.offsets[j], int(w), tol, scale)
    else:
        _verify_local(P, tol, scale)


def _verify_local(P: Polytope, tol: float, scale: float) -> None:
    # across each ridge, the opposite vertex must be strictly beneath
    pairs = _ridge_pairs(np.asarray(P.facets, dtype=np.int64))
    if pairs is None:
        raise GeometryError("some ridge is not shared by exactly two facets")
    fa, va, fb, vb = pairs.T
    checks = np.concatenate([np.stack([fa, vb], 1), np.stack([fb, va], 1)])
    j, w = checks.T
    dist = np.einsum("nd,nd->n", P.points[w], P.normals[j]) - P.offsets[j]
    for idx in np.flatnonzero(dist >= -tol * scale):
        jj, ww = int(j[idx]), int(w[idx])
        _check_side(P.points, P.facets[jj], P.normals[jj], P.offsets[jj], ww, tol, scale)


def affine_rank(points: np.ndarray) -> int:
    pts = as_points(points)
    if len(pts) <= 1:
        return 0
    s = np.linalg.svd(pts - pts[0], compute_uv=False)
    return int(np.sum(s > 1e-12 * max(1.0, s[0])))


def convex_hull(pts, tol: float = DEFAULT_TOL) -> Polytope:
    """Simplicial hull of generic points; non-vertex input points are dropped."""
    points = as_points(pts)
    n, d = points.shape
    if d < 2 or d > MAX_HULL_DIM:
        raise GeometryError(f"hull dimension must be in [2, {MAX_HULL_DIM}], got {d}")
    if n < d + 1 or affine_rank(points) < d:
        raise DegenerateInputError("points do not affinely span R^d")
    try:
        hull = ConvexHull(points)
    except QhullError as exc:  # pragma: no cover - qhull precision failures
        raise DegenerateInputError(str(exc)) from exc
    if len(hull.coplanar):
        i, j = int(hull.coplanar[0][0]), int(hull.coplanar[0][1])
        raise NonGenericError("input point lies on a facet plane",
                              tuple(hull.simplices[j]) + (i,))
    verts = np.array(sorted(set(int(v) for v in hull.simplices.ravel())))
    remap = -np.ones(n, dtype=np.int64)
    remap[verts] = np.arange(len(verts))
    facets = [tuple(int(x) for x in remap[s]) for s in hull.simplices]
    P = polytope_from_facets(points[verts], facets, tol=tol, check=False, source_index=verts)
    # a triangulated non-simplicial facet shows up as a coplanar ridge neighbour
    verify_polytope(P, tol)
    _check_dropped(points, verts, P, tol)
    return P


def _check_dropped(points: np.ndarray, verts: np.ndarray, P: Polytope, tol: float) -> None:
    # qhull may discard a point lying exactly on a facet as interior
    dropped = np.setdiff1d(np.arange(len(points)), verts)
    scale = max(1.0, float(np.abs(points).max()))
    step = max(1, 20_000_000 // max(1, len(P.facets)))
    for start in range(0, len(dropped), step):
        chunk = dropped[start:start + step]
        D = points[chunk] @ P.normals.T - P.offsets
        for i, j in np.argwhere(D >= -tol * scale):
            facet = tuple(int(x) for x in verts[list(P.facets[j])])
            _check_side(points, facet, P.normals[j], P.offsets[j], int(chunk[i]), tol, scale)


def affine_image(P: Polytope, T, shift=None) -> Polytope:
    """Image of P under x -> T x + shift (combinatorics preserved)."""
    T = np.asarray(T, dtype=float)
    if abs(np.linalg.det(T)) < 1e-14:
        raise GeometryError("affine map is singular")
    pts = P.points @ T.T
    if shift is not None:
        pts = pts + np.asarray(shift, dtype=float)
    return polytope_from_facets(pts, P.facets, check=False, source_index=P.source_index)


def perturb_generic(pts, magnitude: float, seed: int = 0, max_tries: int = 10,
                    sphere: bool = False) -> np.ndarray:
    """Seeded random perturbation with a general-position certificate.

    Every (d+1)-subset is tested when there are at most 200k of them;
    larger inputs are tested on a seeded sample of 200k subsets.
    ``sphere=True`` re-projects the perturbed points onto the unit sphere.
    """
    points = as_points(pts)
    if magnitude == 0:
        return points.copy()
    if magnitude < 0:
        raise GeometryError("magnitude must be non-negative")
    n, d = points.shape
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        q = points + magnitude * rng.standard_normal(points.shape)
        if sphere:
            q /= np.linalg.norm(q, axis=1, keepdims=True)
        if n < d + 1 or _generic_certificate(q, rng):
            return q
    raise NonGenericError("could not certify general position after perturbation")


def _generic_certificate(q: np.ndarray, rng: np.random.Generator, limit: int = 200_000) -> bool:
    n, d = q.shape
    if comb(n, d + 1) <= limit:
        subsets = np.array(list(combinations(range(n), d + 1)), dtype=np.int64)
    else:
        subsets = np.sort(np.array([rng.choice(n, d + 1, replace=False) for _ in range(limit)]),
                          axis=1)
    scale = max(1.0, float(np.abs(q).max()))
    H = np.concatenate([q[subsets], np.ones(subsets.shape + (1,))], axis=2)
    dets = np.linalg.det(H)
    return bool(np.all(np.abs(dets) > 1e-13 * scale ** d))


def support(u, P: Polytope) -> float:
    """c(u, P) = max over vertices of <u, v>."""
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > 1e-9:
        raise GeometryError("direction must be a unit vector")
    return float(np.max(P.points @ u))


def hausdorff_to_ball(P: Polytope) -> float:
    """Hausdorff distance between P and the closed unit ball (origin interior).

    Uses sup_u |h_P(u) - 1| with min_u h_P(u) = min facet offset and
    max_u h_P(u) = max vertex norm.
    """
    if np.any(P.offsets <= 0):
        raise GeometryError("origin is not strictly interior to P")
    inner = 1.0 - float(P.offsets.min())
    outer = float(np.linalg.norm(P.points, axis=1).max()) - 1.0
    return max(inner, outer, 0.0)


@dataclass(frozen=True, eq=False)
class BodySpec:
    """The unit ball, or the ellipsoid ``matrix @ B`` with ``matrix`` SPD."""

    kind: str
    d: int
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("unit_ball", "ellipsoid"):
            raise GeometryError(f"unknown body kind {self.kind!r}")
        if self.kind == "ellipsoid":
            A = np.asarray(self.matrix, dtype=float)
            if A.shape != (self.d, self.d) or not np.allclose(A, A.T):
                raise GeometryError("ellipsoid matrix must be symmetric d x d")
            try:
                np.linalg.cholesky(A)
            except np.linalg.LinAlgError as exc:
                raise GeometryError("ellipsoid matrix must be positive definite") from exc

    @classmethod
    def unit_ball(cls, d: int) -> "BodySpec":
        return cls("unit_ball", d)

    @classmethod
    def ellipsoid(cls, A) -> "BodySpec":
        A = np.asarray(A, dtype=float)
        return cls("ellipsoid", A.shape[0], A)

    def support(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "unit_ball":
            return np.linalg.norm(u, axis=-1)
        return np.linalg.norm(u @ self.matrix, axis=-1)


def hausdorff_to_body(P: Polytope, body: BodySpec) -> tuple[float, float]:
    """Certified interval for the Hausdorff distance from P to the body."""
    if body.d != P.d:
        raise GeometryError("dimension mismatch")
    if body.kind == "unit_ball":
        delta = hausdorff_to_ball(P)
        return delta, delta
    A = body.matrix
    Q = affine_image(P, np.linalg.inv(A))
    delta = hausdorff_to_ball(Q)
    s = np.linalg.svd(A, compute_uv=False)
    return float(s.min()) * delta, float(s.max()) * delta


def longest_edge(P: Polytope) -> float:
    edges = np.array(sorted(P.boundary_complex.faces(1)), dtype=np.int64)
    if edges.size == 0:
        return 0.0
    return float(np.linalg.norm(P.points[edges[:, 0]] - P.points[edges[:, 1]], axis=1).max())


def _orthonormal(basis) -> np.ndarray:
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    q, r = np.linalg.qr(B.T)
    if np.any(np.abs(np.diag(r)) < 1e-12):
        raise GeometryError("subspace basis is not linearly independent")
    return q.T


def shadow_boundary_subcomplex(P: Polytope, basis, tol: float = DEFAULT_TOL) -> SimplicialComplex:
    """Faces of the boundary of P that project into the boundary of pi(P).

    ``basis`` spans the (d-k)-dimensional subspace that pi projects onto.
    """
    B = _orthonormal(basis)
    m, d = B.shape
    if d != P.d:
        raise GeometryError("basis dimension mismatch")
    if m < 1 or m >= d:
        raise GeometryError("projection subspace must have dimension between 1 and d-1")
    Y = P.points @ B.T
    scale = max(1.0, float(np.abs(Y).max()))
    if np.min(np.linalg.norm(P.normals @ B.T, axis=1)) < tol:
        raise NonGenericError("a facet normal is orthogonal to the projection subspace")
    if m == 1:
        y = Y[:, 0]
        order = np.argsort(y)
        if y[order[1]] - y[order[0]] < tol * scale or y[order[-1]] - y[order[-2]] < tol * scale:
            raise NonGenericError("projected extreme vertices coincide")
        return SimplicialComplex([(int(order[0]),), (int(order[-1]),)])
    if cKDTree(Y).query_pairs(tol * scale):
        raise NonGenericError("projected vertices coincide")
    try:
        hull = ConvexHull(Y)
    except QhullError as exc:
        raise NonGenericError(f"projection is degenerate: {exc}") from exc
    if len(hull.coplanar):
        raise NonGenericError("projected vertex on a facet of the projection",
                              (int(hull.coplanar[0][0]),))
    dist = Y @ hull.equations[:, :-1].T + hull.equations[:, -1]
    on_plane = np.abs(dist) <= tol * scale
    if np.any(on_plane.sum(axis=0) != m):
        raise NonGenericError("projected polytope is not simplicial")
    facets = [tuple(sorted(int(v) for v in s)) for s in hull.simplices]
    K = P.boundary_complex
    for f in facets:
        if f not in K:
            raise NonGenericError(f"projected facet {f} is not a face of P", f)
    return SimplicialComplex(facets)


def random_subspace(d: int, m: int, rng: np.random.Generator, orth_to=None) -> np.ndarray:
    """Orthonormal rows spanning a random m-dimensional subspace (optionally inside orth_to^perp)."""
    G = rng.standard_normal((d, m))
    if orth_to is not None:
        x = np.asarray(orth_to, dtype=float)
        x = x / np.linalg.norm(x)
        G -= np.outer(x, x @ G)
    q, _ = np.linalg.qr(G)
    return q[:, :m].T


def orthogonal_complement(B: np.ndarray) -> np.ndarray:
    B = _orthonormal(B)
    m, d = B.shape
    _, _, vh = np.linalg.svd(B, full_matrices=True)
    return vh[m:]


def origin_in_hull(Y: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Whether 0 lies in conv(rows of Y), up to tol, by linear programming."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    n, k = Y.shape
    if k == 1:
        return bool(Y.min() <= tol and Y.max() >= -tol)
    # minimise t subject to |Y^T lam|_inf <= t, sum lam = 1, lam >= 0
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.block([[Y.T, -np.ones((k, 1))], [-Y.T, -np.ones((k, 1))]])
    b_ub = np.zeros(2 * k)
    A_eq = np.concatenate([np.ones(n), [0.0]])[None, :]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * (n + 1), method="highs")
    return bool(res.status == 0 and res.fun <= tol)


@dataclass(frozen=True)
class Strip:
    center: np.ndarray
    cap_center: np.ndarray
    subspace: np.ndarray
    vertices: frozenset[int]


def cap_height(cap_chord: float) -> float:
    """Height <x, y> of the cap boundary at chordal distance cap_chord from x."""
    return 1.0 - cap_chord ** 2 / 2.0


def strip_vertex_sets(P: Polytope, centers, eps: float, k: int, cap_factor: float = 11.0,
                      seed: int = 0, tol: float = DEFAULT_TOL) -> list[Strip]:
    """Vertex sets W_x of faces of P meeting the (d-k)-flats L_x inside the caps.

    For each unit vector x in ``centers`` the hyperplane H_x = {<x, .> = h}
    cuts the sphere at chordal distance ``cap_factor * sqrt(eps)`` from x;
    L_x is a seeded random (d-k)-flat in H_x through the cap centre h x.
    """
    d = P.d
    if not 1 <= k < d:
        raise GeometryError("need 1 <= k < d")
    chord = cap_factor * sqrt(eps)
    if eps <= 0 or chord >= sqrt(2.0):
        raise GeometryError(f"infeasible cap parameters: cap chord {chord:.4g} >= sqrt(2)")
    if np.linalg.norm(P.points, axis=1).max() > 1 + 1e-9:
        raise GeometryError("P must be contained in the unit ball")
    h = cap_height(chord)
    rng = np.random.default_rng(seed)
    edge = longest_edge(P)
    facets = np.array(P.facets, dtype=np.int64)
    out = []
    for x in np.atleast_2d(np.asarray(centers, dtype=float)):
        x = x / np.linalg.norm(x)
        u = h * x
        if k == 1:
            L = orthogonal_complement(x[None, :])
        else:
            L = random_subspace(d, d - k, rng, orth_to=x)
        Q = orthogonal_complement(L)  # k x d, normal directions of L
        Y = (P.points - u) @ Q.T
        near = np.linalg.norm(Y, axis=1) <= edge + tol
        cand = np.flatnonzero(near[facets].any(axis=1))
        W: set[int] = set()
        for j in cand:
            f = facets[j]
            Yf = Y[f]
            if np.any(Yf.max(axis=0) < -tol) or np.any(Yf.min(axis=0) > tol):
                continue
            if origin_in_hull(Yf, tol):
                W.update(int(v) for v in f)
        out.append(Strip(x, u, L, frozenset(W)))
    return out


def write_polytope(P: Polytope) -> str:
    lines = [f"{P.d} {P.n_vertices}"]
    lines += [" ".join(repr(float(x)) for x in row) for row in P.points]
    lines.append(str(len(P.facets)))
    lines += [" ".join(map(str, f)) for f in P.facets]
    return "\n".join(lines) + "\n"


def read_polytope(text: str, check: bool = True) -> Polytope:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GeometryError("empty polytope file")
    d, n = int(rows[0][0]), int(rows[0][1])
    pts = np.array([[float(x) for x in r] for r in rows[1:1 + n]], dtype=float)
    if pts.shape != (n, d):
        raise GeometryError(f"expected {n} coordinate lines of length {d}")
    if len(rows) <= 1 + n:
        return convex_hull(pts)
    nf = int(rows[1 + n][0])
    facets = [tuple(int(x) for x in r) for r in rows[2 + n:2 + n + nf]]
    if len(facets) != nf:
        raise GeometryError(f"expected {nf} facet lines")
    return polytope_from_facets(pts, facets, check=check)
