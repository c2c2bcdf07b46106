"""Seeded constructions of test polytopes and point sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import special_ortho_group

from .geometry import (GeometryError, Polytope, affine_image, as_points, convex_hull, facet_planes,
                       perturb_generic, polytope_from_facets)

NET_MAX_SPACING = 0.2
NET_RADIUS = 0.9


def regular_simplex_points(d: int) -> np.ndarray:
    """d+1 vertices of a regular simplex inscribed in the unit sphere of R^d."""
    E = np.eye(d + 1) - 1.0 / (d + 1)
    _, _, vh = np.linalg.svd(E)
    pts = E @ vh[:d].T
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def simplex(d: int) -> Polytope:
    return convex_hull(regular_simplex_points(d))


def cross_polytope(d: int, magnitude: float = 1e-6, seed: int = 0) -> Polytope:
    """Perturbed +-e_i, re-projected to the unit sphere so the hull stays inscribed."""
    pts = np.vstack([np.eye(d), -np.eye(d)])
    return convex_hull(perturb_generic(pts, magnitude, seed, sphere=True))


def moment_curve(ts, d: int) -> np.ndarray:
    ts = np.asarray(ts, dtype=float)
    return np.stack([ts ** (i + 1) for i in range(d)], axis=1)


def gale_facets(n: int, d: int) -> set[tuple[int, ...]]:
    """Facets of the cyclic polytope C(n, d) by Gale's evenness condition."""
    out = set()
    for S in itertools.combinations(range(n), d):
        chosen = set(S)
        ok = True
        for i, j in itertools.combinations(range(n), 2):
            if i in chosen or j in chosen:
                continue
            between = sum(1 for v in S if i < v < j)
            if between % 2:
                ok = False
                break
        if ok:
            out.add(S)
    return out


def cyclic_polytope(n: int, d: int, magnitude: float = 1e-9, seed: int = 0) -> Polytope:
    """C(n, d) on the moment curve with parameters spread over [-1, 1].

    Vertex i of the result is the i-th curve point; the facets are checked
    against Gale's evenness condition.
    """
    if n < d + 1:
        raise GeometryError("cyclic polytope needs n >= d + 1")
    pts = moment_curve(np.linspace(-1.0, 1.0, n), d)
    P = convex_hull(perturb_generic(pts, magnitude, seed))
    if P.n_vertices != n:
        raise GeometryError("cyclic polytope lost vertices in the hull")
    order = np.argsort(P.source_index)
    inv = np.empty(n, dtype=np.int64)
    inv[order] = np.arange(n)
    facets = [tuple(sorted(int(inv[v]) for v in f)) for f in P.facets]
    P = polytope_from_facets(P.points[order], facets, source_index=np.arange(n))
    if set(P.facets) != gale_facets(n, d):
        raise GeometryError("hull facets disagree with Gale evenness")
    return P


def stacked_polytope(d: int, steps: int, seed: int = 0, height: float = 0.2,
                     max_shrink: int = 40) -> Polytope:
    """Simplex stacked ``steps`` times over seeded random facets."""
    if steps < 0:
        raise GeometryError("steps must be non-negative")
    rng = np.random.default_rng(seed)
    pts = list(regular_simplex_points(d))
    facets = [tuple(f) for f in itertools.combinations(range(d + 1), d)]
    for _ in range(steps):
        P = np.array(pts)
        F = np.array(facets)
        normals, offsets = facet_planes(P, F, interior=P.mean(axis=0))
        j = int(rng.integers(len(facets)))
        corners = P[list(facets[j])]
        centroid = corners.mean(axis=0)
        radius = float(np.linalg.norm(corners - centroid, axis=1).max())
        h = height * radius
        others = np.ones(len(facets), dtype=bool)
        others[j] = False
        for _ in range(max_shrink):
            p = centroid + h * normals[j]
            slack = offsets[others] - normals[others] @ p
            if slack.min() > 1e-9 * max(1.0, radius):
                break
            h *= 0.5
        else:
            raise GeometryError("could not place a stacking vertex")
        new = len(pts)
        pts.append(p)
        old = facets.pop(j)
        facets.extend(tuple(sorted(set(old) - {v} | {new})) for v in old)
    return polytope_from_facets(np.array(pts), facets)


def sphere_points(n: int, d: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def sphere_uniform(n: int, d: int, seed: int = 0) -> Polytope:
    """Hull of n uniform random points on S^{d-1}."""
    if n < d + 1:
        raise GeometryError("need n >= d + 1 points")
    return convex_hull(sphere_points(n, d, seed))


def ball_points(n: int, d: int, seed: int = 0) -> np.ndarray:
    """n uniform random points in the closed unit ball."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.random(n)[:, None] ** (1.0 / d)


def random_ball_polytope(n: int, d: int, seed: int = 0) -> Polytope:
    return convex_hull(ball_points(n, d, seed))


def _lattice_disk(spacing: float, m: int, radius: float) -> np.ndarray:
    k = int(np.floor(radius / spacing))
    axis = np.arange(-k, k + 1) * spacing
    grid = np.stack(np.meshgrid(*([axis] * m), indexing="ij"), axis=-1).reshape(-1, m)
    return grid[np.einsum("ij,ij->i", grid, grid) <= radius * radius]


def greedy_separated(points: np.ndarray, min_dist: float) -> np.ndarray:
    """Indices of a maximal subset with pairwise distance >= min_dist, scanned in order."""
    tree = cKDTree(points)
    alive = np.ones(len(points), dtype=bool)
    keep = []
    for i in range(len(points)):
        if not alive[i]:
            continue
        keep.append(i)
        for j in tree.query_ball_point(points[i], min_dist * (1 - 1e-12)):
            alive[j] = False
    return np.array(keep, dtype=np.int64)


def sphere_net(eps: float, d: int, seed: int = 0) -> np.ndarray:
    """Points on S^{d-1} with pairwise distance >= eps and |A| of order eps^(1-d).

    A cubic lattice of spacing eps in the disk of radius 0.9 of each
    coordinate hyperplane is lifted to both sheets of the sphere; the d
    charts together cover the whole sphere.  After a tiny tangential jitter
    (breaking cocircularities) and a seeded rotation, points closer than eps
    are pruned greedily in a fixed order.
    """
    if not 0 < eps <= NET_MAX_SPACING:
        raise GeometryError(f"net spacing must lie in (0, {NET_MAX_SPACING}], got {eps}")
    if d < 2:
        raise GeometryError("need d >= 2")
    rng = np.random.default_rng(seed)
    disk = _lattice_disk(eps * (1 + 1e-4), d - 1, NET_RADIUS)
    height = np.sqrt(np.clip(1.0 - np.einsum("ij,ij->i", disk, disk), 0.0, None))
    sheets = []
    for axis in range(d):
        for sign in (1.0, -1.0):
            pts = np.insert(disk, axis, sign * height, axis=1)
            sheets.append(pts)
    A = np.vstack(sheets)
    A = A + 1e-6 * eps * rng.standard_normal(A.shape)
    A /= np.linalg.norm(A, axis=1, keepdims=True)
    R = special_ortho_group.rvs(d, random_state=rng) if d > 1 else np.eye(1)
    A = A @ R.T
    return A[greedy_separated(A, eps)]


def net_polytope(spacing: float, d: int, seed: int = 0) -> Polytope:
    """Inscribed hull of ``sphere_net(spacing, d, seed)``."""
    return convex_hull(sphere_net(spacing, d, seed))


def ellipsoid_image(P: Polytope, T) -> Polytope:
    return affine_image(P, T)


@dataclass(frozen=True)
class GeneratorSpec:
    """Serializable description of a generated polytope."""

    kind: str
    d: int
    seed: int = 0
    params: dict[str, Any] = field(default_factory=dict)

    KINDS = ("simplex", "cross", "cyclic", "stacked", "sphere_uniform", "sphere_net",
             "ball_uniform", "ellipsoid_image")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.d < 2:
            raise ValueError("d must be >= 2")
        p = self.params
        if self.kind == "cyclic" and int(p.get("n", 0)) < self.d + 1:
            raise ValueError("cyclic needs n >= d + 1")
        if self.kind == "stacked" and int(p.get("steps", -1)) < 0:
            raise ValueError("stacked needs steps >= 0")
        if self.kind in ("sphere_uniform", "ball_uniform") and int(p.get("n", 0)) < self.d + 1:
            raise ValueError(f"{self.kind} needs n >= d + 1")
        if self.kind == "sphere_net" and not 0 < float(p.get("eps", 0)) <= NET_MAX_SPACING:
            raise ValueError("sphere_net needs 0 < eps <= 0.2")
        if self.kind == "ellipsoid_image":
            if "inner" not in p or "matrix" not in p:
                raise ValueError("ellipsoid_image needs 'inner' and 'matrix'")
            if abs(np.linalg.det(np.asarray(p["matrix"], dtype=float))) < 1e-14:
                raise ValueError("ellipsoid_image matrix is singular")

    def build(self) -> Polytope:
        p, d, s = self.params, self.d, self.seed
        if self.kind == "simplex":
            return simplex(d)
        if self.kind == "cross":
            return cross_polytope(d, seed=s)
        if self.kind == "cyclic":
            return cyclic_polytope(int(p["n"]), d, seed=s)
        if self.kind == "stacked":
            return stacked_polytope(d, int(p["steps"]), seed=s)
        if self.kind == "sphere_uniform":
            return sphere_uniform(int(p["n"]), d, seed=s)
        if self.kind == "ball_uniform":
            return random_ball_polytope(int(p["n"]), d, seed=s)
        if self.kind == "sphere_net":
            return net_polytope(float(p["eps"]), d, seed=s)
        inner = p["inner"]
        inner = inner if isinstance(inner, GeneratorSpec) else GeneratorSpec.from_dict(inner)
        return ellipsoid_image(inner.build(), p["matrix"])

    def to_dict(self) -> dict[str, Any]:
        params = dict(self.params)
        if isinstance(params.get("inner"), GeneratorSpec):
            params["inner"] = params["inner"].to_dict()
        if "matrix" in params:
            params["matrix"] = np.asarray(params["matrix"], dtype=float).tolist()
        return {"kind": self.kind, "d": self.d, "seed": self.seed, "params": params}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GeneratorSpec":
        return cls(data["kind"], int(data["d"]), int(data.get("seed", 0)), dict(data.get("params", {})))

    def label(self) -> str:
        extra = ",".join(f"{k}={v}" for k, v in sorted(self.params.items())
                         if k not in ("inner", "matrix"))
        return f"{self.kind}(d={self.d}{',' + extra if extra else ''};seed={self.seed})"


def as_polytope(obj) -> Polytope:
    if isinstance(obj, Polytope):
        return obj
    if isinstance(obj, GeneratorSpec):
        return obj.build()
    if isinstance(obj, dict):
        return GeneratorSpec.from_dict(obj).build()
    return convex_hull(as_points(obj))
