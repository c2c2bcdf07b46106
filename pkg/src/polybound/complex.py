"""Abstract simplicial complexes.

A complex is stored by its facets (inclusion-maximal faces).  Faces are
sorted tuples of non-negative integer vertex ids; the empty tuple is the
empty face, which every complex contains.  The complex with no vertices
(only the empty face) is called the void complex here and has f = (1,).
"""

from __future__ import annotations

import threading
from collections import deque
from itertools import combinations
from typing import Iterable, Mapping

Face = tuple[int, ...]


class ComplexError(ValueError):
    """Raised on invalid complex operations (unknown face, bad vertex...)."""


def _as_face(vertices: Iterable[int]) -> Face:
    face = tuple(sorted(set(int(v) for v in vertices)))
    if face and face[0] < 0:
        raise ComplexError(f"vertex ids must be non-negative: {face}")
    return face


def _maximal(faces: Iterable[Face]) -> frozenset[Face]:
    by_size: dict[int, set[Face]] = {}
    for f in faces:
        if f:
            by_size.setdefault(len(f), set()).add(f)
    kept: list[Face] = []
    for size in sorted(by_size, reverse=True):
        larger = [f for f in kept if len(f) > size]
        if not larger:
            kept.extend(by_size[size])
            continue
        covered = set()
        for f in larger:
            covered.update(combinations(f, size))
        kept.extend(f for f in by_size[size] if f not in covered)
    return frozenset(kept)


class SimplicialComplex:
    """Finite simplicial complex given by its facets.

    Instances are immutable.  Face sets per dimension are computed lazily
    and cached under a lock, so a complex can be shared between threads.
    """

    __slots__ = ("facets", "vertex_set", "_faces", "_lock", "_incidence", "_adj")

    def __init__(self, facets: Iterable[Iterable[int]] = ()):
        self.facets: frozenset[Face] = _maximal(_as_face(f) for f in facets)
        self.vertex_set: frozenset[int] = frozenset(v for f in self.facets for v in f)
        self._faces: dict[int, frozenset[Face]] = {}
        self._lock = threading.Lock()
        self._incidence = self._adj = None

    @classmethod
    def _trusted(cls, facets: frozenset[Face]) -> "SimplicialComplex":
        # facets already sorted, non-empty and pairwise incomparable
        obj = cls.__new__(cls)
        obj.facets = facets
        obj.vertex_set = frozenset(v for f in facets for v in f)
        obj._faces = {}
        obj._lock = threading.Lock()
        obj._incidence = obj._adj = None
        return obj

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def faces(self, i: int) -> frozenset[Face]:
        if i < -1:
            raise ComplexError(f"dimension must be >= -1, got {i}")
        if i == -1:
            return frozenset({()})
        with self._lock:
            cached = self._faces.get(i)
            if cached is None:
                out: set[Face] = set()
                for f in self.facets:
                    if len(f) > i:
                        out.update(combinations(f, i + 1))
                cached = frozenset(out)
                self._faces[i] = cached
        return cached

    def all_faces(self) -> list[Face]:
        return [f for i in range(-1, self.dim + 1) for f in sorted(self.faces(i))]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces(i)) for i in range(-1, self.dim + 1))

    def euler_characteristic(self) -> int:
        """Unreduced Euler characteristic sum_{i>=0} (-1)^i f_i."""
        return sum((-1) ** i * len(self.faces(i)) for i in range(0, self.dim + 1))

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def __contains__(self, face: object) -> bool:
        if not isinstance(face, (tuple, list, frozenset, set)):
            return False
        f = _as_face(face)
        if not f:
            return True
        if len(f) == 1:
            return f[0] in self.vertex_set
        return f in self.faces(len(f) - 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimplicialComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector()})"

    def skeleton(self, i: int) -> "SimplicialComplex":
        if i >= self.dim:
            return self
        return SimplicialComplex._trusted(_maximal(self.faces(i)))

    def graph(self) -> dict[int, set[int]]:
        """1-skeleton as an adjacency map (isolated vertices included)."""
        return {v: set(nb) for v, nb in self.adjacency().items()}

    def adjacency(self) -> dict[int, frozenset[int]]:
        """Cached read-only adjacency of the 1-skeleton."""
        if self._adj is None:
            adj: dict[int, set[int]] = {v: set() for v in self.vertex_set}
            for u, v in self.faces(1):
                adj[u].add(v)
                adj[v].add(u)
            self._adj = {v: frozenset(nb) for v, nb in adj.items()}
        return self._adj

    def facets_containing(self, v: int) -> tuple[Face, ...]:
        if self._incidence is None:
            inc: dict[int, list[Face]] = {u: [] for u in self.vertex_set}
            for f in self.facets:
                for u in f:
                    inc[u].append(f)
            self._incidence = {u: tuple(fs) for u, fs in inc.items()}
        return self._incidence.get(v, ())


def from_facets(facet_list: Iterable[Iterable[int]]) -> SimplicialComplex:
    return SimplicialComplex(facet_list)


def faces_of_dim(K: SimplicialComplex, i: int) -> frozenset[Face]:
    return K.faces(i)


def _require_face(K: SimplicialComplex, F: Iterable[int]) -> Face:
    face = _as_face(F)
    if face not in K:
        raise ComplexError(f"face {face} is not in the complex")
    return face


def link(K: SimplicialComplex, F: Iterable[int]) -> SimplicialComplex:
    face = _require_face(K, F)
    fs = set(face)
    pool = K.facets_containing(face[0]) if face else K.facets
    return SimplicialComplex(tuple(v for v in f if v not in fs)
                             for f in pool if fs.issubset(f))


def star(K: SimplicialComplex, F: Iterable[int]) -> SimplicialComplex:
    """Closed star: all facets containing F, with their faces."""
    face = _require_face(K, F)
    fs = set(face)
    pool = K.facets_containing(face[0]) if face else K.facets
    return SimplicialComplex._trusted(frozenset(f for f in pool if fs.issubset(f)))


def induced(K: SimplicialComplex, W: Iterable[int]) -> SimplicialComplex:
    w = set(int(v) for v in W)
    unknown = w - K.vertex_set
    if unknown:
        raise ComplexError(f"unknown vertices {sorted(unknown)}")
    if w == K.vertex_set:
        return K
    return SimplicialComplex._trusted(_maximal(tuple(v for v in f if v in w) for f in K.facets))


def is_subcomplex(S: SimplicialComplex, K: SimplicialComplex) -> bool:
    return all(f in K for f in S.facets)


def simplicial_neighborhood(K: SimplicialComplex, S: SimplicialComplex) -> SimplicialComplex:
    """Subcomplex of K generated by the facets of K that meet V(S)."""
    if not is_subcomplex(S, K):
        raise ComplexError("S is not a subcomplex of K")
    vs = S.vertex_set
    return SimplicialComplex._trusted(frozenset(f for f in K.facets if vs.intersection(f)))


def graph_ball(K: SimplicialComplex, v: int, r: int) -> frozenset[int]:
    """Vertices at graph distance <= r from v in the 1-skeleton (N_r(v))."""
    if v not in K.vertex_set:
        raise ComplexError(f"unknown vertex {v}")
    adj = K.adjacency()
    seen = {v}
    frontier = deque([(v, 0)])
    while frontier:
        u, dist = frontier.popleft()
        if dist == r:
            continue
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                frontier.append((w, dist + 1))
    return frozenset(seen)


def stellar_subdivide(K: SimplicialComplex, F: Iterable[int], new_vertex: int) -> SimplicialComplex:
    face = _require_face(K, F)
    if len(face) < 2:
        raise ComplexError("stellar subdivision needs a face of dimension >= 1")
    if new_vertex in K.vertex_set or new_vertex < 0:
        raise ComplexError(f"vertex {new_vertex} collides with the complex")
    fs = set(face)
    out = []
    for f in K.facets:
        if fs.issubset(f):
            rest = tuple(v for v in f if v not in fs)
            for x in face:
                out.append(tuple(sorted((new_vertex,) + tuple(y for y in face if y != x) + rest)))
        else:
            out.append(f)
    return SimplicialComplex._trusted(frozenset(out))


def subdivide_along(K: SimplicialComplex, S: SimplicialComplex,
                    ) -> tuple[SimplicialComplex, SimplicialComplex]:
    """Stellar-subdivide every face of K that meets V(S), in decreasing dimension.

    Returns ``(K', S')`` where S' is the induced subdivision of S.  New
    vertex ids are allocated consecutively after ``max(V(K))``.
    """
    if not is_subcomplex(S, K):
        raise ComplexError("S is not a subcomplex of K")
    vs = S.vertex_set
    targets = [f for i in range(K.dim, 0, -1) for f in sorted(K.faces(i)) if vs.intersection(f)]
    nxt = max(K.vertex_set, default=-1) + 1
    Kp, Sp = K, S
    for f in targets:
        if f in Sp:
            Sp = stellar_subdivide(Sp, f, nxt)
        Kp = stellar_subdivide(Kp, f, nxt)
        nxt += 1
    return Kp, Sp


def _mcs_order(adj: Mapping[int, set[int]]) -> list[int]:
    # maximum-cardinality search; bucket by number of numbered neighbours
    weight = {v: 0 for v in adj}
    buckets: dict[int, set[int]] = {0: set(adj)}
    order: list[int] = []
    top = 0
    done = set()
    while len(order) < len(adj):
        while top > 0 and not buckets.get(top):
            top -= 1
        v = min(buckets[top])
        buckets[top].discard(v)
        done.add(v)
        order.append(v)
        for w in adj[v]:
            if w not in done:
                buckets[weight[w]].discard(w)
                weight[w] += 1
                buckets.setdefault(weight[w], set()).add(w)
                top = max(top, weight[w])
    return order


def is_chordal(adj: Mapping[int, Iterable[int]]) -> bool:
    """Chordality via maximum-cardinality search and PEO verification."""
    graph = {v: set(ws) for v, ws in adj.items()}
    order = _mcs_order(graph)
    # reversed MCS order is a perfect elimination ordering iff chordal
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        earlier = [w for w in graph[v] if pos[w] < pos[v]]
        if not earlier:
            continue
        parent = max(earlier, key=pos.__getitem__)
        if any(w != parent and w not in graph[parent] for w in earlier):
            return False
    return True


def chordless_cycle(adj: Mapping[int, Iterable[int]]) -> list[int] | None:
    """Return an induced cycle of length >= 4, or None if the graph is chordal."""
    graph = {v: set(ws) for v, ws in adj.items()}
    for v in sorted(graph):
        nbrs = sorted(graph[v])
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if b in graph[a]:
                    continue
                # shortest a-b path avoiding v and v's other neighbours
                blocked = (graph[v] | {v}) - {a, b}
                prev = {a: None}
                queue = deque([a])
                while queue and b not in prev:
                    u = queue.popleft()
                    for w in sorted(graph[u]):
                        if w not in prev and w not in blocked:
                            prev[w] = u
                            queue.append(w)
                if b in prev:
                    path = [b]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return [v] + path[::-1]
    return None


def is_2sphere(K: SimplicialComplex) -> bool:
    if K.dim != 2 or not K.is_pure():
        return False
    count: dict[Face, int] = {}
    for f in K.facets:
        for e in combinations(f, 2):
            count[e] = count.get(e, 0) + 1
    if any(c != 2 for c in count.values()):
        return False
    if K.euler_characteristic() != 2:
        return False
    adj = K.graph()
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(adj)


def is_stacked_2sphere(K: SimplicialComplex) -> bool:
    if not is_2sphere(K):
        raise ComplexError("complex is not a simplicial 2-sphere")
    return is_chordal(K.graph())


def write_complex(K: SimplicialComplex) -> str:
    facets = sorted(K.facets, key=lambda f: (len(f), f))
    lines = [f"{K.dim} {len(facets)}"]
    lines += [" ".join(map(str, f)) for f in facets]
    return "\n".join(lines) + "\n"


def read_complex(text: str) -> SimplicialComplex:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ComplexError("empty complex file")
    dim, n = int(rows[0][0]), int(rows[0][1])
    facets = [tuple(int(x) for x in r) for r in rows[1:1 + n]]
    if len(facets) != n:
        raise ComplexError(f"expected {n} facets, found {len(facets)}")
    K = SimplicialComplex(facets)
    if n and K.dim != dim:
        raise ComplexError(f"header dimension {dim} does not match facets ({K.dim})")
    return K
