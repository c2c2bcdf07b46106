from __future__ import annotations

import numpy as np
import pytest
from scipy.spatial.distance import pdist

from polybound.enumeration import check_dehn_sommerville, is_m_sequence
from polybound.generators import (GeneratorSpec, ball_points, cross_polytope, cyclic_polytope,
                                  ellipsoid_image, gale_facets, net_polytope, simplex, sphere_net,
                                  sphere_uniform, stacked_polytope)
from polybound.geometry import GeometryError, convex_hull, hausdorff_to_ball
from polybound.homology import betti

from conftest import brute_force_facets


def test_sphere_net_example():
    A = sphere_net(0.1, 3, seed=0)
    assert len(A) >= 200
    assert pdist(A).min() >= 0.1
    assert np.allclose(np.linalg.norm(A, axis=1), 1.0)


@pytest.mark.parametrize("d,eps", [(3, 0.2), (3, 0.1), (4, 0.2)])
def test_sphere_net_rate(d, eps):
    ratio = len(sphere_net(eps / 2, d)) / len(sphere_net(eps, d))
    target = 2 ** (d - 1)
    assert 0.5 * target <= ratio <= 2 * target


def test_sphere_net_range():
    with pytest.raises(GeometryError):
        sphere_net(0.3, 3)
    with pytest.raises(GeometryError):
        sphere_net(0.0, 3)


def test_sphere_net_covers_sphere():
    # every direction is within a couple of spacings of the net
    A = sphere_net(0.1, 3, seed=1)
    probe = np.random.default_rng(0).standard_normal((20000, 3))
    probe /= np.linalg.norm(probe, axis=1, keepdims=True)
    gaps = np.sqrt(((probe[:, None, :] - A[None, :, :]) ** 2).sum(-1)).min(axis=1)
    assert gaps.max() < 0.1


def test_stacked_polytope_counts():
    assert stacked_polytope(3, 0).facets == simplex(3).facets
    for d, steps in ((3, 7), (4, 10), (5, 6)):
        P = stacked_polytope(d, steps, seed=steps)
        assert P.n_vertices == d + 1 + steps
        assert len(P.facets) == (d + 1) + steps * (d - 1)
        assert set(convex_hull(P.points).facets) == set(P.facets)
    assert stacked_polytope(4, 10, seed=0).g(2) == 0


@pytest.mark.parametrize("n", [7, 8, 9])
def test_cyclic_polytope_matches_exact_oracle(n):
    P = cyclic_polytope(n, 4)
    ints = [[t ** i for i in range(1, 5)] for t in range(n)]
    assert set(P.facets) == brute_force_facets(ints, exact=True) == gale_facets(n, 4)
    assert len(P.boundary_complex.faces(1)) == n * (n - 1) // 2


def test_cyclic_c84():
    P = cyclic_polytope(8, 4)
    assert P.h_vector.entries == (1, 4, 10, 4, 1)
    assert P.g_vector.entries == (1, 3, 6)
    with pytest.raises(GeometryError):
        cyclic_polytope(4, 4)


def test_sphere_uniform_properties():
    P = sphere_uniform(100, 3, 4)
    assert np.allclose(np.linalg.norm(P.points, axis=1), 1.0, atol=1e-12)
    assert P.n_vertices == 100
    assert all(len(f) == 3 for f in P.facets)


def test_ball_points_inside():
    x = ball_points(5000, 4, 1)
    assert np.linalg.norm(x, axis=1).max() <= 1.0


def test_determinism():
    a, b = sphere_uniform(60, 4, 11), sphere_uniform(60, 4, 11)
    assert np.array_equal(a.points, b.points) and a.facets == b.facets
    assert np.array_equal(sphere_net(0.15, 3, 2), sphere_net(0.15, 3, 2))
    assert np.array_equal(stacked_polytope(4, 6, 3).points, stacked_polytope(4, 6, 3).points)


def test_ellipsoid_image_keeps_combinatorics():
    P = sphere_uniform(40, 3, 0)
    Q = ellipsoid_image(P, np.diag([2.0, 1.0, 0.5]))
    assert Q.facets == P.facets
    assert set(convex_hull(Q.points).facets) == set(P.facets)


@pytest.mark.parametrize("spec", [
    GeneratorSpec("simplex", 5),
    GeneratorSpec("cross", 4, 1),
    GeneratorSpec("cyclic", 5, 0, {"n": 9}),
    GeneratorSpec("stacked", 4, 2, {"steps": 9}),
    GeneratorSpec("sphere_uniform", 5, 3, {"n": 40}),
    GeneratorSpec("ball_uniform", 3, 3, {"n": 300}),
    GeneratorSpec("sphere_net", 3, 0, {"eps": 0.2}),
    GeneratorSpec("ellipsoid_image", 3, 0, {"inner": {"kind": "sphere_uniform", "d": 3, "seed": 1,
                                                      "params": {"n": 30}},
                                            "matrix": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}),
], ids=lambda s: s.kind)
def test_generated_polytopes_are_valid(spec):
    P = spec.build()
    assert check_dehn_sommerville(P.h_vector)
    assert is_m_sequence(P.g_vector)
    assert P.h_vector.entries[1] == P.n_vertices - P.d
    b = betti(P.boundary_complex)
    assert b[P.d - 1] == 1 and sum(b.values) == 1
    assert GeneratorSpec.from_dict(spec.to_dict()) == spec or spec.kind == "ellipsoid_image"


def test_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec("cyclic", 4, 0, {"n": 3})
    with pytest.raises(ValueError):
        GeneratorSpec("sphere_net", 3, 0, {"eps": 0.5})
    with pytest.raises(ValueError):
        GeneratorSpec("nonsense", 3)


def test_net_hull_distance_shrinks_quadratically():
    spacings = (0.2, 0.14, 0.1, 0.07)
    deltas = [hausdorff_to_ball(net_polytope(s, 3)) for s in spacings]
    assert all(a > b for a, b in zip(deltas, deltas[1:]))
    ratios = [dl / s ** 2 for dl, s in zip(deltas, spacings)]
    assert max(ratios) / min(ratios) < 2
