from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polybound.complex import SimplicialComplex, induced
from polybound.generators import cross_polytope, sphere_uniform
from polybound.homology import BettiProfile, betti, boundary_matrix, float_betti, reduced_betti
from polybound.linalg import (certified_rank, float_rank, left_kernel, rank_mod_p,
                              rank_over_rationals, right_kernel)

from conftest import dense_rank_fraction

int_matrices = st.integers(1, 7).flatmap(
    lambda r: st.integers(1, 7).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def cycle(n: int, offset: int = 0) -> SimplicialComplex:
    return SimplicialComplex((offset + i, offset + (i + 1) % n) for i in range(n))


def test_rank_examples():
    assert rank_over_rationals(np.zeros((3, 4), dtype=int)) == 0
    assert rank_over_rationals(np.eye(5, dtype=int)) == 5
    assert rank_over_rationals(boundary_matrix(cycle(4), 1).columns) == 3


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_exact_ranks_agree_with_fraction_oracle(M):
    expected = dense_rank_fraction(M)
    A = np.array(M, dtype=np.int64)
    assert rank_over_rationals(A) == expected
    assert certified_rank(A) == expected


def test_certified_rank_large_entries():
    rng = np.random.default_rng(1)
    B = rng.integers(-2 ** 20, 2 ** 20, size=(12, 5))
    C = rng.integers(-2 ** 20, 2 ** 20, size=(5, 15))
    M = B @ C  # rank 5, entries about 2^42
    assert certified_rank(M) == 5
    assert rank_over_rationals(M) == 5


def test_rank_mod_p_can_drop():
    M = np.array([[2, 0], [0, 3]])
    assert rank_mod_p(M, 2) == 1
    assert rank_mod_p(M, 5) == 2


def test_float_kernels():
    M = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])
    assert float_rank(M) == 1
    K = right_kernel(M)
    assert K.shape == (2, 3)
    assert np.allclose(M @ K.T, 0)
    L = left_kernel(M)
    assert L.shape == (1, 2) and np.allclose(L @ M, 0)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_simplex_boundary_is_sphere(d):
    K = SimplicialComplex(itertools.combinations(range(d + 2), d + 1))
    b = betti(K)
    assert b[d] == 1
    assert sum(b.values) == 1


def test_cycles_and_disjoint_union():
    b = betti(cycle(4))
    assert (b[0], b[1]) == (0, 1)
    two = SimplicialComplex(list(cycle(4).facets) + list(cycle(4, 10).facets))
    b2 = betti(two)
    assert (b2[0], b2[1]) == (1, 2)


def test_void_complex():
    assert betti(SimplicialComplex()).values == (1,)
    assert betti(SimplicialComplex([(0,)])).values == (0, 0)


def test_profile_indexing():
    p = BettiProfile((0, 1, 0))
    assert p[0] == 1 and p[5] == 0 and p.as_dict() == {-1: 0, 0: 1, 1: 0}


@pytest.mark.parametrize("P", [cross_polytope(3), cross_polytope(4), sphere_uniform(25, 5, 0)],
                         ids=["cross3", "cross4", "sphere25_5"])
def test_polytope_boundaries_are_spheres(P):
    b = betti(P.boundary_complex)
    d = P.d
    assert b[d - 1] == 1
    assert all(b[i] == 0 for i in range(-1, d - 1))
    assert float_betti(P.boundary_complex) == b


def test_boundary_of_boundary_vanishes():
    K = sphere_uniform(20, 4, 3).boundary_complex
    for k in range(1, 4):
        A = boundary_matrix(K, k).to_dense()
        B = boundary_matrix(K, k + 1).to_dense()
        assert not np.any(A @ B)


facet_lists = st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(facet_lists, facet_lists)
def test_additivity_over_components(a, b):
    A = SimplicialComplex(a)
    B = SimplicialComplex([[v + 10 for v in f] for f in b])
    U = SimplicialComplex(list(A.facets) + list(B.facets))
    ba, bb, bu = betti(A), betti(B), betti(U)
    for k in range(1, 4):
        assert bu[k] == ba[k] + bb[k]
    assert bu[0] == ba[0] + bb[0] + 1


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 19)))
def test_reduced_betti_matches_profile(W):
    K = sphere_uniform(20, 3, 0).boundary_complex
    S = induced(K, W)
    prof = betti(S)
    for k in range(-1, 3):
        assert reduced_betti(S, k) == prof[k]
