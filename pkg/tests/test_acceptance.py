"""One test per acceptance criterion, each with its runtime budget."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy.stats import norm, qmc

from polybound.enumeration import (g_from_f, h_from_f, is_m_sequence, pseudopower, shadow)
from polybound.generators import (GeneratorSpec, cross_polytope, cyclic_polytope, net_polytope,
                                  random_ball_polytope, simplex, sphere_uniform)
from polybound.geometry import affine_image, hausdorff_to_ball, longest_edge
from polybound.harness.experiments import (default_qlbt_suite, default_stress_suite,
                                           random_body_trends, stress_crosscheck, verify_qlbt)
from polybound.stress import Framework, stress_dim

from conftest import (brute_force_facets, f_vector_from_facets, h_by_polynomial,
                      oracle_pseudopower, oracle_shadow)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def oracle_vectors(points, exact=False):
    facets = brute_force_facets(points, exact=exact)
    d = len(points[0])
    f = f_vector_from_facets(facets, d)
    h = h_by_polynomial(f)
    g = (1,) + tuple(h[i] - h[i - 1] for i in range(1, d // 2 + 1))
    return f, h, g


def test_criterion_1_exact_combinatorics():
    with Budget(1.0):
        P = cross_polytope(4)
        f, h, g = oracle_vectors(P.points.tolist())
        assert f == (1, 8, 24, 32, 16) and h == (1, 4, 6, 4, 1) and g == (1, 3, 2)
        assert (P.f_vector.entries, P.h_vector.entries, P.g_vector.entries) == (f, h, g)

        # exact oracle on the integer moment curve
        f, h, g = oracle_vectors([[t ** i for i in range(1, 5)] for t in range(8)], exact=True)
        assert h == (1, 4, 10, 4, 1) and g[2] == 6
        C = cyclic_polytope(8, 4)
        assert C.h_vector.entries == h and C.g(2) == 6

        # boundary of the 4-simplex, five vertices
        S = simplex(4)
        f, h, g = oracle_vectors(S.points.tolist())
        assert h == (1, 1, 1, 1, 1) == S.h_vector.entries
        assert h_from_f(f).entries == h and g_from_f(f).entries == g


def test_criterion_2_stress_equals_g():
    with Budget(300):
        rep = stress_crosscheck(default_stress_suite())
    assert not rep.skipped
    assert rep.summary["mismatches"] == 0, rep.violations
    for t in rep.trials:
        assert all(r["float"] == r["exact"] == r["g_k"] for r in t["dims"]), t
        assert {r["k"] for r in t["dims"]} == set(range(1, t["d"] // 2 + 1))
    assert rep.verdict == "pass"


def test_criterion_3_graph_stress_equals_g2():
    with Budget(60):
        for spec in default_stress_suite():
            P = spec.build()
            h = P.h_vector.entries
            g2 = h[2] - h[1]
            F = Framework.from_complex(P.boundary_complex, P.points)
            dim = stress_dim(F, "float")
            assert dim == g2, spec.label()
            if spec.kind == "stacked":
                assert dim == 0


def test_criterion_4_qlbt_property_suite():
    suite = default_qlbt_suite()
    with Budget(15 * 60):
        rep = verify_qlbt(suite, trials=200, seed=0)
    assert rep.summary["triples"] >= 2000
    assert {s.d for s in suite} == {3, 4, 5}
    per_d = {d: sum(1 for t in rep.trials if not t.get("skipped")
                    and t["instance"] in {s.label() for s in suite if s.d == d}) for d in (3, 4, 5)}
    assert min(per_d.values()) >= 400, per_d
    assert rep.summary["violations"] == 0
    for t in rep.trials:
        assert isinstance(t["betti"], int) and isinstance(t["g_k"], int)
        assert t["betti"] <= t["g_k"]
    assert rep.verdict == "pass"


def test_criterion_5_witness_strips(witness_reports):
    assert sum(r.wall_clock for r in witness_reports.values()) < 20 * 60
    for (d, k), rep in zip([(3, 1), (4, 2)], [witness_reports[3], witness_reports[4]]):
        assert rep.config["d"] == d and rep.config["k"] == k
        assert not rep.skipped, rep.skipped
        for t in rep.trials:
            assert t["disjoint"]
            assert all(b >= 1 for b in t["betti"])
            assert len(t["strip_sizes"]) <= t["g_k"]
        assert rep.verdict == "pass"


@pytest.mark.parametrize("d", [3, 4])
def test_criterion_6_scaling_law(scaling_reports, d):
    rep, series = scaling_reports[d]
    assert rep.wall_clock < 30 * 60
    target = -(d - 1) / 2
    slope = series.fit().slope
    assert target - 0.5 <= slope <= target + 0.3
    norm_g = series.normalized("g_k")
    assert min(norm_g) > 0
    assert max(norm_g) / min(norm_g) <= 10
    assert rep.verdict == "pass"


def sobol_sphere(n_log2, d, seed):
    u = qmc.Sobol(d, scramble=True, seed=seed).random_base2(n_log2)
    x = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def sampled_distance(points, dirs, chunk=1 << 16):
    """max over sampled u of |h_P(u) - 1|, the support-function form against the unit ball."""
    best = 0.0
    for i in range(0, len(dirs), chunk):
        h = (dirs[i:i + chunk] @ points.T).max(axis=1)
        best = max(best, float(np.abs(h - 1.0).max()))
    return best


def best_candidate(P):
    """Direction and value maximizing |h_P(u) - 1| among facet normals and vertex directions."""
    cands = np.vstack([P.normals, P.points / np.linalg.norm(P.points, axis=1, keepdims=True)])
    vals = np.abs((cands @ P.points.T).max(axis=1) - 1.0)
    i = int(vals.argmax())
    return cands[i], float(vals[i])


def hausdorff_instances():
    out = [simplex(3)]
    out += [sphere_uniform(n, 3, s) for n, s in [(8, 0), (20, 1), (50, 2), (150, 3), (400, 4)]]
    out += [net_polytope(s, 3, 0) for s in (0.2, 0.15)]
    out += [random_ball_polytope(n, 3, s) for n, s in [(30, 0), (100, 1), (300, 2)]]
    out += [affine_image(sphere_uniform(40, 3, s), c * np.eye(3)) for s, c in
            [(5, 1.05), (6, 1.3), (7, 0.9), (8, 2.0)]]
    rng = np.random.default_rng(0)
    while len(out) < 40:
        P = sphere_uniform(int(rng.integers(6, 120)), 3, int(rng.integers(10 ** 6)))
        T = np.eye(3) + 0.2 * rng.standard_normal((3, 3))
        out.append(affine_image(P, T) if len(out) % 2 else P)
    out += [cross_polytope(4), simplex(4)]
    out += [sphere_uniform(n, 4, s) for n, s in [(10, 0), (30, 1), (80, 2), (200, 3)]]
    out += [random_ball_polytope(n, 4, s) for n, s in [(60, 0), (200, 1)]]
    out += [affine_image(sphere_uniform(50, 4, 9), 1.2 * np.eye(4)), net_polytope(0.2, 4, 0)]
    return out


def test_criterion_7_hausdorff_oracle():
    with Budget(120):
        inst = hausdorff_instances()
        assert len(inst) == 50
        dirs = {d: sobol_sphere(20, d, seed=d) for d in (3, 4)}
        assert len(dirs[3]) >= 10 ** 6
        for P in inst:
            closed = hausdorff_to_ball(P)
            est = sampled_distance(P.points, dirs[P.d])
            u, val = best_candidate(P)
            # h_P is R-Lipschitz, so the sample nearest u* lags the supremum by at most R*|u - b|
            R = float(np.linalg.norm(P.points, axis=1).max())
            gap = math.sqrt(max(0.0, 2 - 2 * float((dirs[P.d] @ u).max())))
            bound = R * gap
            assert est <= closed + 1e-6
            assert closed <= est + 1e-6 + bound
            assert val == pytest.approx(closed, abs=1e-6)
        T = simplex(3)
        assert hausdorff_to_ball(T) == pytest.approx(2 / 3, abs=1e-12)


def test_criterion_8_edge_length_bound(scaling_reports, witness_reports):
    rows = []
    for rep, _ in scaling_reports.values():
        rows += [(r["longest_edge"], r["delta_h"]) for r in rep.trials]
    for rep in witness_reports.values():
        rows += [(r["longest_edge"], r["delta_h"]) for r in rep.trials if not r.get("skipped")]
    polys = [simplex(d) for d in range(2, 7)] + [cross_polytope(d) for d in (3, 4, 5)]
    polys += [sphere_uniform(n, d, s) for d in (3, 4, 5) for n in (10, 50, 200) for s in (0, 1)]
    rows += [(longest_edge(P), hausdorff_to_ball(P)) for P in polys]
    assert len(rows) > 40
    bad = [(e, dl) for e, dl in rows if e > 4 * math.sqrt(dl)]
    assert bad == []


def test_criterion_9_macaulay():
    with Budget(60):
        for k in range(1, 5):
            shadows = [oracle_shadow(k + 1, m) for m in range(61)]
            powers = [oracle_pseudopower(n, k) for n in range(61)]
            for n in range(61):
                assert pseudopower(n, k) == powers[n]
                for m in range(61):
                    assert shadow(k + 1, m) == shadows[m]
                    assert (shadows[m] <= n) == (m <= powers[n]), (k, n, m)
        specs = default_stress_suite() + default_qlbt_suite()
        specs += [GeneratorSpec("sphere_net", d, 0, {"eps": e}) for d in (3, 4) for e in (0.2, 0.15)]
        for spec in specs:
            P = spec.build()
            assert is_m_sequence(P.g_vector), spec.label()


def test_criterion_10_random_trends():
    with Budget(20 * 60):
        rep = random_body_trends(3, ns=[2 ** i for i in range(7, 14)], trials=20, seed=0,
                                 f0_band=(0.35, 0.65), delta_band=(-0.7, -0.3))
    assert 0.35 <= rep.summary["f0_exponent"] <= 0.65
    assert -0.7 <= rep.summary["delta_exponent"] <= -0.3
    assert "kalai_ii_increasing_fraction" in rep.summary
    assert len(rep.trials) == 7 * 20 and not rep.skipped
    assert rep.verdict == "pass"
