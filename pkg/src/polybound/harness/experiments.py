"""Experiment drivers.

Each driver takes plain parameters (so it can be fed from a JSON config),
runs independent trials, possibly in worker processes, and aggregates them
in trial order.  Integer-valued comparisons (Betti numbers, g_k, stress
dimensions) are exact.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Any, Callable, Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from ..complex import graph_ball, induced, is_stacked_2sphere, link
from ..enumeration import check_dehn_sommerville, is_m_sequence, kalai_ii_statistic
from ..generators import GeneratorSpec, as_polytope, ball_points, greedy_separated, net_polytope
from ..geometry import (GeometryError, Polytope, convex_hull, hausdorff_to_ball, longest_edge,
                        orthogonal_complement, random_subspace, shadow_boundary_subcomplex,
                        strip_vertex_sets)
from ..homology import reduced_betti
from ..linalg import float_rank
from ..stress import (Framework, StressError, affine_stress_dim, embed_edge_weights,
                      local_stress_near_vertex, stress_dim, stress_residual)
from .report import THETA_2, ExperimentReport, ScalingSeries, dump_instance, fit_loglog

SAMPLERS = ("uniform", "strip", "shadow")


def ordered_map(fn: Callable, items: Iterable, jobs: int = 1) -> list:
    """map() that may fan out to processes; results always come back in input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _spec_label(spec) -> str:
    if isinstance(spec, GeneratorSpec):
        return spec.label()
    if isinstance(spec, dict):
        return GeneratorSpec.from_dict(spec).label()
    if isinstance(spec, Polytope):
        return f"polytope(d={spec.d},n={spec.n_vertices})"
    return str(spec)


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in key]))


# -- QLBT -----------------------------------------------------------------

def sample_vertex_set(P: Polytope, k: int, sampler: str, rng: np.random.Generator,
                      retries: int = 5) -> frozenset[int]:
    """Draw W: uniform random subset, thickened (d-k)-flat, or shadow-boundary vertices."""
    n, d = P.n_vertices, P.d
    if sampler == "uniform":
        p = rng.uniform(0.15, 0.85)
        return frozenset(np.flatnonzero(rng.random(n) < p).tolist())
    if sampler == "strip":
        center = P.points.mean(axis=0)
        c = center + 0.3 * rng.standard_normal(d) * np.abs(P.points - center).max()
        Q = orthogonal_complement(random_subspace(d, d - k, rng))
        dist = np.linalg.norm((P.points - c) @ Q.T, axis=1)
        r = np.quantile(dist, rng.uniform(0.1, 0.5))
        return frozenset(np.flatnonzero(dist <= r).tolist())
    if sampler == "shadow":
        for _ in range(retries):
            try:
                S = shadow_boundary_subcomplex(P, random_subspace(d, d - k, rng))
            except GeometryError:
                continue
            return frozenset(S.vertex_set)
        raise GeometryError("no generic projection found")
    raise ValueError(f"unknown sampler {sampler!r}")


def _qlbt_instance(job, ks, trials, seed, samplers, out_dir) -> list[dict[str, Any]]:
    index, spec = job
    label = _spec_label(spec)
    try:
        P = as_polytope(spec)
    except GeometryError as exc:
        return [{"instance": label, "trial": t, "seed": [seed, index, t], "skipped": True,
                 "error": str(exc)} for t in range(trials)]
    K = P.boundary_complex
    d = P.d
    allowed = [k for k in (ks or range(1, d // 2 + 1)) if 1 <= k <= d // 2]
    g = P.g_vector.entries
    records = []
    for t in range(trials):
        rng = _rng(seed, index, t)
        k = int(allowed[t % len(allowed)])
        sampler = samplers[(t // len(allowed)) % len(samplers)]
        rec: dict[str, Any] = {"instance": label, "trial": t, "seed": [seed, index, t],
                               "sampler": sampler, "k": k}
        try:
            W = sample_vertex_set(P, k, sampler, rng)
        except GeometryError as exc:
            rec.update(skipped=True, error=str(exc))
            records.append(rec)
            continue
        b = reduced_betti(induced(K, W), d - k - 1)
        rec.update(W_size=len(W), betti=b, g_k=g[k], ok=b <= g[k])
        if not rec["ok"] and out_dir:
            dump_instance(out_dir, f"qlbt_violation_{index}_{t}", P, {**rec, "W": sorted(W)})
        records.append(rec)
    return records


def verify_qlbt(specs: Sequence, ks: Sequence[int] | None = None, trials: int = 100, seed: int = 0,
                samplers: Sequence[str] = SAMPLERS, out_dir: str | None = None,
                jobs: int = 1) -> ExperimentReport:
    """Check beta~_{d-k-1}(Delta_W) <= g_k(Delta) over sampled vertex sets W."""
    t0 = time.perf_counter()
    fn = partial(_qlbt_instance, ks=ks, trials=trials, seed=seed, samplers=tuple(samplers),
                 out_dir=out_dir)
    per = ordered_map(fn, list(enumerate(specs)), jobs)
    rep = ExperimentReport("verify_qlbt", {"specs": [_spec_label(s) for s in specs], "ks": ks,
                                           "trials": trials, "seed": seed,
                                           "samplers": list(samplers)})
    rep.trials = [r for recs in per for r in recs]
    done = [r for r in rep.trials if not r.get("skipped")]
    rep.summary = {"triples": len(done), "violations": len(rep.violations),
                   "skipped": len(rep.skipped),
                   "max_betti": max((r["betti"] for r in done), default=0),
                   "nonzero_betti": sum(1 for r in done if r["betti"] > 0)}
    rep.wall_clock = time.perf_counter() - t0
    rep.decide()
    return rep


def default_qlbt_suite() -> list[GeneratorSpec]:
    return [
        GeneratorSpec("sphere_uniform", 3, 0, {"n": 60}),
        GeneratorSpec("cross", 3, 0),
        GeneratorSpec("stacked", 3, 1, {"steps": 20}),
        GeneratorSpec("cyclic", 3, 0, {"n": 10}),
        GeneratorSpec("sphere_uniform", 4, 0, {"n": 150}),
        GeneratorSpec("cross", 4, 0),
        GeneratorSpec("cyclic", 4, 0, {"n": 9}),
        GeneratorSpec("stacked", 4, 2, {"steps": 15}),
        GeneratorSpec("sphere_uniform", 5, 0, {"n": 60}),
        GeneratorSpec("cyclic", 5, 0, {"n": 10}),
        GeneratorSpec("stacked", 5, 3, {"steps": 10}),
        GeneratorSpec("ball_uniform", 5, 0, {"n": 200}),
    ]


# -- witness strips -------------------------------------------------------

# empirical delta_h / spacing^2 of net hulls is about 0.55-0.7 for d = 3, 4
_NET_DELTA_RATIO = 0.75


def inscribed_net_hull(eps: float, d: int, seed: int = 0, spacing: float | None = None,
                       shrink: float = 0.93) -> tuple[Polytope, float, float]:
    """Net hull with delta_h < eps; returns (P, spacing, delta_h)."""
    s = spacing if spacing is not None else min(0.2, math.sqrt(eps / _NET_DELTA_RATIO))
    for _ in range(60):
        P = net_polytope(s, d, seed)
        delta = hausdorff_to_ball(P)
        if delta < eps or spacing is not None:
            return P, s, delta
        s *= shrink
    raise GeometryError(f"no net hull with delta_h < {eps}")


def _min_gap(points: np.ndarray, groups: Sequence[frozenset[int]]) -> float:
    gap = math.inf
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            if not groups[i] or not groups[j]:
                continue
            a = points[sorted(groups[i])]
            b = points[sorted(groups[j])]
            dist, _ = cKDTree(b).query(a)
            gap = min(gap, float(dist.min()))
    return gap


def strip_witnesses(P: Polytope, eps: float, k: int, seed: int = 0, separation: float = 35.0,
                    cap_factor: float = 11.0) -> dict[str, Any]:
    """Run the strip construction on an inscribed hull and collect the asserted quantities."""
    d = P.d
    K = P.boundary_complex
    order = _rng(seed, 1).permutation(P.n_vertices)
    cand = P.points[order] / np.linalg.norm(P.points[order], axis=1, keepdims=True)
    A = cand[greedy_separated(cand, separation * math.sqrt(eps) * (1 + 1e-9))]
    strips = strip_vertex_sets(P, A, eps, k, cap_factor=cap_factor, seed=seed)
    sets = [s.vertices for s in strips]
    bettis = [reduced_betti(induced(K, W), d - k - 1) for W in sets]
    union = frozenset().union(*sets)
    disjoint = sum(len(W) for W in sets) == len(union)
    gap = _min_gap(P.points, sets)
    g_k = P.g(k)
    union_betti = reduced_betti(induced(K, union), d - k - 1)
    witnesses = sum(1 for b in bettis if b >= 1)
    return {"centers": len(A), "strip_sizes": [len(W) for W in sets], "betti": bettis,
            "witnesses": witnesses, "union_betti": union_betti, "g_k": g_k,
            "disjoint": disjoint, "min_gap": gap, "gap_bound": 5 * math.sqrt(eps)}


def _witness_trial(job, d, k, seed, spacings, out_dir) -> dict[str, Any]:
    i, eps = job
    rec: dict[str, Any] = {"eps": eps, "seed": seed}
    try:
        P, s, delta = inscribed_net_hull(eps, d, seed, spacings.get(str(eps)) if spacings else None)
        if delta >= eps:
            raise GeometryError(f"delta_h {delta:.3g} >= eps {eps}")
        edge = longest_edge(P)
        rec.update(spacing=s, delta_h=delta, f0=P.n_vertices, longest_edge=edge,
                   edge_bound=4 * math.sqrt(eps))
        rec.update(strip_witnesses(P, eps, k, seed))
    except GeometryError as exc:
        rec.update(skipped=True, error=str(exc))
        return rec
    rec["ok"] = bool(rec["disjoint"] and rec["min_gap"] >= rec["gap_bound"]
                     and all(b >= 1 for b in rec["betti"])
                     and rec["witnesses"] <= rec["g_k"] and rec["union_betti"] <= rec["g_k"]
                     and rec["union_betti"] >= rec["witnesses"]
                     and edge <= rec["edge_bound"])
    if not rec["ok"] and out_dir:
        dump_instance(out_dir, f"witness_violation_d{d}_{i}", P, rec)
    return rec


def max_feasible_eps(cap_factor: float = 11.0) -> float:
    """Caps need chord cap_factor*sqrt(eps) < sqrt(2)."""
    return 2.0 / cap_factor ** 2


def witness_strips(d: int = 4, k: int = 2, eps_schedule: Sequence[float] = (0.01, 0.005, 0.003),
                   seed: int = 0, spacings: dict[str, float] | None = None,
                   out_dir: str | None = None, jobs: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    bad = [e for e in eps_schedule if not 0 < e < max_feasible_eps()]
    if bad:
        raise GeometryError(f"infeasible eps values {bad}; need eps < {max_feasible_eps():.4g}")
    fn = partial(_witness_trial, d=d, k=k, seed=seed, spacings=spacings, out_dir=out_dir)
    rep = ExperimentReport("witness_strips", {"d": d, "k": k, "eps_schedule": list(eps_schedule),
                                              "seed": seed, "spacings": spacings})
    rep.trials = ordered_map(fn, list(enumerate(eps_schedule)), jobs)
    done = [r for r in rep.trials if not r.get("skipped")]
    rep.summary = {"per_eps": [{"eps": r["eps"], "centers": r["centers"],
                                "witnesses": r["witnesses"], "g_k": r["g_k"],
                                "slack": r["g_k"] - r["witnesses"]} for r in done]}
    rep.wall_clock = time.perf_counter() - t0
    rep.decide()
    return rep


# -- scaling --------------------------------------------------------------

def _scaling_row(spacing, d, k, seed, witnesses) -> dict[str, Any]:
    P = net_polytope(spacing, d, seed)
    delta = hausdorff_to_ball(P)
    row = {"spacing": spacing, "delta_h": delta, "f0": P.n_vertices, "g_k": P.g(k),
           "witnesses": None, "longest_edge": longest_edge(P),
           "m_sequence": is_m_sequence(P.g_vector),
           "dehn_sommerville": check_dehn_sommerville(P.h_vector)}
    eps = delta * (1 + 1e-9)
    if witnesses and eps < max_feasible_eps():
        row["witnesses"] = strip_witnesses(P, eps, k, seed)["witnesses"]
    return row


def scaling_fit(d: int, k: int, spacings: Sequence[float], seed: int = 0, witnesses: bool = False,
                jobs: int = 1) -> ScalingSeries:
    """Net hulls over a spacing schedule; rows feed a log-log fit of g_k against delta_h."""
    if len(spacings) < 5:
        raise ValueError("scaling_fit needs at least 5 spacings")
    fn = partial(_scaling_row, d=d, k=k, seed=seed, witnesses=witnesses)
    return ScalingSeries(d, k, ordered_map(fn, list(spacings), jobs))


DEFAULT_SPACINGS = {3: (0.2, 0.15, 0.11, 0.08, 0.063, 0.05),
                    4: (0.2, 0.16, 0.13, 0.1, 0.08, 0.065, 0.056)}


def scaling_report(d: int, k: int, spacings: Sequence[float] | None = None, seed: int = 0,
                   band: Sequence[float] | None = None, ratio_limit: float = 10.0,
                   f0_ratio_limit: float = 20.0, witnesses: bool = False,
                   jobs: int = 1) -> tuple[ExperimentReport, ScalingSeries]:
    t0 = time.perf_counter()
    spacings = tuple(spacings or DEFAULT_SPACINGS[d])
    target = -(d - 1) / 2
    lo, hi = band if band is not None else (target - 0.5, target + 0.3)
    series = scaling_fit(d, k, spacings, seed, witnesses, jobs)
    rep = ExperimentReport("scaling", {"d": d, "k": k, "spacings": list(spacings), "seed": seed,
                                       "band": [lo, hi], "ratio_limit": ratio_limit})
    rep.trials = [dict(r, seed=seed) for r in series.rows]
    failures = []
    try:
        fit = series.fit()
    except ValueError as exc:
        failures.append(str(exc))
        fit = None
    norm = series.normalized("g_k")
    f0_norm = series.normalized("f0")
    rep.summary = {"target_slope": target, "theta_2": THETA_2,
                   "normalized_g_min": min(norm), "normalized_g_max": max(norm),
                   "normalized_f0_min": min(f0_norm), "normalized_f0_max": max(f0_norm)}
    if fit is not None:
        rep.summary.update(slope=fit.slope, stderr=fit.stderr, intercept=fit.intercept, r2=fit.r2)
        if not lo <= fit.slope <= hi:
            failures.append(f"slope {fit.slope:.3f} outside [{lo}, {hi}]")
    if min(norm) <= 0 or max(norm) / min(norm) > ratio_limit:
        failures.append("g_k * delta^((d-1)/2) vanishes or varies beyond the ratio limit")
    if d == 3 and max(f0_norm) / min(f0_norm) > f0_ratio_limit:
        failures.append("f0 * delta^((d-1)/2) varies beyond the ratio limit")
    for r in rep.trials:
        r["ok"] = bool(r["longest_edge"] <= 4 * math.sqrt(r["delta_h"]) and r["m_sequence"]
                       and r["dehn_sommerville"])
    rep.wall_clock = time.perf_counter() - t0
    rep.decide(failures)
    return rep, series


# -- stress / g_k ---------------------------------------------------------

def _stress_instance(job, ks, check_exact) -> dict[str, Any]:
    index, spec = job
    rec: dict[str, Any] = {"instance": _spec_label(spec), "trial": index,
                           "seed": spec.get("seed", 0) if isinstance(spec, dict)
                           else getattr(spec, "seed", 0)}
    try:
        P = as_polytope(spec)
    except GeometryError as exc:
        rec.update(skipped=True, error=str(exc))
        return rec
    K, d = P.boundary_complex, P.d
    g = P.g_vector.entries
    rows = []
    ok = True
    for k in (ks or range(1, d // 2 + 1)):
        if not 1 <= k <= d // 2:
            continue
        fl = affine_stress_dim(K, P.points, k, "float")
        ex = affine_stress_dim(K, P.points, k, "exact") if check_exact else fl
        rows.append({"k": k, "g_k": g[k], "float": fl, "exact": ex})
        ok &= fl == ex == g[k]
    F = Framework.from_complex(K, P.points)
    gf = stress_dim(F, "float")
    ge = stress_dim(F, "exact") if check_exact else gf
    g2 = g[2] if len(g) > 2 else None
    rec.update(n=P.n_vertices, d=d, dims=rows, graph_float=gf, graph_exact=ge, g_2=g2,
               ok=bool(ok and gf == ge and (g2 is None or gf == g2)))
    return rec


def stress_crosscheck(specs: Sequence, ks: Sequence[int] | None = None, check_exact: bool = True,
                      jobs: int = 1) -> ExperimentReport:
    """dim of affine k-stresses == g_k and graph stresses == g_2, on both backends."""
    t0 = time.perf_counter()
    for s in specs:
        P = s if isinstance(s, Polytope) else None
        if P is not None and (P.d > 6 or P.n_vertices > 40):
            raise ValueError("stress_crosscheck expects d <= 6 and n <= 40")
    fn = partial(_stress_instance, ks=ks, check_exact=check_exact)
    rep = ExperimentReport("stress_crosscheck", {"specs": [_spec_label(s) for s in specs],
                                                 "ks": ks, "check_exact": check_exact})
    rep.trials = ordered_map(fn, list(enumerate(specs)), jobs)
    rep.summary = {"instances": len(rep.trials), "mismatches": len(rep.violations)}
    rep.wall_clock = time.perf_counter() - t0
    rep.decide()
    return rep


def default_stress_suite() -> list[GeneratorSpec]:
    suite = [GeneratorSpec("simplex", d) for d in range(3, 7)]
    suite += [GeneratorSpec("cross", d) for d in (3, 4)]
    suite += [GeneratorSpec("cyclic", 4, 0, {"n": n}) for n in (7, 8, 9)]
    suite += [GeneratorSpec("stacked", 4, s, {"steps": s}) for s in range(5, 21)]
    suite += [GeneratorSpec("sphere_uniform", d, seed, {"n": n})
              for d in (4, 5) for n in (12, 20, 30) for seed in (0, 1)]
    return suite


# -- random polytopes -----------------------------------------------------

def _random_trial(job, d) -> dict[str, Any]:
    n, t, seed = job
    rec: dict[str, Any] = {"n": n, "trial": t, "seed": [seed, n, t]}
    try:
        P = convex_hull(ball_points(n, d, seed=np.random.SeedSequence([seed, n, t])))
        g = P.g_vector.entries
        rec.update(f0=P.n_vertices, delta_h=hausdorff_to_ball(P), g=list(g))
        rec["kalai_ii"] = [kalai_ii_statistic(g, k) for k in range(1, len(g) - 1)]
    except GeometryError as exc:
        rec.update(skipped=True, error=str(exc))
    return rec


def random_body_trends(d: int = 3, ns: Sequence[int] = tuple(2 ** i for i in range(7, 14)),
                       trials: int = 20, seed: int = 0, f0_band: Sequence[float] | None = None,
                       delta_band: Sequence[float] | None = None, jobs: int = 1) -> ExperimentReport:
    """Exponents of mean f_0 and mean delta_h against n for uniform points in the ball."""
    if d not in (3, 4):
        raise ValueError("random_body_trends supports d in {3, 4}")
    t0 = time.perf_counter()
    f0_target = (d - 1) / (d + 1)
    delta_target = -2 / (d + 1)
    f0_band = tuple(f0_band or (f0_target - 0.15, f0_target + 0.15))
    delta_band = tuple(delta_band or (delta_target - 0.2, delta_target + 0.2))
    jobs_list = [(n, t, seed) for n in ns for t in range(trials)]
    rep = ExperimentReport("random_trends", {"d": d, "ns": list(ns), "trials": trials, "seed": seed,
                                             "f0_band": list(f0_band),
                                             "delta_band": list(delta_band)})
    rep.trials = ordered_map(partial(_random_trial, d=d), jobs_list, jobs)
    means = []
    for n in ns:
        rs = [r for r in rep.trials if r["n"] == n and not r.get("skipped")]
        kal = [r["kalai_ii"] for r in rs if r["kalai_ii"]]
        means.append({"n": n, "f0": float(np.mean([r["f0"] for r in rs])),
                      "delta_h": float(np.mean([r["delta_h"] for r in rs])),
                      "kalai_ii": [float(x) for x in np.mean(kal, axis=0)] if kal else []})
    f0_fit = fit_loglog(ns, [m["f0"] for m in means])
    dl_fit = fit_loglog(ns, [m["delta_h"] for m in means])
    trend = None
    if means[0]["kalai_ii"]:
        first = [m["kalai_ii"][0] for m in means]
        trend = sum(b > a for a, b in zip(first, first[1:])) / (len(first) - 1)
    rep.summary = {"means": means,
                   "f0_exponent": f0_fit.slope, "f0_stderr": f0_fit.stderr, "f0_target": f0_target,
                   "delta_exponent": dl_fit.slope, "delta_stderr": dl_fit.stderr,
                   "delta_target": delta_target, "kalai_ii_increasing_fraction": trend}
    failures = []
    if not f0_band[0] <= f0_fit.slope <= f0_band[1]:
        failures.append(f"f0 exponent {f0_fit.slope:.3f} outside {f0_band}")
    if not delta_band[0] <= dl_fit.slope <= delta_band[1]:
        failures.append(f"delta exponent {dl_fit.slope:.3f} outside {delta_band}")
    rep.wall_clock = time.perf_counter() - t0
    rep.decide(failures)
    return rep


# -- d = 4 local stresses -------------------------------------------------

def separated_vertices(K, candidates: Iterable[int], radius: int = 4) -> list[int]:
    """Greedy choice of candidates at pairwise graph distance > radius."""
    blocked: set[int] = set()
    chosen = []
    for v in candidates:
        if v in blocked:
            continue
        chosen.append(v)
        blocked |= graph_ball(K, v, radius)
    return chosen


def local_stress_bound(P: Polytope) -> dict[str, Any]:
    """Independent local stresses at far-apart vertices with non-stacked links."""
    K = P.boundary_complex
    nonstacked = [v for v in range(P.n_vertices) if not is_stacked_2sphere(link(K, (v,)))]
    chosen = separated_vertices(K, nonstacked, 4)
    edges = tuple(sorted(K.faces(1)))
    vecs, cases, residual, contained = [], {"i": 0, "ii": 0}, 0.0, True
    for v in chosen:
        ls = local_stress_near_vertex(K, P.points, v)
        cases[ls.case] += 1
        residual = max(residual, stress_residual(ls.framework, ls.weights))
        contained &= ls.support <= graph_ball(K, v, 2)
        vecs.append(embed_edge_weights(ls.as_edge_dict(), edges))
    rank = float_rank(np.array(vecs)) if vecs else 0
    return {"f0": P.n_vertices, "nonstacked_links": len(nonstacked), "chosen": len(chosen),
            "rank": rank, "cases": cases, "max_residual": residual, "support_in_N2": contained,
            "g_2": P.g(2)}


def _d4_trial(job, seed, out_dir) -> dict[str, Any]:
    i, spacing = job
    rec: dict[str, Any] = {"spacing": spacing, "seed": seed}
    try:
        P = net_polytope(spacing, 4, seed)
        rec["delta_h"] = hausdorff_to_ball(P)
        rec.update(local_stress_bound(P))
    except (GeometryError, StressError) as exc:
        rec.update(skipped=True, error=str(exc))
        return rec
    rec["lower_bound"] = rec["rank"]
    rec["ok"] = bool(rec["rank"] == rec["chosen"] and rec["lower_bound"] <= rec["g_2"]
                     and rec["max_residual"] <= 1e-8 and rec["support_in_N2"])
    if not rec["ok"] and out_dir:
        dump_instance(out_dir, f"d4_violation_{i}", P, rec)
    return rec


def d4_ball_experiment(spacings: Sequence[float] = (0.2, 0.16, 0.13), seed: int = 0,
                       out_dir: str | None = None, jobs: int = 1) -> ExperimentReport:
    t0 = time.perf_counter()
    rep = ExperimentReport("d4_ball", {"spacings": list(spacings), "seed": seed})
    rep.trials = ordered_map(partial(_d4_trial, seed=seed, out_dir=out_dir),
                             list(enumerate(spacings)), jobs)
    rep.summary = {"bounds": [(r.get("lower_bound"), r.get("g_2")) for r in rep.trials]}
    rep.wall_clock = time.perf_counter() - t0
    rep.decide()
    return rep
