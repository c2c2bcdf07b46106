from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from polybound.generators import GeneratorSpec, cross_polytope
from polybound.geometry import write_polytope
from polybound.complex import write_complex
from polybound.harness import experiments as ex
from polybound.harness.cli import main
from polybound.harness.report import (THETA_2, ExperimentReport, ScalingSeries, fit_loglog,
                                      trials_csv)


def test_theta_constant():
    assert THETA_2 == pytest.approx(1.2092, abs=1e-4)


def test_fit_loglog_recovers_power():
    x = np.logspace(-3, 0, 6)
    fit = fit_loglog(x, 7 * x ** -1.5)
    assert fit.slope == pytest.approx(-1.5)
    assert fit.r2 == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fit_loglog(x[:4], x[:4])
    with pytest.raises(ValueError):
        fit_loglog(np.linspace(1, 5, 6), np.ones(6))


def test_verdict_rules():
    rep = ExperimentReport("x", {})
    rep.trials = [{"ok": True, "seed": 0}] * 10
    assert rep.decide() == "pass"
    rep.trials = [{"ok": True, "seed": 0}] * 9 + [{"skipped": True, "seed": 1}]
    assert rep.decide() == "indeterminate"
    rep.trials = [{"ok": False, "seed": 0}]
    assert rep.decide() == "fail"
    rep.trials = [{"ok": True, "seed": 0}]
    assert rep.decide(["slope out of band"]) == "fail"


def test_report_schema(tmp_path):
    rep = ex.verify_qlbt([cross_polytope(3)], trials=6, seed=1)
    data = json.loads(rep.to_json())
    assert set(data) >= {"experiment", "config", "trials", "summary", "verdict"}
    assert all("seed" in t for t in data["trials"])
    path = rep.write(tmp_path, "csv")
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == 6


def test_octahedron_equator():
    from polybound.complex import induced
    from polybound.homology import reduced_betti

    P = cross_polytope(3)
    K = P.boundary_complex
    top, bottom = int(P.points[:, 2].argmax()), int(P.points[:, 2].argmin())
    W = set(range(6)) - {top, bottom}
    assert reduced_betti(induced(K, W), 1) == 1 <= P.g(1) == 2
    assert reduced_betti(induced(K, range(6)), 1) == 0


def test_qlbt_is_reproducible():
    specs = [GeneratorSpec("sphere_uniform", 4, 0, {"n": 40})]
    a = ex.verify_qlbt(specs, trials=12, seed=3)
    b = ex.verify_qlbt(specs, trials=12, seed=3)
    strip = lambda r: [{k: v for k, v in t.items()} for t in r.trials]
    assert strip(a) == strip(b)
    assert a.verdict == "pass"


def test_qlbt_parallel_matches_serial():
    specs = [GeneratorSpec("sphere_uniform", 3, s, {"n": 30}) for s in range(3)]
    a = ex.verify_qlbt(specs, trials=5, seed=0, jobs=1)
    b = ex.verify_qlbt(specs, trials=5, seed=0, jobs=2)
    assert a.trials == b.trials


def test_qlbt_random_subsets_sphere_uniform_150_4():
    rep = ex.verify_qlbt([GeneratorSpec("sphere_uniform", 4, 0, {"n": 150})], ks=[2], trials=500,
                         samplers=["uniform"], seed=0)
    assert rep.summary["violations"] == 0 and rep.summary["triples"] == 500


def test_violation_dumps_instance(tmp_path, monkeypatch):
    # force a false violation to exercise the dump path
    monkeypatch.setattr(ex, "reduced_betti", lambda K, k: 10 ** 6)
    rep = ex.verify_qlbt([cross_polytope(3)], trials=2, seed=0, out_dir=str(tmp_path))
    assert rep.verdict == "fail"
    dumped = sorted(p.name for p in tmp_path.iterdir())
    assert any(n.endswith(".poly") for n in dumped) and any(n.endswith(".json") for n in dumped)


def test_stress_crosscheck_examples():
    rep = ex.stress_crosscheck([GeneratorSpec("cross", 4), GeneratorSpec("stacked", 4, 0, {"steps": 10}),
                                GeneratorSpec("cyclic", 4, 0, {"n": 8})])
    dims = [{r["k"]: r["float"] for r in t["dims"]} for t in rep.trials]
    assert [d[2] for d in dims] == [2, 0, 6]
    assert rep.verdict == "pass"


def test_witness_strips_small():
    rep = ex.witness_strips(3, 1, (0.015,), seed=0)
    assert rep.verdict == "pass"
    assert rep.trials[0]["witnesses"] >= 1
    with pytest.raises(Exception):
        ex.witness_strips(3, 1, (0.05,))


def test_scaling_needs_five_points():
    with pytest.raises(ValueError):
        ex.scaling_fit(3, 1, (0.2, 0.1))


def test_scaling_series_csv():
    s = ScalingSeries(3, 1, [{"spacing": 0.2, "delta_h": 0.02, "f0": 200, "g_k": 196,
                              "witnesses": None}])
    rows = list(csv.reader(io.StringIO(s.to_csv())))
    assert rows[0] == ["spacing", "delta_h", "f0", "g_k", "witnesses"]
    assert rows[1][-1] == ""


def test_trials_csv_handles_nested():
    text = trials_csv([{"a": 1, "b": [1, 2]}, {"a": 2, "c": "x"}])
    assert text.splitlines()[0] == "a,b,c"


def test_random_trends_small():
    rep = ex.random_body_trends(4, ns=(64, 128, 256, 512, 1024), trials=3, seed=0,
                                f0_band=(0, 2), delta_band=(-2, 0))
    assert rep.verdict == "pass"
    assert rep.summary["kalai_ii_increasing_fraction"] is not None


def test_d4_experiment_small():
    rep = ex.d4_ball_experiment((0.2,), seed=0)
    t = rep.trials[0]
    assert t["nonstacked_links"] > 0 and t["rank"] == t["chosen"] <= t["g_2"]


# -- CLI ---------------------------------------------------------------------

def test_cli_compute(tmp_path, capsys):
    f = tmp_path / "c.poly"
    f.write_text(write_polytope(cross_polytope(4)))
    assert main(["compute", str(f)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["f"] == [1, 8, 24, 32, 16] and out["g"] == [1, 3, 2] and out["m_sequence"]


def test_cli_betti_and_stress(tmp_path, capsys):
    P = cross_polytope(4)
    c = tmp_path / "k.cx"
    c.write_text(write_complex(P.boundary_complex))
    assert main(["betti", str(c)]) == 0
    assert json.loads(capsys.readouterr().out)["reduced_betti"]["3"] == 1
    f = tmp_path / "c.poly"
    f.write_text(write_polytope(P))
    assert main(["stress-dim", str(f), "-k", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["float"] == out["exact"] == out["g_k"] == 2


def test_cli_experiment_with_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"specs": [{"kind": "cross", "d": 3}], "trials": 4}))
    out = tmp_path / "out"
    assert main(["verify-qlbt", "--config", str(cfg), "--out", str(out), "--seed", "2"]) == 0
    data = json.loads((out / "verify_qlbt.json").read_text())
    assert data["verdict"] == "pass" and len(data["trials"]) == 4


def test_cli_scaling_csv(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 3, "spacings": [0.2, 0.15, 0.11, 0.08, 0.063]}))
    out = tmp_path / "out"
    main(["scaling", "--config", str(cfg), "--out", str(out), "--format", "csv"])
    header = (out / "scaling.csv").read_text().splitlines()[0]
    assert header == "spacing,delta_h,f0,g_k,witnesses"
