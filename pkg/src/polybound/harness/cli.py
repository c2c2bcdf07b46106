"""Command line entry point: ``polybound <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from ..complex import read_complex
from ..enumeration import check_dehn_sommerville, is_m_sequence
from ..generators import GeneratorSpec
from ..geometry import read_polytope
from ..homology import betti
from ..stress import affine_stress_dim
from . import experiments as ex
from .report import ExperimentReport, trials_csv

log = logging.getLogger("polybound")


def _load_config(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    return json.loads(Path(path).read_text())


def _emit(payload: dict[str, Any], args, name: str, csv_text: str | None = None) -> None:
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(payload, indent=2)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{name}.{'csv' if args.format == 'csv' and csv_text is not None else 'json'}"
        path.write_text(text)
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_report(rep: ExperimentReport, args) -> int:
    _emit(rep.to_dict(), args, rep.experiment, trials_csv(rep.to_dict()["trials"]))
    log.info("%s: %s", rep.experiment, rep.verdict)
    return 0 if rep.verdict == "pass" else 1


def _specs(cfg: dict[str, Any], default):
    raw = cfg.get("specs")
    return [GeneratorSpec.from_dict(s) for s in raw] if raw else default()


def cmd_compute(args) -> int:
    P = read_polytope(Path(args.file).read_text())
    f, h, g = P.f_vector.entries, P.h_vector.entries, P.g_vector.entries
    _emit({"d": P.d, "f": f, "h": h, "g": g, "dehn_sommerville": check_dehn_sommerville(h),
           "m_sequence": is_m_sequence(g)}, args, "compute")
    return 0


def cmd_betti(args) -> int:
    text = Path(args.file).read_text()
    K = read_polytope(text).boundary_complex if args.polytope else read_complex(text)
    _emit({"reduced_betti": betti(K).as_dict()}, args, "betti")
    return 0


def cmd_stress_dim(args) -> int:
    P = read_polytope(Path(args.file).read_text())
    out = {"k": args.k, "g_k": P.g(args.k)}
    for backend in ("float", "exact"):
        out[backend] = affine_stress_dim(P.boundary_complex, P.points, args.k, backend)
    _emit(out, args, "stress_dim")
    return 0 if out["float"] == out["exact"] else 1


def cmd_verify_qlbt(args) -> int:
    cfg = _load_config(args.config)
    rep = ex.verify_qlbt(_specs(cfg, ex.default_qlbt_suite), ks=cfg.get("ks"),
                         trials=cfg.get("trials", 100), seed=args.seed,
                         out_dir=args.out, jobs=args.jobs)
    return _emit_report(rep, args)


def cmd_witness_strips(args) -> int:
    cfg = _load_config(args.config)
    rep = ex.witness_strips(d=cfg.get("d", 4), k=cfg.get("k", 2),
                            eps_schedule=cfg.get("eps_schedule", (0.01, 0.005, 0.003)),
                            seed=args.seed, spacings=cfg.get("spacings"), out_dir=args.out,
                            jobs=args.jobs)
    return _emit_report(rep, args)


def cmd_scaling(args) -> int:
    cfg = _load_config(args.config)
    d = cfg.get("d", 3)
    rep, series = ex.scaling_report(d, cfg.get("k", d // 2),
                                    spacings=cfg.get("spacings"), seed=args.seed,
                                    band=cfg.get("band"), witnesses=cfg.get("witnesses", False),
                                    jobs=args.jobs)
    _emit(rep.to_dict(), args, "scaling", series.to_csv())
    return 0 if rep.verdict == "pass" else 1


def cmd_random_trends(args) -> int:
    cfg = _load_config(args.config)
    kw = {k: cfg[k] for k in ("ns", "trials", "f0_band", "delta_band") if k in cfg}
    rep = ex.random_body_trends(d=cfg.get("d", 3), seed=args.seed, jobs=args.jobs, **kw)
    return _emit_report(rep, args)


def cmd_d4_ball(args) -> int:
    cfg = _load_config(args.config)
    rep = ex.d4_ball_experiment(spacings=cfg.get("spacings", (0.2, 0.16, 0.13)), seed=args.seed,
                                out_dir=args.out, jobs=args.jobs)
    return _emit_report(rep, args)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--config", help="JSON file with experiment parameters")
    common.add_argument("--out", help="output directory (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="polybound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="f/h/g vectors of a polytope file")
    p.add_argument("file")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("betti", parents=[common], help="reduced Betti numbers of a complex file")
    p.add_argument("file")
    p.add_argument("--polytope", action="store_true", help="input is a polytope file")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("stress-dim", parents=[common], help="affine k-stress dimension")
    p.add_argument("file")
    p.add_argument("-k", type=int, default=2)
    p.set_defaults(func=cmd_stress_dim)

    for name, func, text in (
            ("verify-qlbt", cmd_verify_qlbt, "sampled Betti <= g_k checks"),
            ("witness-strips", cmd_witness_strips, "strip witnesses on inscribed net hulls"),
            ("scaling", cmd_scaling, "log-log fit of g_k against the Hausdorff distance"),
            ("random-trends", cmd_random_trends, "f_0 and distance exponents of random hulls"),
            ("d4-ball", cmd_d4_ball, "local stresses near non-stacked links, d = 4")):
        sub.add_parser(name, parents=[common], help=text).set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
