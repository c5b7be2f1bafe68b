"""Batch experiment runner.

Each subcommand reads one JSON config (``--config``), applies overrides from
``--generator``/``--seed``/``-p key=value``, runs, and writes its reports into
``--out``.  Exit status: 0 when every checked contract held, 2 when one was
violated, 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import suite
from .errors import ZeroTwoError
from .family import dalembert_residual, family_from_dict
from .laws import classify, default_global_horizon, geometric_grid, norm_profile
from .linalg import identity, op_norm, solve
from .reports import parse_complex, write_csv, write_json
from .resolvent import (
    QuadratureRule,
    cesaro_check,
    distance_sup,
    frequency_domain_check,
    laplace_resolvent,
    resolvent_via_s,
)
from .spectral import r_tilde_certificate, region_params, sample_region, verify_region_bound

FALLBACK_HORIZON = 10.0


class InputError(Exception):
    pass


def load_generator(ref: str, kind: str | None = None):
    """Load a family from a JSON path, or from a bundled name such as ``scalar``."""
    path = Path(ref)
    if path.is_file():
        doc = json.loads(path.read_text())
    else:
        bundled = resources.files("zerotwo") / "data" / f"{ref}.json"
        if not bundled.is_file():
            raise InputError(f"generator {ref!r} is neither a file nor a bundled name")
        doc = json.loads(bundled.read_text())
    return family_from_dict(doc, kind=kind)


def bundled_generators() -> list[str]:
    return sorted(p.name[:-5] for p in (resources.files("zerotwo") / "data").iterdir()
                  if p.name.endswith(".json"))


# -- subcommands ----------------------------------------------------------
# Each runner takes the resolved config and the output directory and returns
# the list of violated contracts.


def run_profile(cfg: dict, out: Path) -> list[str]:
    fam = load_generator(cfg["generator"], cfg["kind"])
    law = cfg["law"] or ("zero-one-global" if cfg["kind"] == "semigroup" else "zero-two-global")
    if law == "zero-two-local":
        grid = geometric_grid(float(cfg["t_start"]), int(cfg["levels"]))
    elif cfg["grid"] is not None:
        grid = [float(t) for t in cfg["grid"]]
    else:
        horizon = cfg["horizon"] or default_global_horizon(fam) or FALLBACK_HORIZON
        grid = np.linspace(0.0, float(horizon), int(cfg["samples"]))
    baseline = cfg["baseline"]
    if law == "scalar-distance" and baseline is None:
        raise InputError("law scalar-distance needs a nonzero 'baseline' (the a in cos(at)I)")
    profile = norm_profile(fam, grid, None if baseline is None else float(baseline))
    verdict = classify(profile, law, float(cfg["margin"]))
    write_csv(out / "profile.csv", ("t", "dist"), profile.points)
    write_json(out / "verdict.json", {
        "command": "profile",
        "config": cfg,
        "verdict": verdict.to_dict(),
        "measured_is_lower_bound": True,
    })
    print(f"{law}: measured {verdict.measured:.6g} vs threshold {verdict.threshold:.6g} "
          f"-> {verdict.conclusion}")
    return []


def run_dalembert(cfg: dict, out: Path) -> list[str]:
    fam = load_generator(cfg["generator"], "cosine")
    rows = [(t, s, dalembert_residual(fam, t, s)) for t in cfg["t_grid"] for s in cfg["s_grid"]]
    worst = max(r[2] for r in rows)
    write_csv(out / "dalembert.csv", ("t", "s", "residual"), rows)
    write_json(out / "dalembert.json", {"command": "dalembert", "config": cfg,
                                        "max_residual": worst})
    print(f"max d'Alembert residual {worst:.3e}")
    return [] if worst <= cfg["tolerance"] else [
        f"d'Alembert residual {worst:.3e} exceeds {cfg['tolerance']:g}"]


def run_resolvent(cfg: dict, out: Path) -> list[str]:
    fam = load_generator(cfg["generator"], "cosine")
    rule = None
    if cfg["panels"] is not None:
        rule = QuadratureRule(int(cfg["panels"]), int(cfg["nodes_per_panel"]))
    reports = [resolvent_via_s(fam, parse_complex(lam), float(s), rule)
               for lam in cfg["lambdas"] for s in cfg["s_values"]]
    write_csv(out / "resolvent.csv", reports[0].csv_header, [r.csv_row() for r in reports])
    write_json(out / "resolvent.json", {"command": "resolvent", "config": cfg,
                                        "reports": [r.to_dict() for r in reports]})
    violated = []
    for r in reports:
        tag = f"lambda={r.lam}, s={r.s:g}"
        if r.identity_residual > cfg["identity_tolerance"]:
            violated.append(f"identity residual {r.identity_residual:.3e} at {tag}")
        if r.bound_slack < -1e-8:
            violated.append(f"resolvent norm bound violated by {-r.bound_slack:.3e} at {tag}")
        if r.oracle_error > cfg["oracle_tolerance"]:
            violated.append(f"direct-solve mismatch {r.oracle_error:.3e} at {tag}")
    for r in reports:
        print(f"lambda={r.lam} s={r.s:g} resolvent_norm={op_norm(r.resolvent):.10g} "
              f"residual={r.identity_residual:.2e}")
    return violated


def run_region(cfg: dict, out: Path) -> list[str]:
    fam = load_generator(cfg["generator"], "cosine")
    params = region_params(float(cfg["c"]), float(cfg["t0"]), fam)
    holds, fails_beyond = r_tilde_certificate(params.c, params.r_tilde)
    rng = np.random.default_rng(cfg["seed"])
    sample = sample_region(params, int(cfg["samples"]), rng, float(cfg["radius_factor"]))
    report = verify_region_bound(fam, params, sample)
    write_csv(out / "region.csv", report.points[0].csv_header, [p.csv_row() for p in report.points])
    write_json(out / "region_params.json", {
        "command": "region",
        "config": cfg,
        "params": params.to_dict(),
        "certificate": {"holds_at_r_tilde": holds, "fails_beyond": fails_beyond},
        "points_passed": sum(p.passed for p in report.points),
        "points": len(report.points),
    })
    violated = []
    if not (holds and fails_beyond):
        violated.append("r_tilde boundary certificate")
    bad = [p for p in report.points if not p.passed]
    if bad:
        violated.append(f"region resolvent bound failed at {len(bad)} sampled points")
    print(f"r_tilde={params.r_tilde:.6g} phi_c={params.phi_c:.6g} r_c={params.r_c:.6g} "
          f"M_c={report.points[0].bound:.6g}; {len(report.points) - len(bad)}/{len(report.points)} pass")
    return violated


def run_semigroup_laws(cfg: dict, out: Path) -> list[str]:
    sg = load_generator(cfg["generator"], "semigroup")
    r = distance_sup(sg, float(cfg["r_horizon"]), int(cfg["r_samples"]))
    eye = identity(sg.dim)
    violated = []
    freq = []
    for lam_raw in cfg["lambdas"]:
        lam = parse_complex(lam_raw)
        chk = frequency_domain_check(sg, lam, r)
        lap = laplace_resolvent(sg, lam)
        direct = solve(lam * eye - sg.a, eye)
        rel = op_norm(lap - direct) / op_norm(direct)
        if rel > 1e-6:
            violated.append(f"Laplace resolvent mismatch {rel:.3e} at lambda={lam}")
        if r < 1.0:
            if chk.shifted_resolvent_dist > r + 1e-8:
                violated.append(f"||lam R(lam,A) - I|| > r at lambda={lam}")
            if chk.scaled_operator_norm > chk.inverse_bound + 1e-8:
                violated.append(f"||I - A/lam|| > 1/(1-r) at lambda={lam}")
        freq.append({"lambda": lam, "laplace_relative_error": rel, **chk._asdict()})
    cesaro = []
    for t in cfg["t_values"]:
        rep = cesaro_check(sg, float(t), r_horizon=float(cfg["r_horizon"]),
                           r_samples=int(cfg["r_samples"]))
        if rep.identity_residual > 1e-8:
            violated.append(f"T(t)-I-A B_t residual {rep.identity_residual:.3e} at t={t}")
        if rep.bound is not None and rep.inv_norm > rep.bound + 1e-8:
            violated.append(f"||B_t^-1|| exceeds 1/(t(1-r)) at t={t}")
        cesaro.append({"t": t, **rep._asdict(), "bound_applicable": rep.bound is not None})
    write_json(out / "semigroup_laws.json", {"command": "semigroup-laws", "config": cfg, "r": r,
                                             "frequency_domain": freq, "time_domain": cesaro})
    print(f"grid sup r = {r:.6g} ({'< 1' if r < 1 else '>= 1: bounds not applicable'})")
    return violated


def run_reproduce(cfg: dict, out: Path) -> list[str]:
    results = suite.run_all(int(cfg["seed"]))
    for res in results:
        print(res.line())
        if res.rows:
            write_csv(out / f"criterion_{res.number:02d}.csv", res.header, res.rows)
    write_json(out / "criteria.json", {"command": "reproduce", "config": cfg,
                                       "criteria": [r.to_dict() for r in results]})
    return [f"criterion {r.number}: {r.title}" for r in results if not r.passed]


COMMANDS = {
    "profile": (run_profile, {
        "generator": "zero", "kind": "cosine", "law": None, "grid": None, "horizon": None,
        "samples": 401, "t_start": 1.0, "levels": 30, "baseline": None, "margin": 1e-3,
    }),
    "dalembert": (run_dalembert, {
        "generator": "scalar", "t_grid": list(suite.GRID_01), "s_grid": list(suite.GRID_01),
        "tolerance": 1e-8,
    }),
    "resolvent": (run_resolvent, {
        "generator": "scalar", "lambdas": [1.0], "s_values": [1.0], "panels": None,
        "nodes_per_panel": 8, "identity_tolerance": 1e-6, "oracle_tolerance": 1e-6,
    }),
    "region": (run_region, {
        "generator": "scalar", "c": 0.5, "t0": math.pi / 6, "samples": 25, "radius_factor": 4.0,
    }),
    "semigroup-laws": (run_semigroup_laws, {
        "generator": "decay", "lambdas": [1.0, 10.0, 100.0], "t_values": [0.5, 1.0, 2.0],
        "r_horizon": 50.0, "r_samples": 2001,
    }),
    "reproduce": (run_reproduce, {}),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise InputError(f"override {text!r} is not of the form key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def resolve_config(command: str, args) -> dict:
    cfg = dict(COMMANDS[command][1])
    cfg["seed"] = suite.DEFAULT_SEED
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise InputError("config must be a JSON object")
        cfg.update(doc)
    for text in args.param or []:
        key, value = _parse_override(text)
        cfg[key] = value
    if getattr(args, "generator", None):
        cfg["generator"] = args.generator
    if args.seed is not None:
        cfg["seed"] = args.seed
    unknown = sorted(set(cfg) - set(COMMANDS[command][1]) - {"seed"})
    if unknown:
        raise InputError(f"unknown config keys for {command}: {', '.join(unknown)}")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config document")
    common.add_argument("--out", default="zerotwo-out", help="output directory")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized samples")
    common.add_argument("-p", "--param", action="append", metavar="KEY=VALUE",
                        help="override one config field (value parsed as JSON)")
    parser = _Parser(prog="zerotwo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name != "reproduce":
            p.add_argument("--generator",
                           help=f"generator JSON path or bundled name ({', '.join(bundled_generators())})")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    runner = COMMANDS[args.command][0]
    try:
        cfg = resolve_config(args.command, args)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        violated = runner(cfg, out)
    except (InputError, ZeroTwoError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if violated:
        for v in violated:
            print(f"contract violated: {v}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
