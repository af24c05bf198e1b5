"""Command-line front end: parse configs, dispatch tasks, write reports.

Exit codes: 0 success, 2 configuration/validation error, 3 numerical
failure, 4 corpus or check mismatch.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .approx import build_matching_step, matching_spec, resolvent_gap
from .config import (ProblemConfig, load_config, parse_config, parse_grid,
                     parse_region, parse_seed)
from .corpus import run_example
from .eigen import (dual_pair, eigen_condition, find_eigenvalues,
                    inverse_problem)
from .errors import ConfigError, PerturbkitError
from .krein import (PerturbationSpec, TauExplicit, b_of_z, is_infinite_b,
                    krein_data, tau_value)
from .operators import on_spectrum
from .report import complex_record, write_csv, write_json
from .scattering import smatrix
from .vectors import describe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_MISMATCH = 4


def _thread_count() -> int:
    raw = os.environ.get("PERTURBKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    workers = _thread_count()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _b_record(b):
    return "infinity" if is_infinite_b(b) else complex_record(b)


# ----------------------------------------------------------------------
# task runners (each returns the JSON payload and optional CSV rows)


def _run_resolve(cfg: ProblemConfig):
    points = []
    for z in cfg.task_params["z_points"]:
        kd = krein_data(cfg.spec, z, cfg.quad)
        points.append({"z": complex_record(kd.z), "b": _b_record(kd.b_z),
                       "F": complex_record(kd.F_value),
                       "tau": complex_record(kd.tau)})
    header = ["re_z", "im_z", "re_b", "im_b", "re_F", "im_F"]
    rows = []
    for p in points:
        b = p["b"]
        b_re, b_im = (math.inf, 0.0) if b == "infinity" else (b["re"], b["im"])
        rows.append([p["z"]["re"], p["z"]["im"], b_re, b_im,
                     p["F"]["re"], p["F"]["im"]])
    return {"task": "resolve", "points": points}, (header, rows)


def _run_eigen(cfg: ProblemConfig, args):
    params = cfg.task_params
    region = None
    if args.region:
        region = parse_region(args.region)
    elif params.get("region"):
        region = parse_region(params["region"])
    seeds = list(params.get("seeds", []))
    seeds.extend(parse_seed(s) for s in (args.seed or []))
    pairs = find_eigenvalues(cfg.spec, region, seeds, cfg.quad)
    eigenvalues = [{"lambda": complex_record(p.lam),
                    "residual": float(p.residual),
                    "eigenvector": describe(p.phi),
                    "adjoint_eigenvector": describe(p.psi)}
                   for p in pairs]
    payload = {"task": "eigen", "count": len(pairs),
               "eigenvalues": eigenvalues}
    rows = [[p.lam.real, p.lam.imag, p.residual] for p in pairs]
    return payload, (["re_lambda", "im_lambda", "residual"], rows)


def _run_inverse(cfg: ProblemConfig):
    params = cfg.task_params
    res = inverse_problem(cfg.operator, params["lambda"], params["phi"],
                          params["psi"], cfg.quad)
    spec = res.spec
    samples = []
    for z in params.get("z_points", [{"re": -1.0, "im": 0.0}]):
        z = complex(z["re"], z.get("im", 0.0)) if isinstance(z, dict) else z
        samples.append({"z": complex_record(z),
                        "b_inv": complex_record(res.family.b_inv(z, cfg.quad))})
    payload = {
        "task": "inverse",
        "lambda": complex_record(res.family.lam),
        "alpha": complex_record(spec.alpha),
        "tau": complex_record(tau_value(spec, cfg.quad)),
        "gauge_fixed": res.gauge_fixed,
        "omega1": describe(spec.omega1),
        "omega2": describe(spec.omega2),
        "b_inv_samples": samples,
    }
    return payload, None


def _run_dualpair(cfg: ProblemConfig):
    params = cfg.task_params
    dp = dual_pair(cfg.operator, params["mu"], params["phi"], params["psi"],
                   cfg.quad)
    closure = {"at_mu": abs(eigen_condition(dp.spec, dp.mu, cfg.quad))}
    if not on_spectrum(cfg.operator, dp.lam):
        closure["at_lambda"] = abs(eigen_condition(dp.spec, dp.lam, cfg.quad))
    payload = {
        "task": "dualpair",
        "mu": complex_record(dp.mu),
        "lambda": complex_record(dp.lam),
        "alpha": complex_record(dp.alpha),
        "omega1": describe(dp.omega1),
        "omega2": describe(dp.omega2),
        "phi_mu": describe(dp.phi_mu),
        "closure_residuals": closure,
    }
    return payload, None


def _run_approx(cfg: ProblemConfig):
    params = cfg.task_params
    spec = cfg.spec
    tau = params["tau"]
    z = params["z"]
    limit_spec = PerturbationSpec(spec.op, spec.omega1, spec.omega2,
                                  spec.alpha, TauExplicit(tau))
    probes = _approx_probes(spec.op)
    steps = []
    rows = []
    for n in params["n_ladder"]:
        step = build_matching_step(spec.op, spec.omega1, spec.omega2, tau, n,
                                   cfg=cfg.quad)
        spec_n = matching_spec(spec.op, step, spec.alpha)
        gap = resolvent_gap(spec_n, limit_spec, z, probes, cfg.quad)
        steps.append({
            "n": step.n, "a_n": step.a_n, "b_n": step.b_n,
            "eps1": step.eps1_n, "eps2": step.eps2_n,
            "window": list(step.window),
            "realized": complex_record(step.realized),
            "gap": gap.gap, "fn1": list(gap.fn1), "fn3": gap.fn3_gap,
        })
        rows.append([step.n, step.a_n, step.b_n, step.eps1_n, step.eps2_n,
                     step.realized.real, gap.gap, gap.fn1[0], gap.fn1[1],
                     gap.fn3_gap])
    payload = {"task": "approx", "tau": tau, "z": complex_record(z),
               "steps": steps}
    header = ["n", "a_n", "b_n", "eps1", "eps2", "realized", "gap",
              "fn1_omega1", "fn1_omega2", "fn3"]
    return payload, (header, rows)


def _approx_probes(op, count: int = 10):
    from .vectors import PowerLaw, Windowed

    bottom = op.spectrum_bottom
    width = 10.0
    return [Windowed(PowerLaw(-1.0), (bottom + k * width,
                                      bottom + (k + 1) * width))
            for k in range(count)]


def _run_scatter(cfg: ProblemConfig, args):
    params = cfg.task_params
    grid_text = args.grid or params.get("grid")
    if not grid_text:
        raise ConfigError("scatter needs --grid or task.grid", "grid")
    energies = parse_grid(grid_text)
    method = params.get("method", "auto")

    def one(lam):
        return smatrix(cfg.spec, lam, method, cfg.quad)

    points = _parallel_map(one, energies)
    rows = []
    recs = []
    for p in points:
        s = p.value
        abs_s = abs(s) if not (isinstance(s, complex) and
                               math.isinf(abs(s))) else math.inf
        arg_s = 0.0 if math.isinf(abs_s) else math.atan2(s.imag, s.real)
        recs.append({"lambda": p.lam, "S": complex_record(s),
                     "abs_S": abs_s, "arg_S": arg_s,
                     "amp_plus": complex_record(p.amp_plus),
                     "amp_minus": complex_record(p.amp_minus),
                     "singular": p.singular})
        rows.append([p.lam, s.real, s.imag, abs_s, arg_s,
                     p.amp_plus.real, p.amp_plus.imag,
                     p.amp_minus.real, p.amp_minus.imag])
    header = ["lambda", "re_S", "im_S", "abs_S", "arg_S", "re_amp_plus",
              "im_amp_plus", "re_amp_minus", "im_amp_minus"]
    return {"task": "scatter", "method": method, "points": recs}, \
        (header, rows)


def _run_verify_examples(cfg):
    reports = _parallel_map(lambda i: run_example(i, cfg.quad),
                            [1, 2, 3, 4, 5, 6])
    payload = {"task": "verify-examples", "passed": all(r.passed
                                                        for r in reports),
               "examples": []}
    for rep in reports:
        payload["examples"].append({
            "id": rep.example_id,
            "title": rep.title,
            "passed": rep.passed,
            "checks": [{
                "name": c.name,
                "computed": complex_record(c.computed),
                "golden": complex_record(c.golden),
                "tol": c.tol,
                "error": c.error,
                "passed": c.passed,
                "provenance": c.provenance,
                "note": c.note,
            } for c in rep.checks],
        })
    return payload, None


# ----------------------------------------------------------------------
# check mode: re-validate an existing report


def _run_check(report_path: str) -> int:
    import json

    with open(report_path) as handle:
        report = json.load(handle)
    task = report.get("task")
    raw_config = report.get("config")
    if task == "verify-examples":
        fresh, _ = _run_verify_examples(parse_config(raw_config)
                                        if raw_config else
                                        _verify_only_config())
        ok = fresh["passed"] == report.get("passed") and fresh["passed"]
        print(f"check verify-examples: {'ok' if ok else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_MISMATCH
    if raw_config is None:
        print("report carries no embedded config; cannot check",
              file=sys.stderr)
        return EXIT_CONFIG
    cfg = parse_config(raw_config)
    if task == "eigen":
        ok = True
        for entry in report.get("eigenvalues", []):
            lam = complex(entry["lambda"]["re"], entry["lambda"]["im"])
            residual = abs(eigen_condition(cfg.spec, lam, cfg.quad))
            ok = ok and residual <= max(1e-8, 10.0 * entry["residual"] + 1e-10)
            print(f"check lambda={lam}: residual {residual:.3e}")
        return EXIT_OK if ok else EXIT_MISMATCH
    if task == "resolve":
        ok = True
        for entry in report.get("points", []):
            z = complex(entry["z"]["re"], entry["z"]["im"])
            b = b_of_z(cfg.spec, z, cfg.quad)
            if entry["b"] == "infinity":
                match = is_infinite_b(b)
            else:
                match = (not is_infinite_b(b)
                         and abs(b - complex(entry["b"]["re"],
                                             entry["b"]["im"]))
                         <= 1e-8 * (1 + abs(b)))
            ok = ok and match
            print(f"check z={z}: {'ok' if match else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_MISMATCH
    if task == "scatter":
        ok = True
        pts = report.get("points", [])
        for entry in pts[:: max(1, len(pts) // 3)]:
            p = smatrix(cfg.spec, entry["lambda"],
                        report.get("method", "auto"), cfg.quad)
            want = complex(entry["S"]["re"], entry["S"]["im"])
            match = abs(p.value - want) <= 1e-8 * (1 + abs(want))
            ok = ok and match
            print(f"check lam={entry['lambda']}: "
                  f"{'ok' if match else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_MISMATCH
    if task == "dualpair":
        fresh, _ = _run_dualpair(cfg)
        ok = True
        for key in ("mu", "lambda", "alpha"):
            want = complex(report[key]["re"], report[key]["im"])
            got = complex(fresh[key]["re"], fresh[key]["im"])
            match = abs(got - want) <= 1e-8 * (1 + abs(want))
            ok = ok and match
            print(f"check {key}: {'ok' if match else 'MISMATCH'}")
        closure = max(fresh["closure_residuals"].values())
        ok = ok and closure < 1e-7
        print(f"check closure residuals: {closure:.3e}")
        return EXIT_OK if ok else EXIT_MISMATCH
    if task == "inverse":
        fresh, _ = _run_inverse(cfg)
        ok = True
        for got, want in zip(fresh["b_inv_samples"],
                             report.get("b_inv_samples", [])):
            gv = complex(got["b_inv"]["re"], got["b_inv"]["im"])
            wv = complex(want["b_inv"]["re"], want["b_inv"]["im"])
            match = abs(gv - wv) <= 1e-8 * (1 + abs(wv))
            ok = ok and match
            print(f"check b_inv at z={got['z']}: "
                  f"{'ok' if match else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_MISMATCH
    if task == "approx":
        ok = True
        tau = report.get("tau", 0.0)
        for entry in report.get("steps", []):
            realized = complex(entry["realized"]["re"],
                               entry["realized"]["im"])
            match = abs(realized - tau) <= 1e-7
            ok = ok and match
            print(f"check step n={entry['n']}: realized tau "
                  f"{'ok' if match else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_MISMATCH
    print(f"check is not implemented for task '{task}'", file=sys.stderr)
    return EXIT_CONFIG


def _verify_only_config():
    return parse_config({"task": {"kind": "verify-examples"}})


# ----------------------------------------------------------------------
# argument parsing and dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perturbkit",
        description="rank-one nonsymmetric singular perturbation toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="problem TOML")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=None,
                       help="tighten the quadrature tolerance")
        p.add_argument("--format", choices=("json", "csv", "both"),
                       default="json")

    for name in ("resolve", "inverse", "dualpair", "approx"):
        common(sub.add_parser(name))
    p_eigen = sub.add_parser("eigen")
    common(p_eigen)
    p_eigen.add_argument("--region", default=None, help="a:b or a:b:imag")
    p_eigen.add_argument("--seed", action="append", default=None,
                         help="RE[,IM]; repeatable")
    p_scatter = sub.add_parser("scatter")
    common(p_scatter)
    p_scatter.add_argument("--grid", default=None, help="a:b:n energy grid")
    p_verify = sub.add_parser("verify-examples")
    common(p_verify, needs_config=False)
    p_verify.add_argument("--config", default=None, help="optional TOML")
    p_check = sub.add_parser("check")
    p_check.add_argument("report", help="report.json to re-validate")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PerturbkitError as exc:
        print(f"numerical error [{type(exc).__name__}]: {exc}",
              file=sys.stderr)
        return EXIT_NUMERICAL


def _dispatch(args) -> int:
    if args.command == "check":
        return _run_check(args.report)

    if args.command == "verify-examples":
        cfg = (load_config(args.config, args.tol) if args.config
               else _verify_only_config())
        payload, table = _run_verify_examples(cfg)
        _emit(args, cfg, payload, table)
        for example in payload["examples"]:
            for check in example["checks"]:
                status = "pass" if check["passed"] else "FAIL"
                print(f"example {example['id']}: {status}  {check['name']} "
                      f"(error {check['error']:.2e}, tol {check['tol']:g})")
        if not payload["passed"]:
            return EXIT_MISMATCH
        return EXIT_OK

    cfg = load_config(args.config, args.tol)
    if cfg.task != args.command:
        raise ConfigError(
            f"config declares task '{cfg.task}' but the subcommand is "
            f"'{args.command}'", "task.kind")
    if args.command == "resolve":
        payload, table = _run_resolve(cfg)
    elif args.command == "eigen":
        payload, table = _run_eigen(cfg, args)
    elif args.command == "inverse":
        payload, table = _run_inverse(cfg)
    elif args.command == "dualpair":
        payload, table = _run_dualpair(cfg)
    elif args.command == "approx":
        payload, table = _run_approx(cfg)
    elif args.command == "scatter":
        payload, table = _run_scatter(cfg, args)
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown command {args.command}")
    _emit(args, cfg, payload, table)
    return EXIT_OK


def _emit(args, cfg, payload, table) -> None:
    payload = dict(payload)
    payload["config"] = cfg.raw
    out_dir = args.out
    os.makedirs(out_dir, exist_ok=True)
    fmt = getattr(args, "format", "json")
    if fmt in ("json", "both"):
        write_json(os.path.join(out_dir, "report.json"), payload)
    if fmt in ("csv", "both") and table is not None:
        header, rows = table
        write_csv(os.path.join(out_dir, "table.csv"), header, rows)


if __name__ == "__main__":
    sys.exit(main())
