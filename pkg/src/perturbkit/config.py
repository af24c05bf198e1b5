"""Problem configuration: TOML schema, validation, and reconstruction.

A problem file has four tables:

    [operator]        backend plus its parameters
    [vectors.<name>]  named scale-vector primitives
    [perturbation]    vector references, alpha, tau policy
    [task]            one task block with task parameters

Complex numbers are two-field records {re = ..., im = ...}; alpha may be
the string "zero" and tau the string "auto".
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .krein import (PerturbationSpec, TauAuto, TauExplicit, ZERO_COUPLING)
from .operators import LaplaceLine, LaplaceSpace3D, Multiplication
from .quadrature import QuadratureConfig
from .vectors import (Delta, ExpAbs, PowerLaw, Sum, Tabulated, Windowed)

_EPS_GUARD = 1e-14

TASK_KINDS = ("resolve", "eigen", "inverse", "dualpair", "approx", "scatter",
              "verify-examples")


@dataclass
class ProblemConfig:
    operator: object
    vectors: dict
    spec: object            # PerturbationSpec or None
    task: str
    task_params: dict
    quad: QuadratureConfig
    raw: dict

    def vector(self, name: str, field: str):
        if name not in self.vectors:
            raise ConfigError(f"unknown vector reference '{name}'", field)
        return self.vectors[name]


def _require(table: dict, key: str, field: str):
    if key not in table:
        raise ConfigError("missing required key", f"{field}.{key}")
    return table[key]


def _as_complex(value, field: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, dict):
        re = value.get("re", 0.0)
        im = value.get("im", 0.0)
        extra = set(value) - {"re", "im"}
        if extra:
            raise ConfigError(f"unknown fields {sorted(extra)}", field)
        return complex(float(re), float(im))
    raise ConfigError("expected a number or {re, im} record", field)


def _parse_operator(table: dict) -> object:
    backend = _require(table, "backend", "operator")
    if backend == "multiplication":
        power = float(table.get("power", 2.0))
        start = float(_require(table, "start", "operator"))
        try:
            return Multiplication(power=power, start=start)
        except ValueError as exc:
            raise ConfigError(str(exc), "operator") from None
    if backend == "laplace_line":
        return LaplaceLine()
    if backend == "laplace_3d":
        return LaplaceSpace3D()
    raise ConfigError(f"unknown backend '{backend}'", "operator.backend")


def _parse_vector(table: dict, field: str, known: dict):
    kind = _require(table, "kind", field)
    if kind == "powerlaw":
        return PowerLaw(float(_require(table, "exponent", field)),
                        float(table.get("shift", 0.0)))
    if kind == "expabs":
        return ExpAbs(_as_complex(table.get("rate", 1.0), f"{field}.rate"),
                      float(table.get("center", 0.0)))
    if kind == "delta":
        point = table.get("point", table.get("center", 0.0))
        if isinstance(point, list):
            return Delta(tuple(float(p) for p in point))
        return Delta(float(point))
    if kind == "sum":
        terms = _require(table, "terms", field)
        parsed = []
        for i, term in enumerate(terms):
            weight = _as_complex(term.get("weight", 1.0),
                                 f"{field}.terms[{i}].weight")
            if "ref" in term:
                name = term["ref"]
                if name not in known:
                    raise ConfigError(f"unknown vector reference '{name}'",
                                      f"{field}.terms[{i}].ref")
                base = known[name]
            else:
                base = _parse_vector(term, f"{field}.terms[{i}]", known)
            parsed.append((weight, base))
        return Sum(tuple(parsed))
    if kind == "windowed":
        window = _require(table, "window", field)
        base = _parse_vector(_require(table, "base", field),
                             f"{field}.base", known)
        scale = _as_complex(table.get("scale", 1.0), f"{field}.scale")
        return Windowed(base, (float(window[0]), float(window[1])), scale)
    if kind == "tabulated":
        return Tabulated(tuple(_require(table, "grid", field)),
                         tuple(_as_complex(v, f"{field}.values")
                               for v in _require(table, "values", field)))
    raise ConfigError(f"unknown vector kind '{kind}'", f"{field}.kind")


def _parse_quad(raw: dict, tol_override=None) -> QuadratureConfig:
    table = raw.get("quadrature", {})
    abs_tol = float(table.get("abs_tol", 1e-10))
    rel_tol = float(table.get("rel_tol", 1e-9))
    limit = int(table.get("max_subdivisions", 400))
    if tol_override is not None:
        if tol_override > abs_tol:
            raise ConfigError(
                f"--tol {tol_override:g} is looser than the default "
                f"{abs_tol:g}; tolerances may only tighten", "tol")
        abs_tol = max(tol_override, _EPS_GUARD)
        rel_tol = max(min(rel_tol, abs_tol * 10.0), _EPS_GUARD)
    try:
        return QuadratureConfig(abs_tol, rel_tol, limit)
    except ValueError as exc:
        raise ConfigError(str(exc), "quadrature") from None


def load_config(path: str, tol_override=None) -> ProblemConfig:
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error: {exc}") from None
    return parse_config(raw, tol_override)


def parse_config(raw: dict, tol_override=None) -> ProblemConfig:
    task_table = dict(raw.get("task", {}))
    task = task_table.pop("kind", None)
    if task is None:
        raise ConfigError("missing required key", "task.kind")
    if task not in TASK_KINDS:
        raise ConfigError(f"unknown task '{task}'", "task.kind")

    quad = _parse_quad(raw, tol_override)
    if task == "verify-examples":
        return ProblemConfig(None, {}, None, task, task_table, quad, raw)

    operator = _parse_operator(_require(raw, "operator", ""))
    vectors = {}
    for name, table in raw.get("vectors", {}).items():
        vectors[name] = _parse_vector(table, f"vectors.{name}", vectors)

    spec = None
    if "perturbation" in raw:
        pert = raw["perturbation"]
        name1 = _require(pert, "omega1", "perturbation")
        name2 = _require(pert, "omega2", "perturbation")
        for name in (name1, name2):
            if name not in vectors:
                raise ConfigError(f"unknown vector reference '{name}'",
                                  "perturbation")
        alpha_raw = pert.get("alpha", 1.0)
        if alpha_raw == "zero":
            alpha = ZERO_COUPLING
        else:
            alpha = _as_complex(alpha_raw, "perturbation.alpha")
            if alpha == 0:
                raise ConfigError("alpha = 0 must be written as \"zero\"",
                                  "perturbation.alpha")
        tau_raw = pert.get("tau", "auto")
        if tau_raw == "auto":
            tau = TauAuto()
        else:
            tau = TauExplicit(_as_complex(tau_raw, "perturbation.tau"))
        spec = PerturbationSpec(operator, vectors[name1], vectors[name2],
                                alpha, tau)
    elif task in ("resolve", "eigen", "approx", "scatter"):
        raise ConfigError("missing required table for this task",
                          "perturbation")

    cfg = ProblemConfig(operator, vectors, spec, task, task_table, quad, raw)
    _validate_task_params(cfg)
    return cfg


def _validate_task_params(cfg: ProblemConfig) -> None:
    params, task = cfg.task_params, cfg.task
    field = "task"
    if task == "resolve":
        pts = params.get("z_points")
        if not pts:
            raise ConfigError("resolve needs z_points", f"{field}.z_points")
        params["z_points"] = [
            _as_complex(p, f"{field}.z_points[{i}]")
            for i, p in enumerate(pts)]
    elif task == "eigen":
        if "region" in params and not isinstance(params["region"], str):
            raise ConfigError("region must be 'a:b' or 'a:b:c'",
                              f"{field}.region")
        params["seeds"] = [
            _as_complex(s, f"{field}.seeds[{i}]")
            for i, s in enumerate(params.get("seeds", []))]
    elif task == "inverse":
        params["lambda"] = _as_complex(
            _require(params, "lambda", field), f"{field}.lambda")
        params["phi"] = cfg.vector(_require(params, "phi", field),
                                   f"{field}.phi")
        params["psi"] = cfg.vector(_require(params, "psi", field),
                                   f"{field}.psi")
    elif task == "dualpair":
        params["mu"] = _as_complex(_require(params, "mu", field),
                                   f"{field}.mu")
        params["phi"] = cfg.vector(_require(params, "phi", field),
                                   f"{field}.phi")
        params["psi"] = cfg.vector(_require(params, "psi", field),
                                   f"{field}.psi")
    elif task == "approx":
        tau = params.get("tau", 0.0)
        if isinstance(tau, dict):
            value = _as_complex(tau, f"{field}.tau")
            if abs(value.imag) > 1e-14:
                raise ConfigError("approx tau must be real", f"{field}.tau")
            tau = value.real
        params["tau"] = float(tau)
        ladder = params.get("n_ladder", [100, 1000, 10000])
        if not all(isinstance(n, int) and n > 0 for n in ladder):
            raise ConfigError("n_ladder must be positive integers",
                              f"{field}.n_ladder")
        params["n_ladder"] = list(ladder)
        params["z"] = _as_complex(params.get("z", {"re": -1.0}), f"{field}.z")
    elif task == "scatter":
        grid = params.get("grid")
        if grid is not None and not isinstance(grid, str):
            raise ConfigError("grid must be 'a:b:n'", f"{field}.grid")
        method = params.get("method", "auto")
        if method not in ("auto", "plemelj", "eta"):
            raise ConfigError("method must be auto|plemelj|eta",
                              f"{field}.method")
        params["method"] = method


def parse_region(text: str):
    """'a:b', 'a:b:imag', or the bracketed '[a,b]' spelling."""
    from .eigen import RealInterval, Rectangle

    body = text.strip().strip("[]")
    parts = body.split(":") if ":" in body else body.split(",")
    try:
        if len(parts) == 2:
            lo, hi = float(parts[0]), float(parts[1])
            return RealInterval(lo, hi)
        if len(parts) == 3:
            lo, hi, im = float(parts[0]), float(parts[1]), float(parts[2])
            return Rectangle((lo, hi), (-abs(im), abs(im)))
    except ValueError:
        pass
    raise ConfigError("region must be 'a:b' or 'a:b:imag'", "region")


def parse_grid(text: str):
    parts = text.strip().split(":")
    if len(parts) != 3:
        raise ConfigError("grid must be 'a:b:n'", "grid")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError("grid must be 'a:b:n'", "grid") from None
    if n < 1 or not b > a:
        raise ConfigError("grid needs a < b and n >= 1", "grid")
    if n == 1:
        return [a]
    return [a + (b - a) * i / (n - 1) for i in range(n)]


def parse_seed(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError("seed must be 'RE' or 'RE,IM'", "seed")
