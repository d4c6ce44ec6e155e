"""Command line runner: single checks and parameter sweeps with CSV or JSON
reports.

Exit codes: 0 all executed checks satisfied, 1 violation or solver failure,
2 precondition skips under --strict, 64 usage or parameter errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from datetime import datetime, timezone

from .modelspace import ParameterError, SolverError
from .mmspace import InvariantViolation
from .numerics import DEFAULT_SPEC, QuadratureError, QuadratureSpec
from .scenarios import DIMENSIONS, FAMILIES, load, make_scenario
from .theorems import CHECKERS, CheckReport, run_checker

__all__ = ["main", "run_check", "run_sweep", "default_jobs", "render_csv", "render_structured"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_SKIPPED = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt17(x):
    return format(float(x), ".17g")


def _num(x):
    return None if (x is None or (isinstance(x, float) and math.isnan(x))) else x


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------


def _sort_key(report):
    return (report.theorem_id, report.scenario, sorted(report.params.items()))


def _summary(reports):
    satisfied = sum(1 for r in reports if r.status == "checked" and r.satisfied)
    violated = sum(
        1 for r in reports
        if (r.status == "checked" and not r.satisfied) or r.status == "solver_failure"
    )
    skipped = sum(1 for r in reports if r.status in ("precondition", "parameter"))
    return {"satisfied": satisfied, "violated": violated, "skipped": skipped}


def render_csv(reports, timestamp=None):
    """Fixed-header CSV; one row per report, deterministic order."""
    reports = sorted(reports, key=_sort_key)
    param_names = sorted({name for r in reports for name in r.params})
    diag_names = sorted({name for r in reports for name in r.diagnostics})
    buffer = io.StringIO()
    if timestamp:
        buffer.write(f"# generated {timestamp}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    header = (
        ["theorem_id", "scenario"]
        + [f"param:{name}" for name in param_names]
        + ["lhs", "rhs", "margin", "satisfied"]
        + [f"diag:{name}" for name in diag_names]
    )
    writer.writerow(header)
    for r in reports:
        if r.status == "checked":
            flag = "true" if r.satisfied else "false"
            core = [_fmt17(r.lhs), _fmt17(r.rhs), _fmt17(r.margin), flag]
        else:
            core = ["", "", "", "skipped"]
        row = (
            [r.theorem_id, r.scenario]
            + [_fmt17(r.params[name]) if name in r.params else "" for name in param_names]
            + core
            + [_fmt17(r.diagnostics[name]) if name in r.diagnostics else ""
               for name in diag_names]
        )
        writer.writerow(row)
    counts = _summary(reports)
    buffer.write(f"# summary satisfied={counts['satisfied']} "
                 f"violated={counts['violated']} skipped={counts['skipped']}\n")
    return buffer.getvalue()


def render_structured(reports, timestamp=None):
    """JSON mirroring CheckReport, deterministic order, NaN as null."""
    reports = sorted(reports, key=_sort_key)
    body = []
    for r in reports:
        record = dataclasses.asdict(r)
        for key in ("lhs", "rhs", "margin", "check_tol"):
            record[key] = _num(record[key])
        body.append(record)
    payload = {
        "generated_at": timestamp,
        "reports": body,
        "summary": _summary(reports),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# scenario and parameter handling
# ---------------------------------------------------------------------------


def _resolve_scenario(token, n_flag, quad):
    """A scenario token is inline JSON, a file path, or family[:k=v,...]."""
    if token is None:
        raise UsageError("missing --scenario")
    token = token.strip()
    if token.startswith("{"):
        return load(token, spec=quad)
    if os.path.exists(token):
        return load(token, spec=quad)
    family, _, tail = token.partition(":")
    params = {}
    n = n_flag
    if tail:
        for piece in tail.split(","):
            key, _, value = piece.partition("=")
            if not value:
                raise UsageError(f"malformed scenario parameter {piece!r}")
            if key == "n":
                n = int(float(value))
            else:
                params[key] = float(value)
    if n is None:
        raise UsageError("scenario dimension required (--n or n= in the scenario spec)")
    if family not in FAMILIES:
        raise UsageError(f"unknown scenario {family!r}")
    try:
        return make_scenario(family, n, spec=quad, **params)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc


def _floats(text):
    return [float(piece) for piece in str(text).split(",") if piece != ""]


def _build_params(theorem, args):
    """Translate CLI flags into the checker's parameter dict."""

    def need(flag, value):
        if value is None:
            raise UsageError(f"theorem {theorem!r} requires --{flag}")
        return value

    p = args.p
    H = args.H
    a = args.a
    params = {}
    if theorem in ("mc_I", "vol_I", "annulus", "area_I", "doubling", "eigen"):
        params["a"] = need("a", a)
    if theorem != "volume_growth":
        params["H"] = need("H", H)
    params["p"] = need("p", p)
    if theorem in ("mc_I", "mc_II", "mc_m"):
        params["r"] = _floats(need("r", args.r))[0]
    if theorem in ("vol_I", "area_I", "vol_II", "area_II", "vol_m"):
        radii = _floats(need("r", args.r))
        params["r"] = radii[0]
        params["R"] = _floats(need("R", args.R))[0]
    if theorem == "annulus":
        inner = _floats(need("r", args.r))
        outer = _floats(need("R", args.R))
        if len(inner) != 2 or len(outer) != 2:
            raise UsageError("annulus takes --r r1,r2 and --R R1,R2")
        params.update({"r1": inner[0], "r2": inner[1], "R1": outer[0], "R2": outer[1]})
    if theorem == "doubling":
        inner = _floats(need("r", args.r))
        if len(inner) != 2:
            raise UsageError("doubling takes --r r1,r2")
        params.update({"r1": inner[0], "r2": inner[1], "R": _floats(need("R", args.R))[0]})
        params["alpha"] = need("alpha", args.alpha)
    if theorem == "eigen":
        params["R"] = _floats(need("R", args.R))[0]
        params["delta"] = need("delta", args.delta)
    if theorem == "volume_growth":
        params["R_list"] = _floats(need("R", args.R))
    if theorem in ("mc_m", "vol_m"):
        params["m"] = need("m", args.m)
    if theorem == "vol_II":
        params["k"] = need("k", args.k)
    if theorem == "area_II" and args.k is not None:
        params["k"] = args.k
    if args.policy and theorem in ("mc_I", "mc_II", "mc_m", "area_I"):
        params["policy"] = args.policy
    if args.grid_points and theorem in ("mc_I", "mc_II", "mc_m", "area_II"):
        params["grid_points"] = args.grid_points
    return params


def _apply_tol(reports, tol_scale):
    if tol_scale is None:
        return reports
    out = []
    for r in reports:
        if r.status != "checked":
            out.append(r)
            continue
        tol = tol_scale * (1.0 + abs(r.lhs) + abs(r.rhs))
        out.append(dataclasses.replace(r, check_tol=tol, satisfied=bool(r.margin >= -tol)))
    return out


# ---------------------------------------------------------------------------
# default sweep
# ---------------------------------------------------------------------------


def _p_grid(n):
    return [p for p in (2.0, 3.0, (n + 1) / 2.0 + 0.25) if p > n / 2.0]


def default_jobs(quad=DEFAULT_SPEC):
    """Curated catalog sweep: sound parameter tuples for every checker,
    plus a few deliberate hypothesis-gate and divergence skips."""
    jobs = []

    def add(space, theorem, **params):
        jobs.append((space, theorem, params))

    spaces = {}

    def get(family, n, **kw):
        key = (family, n, tuple(sorted(kw.items())))
        if key not in spaces:
            spaces[key] = make_scenario(family, n, spec=quad, **kw)
        return spaces[key]

    for n in DIMENSIONS:
        p_named = (n + 1) / 2.0 + 0.25
        p_all = _p_grid(n)
        first_kind = []
        for H in (-1.0, 0.0, 1.0):
            first_kind.append((get("model", n, H=H), H, 0.0))
            first_kind.append((get("weighted-model", n, H=H), H, 0.5))
        first_kind += [
            (get("gaussian", n), 0.0, 0.0),
            (get("gaussian", n), -1.0, 0.0),
            (get("flare", n), 0.0, 0.0),
            (get("flare", n), -1.0, 0.0),
            (get("wobble", n), 0.0, 0.1),
            (get("wobble", n), 1.0, 0.1),
            (get("bump", n), 0.0, 0.0),
            (get("bump", n), -1.0, 0.0),
        ]
        for space, H, a in first_kind:
            hi = min(space.r_max, 1.4 if H > 0 else 3.0)
            r, R = 0.4 * hi, 0.9 * hi
            for p in p_all:
                add(space, "mc_I", p=p, H=H, a=a, r=R)
                add(space, "vol_I", p=p, H=H, a=a, r=r, R=R)
            add(space, "annulus", p=p_named, H=H, a=a,
                r1=0.15 * hi, r2=0.35 * hi, R1=0.6 * hi, R2=0.95 * hi)
            add(space, "area_I", p=p_named, H=H, a=a, r=r, R=R)

        # hypothesis-gate rows: the wobble weight slope dips below zero
        add(get("wobble", n), "mc_I", p=p_named, H=0.0, a=0.0, r=1.0)

        # extended range rows on the capped profile
        capped = get("capped", n)
        add(capped, "mc_I", p=p_named, H=1.0, a=0.0, r=2.2, policy="extended")
        add(capped, "mc_II", p=min(p_all), H=1.0, r=2.2, policy="extended")
        add(capped, "area_I", p=p_named, H=1.0, a=0.0, r=1.7, R=2.6, policy="extended")
        add(capped, "mc_I", p=p_named, H=1.0, a=0.0, r=1.4)
        add(capped, "vol_I", p=p_named, H=1.0, a=0.0, r=0.5, R=1.4)

        # no-hypothesis displays (second kind); p = 3 rows exercise the
        # divergence skip for n >= 3
        second = [
            (get("gaussian", n), 0.0),
            (get("flare", n), 0.0),
            (get("wobble", n), 0.0),
            (get("bump", n), -1.0),
        ]
        for space, H in second:
            for p in p_all:
                add(space, "mc_II", p=p, H=H, r=1.5)
                add(space, "area_II", p=p, H=H, r=0.5, R=1.5)
        for space, k in ((get("bump", n), 0.5), (get("wobble", n), 0.1),
                         (get("model", n, H=0.0), 0.0)):
            p_window = 1.75 if n == 2 else n / 2.0 + 0.45
            add(space, "vol_II", p=p_window, H=0.0, k=k, r=0.5, R=1.5)
            add(space, "area_II", p=p_window, H=0.0, r=0.5, R=1.5, k=k)

        # effective-dimension comparisons
        for space, H in ((get("gaussian", n), 0.0), (get("flare", n), -1.0),
                         (get("bump", n), 0.0)):
            p_m = (n + 1.0) / 2.0 + 0.75
            add(space, "mc_m", m=1.0, p=p_m, H=H, r=1.2)
            add(space, "vol_m", m=1.0, p=p_m, H=H, r=0.5, R=1.5)
            add(space, "vol_m", m=2.0, p=(n + 2.0) / 2.0 + 0.75, H=H, r=0.5, R=1.5)

        # doubling with per-scenario slack
        add(get("model", n, H=0.0), "doubling", alpha=1.1, p=p_named, H=0.0, a=0.0,
            r1=0.5, r2=1.0, R=2.0)
        add(get("weighted-model", n, H=-1.0), "doubling", alpha=1.1, p=p_named, H=-1.0,
            a=0.5, r1=0.5, r2=1.0, R=2.0)
        add(get("gaussian", n), "doubling", alpha=1.1, p=p_named, H=0.0, a=0.0,
            r1=0.5, r2=1.0, R=2.0)
        add(get("wobble", n, eps=0.01), "doubling", alpha=1.1, p=p_named, H=0.0, a=0.01,
            r1=0.5, r2=1.0, R=2.0)
        add(get("bump", n), "doubling", alpha=1.1, p=p_named, H=0.0, a=0.0,
            r1=0.5, r2=1.0, R=2.0)
        add(get("flare", n), "doubling", alpha=2.0, p=p_named, H=0.0, a=0.0,
            r1=0.5, r2=1.0, R=2.0)

        # applications
        add(get("model", n, H=1.0), "eigen", p=p_named, H=1.0, a=0.0, R=1.2, delta=0.1)
        add(get("weighted-model", n, H=0.0), "eigen", p=p_named, H=0.0, a=0.5, R=2.0,
            delta=0.1)
        add(get("gaussian", n), "eigen", p=p_named, H=0.0, a=0.0, R=2.0, delta=0.1)
        add(get("wobble", n, eps=0.01), "eigen", p=p_named, H=0.0, a=0.01, R=2.0,
            delta=0.1)
        for family in ("model", "gaussian", "flare", "bump"):
            space = get(family, n, H=0.0) if family == "model" else get(family, n)
            add(space, "volume_growth", p=p_named, R_list=[2.0, 2.5])
        add(get("wobble", n), "volume_growth", p=p_named, R_list=[2.0])
    return jobs


def _iter_config_jobs(config, quad):
    """Jobs from a config mapping: an explicit job list and/or the
    scenarios x theorems x grids cross product."""
    for job in config.get("jobs", ()):
        scenario = job["scenario"]
        if isinstance(scenario, dict):
            space = load(scenario, spec=quad)
        else:
            space = _resolve_scenario(str(scenario), None, quad)
        yield space, job["theorem"], dict(job.get("params", {}))

    scenario_tokens = config.get("scenarios", ())
    theorems = config.get("theorems", ())
    grids = config.get("grids", {})
    if scenario_tokens and theorems:
        spaces = [
            load(token, spec=quad) if isinstance(token, dict)
            else _resolve_scenario(str(token), None, quad)
            for token in scenario_tokens
        ]
        for theorem in theorems:
            if theorem not in CHECKERS:
                raise UsageError(f"unknown theorem id {theorem!r}")
            _, required, _ = CHECKERS[theorem]
            missing = [name for name in required if name not in grids]
            if missing:
                raise UsageError(f"grids missing {missing} for theorem {theorem!r}")
            tuples = [{}]
            for name in required:
                values = grids[name]
                if name == "R_list":
                    values = [values] if not isinstance(values[0], list) else values
                tuples = [dict(t, **{name: v}) for t in tuples for v in values]
            for space in spaces:
                for params in tuples:
                    yield space, theorem, params


def _run_jobs(jobs, quad, tol_scale):
    reports = []
    failures = 0
    for space, theorem, params in jobs:
        try:
            batch = run_checker(theorem, space, quad=quad, **params)
        except (ParameterError, InvariantViolation) as exc:
            reports.append(CheckReport(
                theorem, space.name,
                {k: float(v) for k, v in params.items()
                 if isinstance(v, (int, float)) and k != "grid_points"},
                math.nan, math.nan, math.nan, None, math.nan, {},
                status="parameter", reason=str(exc),
            ))
            continue
        except (SolverError, QuadratureError) as exc:
            reports.append(CheckReport(
                theorem, space.name,
                {k: float(v) for k, v in params.items()
                 if isinstance(v, (int, float)) and k != "grid_points"},
                math.nan, math.nan, math.nan, False, math.nan, {},
                status="solver_failure", reason=str(exc),
            ))
            failures += 1
            continue
        reports.extend(_apply_tol(batch, tol_scale))
    return reports, failures


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def _build_argparser():
    parser = _Parser(prog="curvcomp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "structured"), default="csv")
        p.add_argument("--strict", action="store_true")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--grid-points", dest="grid_points", type=int, default=None)
        p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)

    check = sub.add_parser("check", help="run one theorem check")
    common(check)
    check.add_argument("--scenario", required=True)
    check.add_argument("--theorem", required=True)
    check.add_argument("--n", type=int, default=None)
    check.add_argument("--p", type=float, default=None)
    check.add_argument("--H", type=float, default=None)
    check.add_argument("--a", type=float, default=None)
    check.add_argument("--r", default=None)
    check.add_argument("--R", default=None)
    check.add_argument("--m", type=float, default=None)
    check.add_argument("--k", type=float, default=None)
    check.add_argument("--alpha", type=float, default=None)
    check.add_argument("--delta", type=float, default=None)
    check.add_argument("--policy", choices=("standard", "extended"), default=None)

    sweep = sub.add_parser("sweep", help="run a parameter sweep")
    common(sweep)
    sweep.add_argument("--config", default=None)
    return parser


def _quad_from(args, config=None):
    overrides = {}
    tolerances = (config or {}).get("tolerances", {})
    for key in ("abs_tol", "rel_tol", "max_depth", "pole_cutoff"):
        if tolerances.get(key) is not None:
            overrides[key] = tolerances[key]
    if getattr(args, "abs_tol", None) is not None:
        overrides["abs_tol"] = args.abs_tol
    if getattr(args, "rel_tol", None) is not None:
        overrides["rel_tol"] = args.rel_tol
    return QuadratureSpec(**overrides) if overrides else DEFAULT_SPEC


def _finish(reports, failures, args):
    timestamp = datetime.now(timezone.utc).isoformat()
    render = render_csv if args.format == "csv" else render_structured
    _emit(render(reports, timestamp=timestamp), args.out)
    counts = _summary(reports)
    if failures or counts["violated"]:
        return EXIT_VIOLATION
    if counts["skipped"] and args.strict:
        return EXIT_SKIPPED
    return EXIT_OK


def run_check(argv):
    """Single-check entry point; returns the process exit code."""
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
        if args.command != "check":
            raise UsageError("run_check handles the check command")
        quad = _quad_from(args)
        space = _resolve_scenario(args.scenario, args.n, quad)
        if args.theorem not in CHECKERS:
            raise UsageError(f"unknown theorem id {args.theorem!r}")
        params = _build_params(args.theorem, args)
        reports = run_checker(args.theorem, space, quad=quad, **params)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, InvariantViolation) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, QuadratureError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    reports = _apply_tol(reports, args.tol)
    for r in sorted(reports, key=_sort_key):
        if r.status == "checked":
            flag = "satisfied" if r.satisfied else "VIOLATED"
            print(f"{r.theorem_id}  {r.scenario}  lhs={_fmt17(r.lhs)} "
                  f"rhs={_fmt17(r.rhs)} margin={_fmt17(r.margin)}  {flag}")
        else:
            print(f"{r.theorem_id}  {r.scenario}  skipped: {r.reason}")
    return _finish(reports, 0, args)


def run_sweep(argv):
    """Sweep entry point; returns the process exit code."""
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
        if args.command != "sweep":
            raise UsageError("run_sweep handles the sweep command")
        config = {}
        if args.config:
            with open(args.config, "r", encoding="utf-8") as handle:
                config = json.load(handle)
        quad = _quad_from(args, config)
        tol_scale = args.tol if args.tol is not None else config.get(
            "tolerances", {}).get("check_tol")
        if args.config:
            jobs = list(_iter_config_jobs(config, quad))
            if not jobs:
                raise UsageError("config produced no jobs")
        else:
            jobs = default_jobs(quad)
        out = args.out or config.get("output", {}).get("path")
        fmt = config.get("output", {}).get("format")
        if fmt and args.format == "csv":
            args.format = fmt
        if out and not args.out:
            args.out = out
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, InvariantViolation) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports, failures = _run_jobs(jobs, quad, tol_scale)
    return _finish(reports, failures, args)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if argv and argv[0] == "check":
        return run_check(argv)
    if argv and argv[0] == "sweep":
        return run_sweep(argv)
    parser = _build_argparser()
    try:
        parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
