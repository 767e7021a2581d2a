"""Command-line front end.

Subcommands: constants, verify-inequalities, verify-hardy, superharmonicity,
expedient, asymptotics, sharp-search, eigen-bounds.  Exit code 0 means every
check in the invocation passed, 1 means at least one failed, 2 means the
configuration was rejected.  Output (JSON or CSV) is deterministic for a
fixed argv + config + seed: timing never enters the payload and floats are
printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

from . import geometry, verify
from .constants import FORMULAS, compute_bundle
from .functions import function_from_json
from .geometry import Params
from .pointwise import run_inequality_suite
from .quadrature import QuadratureSpec

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


class ConfigError(Exception):
    pass


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return x


def _dump_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _dump_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])
    return buf.getvalue()


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_plot(path: str | None, rows, header: str) -> None:
    if not path:
        return
    with open(path, "w") as fh:
        fh.write(f"# {header}\n")
        for x, y in rows:
            fh.write(f"{_fmt(float(x))} {_fmt(float(y))}\n")


def _load_config(path: str) -> dict:
    try:
        raw = open(path, "rb").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    if path.endswith(".toml"):
        try:
            return tomllib.loads(raw.decode())
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}")
    try:
        return json.loads(raw.decode())
    except json.JSONDecodeError:
        try:
            return tomllib.loads(raw.decode())
        except tomllib.TOMLDecodeError:
            raise ConfigError(f"{path} is neither valid JSON nor TOML")


def _require_keys(cfg: dict, required, optional=(), where="config") -> None:
    missing = [k for k in required if k not in cfg]
    if missing:
        raise ConfigError(f"{where}: missing required keys {missing}")
    unknown = sorted(set(cfg) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")


_SPEC_KEYS = {"method", "outer_samples", "inner_samples", "near_radius",
              "far_radius", "grid_points_per_axis", "target_rel_error"}


def _spec_from(cfg: dict, seed: int) -> QuadratureSpec:
    block = cfg.get("quadrature", {})
    unknown = sorted(set(block) - _SPEC_KEYS)
    if unknown:
        raise ConfigError(f"quadrature: unknown keys {unknown}")
    try:
        return QuadratureSpec(seed=seed, **block)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"quadrature: {exc}")


def _seed_of(cfg: dict) -> int:
    if "seed" not in cfg:
        raise ConfigError("seed is mandatory for Monte Carlo commands")
    return int(cfg["seed"])


def _body_of(cfg: dict):
    try:
        return geometry.body_from_json(cfg["body"])
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"body: {exc}")


def _reports_payload(reports):
    return [r.canonical_dict() for r in reports]


def _emit_reports(reports, args) -> int:
    if getattr(args, "format", "json") == "csv":
        text = _dump_csv([r.csv_row() for r in reports], verify.CSV_COLUMNS)
    else:
        text = _dump_json(_reports_payload(reports))
    _write(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


# -- subcommand handlers -------------------------------------------------------

def _cmd_constants(args) -> int:
    bundle = compute_bundle(args.dim, args.p, args.c3)
    data = bundle.as_dict()
    data["provenance"] = FORMULAS
    if args.format == "csv":
        rows = [{"name": k, "value": v} for k, v in bundle.as_dict().items()]
        text = _dump_csv(rows, ("name", "value"))
    else:
        text = _dump_json(data)
    _write(text, args.out)
    return EXIT_OK


def _cmd_verify_inequalities(args) -> int:
    p_values = [float(t) for t in args.p.split(",")]
    stats = run_inequality_suite(p_values, args.samples, args.seed)
    results = [{"inequality": st.inequality, "p": st.p, "samples": st.samples,
                "violations": st.violations,
                "worst_relative_residual": st.worst_relative_residual}
               for st in stats]
    ok = all(st.violations == 0 for st in stats)
    payload = {"p_values": p_values, "samples": args.samples, "seed": args.seed,
               "results": results, "all_passed": ok}
    if args.format == "csv":
        text = _dump_csv(results, ("inequality", "p", "samples", "violations",
                                   "worst_relative_residual"))
    else:
        text = _dump_json(payload)
    _write(text, args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_verify_hardy(args) -> int:
    cfg = _load_config(args.config)
    _require_keys(cfg, ("body", "family", "s_grid", "p_grid", "seed"),
                  ("quadrature", "c3"), "verify-hardy config")
    body = _body_of(cfg)
    family = [function_from_json(f, body) for f in cfg["family"]]
    spec = _spec_from(cfg, _seed_of(cfg))
    reports = verify.verify_hardy_campaign(body, family, cfg["s_grid"], cfg["p_grid"],
                                           spec, C3_choice=float(cfg.get("c3", 2.0)),
                                           threads=args.threads)
    _write_plot(args.plot_data, [(i, r.sigma_margin) for i, r in enumerate(reports)],
                "cell_index sigma_margin")
    return _emit_reports(reports, args)


def _points_from(cfg: dict, body) -> list:
    quantiles = cfg.get("depth_quantiles", (0.1, 0.3, 0.5, 0.7, 0.9))
    return verify.depth_quantile_points(body, quantiles)


def _cmd_superharmonicity(args) -> int:
    cfg = _load_config(args.config)
    _require_keys(cfg, ("body", "p", "s", "seed"),
                  ("quadrature", "eps_factors", "depth_quantiles"),
                  "superharmonicity config")
    body = _body_of(cfg)
    params = Params(N=body.dim, p=float(cfg["p"]), s=float(cfg["s"]))
    spec = _spec_from(cfg, _seed_of(cfg))
    points = _points_from(cfg, body)
    eps_factors = cfg.get("eps_factors", (1e-1, 1e-2, 1e-3))
    if isinstance(body, geometry.HalfSpace):
        reports = verify.verify_halfspace_harmonicity(body, points, params, spec,
                                                      eps_factors, threads=args.threads)
    else:
        reports = verify.verify_superharmonicity(body, points, eps_factors, params,
                                                 spec, threads=args.threads)
    rows = [(t["eps"], t["value"]) for r in reports for t in r.computed["trace"]]
    _write_plot(args.plot_data, rows, "eps operator_value")
    return _emit_reports(reports, args)


def _cmd_expedient(args) -> int:
    cfg = _load_config(args.config)
    _require_keys(cfg, ("body", "p", "s", "seed"),
                  ("quadrature", "depth_quantiles"), "expedient config")
    body = _body_of(cfg)
    params = Params(N=body.dim, p=float(cfg["p"]), s=float(cfg["s"]))
    spec = _spec_from(cfg, _seed_of(cfg))
    reports = verify.verify_expedient(body, _points_from(cfg, body), params, spec,
                                      threads=args.threads)
    _write_plot(args.plot_data,
                [(r.computed["depth"], r.margin) for r in reports], "depth margin")
    return _emit_reports(reports, args)


def _cmd_asymptotics(args) -> int:
    cfg = _load_config(args.config)
    _require_keys(cfg, ("function", "p", "seed"),
                  ("quadrature", "direction", "s_to_1", "s_to_0"),
                  "asymptotics config")
    u = function_from_json(cfg["function"])
    spec = _spec_from(cfg, _seed_of(cfg))
    direction = cfg.get("direction", "both")
    reports = []
    if direction in ("s_to_1", "both"):
        reports.append(verify.verify_asymptotics_s_to_1(
            u, float(cfg["p"]), cfg.get("s_to_1", (0.9, 0.95, 0.99)), spec,
            threads=args.threads))
    if direction in ("s_to_0", "both"):
        reports.append(verify.verify_asymptotics_s_to_0(
            u, float(cfg["p"]), cfg.get("s_to_0", (0.1, 0.05, 0.02)), spec,
            threads=args.threads))
    if not reports:
        raise ConfigError(f"direction must be s_to_1, s_to_0 or both, got {direction!r}")
    rows = [(s, d) for r in reports
            for s, d in zip(r.computed["s_sequence"], r.computed["deviations"])]
    _write_plot(args.plot_data, rows, "s relative_deviation")
    return _emit_reports(reports, args)


def _cmd_sharp_search(args) -> int:
    cfg = _load_config(args.config)
    _require_keys(cfg, ("body", "p", "s", "seed"),
                  ("quadrature", "budget", "c3"), "sharp-search config")
    body = _body_of(cfg)
    params = Params(N=body.dim, p=float(cfg["p"]), s=float(cfg["s"]))
    spec = _spec_from(cfg, _seed_of(cfg))
    family = verify.BumpFamily(body)
    best, info = verify.estimate_sharp_constant(
        body, params, family, int(cfg.get("budget", 90)), spec,
        C3_choice=float(cfg.get("c3", 2.0)), threads=args.threads)
    payload = {"best": best, "curly_C": info["curly_C"], "theta": info["theta"],
               "evaluations": info["evaluations"],
               "empirical_gap_factor": best / info["curly_C"],
               "passed": info["best_not_below_bound"], "seed": spec.seed}
    _write(_dump_json(payload), args.out)
    return EXIT_OK if payload["passed"] else EXIT_CHECK_FAILED


def _cmd_eigen_bounds(args) -> int:
    cfg = _load_config(args.config)
    _require_keys(cfg, ("body", "p", "s", "seed"),
                  ("quadrature", "budget", "c3"), "eigen-bounds config")
    body = _body_of(cfg)
    params = Params(N=body.dim, p=float(cfg["p"]), s=float(cfg["s"]))
    spec = _spec_from(cfg, _seed_of(cfg))
    lower = verify.eigenvalue_lower_bound(body, params, float(cfg.get("c3", 2.0)))
    family = verify.BumpFamily(body)
    upper, info = verify.eigenvalue_upper_bound(body, params, family,
                                                int(cfg.get("budget", 60)), spec,
                                                threads=args.threads)
    passed = bool(upper >= lower)
    payload = {"lower_bound": lower, "upper_bound": upper,
               "evaluations": info["evaluations"], "passed": passed,
               "seed": spec.seed}
    _write(_dump_json(payload), args.out)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frachardy",
        description="Numerical verification of the fractional Hardy inequality on convex sets")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, config=True):
        sp.add_argument("--out", default=None, help="write output here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--plot-data", default=None,
                        help="write gnuplot-ready two-column data here")
        if config:
            sp.add_argument("--config", required=True, help="JSON or TOML campaign file")

    sp = sub.add_parser("constants", help="explicit constant table for one (N, p)")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--c3", type=float, default=2.0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_constants)

    sp = sub.add_parser("verify-inequalities", help="randomized pointwise inequality suite")
    sp.add_argument("--p", required=True, help="comma-separated p values")
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=_cmd_verify_inequalities)

    for name, func, helptext in (
        ("verify-hardy", _cmd_verify_hardy, "Hardy quotient campaign over (u, s, p) cells"),
        ("superharmonicity", _cmd_superharmonicity, "truncated operator traces at interior points"),
        ("expedient", _cmd_expedient, "restricted kernel integral lower bound"),
        ("asymptotics", _cmd_asymptotics, "seminorm limits for s near 0 and 1"),
        ("sharp-search", _cmd_sharp_search, "empirical sharp-constant search"),
        ("eigen-bounds", _cmd_eigen_bounds, "eigenvalue sandwich from the Hardy bound"),
    ):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.set_defaults(func=func)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
