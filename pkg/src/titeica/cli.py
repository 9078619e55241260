"""Command-line entry point: ``titeica verify|surface|eval``.

Reports are JSON on stdout (or ``--out`` for verify).  Exit codes: 0 all
checks pass, 1 a check failed or the point is outside a solution's domain,
2 configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time

import numpy as np

from . import checks as C
from . import jets as J
from . import pde, solutions as sol, surface as surf
from .jets import JetDomainError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# allowed config keys per section, with their types
CONFIG_SCHEMA = {
    "verify": {
        "seed": int,
        "n_points": int,
        "n_jets": int,
        "n_fields": int,
        "eps": float,
        "tol_identity": float,
        "tol_solution": float,
        "tol_integration": float,
        "tol_spread": float,
    },
    "surface": {"nu": int, "nv": int, "du": float, "dv": float, "u0": float, "v0": float, "c": float, "tol_spread": float},
    "eval": {"c1": float, "order": int},
}


class ConfigError(Exception):
    pass


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    parser = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out: dict = {}
    for section in parser.sections():
        if section not in CONFIG_SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        schema = CONFIG_SCHEMA[section]
        for key, raw in parser.items(section):
            if key not in schema:
                raise ConfigError(f"unknown config key {section}.{key}")
            try:
                out.setdefault(section, {})[key] = schema[key](raw)
            except ValueError:
                raise ConfigError(f"bad value for {section}.{key}: {raw!r}") from None
    return out


def resolve_seed(flag: int | None, cfg: dict) -> int:
    if flag is not None:
        return flag
    if "seed" in cfg:
        return cfg["seed"]
    env = os.environ.get("TITEICA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"TITEICA_SEED must be an integer, got {env!r}") from None
    return 0


def _merge(args, section: dict, keys) -> dict:
    """Flag values win over config values; None flags fall through."""
    out = {}
    for k in keys:
        v = getattr(args, k, None)
        if v is None:
            v = section.get(k)
        if v is not None:
            out[k] = v
    return out


def build_report(command: str, echo: dict, checks: list, t0: float, extra: dict | None = None) -> dict:
    passed = sum(c.passed for c in checks)
    report = {
        "command": command,
        "config_echo": echo,
        "checks": [c.as_dict() for c in checks],
        "summary": {"passed": passed, "failed": len(checks) - passed},
    }
    if extra:
        report["result"] = extra
    report["timing_ms"] = round(1000.0 * (time.perf_counter() - t0), 3)
    return report


def render(report: dict, pretty: bool) -> str:
    if not pretty:
        return json.dumps(report, indent=2)
    lines = [f"{report['command']}"]
    width = max((len(c["name"]) for c in report["checks"]), default=4)
    for c in report["checks"]:
        flag = "PASS" if c["pass"] else "FAIL"
        lines.append(f"  {flag}  {c['name']:<{width}}  max {c['max_defect']:.3e}  tol {c['tolerance']:.0e}  n={c['n_samples']}")
    s = report["summary"]
    lines.append(f"passed {s['passed']}, failed {s['failed']}  ({report['timing_ms']:.0f} ms)")
    if "result" in report:
        lines.append(json.dumps(report["result"], indent=2))
    return "\n".join(lines)


def emit(report: dict, args, path: str | None = None) -> int:
    text = render(report, args.pretty)
    if path:
        try:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"error: cannot write {path}: {exc}", file=sys.stderr)
            return EXIT_FAIL
    else:
        print(text)
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_FAIL


# -- commands ----------------------------------------------------------------------


def cmd_verify(args, cfg: dict) -> int:
    t0 = time.perf_counter()
    section = cfg.get("verify", {})
    keys = [k for k in CONFIG_SCHEMA["verify"] if k != "seed"]
    settings = _merge(args, section, keys)
    settings["seed"] = resolve_seed(args.seed, section)
    checks = C.run_suite(args.suite, C.Settings(**settings))
    report = build_report(f"verify {args.suite}", {"suite": args.suite, **settings}, checks, t0)
    return emit(report, args, args.out)


def cmd_surface(args, cfg: dict) -> int:
    t0 = time.perf_counter()
    if args.export and not args.out:
        raise ConfigError("--export needs --out")
    section = cfg.get("surface", {})
    opts = _merge(args, section, CONFIG_SCHEMA["surface"])
    _, _, default = surf.surface_preset(args.frame)
    grid = surf.GridSpec(
        opts.get("u0", default.u0),
        opts.get("v0", default.v0),
        opts.get("nu", default.nu),
        opts.get("nv", default.nv),
        opts.get("du", default.du),
        opts.get("dv", default.dv),
    )
    obj, ics, grid = surf.surface_preset(args.frame, grid, C=opts.get("c", 1.0))
    if ics is None:
        S = surf.sample_surface(obj, grid)
        tol = opts.get("tol_spread", C.TOL_SOLUTION)
    else:
        S = surf.integrate_surface(obj, ics, grid)
        tol = opts.get("tol_spread", C.TOL_SPREAD)
    rep = surf.geometry(S)
    checks = [C.make_check("I-spread", "centroaffine invariant K/d^4 is constant", rep.spread_I, tol)]
    if ics is not None:
        checks.append(C.make_check("asymptotic", "asymptotic-line parametrization", surf.asymptotic_defect(rep), C.TOL_INTEGRATION))
    f = S.triple
    result = {**rep.summary(), "triple_product_sign": int(np.sign(f.flat[0])), "nodes": grid.nu * grid.nv}
    if args.export:
        surf.export_mesh(S, args.export, args.out, rep)
        result["mesh"] = str(args.out)
    echo = {"frame": args.frame, "export": args.export, **{k: getattr(grid, k) for k in ("u0", "v0", "nu", "nv", "du", "dv")}}
    report = build_report(f"surface {args.frame}", echo, checks, t0, result)
    return emit(report, args)


def _jet_entries(jet) -> dict:
    return {f"d{i}{j}": float(jet[(i, j)]) for (i, j) in J.multi_indices(jet.order)}


def cmd_eval(args, cfg: dict) -> int:
    t0 = time.perf_counter()
    section = cfg.get("eval", {})
    opts = _merge(args, section, CONFIG_SCHEMA["eval"])
    order = opts.get("order", 2)
    if order < 2 or order > 3:
        raise ConfigError("--order must be 2 or 3")
    if args.solution == "titeica-sinh":
        h, kinds = sol.titeica_sinh(opts.get("c1", 0.0)), (pde.TITEICA_H, pde.TITEICA_OMEGA)
    elif args.solution == "titeica-const":
        h, kinds = sol.titeica_constant(), (pde.TITEICA_H, pde.TITEICA_OMEGA)
    else:
        args.preset = args.preset or "identity"
        if args.preset not in sol.LIOUVILLE_PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}")
        h = sol.liouville_general(*sol.LIOUVILLE_PRESETS[args.preset]())
        kinds = (pde.LIOUVILLE_H, pde.LIOUVILLE_OMEGA)
    try:
        hj = h.eval(args.u, args.v, order)
        wj = J.log(hj)
    except JetDomainError as exc:
        print(f"error: ({args.u}, {args.v}) is outside the domain of {args.solution}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    res_h = pde.residual_scalar(kinds[0], hj)
    res_w = pde.residual_scalar(kinds[1], wj)
    checks = [
        C.make_check(f"residual-{kinds[0].name}", "closed-form solution residual", res_h, C.TOL_SOLUTION),
        C.make_check(f"residual-{kinds[1].name}", "closed-form solution residual", res_w, C.TOL_SOLUTION),
    ]
    result = {
        "u": args.u,
        "v": args.v,
        "h": float(hj.value),
        "omega": float(wj.value),
        "residual_h": float(res_h),
        "residual_omega": float(res_w),
        "h_jet": _jet_entries(hj),
    }
    echo = {"solution": args.solution, **({"preset": args.preset} if args.preset else {}), "u": args.u, "v": args.v, **opts}
    report = build_report(f"eval {args.solution}", echo, checks, t0, result)
    return emit(report, args)


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file with [verify]/[surface]/[eval] sections")
    common.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")

    p = argparse.ArgumentParser(prog="titeica", description="Verify Titeica-surface formulas numerically.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=[*C.SUITES, "all"])
    v.add_argument("--seed", type=int, help="seed for random batteries (fallback: TITEICA_SEED)")
    v.add_argument("--eps", type=float, help="group parameter for the adjoint table")
    v.add_argument("--n-points", dest="n_points", type=int)
    v.add_argument("--n-jets", dest="n_jets", type=int)
    v.add_argument("--n-fields", dest="n_fields", type=int)
    for name in ("identity", "solution", "integration", "spread"):
        v.add_argument(f"--tol-{name}", dest=f"tol_{name}", type=float)
    v.add_argument("--out", help="write the report here instead of stdout")

    s = sub.add_parser("surface", parents=[common], help="integrate a surface and report K/d^4")
    s.add_argument("frame", choices=["nonruled-sinh", "nonruled-const", "ruled-liouville", "hyperbolic"])
    for name, typ in (("nu", int), ("nv", int), ("du", float), ("dv", float), ("u0", float), ("v0", float)):
        s.add_argument(f"--{name}", type=typ)
    s.add_argument("--c", type=float, help="constant C of xyz = C (hyperbolic preset)")
    s.add_argument("--tol-spread", dest="tol_spread", type=float)
    s.add_argument("--export", choices=["obj", "csv"])
    s.add_argument("--out", help="mesh output path (required with --export)")

    e = sub.add_parser("eval", parents=[common], help="evaluate a closed-form solution at a point")
    e.add_argument("solution", choices=["titeica-sinh", "titeica-const", "liouville-general"])
    e.add_argument("--preset", help="Liouville preset (default identity): " + ", ".join(sol.LIOUVILLE_PRESETS))
    e.add_argument("--u", type=float, required=True)
    e.add_argument("--v", type=float, required=True)
    e.add_argument("--c1", type=float)
    e.add_argument("--order", type=int)
    return p


COMMANDS = {"verify": cmd_verify, "surface": cmd_surface, "eval": cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](args, cfg)
    except (surf.SurfaceError, pde.FrameIncompatibleError, JetDomainError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
