"""Command-line front end: ``reparam <derivative|solve|lorenz|pde|verify>``.

Exit codes: 0 success, 1 numerical failure (solver, quadrature, tolerance or
failed check), 2 invalid arguments or configuration.

Every subcommand accepts ``--config FILE.json`` whose keys are option names
(``h_caputo`` or ``h-caputo``); explicit flags override the file and unknown
keys are rejected. ``REPARAM_SEED`` is reserved for future stochastic
components and currently ignored.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analytic, checks
from .analytic import PROFILES, DampedWaveProblem, HeatProblem
from .catalog import FUNCTION_NAMES, function
from .conformable import ClassicalIVP, ConformableIVP, conf_derivative_limit, conf_derivative_product, pull_back
from .errors import ConvergenceError, DomainError, ReparamError
from .io import write_json, write_table_csv
from .solvers import (
    CaputoIVP,
    Method,
    SolverConfig,
    integrate_caputo_abm,
    integrate_classical,
    integrate_conformable_direct,
)
from .systems import DEFAULT_IC, LorenzParams, run_three_way
from .weights import WeightSpec, phi, phi_inverse, psi

log = logging.getLogger("reparam")

KINDS = ("power", "exp", "gamma")
EPILOG = "REPARAM_SEED is reserved and currently unused (no stochastic components)."


class ConfigError(Exception):
    pass


def _alpha(text) -> float:
    try:
        a = float(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"alpha must be a number in (0, 1], got {text!r}") from None
    if not (0.0 < a <= 1.0):
        raise argparse.ArgumentTypeError(f"alpha must lie in the range (0, 1], got {a:g}")
    return a


def _positive(text) -> float:
    v = float(text)
    if not (v > 0.0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def parse_grid(text) -> np.ndarray:
    """``a:b:n`` for ``n`` evenly spaced points, ``v1,v2,...`` for a list, or one value."""
    if isinstance(text, (int, float)):
        return np.array([float(text)])
    if isinstance(text, (list, tuple)):
        return np.array([float(v) for v in text])
    s = str(text).strip()
    try:
        if ":" in s:
            a, b, n = s.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return np.linspace(float(a), float(b), n)
        return np.array([float(v) for v in s.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use a:b:n, a comma list or a number") from None


def _triple(text) -> tuple[float, float, float]:
    vals = parse_grid(text)
    if vals.size != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
    return tuple(float(v) for v in vals)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with option defaults")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def _add_weight(p: argparse.ArgumentParser, alpha_default: float = 0.9) -> None:
    p.add_argument("--alpha", type=_alpha, default=alpha_default, help="order in (0, 1]")
    p.add_argument("--kind", choices=KINDS, default="power", help="weight family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reparam",
        description="Conformable derivatives as time reparametrization, with a Caputo solver for contrast.",
        epilog=EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derivative", help="limit vs product form of the conformable derivative", epilog=EPILOG)
    _add_common(d)
    _add_weight(d, 0.5)
    d.add_argument("--fn", choices=FUNCTION_NAMES, default="sin")
    d.add_argument("--t", type=parse_grid, default=parse_grid("0.1:5:200"), help="time grid")
    d.add_argument("--tol", type=_positive, default=1e-6, help="relative agreement tolerance")
    d.set_defaults(handler=cmd_derivative)

    s = sub.add_parser("solve", help="scalar or second-order test problem by a chosen route", epilog=EPILOG)
    _add_common(s)
    _add_weight(s, 0.5)
    s.add_argument("--problem", choices=("exp", "ex1"), default="exp",
                   help="exp: D y = rate*y, y(0)=1; ex1: D^2 y - 3 D y + 2 y = 0, C1 = C2 = 1")
    s.add_argument("--method", choices=("direct", "pullback", "caputo"), default="pullback")
    s.add_argument("--rate", type=float, default=1.0)
    s.add_argument("--t-end", type=_positive, default=4.0)
    s.add_argument("--solver", choices=("rk45", "rk4"), default="rk45")
    s.add_argument("--h", type=_positive, default=1e-3, help="RK4 or ABM step")
    s.add_argument("--tol", type=_positive, default=1e-10, help="RK45 abs and rel tolerance")
    s.add_argument("--offset", type=float, default=1e-2, help="direct-solve start offset")
    s.add_argument("--backend", choices=("python", "compiled"))
    s.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    s.set_defaults(handler=cmd_solve)

    lz = sub.add_parser("lorenz", help="classical, conformable and Caputo Lorenz runs", epilog=EPILOG)
    _add_common(lz)
    _add_weight(lz, 0.9)
    lz.add_argument("--mode", choices=("all", "classical", "conformable", "caputo"), default="all")
    lz.add_argument("--horizon", type=_positive, default=5.0, help="final original time t")
    lz.add_argument("--sigma", type=_positive, default=10.0)
    lz.add_argument("--rho", type=_positive, default=28.0)
    lz.add_argument("--beta", type=_positive, default=8.0 / 3.0)
    lz.add_argument("--x0", type=_triple, default=DEFAULT_IC, help="initial state x,y,z")
    lz.add_argument("--tol", type=_positive, default=1e-10, help="RK45 abs and rel tolerance")
    lz.add_argument("--offset", type=float, default=1e-2, help="direct-solve start offset")
    lz.add_argument("--h-caputo", type=_positive, default=1e-3)
    lz.add_argument("--tolerance", type=_positive, default=1e-3, help="equivalence tolerance")
    lz.add_argument("--backend", choices=("python", "compiled"))
    lz.add_argument("--out", type=Path, default=Path("."), help="output directory")
    lz.set_defaults(handler=cmd_lorenz)

    pd = sub.add_parser("pde", help="closed-form heat, Burgers or damped-wave solution on a grid", epilog=EPILOG)
    _add_common(pd)
    pd.add_argument("problem", choices=("heat", "burgers", "wave"))
    _add_weight(pd, 1.0)
    pd.add_argument("--init", choices=tuple(PROFILES), default="gaussian", help="initial profile f")
    pd.add_argument("--velocity", choices=tuple(PROFILES), default="zero", help="wave initial velocity g")
    pd.add_argument("--nu", type=_positive, default=1.0)
    pd.add_argument("--beta", type=_positive, default=0.5)
    pd.add_argument("--c", type=_positive, default=1.0)
    pd.add_argument("--x", type=parse_grid, default=parse_grid("-2:2:21"))
    pd.add_argument("--t", type=parse_grid, default=parse_grid("0.5:2:4"))
    pd.add_argument("--verify", action="store_true", help="also check the PDE residual on the grid")
    pd.add_argument("--out", type=Path, help="CSV path (default: stdout)")
    pd.set_defaults(handler=cmd_pde)

    vf = sub.add_parser("verify", help="run invariant suites", epilog=EPILOG)
    _add_common(vf)
    which = vf.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true")
    which.add_argument("--suite", choices=tuple(checks.SUITES))
    vf.add_argument("--json", type=Path, help="write results to this file")
    vf.set_defaults(handler=cmd_verify)

    parser._subcommands = sub.choices  # noqa: SLF001
    return parser


# -- config handling -----------------------------------------------------------

def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    try:
        data = json.loads(args.config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    sub = parser._subcommands[args.command]  # noqa: SLF001
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config", "handler")}  # noqa: SLF001
    defaults = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest not in actions:
            raise ConfigError(f"unknown config key {key!r} for '{args.command}'")
        act = actions[dest]
        if act.type is not None and not isinstance(value, bool):
            try:
                value = act.type(value)
            except (argparse.ArgumentTypeError, ValueError, TypeError) as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from None
        if act.choices is not None and value not in act.choices:
            raise ConfigError(f"config key {key!r} must be one of {', '.join(map(str, act.choices))}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# -- commands ------------------------------------------------------------------

def cmd_derivative(args) -> int:
    spec = WeightSpec.from_name(args.kind, args.alpha)
    f = function(args.fn, args.alpha)
    ok = True
    print("t,limit,product,abs_diff")
    for t in args.t:
        t = float(t)
        if t < 0.0:
            raise DomainError("derivative grid must be >= 0")
        lim = conf_derivative_limit(f, spec, t)
        try:
            prod = float(conf_derivative_product(f, spec, t)) if t > 0.0 else math.nan
        except (DomainError, ZeroDivisionError):
            prod = math.nan
        diff = abs(lim - prod)
        if math.isfinite(prod) and diff > args.tol * max(1.0, abs(prod)):
            ok = False
        print(f"{t:.17g},{lim:.17g},{prod:.17g},{diff:.3e}")
    return 0 if ok else 1


def _solver_cfg(args) -> SolverConfig:
    method = Method.RK4 if getattr(args, "solver", "rk45") == "rk4" else Method.RK45
    return SolverConfig(method, h=getattr(args, "h", 1e-3), abs_tol=args.tol, rel_tol=args.tol,
                        t_start_offset=args.offset, backend=args.backend)


def cmd_solve(args) -> int:
    spec = WeightSpec.from_name(args.kind, args.alpha)
    cfg = _solver_cfg(args)
    T = args.t_end
    if args.problem == "exp":
        lam = args.rate
        rhs = lambda t, y: lam * y  # noqa: E731
        x0 = [1.0]
        cols = ["y"]

        def exact(t):
            return np.exp(lam * phi(spec, t))[:, None]
    else:
        rhs = lambda t, y: np.array([y[1], 3.0 * y[1] - 2.0 * y[0]])  # noqa: E731
        x0 = [2.0, 3.0]
        cols = ["y", "Dy"]

        def exact(t):
            tau = phi(spec, t)
            return np.column_stack([np.exp(tau) + np.exp(2 * tau), np.exp(tau) + 2 * np.exp(2 * tau)])

    if args.method == "caputo":
        traj = integrate_caputo_abm(CaputoIVP(rhs, args.alpha, x0, T, args.h), args.backend)
    elif args.method == "direct":
        traj = integrate_conformable_direct(ConformableIVP(rhs, spec, x0, (0.0, T), autonomous=True), cfg)
    else:
        classical = integrate_classical(ClassicalIVP(rhs, x0, (0.0, phi(spec, T))), cfg)
        nodes = phi_inverse(spec, classical.times)
        nodes[0], nodes[-1] = 0.0, T
        traj = pull_back(classical, spec, np.maximum.accumulate(nodes))

    t = traj.times
    ref = exact(t)
    header = ["t", "tau", *cols, *(f"{c}_reparam" for c in cols)]
    rows = np.column_stack([t, phi(spec, t), traj.states, ref])
    _emit_csv(args.out, header, rows)
    rel = float(np.max(np.abs(traj.states[-1] - ref[-1]) / np.maximum(1.0, np.abs(ref[-1]))))
    log.info("final %s vs reparametrized closed form: rel diff %.3e", traj.states[-1], rel)
    return 0


def _emit_csv(path, header, rows) -> None:
    if path is None:
        write_table_csv(sys.stdout, header, rows)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        write_table_csv(path, header, rows)


def cmd_lorenz(args) -> int:
    p = LorenzParams(args.sigma, args.rho, args.beta)
    cfg = SolverConfig(Method.RK45, abs_tol=args.tol, rel_tol=args.tol,
                       t_start_offset=args.offset, backend=args.backend)
    mode = args.mode
    res = run_three_way(
        args.alpha, p, args.horizon, cfg, args.h_caputo, args.x0, args.kind, args.tolerance,
        include_caputo=mode in ("all", "caputo"),
        include_conformable=mode in ("all", "conformable"),
    )
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    header = ["t", "tau", "x", "y", "z"]
    w = res.weight
    if mode in ("all", "classical"):
        c = res.classical
        write_table_csv(out / "classical.csv", header, np.column_stack([c.times, c.times, c.states]))
    for name, traj in (("conformable", res.conformable), ("caputo", res.caputo)):
        if traj is not None:
            write_table_csv(out / f"{name}.csv", header,
                            np.column_stack([traj.times, phi(w, traj.times), traj.states]))

    report = {
        "weight": w.summary(),
        "params": {"sigma": p.sigma, "rho": p.rho, "beta": p.beta, "x0": list(args.x0)},
        "horizon": args.horizon,
    }
    for name, rep in (("conformable", res.conformable_report), ("caputo", res.caputo_report)):
        if rep is not None:
            report[name] = {"suite": f"lorenz.{name}", **rep.to_dict()}
            print(f"{name}: max_dev={rep.max_deviation:.3e} verdict={'pass' if rep.verdict else 'fail'}")
    write_json(out / "report.json", report)
    return 0


def _pde_value(args, x: float, t: float) -> float:
    f = PROFILES[args.init]
    spec = WeightSpec.from_name(args.kind, args.alpha)
    if args.problem == "heat":
        if t == 0.0:
            return float(f(x))
        return analytic.heat_solution(HeatProblem(f, args.nu, args.alpha, spec.kind), x, t)
    if args.problem == "burgers":
        if t == 0.0:
            return float(f(x))
        return analytic.burgers_solution(f, args.nu, args.alpha, x, t, spec.kind)
    wave = DampedWaveProblem(f, PROFILES[args.velocity], args.beta, args.c, args.alpha, spec.kind)
    return analytic.damped_wave_solution(wave, x, t)


def _pde_residual(args, x: float, t: float, h: float = 1e-3) -> float:
    spec = WeightSpec.from_name(args.kind, args.alpha)
    u = lambda xx, tt: _pde_value(args, xx, tt)  # noqa: E731
    u0 = u(x, t)
    uxx = (u(x + h, t) - 2.0 * u0 + u(x - h, t)) / (h * h)
    if args.problem == "wave":
        # second-order in tau: check u_tt + beta u_t - c^2 u_xx in the classical clock
        wave = DampedWaveProblem(PROFILES[args.init], PROFILES[args.velocity], args.beta, args.c,
                                 args.alpha, spec.kind)
        tau = phi(spec, t)
        v = lambda tt: analytic.damped_wave_solution_tau(wave, x, tt)  # noqa: E731
        vp, vm, v0 = v(tau + h), v(tau - h), v(tau)
        return abs((vp - 2 * v0 + vm) / (h * h) + args.beta * (vp - vm) / (2 * h) - args.c**2 * uxx)
    dt = psi(spec, t) * (u(x, t + h) - u(x, t - h)) / (2.0 * h)
    res = dt - args.nu * uxx
    if args.problem == "burgers":
        res += u0 * (u(x + h, t) - u(x - h, t)) / (2.0 * h)
    return abs(res)


PDE_RESIDUAL_TOL = {"heat": 1e-4, "burgers": 1e-4, "wave": 1e-3}


def cmd_pde(args) -> int:
    if np.any(args.t < 0.0):
        raise DomainError("time grid must be >= 0")
    rows = [(x, t, _pde_value(args, float(x), float(t))) for t in args.t for x in args.x]
    _emit_csv(args.out, ["x", "t", "u"], rows)
    if not args.verify:
        return 0
    h = 1e-3
    pts = [(x, t) for t in args.t for x in args.x if t > h]
    worst = max((_pde_residual(args, float(x), float(t), h) for x, t in pts), default=0.0)
    tol = PDE_RESIDUAL_TOL[args.problem]
    ok = worst <= tol
    print(f"{'PASS' if ok else 'FAIL'}  pde.{args.problem}_residual: {worst:.3e} <= {tol:.1e}",
          file=sys.stderr)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    results = checks.run_all() if args.all else checks.run_suite(args.suite)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    if args.json is not None:
        write_json(args.json, {"verdict": "pass" if ok else "fail", "results": [r.to_dict() for r in results]})
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"reparam: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.handler(args)
    except DomainError as exc:
        print(f"reparam: error: {exc}", file=sys.stderr)
        return 2
    except (ReparamError, ConvergenceError, ArithmeticError) as exc:
        print(f"reparam: failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
