"""Command-line driver exposing the experiments as subcommands.

Every command is deterministic given its flags and seed and emits a
machine-readable report (JSON by default, CSV for the tabular
commands).  Hull-function inputs are either JSON files or tiny
generator specs:

    sphere:TAU,D
    random:SEED,ROUGHNESS,EPS
    shrink:BASE_SPEC,LAMBDA      (BASE_SPEC is one of the above)

Exit codes: 0 success, 2 input error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import coeffs, comass, hull, pathspace, quadrature, volumes
from .quadrature import Grid

PI = math.pi


@dataclass(frozen=True)
class RunConfig:
    grid_n: int = 512
    eval_n: int = 1024
    seed: int = 0
    fmt: str = "json"
    out: str | None = None

    def __post_init__(self) -> None:
        if self.grid_n < 64:
            raise ValueError("grid_n must be >= 64")
        if self.eval_n < self.grid_n:
            raise ValueError("eval_n must be >= grid_n")


class InputError(ValueError):
    pass


def _round_sig(x: float, digits: int = 12) -> float:
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def _jsonable(obj):
    """Recursively convert a report to JSON types with 12 significant
    digits on all floats."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return _round_sig(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def parse_hull_spec(spec: str, grid: Grid) -> hull.HullFn:
    """Build a hull function from a generator spec or a JSON file path."""
    if os.path.exists(spec):
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                return hull.HullFn.from_json(fh.read())
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise InputError(f"cannot read hull file {spec!r}: {exc}")
    kind, _, rest = spec.partition(":")
    try:
        if kind == "sphere":
            tau, d = (float(v) for v in rest.split(","))
            return hull.sphere_point(hull.SpherePoint(tau % (2 * PI), d),
                                     grid)
        if kind == "random":
            seed, rough, eps = rest.split(",")
            return hull.random_hull_point(int(seed), float(rough),
                                          float(eps), grid)
        if kind == "shrink":
            base, _, lam = rest.rpartition(",")
            return hull.shrink_toward_center(parse_hull_spec(base, grid),
                                             float(lam))
    except InputError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(f"malformed generator spec {spec!r}: {exc}")
    raise InputError(f"unknown generator kind {kind!r} in {spec!r}")


def _emit(report: dict, cfg: RunConfig, csv_text: str | None) -> None:
    if cfg.fmt == "csv" and csv_text is not None:
        text = csv_text
    else:
        text = json.dumps(_jsonable(report), indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_comass(args, cfg: RunConfig) -> int:
    grid = Grid(cfg.grid_n)
    f = parse_hull_spec(args.input, grid)
    opt = comass.OptimizerConfig(seed=cfg.seed, multistart=args.multistart)
    value, diag = comass.comass_ir(f, opt, eval_grid=Grid(cfg.eval_n))
    h = diag["hemisphere_point"]
    report = {
        "command": "comass",
        "config": {"grid_n": cfg.grid_n, "eval_n": cfg.eval_n,
                   "seed": cfg.seed},
        "results": {
            "comass": value,
            "comass_normalized": value / PI,
            "hemisphere_tau": h.tau,
            "hemisphere_d": h.d,
            "hemisphere_dist": diag["hemisphere_dist"],
            "eta_inf": diag["eta_inf"],
            "iterations": diag["iterations"],
            "grad_norm": diag["grad_norm"],
            "converged": diag["converged"],
        },
    }
    _emit(report, cfg, None)
    return 0 if diag["converged"] else 3


def cmd_sweep(args, cfg: RunConfig) -> int:
    try:
        t_list = [float(v) for v in args.t_list.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad t list: {exc}")
    if not t_list:
        raise InputError("empty t list")
    try:
        tau, d = (float(v) for v in args.h.split(","))
    except ValueError as exc:
        raise InputError(f"bad hemisphere spec: {exc}")
    grid = Grid(cfg.grid_n)
    g = parse_hull_spec(args.g, grid)
    opt = comass.OptimizerConfig(seed=cfg.seed)
    table = comass.calibration_sweep(hull.SpherePoint(tau % (2 * PI), d), g,
                                     t_list, opt,
                                     defect_floor=args.defect_floor)
    lines = ["t,dist,defect,eta_inf,iters,converged"]
    for r in table["rows"]:
        lines.append(f"{r['t']:.12g},{r['dist']:.12g},{r['defect']:.12g},"
                     f"{r['eta_inf']:.12g},{r['iters']},"
                     f"{str(r['converged']).lower()}")
    report = {
        "command": "sweep",
        "config": {"grid_n": cfg.grid_n, "eval_n": cfg.eval_n,
                   "seed": cfg.seed},
        "results": table,
    }
    _emit(report, cfg, "\n".join(lines) + "\n")
    if not all(r["converged"] for r in table["rows"]):
        return 3
    return 0


def cmd_cone(args, cfg: RunConfig) -> int:
    grid = Grid(max(64, cfg.grid_n // 2))
    chart = volumes.cone_chart(n_r=args.param_n, n_alpha=args.param_n,
                               grid=grid)
    values = volumes.finsler_mass_table(chart)
    lines = ["chart,definition,value,grid_n,param_n"]
    for definition in volumes.JACOBIAN_DEFINITIONS:
        lines.append(f"cone,{definition},{values[definition]:.12g},"
                     f"{grid.n},{args.param_n}")
    report = {
        "command": "cone",
        "config": {"grid_n": cfg.grid_n, "eval_n": cfg.eval_n,
                   "seed": cfg.seed},
        "results": {"masses": values, "param_n": args.param_n,
                    "chart_grid_n": grid.n},
    }
    _emit(report, cfg, "\n".join(lines) + "\n")
    return 0


def cmd_lowerbound(args, cfg: RunConfig) -> int:
    try:
        offsets = [float(v) for v in args.offsets.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"bad offsets: {exc}")
    rows = [{"offset": o, "area": volumes.coordinate_filling_area(0.0, o)}
            for o in offsets]
    lines = ["offset,area"] + [f"{r['offset']:.12g},{r['area']:.12g}"
                               for r in rows]
    report = {
        "command": "lowerbound",
        "config": {"grid_n": cfg.grid_n, "eval_n": cfg.eval_n,
                   "seed": cfg.seed},
        "results": {"rows": rows},
    }
    _emit(report, cfg, "\n".join(lines) + "\n")
    return 0


def cmd_l1(args, cfg: RunConfig) -> int:
    grid = Grid(cfg.eval_n)
    rows = []
    best = None
    for k in range(args.count):
        f = hull.random_hull_point(cfg.seed + k, roughness=0.5,
                                   eps=args.eps, grid=grid)
        v = coeffs.p_l1_norm(f)
        rows.append({"seed": cfg.seed + k, "value": v})
        if best is None or v > best["value"]:
            best = rows[-1]
    bound = PI * PI / 2
    report = {
        "command": "l1",
        "config": {"grid_n": cfg.grid_n, "eval_n": cfg.eval_n,
                   "seed": cfg.seed},
        "results": {
            "rows": rows,
            "max_value": best["value"],
            "argmax_seed": best["seed"],
            "bound": bound,
            "exceeds_bound": bool(best["value"] > bound + 1e-2),
        },
    }
    lines = ["seed,value"] + [f"{r['seed']},{r['value']:.12g}" for r in rows]
    _emit(report, cfg, "\n".join(lines) + "\n")
    return 0


def run_checks(n: int, seed: int = 0) -> list[tuple[str, bool, str]]:
    """Cross-module invariant suite used by ``fillhull check``."""
    grid = Grid(n)
    rng = np.random.default_rng(seed)
    results: list[tuple[str, bool, str]] = []

    def record(name: str, ok: bool, detail: str) -> None:
        results.append((name, bool(ok), detail))

    # quadrature against a closed form
    F = np.sin(np.subtract.outer(-grid.alpha_nodes, -grid.beta_nodes))
    val = quadrature.integrate_triangle(F, grid)
    record("triangle quadrature", abs(val - PI) < 1e-2 * (128 / n),
           f"sin kernel integral {val:.6g} vs pi")

    # hull isometry vs the spherical law of cosines
    ok = True
    worst = 0.0
    for _ in range(10):
        p1 = hull.SpherePoint(rng.uniform(0, 2 * PI), rng.uniform(0, PI / 2))
        p2 = hull.SpherePoint(rng.uniform(0, 2 * PI), rng.uniform(0, PI / 2))
        got = hull.sup_dist(hull.sphere_point(p1, grid),
                            hull.sphere_point(p2, grid))
        want = math.acos(min(1.0, max(-1.0,
                             math.sin(p1.d) * math.sin(p2.d)
                             + math.cos(p1.d) * math.cos(p2.d)
                             * math.cos(p1.tau - p2.tau))))
        worst = max(worst, abs(got - want))
        ok = ok and abs(got - want) <= 2 * grid.step
    record("hemisphere isometry", ok, f"worst gap {worst:.3g}")

    # coefficient table against the scalar definition
    record("north pole coefficient",
           abs(coeffs.p_scalar(0.7, PI / 2, PI / 2) - 1.0) < 1e-12,
           "p(a, pi/2, pi/2) = 1")
    f = hull.random_hull_point(seed + 1, 0.4, 0.3, grid)
    table = coeffs.p_grid(f).p
    xm = f.at_midnodes()
    ok = True
    worst = 0.0
    for _ in range(20):
        j = int(rng.integers(0, n - 1))
        k = int(rng.integers(j + 1, n))
        direct = coeffs.p_scalar(grid.beta_nodes[k] - grid.alpha_nodes[j],
                                 xm[j], f.values[k])
        worst = max(worst, abs(direct - table[j, k]))
        ok = ok and abs(direct - table[j, k]) < 1e-10
    record("coefficient table consistency", ok, f"worst gap {worst:.3g}")

    # phase normalization and the two routes to the action
    h = hull.SpherePoint(1.3, 0.6)
    nu = pathspace.nu_h(h, grid)
    record("phase normalization", abs(nu[-1] - PI) < 1e-6,
           f"nu(pi) = {nu[-1]:.9f}")
    eta = pathspace.AngleField.from_values(
        grid, 0.05 * np.sin(2 * grid.beta_nodes))
    hf = hull.sphere_point(h, grid)
    v1 = comass.psi(h, hf, eta)
    v2 = pathspace.omega_action(hf, pathspace.gamma_from_eta(h, eta))
    record("psi equals path action", abs(v1 - v2) < 1e-9,
           f"gap {abs(v1 - v2):.3g}")

    # gradient against finite differences
    g = comass.psi_gradient(h, hf, eta)
    v = pathspace.AngleField.from_values(
        grid, rng.normal(size=n))
    t = 1e-5
    ep = pathspace.AngleField(grid, eta.values + t * v.values
                              - (eta.values + t * v.values).mean())
    em = pathspace.AngleField(grid, eta.values - t * v.values
                              - (eta.values - t * v.values).mean())
    fd = (comass.psi(h, hf, ep) - comass.psi(h, hf, em)) / (2 * t)
    dot = float(g.values @ v.values)
    record("psi gradient", abs(fd - dot) <= 1e-5 * max(1.0, abs(fd)),
           f"fd {fd:.9g} vs analytic {dot:.9g}")

    # isoperimetric side: area bound and Fourier stability
    _, area = pathspace.sigma_path(h, eta)
    c0, c1, w_sup, bound = pathspace.fuglede_check(h, eta)
    record("sigma area bound", area <= PI + 1e-3, f"A = {area:.6f}")
    record("fuglede bound", w_sup <= bound + 1e-3,
           f"sup|w| = {w_sup:.4g}, bound = {bound:.4g}")

    # volume definitions on closed-form norms
    eu = volumes.Norm2D.euclidean()
    ok = all(abs(volumes.jacobian(eu, d) - 1.0) < 5e-3
             for d in volumes.JACOBIAN_DEFINITIONS)
    record("euclidean jacobians", ok, "all five equal 1")
    l1n = volumes.Norm2D.l1()
    want = {"mass": 1.0, "mass_star": 2.0, "busemann_hausdorff": PI / 2,
            "holmes_thompson": 4 / PI, "inner_riemannian": 2.0}
    ok = all(abs(volumes.jacobian(l1n, d) - w) < 5e-3 * w
             for d, w in want.items())
    record("l1 jacobians", ok, "diamond values")

    area = volumes.coordinate_filling_area(0.3, PI / 2)
    record("filling lower bound", abs(area - PI * PI / 2) < 1e-4,
           f"area = {area:.6f}")
    return results


def cmd_check(args, cfg: RunConfig) -> int:
    n = 128 if args.fast else 256
    results = run_checks(n, cfg.seed)
    failed = [name for name, ok, _ in results if not ok]
    report = {
        "command": "check",
        "config": {"grid_n": cfg.grid_n, "eval_n": cfg.eval_n,
                   "seed": cfg.seed},
        "results": {
            "checks": [{"name": name, "passed": ok, "detail": detail}
                       for name, ok, detail in results],
            "n_failed": len(failed),
        },
    }
    _emit(report, cfg, None)
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fillhull",
        description="Experiments on the injective hull of the round circle")
    parser.add_argument("--grid-n", type=int, default=512)
    parser.add_argument("--eval-n", type=int, default=1024)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("comass", help="comass of a hull function")
    p.add_argument("input", help="hull JSON file or generator spec")
    p.add_argument("--multistart", type=int, default=1)
    p.set_defaults(fn=cmd_comass)

    p = sub.add_parser("sweep", help="calibration defect rate sweep")
    p.add_argument("--h", default="0.0,0.7", help="hemisphere point TAU,D")
    p.add_argument("--g", default="random:1,0.25,0.3", help="endpoint spec")
    p.add_argument("--t-list",
                   default="0.02,0.04,0.06,0.08,0.1,0.12,0.14,0.16,0.18,0.2")
    p.add_argument("--defect-floor", type=float, default=5e-5)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("cone", help="cone chart mass table")
    p.add_argument("--param-n", type=int, default=48)
    p.set_defaults(fn=cmd_cone)

    p = sub.add_parser("lowerbound", help="coordinate filling areas")
    p.add_argument("--offsets", default=f"{PI/2}")
    p.set_defaults(fn=cmd_lowerbound)

    p = sub.add_parser("l1", help="coefficient L1 norm over a random corpus")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--eps", type=float, default=0.3)
    p.set_defaults(fn=cmd_l1)

    p = sub.add_parser("check", help="run the cross-module invariant suite")
    p.add_argument("--fast", action="store_true")
    p.set_defaults(fn=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(grid_n=args.grid_n, eval_n=args.eval_n,
                        seed=args.seed, fmt=args.format, out=args.out)
        return args.fn(args, cfg)
    except InputError as exc:
        print(f"fillhull: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"fillhull: {exc}", file=sys.stderr)
        return 2
    except hull.ConvergenceError as exc:
        print(f"fillhull: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
