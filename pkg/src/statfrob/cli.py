"""Command-line entry point.

Every subcommand prints one report (text or JSON) and exits with 0 on
success, 1 when a tolerance check fails and 2 on usage or validation errors.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import frobenius, geometry, model as model_mod, split_algebra, toric, webs

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2

TOLERANCES = {
    "flatness": 1e-6,
    "pencil_symmetry": 1e-6,
    "hessian": 1e-6,
    "third_derivative": 1e-4,
    "metric_invariance": 1e-11,
    "potentiality": 1e-4,
    "pencil_match": 1e-12,
    "vanishing": 1e-12,
    "ceva": 1e-10,
    "cauchy_riemann": 1e-8,
}


class UsageError(Exception):
    pass


def _floats(text, count=None, what="value"):
    try:
        vals = [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise UsageError(f"could not parse {what} {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"{what} needs {count} comma-separated numbers, got {len(vals)}")
    return vals


def jsonable(obj):
    if isinstance(obj, dict):
        return {("-".join(map(str, k)) if isinstance(k, tuple) else str(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else str(obj)
    return obj


# --------------------------------------------------------------------------
# handlers return (result, tolerances, passed)


def _theta(args, m):
    if args.theta is None:
        return np.zeros(m.n)
    return np.array(_floats(args.theta, m.n, "--theta"))


def _step(args, default):
    return default if args.step is None else args.step


def cmd_model_info(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    result = {
        "name": m.name,
        "m": m.m,
        "n": m.n,
        "Q": m.Q_int,
        "base_measure": m.base_measure,
        **m.rank_report(),
        "theta": theta,
        "log_partition": model_mod.log_partition(m, theta),
    }
    return result, {}, None


def cmd_model_probs(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    mu, residual = model_mod.mean_parameters(m, theta)
    result = {
        "theta": theta,
        "probabilities": model_mod.probabilities(m, theta),
        "mean_parameters": mu,
        "gradient_fd_residual": residual,
        "monomials": model_mod.monomial_parametrization(m, theta),
    }
    return result, {"gradient": 1e-6}, residual < 1e-6


def cmd_geom_tensors(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    metric = geometry.fisher_metric(m, theta)
    hess = geometry.hessian_residual(m, theta)
    third = geometry.third_derivative_residual(m, theta)
    result = {
        "theta": theta,
        "g": metric.g,
        "condition": metric.condition,
        "C": geometry.amari_chentsov(m, theta).C,
        "hessian_residual": hess,
        "third_derivative_residual": third,
    }
    tol = {"hessian": TOLERANCES["hessian"], "third_derivative": TOLERANCES["third_derivative"]}
    return result, tol, hess < tol["hessian"] and third < tol["third_derivative"]


def cmd_geom_christoffels(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    ch = geometry.alpha_christoffels(m, theta, args.alpha)
    return {"theta": theta, "alpha": ch.alpha, "Gamma_lower": ch.Gamma_lower,
            "Gamma_mixed": ch.Gamma_mixed}, {}, None


def cmd_geom_curvature(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    step = _step(args, geometry.DEFAULT_CURVATURE_STEP)
    curv = geometry.curvature_tensor(m, theta, args.alpha, step=step, richardson=args.richardson)
    result = {"theta": theta, "alpha": curv.alpha, "step": step, "richardson": args.richardson,
              "max_abs": curv.max_abs, "R": curv.R}
    if m.n >= 2:
        result["sectional_12"] = geometry.sectional_curvature(
            m, theta, args.alpha, step=step, richardson=args.richardson)
    if abs(args.alpha) == 1:
        tol = {"flatness": TOLERANCES["flatness"]}
        return result, tol, curv.max_abs < tol["flatness"]
    return result, {}, None


def cmd_geom_pencil(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    step = _step(args, geometry.DEFAULT_CURVATURE_STEP)
    res = geometry.pencil_symmetry_report(m, theta, args.alpha, step=step)
    tol = {"pencil_symmetry": TOLERANCES["pencil_symmetry"]}
    return {"theta": theta, "alpha": args.alpha, "step": step, "max_difference": res}, tol, \
        res < tol["pencil_symmetry"]


def cmd_frobenius_check(args):
    m = model_mod.resolve_model(args.model)
    theta = _theta(args, m)
    step = _step(args, 1e-3)
    report = frobenius.frobenius_check(m, theta, kappa=args.kappa, trials=args.trials,
                                       seed=args.seed, step=step)
    tol = {k: TOLERANCES[k] for k in ("metric_invariance", "potentiality", "pencil_match")}
    passed = all(report[k] < v for k, v in tol.items())
    return {"theta": theta, "step": step, **report}, tol, passed


def cmd_toric_ideal(args):
    m = model_mod.resolve_model(args.model)
    Qt = toric.extended_matrix(m)
    basis = toric.lattice_kernel(Qt)
    rels = toric.binomials_from_kernel(basis)
    result = {
        "Qt": Qt.rows,
        "kernel_rank": basis.rank,
        "basis": basis.vectors,
        "binomials": [r.display for r in rels],
        "caveat": toric.SATURATION_CAVEAT,
    }
    return result, {}, None


def cmd_toric_verify(args):
    m = model_mod.resolve_model(args.model)
    report = toric.verify_vanishing(m, samples=args.samples, seed=args.seed)
    tol = {"vanishing": TOLERANCES["vanishing"]}
    return report, tol, report["max_residual"] < tol["vanishing"]


def _web(args):
    return webs.resolve_web(args.web)


def cmd_web_hexagon(args):
    web = _web(args)
    center = _floats(args.center, 2, "--center")
    eps_list = _floats(args.eps, what="--eps")
    rows = [
        {"eps": e.eps, "defect": e.defect, "defect_over_eps3": e.scaled_defect}
        for e in webs.hexagon_report(web, center, eps_list)
    ]
    result = {"web": web.name, "box": web.box, "center": center, "rows": rows}
    if args.tol is None:
        return result, {}, None
    return result, {"defect": args.tol}, all(r["defect"] <= args.tol for r in rows)


def cmd_web_curvature(args):
    web = _web(args)
    at = _floats(args.at, 2, "--at")
    step = _step(args, 1e-4)
    return {"web": web.name, "at": at, "step": step,
            "curvature": webs.web_curvature(web, at, step)}, {}, None


def cmd_web_ceva(args):
    tri = webs.reference_simplex(2)
    if args.direction is not None:
        cfg = webs.cevian_config(tri, direction=_floats(args.direction, 2, "--direction"))
        point = None
    else:
        bary = _floats(args.point, 3, "--point")
        point = webs.SimplexPoint(bary)
        if not point.interior:
            raise UsageError("--point must be interior")
        cfg = webs.cevian_config(tri, point=webs.to_cartesian(tri, point.p))
    feet = cfg.feet.copy()
    if args.perturb:
        feet[0] = feet[0] + args.perturb * (tri[2] - tri[1]) / np.linalg.norm(tri[2] - tri[1])
    prod = webs.ceva_product(tri, feet)
    tol = {"ceva": TOLERANCES["ceva"]}
    result = {"mode": cfg.mode, "point": None if point is None else point.p, "vertices": tri,
              "feet": feet, "perturb": args.perturb, "product": prod,
              "deviation": abs(prod + 1.0)}
    return result, tol, abs(prod + 1.0) < tol["ceva"]


def cmd_web_ceva_n(args):
    point = webs.SimplexPoint(_floats(args.point, what="--point"))
    if not point.interior:
        raise UsageError("--point must be interior")
    S = webs.reference_simplex(point.dim)
    edges = webs.project_edge_points(S, webs.to_cartesian(S, point.p))
    if args.perturb:
        (i, j) = min(edges)
        edges[(i, j)] = edges[(i, j)] + args.perturb * (S[j] - S[i])
    report = webs.generalized_ceva_check(S, edges)
    tol = {"ceva": TOLERANCES["ceva"]}
    result = {"point": point.p, "dim": point.dim, "perturb": args.perturb, **report}
    return result, tol, report["max_deviation"] < tol["ceva"]


def cmd_web_sphere(args):
    emb = webs.sphere_embedding(_floats(args.point, what="--point"))
    tol = {"norm": 1e-13, "metric": 1e-8}
    return {"eta": emb.eta, "norm": emb.norm, "metric_residual": emb.metric_residual}, tol, \
        abs(emb.norm - 4) < tol["norm"] and emb.metric_residual < tol["metric"]


def cmd_web_fields(args):
    f = webs.barycentric_fields(_floats(args.point, what="--point"))
    return {"y": f.y, "z": f.z, "q": f.q, "x": f.x, "x_sum": f.x_sum}, {"x_sum": 1e-13}, \
        bool(np.max(np.abs(f.x_sum)) < 1e-13)


def cmd_algebra_cr(args):
    if args.map not in split_algebra.BUILTIN_MAPS:
        raise UsageError(f"unknown map {args.map!r}")
    at = _floats(args.at, 2, "--at")
    step = _step(args, 1e-4)
    res = split_algebra.cauchy_riemann_residual(split_algebra.BUILTIN_MAPS[args.map], at, step)
    tol = TOLERANCES["cauchy_riemann"]
    return {"map": args.map, "at": at, "step": step, "residual": res,
            "analytic": res < tol}, {"cauchy_riemann": tol}, None


def cmd_algebra_subweb(args):
    F = split_algebra.builtin_algebra_web(args.web)
    plus, minus = split_algebra.subweb_decompose(F)
    at = _floats(args.at, 2, "--at")
    step = _step(args, 1e-4)
    eps = args.eps
    z = split_algebra.SplitNumber(at[0], at[0]), split_algebra.SplitNumber(at[1], at[1])
    hexagon = split_algebra.split_hexagon_defect(F, z, eps)
    result = {
        "web": F.name,
        "at": at,
        "step": step,
        "eps": eps,
        "plus_curvature": webs.web_curvature(plus, at, step),
        "minus_curvature": webs.web_curvature(minus, at, step),
        "hexagon": hexagon,
    }
    return result, {}, None


# --------------------------------------------------------------------------


def _common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--kappa", type=float, default=frobenius.DEFAULT_KAPPA)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--omit-timing", action="store_true",
                   help="leave wall_time out so reports are byte-comparable")


def build_parser():
    parser = argparse.ArgumentParser(prog="statfrob", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def leaf(sub, name, handler, model=False, theta=False):
        p = sub.add_parser(name)
        group = p.prog.split()[-2]
        if model:
            p.add_argument("model", help="model file or builtin name")
        if theta:
            p.add_argument("--theta", default=None, help="comma-separated canonical point")
        _common(p)
        p.set_defaults(handler=handler, command=f"{group} {name}")
        return p

    g = groups.add_parser("model").add_subparsers(dest="sub", required=True)
    leaf(g, "info", cmd_model_info, model=True, theta=True)
    leaf(g, "probs", cmd_model_probs, model=True, theta=True)

    g = groups.add_parser("geom").add_subparsers(dest="sub", required=True)
    leaf(g, "tensors", cmd_geom_tensors, model=True, theta=True)
    p = leaf(g, "christoffels", cmd_geom_christoffels, model=True, theta=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p = leaf(g, "curvature", cmd_geom_curvature, model=True, theta=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--richardson", action="store_true")
    p = leaf(g, "pencil-symmetry", cmd_geom_pencil, model=True, theta=True)
    p.add_argument("--alpha", type=float, default=0.5)

    g = groups.add_parser("frobenius").add_subparsers(dest="sub", required=True)
    p = leaf(g, "check", cmd_frobenius_check, model=True, theta=True)
    p.add_argument("--trials", type=int, default=50)

    g = groups.add_parser("toric").add_subparsers(dest="sub", required=True)
    leaf(g, "ideal", cmd_toric_ideal, model=True)
    leaf(g, "verify", cmd_toric_verify, model=True)

    g = groups.add_parser("web").add_subparsers(dest="sub", required=True)
    p = leaf(g, "hexagon", cmd_web_hexagon)
    p.add_argument("--web", default="sum", help="sum, product, cubic or a JSON web file")
    p.add_argument("--center", default="1,1")
    p.add_argument("--eps", default="0.02,0.01")
    p.add_argument("--tol", type=float, default=None)
    p = leaf(g, "curvature", cmd_web_curvature)
    p.add_argument("--web", default="sum")
    p.add_argument("--at", default="1,1")
    p = leaf(g, "ceva", cmd_web_ceva)
    p.add_argument("--point", default="0.2,0.3,0.5", help="barycentric point in the triangle")
    p.add_argument("--direction", default=None, help="parallel Cevians with this direction")
    p.add_argument("--perturb", type=float, default=0.0)
    p = leaf(g, "ceva-n", cmd_web_ceva_n)
    p.add_argument("--point", default="0.1,0.2,0.3,0.4")
    p.add_argument("--perturb", type=float, default=0.0)
    p = leaf(g, "sphere", cmd_web_sphere)
    p.add_argument("--point", default="0.2,0.3,0.5")
    p = leaf(g, "fields", cmd_web_fields)
    p.add_argument("--point", default="0.2,0.3,0.5")

    g = groups.add_parser("algebra").add_subparsers(dest="sub", required=True)
    p = leaf(g, "cr", cmd_algebra_cr)
    p.add_argument("--map", default="exp", help="exp, identity or swap")
    p.add_argument("--at", default="0,0")
    p = leaf(g, "subweb", cmd_algebra_subweb)
    p.add_argument("--web", default="mixed", choices=sorted(split_algebra.BUILTIN_ALGEBRA_WEBS))
    p.add_argument("--at", default="1,1")
    p.add_argument("--eps", type=float, default=0.01)
    return parser


def _config(args):
    return {"seed": args.seed, "format": args.format, "step": args.step,
            "samples": args.samples, "kappa": args.kappa}


def _echo(args):
    skip = {"handler", "command", "group", "sub", "seed", "format", "step", "samples",
            "kappa", "omit_timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render_text(report):
    lines = [f"command: {report['command']}"]
    for key, val in report["arguments"].items():
        lines.append(f"  {key}: {val}")
    lines.append("config: " + ", ".join(f"{k}={v}" for k, v in report["config"].items()))
    result = report["result"]
    if "rows" in result:
        for key in ("web", "center"):
            lines.append(f"{key}: {result[key]}")
        lines.append(f"{'eps':>12} {'defect':>14} {'defect/eps^3':>14}")
        for r in result["rows"]:
            lines.append(f"{r['eps']:>12.4g} {r['defect']:>14.6e} {r['defect_over_eps3']:>14.6e}")
    else:
        width = max((len(k) for k in result), default=0)
        for key, val in result.items():
            lines.append(f"{key:<{width}} : {json.dumps(val)}")
    for key, val in report["tolerances"].items():
        lines.append(f"tolerance {key}: {val:g}")
    if report["pass"] is not None:
        lines.append("PASS" if report["pass"] else "FAIL")
    if "wall_time" in report:
        lines.append(f"wall time: {report['wall_time']:.3f}s")
    return "\n".join(lines)


def dispatch(argv):
    """Run one command; returns ``(report or None, exit code)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, EXIT_USAGE if exc.code else EXIT_OK
    if args.seed < 0:
        print("error: --seed must be nonnegative", file=sys.stderr)
        return None, EXIT_USAGE
    if args.step is not None and args.step <= 0:
        print("error: --step must be positive", file=sys.stderr)
        return None, EXIT_USAGE
    start = time.perf_counter()
    try:
        result, tolerances, passed = args.handler(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, EXIT_USAGE
    report = {
        "command": args.command,
        "arguments": _echo(args),
        "config": _config(args),
        "result": result,
        "tolerances": tolerances,
        "pass": passed,
    }
    report = jsonable(report)
    if not args.omit_timing:
        report["wall_time"] = time.perf_counter() - start
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(report))
    code = EXIT_TOLERANCE if passed is False else EXIT_OK
    return report, code


def main(argv=None):
    _, code = dispatch(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
