"""Command-line front end: ``annulus-min <subcommand> ...``.

JSON goes to stdout; data files go to ``--out`` paths and are accompanied by
a ``<out>.manifest.json`` sidecar recording every parameter needed to rerun
the command. Exit codes: 0 success, 2 usage or domain error, 3 infeasible
below the Nitsche-type threshold, 4 failed verification, 5 invalid map file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path

import numpy as np

from . import kernels
from .closed_form import (
    DEFAULT_NODES,
    FEASIBILITY_SLACK,
    nitsche_threshold_distortion,
    nitsche_threshold_energy,
    solve_combined_distortion,
    solve_combined_energy,
)
from .competitors import SplitMix64, SweepInstance, competitor_sweep, generate_competitor, random_spec
from .energy import duality_check, grid_energy_report, radial_report
from .errors import (
    AnnulusError,
    BelowNitsche,
    CertificateUnavailable,
    ClassViolation,
    DomainError,
    InvalidMap,
    NonPositiveJacobian,
    SingularStart,
)
from .geometry import AnnulusPair, PolarGridMap, Weights
from .lagrangians import (
    FreeLagrangianSpec,
    Kind,
    fl_integral,
    lift_dense,
    verify_energy_lower_bound,
    verify_total_lower_bound,
)
from .ode_shooting import ATOL, RTOL, SHOOT_NODES, SHOOT_TOL, phi_curve, shoot

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY, EXIT_MAP = 0, 2, 3, 4, 5


class UsageError(Exception):
    """A flag value is outside its domain."""


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    """Everything needed to reproduce one invocation."""

    subcommand: str
    parameters: dict
    version: str = field(default_factory=_version)
    backend: str = field(default_factory=lambda: kernels.BACKEND)
    grid: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None

    def write_sidecar(self, out: str) -> Path:
        path = Path(str(out) + ".manifest.json")
        path.write_text(json.dumps(asdict(self), indent=1, default=_jsonable))
        return path


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"not serializable: {type(x)!r}")


def _clean(x):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    return x


def _emit(payload: dict) -> None:
    print(json.dumps(_clean(payload), indent=1, default=_jsonable))


def _manifest(args, grid=None, tolerances=None) -> RunManifest:
    params = {k: v for k, v in vars(args).items() if k != "handler"}
    return RunManifest(args.command, params, grid=grid or {}, tolerances=tolerances or {}, seed=getattr(args, "seed", None))


def _positive(name):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"--{name} expects a number, got {text!r}")
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"--{name} must be positive and finite, got {text!r}")
        return v

    return parse


def _radius(name):
    def parse(text):
        v = _positive(name)(text)
        if v <= 1.0:
            raise argparse.ArgumentTypeError(f"--{name} must exceed 1, got {text!r}")
        return v

    return parse


def _pair(args) -> AnnulusPair:
    if args.R is None:
        raise UsageError("--R is required")
    return AnnulusPair(args.r, args.R)


# ---------------------------------------------------------------------------
# nitsche


def cmd_nitsche(args) -> int:
    if args.mode == "energy":
        threshold = nitsche_threshold_energy(args.r, args.c)
        out = {"mode": "energy", "r": args.r, "c": args.c, "threshold": threshold, "bounds": "R"}
        if args.R is not None:
            out["R"] = args.R
            out["verdict"] = "feasible" if args.R >= threshold - FEASIBILITY_SLACK else "infeasible"
    else:
        if args.R is None:
            raise UsageError("--R is required in distortion mode (the threshold bounds r)")
        threshold = nitsche_threshold_distortion(args.R, args.c)
        out = {"mode": "distortion", "R": args.R, "c": args.c, "threshold": threshold, "bounds": "r"}
        out["r"] = args.r
        out["verdict"] = "feasible" if args.r > threshold else "infeasible"
    _emit(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# minimize


def cmd_minimize(args) -> int:
    pair = _pair(args)
    w = Weights.from_ratios(args.c, args.gamma)
    extra = {"functional": args.functional}
    tolerances = {}
    if args.functional == "energy":
        sol = solve_combined_energy(pair, args.c, args.nodes)
        profile = sol.profile
        extra.update(mu=sol.mu, regime=sol.regime.value, closed_form_minimum=sol.energy(w.w_a, w.w_b))
    elif args.functional == "distortion":
        sol = solve_combined_distortion(pair, args.c, args.nodes)
        profile = sol.profile
        extra.update(nu=sol.nu, closed_form_minimum=sol.distortion(w.w_a, w.w_b))
    else:
        res = shoot(pair, args.c, args.gamma, args.shoot_tol, args.nodes, args.rtol, args.atol)
        profile = res.profile
        extra.update(q=res.q, case=res.case_label.value, concavity=res.concavity.value,
                     ode_residual_sup=res.ode_residual_sup, end_error=res.end_error)
        tolerances = {"shoot_tol": args.shoot_tol, "rtol": args.rtol, "atol": args.atol}
    report = radial_report(profile, w)
    payload = {"report": asdict(report), **extra}
    if profile.degenerate_start:
        payload["note"] = "threshold case: the profile has zero slope on the inner circle"
    if args.out:
        profile.to_csv(args.out)
        _manifest(args, {"nodes": args.nodes}, tolerances).write_sidecar(args.out)
        payload["profile_csv"] = str(args.out)
    _emit(payload)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _default_densities():
    return {
        Kind.RADIAL_FUNCTION: [lambda t: 1.0 + 0.0 * t, lambda t: 1.0 / t**2, lambda t: np.exp(-t)],
        Kind.PULLBACK: [lambda s: 1.0 + 0.0 * s, lambda s: s, lambda s: 1.0 / s**3],
        Kind.RADIAL: [lambda s: 1.0 + 0.0 * s, lambda s: s**2, lambda s: np.cos(s)],
        Kind.ANGULAR: [lambda t: 1.0 + 0.0 * t, lambda t: t, lambda t: np.log(t) + 1.0],
        Kind.TWO_VARIABLE: [
            lambda t, s: t * s,
            lambda t, s: np.log(t) * s**2,
            lambda t, s: np.sin(t) * np.cos(s),
        ],
    }


def _instance(args) -> SweepInstance:
    return SweepInstance(args.functional, _pair(args), args.c, args.gamma)


def _competitor_maps(inst: SweepInstance, n: int, seed: int, grid: int):
    rng = SplitMix64(seed)
    maps = [inst.lift(grid, grid)]
    for _ in range(n):
        maps.append(generate_competitor(random_spec(inst.profile, rng), grid, grid, inst.radial_values, inst.pair.R).map)
    return maps


def _suite_lagrangian(args):
    inst = _instance(args)
    maps = _competitor_maps(inst, args.n, args.seed, args.grid)
    rows = []
    worst = 0.0
    for kind, funcs in _default_densities().items():
        for k, f in enumerate(funcs):
            spec = FreeLagrangianSpec(kind, f)
            gaps = [fl_integral(spec, m).relative_gap for m in maps]
            worst = max(worst, max(gaps))
            rows.append({"kind": kind.value, "density": k, "max_relative_gap": max(gaps)})
    return worst <= args.tol, {"max_relative_gap": worst, "tol": args.tol, "maps": len(maps), "rows": rows}


def _suite_lowerbound(args):
    inst = _instance(args)
    w = inst.weights
    dt = (inst.pair.r - 1.0) / (args.grid - 1)
    eps = 10.0 * dt * dt
    certs = []
    if args.functional == "energy":
        sol = solve_combined_energy(inst.pair, args.c)
        for m in _competitor_maps(inst, args.n, args.seed, args.grid):
            certs.append(verify_energy_lower_bound(m, sol, w))
    elif args.functional == "total":
        res = shoot(inst.pair, args.c, args.gamma)
        try:
            if res.concavity.value == "ConvexityCase":
                certs.append(verify_total_lower_bound(None, res, w))
            else:
                for m in [lift_dense(res, args.grid, args.grid)] + _competitor_maps(inst, args.n, args.seed, args.grid)[1:]:
                    certs.append(verify_total_lower_bound(m, res, w))
        except CertificateUnavailable as exc:
            return False, {"certificate": "unavailable", "reason": str(exc)}
    else:
        raise UsageError("--functional must be energy or total for the lowerbound suite")
    margins = [c.pointwise_margin_min_relative for c in certs]
    gaps = [c.integral_gap_relative for c in certs]
    bounds = [abs(c.bound_predicted / c.minimum - 1.0) for c in certs]
    ok = min(margins) >= -eps and min(gaps) >= -eps and max(bounds) <= eps
    detail = {
        "eps_grid": eps,
        "min_pointwise_margin_relative": min(margins),
        "min_integral_gap_relative": min(gaps),
        "bound_vs_minimum": max(bounds),
        "lift_equality_deviation": certs[0].equality_deviation,
        "notes": certs[0].notes,
        "certificates": len(certs),
    }
    if "lemma" in certs[0].extra:
        detail["lemma"] = certs[0].extra["lemma"]
        ok = ok and certs[0].extra["lemma"]["q_t_max"] <= 1e-8 and certs[0].extra["lemma"]["trichotomy_ok"]
    return ok, detail


def _suite_dominance(args):
    inst = _instance(args)
    table = competitor_sweep(inst, args.n, args.seed, args.grid, args.grid)
    if args.out:
        table.to_csv(args.out)
        _manifest(args, {"n_t": args.grid, "n_theta": args.grid}).write_sidecar(args.out)
    return table.passed, table.summary()


def _suite_phi_portrait(args):
    if args.q is None:
        raise UsageError("--q is required for the phi-portrait suite")
    rows = []
    ok = True
    for q in args.q:
        if q == 1.0:
            raise UsageError("--q must differ from 1")
        curve = phi_curve(q, args.c, args.gamma, (0.05, args.s_max))
        end = float(curve.phi_values[-1])
        gap = abs(end - curve.limit())
        good = curve.shape_ok() and gap <= args.tol
        ok = ok and good
        rows.append({"q": q, "shape": curve.expected_shape(), "shape_ok": curve.shape_ok(), "limit": curve.limit(),
                     "end_value": end, "end_gap": gap, "passed": good})
    return ok, {"s_max": args.s_max, "tol": args.tol, "curves": rows}


def _suite_duality(args):
    pair = _pair(args)
    w = Weights.from_ratios(args.c, args.gamma)
    if args.functional == "total":
        profile = shoot(pair, args.c, args.gamma).profile
    else:
        profile = solve_combined_energy(pair, args.c).profile
    rep = duality_check(profile, w)
    return rep.relative_gap <= args.tol, asdict(rep) | {"tol": args.tol}


SUITES = {
    "lagrangian": (_suite_lagrangian, 1e-3),
    "lowerbound": (_suite_lowerbound, None),
    "dominance": (_suite_dominance, None),
    "phi-portrait": (_suite_phi_portrait, 1e-3),
    "duality": (_suite_duality, 1e-7),
}


def cmd_verify(args) -> int:
    func, default_tol = SUITES[args.suite]
    if args.tol is None:
        args.tol = default_tol
    passed, detail = func(args)
    _emit({"suite": args.suite, "passed": bool(passed), "detail": detail,
           "manifest": asdict(_manifest(args, {"grid": args.grid}))})
    return EXIT_OK if passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# phi-curve and energy


def cmd_phi_curve(args) -> int:
    if args.q == 1.0:
        raise UsageError("--q must differ from 1: the reduced equation is singular there")
    curve = phi_curve(args.q, args.c, args.gamma, (args.s_min, args.s_max), args.points, args.rtol, args.atol)
    payload = {"q": args.q, "c": args.c, "gamma": args.gamma, "points": len(curve.s_nodes),
               "shape": curve.expected_shape(), "shape_ok": curve.shape_ok(),
               "interval_left": curve.maximal_interval_hint[0]}
    if args.out:
        curve.to_csv(args.out)
        _manifest(args, {"points": args.points}, {"rtol": args.rtol, "atol": args.atol}).write_sidecar(args.out)
        payload["csv"] = str(args.out)
    else:
        payload["s"] = curve.s_nodes.tolist()
        payload["phi"] = curve.phi_values.tolist()
    _emit(payload)
    return EXIT_OK


def cmd_energy(args) -> int:
    try:
        text = Path(args.map).read_text()
    except OSError as exc:
        raise UsageError(f"--map cannot be read: {exc}")
    gmap = PolarGridMap.from_json(text)
    w = Weights(args.wa, args.wb, args.alpha, args.beta)
    _emit(asdict(grid_energy_report(gmap, w)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="annulus-min", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=_version())
    sub = p.add_subparsers(dest="command", required=True)

    n = sub.add_parser("nitsche", help="feasibility threshold of the radial minimizers")
    n.add_argument("--r", type=_radius("r"), required=True)
    n.add_argument("--R", type=_radius("R"))
    n.add_argument("--c", type=_positive("c"), required=True)
    n.add_argument("--mode", choices=("energy", "distortion"), default="energy")
    n.set_defaults(handler=cmd_nitsche)

    m = sub.add_parser("minimize", help="radial minimizer and its energy report")
    m.add_argument("--functional", choices=("energy", "distortion", "total"), required=True)
    m.add_argument("--r", type=_radius("r"), required=True)
    m.add_argument("--R", type=_radius("R"), required=True)
    m.add_argument("--c", type=_positive("c"), required=True)
    m.add_argument("--gamma", type=_positive("gamma"), default=1.0)
    m.add_argument("--out", help="profile CSV path")
    m.add_argument("--nodes", type=int, default=None, help="profile nodes")
    m.add_argument("--shoot-tol", type=_positive("shoot-tol"), default=SHOOT_TOL)
    m.add_argument("--rtol", type=_positive("rtol"), default=RTOL)
    m.add_argument("--atol", type=_positive("atol"), default=ATOL)
    m.set_defaults(handler=cmd_minimize)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=tuple(SUITES), required=True)
    v.add_argument("--functional", choices=("energy", "distortion", "total"), default="energy")
    v.add_argument("--r", type=_radius("r"), default=2.0)
    v.add_argument("--R", type=_radius("R"), default=3.0)
    v.add_argument("--c", type=_positive("c"), default=1.0)
    v.add_argument("--gamma", type=_positive("gamma"), default=1.0)
    v.add_argument("--q", type=_positive("q"), nargs="+")
    v.add_argument("--s-max", type=_positive("s-max"), default=50.0)
    v.add_argument("--n", type=int, default=10, help="number of competitors")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--grid", type=int, default=256, help="grid nodes per direction")
    v.add_argument("--tol", type=_positive("tol"), default=None, help="suite tolerance")
    v.add_argument("--out", help="CSV path for the dominance table")
    v.set_defaults(handler=cmd_verify)

    c = sub.add_parser("phi-curve", help="samples of the reduced-equation solution through (1, q)")
    c.add_argument("--q", type=_positive("q"), required=True)
    c.add_argument("--c", type=_positive("c"), required=True)
    c.add_argument("--gamma", type=_positive("gamma"), default=1.0)
    c.add_argument("--s-min", type=_positive("s-min"), default=0.05)
    c.add_argument("--s-max", type=_positive("s-max"), default=50.0)
    c.add_argument("--points", type=int, default=2001)
    c.add_argument("--rtol", type=_positive("rtol"), default=RTOL)
    c.add_argument("--atol", type=_positive("atol"), default=ATOL)
    c.add_argument("--out", help="CSV path")
    c.set_defaults(handler=cmd_phi_curve)

    e = sub.add_parser("energy", help="energy report of a map file")
    e.add_argument("--map", required=True, help="map JSON file")
    e.add_argument("--wa", type=_positive("wa"), default=1.0)
    e.add_argument("--wb", type=_positive("wb"), default=1.0)
    e.add_argument("--alpha", type=_positive("alpha"), default=1.0)
    e.add_argument("--beta", type=_positive("beta"), default=1.0)
    e.set_defaults(handler=cmd_energy)
    return p


def _error(code: int, message: str, **extra) -> int:
    print(json.dumps(_clean({"error": message, "exit_code": code, **extra})), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "nodes", None) is None and args.command == "minimize":
        args.nodes = SHOOT_NODES if args.functional == "total" else DEFAULT_NODES
    try:
        return args.handler(args)
    except UsageError as exc:
        return _error(EXIT_USAGE, str(exc))
    except BelowNitsche as exc:
        return _error(EXIT_INFEASIBLE, str(exc), value=exc.value, threshold=exc.threshold, flag=f"--{exc.what}")
    except NonPositiveJacobian as exc:
        return _error(EXIT_MAP, str(exc), node=list(exc.node), t=exc.t, theta=exc.theta)
    except ClassViolation as exc:
        return _error(EXIT_MAP, str(exc))
    except InvalidMap as exc:
        return _error(EXIT_USAGE, str(exc))
    except (SingularStart, DomainError) as exc:
        return _error(EXIT_USAGE, str(exc))
    except AnnulusError as exc:
        return _error(EXIT_VERIFY if args.command == "verify" else EXIT_USAGE, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
