"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a law or verification check failed,
2 bad input or a domain error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bundle as bd
from . import distribution as dist
from . import io as nio
from . import laws
from . import minkowski as mk
from .cone import ConePoint
from .errors import NullBundleError, OutOfDomain, ParseError
from .heap import ternary as _ternary

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DEFAULT_EVENTS = {
    "minkowski": [0.0, 0.0, 0.0, 0.0],
    "schwarzschild": [0.0, 2.0, np.pi / 2, 0.0],
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    spacetime: str = "minkowski"
    seed: int = 42
    trials: int = 1000
    tol: float | None = None
    step: float = 1e-3
    out: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.step > 0:
            raise ValueError("step must be positive")


def default_tol(fallback: float) -> float:
    env = os.environ.get("NULLBUNDLE_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise ParseError(f"NULLBUNDLE_TOL={env!r} is not a number") from None
    return fallback


def _emit(text: str, out: str | None, name: str | None = None):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if name is not None:
        path.mkdir(parents=True, exist_ok=True)
        path = path / name
    path.write_text(text)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


# -- commands ------------------------------------------------------------------

def cmd_classify(args) -> int:
    st = bd.get_spacetime(args.spacetime)
    data = nio.load_json(_read_input(args.input))
    event = args.event
    if isinstance(data, dict):
        event = data.get("event", event)
        vectors = data.get("vectors")
    else:
        vectors = data
    if not isinstance(vectors, list):
        raise ParseError("expected a list of 4-component vectors")
    p = st.event(event if event is not None else DEFAULT_EVENTS[st.name])
    tol = args.tol if args.tol is not None else default_tol(mk.DEFAULT_TOL)
    out = []
    for v in vectors:
        try:
            v = np.asarray(v, dtype=float)
            if v.shape != (4,):
                raise ValueError
        except (TypeError, ValueError):
            raise ParseError(f"not a 4-component vector: {v!r}") from None
        cls = st.classify(p, v, tol)
        orient = None
        if cls is not mk.CausalClass.SPACELIKE:
            orient = st.orientation(p, v, tol).value
        label = cls.value if orient is None else f"{cls.value}, {orient}"
        out.append({"vector": v.tolist(), "class": cls.value, "orientation": orient,
                    "label": label})
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_verify_laws(args) -> int:
    st = bd.get_spacetime(args.spacetime)
    cfg = RunConfig("verify-laws", st.name, args.seed, args.trials, args.tol)
    tol = cfg.tol if cfg.tol is not None else default_tol(laws.LAW_TOL)
    op = laws.corrupted_ternary if args.corrupt_ternary else _ternary
    reports = laws.verify_laws(st, cfg.seed, cfg.trials, tol, suites=args.suite, ternary=op)
    _emit(laws.reports_json(reports), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def schwarzschild_demo(r_min: float, r_max: float, grid: int, step: float, t_end: float = 5.0):
    """Vierbein table, trivialisation samples and a radial null ray.

    Returns ``(files, summary)`` where ``files`` maps file names to CSV text.
    """
    if grid < 1:
        raise ValueError("grid needs at least one point")
    if r_min <= 1.0 or r_max <= 1.0:
        raise OutOfDomain(f"r-grid [{r_min}, {r_max}] must lie in (1, inf)")
    st = bd.schwarzschild()
    frame = bd.GlobalFrame(st.vierbein)
    r = np.linspace(r_min, r_max, grid)
    coords = np.column_stack([np.zeros(grid), r, np.full(grid, np.pi / 2), np.zeros(grid)])
    st.chart.check(coords)
    e = st.vierbein(coords)
    g = st.metric(coords)
    ortho = np.max(np.abs(np.swapaxes(e, 1, 2) @ g @ e - mk.ETA), axis=(1, 2))
    vierbein_rows = [[r[i], np.pi / 2, e[i, 0, 0], e[i, 1, 1], e[i, 2, 2], e[i, 3, 3], ortho[i]]
                     for i in range(grid)]
    vierbein_csv = nio.write_csv(["r", "theta", "e_t_t", "e_r_r", "e_theta_theta",
                                  "e_phi_phi", "orthonormality_residual"], vierbein_rows)

    fibres = [ConePoint(1, [1.0, 0.0, 0.0]), ConePoint(1, [0.0, 1.0, 0.0]),
              ConePoint(-1, [0.0, 0.0, 1.0]), ConePoint(1, [0.6, 0.0, 0.8])]
    phi_rows = []
    worst_null = 0.0
    orient_ok = True
    for x in coords:
        for c in fibres:
            w = bd.global_triv(frame, x, c)
            gx = st.metric(x)
            q = float(w @ gx @ w)
            worst_null = max(worst_null, abs(q) / float(w @ w))
            future = float(w @ gx @ st.tau(x)) < 0
            orient_ok &= future == (c.sigma > 0)
            phi_rows.append([x[1], c.sigma, *c.v, *w, q])
    phi_csv = nio.write_csv(["r", "sigma", "v1", "v2", "v3", "w0", "w1", "w2", "w3", "g_ww"],
                            phi_rows)

    ode = dist.ExplicitNullODE(dist.schwarzschild_radial_field(st))
    p0 = st.event([0.0, 2.0, np.pi / 2, 0.0])
    curve = dist.integrate_explicit(ode, p0, t_end, step)
    inv = dist.radial_invariant(curve.x)
    summary = {
        "grid": grid,
        "max_orthonormality_residual": float(ortho.max()),
        "max_phi_nullness": worst_null,
        "phi_orientation_ok": bool(orient_ok),
        "trajectory_samples": len(curve),
        "trajectory_end": curve.x[-1].tolist(),
        "radial_invariant_drift": float(np.max(np.abs(inv - inv[0]))),
        "max_nullness_drift": float(dist.nullness_drift(st, curve.x, curve.dx).max()),
    }
    summary["pass"] = bool(summary["max_orthonormality_residual"] <= 1e-10
                           and worst_null <= 1e-10 and orient_ok
                           and summary["radial_invariant_drift"] <= 1e-6
                           and summary["max_nullness_drift"] <= 1e-8)
    files = {"vierbein.csv": vierbein_csv, "phi.csv": phi_csv,
             "trajectory.csv": nio.curve_to_csv(curve)}
    return files, summary


def cmd_schwarzschild_demo(args) -> int:
    files, summary = schwarzschild_demo(args.r_min, args.r_max, args.grid, args.step, args.t_end)
    if args.out is None:
        for name, text in files.items():
            sys.stdout.write(f"# {name}\n{text}")
    else:
        for name, text in files.items():
            _emit(text, args.out, name)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if summary["pass"] else EXIT_FAIL


def prolong_table(curve: dist.CurveSamples, st, tol: float):
    """Prolongation arrays plus, for future-directed samples, max |Theta| on the kernel basis."""
    sigma, v = dist.prolong_arrays(curve, st.vierbein, tol)
    frames = st.vierbein(curve.x)
    duals = np.linalg.inv(frames)
    theta_max = np.full(len(curve), np.nan)
    for i in range(len(curve)):
        if sigma[i] > 0:
            c = ConePoint(1, v[i])
            th = dist.theta_components(c, duals[i])
            basis = dist.kernel_basis_coordinates(c, frames[i])
            theta_max[i] = np.max(np.abs(basis[:, :4] @ th))
    return sigma, v, theta_max


def cmd_prolong(args) -> int:
    st = bd.get_spacetime(args.spacetime)
    curve = nio.curve_from_csv(_read_input(args.input), st.chart)
    tol = args.tol if args.tol is not None else default_tol(mk.DEFAULT_TOL)
    sigma, v, theta_max = prolong_table(curve, st, tol)
    text = nio.bundle_curve_to_csv(curve.t, curve.x, sigma, v, ["theta_kernel_max"], theta_max)
    _emit(text, args.out)
    defined = theta_max[~np.isnan(theta_max)]
    return EXIT_OK if np.all(defined <= 1e-10) else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spacetime", default="minkowski", choices=sorted(bd.SPACETIMES))
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance override (default: NULLBUNDLE_TOL or per-suite values)")
    common.add_argument("--out", default=None, help="output file (directory for the demo)")

    parser = argparse.ArgumentParser(prog="nullbundle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="causal class and orientation of vectors")
    p.add_argument("input", help="JSON list of coordinate vectors, or {'event':..., 'vectors':...}; '-' for stdin")
    p.add_argument("--event", type=float, nargs=4, default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-laws", parents=[common], help="run the randomized law suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--suite", action="append", choices=list(laws.SUITES), default=None)
    p.add_argument("--corrupt-ternary", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_laws)

    p = sub.add_parser("schwarzschild-demo", parents=[common],
                       help="vierbein table, trivialisation samples, radial null ray")
    p.add_argument("--r-min", type=float, default=1.1)
    p.add_argument("--r-max", type=float, default=10.0)
    p.add_argument("--grid", type=int, default=20)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=5.0)
    p.set_defaults(func=cmd_schwarzschild_demo)

    p = sub.add_parser("prolong", parents=[common], help="null tangent prolongation of a curve CSV")
    p.add_argument("input", help="CSV with t,x0..x3 and optional dx0..dx3; '-' for stdin")
    p.set_defaults(func=cmd_prolong)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1 or (args.tol is not None and not args.tol > 0):
        parser.error("trials must be >= 1 and tol > 0")
    try:
        return args.func(args)
    except (NullBundleError, ValueError) as exc:
        sys.stderr.write(f"nullbundle: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
