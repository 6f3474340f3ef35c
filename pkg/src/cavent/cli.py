"""Command-line front end.

Subcommands:
  steady        print the steady state and its residual
  stability     print drift eigenvalues and the stability verdict
  entangle      full single-point evaluation (text or JSON)
  sweep         grid sweep to CSV (detuning in omega_m units, temperature, mass)
  oracle-check  Lyapunov-vs-Monte-Carlo agreement report
  validate      config file validation

All subcommands accept an optional JSON config path; without one the built-in
defaults are used.  Exit status 0 on success, 1 on any reported failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dynamics import assess_stability, build_diffusion, build_drift
from .gaussian import BipartitePair
from .oracle import compare_cm, simulate_ensemble, suggested_times
from .params import ConfigError, PhysicalConfig, derive_rates, validate_config
from .pipeline import (SweepSpec, config_to_dict, load_config, run_point,
                       run_sweep, write_csv)
from .steadystate import (JacobianSingular, NonConvergence,
                          solve_steady_state, steady_state_residual,
                          relative_residual)

_PAIR_NAMES = {
    BipartitePair.MR_OC: "mr_oc", BipartitePair.MR_MW: "mr_mw",
    BipartitePair.MR_OC2: "mr_oc2", BipartitePair.OC_MW: "oc_mw",
    BipartitePair.OC_OC2: "oc_oc2", BipartitePair.OC2_MW: "oc2_mw",
}


def _load(path: str | None) -> PhysicalConfig:
    if path is None:
        return PhysicalConfig()
    return load_config(path)


def _cplx(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def cmd_steady(args) -> int:
    cfg = _load(args.config)
    rates = derive_rates(cfg)
    state = solve_steady_state(rates)
    res = steady_state_residual(rates, state)
    rel = relative_residual(rates, state)
    if args.format == "json":
        print(json.dumps({
            "q1": _cplx(state.q1), "p1": state.p1,
            "alpha1": _cplx(state.alpha1), "alpha2": _cplx(state.alpha2),
            "beta": _cplx(state.beta),
            "residual": res, "relative_residual": rel,
        }, indent=2))
    else:
        print(f"q1     = {state.q1.real:.12g} {state.q1.imag:+.3g}j")
        print(f"p1     = {state.p1:.12g}")
        print(f"alpha1 = {state.alpha1:.12g}  |alpha1| = {abs(state.alpha1):.12g}")
        print(f"alpha2 = {state.alpha2:.12g}  |alpha2| = {abs(state.alpha2):.12g}")
        print(f"beta   = {state.beta:.12g}  |beta|   = {abs(state.beta):.12g}")
        print(f"residual = {res:.6g}  (relative {rel:.6g})")
    return 0


def cmd_stability(args) -> int:
    cfg = _load(args.config)
    rates = derive_rates(cfg)
    state = solve_steady_state(rates)
    report = assess_stability(build_drift(rates, state))
    print("eigenvalues (rad/s, by real part):")
    for ev in report.eigenvalues:
        print(f"  {ev.real:+.9e}  {ev.imag:+.9e}j")
    print(f"spectral abscissa = {report.spectral_abscissa:.9e}")
    print("verdict: " + ("stable" if report.stable else "UNSTABLE"))
    return 0


def cmd_entangle(args) -> int:
    cfg = _load(args.config)
    result = run_point(cfg, variant=args.system)
    if args.format == "json":
        out = {
            "config": config_to_dict(result.config),
            "state": {
                "q1": _cplx(result.state.q1), "p1": result.state.p1,
                "alpha1": _cplx(result.state.alpha1),
                "alpha2": _cplx(result.state.alpha2),
                "beta": _cplx(result.state.beta),
            },
            "stable": result.stable,
            "spectral_abscissa": result.spectral_abscissa,
            "pairs": None, "lyap_residual": result.lyap_residual,
        }
        if result.verdicts is not None:
            out["pairs"] = {
                _PAIR_NAMES[p]: {
                    "sigma": v.sigma, "eta_minus": v.eta_minus,
                    "two_eta": v.two_eta, "entangled": v.entangled,
                    "log_negativity": v.log_negativity,
                } for p, v in result.verdicts.items()}
        print(json.dumps(out, indent=2))
        return 0
    print(f"stable: {result.stable}   spectral abscissa: "
          f"{result.spectral_abscissa:.6e} rad/s")
    if result.verdicts is None:
        print("no stationary covariance; entanglement not defined")
        return 0
    print(f"lyapunov residual: {result.lyap_residual:.3e}")
    print(f"{'pair':8s} {'two_eta':>22s} {'entangled':>10s} {'logneg':>22s}")
    for pair in BipartitePair:
        v = result.verdicts[pair]
        print(f"{_PAIR_NAMES[pair]:8s} {v.two_eta:22.15g} "
              f"{str(v.entangled):>10s} {v.log_negativity:22.15g}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args.config)
    if args.points < 1:
        print("sweep: --points must be >= 1", file=sys.stderr)
        return 1
    grid = tuple(np.linspace(args.start, args.stop, args.points).tolist())
    spec = SweepSpec(axis=args.axis, grid=grid, base=cfg, variant=args.system)
    rows = run_sweep(spec)
    write_csv(rows, args.out)
    failed = sum(1 for r in rows if r.result.error is not None)
    unstable = sum(1 for r in rows if r.result.stable is False)
    print(f"wrote {len(rows)} rows to {args.out} "
          f"({unstable} unstable, {failed} failed)")
    return 0


def cmd_oracle_check(args) -> int:
    cfg = _load(args.config)
    rates = derive_rates(cfg)
    state = solve_steady_state(rates)
    A = build_drift(rates, state)
    D = build_diffusion(rates, cfg.resolved().temperature)
    report = assess_stability(A)
    if not report.stable:
        print("drift is unstable; no stationary covariance to check",
              file=sys.stderr)
        return 1
    from .gaussian import solve_lyapunov
    V = solve_lyapunov(A, D)
    dt, t_end = suggested_times(A, args.method)
    if args.dt is not None:
        dt = args.dt
    if args.t_end is not None:
        t_end = args.t_end
    est = simulate_ensemble(A, D, dt=dt, t_end=t_end, n_traj=args.n_traj,
                            seed=args.seed, method=args.method)
    rep = compare_cm(V, est)
    print(f"method={args.method} n_traj={args.n_traj} dt={dt:.6g} "
          f"t_end={t_end:.6g} seed={args.seed}")
    print(f"max |z| = {rep['max_z']:.3f}   max rel dev = {rep['max_rel']:.3e}")
    print("agreement: " + ("PASS" if rep["pass"] else "FAIL"))
    return 0 if rep["pass"] else 1


def cmd_validate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"invalid: {exc}")
        return 1
    problems = validate_config(cfg)
    if problems:
        for p in problems:
            print(f"invalid: {p}")
        return 1
    print("valid")
    return 0


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="cavent",
        description="Steady states, stability, and Gaussian entanglement of "
                    "a driven four-mode optomechanical system.")
    sub = root.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="steady state and residual")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_steady)

    p = sub.add_parser("stability", help="drift eigenvalues and verdict")
    p.add_argument("config", nargs="?", default=None)
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("entangle", help="single-point entanglement verdicts")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--system", choices=("sys1", "sys2"), default="sys2")
    p.set_defaults(fn=cmd_entangle)

    p = sub.add_parser("sweep", help="grid sweep to CSV")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--axis", choices=("detuning", "temperature", "mass"),
                   required=True)
    p.add_argument("--from", dest="start", type=float, required=True,
                   help="first grid value (detuning axis: units of omega_m)")
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--system", choices=("sys1", "sys2"), default="sys2")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("oracle-check", help="Lyapunov vs Monte-Carlo report")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--n-traj", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--method", choices=("euler", "exact"), default="exact")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-end", dest="t_end", type=float, default=None)
    p.set_defaults(fn=cmd_oracle_check)

    p = sub.add_parser("validate", help="validate a config file")
    p.add_argument("config")
    p.set_defaults(fn=cmd_validate)
    return root


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NonConvergence, JacobianSingular) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
