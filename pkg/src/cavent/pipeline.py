"""End-to-end evaluation pipeline and the flat-file interfaces.

run_point chains derive_rates -> solve_steady_state -> build_drift /
build_diffusion -> assess_stability -> solve_lyapunov -> six pairwise
entanglement verdicts.  Unstable points are data, not errors: they produce a
result with verdicts absent.  run_sweep evaluates a grid (microwave detuning
in omega_m units, temperature, or mass), optionally across a thread pool
capped by the CAVENT_THREADS env var, and always emits rows in grid order.

Identical configs produce bit-identical results and byte-identical CSV files
(the elapsed_s bookkeeping field is the one exception and never reaches the
CSV).
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .dynamics import assess_stability, build_diffusion, build_drift
from .gaussian import (BipartitePair, EntanglementResult, entanglement_verdict,
                       lyapunov_residual, reduce_bipartite, solve_lyapunov)
from .params import (DEFAULT_D, DEFAULT_MU, ConfigError, CouplingSpec,
                     DerivedRates, PhysicalConfig, derive_rates,
                     validate_config)
from .steadystate import (JacobianSingular, NonConvergence, SolverOptions,
                          SteadyState, solve_steady_state)

CSV_COLUMNS = (
    "axis_value", "stable", "spectral_abscissa", "q1_re", "q1_im",
    "alpha1_abs", "alpha2_abs", "beta_abs",
    "two_eta_mr_oc", "two_eta_mr_mw", "two_eta_mr_oc2",
    "two_eta_oc_mw", "two_eta_oc_oc2", "two_eta_oc2_mw",
    "logneg_oc_mw", "lyap_residual",
)

_PAIR_COLUMNS = {
    "two_eta_mr_oc": BipartitePair.MR_OC,
    "two_eta_mr_mw": BipartitePair.MR_MW,
    "two_eta_mr_oc2": BipartitePair.MR_OC2,
    "two_eta_oc_mw": BipartitePair.OC_MW,
    "two_eta_oc_oc2": BipartitePair.OC_OC2,
    "two_eta_oc2_mw": BipartitePair.OC2_MW,
}

SWEEP_AXES = ("detuning", "temperature", "mass")
VARIANTS = ("sys1", "sys2")


@dataclass(frozen=True)
class PointResult:
    config: PhysicalConfig                      # resolved config echo
    state: SteadyState | None
    stable: bool | None                         # None = solver failed
    spectral_abscissa: float | None
    verdicts: dict[BipartitePair, EntanglementResult] | None
    lyap_residual: float | None
    error: str | None
    elapsed_s: float                            # wall clock; not part of the
                                                # determinism contract


@dataclass(frozen=True)
class SweepSpec:
    axis: str                                   # detuning | temperature | mass
    grid: tuple[float, ...]                     # detuning in omega_m units
    base: PhysicalConfig
    variant: str = "sys2"                       # sys1 forces chi_eff = G_oc2 = 0


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    result: PointResult


def apply_variant(rates: DerivedRates, variant: str) -> DerivedRates:
    """sys1 is the traditional three-mode topology: no second-harmonic
    coupling and the second mode left inert."""
    if variant == "sys1":
        return replace(rates, chi_eff=0.0, G_oc2=0.0)
    if variant == "sys2":
        return rates
    raise ValueError(f"unknown system variant {variant!r}")


def run_point(cfg: PhysicalConfig, variant: str = "sys2",
              opts: SolverOptions = SolverOptions()) -> PointResult:
    """Evaluate the full chain at one configuration.

    Solver failures propagate (NonConvergence / JacobianSingular with their
    diagnostic payloads); an unstable drift is a normal result with the
    entanglement fields absent.
    """
    t0 = time.perf_counter()
    cfg = cfg.resolved()
    rates = apply_variant(derive_rates(cfg), variant)
    state = solve_steady_state(rates, opts)
    A = build_drift(rates, state)
    D = build_diffusion(rates, cfg.temperature)
    report = assess_stability(A)
    verdicts = None
    resid = None
    if report.stable:
        V = solve_lyapunov(A, D)
        resid = lyapunov_residual(A, D, V)
        verdicts = {pair: entanglement_verdict(reduce_bipartite(V, pair))
                    for pair in BipartitePair}
    return PointResult(config=cfg, state=state, stable=report.stable,
                       spectral_abscissa=report.spectral_abscissa,
                       verdicts=verdicts, lyap_residual=resid, error=None,
                       elapsed_s=time.perf_counter() - t0)


def _config_at(spec: SweepSpec, value: float) -> PhysicalConfig:
    base = spec.base.resolved()
    if spec.axis == "detuning":
        return replace(base, delta_w=value * base.omega_m)
    if spec.axis == "temperature":
        return replace(base, temperature=value)
    if spec.axis == "mass":
        return replace(base, mass=value)
    raise ValueError(f"unknown sweep axis {spec.axis!r}")


def worker_count() -> int:
    """CAVENT_THREADS caps the sweep pool; 0 or unset picks a small default."""
    raw = os.environ.get("CAVENT_THREADS", "0")
    try:
        v = int(raw)
    except ValueError:
        v = 0
    if v <= 0:
        return min(8, os.cpu_count() or 1)
    return v


def _sweep_point(spec: SweepSpec, value: float,
                 opts: SolverOptions) -> SweepRow:
    t0 = time.perf_counter()
    cfg = _config_at(spec, value)
    try:
        result = run_point(cfg, spec.variant, opts)
    except (NonConvergence, JacobianSingular, ConfigError) as exc:
        result = PointResult(config=cfg, state=None, stable=None,
                             spectral_abscissa=None, verdicts=None,
                             lyap_residual=None,
                             error=f"{type(exc).__name__}: {exc}",
                             elapsed_s=time.perf_counter() - t0)
    return SweepRow(axis_value=value, result=result)


def run_sweep(spec: SweepSpec,
              opts: SolverOptions = SolverOptions()) -> list[SweepRow]:
    """Evaluate every grid point; failures are recorded in-row and the sweep
    continues.  Rows come back in grid order regardless of pool scheduling."""
    if spec.axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {spec.axis!r}")
    if spec.variant not in VARIANTS:
        raise ValueError(f"unknown system variant {spec.variant!r}")
    workers = worker_count()
    if workers <= 1 or len(spec.grid) <= 1:
        return [_sweep_point(spec, v, opts) for v in spec.grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda v: _sweep_point(spec, v, opts), spec.grid))


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, bool):
        return "true" if x else "false"
    return "%.17g" % x


def row_to_csv_fields(row: SweepRow) -> list[str]:
    res = row.result
    fields = {name: None for name in CSV_COLUMNS}
    fields["axis_value"] = row.axis_value
    if res.error is None:
        fields["stable"] = res.stable
        fields["spectral_abscissa"] = res.spectral_abscissa
        fields["q1_re"] = res.state.q1.real
        fields["q1_im"] = res.state.q1.imag
        fields["alpha1_abs"] = abs(res.state.alpha1)
        fields["alpha2_abs"] = abs(res.state.alpha2)
        fields["beta_abs"] = abs(res.state.beta)
        if res.verdicts is not None:
            for col, pair in _PAIR_COLUMNS.items():
                fields[col] = res.verdicts[pair].two_eta
            fields["logneg_oc_mw"] = res.verdicts[BipartitePair.OC_MW].log_negativity
            fields["lyap_residual"] = res.lyap_residual
    return [_fmt(fields[name]) for name in CSV_COLUMNS]


def write_csv(rows: list[SweepRow], path) -> None:
    """Deterministic CSV per the documented schema: fixed column order, 17
    significant digits, NA for absent values, UTF-8 with LF endings."""
    if not rows:
        raise ValueError("write_csv: empty table")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            for row in rows:
                fh.write(",".join(row_to_csv_fields(row)) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing CSV to {path}: {exc}") from exc


# --- JSON config -----------------------------------------------------------

_TOP_KEYS = ("lambda_c", "f_m", "f_w", "L_c", "P_c", "P_w", "delta_c",
             "delta_c2", "delta_w", "gamma_m", "kappa_c", "kappa_c2",
             "kappa_w", "mass", "temperature", "chi_eff", "coupling")
_COUPLING_KEYS = ("mode", "g_oc", "g_oc2", "g_ow", "mu", "d")


def config_from_dict(data: dict) -> PhysicalConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = [k for k in data if k not in _TOP_KEYS]
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    coupling = CouplingSpec()
    if "coupling" in data:
        cd = data["coupling"]
        if not isinstance(cd, dict):
            raise ConfigError("'coupling' must be an object")
        bad = [k for k in cd if k not in _COUPLING_KEYS]
        if bad:
            raise ConfigError(f"unknown coupling key(s): {', '.join(sorted(bad))}")
        mode = cd.get("mode", "derived")
        if mode == "direct":
            extra = [k for k in ("mu", "d") if k in cd]
            if extra:
                raise ConfigError("direct coupling mode does not take "
                                  + "/".join(extra))
            coupling = CouplingSpec(mode="direct", g_oc=cd.get("g_oc"),
                                    g_oc2=cd.get("g_oc2"), g_ow=cd.get("g_ow"),
                                    mu=None, d=None)
        elif mode == "derived":
            extra = [k for k in ("g_oc", "g_oc2", "g_ow") if k in cd]
            if extra:
                raise ConfigError("derived coupling mode does not take "
                                  + "/".join(extra))
            coupling = CouplingSpec(mode="derived",
                                    mu=cd.get("mu", DEFAULT_MU),
                                    d=cd.get("d", DEFAULT_D))
        else:
            raise ConfigError(f"coupling.mode must be 'direct' or 'derived', "
                              f"got {mode!r}")
    kwargs = {k: data[k] for k in data if k != "coupling"}
    cfg = PhysicalConfig(coupling=coupling, **kwargs)
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("invalid config: " + "; ".join(problems))
    return cfg


def load_config(path) -> PhysicalConfig:
    """Strict JSON config loader; unknown keys are errors, Table-defaults fill
    absent fields (echoed back by PhysicalConfig.resolved())."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg} "
                          f"(line {exc.lineno}, column {exc.colno})") from None
    return config_from_dict(data)


def config_to_dict(cfg: PhysicalConfig) -> dict:
    """Resolved config as a JSON-serializable dict (the config echo)."""
    cfg = cfg.resolved()
    cp = cfg.coupling
    if cp.mode == "direct":
        coupling = {"mode": "direct", "g_oc": cp.g_oc, "g_oc2": cp.g_oc2,
                    "g_ow": cp.g_ow}
    else:
        coupling = {"mode": "derived", "mu": cp.mu, "d": cp.d}
    return {
        "lambda_c": cfg.lambda_c, "f_m": cfg.f_m, "f_w": cfg.f_w,
        "L_c": cfg.L_c, "P_c": cfg.P_c, "P_w": cfg.P_w,
        "delta_c": cfg.delta_c, "delta_c2": cfg.delta_c2,
        "delta_w": cfg.delta_w, "gamma_m": cfg.gamma_m,
        "kappa_c": cfg.kappa_c, "kappa_c2": cfg.kappa_c2,
        "kappa_w": cfg.kappa_w, "mass": cfg.mass,
        "temperature": cfg.temperature, "chi_eff": cfg.chi_eff,
        "coupling": coupling,
    }
