"""Physical configuration and derived angular rates.

Everything downstream works in SI with angular frequencies (rad/s).  Inputs
given as ordinary frequencies (f_m, f_w in Hz) or as a drive wavelength are
converted on ingestion and never touched again.

Coupling modes:
  direct  - the three single-photon couplings G_oc, G_oc2, G_ow are given
            explicitly (rad/s per unit of the dimensionless position q).
  derived - couplings are computed from cavity geometry and the zero-point
            spread x_zpf = sqrt(hbar/(m omega_m)):
                G_oc  = (omega_c  / L_c) * x_zpf
                G_oc2 = (omega_c2 / L_c) * x_zpf
                G_ow  = (mu omega_w / 2d) * x_zpf
            mu (participation ratio) and d (capacitor gap) are geometry
            placeholders, not measured values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import C_LIGHT, HBAR, K_B

TWO_PI = 2.0 * math.pi

# Default operating values (see README for provenance of each number).
DEFAULT_LAMBDA_C = 808e-9      # m
DEFAULT_F_M = 1e7              # Hz
DEFAULT_F_W = 1e10             # Hz
DEFAULT_L_C = 1e-3             # m
DEFAULT_P_C = 0.03             # W
DEFAULT_P_W = 0.03             # W
DEFAULT_GAMMA_M = 110.0        # rad/s
DEFAULT_KAPPA_C2 = 1e13        # rad/s
DEFAULT_MASS = 2e-11           # kg (20 ng)
DEFAULT_TEMPERATURE = 0.1      # K
DEFAULT_MU = 0.008             # dimensionless participation ratio
DEFAULT_D = 100e-9             # m capacitor gap


@dataclass(frozen=True)
class CouplingSpec:
    """How the optomechanical couplings are obtained; see module docstring."""

    mode: str = "derived"            # "direct" or "derived"
    g_oc: float | None = None        # rad/s, direct mode
    g_oc2: float | None = None
    g_ow: float | None = None
    mu: float | None = DEFAULT_MU    # derived mode geometry
    d: float | None = DEFAULT_D


@dataclass(frozen=True)
class PhysicalConfig:
    """Laboratory-facing description of the four-mode system.

    Detunings follow Delta = omega_mode - omega_drive, so a positive delta_c
    means the optical drive sits below the cavity resonance.  chi_eff is the
    effective second-harmonic coupling (the product 2 chi2 E_f; the two
    factors never appear separately).
    """

    lambda_c: float = DEFAULT_LAMBDA_C
    f_m: float = DEFAULT_F_M
    f_w: float = DEFAULT_F_W
    L_c: float = DEFAULT_L_C
    P_c: float = DEFAULT_P_C
    P_w: float = DEFAULT_P_W
    delta_c: float | None = None     # rad/s; None -> omega_m
    delta_c2: float | None = None    # rad/s; None -> omega_m
    delta_w: float | None = None     # rad/s; None -> omega_m (swept in use)
    gamma_m: float = DEFAULT_GAMMA_M
    kappa_c: float | None = None     # rad/s; None -> 0.02 omega_m
    kappa_c2: float = DEFAULT_KAPPA_C2
    kappa_w: float | None = None     # rad/s; None -> 0.03 omega_m
    mass: float = DEFAULT_MASS
    temperature: float = DEFAULT_TEMPERATURE
    chi_eff: float = 0.0             # rad/s; 0 = no second-harmonic coupling
    coupling: CouplingSpec = field(default_factory=CouplingSpec)

    @property
    def omega_m(self) -> float:
        return TWO_PI * self.f_m

    def resolved(self) -> "PhysicalConfig":
        """Fill the omega_m-relative defaults in, returning a complete config."""
        om = self.omega_m
        return PhysicalConfig(
            lambda_c=self.lambda_c, f_m=self.f_m, f_w=self.f_w, L_c=self.L_c,
            P_c=self.P_c, P_w=self.P_w,
            delta_c=om if self.delta_c is None else self.delta_c,
            delta_c2=om if self.delta_c2 is None else self.delta_c2,
            delta_w=om if self.delta_w is None else self.delta_w,
            gamma_m=self.gamma_m,
            kappa_c=0.02 * om if self.kappa_c is None else self.kappa_c,
            kappa_c2=self.kappa_c2,
            kappa_w=0.03 * om if self.kappa_w is None else self.kappa_w,
            mass=self.mass, temperature=self.temperature,
            chi_eff=self.chi_eff, coupling=self.coupling,
        )


@dataclass(frozen=True)
class DerivedRates:
    """Every rate entering the dynamics, in rad/s, plus the drive amplitudes.

    Drive amplitudes may carry a phase in principle (the solvers accept
    complex values); derive_rates itself always produces real non-negative
    ones.
    """

    omega_m: float
    omega_c: float
    omega_c2: float
    omega_w: float
    delta_c: float
    delta_c2: float
    delta_w: float
    gamma_m: float
    kappa_c: float
    kappa_c2: float
    kappa_w: float
    G_oc: float
    G_oc2: float
    G_ow: float
    E_c: complex
    E_w: complex
    chi_eff: float


class ConfigError(ValueError):
    """A configuration is structurally unusable (wrong mode fields, bad JSON)."""


def thermal_occupancy(omega: float, T: float) -> float:
    """Bose-Einstein occupancy N = 1/(exp(hbar omega / kB T) - 1).

    Exactly 0 at T = 0.  Safe in both extremes: the optical exponent at
    sub-kelvin temperatures is ~1e5 (underflows to 0, never negative) and the
    high-temperature side uses expm1, so there is no cancellation for
    hbar omega << kB T.
    """
    if omega <= 0.0:
        raise ValueError("thermal_occupancy: omega must be positive")
    if T < 0.0:
        raise ValueError("thermal_occupancy: temperature must be >= 0")
    if T == 0.0:
        return 0.0
    x = HBAR * omega / (K_B * T)
    if x > 700.0:  # exp overflows double precision; N is < 1e-300 anyway
        return 0.0
    return 1.0 / math.expm1(x)


def validate_config(cfg: PhysicalConfig) -> list[str]:
    """Return the list of violated invariants; empty list means valid."""
    out: list[str] = []

    def pos(name, value):
        if value is None:
            return  # relative default, filled by resolved(); always positive
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            out.append(f"{name} must be positive")

    pos("lambda_c", cfg.lambda_c)
    pos("f_m", cfg.f_m)
    pos("f_w", cfg.f_w)
    pos("L_c", cfg.L_c)
    pos("P_c", cfg.P_c)
    pos("P_w", cfg.P_w)
    pos("gamma_m", cfg.gamma_m)
    pos("kappa_c", cfg.kappa_c)
    pos("kappa_c2", cfg.kappa_c2)
    pos("kappa_w", cfg.kappa_w)
    pos("mass", cfg.mass)
    for name in ("delta_c", "delta_c2", "delta_w"):
        v = getattr(cfg, name)
        if v is not None and not (isinstance(v, (int, float)) and math.isfinite(v)):
            out.append(f"{name} must be a finite number")
    if not (isinstance(cfg.temperature, (int, float)) and math.isfinite(cfg.temperature)
            and cfg.temperature >= 0):
        out.append("temperature must be >= 0")
    if not (isinstance(cfg.chi_eff, (int, float)) and math.isfinite(cfg.chi_eff)
            and cfg.chi_eff >= 0):
        out.append("chi_eff must be >= 0")

    cp = cfg.coupling
    if cp.mode not in ("direct", "derived"):
        out.append("coupling.mode must be 'direct' or 'derived'")
    elif cp.mode == "direct":
        for name in ("g_oc", "g_oc2", "g_ow"):
            v = getattr(cp, name)
            if v is None or not (isinstance(v, (int, float)) and math.isfinite(v)):
                out.append(f"coupling.{name} required (finite) in direct mode")
    else:
        if cp.mu is None or not (isinstance(cp.mu, (int, float)) and math.isfinite(cp.mu)
                                 and cp.mu > 0):
            out.append("coupling.mu must be positive in derived mode")
        if cp.d is None or not (isinstance(cp.d, (int, float)) and math.isfinite(cp.d)
                                and cp.d > 0):
            out.append("coupling.d must be positive in derived mode")
    return out


def derive_rates(cfg: PhysicalConfig) -> DerivedRates:
    """Convert a validated PhysicalConfig into the rad/s rates of the model."""
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("invalid config: " + "; ".join(problems))
    cfg = cfg.resolved()

    omega_m = TWO_PI * cfg.f_m
    omega_c = TWO_PI * C_LIGHT / cfg.lambda_c
    omega_c2 = 2.0 * omega_c
    omega_w = TWO_PI * cfg.f_w

    cp = cfg.coupling
    if cp.mode == "direct":
        G_oc, G_oc2, G_ow = float(cp.g_oc), float(cp.g_oc2), float(cp.g_ow)
    else:
        if cp.mu is None or cp.d is None:
            raise ConfigError("derived coupling mode needs mu and d")
        x_zpf = math.sqrt(HBAR / (cfg.mass * omega_m))
        G_oc = omega_c / cfg.L_c * x_zpf
        G_oc2 = omega_c2 / cfg.L_c * x_zpf
        G_ow = cp.mu * omega_w / (2.0 * cp.d) * x_zpf

    E_c = math.sqrt(2.0 * cfg.P_c * cfg.kappa_c / (HBAR * omega_c))
    E_w = math.sqrt(2.0 * cfg.P_w * cfg.kappa_w / (HBAR * omega_w))

    return DerivedRates(
        omega_m=omega_m, omega_c=omega_c, omega_c2=omega_c2, omega_w=omega_w,
        delta_c=cfg.delta_c, delta_c2=cfg.delta_c2, delta_w=cfg.delta_w,
        gamma_m=cfg.gamma_m, kappa_c=cfg.kappa_c, kappa_c2=cfg.kappa_c2,
        kappa_w=cfg.kappa_w,
        G_oc=G_oc, G_oc2=G_oc2, G_ow=G_ow, E_c=E_c, E_w=E_w,
        chi_eff=cfg.chi_eff,
    )
