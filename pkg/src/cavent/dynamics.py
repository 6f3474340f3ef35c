"""Linearized fluctuation dynamics: drift matrix, diffusion matrix, stability.

Fluctuations are ordered u = (dq, dp, dX1, dP1, dX2, dP2, dXb, dPb) with
quadratures X = (a + a*)/sqrt(2), P = (a - a*)/(i sqrt2); vacuum variance is
1/2 in this convention.  The drift A generates du/dt = A u + n(t) around a
given steady state; the diffusion D is the intensity of the white noise n,
<n_i(t) n_j(t')>_sym = D_ij delta(t - t').

Couplings enter in two distinct roles and must not be confused:
  - field-enhanced couplings sqrt(2) G |amplitude| couple the mechanical
    position to the cavity quadratures (off-diagonal rows/columns), and
  - the bare couplings G shift each cavity's effective detuning by G * q1
    (the static radiation-pressure displacement), exactly as obtained by
    linearizing the annihilation-operator equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import DerivedRates, thermal_occupancy
from .steadystate import SteadyState

SQRT2 = math.sqrt(2.0)

# Eigenvalue real parts must clear this many eps times ||A||_F to count as
# strictly negative; keeps round-off from minting stability verdicts while
# staying far below the smallest physical damping rate (gamma_m/2).
STABILITY_EPS_FACTOR = 256.0


class UnstableDrift(RuntimeError):
    """No stationary covariance exists; refusing to pretend otherwise."""


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    eigenvalues: np.ndarray      # 8 complex values, sorted by real part desc
    spectral_abscissa: float     # max real part, rad/s


def build_drift(rates: DerivedRates, state: SteadyState) -> np.ndarray:
    """8x8 drift matrix at the given steady state.

    The caller is expected to pass a state whose residual is within solver
    tolerance; the entries are evaluated as given either way.
    """
    r = rates
    q1r, q1i = state.q1.real, state.q1.imag
    a1r, a1i = state.alpha1.real, state.alpha1.imag
    a2r, a2i = state.alpha2.real, state.alpha2.imag
    br, bi = state.beta.real, state.beta.imag
    chi = r.chi_eff

    G_ocr = SQRT2 * r.G_oc * a1r
    G_oci = SQRT2 * r.G_oc * a1i
    G_ocr2 = SQRT2 * r.G_oc2 * a2r
    G_oci2 = SQRT2 * r.G_oc2 * a2i
    G_oor = SQRT2 * r.G_ow * br
    G_ooi = SQRT2 * r.G_ow * bi

    A1 = -r.kappa_c - r.G_oc * q1i + chi * a2i
    A2 = r.delta_c - r.G_oc * q1r - chi * a2r
    A3 = -r.delta_c + r.G_oc * q1r - chi * a2r
    A4 = -r.kappa_c - r.G_oc * q1i - chi * a2i
    A5 = -r.kappa_c2 - r.G_oc2 * q1i
    A6 = r.delta_c2 - r.G_oc2 * q1r
    A7 = -r.delta_c2 + r.G_oc2 * q1r
    A8 = -r.kappa_c2 - r.G_oc2 * q1i
    A9 = -r.kappa_w - r.G_ow * q1i
    A10 = r.delta_w - r.G_ow * q1r
    A11 = -r.delta_w + r.G_ow * q1r
    A12 = -r.kappa_w - r.G_ow * q1i

    return np.array([
        [0.0,      r.omega_m,  0.0,        0.0,        0.0,        0.0,       0.0,    0.0],
        [-r.omega_m, -r.gamma_m, G_ocr,    G_oci,      G_ocr2,     G_oci2,    G_oor,  G_ooi],
        [-G_oci,   0.0,        A1,         A2,         -chi * a1i, chi * a1r, 0.0,    0.0],
        [G_ocr,    0.0,        A3,         A4,         -chi * a1r, -chi * a1i, 0.0,   0.0],
        [-G_oci2,  0.0,        chi * a1i,  chi * a1r,  A5,         A6,        0.0,    0.0],
        [G_ocr2,   0.0,        -chi * a1r, chi * a1i,  A7,         A8,        0.0,    0.0],
        [-G_ooi,   0.0,        0.0,        0.0,        0.0,        0.0,       A9,     A10],
        [G_oor,    0.0,        0.0,        0.0,        0.0,        0.0,       A11,    A12],
    ])


def build_diffusion(rates: DerivedRates, T: float) -> np.ndarray:
    """Diagonal noise intensity matrix at bath temperature T (K).

    dq carries no direct noise (first entry exactly 0); dp sees the thermal
    Brownian force gamma_m (2N(omega_m)+1); each cavity quadrature pair sees
    kappa (2N(omega)+1) at its own resonance frequency.
    """
    if T < 0.0:
        raise ValueError("build_diffusion: temperature must be >= 0")
    r = rates
    n_m = thermal_occupancy(r.omega_m, T)
    n_c = thermal_occupancy(r.omega_c, T)
    n_c2 = thermal_occupancy(r.omega_c2, T)
    n_w = thermal_occupancy(r.omega_w, T)
    diag = [
        0.0,
        r.gamma_m * (2.0 * n_m + 1.0),
        r.kappa_c * (2.0 * n_c + 1.0), r.kappa_c * (2.0 * n_c + 1.0),
        r.kappa_c2 * (2.0 * n_c2 + 1.0), r.kappa_c2 * (2.0 * n_c2 + 1.0),
        r.kappa_w * (2.0 * n_w + 1.0), r.kappa_w * (2.0 * n_w + 1.0),
    ]
    return np.diag(diag)


def assess_stability(A: np.ndarray) -> StabilityReport:
    """Eigenvalues of A and the strict-stability verdict.

    Stable iff every real part is below -tol with tol an eps-scaled multiple
    of ||A||_F, so that round-off in the eigensolve can never upgrade a
    marginal system to stable.
    """
    try:
        eig = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"eigen-solve failed for drift matrix:\n{A}") from exc
    order = np.argsort(-eig.real, kind="stable")
    eig = eig[order]
    abscissa = float(eig[0].real)
    tol = STABILITY_EPS_FACTOR * np.finfo(float).eps * float(np.linalg.norm(A))
    return StabilityReport(stable=bool(abscissa < -tol), eigenvalues=eig,
                           spectral_abscissa=abscissa)
