"""Shared helpers: hand-built rate sets, operating-point configs, and random
Gaussian-state factories used by several test modules."""

import numpy as np
import scipy.linalg

from cavent.params import CouplingSpec, DerivedRates, PhysicalConfig

OMEGA_M = 2.0 * np.pi * 1e7  # rad/s, the reference mechanical frequency


def unit_rates(**over):
    """All-ones rate set with couplings off; entry-level checks stay legible
    when every rate is 1."""
    base = dict(omega_m=1.0, omega_c=1.0, omega_c2=2.0, omega_w=1.0,
                delta_c=1.0, delta_c2=1.0, delta_w=1.0, gamma_m=1.0,
                kappa_c=1.0, kappa_c2=1.0, kappa_w=1.0,
                G_oc=0.0, G_oc2=0.0, G_ow=0.0, E_c=1.0, E_w=1.0, chi_eff=0.0)
    base.update(over)
    return DerivedRates(**base)


def operating_config(delta_w_units=None, *, g_oc=130.0, g_ow=0.3, g_oc2=0.0,
                     chi_eff=0.0, temperature=0.1, mass=2e-11):
    """Direct-coupling operating point (see README); delta_w in omega_m units."""
    delta_w = None if delta_w_units is None else delta_w_units * OMEGA_M
    return PhysicalConfig(
        delta_w=delta_w, temperature=temperature, mass=mass, chi_eff=chi_eff,
        coupling=CouplingSpec(mode="direct", g_oc=g_oc, g_oc2=g_oc2,
                              g_ow=g_ow, mu=None, d=None))


def zero_coupling_config(**kw):
    return operating_config(g_oc=0.0, g_ow=0.0, g_oc2=0.0, **kw)


def random_stable_system(rng, n=8):
    """Random strictly stable drift and a strictly positive diffusion."""
    A = rng.standard_normal((n, n))
    shift = max(float(np.linalg.eigvals(A).real.max()), 0.0)
    A = A - (shift + 0.5 + rng.uniform(0.0, 1.0)) * np.eye(n)
    B = rng.standard_normal((n, n))
    D = B @ B.T + 0.1 * np.eye(n)
    return A, D


def symplectic_form(n_modes):
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = J
    return out


def random_symplectic(rng, n_modes, scale=0.4):
    """Product of exponentials of the symplectic Lie algebra (Omega H with H
    symmetric); two factors give a decent spread over the group."""
    n = 2 * n_modes
    om = symplectic_form(n_modes)
    S = np.eye(n)
    for _ in range(2):
        H = rng.standard_normal((n, n)) * scale
        S = S @ scipy.linalg.expm(om @ (0.5 * (H + H.T)))
    return S


def random_physical_cm4(rng, nu_max=4.0):
    """Williamson-random two-mode covariance S diag(nu) S^T, nu >= 1/2."""
    nus = rng.uniform(0.5, nu_max, size=2)
    S = random_symplectic(rng, 2)
    return S @ np.diag(np.repeat(nus, 2)) @ S.T


def ppt_eta_minus_dense(cm4):
    """Independent route to the partial-transpose minimum symplectic
    eigenvalue: flip the second party's momentum and eigensolve i Omega V."""
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    vt = flip @ cm4 @ flip
    mods = np.sort(np.abs(np.linalg.eigvals(1j * symplectic_form(2) @ vt)))
    return 0.5 * (mods[0] + mods[1])  # the minimum shows up as a +/- pair


def tmsv_cm4(r):
    """Two-mode squeezed vacuum with squeezing parameter r."""
    a = 0.5 * np.cosh(2.0 * r) * np.eye(2)
    c = 0.5 * np.sinh(2.0 * r) * np.diag([1.0, -1.0])
    return np.block([[a, c], [c, a]])
