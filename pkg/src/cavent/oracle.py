"""Stochastic cross-check of the Lyapunov covariance.

Ensembles of linear-SDE trajectories du = A u dt + dw, <dw dw^T> = D dt, all
started at u = 0, integrated to t_end; the sample covariance of the final
states is compared against the Lyapunov solution entry by entry in z-score
units.  This path shares no linear-algebra route with solve_lyapunov beyond
the eigensolver, so a sign or factor slip in either one shows up as z >> 5.

Two integrators:

  euler - plain Euler-Maruyama, u' = u + A u dt + N(0, D dt).  Transparent,
          but only conditionally stable: for a lightly damped oscillator the
          step must satisfy dt < 2|Re lambda|/|lambda|^2, far below the
          0.1/spectral-radius cap, so high-Q systems are out of its reach.
  exact - one-step exact discretization u' = e^{A dt} u + N(0, Q(dt)) with
          Q(dt) = int_0^dt e^{As} D e^{A^T s} ds evaluated in the eigenbasis
          of A.  Unconditionally stable and unbiased at any dt, which makes
          stiff systems (damping rates spanning 1e2..1e13 rad/s) affordable.

Determinism: trajectory j draws from a Philox stream seeded with
seed XOR j, so estimates are bit-identical for identical inputs regardless
of batch partitioning; batch size is fixed so reduction order never varies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import UnstableDrift, assess_stability

BATCH = 1024  # trajectories per vectorized block; fixed for determinism


class StepTooLarge(ValueError):
    """dt violates the 0.1/spectral-radius cap of the euler method."""


@dataclass(frozen=True)
class EnsembleEstimate:
    mean: np.ndarray      # (n,) sample mean at t_end
    cov: np.ndarray       # (n, n) sample covariance at t_end
    stderr: np.ndarray    # (n, n) per-entry standard errors of cov
    n_traj: int
    t_end: float
    dt: float
    seed: int
    method: str


def _psd_sqrt(M: np.ndarray) -> np.ndarray:
    """Symmetric factor L with L L^T = M for positive semidefinite M."""
    M = 0.5 * (M + M.T)
    w, U = np.linalg.eigh(M)
    w = np.clip(w, 0.0, None)
    return U * np.sqrt(w)


def _exact_propagator(A: np.ndarray, D: np.ndarray, dt: float):
    """(F, Q) with F = e^{A dt} and Q the exact one-step noise covariance."""
    lam, W = np.linalg.eig(A)
    Winv = np.linalg.inv(W)
    F = np.real(W @ np.diag(np.exp(lam * dt)) @ Winv)
    # Q in the eigenbasis: M_ij * (e^{(li+lj)dt} - 1)/(li+lj)
    M = Winv @ D @ Winv.T
    z = np.add.outer(lam, lam)  # Re z < 0 for stable A, never zero
    Q_eig = M * (np.exp(z * dt) - 1.0) / z
    Q = np.real(W @ Q_eig @ W.T)
    return F, 0.5 * (Q + Q.T)


def suggested_times(A: np.ndarray, method: str = "euler"):
    """Default (dt, t_end) honoring the settling contract for either method."""
    report = assess_stability(A)
    if not report.stable:
        raise UnstableDrift("cannot suggest integration times for an "
                            "unstable drift")
    abscissa = abs(report.spectral_abscissa)
    radius = float(np.max(np.abs(report.eigenvalues)))
    t_end = 10.0 / abscissa
    if method == "euler":
        dt = 0.1 / radius
    else:
        dt = t_end / 1000.0
    return dt, t_end


def simulate_ensemble(A: np.ndarray, D: np.ndarray, dt: float, t_end: float,
                      n_traj: int, seed: int,
                      method: str = "euler") -> EnsembleEstimate:
    """Ensemble statistics of the linear SDE at t_end; see module docstring.

    t_end is rounded up to a whole number of steps.  Preconditions: A stable
    (UnstableDrift), t_end >= 10/|spectral abscissa| (settling contract), and
    for the euler method dt <= 0.1/spectral-radius (StepTooLarge).
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    report = assess_stability(A)
    if not report.stable:
        raise UnstableDrift("refusing to integrate an unstable drift; the "
                            "ensemble covariance would diverge")
    if method not in ("euler", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if t_end < 10.0 / abs(report.spectral_abscissa):
        raise ValueError("t_end violates the settling contract "
                         "t_end >= 10/|spectral abscissa|")
    if method == "euler":
        radius = float(np.max(np.abs(report.eigenvalues)))
        if dt > 0.1 / radius:
            raise StepTooLarge(f"dt = {dt:.3e} exceeds 0.1/spectral radius "
                               f"= {0.1 / radius:.3e}")
        step_mat = np.eye(n) + A * dt
        noise_fac = _psd_sqrt(D * dt)
    else:
        step_mat, Q = _exact_propagator(A, D, dt)
        noise_fac = _psd_sqrt(Q)

    n_steps = int(np.ceil(t_end / dt - 1e-12))
    finals = np.empty((n_traj, n))
    for start in range(0, n_traj, BATCH):
        stop = min(start + BATCH, n_traj)
        block = stop - start
        normals = np.empty((block, n_steps, n))
        for j in range(start, stop):
            gen = np.random.Generator(np.random.Philox(seed ^ j))
            normals[j - start] = gen.standard_normal((n_steps, n))
        U = np.zeros((block, n))
        for k in range(n_steps):
            U = U @ step_mat.T + normals[:, k, :] @ noise_fac.T
        finals[start:stop] = U

    mean = finals.mean(axis=0)
    centered = finals - mean
    cov = centered.T @ centered / (n_traj - 1)
    # per-entry standard error from the empirical spread of the products
    prods = centered[:, :, None] * centered[:, None, :]
    stderr = prods.std(axis=0, ddof=1) / np.sqrt(n_traj)
    return EnsembleEstimate(mean=mean, cov=cov, stderr=stderr, n_traj=n_traj,
                            t_end=n_steps * dt, dt=dt, seed=seed,
                            method=method)


def compare_cm(V_ref: np.ndarray, est: EnsembleEstimate) -> dict:
    """Entry-wise agreement report between a covariance and an MC estimate.

    max_z is the largest |est.cov - V_ref| / stderr over entries; entries
    whose stderr is exactly 0 are compared absolutely at 1e-12 and score
    z = 0 or inf accordingly.  max_rel is the largest deviation relative to
    the largest reference entry.  pass iff max_z < 5.
    """
    diff = np.abs(est.cov - V_ref)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(est.stderr > 0.0, diff / est.stderr,
                     np.where(diff <= 1e-12, 0.0, np.inf))
    scale = float(np.max(np.abs(V_ref)))
    max_rel = float(np.max(diff) / scale) if scale > 0.0 else float(np.max(diff))
    max_z = float(np.max(z))
    return {"max_z": max_z, "max_rel": max_rel, "pass": bool(max_z < 5.0)}
