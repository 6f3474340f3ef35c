"""Stationary covariance and Gaussian bipartite entanglement.

The stationary covariance V of du = A u dt + dw solves A V + V A^T + D = 0.
At n = 8 a dense vectorized solve is entirely adequate: the equation becomes
(A (x) I + I (x) A) vec(V) = -vec(D), a 64x64 linear system.

Entanglement of a mode pair is decided on the reduced 4x4 covariance through
the minimum symplectic eigenvalue of the partial transpose,

    Sigma = det A + det B - 2 det C
    eta_minus = 2^{-1/2} sqrt(Sigma - sqrt(Sigma^2 - 4 det V4))

with [[A, C], [C^T, B]] the 2x2 block layout.  The pair is entangled iff
2 eta_minus < 1; log-negativity is max(0, -ln 2 eta_minus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dynamics import UnstableDrift, assess_stability


class SolveSingular(RuntimeError):
    """The Lyapunov system is numerically defective despite a stable drift."""


class InvalidState(ValueError):
    """A covariance matrix fails physicality beyond numerical tolerance."""


class BipartitePair(Enum):
    """Mode pairs; values are the (row/column) index slices into the 8x8 V."""

    MR_OC = ((0, 1), (2, 3))
    MR_MW = ((0, 1), (6, 7))
    MR_OC2 = ((0, 1), (4, 5))
    OC_MW = ((2, 3), (6, 7))
    OC_OC2 = ((2, 3), (4, 5))
    OC2_MW = ((4, 5), (6, 7))


# Verdicts within this distance of the 2 eta = 1 boundary count as separable.
# Near symplectic degeneracy (both PPT eigenvalues equal, e.g. a product
# vacuum) the discriminant sigma^2 - 4 det V4 sits at round-off scale and the
# square root amplifies that to ~sqrt(eps) ~ 1e-8 in eta, so verdicts closer
# to the boundary than that are below the formula's resolution.
BOUNDARY_TOL = 1e-7


@dataclass(frozen=True)
class EntanglementResult:
    sigma: float            # det A + det B - 2 det C of the partial transpose
    eta_minus: float
    two_eta: float
    entangled: bool         # two_eta < 1 - BOUNDARY_TOL
    log_negativity: float   # -ln two_eta when entangled, else 0


def solve_lyapunov(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Unique symmetric V with A V + V A^T + D = 0; refuses unstable A.

    The relative residual ||AV + VA^T + D||_F / ||D||_F is checked against
    1e-10 after the solve; systems failing it raise SolveSingular.
    """
    report = assess_stability(A)
    if not report.stable:
        raise UnstableDrift(
            "drift matrix is not strictly stable (spectral abscissa "
            f"{report.spectral_abscissa:.6g}); no stationary covariance")
    n = A.shape[0]
    ident = np.eye(n)
    K = np.kron(A, ident) + np.kron(ident, A)
    try:
        v = np.linalg.solve(K, -D.reshape(n * n))
    except np.linalg.LinAlgError as exc:
        raise SolveSingular("Lyapunov system singular despite stable "
                            "spectrum") from exc
    V = v.reshape(n, n)
    V = 0.5 * (V + V.T)
    resid = lyapunov_residual(A, D, V)
    if not np.isfinite(resid) or resid >= 1e-10:
        raise SolveSingular(f"Lyapunov residual {resid:.3e} exceeds 1e-10; "
                            "system numerically defective")
    return V


def lyapunov_residual(A: np.ndarray, D: np.ndarray, V: np.ndarray) -> float:
    """||A V + V A^T + D||_F / ||D||_F."""
    num = np.linalg.norm(A @ V + V @ A.T + D)
    den = np.linalg.norm(D)
    return float(num / den)


def _symplectic_form(n_modes: int) -> np.ndarray:
    blocks = [np.array([[0.0, 1.0], [-1.0, 0.0]])] * n_modes
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for k, b in enumerate(blocks):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = b
    return out


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """Moduli of the eigenvalues of i Omega V, one per mode, descending."""
    n_modes = V.shape[0] // 2
    omega = _symplectic_form(n_modes)
    eig = np.linalg.eigvals(1j * omega @ V)
    mods = np.sort(np.abs(eig))[::-1]
    return mods[::2]  # eigenvalues come in +/- pairs; keep one of each


def check_physicality(V: np.ndarray) -> dict:
    """Uncertainty-principle check: every symplectic eigenvalue >= 1/2."""
    if not np.allclose(V, V.T, rtol=0.0, atol=1e-10 * max(1.0, float(np.linalg.norm(V)))):
        raise InvalidState("covariance matrix is not symmetric")
    eigs = symplectic_eigenvalues(V)
    lo = float(np.min(eigs))
    return {"physical": bool(lo >= 0.5 - 1e-9), "min_symplectic_eig": lo}


def reduce_bipartite(V: np.ndarray, pair: BipartitePair) -> np.ndarray:
    """4x4 covariance of the two selected modes, first party first."""
    idx = pair.value[0] + pair.value[1]
    return V[np.ix_(idx, idx)]


def symplectic_eta_minus(cm4: np.ndarray) -> float:
    """Minimum symplectic eigenvalue of the partially transposed two-mode
    state (see module docstring for the closed form)."""
    a = np.linalg.det(cm4[:2, :2])
    b = np.linalg.det(cm4[2:, 2:])
    c = np.linalg.det(cm4[:2, 2:])
    v4 = np.linalg.det(cm4)
    sigma = a + b - 2.0 * c
    inner = sigma * sigma - 4.0 * v4
    guard = 1e-12 * max(1.0, sigma * sigma)
    if inner < -guard:
        raise InvalidState(f"Sigma^2 - 4 det V = {inner:.3e} < 0 beyond "
                           "tolerance; reduced state is not physical")
    inner = max(inner, 0.0)
    radicand = sigma - math.sqrt(inner)
    if radicand < -guard:
        raise InvalidState(f"eta^2 radicand {radicand:.3e} < 0 beyond "
                           "tolerance; reduced state is not physical")
    radicand = max(radicand, 0.0)
    return math.sqrt(0.5 * radicand)


def entanglement_verdict(cm4: np.ndarray) -> EntanglementResult:
    """Package the separability verdict for a reduced two-mode covariance."""
    a = np.linalg.det(cm4[:2, :2])
    b = np.linalg.det(cm4[2:, 2:])
    c = np.linalg.det(cm4[:2, 2:])
    sigma = float(a + b - 2.0 * c)
    eta = symplectic_eta_minus(cm4)
    two_eta = 2.0 * eta
    entangled = bool(two_eta < 1.0 - BOUNDARY_TOL)
    if not entangled:
        logneg = 0.0
    elif two_eta > 0.0:
        logneg = -math.log(two_eta)
    else:
        logneg = math.inf
    return EntanglementResult(sigma=sigma, eta_minus=eta, two_eta=two_eta,
                              entangled=entangled, log_negativity=logneg)
