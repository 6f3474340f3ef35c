"""Classical steady state of the driven four-mode system.

The mean-field equations (momentum eliminated, p1 = 0) are

    omega_m q1 = G_ow |beta|^2 + G_oc |alpha1|^2 + G_oc2 |alpha2|^2
    0 = -(i delta_c  + kappa_c ) alpha1 + i G_oc  q1 alpha1
        - i chi_eff conj(alpha1) alpha2 + E_c
    0 = -(i delta_c2 + kappa_c2) alpha2 + i G_oc2 q1 alpha2
        - i (chi_eff/2) alpha1^2 + 0
    0 = -(i delta_w  + kappa_w ) beta   + i G_ow  q1 beta + E_w

solved on the real/imaginary split of (q1, alpha1, alpha2, beta) by Newton
iteration with an analytic Jacobian, embedded in a homotopy that ramps the
couplings and chi_eff from zero (where the solution is known in closed form)
to their full values.  The root returned is therefore the branch continuously
connected to the decoupled solution; the radiation-pressure cubic may have
further roots, which enumerate_roots reports in the single-cavity case.

q1 is carried as a complex number for uniformity with the fluctuation
dynamics; the imaginary part is an unknown of the solve and comes out zero to
round-off (a warning fires if it ever does not).
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .params import DerivedRates


@dataclass(frozen=True)
class SteadyState:
    q1: complex                 # dimensionless mean position
    p1: float                   # dimensionless mean momentum, identically 0
    alpha1: complex             # optical cavity amplitude
    alpha2: complex             # second-harmonic mode amplitude
    beta: complex               # microwave cavity amplitude
    other_q1_roots: tuple[float, ...] | None = None


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-12          # relative residual target
    max_iter: int = 200         # total Newton iteration budget
    continuation_steps: int = 10
    enumerate_roots: bool = False


class NonConvergence(RuntimeError):
    """Newton ran out of its iteration budget; carries the last iterate."""

    def __init__(self, message: str, state: SteadyState, residual: float):
        super().__init__(message)
        self.state = state
        self.residual = residual


class JacobianSingular(RuntimeError):
    """Newton step unsolvable even after continuation-step refinement."""


def decoupled_steady_state(rates: DerivedRates) -> SteadyState:
    """Closed-form steady state with every coupling and chi_eff set to zero."""
    alpha1 = rates.E_c / (rates.kappa_c + 1j * rates.delta_c)
    beta = rates.E_w / (rates.kappa_w + 1j * rates.delta_w)
    return SteadyState(q1=0.0 + 0.0j, p1=0.0, alpha1=alpha1, alpha2=0.0 + 0.0j,
                       beta=beta)


def _equation_values(rates: DerivedRates, state: SteadyState):
    """The five left-hand sides of the mean-field equations (complex)."""
    r = rates
    q1, a1, a2, b = state.q1, state.alpha1, state.alpha2, state.beta
    l1 = state.p1
    l2 = (-r.omega_m * q1 + r.G_ow * abs(b) ** 2 + r.G_oc * abs(a1) ** 2
          + r.G_oc2 * abs(a2) ** 2)
    l3 = (-(1j * r.delta_c + r.kappa_c) * a1 + 1j * r.G_oc * q1 * a1
          - 1j * r.chi_eff * np.conj(a1) * a2 + r.E_c)
    l4 = (-(1j * r.delta_c2 + r.kappa_c2) * a2 + 1j * r.G_oc2 * q1 * a2
          - 0.5j * r.chi_eff * a1 * a1)
    l5 = (-(1j * r.delta_w + r.kappa_w) * b + 1j * r.G_ow * q1 * b + r.E_w)
    return l1, l2, l3, l4, l5


def steady_state_residual(rates: DerivedRates, state: SteadyState) -> float:
    """Euclidean norm of the five mean-field equation left-hand sides."""
    vals = _equation_values(rates, state)
    return float(np.sqrt(sum(abs(v) ** 2 for v in vals)))


def _equation_scales(rates: DerivedRates, state: SteadyState):
    """Per-equation magnitude scales (sums of term magnitudes) for the
    relative residual; zero-scale equations fall back to 1."""
    r = rates
    q1, a1, a2, b = state.q1, state.alpha1, state.alpha2, state.beta
    s2 = (r.omega_m * abs(q1) + r.G_ow * abs(b) ** 2 + r.G_oc * abs(a1) ** 2
          + r.G_oc2 * abs(a2) ** 2)
    s3 = (abs(1j * r.delta_c + r.kappa_c) * abs(a1)
          + r.G_oc * abs(q1) * abs(a1) + r.chi_eff * abs(a1) * abs(a2)
          + abs(r.E_c))
    s4 = (abs(1j * r.delta_c2 + r.kappa_c2) * abs(a2)
          + r.G_oc2 * abs(q1) * abs(a2) + 0.5 * r.chi_eff * abs(a1) ** 2)
    s5 = (abs(1j * r.delta_w + r.kappa_w) * abs(b)
          + r.G_ow * abs(q1) * abs(b) + abs(r.E_w))
    return tuple(s if s > 0.0 else 1.0 for s in (1.0, s2, s3, s4, s5))


def relative_residual(rates: DerivedRates, state: SteadyState) -> float:
    """Residual with each equation normalized by its own term magnitudes."""
    vals = _equation_values(rates, state)
    scales = _equation_scales(rates, state)
    return float(np.sqrt(sum((abs(v) / s) ** 2 for v, s in zip(vals, scales))))


def _state_from_vector(x: np.ndarray) -> SteadyState:
    return SteadyState(q1=complex(x[0], x[1]), p1=0.0,
                       alpha1=complex(x[2], x[3]),
                       alpha2=complex(x[4], x[5]),
                       beta=complex(x[6], x[7]))


def _vector_from_state(s: SteadyState) -> np.ndarray:
    return np.array([s.q1.real, s.q1.imag, s.alpha1.real, s.alpha1.imag,
                     s.alpha2.real, s.alpha2.imag, s.beta.real, s.beta.imag])


def _residual_vector(rates: DerivedRates, x: np.ndarray) -> np.ndarray:
    l1, l2, l3, l4, l5 = _equation_values(rates, _state_from_vector(x))
    del l1  # p1 is eliminated, not part of the Newton system
    return np.array([l2.real, l2.imag, l3.real, l3.imag,
                     l4.real, l4.imag, l5.real, l5.imag])


def _jacobian(rates: DerivedRates, x: np.ndarray) -> np.ndarray:
    """Analytic Jacobian of _residual_vector w.r.t.
    (q1r, q1i, a1r, a1i, a2r, a2i, br, bi)."""
    r = rates
    q1r, q1i, a1r, a1i, a2r, a2i, br, bi = x
    c2 = r.chi_eff
    J = np.zeros((8, 8))
    # d(mechanical balance)/dx, real and imaginary rows
    J[0] = [-r.omega_m, 0.0, 2 * r.G_oc * a1r, 2 * r.G_oc * a1i,
            2 * r.G_oc2 * a2r, 2 * r.G_oc2 * a2i, 2 * r.G_ow * br,
            2 * r.G_ow * bi]
    J[1] = [0.0, -r.omega_m, 0, 0, 0, 0, 0, 0]
    # optical equation
    J[2] = [-r.G_oc * a1i, -r.G_oc * a1r,
            -r.kappa_c - r.G_oc * q1i + c2 * a2i,
            r.delta_c - r.G_oc * q1r - c2 * a2r,
            -c2 * a1i, c2 * a1r, 0, 0]
    J[3] = [r.G_oc * a1r, -r.G_oc * a1i,
            -r.delta_c + r.G_oc * q1r - c2 * a2r,
            -r.kappa_c - r.G_oc * q1i - c2 * a2i,
            -c2 * a1r, -c2 * a1i, 0, 0]
    # second-harmonic equation
    J[4] = [-r.G_oc2 * a2i, -r.G_oc2 * a2r, c2 * a1i, c2 * a1r,
            -r.kappa_c2 - r.G_oc2 * q1i, r.delta_c2 - r.G_oc2 * q1r, 0, 0]
    J[5] = [r.G_oc2 * a2r, -r.G_oc2 * a2i, -c2 * a1r, c2 * a1i,
            -r.delta_c2 + r.G_oc2 * q1r, -r.kappa_c2 - r.G_oc2 * q1i, 0, 0]
    # microwave equation
    J[6] = [-r.G_ow * bi, -r.G_ow * br, 0, 0, 0, 0,
            -r.kappa_w - r.G_ow * q1i, r.delta_w - r.G_ow * q1r]
    J[7] = [r.G_ow * br, -r.G_ow * bi, 0, 0, 0, 0,
            -r.delta_w + r.G_ow * q1r, -r.kappa_w - r.G_ow * q1i]
    return J


def _newton_polish(rates, x, tol, budget):
    """Damped Newton on the 8-real system.  Returns (x, iterations_used);
    raises np.linalg.LinAlgError on a singular step."""
    used = 0
    while used < budget:
        state = _state_from_vector(x)
        if relative_residual(rates, state) < tol:
            return x, used
        F = _residual_vector(rates, x)
        J = _jacobian(rates, x)
        dx = np.linalg.solve(J, -F)
        if not np.all(np.isfinite(dx)):
            raise np.linalg.LinAlgError("non-finite Newton step")
        # backtracking on the scaled residual; plain Newton almost always wins
        base = relative_residual(rates, state)
        lam = 1.0
        for _ in range(30):
            trial = x + lam * dx
            if relative_residual(rates, _state_from_vector(trial)) < base:
                x = trial
                break
            lam *= 0.5
        else:
            x = x + dx  # no decrease found; take the full step and let the
            used += 1   # outer loop fail fast rather than stall silently
            break
        used += 1
    return x, used


def _ramped(rates: DerivedRates, t: float) -> DerivedRates:
    return replace(rates, G_oc=t * rates.G_oc, G_oc2=t * rates.G_oc2,
                   G_ow=t * rates.G_ow, chi_eff=t * rates.chi_eff)


def _cubic_roots(omega_m, kappa, delta, G, E) -> tuple[float, ...]:
    """Real roots of the single-cavity radiation-pressure cubic
    G^2 u^3 - 2 delta G u^2 + (kappa^2 + delta^2) u - G|E|^2/omega_m = 0."""
    if G == 0.0:
        return (0.0,)
    coeffs = [G * G, -2.0 * delta * G, kappa ** 2 + delta ** 2,
              -G * abs(E) ** 2 / omega_m]
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots))))
    real = sorted(float(r.real) for r in roots if abs(r.imag) <= 1e-9 * scale)
    return tuple(real)


def solve_steady_state(rates: DerivedRates,
                       opts: SolverOptions = SolverOptions()) -> SteadyState:
    """Steady state on the branch continuously connected to the decoupled one.

    Homotopy continuation ramps (G_oc, G_oc2, G_ow, chi_eff) linearly from 0
    to their target values over opts.continuation_steps steps, Newton-polishing
    at each step.  Steps that fail are bisected down to 1/1024 of the ramp
    before giving up.

    Raises NonConvergence (with the last iterate attached) when the total
    Newton budget opts.max_iter is exhausted, JacobianSingular when a Newton
    system is numerically singular at the finest continuation step.
    """
    x = _vector_from_state(decoupled_steady_state(rates))
    budget = opts.max_iter
    t_prev, t = 0.0, 0.0
    step = 1.0 / max(1, opts.continuation_steps)
    min_step = 1.0 / 1024.0
    while t < 1.0:
        t = min(1.0, t_prev + step)
        ramped = _ramped(rates, t)
        try:
            x_new, used = _newton_polish(rates=ramped, x=x, tol=opts.tol,
                                         budget=budget)
            ok = relative_residual(ramped, _state_from_vector(x_new)) < opts.tol
        except np.linalg.LinAlgError:
            x_new, used, ok = x, 1, False
        budget -= used
        if ok:
            x, t_prev = x_new, t
            continue
        if budget <= 0:
            state = _state_from_vector(x_new)
            raise NonConvergence(
                "steady-state Newton budget exhausted at ramp t=%.4g" % t,
                state, steady_state_residual(_ramped(rates, t), state))
        step *= 0.5
        if step < min_step:
            raise JacobianSingular(
                "Newton step unsolvable at ramp t=%.4g even at the minimum "
                "continuation step; try more continuation steps or a larger "
                "iteration budget" % t)

    state = _state_from_vector(x)
    if abs(state.q1.imag) > 1e-8 * (1.0 + abs(state.q1.real)):
        warnings.warn("steady-state q1 has imaginary part %.3e; the mean "
                      "position should be real" % state.q1.imag,
                      RuntimeWarning, stacklevel=2)
    if opts.enumerate_roots:
        extra = _single_cavity_roots(rates)
        state = replace(state, other_q1_roots=extra)
    return state


def _single_cavity_roots(rates: DerivedRates) -> tuple[float, ...] | None:
    """All real q1 roots of the radiation-pressure cubic when exactly one
    cavity is coupled (chi_eff = 0); None when the reduction does not apply."""
    if rates.chi_eff != 0.0 or rates.G_oc2 != 0.0:
        return None
    if rates.G_oc != 0.0 and rates.G_ow == 0.0:
        return _cubic_roots(rates.omega_m, rates.kappa_c, rates.delta_c,
                            rates.G_oc, rates.E_c)
    if rates.G_ow != 0.0 and rates.G_oc == 0.0:
        return _cubic_roots(rates.omega_m, rates.kappa_w, rates.delta_w,
                            rates.G_ow, rates.E_w)
    return None
