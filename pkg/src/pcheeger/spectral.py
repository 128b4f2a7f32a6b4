"""p-Dirichlet energies and the first Dirichlet eigenpair of the p-Laplacian.

Conventions, fixed once here:
  * every unordered edge counts once in the energy; the function is zero
    outside Omega, so edges leaving Omega contribute |u(x)|^p;
  * the eigenvalue scale is set by the mu-weighted p-norm, and the reported
    eigenvalue is the Rayleigh quotient of the computed eigenfunction;
  * the kernel |t|^{p-2} t is evaluated as sign(t) |t|^{p-1}, its continuous
    extension at t = 0 for every p > 1 (never as |t|^{p-2} * t, which would
    produce inf * 0 at a zero difference when p < 2).

The solver is projected descent on the p-sphere: take the gradient of the
regularized energy, project it onto the constraint tangent, backtrack with an
Armijo rule, apply pointwise absolute value (which never increases the energy
and keeps the norm), and renormalize. For p < 2 the kernel is smoothed as
(t^2 + eps^2)^{(p-2)/2} t with eps driven down a fixed schedule, re-converging
at each stage; convergence means the eigen-equation residual at the final eps
drops below tolerance. Descent alone cannot always reach that: its energy
guard goes blind once true decreases fall below double rounding noise, which
happens for p < 2 whenever the minimizer has nearly tied values. A damped
Newton pass on the eigen-system itself therefore finishes the solve, accepted
step by step only while the measured residual shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .errors import NoConvergenceError
from .graph import DirichletFunction, Domain

__all__ = [
    "SolverOptions",
    "Eigenpair",
    "dirichlet_energy",
    "dirichlet_energy_regularized",
    "energy_gradient",
    "rayleigh_quotient",
    "apply_p_laplacian",
    "eigen_residual",
    "first_eigenpair",
    "default_tolerance",
    "default_epsilon_schedule",
]

_ARMIJO_SHRINK = 0.5
_ARMIJO_SLOPE = 1e-4
_STEP_MIN = 1e-18
# measured energy decrease underflows double rounding near the minimizer while
# the residual is still above tight tolerances; accept steps within this floor
_NOISE_ULPS = 64
# consecutive sub-noise steps before a stage is declared exhausted: past this
# point the energy guard is blind and further descent is a random walk
_CALM_LIMIT = 200
# descent iterations per smoothing stage; the Newton corrector that follows
# each stage converges from a plateau, so grinding past this buys nothing
_STAGE_ITER_CAP = 2000
_POLISH_STEPS = 60
_POLISH_BACKTRACKS = 40


def _check_pair(d: Domain, u: DirichletFunction):
    if u.domain is not d:
        raise ValueError("function does not belong to this domain")


def _check_p(p: float):
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")


def _kernel(t: np.ndarray, p: float, epsilon: float) -> np.ndarray:
    """|t|^{p-2} t, smoothed when epsilon > 0."""
    if epsilon > 0:
        return (t * t + epsilon * epsilon) ** ((p - 2.0) / 2.0) * t
    return np.sign(t) * np.abs(t) ** (p - 1.0)


def _energy_integrand(t: np.ndarray, p: float, epsilon: float) -> np.ndarray:
    """Antiderivative structure matching _kernel: d/dt of this is p * _kernel."""
    if epsilon > 0:
        return (t * t + epsilon * epsilon) ** (p / 2.0) - epsilon**p
    return np.abs(t) ** p


def _phi_prime(t: np.ndarray, p: float, epsilon: float) -> np.ndarray:
    """Derivative of _kernel in t; even, and positive wherever _kernel moves."""
    if epsilon > 0:
        q = t * t + epsilon * epsilon
        return q ** ((p - 4.0) / 2.0) * ((p - 1.0) * t * t + epsilon * epsilon)
    return (p - 1.0) * np.abs(t) ** (p - 2.0)


def _edge_diffs(d: Domain, vals: np.ndarray) -> np.ndarray:
    return vals[d.interior_j] - vals[d.interior_i]


def dirichlet_energy(d: Domain, u: DirichletFunction, p: float) -> float:
    """E_p(u): sum over edges of w |u(y) - u(x)|^p, each edge once."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    _check_pair(d, u)
    diffs = _edge_diffs(d, u.values)
    interior = float(np.sum(d.interior_w * np.abs(diffs) ** p))
    exterior = float(np.sum(d.exterior_weight * np.abs(u.values) ** p))
    return interior + exterior


def dirichlet_energy_regularized(
    d: Domain, u: DirichletFunction, p: float, epsilon: float
) -> float:
    """Smoothed energy whose gradient is exactly energy_gradient."""
    _check_p(p)
    _check_pair(d, u)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    diffs = _edge_diffs(d, u.values)
    interior = float(np.sum(d.interior_w * _energy_integrand(diffs, p, epsilon)))
    exterior = float(np.sum(d.exterior_weight * _energy_integrand(u.values, p, epsilon)))
    return interior + exterior


def _raw_gradient(d: Domain, vals: np.ndarray, p: float, epsilon: float) -> np.ndarray:
    n = d.size
    flux = d.interior_w * _kernel(_edge_diffs(d, vals), p, epsilon)
    scatter = np.bincount(d.interior_j, weights=flux, minlength=n) - np.bincount(
        d.interior_i, weights=flux, minlength=n
    )
    return p * (scatter + d.exterior_weight * _kernel(vals, p, epsilon))


def energy_gradient(
    d: Domain, u: DirichletFunction, p: float, epsilon: float
) -> np.ndarray:
    """Gradient of dirichlet_energy_regularized with respect to the values on
    Omega, in canonical Omega order."""
    _check_p(p)
    _check_pair(d, u)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    return _raw_gradient(d, u.values, p, epsilon)


def rayleigh_quotient(d: Domain, u: DirichletFunction, p: float) -> float:
    """E_p(u) / |u|_p^p; the first eigenvalue is its infimum over nonzero u."""
    _check_pair(d, u)
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    denom = float(np.sum(d.mu_omega * np.abs(u.values) ** p))
    if denom == 0.0:
        raise ValueError("Rayleigh quotient of the zero function is undefined")
    return dirichlet_energy(d, u, p) / denom


def _apply(d: Domain, vals: np.ndarray, p: float, epsilon: float) -> np.ndarray:
    n = d.size
    flux = d.interior_w * _kernel(_edge_diffs(d, vals), p, epsilon)
    gather = np.bincount(d.interior_i, weights=flux, minlength=n) - np.bincount(
        d.interior_j, weights=flux, minlength=n
    )
    return (gather - d.exterior_weight * _kernel(vals, p, epsilon)) / d.mu_omega


def apply_p_laplacian(
    d: Domain, u: DirichletFunction, p: float, epsilon: float = 0.0
) -> np.ndarray:
    """Pointwise p-Laplacian of u on Omega:
    (1/mu_x) sum_{y ~ x} w_xy |u(y) - u(x)|^{p-2} (u(y) - u(x)),
    with neighbors outside Omega contributing at value 0."""
    _check_p(p)
    _check_pair(d, u)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    return _apply(d, u.values, p, epsilon)


def eigen_residual(
    d: Domain, lam: float, u: DirichletFunction, p: float, epsilon: float = 0.0
) -> float:
    """Max-norm of -Delta_p u - lam |u|^{p-2} u on Omega, with the smoothed
    kernel on both sides when epsilon > 0."""
    _check_p(p)
    _check_pair(d, u)
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    lhs = -_apply(d, u.values, p, epsilon)
    rhs = lam * _kernel(u.values, p, epsilon)
    return float(np.max(np.abs(lhs - rhs)))


def default_tolerance(p: float) -> float:
    """Residual tolerance: tighter where the kernel is mild."""
    return 1e-9 if p >= 1.5 else 1e-6


def default_epsilon_schedule(p: float) -> tuple[float, ...]:
    """Kernel smoothing schedule: none needed for p >= 2, 1e-2 down to 1e-10
    by factors of 10 below."""
    if p >= 2:
        return (0.0,)
    return tuple(10.0**-k for k in range(2, 11))


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for first_eigenpair. None means p-dependent default."""

    tolerance: float | None = None
    max_iterations: int = 200_000
    epsilon_schedule: tuple[float, ...] | None = None
    initial_guess: DirichletFunction | None = None

    def __post_init__(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.epsilon_schedule is not None:
            sched = tuple(self.epsilon_schedule)
            if not sched:
                raise ValueError("epsilon_schedule must not be empty")
            if any(e < 0 for e in sched):
                raise ValueError("epsilon_schedule entries must be >= 0")
            if any(b >= a for a, b in zip(sched, sched[1:])):
                raise ValueError("epsilon_schedule must be strictly decreasing")
            object.__setattr__(self, "epsilon_schedule", sched)


@dataclass(frozen=True)
class Eigenpair:
    """First Dirichlet eigenpair: lam is the Rayleigh quotient of u, u is
    positive on Omega with mu-weighted p-norm 1."""

    p: float
    lam: float
    u: DirichletFunction
    residual: float
    iterations: int
    epsilon_final: float

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "lambda": self.lam,
            "u": {"values": self.u.as_dict()},
            "residual": self.residual,
            "iterations": self.iterations,
            "epsilon_final": self.epsilon_final,
        }


def _newton_polish(
    d: Domain, vals: np.ndarray, p: float, epsilon: float
) -> tuple[np.ndarray, int]:
    """Damped Newton on the eigen-system at fixed epsilon.

    Unknowns (u, lam); equations -Delta_p u - lam phi(u) = 0 on Omega plus
    the normalization sum(mu u^p) = 1. A step is kept only when it stays
    positive and strictly shrinks max|F|, so the iterate it is handed can
    only improve; any numerical trouble aborts back to that iterate.
    """
    n = d.size
    mu = d.mu_omega
    i, j, w = d.interior_i, d.interior_j, d.interior_w
    ext = d.exterior_weight

    def f_system(cur: np.ndarray, lam: float) -> np.ndarray:
        eq = -_apply(d, cur, p, epsilon) - lam * _kernel(cur, p, epsilon)
        return np.append(eq, np.sum(mu * cur**p) - 1.0)

    u = vals.copy()
    norm_p = float(np.sum(mu * u**p))
    lam = (
        float(np.sum(w * np.abs(u[j] - u[i]) ** p) + np.sum(ext * np.abs(u) ** p))
        / norm_p
    )
    steps = 0
    diag = np.arange(n)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        f = f_system(u, lam)
        best = float(np.max(np.abs(f)))
        for _ in range(_POLISH_STEPS):
            dphi_edge = w * _phi_prime(u[i] - u[j], p, epsilon)
            dphi_self = _phi_prime(u, p, epsilon)
            jac = np.zeros((n + 1, n + 1))
            np.add.at(jac, (i, i), dphi_edge / mu[i])
            np.add.at(jac, (j, j), dphi_edge / mu[j])
            np.subtract.at(jac, (i, j), dphi_edge / mu[i])
            np.subtract.at(jac, (j, i), dphi_edge / mu[j])
            jac[diag, diag] += (ext / mu - lam) * dphi_self
            jac[:n, n] = -_kernel(u, p, epsilon)
            jac[n, :n] = p * mu * u ** (p - 1.0)
            if not np.all(np.isfinite(jac)):
                break
            try:
                delta = np.linalg.solve(jac, -f)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(delta)):
                break
            t_damp = 1.0
            improved = False
            for _ in range(_POLISH_BACKTRACKS):
                cand = u + t_damp * delta[:n]
                cand_lam = lam + t_damp * delta[n]
                if np.all(cand > 0) and np.isfinite(cand_lam):
                    fc = f_system(cand, cand_lam)
                    fc_max = float(np.max(np.abs(fc)))
                    if np.isfinite(fc_max) and fc_max < best:
                        u, lam, f, best = cand, cand_lam, fc, fc_max
                        improved = True
                        break
                t_damp *= 0.5
            if not improved:
                break
            steps += 1
    return u, steps


def first_eigenpair(d: Domain, p: float, opts: SolverOptions | None = None) -> Eigenpair:
    """Minimize the Rayleigh quotient over the positive cone on the p-sphere.

    Deterministic: starts from the normalized indicator of Omega (or the given
    warm start), and every operation is a fixed-order array computation, so
    reruns reproduce bit-identical output. When descent alone cannot reach
    tolerance (its energy guard is blind below double rounding noise), a
    damped Newton pass on the eigen-system finishes the job; it runs even if
    the descent budget is spent. Raises NoConvergenceError with the partial
    pair attached if the residual still ends above tolerance.
    """
    _check_p(p)
    opts = opts if opts is not None else SolverOptions()
    tol = opts.tolerance if opts.tolerance is not None else default_tolerance(p)
    schedule = (
        opts.epsilon_schedule
        if opts.epsilon_schedule is not None
        else default_epsilon_schedule(p)
    )
    eps_final = schedule[-1]
    mu = d.mu_omega

    def pnorm(vals: np.ndarray) -> float:
        return float(np.sum(mu * vals**p)) ** (1.0 / p)  # vals >= 0 throughout

    def energy_exact(vals: np.ndarray) -> float:
        diffs = vals[d.interior_j] - vals[d.interior_i]
        return float(
            np.sum(d.interior_w * np.abs(diffs) ** p)
            + np.sum(d.exterior_weight * vals**p)
        )

    def energy_reg(vals: np.ndarray, eps: float) -> float:
        diffs = vals[d.interior_j] - vals[d.interior_i]
        return float(
            np.sum(d.interior_w * _energy_integrand(diffs, p, eps))
            + np.sum(d.exterior_weight * _energy_integrand(vals, p, eps))
        )

    def residual(vals: np.ndarray, lam: float, eps: float) -> float:
        return float(
            np.max(np.abs(-_apply(d, vals, p, eps) - lam * _kernel(vals, p, eps)))
        )

    if opts.initial_guess is not None:
        _check_pair(d, opts.initial_guess)
        u = np.abs(opts.initial_guess.values)
        if not np.any(u > 0):
            raise ValueError("initial guess is the zero function")
    else:
        u = np.ones(d.size)
    u = u / pnorm(u)

    iters = 0
    step = 1.0

    def result(vals, lam, res) -> Eigenpair:
        return Eigenpair(p, lam, DirichletFunction(d, vals), res, iters, eps_final)

    def try_newton(vals: np.ndarray, eps: float) -> np.ndarray:
        """Corrector step: polish at this eps, keep the better iterate as
        measured by the stage residual with the Rayleigh eigenvalue."""
        nonlocal iters
        refined, polish_steps = _newton_polish(d, vals, p, eps)
        iters += polish_steps
        if polish_steps == 0:
            return vals
        nv = pnorm(refined)
        if not (nv > 0 and np.all(np.isfinite(refined))):
            return vals
        refined = refined / nv
        r_old = residual(vals, energy_exact(vals), eps)
        r_new = residual(refined, energy_exact(refined), eps)
        return refined if r_new < r_old else vals

    budget_spent = False
    for eps in schedule:
        # a stage is done when its own problem is stationary; the residual
        # cannot gate intermediate stages because it carries the O(eps^2)
        # model error of the smoothing, which dwarfs tight tolerances
        stage_gate = max(0.1 * tol, 1e-3 * eps)
        calm = 0
        stage_iters = 0
        while True:
            lam = energy_exact(u)  # |u|_p = 1, so this is the Rayleigh quotient
            r_final = residual(u, lam, eps_final)
            if r_final <= tol:
                return result(u, lam, r_final)

            g = _raw_gradient(d, u, p, eps)
            nvec = p * mu * u ** (p - 1.0)
            g_proj = g - (g @ nvec) / (nvec @ nvec) * nvec
            gg = float(g_proj @ g_proj)
            if float(np.max(np.abs(g_proj))) <= stage_gate:
                break
            if calm >= _CALM_LIMIT or stage_iters >= _STAGE_ITER_CAP:
                break  # plateau: the corrector below finishes the stage
            if iters >= opts.max_iterations:
                budget_spent = True
                break
            iters += 1
            stage_iters += 1
            e0 = energy_reg(u, eps)
            noise = _NOISE_ULPS * np.finfo(float).eps * max(1.0, abs(e0))

            s = step
            accepted = False
            while s >= _STEP_MIN:
                v = np.abs(u - s * g_proj)
                nv = pnorm(v)
                if nv > 0:
                    v = v / nv
                    if not np.array_equal(v, u):
                        ev = energy_reg(v, eps)
                        if ev <= e0 - _ARMIJO_SLOPE * s * gg + noise:
                            accepted = True
                            break
                s *= _ARMIJO_SHRINK
            if not accepted:
                break  # progress underflows double precision at this stage
            u = v
            if ev <= e0 - noise:
                # resolved decrease: healthy descent, grow the trial step
                calm = 0
                step = min(s * 2.0, 1e8)
            else:
                # sub-noise move: hold the step (the measured sign of the
                # change is pure rounding, damping on it collapses the step)
                calm += 1
                step = s
        # Descent reaches the stage minimizer's basin, but its reachable
        # accuracy floor scales like sqrt(eps_mach * E * L) with L the
        # stiffest edge curvature, far above tolerance for p < 2 whenever
        # values nearly tie. Newton on the stage equations has no floor.
        u = try_newton(u, eps)
        if budget_spent:
            break

    lam = energy_exact(u)
    r_final = residual(u, lam, eps_final)
    if r_final <= tol:
        return result(u, lam, r_final)
    if budget_spent:  # stages were skipped; give the corrector its last word
        u = try_newton(u, eps_final)
        lam = energy_exact(u)
        r_final = residual(u, lam, eps_final)
        if r_final <= tol:
            return result(u, lam, r_final)
    raise NoConvergenceError(
        f"no convergence at p = {p}: residual {r_final:.3e} > {tol:.1e} "
        f"after {iters} iterations",
        eigenpair=result(u, lam, r_final),
    )


def warm_started(pair: Eigenpair, opts: SolverOptions | None = None) -> SolverOptions:
    """Options seeded with a previous eigenfunction as the initial guess."""
    base = opts if opts is not None else SolverOptions()
    return replace(base, initial_guess=pair.u)
