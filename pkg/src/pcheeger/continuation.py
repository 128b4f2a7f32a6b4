"""Warm-started p -> 1 continuation of the first eigenpair.

Solve down the schedule p_k = 1 + 2^-k, seeding each solve with the previous
eigenfunction. Along the way lambda_{1,p} must stay below the Cheeger
constant (checked when the domain is small enough to enumerate), and at the
bottom the eigenfunction freezes into a stack of nested Cheeger cuts, which
extract_and_verify recovers and validates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .cheeger import ENUMERATION_LIMIT, CheegerReport, cheeger_constant
from .errors import NoConvergenceError, StructureViolationError
from .graph import DirichletFunction, Domain
from .one_laplacian import Decomposition, decompose_limit, structure_report
from .spectral import Eigenpair, SolverOptions, first_eigenpair

__all__ = ["SweepReport", "default_schedule", "sweep", "extract_and_verify"]

# the sweep has settled when successive eigenfunctions agree to this in the
# max norm and the last eigenvalue is this close to h
U_DISTANCE_TOL = 1e-4
LAMBDA_GAP_TOL = 1e-3


def default_schedule(steps: int) -> tuple[float, ...]:
    """p_k = 1 + 2^-k for k = 1..steps."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    return tuple(1.0 + 2.0**-k for k in range(1, steps + 1))


@dataclass(frozen=True)
class SweepReport:
    """All eigenpairs along the schedule plus the p -> 1 diagnostics."""

    schedule: tuple[float, ...]
    records: tuple[Eigenpair, ...]
    cheeger_report: CheegerReport | None
    converged: bool
    limit_estimate: DirichletFunction
    decomposition: Decomposition | None
    u_distance: float
    lambda_gap: float | None

    @property
    def h(self) -> float | None:
        return None if self.cheeger_report is None else self.cheeger_report.h

    def to_json_dict(self) -> dict:
        return {
            "schedule": list(self.schedule),
            "h": self.h,
            "converged": self.converged,
            "u_distance": self.u_distance if np.isfinite(self.u_distance) else None,
            "lambda_gap": self.lambda_gap,
            "records": [r.to_json_dict() for r in self.records],
            "limit_estimate": {"values": self.limit_estimate.as_dict()},
            "decomposition": None if self.decomposition is None else self.decomposition.to_json_dict(),
        }


def sweep(
    d: Domain,
    schedule: tuple[float, ...] | None = None,
    opts: SolverOptions | None = None,
    u_tol: float = U_DISTANCE_TOL,
    lambda_tol: float = LAMBDA_GAP_TOL,
    progress: Callable[[str], None] | None = None,
) -> SweepReport:
    """Run first_eigenpair along a decreasing p schedule with warm starts.

    The default schedule is default_schedule(12). On a domain too large to
    enumerate, the Cheeger comparison is skipped with a warning and
    convergence is judged on the eigenfunction distance alone. A solver
    failure partway through re-raises NoConvergenceError with the partial
    report attached.
    """
    if schedule is None:
        schedule = default_schedule(12)
    schedule = tuple(float(p) for p in schedule)
    if not schedule:
        raise ValueError("schedule is empty")
    if any(not p > 1 for p in schedule):
        raise ValueError("every p in the schedule must be > 1")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly decreasing")
    opts = opts if opts is not None else SolverOptions()

    cheeger_report: CheegerReport | None = None
    if d.size <= ENUMERATION_LIMIT:
        cheeger_report = cheeger_constant(d)
    else:
        warnings.warn(
            f"|omega| = {d.size} exceeds the enumeration limit; "
            "Cheeger ceiling checks disabled for this sweep",
            stacklevel=2,
        )

    def partial_report(records: tuple[Eigenpair, ...], last_u: DirichletFunction) -> SweepReport:
        return SweepReport(
            schedule, records, cheeger_report, False, last_u, None, np.inf, None
        )

    records: list[Eigenpair] = []
    step_opts = opts
    for p in schedule:
        try:
            pair = first_eigenpair(d, p, step_opts)
        except NoConvergenceError as exc:
            last_u = exc.eigenpair.u if exc.eigenpair is not None else (
                records[-1].u if records else DirichletFunction(d, np.ones(d.size))
            )
            raise NoConvergenceError(
                f"sweep aborted at p = {p}: {exc}",
                eigenpair=exc.eigenpair,
                report=partial_report(tuple(records), last_u),
            ) from None
        records.append(pair)
        if progress is not None:
            progress(
                f"p = {p:.12g}: lambda = {pair.lam:.12g}, residual = {pair.residual:.3e}, "
                f"{pair.iterations} iterations"
            )
        step_opts = replace(opts, initial_guess=pair.u)

    limit = records[-1].u
    if len(records) >= 2:
        u_distance = float(np.max(np.abs(records[-1].u.values - records[-2].u.values)))
    else:
        u_distance = np.inf
    lambda_gap = None if cheeger_report is None else abs(records[-1].lam - cheeger_report.h)
    converged = u_distance <= u_tol and (lambda_gap is None or lambda_gap <= lambda_tol)

    decomposition = None
    if converged:
        decomposition = decompose_limit(d, limit, delta=1e-3)
    return SweepReport(
        schedule,
        tuple(records),
        cheeger_report,
        converged,
        limit,
        decomposition,
        u_distance,
        lambda_gap,
    )


def extract_and_verify(report: SweepReport, delta: float = 1e-3) -> Decomposition:
    """Decompose the sweep's limit estimate and insist on the limit structure.

    Raises NoConvergenceError if the sweep had not settled, and
    StructureViolationError (with the failing check spelled out) if any level
    set is not an exact Cheeger cut, the chain is not nested, or the p = 1
    Rayleigh quotient is off h by more than delta.
    """
    if not report.converged:
        raise NoConvergenceError(
            f"sweep has not converged (u_distance = {report.u_distance:.3e}, "
            f"lambda_gap = {report.lambda_gap}); nothing to extract",
            report=report,
        )
    d = report.limit_estimate.domain
    cheeger_report = report.cheeger_report
    if cheeger_report is None:
        cheeger_report = cheeger_constant(d)  # raises past the enumeration limit
    rows = structure_report(d, report.limit_estimate, delta, cheeger_report)
    failures = [f"{name}: {detail}" for name, ok, detail in rows if not ok]
    if failures:
        raise StructureViolationError(
            "limit estimate violates the nested-Cheeger-cut structure: "
            + "; ".join(failures)
        )
    return decompose_limit(d, report.limit_estimate, delta)
