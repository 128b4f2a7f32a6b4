"""Exception types shared across the package.

Plain input validation raises ValueError; the classes here exist where a
caller (mainly the CLI) needs to tell failure modes apart.
"""

from __future__ import annotations


class DomainTooLargeError(ValueError):
    """Exhaustive subset enumeration was refused because |Omega| exceeds the limit."""


class BracketFailureError(RuntimeError):
    """A root bracket did not have opposite signs at its endpoints."""


class NoConvergenceError(RuntimeError):
    """An iterative solve hit its iteration budget above tolerance.

    Carries whatever partial state was available: ``eigenpair`` for a single
    solve, ``report`` for a sweep that died partway through its schedule.
    """

    def __init__(self, message: str, eigenpair=None, report=None):
        super().__init__(message)
        self.eigenpair = eigenpair
        self.report = report


class StructureViolationError(RuntimeError):
    """A claimed limit function failed the nested-Cheeger-cut structure checks."""
