"""The worked four-vertex example: barbell path with pendant exterior.

Omega is the path y1 - x1 - x2 - y2 with mu = (4, 2, 2, 4) and unit weights;
y1 and y2 each carry three pendant exterior vertices. Symmetry collapses the
first eigen-equation to one scalar unknown x = u(y)/u(x) in (0, 1]:

    f(x, q) = 2 (1 - x)^q + (1/x - 1)^q - 3 = 0,   q = p - 1,

f strictly decreasing in x with f(1, q) = -3, so the root x_q is unique. The
eigenpair is then v = (1, 1, x_q, x_q) with lambda = (1 - x_q)^{p-1} / 2. As
q -> 0 the roots decrease to the algebraic number xhat solving (1 - x)^3 = x,
and the eigenfunctions converge to a two-level stack over the nested Cheeger
cuts {x1, x2} and Omega, both of ratio h = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketFailureError
from .graph import DirichletFunction, Domain, WeightedGraph

__all__ = [
    "FIG1_OMEGA",
    "ScalarReduction",
    "build_fig1",
    "f_eval",
    "solve_xq",
    "xhat_closed_form",
    "reduced_eigenpair",
    "convexity_lower_bound_check",
]

FIG1_OMEGA = ("x1", "x2", "y1", "y2")

_BRACKET_LO = 1e-12
_BRACKET_HI = 1.0 - 1e-12
_X_TOL = 1e-14
_MAX_BISECT = 200


def build_fig1() -> Domain:
    """Construct the example domain; vertex and edge order are canonical."""
    vertices = {"x1": 2.0, "x2": 2.0, "y1": 4.0, "y2": 4.0}
    edges = [("y1", "x1", 1.0), ("x1", "x2", 1.0), ("x2", "y2", 1.0)]
    for k in range(1, 4):
        vertices[f"b{k}"] = 1.0
        edges.append((f"b{k}", "y1", 1.0))
    for k in range(4, 7):
        vertices[f"b{k}"] = 1.0
        edges.append((f"b{k}", "y2", 1.0))
    return Domain.build(WeightedGraph.build(vertices, edges), FIG1_OMEGA)


def f_eval(x: float, q: float) -> float:
    """f(x, q) = 2 (1 - x)^q + (1/x - 1)^q - 3 on 0 < x <= 1, q > 0."""
    if not 0 < x <= 1:
        raise ValueError(f"x must be in (0, 1], got {x}")
    if not q > 0:
        raise ValueError(f"q must be > 0, got {q}")
    return 2.0 * (1.0 - x) ** q + (1.0 / x - 1.0) ** q - 3.0


@dataclass(frozen=True)
class ScalarReduction:
    """Root of f(., q) with the derived quantities the analysis runs on."""

    q: float
    x: float
    a: float  # 1 - x
    b: float  # 1/x - 1
    a2b: float  # a^2 b; > 1, = 1, < 1 as x <, =, > xhat
    f_value: float
    iterations: int


def solve_xq(q: float, x_tol: float = _X_TOL) -> ScalarReduction:
    """Bisect f(., q) on [1e-12, 1 - 1e-12] to an x-interval of width x_tol.

    f is strictly decreasing, so plain bisection is exact-arithmetic safe;
    200 halvings bound the interval far below any useful x_tol.
    """
    if not q > 0:
        raise ValueError(f"q must be > 0, got {q}")
    if not x_tol > 0:
        raise ValueError(f"x_tol must be > 0, got {x_tol}")
    lo, hi = _BRACKET_LO, _BRACKET_HI
    f_lo, f_hi = f_eval(lo, q), f_eval(hi, q)
    if not (f_lo > 0 > f_hi):
        raise BracketFailureError(
            f"no sign change on [{lo}, {hi}] for q = {q}: f = {f_lo}, {f_hi}"
        )
    iterations = 0
    for _ in range(_MAX_BISECT):
        if hi - lo <= x_tol:
            break
        mid = 0.5 * (lo + hi)
        iterations += 1
        if f_eval(mid, q) > 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    a = 1.0 - x
    b = 1.0 / x - 1.0
    return ScalarReduction(q, x, a, b, a * a * b, f_eval(x, q), iterations)


def xhat_closed_form() -> float:
    """The q -> 0 root: xhat = 1 - cbrt((sqrt(93)+9)/18) + cbrt((sqrt(93)-9)/18),
    the real solution of (1 - x)^3 = x. The cubic is re-checked to 1e-12."""
    r = math.sqrt(93.0)
    xhat = 1.0 - ((r + 9.0) / 18.0) ** (1.0 / 3.0) + ((r - 9.0) / 18.0) ** (1.0 / 3.0)
    if abs((1.0 - xhat) ** 3 - xhat) > 1e-12:  # pragma: no cover - algebra is fixed
        raise ArithmeticError(f"closed form failed its cubic check at {xhat}")
    return xhat


def reduced_eigenpair(
    p: float, domain: Domain | None = None
) -> tuple[float, DirichletFunction]:
    """The symmetry-reduced first eigenpair at p: v = (1, 1, x_q, x_q) on
    (x1, x2, y1, y2) with lambda = (1 - x_q)^{p-1} / 2. Not normalized;
    v.normalized(p) puts it on the p-sphere."""
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    d = domain if domain is not None else build_fig1()
    if d.omega != FIG1_OMEGA:
        raise ValueError(f"domain is not the example domain, omega = {d.omega!r}")
    t = solve_xq(p - 1.0).x
    lam = (1.0 - t) ** (p - 1.0) / 2.0
    return lam, DirichletFunction(d, np.array([1.0, 1.0, t, t]))


def convexity_lower_bound_check(x: float, q_samples) -> bool:
    """Check f(x, q) >= ln(a^2 b) * q at every sampled q > 0.

    q -> 2 a^q + b^q is convex with value 3 and slope ln(a^2 b) at q = 0, so
    the bound is the supporting tangent; it is what pins x_q >= xhat."""
    if not 0 < x < 1:
        raise ValueError(f"x must be in (0, 1), got {x}")
    a = 1.0 - x
    b = 1.0 / x - 1.0
    slope = math.log(a * a * b)
    for q in q_samples:
        if not q > 0:
            raise ValueError(f"q samples must be > 0, got {q}")
        if f_eval(x, q) < slope * q - 1e-12:
            return False
    return True
