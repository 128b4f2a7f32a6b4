"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (visible with -s, and on failure)
and then asserts. Shared fixtures: the example domain, its 12-step sweep,
and the 20-graph seeded corpus from conftest.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.linalg

from pcheeger import (
    DirichletFunction,
    Domain,
    WeightedGraph,
    cheeger_constant,
    coarea_total,
    dirichlet_energy,
    dirichlet_energy_regularized,
    eigen_residual,
    energy_gradient,
    extract_and_verify,
    first_eigenpair,
    p_norm,
    solve_xq,
)
from pcheeger.fig1 import xhat_closed_form

LIMIT_TARGET = (0.15287, 0.15287, 0.04856, 0.04856)


def _line(num: int, label: str, ok: bool, detail: str):
    print(f"criterion {num:02d} {label}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} {label}: {detail}"


def test_criterion_01_fig1_cheeger_exact(fig1):
    report = cheeger_constant(fig1)
    subsets = [c.subset for c in report.cuts]
    expected = [
        ("x1", "x2"),
        ("x1", "x2", "y1"),
        ("x1", "x2", "y2"),
        ("x1", "x2", "y1", "y2"),
    ]
    ok = (
        report.h == 0.5
        and report.h_exact == Fraction(1, 2)
        and subsets == expected
    )
    _line(
        1,
        "fig1 cheeger report",
        ok,
        f"h = {report.h}, h_exact = {report.h_exact}, cuts = {len(subsets)}",
    )


def test_criterion_02_fig1_limit_reproduction(fig1_sweep):
    u = fig1_sweep.limit_estimate.values
    du = float(np.max(np.abs(u - np.array(LIMIT_TARGET))))
    dlam = abs(fig1_sweep.records[-1].lam - 0.5)
    ok = du <= 2e-3 and dlam <= 1e-3
    _line(2, "fig1 limit after 12 steps", ok, f"|u - target|_inf = {du:.3e}, |lambda - 1/2| = {dlam:.3e}")


def test_criterion_03_closed_form_xhat():
    xhat = xhat_closed_form()
    cubic = abs((1.0 - xhat) ** 3 - xhat)
    tiny_q = abs(solve_xq(2.0**-20).x - xhat)
    roots = [solve_xq(2.0**-k).x for k in range(1, 21)]
    ok = (
        round(xhat, 5) == 0.31767
        and cubic <= 1e-12
        and tiny_q <= 1e-4
        and all(x >= xhat - 1e-12 for x in roots)
    )
    _line(
        3,
        "closed-form xhat",
        ok,
        f"xhat = {xhat:.7f}, cubic defect = {cubic:.1e}, "
        f"|x_q(2^-20) - xhat| = {tiny_q:.2e}, min x_q - xhat = {min(roots) - xhat:.2e}",
    )


def test_criterion_04_limit_structure(fig1_sweep, fig1):
    dec = extract_and_verify(fig1_sweep)
    ok = (
        dec.n_levels == 2
        and dec.sets[0] == fig1.omega
        and dec.sets[1] == ("x1", "x2")
    )
    _line(
        4,
        "nested two-cut structure",
        ok,
        f"N = {dec.n_levels}, sets = {[len(s) for s in dec.sets]}; not a single indicator",
    )


def test_criterion_05_coarea_identity(random_corpus):
    rng = np.random.default_rng([20260818, 5])
    worst_eq = 0.0
    worst_bound = np.inf
    count = 0
    for d in random_corpus:
        h = cheeger_constant(d).h
        for _ in range(5):
            u = DirichletFunction(d, rng.uniform(0.0, 1.0, d.size))
            count += 1
            total = coarea_total(d, u)
            worst_eq = max(worst_eq, abs(total - dirichlet_energy(d, u, 1.0)))
            worst_bound = min(worst_bound, total - h * p_norm(d, u, 1.0))
    ok = count == 100 and worst_eq <= 1e-12 and worst_bound >= -1e-12
    _line(
        5,
        "co-area identity on 100 samples",
        ok,
        f"max |coarea - E_1| = {worst_eq:.2e}, min coarea - h|u|_1 = {worst_bound:.2e}",
    )


def test_criterion_06_eigenvalue_ceiling_and_p1_limit(random_corpus):
    worst_ceiling = -np.inf
    for d in random_corpus:
        h = cheeger_constant(d).h
        for p in (1.125, 1.5, 2.0, 3.0):
            worst_ceiling = max(worst_ceiling, first_eigenpair(d, p).lam - h)
    p_tiny = 1.0 + 2.0**-10
    worst_gap = 0.0
    for d in random_corpus:
        h = cheeger_constant(d).h
        worst_gap = max(worst_gap, abs(first_eigenpair(d, p_tiny).lam - h))
    ok = worst_ceiling <= 1e-9 and worst_gap <= 5e-2
    _line(
        6,
        "lambda ceiling and p -> 1 gap",
        ok,
        f"max lambda - h = {worst_ceiling:.2e} (<= 1e-9), "
        f"max |lambda - h| at p = 1 + 2^-10: {worst_gap:.2e} (<= 5e-2)",
    )


def test_criterion_07_linear_oracle(random_corpus, fig1):
    worst_lam = 0.0
    worst_u = 0.0
    for d in random_corpus:
        pair = first_eigenpair(d, 2.0)
        n = d.size
        k = np.zeros((n, n))
        for i, j, w in zip(d.interior_i, d.interior_j, d.interior_w):
            k[i, i] += w
            k[j, j] += w
            k[i, j] -= w
            k[j, i] -= w
        k[np.diag_indices(n)] += d.exterior_weight
        evals, evecs = scipy.linalg.eigh(k, np.diag(d.mu_omega))
        v = np.abs(evecs[:, 0])
        v /= float(np.sum(d.mu_omega * v**2)) ** 0.5
        worst_lam = max(worst_lam, abs(pair.lam - evals[0]))
        worst_u = max(worst_u, float(np.max(np.abs(pair.u.values - v))))
    pair = first_eigenpair(fig1, 2.0)
    t = pair.u.values[2] / pair.u.values[0]
    fig1_ok = abs(pair.lam - 0.316987) <= 1e-6 and abs(t - 0.36603) <= 1e-5
    ok = worst_lam <= 1e-8 and worst_u <= 1e-6 and fig1_ok
    _line(
        7,
        "p = 2 dense oracle",
        ok,
        f"max |dlambda| = {worst_lam:.2e}, max du_inf = {worst_u:.2e}, "
        f"fig1 lambda = {pair.lam:.6f}, t = {t:.5f}",
    )


def test_criterion_08_single_vertex_exact():
    worst_rel = 0.0
    worst_res = 0.0
    for w, mu in ((1.4, 2.5), (0.3, 0.7), (5.0, 1.0)):
        g = WeightedGraph.build({"a": mu, "b": 1.0}, [("a", "b", w)])
        d = Domain.build(g, ["a"])
        for p in (1.125, 1.5, 2.0, 3.0):
            pair = first_eigenpair(d, p)
            worst_rel = max(worst_rel, abs(pair.lam - w / mu) / (w / mu))
            worst_res = max(worst_res, eigen_residual(d, pair.lam, pair.u, p))
    # "machine precision": a few eps relative (normalize + power + divide
    # each round once), and an identically-satisfied eigen-equation
    ok = worst_rel <= 1e-15 and worst_res <= 1e-15
    _line(
        8,
        "single-vertex machine precision",
        ok,
        f"max rel lambda error = {worst_rel:.2e}, max residual = {worst_res:.2e}",
    )


def test_criterion_09_gradient_check(random_corpus):
    rng = np.random.default_rng([20260818, 9])
    eps = 1e-2
    h = 1e-6
    worst = 0.0
    for d in random_corpus:  # one random positive point per corpus graph
        vals = rng.uniform(0.2, 1.2, d.size)
        for p in (1.2, 1.5, 2.0, 3.0):
            grad = energy_gradient(d, DirichletFunction(d, vals), p, eps)
            fd = np.empty_like(grad)
            for k in range(d.size):
                up, dn = vals.copy(), vals.copy()
                up[k] += h
                dn[k] -= h
                fd[k] = (
                    dirichlet_energy_regularized(d, DirichletFunction(d, up), p, eps)
                    - dirichlet_energy_regularized(d, DirichletFunction(d, dn), p, eps)
                ) / (2 * h)
            rel = float(np.max(np.abs(grad - fd)) / np.max(np.abs(grad)))
            worst = max(worst, rel)
    ok = worst <= 1e-5
    _line(9, "gradient vs central differences", ok, f"max relative error = {worst:.2e}")


def test_criterion_10_fig1_symmetry(fig1_sweep):
    worst_x = 0.0
    worst_y = 0.0
    for rec in fig1_sweep.records:
        u = rec.u.values
        worst_x = max(worst_x, abs(u[0] - u[1]))
        worst_y = max(worst_y, abs(u[2] - u[3]))
    ok = worst_x <= 1e-10 and worst_y <= 1e-10
    _line(
        10,
        "fig1 symmetry at every swept p",
        ok,
        f"max |u(x1) - u(x2)| = {worst_x:.2e}, max |u(y1) - u(y2)| = {worst_y:.2e}",
    )
