"""Warm-started p -> 1 sweeps: schedules, convergence judgment, extraction."""

from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

from pcheeger import (
    DirichletFunction,
    Domain,
    NoConvergenceError,
    SolverOptions,
    StructureViolationError,
    WeightedGraph,
    default_schedule,
    extract_and_verify,
    sweep,
)


def long_path_domain(n: int = 26) -> Domain:
    """A path with n interior vertices, too large to enumerate cuts."""
    ids = [f"c{k:02d}" for k in range(n)]
    vertices = {v: 1.0 for v in ids}
    vertices["ext"] = 1.0
    edges = [(ids[k], ids[k + 1], 1.0) for k in range(n - 1)]
    edges.append(("ext", ids[0], 1.0))
    return Domain.build(WeightedGraph.build(vertices, edges), ids)


# ---------------------------------------------------------------------------
# schedule


def test_default_schedule():
    assert default_schedule(3) == (1.5, 1.25, 1.125)
    assert default_schedule(1) == (1.5,)
    with pytest.raises(ValueError, match="steps must be >= 1"):
        default_schedule(0)


@pytest.mark.parametrize(
    "schedule, match",
    [
        ((), "schedule is empty"),
        ((1.5, 1.0), "must be > 1"),
        ((1.25, 1.5), "strictly decreasing"),
        ((1.5, 1.5), "strictly decreasing"),
    ],
)
def test_sweep_rejects_bad_schedules(fig1, schedule, match):
    with pytest.raises(ValueError, match=match):
        sweep(fig1, schedule=schedule)


# ---------------------------------------------------------------------------
# the example sweep


def test_fig1_sweep_converges(fig1_sweep):
    assert fig1_sweep.converged
    assert fig1_sweep.u_distance <= 1e-4
    assert fig1_sweep.lambda_gap is not None and fig1_sweep.lambda_gap <= 1e-3
    assert fig1_sweep.h == 0.5
    assert len(fig1_sweep.records) == 12
    assert [r.p for r in fig1_sweep.records] == list(default_schedule(12))


def test_fig1_sweep_lambda_rises_to_h(fig1_sweep):
    lams = [r.lam for r in fig1_sweep.records]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert all(lam <= 0.5 + 1e-9 for lam in lams)


def test_fig1_sweep_each_step_converged(fig1_sweep):
    for r in fig1_sweep.records:
        assert r.residual <= 1e-6  # loosest default tolerance on the schedule


def test_fig1_sweep_decomposition(fig1_sweep):
    dec = fig1_sweep.decomposition
    assert dec is not None
    assert dec.sets == (("x1", "x2", "y1", "y2"), ("x1", "x2"))
    assert all(c > 0 for c in dec.coefficients)


def test_fig1_extract_and_verify(fig1_sweep):
    dec = extract_and_verify(fig1_sweep)
    assert dec.n_levels == 2
    assert dec.sets[0] == ("x1", "x2", "y1", "y2")
    assert dec.sets[1] == ("x1", "x2")


def test_progress_callback(fig1):
    lines: list[str] = []
    sweep(fig1, schedule=(1.5, 1.25), progress=lines.append)
    assert len(lines) == 2
    assert lines[0].startswith("p = 1.5:")
    assert "lambda =" in lines[0] and "iterations" in lines[1]


def test_sweep_json_round_trippable(fig1_sweep):
    import json

    data = fig1_sweep.to_json_dict()
    text = json.dumps(data)
    back = json.loads(text)
    assert back["h"] == 0.5
    assert back["converged"] is True
    assert len(back["records"]) == 12
    assert back["decomposition"]["n_levels"] == 2


# ---------------------------------------------------------------------------
# failure paths


def test_sweep_aborts_with_partial_report(random_corpus):
    opts = SolverOptions(tolerance=1e-30, max_iterations=50)
    with pytest.raises(NoConvergenceError, match="sweep aborted at p = 1.5") as ei:
        sweep(random_corpus[0], schedule=(1.5,), opts=opts)
    report = ei.value.report
    assert report is not None
    assert not report.converged
    assert report.records == ()
    assert ei.value.eigenpair is not None


def test_single_step_sweep_is_inconclusive(fig1):
    report = sweep(fig1, schedule=(1.5,))
    assert not report.converged
    assert report.u_distance == np.inf
    assert report.decomposition is None
    assert report.to_json_dict()["u_distance"] is None
    with pytest.raises(NoConvergenceError, match="has not converged"):
        extract_and_verify(report)


def test_unsettled_sweep_flagged(fig1):
    # two coarse steps: far from the limit, distances exceed the defaults
    report = sweep(fig1, schedule=(1.5, 1.4))
    assert not report.converged
    with pytest.raises(NoConvergenceError, match="has not converged"):
        extract_and_verify(report)


def test_structure_violation_is_loud(fig1_sweep, fig1):
    # converged flag with a limit that is no indicator stack must not pass
    bogus = DirichletFunction(fig1, np.array([1.0, 0.9, 0.1, 0.1]))
    doctored = replace(fig1_sweep, limit_estimate=bogus, converged=True)
    with pytest.raises(StructureViolationError, match="levels_are_cheeger_cuts"):
        extract_and_verify(doctored)


# ---------------------------------------------------------------------------
# past the enumeration limit


def test_large_domain_skips_ceiling(recwarn):
    d = long_path_domain(26)
    with pytest.warns(UserWarning, match="exceeds the enumeration limit"):
        report = sweep(d, schedule=(2.0,))
    assert report.cheeger_report is None
    assert report.h is None
    assert report.lambda_gap is None
    assert not report.converged  # single step leaves u_distance infinite
    assert report.to_json_dict()["h"] is None
