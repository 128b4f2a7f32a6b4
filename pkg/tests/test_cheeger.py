"""Exhaustive Cheeger search: exact values, tie handling, independent oracle."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from pcheeger import (
    DomainTooLargeError,
    cheeger_constant,
    cut_ratio,
    is_cheeger_cut,
    nested_chain_check,
)
from pcheeger.cheeger import ENUMERATION_LIMIT


def brute_force_h(d):
    """Oracle: direct min over itertools.combinations, no bitmask machinery."""
    best = None
    winners = []
    for r in range(1, d.size + 1):
        for combo in itertools.combinations(d.omega, r):
            ratio = cut_ratio(d, combo)
            if best is None or ratio < best - 1e-12:
                best = ratio
                winners = [combo]
            elif abs(ratio - best) <= 1e-12:
                winners.append(combo)
    return best, winners


# ---------------------------------------------------------------------------
# the example domain, exactly


def test_fig1_h_is_one_half(fig1):
    report = cheeger_constant(fig1)
    assert report.h == 0.5
    assert report.h_exact == Fraction(1, 2)


def test_fig1_four_minimizing_cuts(fig1):
    report = cheeger_constant(fig1)
    subsets = [c.subset for c in report.cuts]
    assert subsets == [
        ("x1", "x2"),
        ("x1", "x2", "y1"),
        ("x1", "x2", "y2"),
        ("x1", "x2", "y1", "y2"),
    ]
    for c in report.cuts:
        assert c.cut_weight / c.volume == pytest.approx(0.5, abs=0.0)


def test_fig1_h_exact_confirmed_by_rational_arithmetic(fig1):
    # independent recheck: every quantity in the fig1 graph is a small integer
    report = cheeger_constant(fig1)
    g = fig1.graph
    idx = {v: k for k, v in enumerate(g.vertex_ids)}
    best = None
    for r in range(1, fig1.size + 1):
        for combo in itertools.combinations(fig1.omega, r):
            inside = {idx[v] for v in combo}
            cut = Fraction(0)
            for (i, j), w in zip(g.edges.tolist(), g.weights.tolist()):
                if (i in inside) != (j in inside):
                    cut += Fraction(w)
            vol = sum(Fraction(g.mu[idx[v]]) for v in combo)
            ratio = cut / vol
            best = ratio if best is None else min(best, ratio)
    assert best == report.h_exact


def test_subsets_checked_counts_every_nonempty_subset(fig1):
    report = cheeger_constant(fig1)
    assert report.subsets_checked == 2**fig1.size - 1


def test_report_json_shape(fig1):
    data = cheeger_constant(fig1).to_json_dict()
    assert data["h"] == 0.5
    assert data["h_exact"] == {"num": 1, "den": 2}
    assert [tuple(c["subset"]) for c in data["cuts"]][0] == ("x1", "x2")
    assert data["cuts"][0]["cut_weight"] == 2.0
    assert data["cuts"][0]["volume"] == 4.0


# ---------------------------------------------------------------------------
# oracle agreement on the random corpus


def test_matches_brute_force_on_random_domains(random_corpus):
    for d in random_corpus:
        report = cheeger_constant(d)
        h_oracle, winners = brute_force_h(d)
        assert report.h == pytest.approx(h_oracle, abs=1e-12)
        assert {c.subset for c in report.cuts} == {tuple(w) for w in winners}


def test_determinism(random_corpus):
    d = random_corpus[0]
    a = cheeger_constant(d)
    b = cheeger_constant(d)
    assert a.h == b.h
    assert a.h_exact == b.h_exact
    assert [c.subset for c in a.cuts] == [c.subset for c in b.cuts]


def test_cuts_sorted_by_size_then_vertex_order(random_corpus):
    for d in random_corpus:
        cuts = cheeger_constant(d).cuts
        keys = [(len(c.subset), c.subset) for c in cuts]
        assert keys == sorted(keys)


# ---------------------------------------------------------------------------
# cut_ratio and membership tests


def test_cut_ratio_values(fig1):
    assert cut_ratio(fig1, ["x1"]) == 1.0  # boundary 2 (x2, y1), volume 2
    assert cut_ratio(fig1, fig1.omega) == 0.5
    with pytest.raises(ValueError, match="empty set"):
        cut_ratio(fig1, [])


def test_is_cheeger_cut_exact(fig1):
    report = cheeger_constant(fig1)
    for c in report.cuts:
        assert is_cheeger_cut(fig1, c.subset, report=report)
    assert not is_cheeger_cut(fig1, ["x1"], report=report)
    with pytest.raises(ValueError, match="empty set"):
        is_cheeger_cut(fig1, [], report=report)


def test_is_cheeger_cut_tolerance(fig1):
    # {x1, x2, y1} has ratio exactly h; {y1} has ratio 4/4 = 1
    assert is_cheeger_cut(fig1, ["y1"], tol=0.5)
    assert not is_cheeger_cut(fig1, ["y1"], tol=0.25)
    with pytest.raises(ValueError, match="tol must be >= 0"):
        is_cheeger_cut(fig1, ["x1"], tol=-1e-9)


def test_is_cheeger_cut_recomputes_without_report(fig1):
    assert is_cheeger_cut(fig1, ["x1", "x2"])


# ---------------------------------------------------------------------------
# nesting predicate


def test_nested_chain_check(fig1):
    omega = set(fig1.omega)
    assert nested_chain_check([omega, {"x1", "x2"}])
    assert nested_chain_check([omega, {"x1", "x2", "y1"}, {"x1", "x2"}])
    assert not nested_chain_check([{"x1", "x2"}, {"x1", "y1"}])  # overlap, no inclusion
    assert not nested_chain_check([omega, omega])  # strictness
    assert not nested_chain_check([omega, set()])  # empty member
    assert nested_chain_check([{"x1"}])
    assert nested_chain_check([])


# ---------------------------------------------------------------------------
# enumeration guard


def test_refuses_oversized_domains(fig1):
    with pytest.raises(DomainTooLargeError, match="exceeds the enumeration limit"):
        cheeger_constant(fig1, limit=3)
    assert ENUMERATION_LIMIT == 25
