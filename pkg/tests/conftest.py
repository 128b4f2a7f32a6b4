"""Shared fixtures: the four-path example domain and a seeded random corpus.

The corpus generator draws connected weighted graphs with 2..8 interior
vertices (spanning tree plus extra edges at probability 0.3) and 1..3 pendant
boundary vertices, with measures and weights in [0.5, 2.5]. Everything is
seeded, so every test run sees byte-identical domains.
"""

from __future__ import annotations

import numpy as np
import pytest

from pcheeger import Domain, WeightedGraph, sweep
from pcheeger.fig1 import build_fig1

CORPUS_SEED = 20260818
CORPUS_SIZE = 20


def make_random_domain(rng: np.random.Generator) -> Domain:
    n_omega = int(rng.integers(2, 9))
    omega_ids = [f"v{k}" for k in range(n_omega)]
    vertices = {v: float(rng.uniform(0.5, 2.5)) for v in omega_ids}
    drawn = set()
    edges = []
    for k in range(1, n_omega):
        j = int(rng.integers(0, k))
        drawn.add((j, k))
        edges.append((omega_ids[j], omega_ids[k], float(rng.uniform(0.5, 2.5))))
    for a in range(n_omega):
        for b in range(a + 1, n_omega):
            if (a, b) not in drawn and rng.random() < 0.3:
                drawn.add((a, b))
                edges.append((omega_ids[a], omega_ids[b], float(rng.uniform(0.5, 2.5))))
    for k in range(int(rng.integers(1, 4))):  # >= 1 pendant keeps the boundary nonempty
        bid = f"b{k}"
        vertices[bid] = float(rng.uniform(0.5, 2.5))
        target = omega_ids[int(rng.integers(0, n_omega))]
        edges.append((bid, target, float(rng.uniform(0.5, 2.5))))
    return Domain.build(WeightedGraph.build(vertices, edges), omega_ids)


@pytest.fixture(scope="session")
def fig1() -> Domain:
    return build_fig1()


@pytest.fixture(scope="session")
def random_corpus() -> tuple[Domain, ...]:
    rng = np.random.default_rng(CORPUS_SEED)
    return tuple(make_random_domain(rng) for _ in range(CORPUS_SIZE))


@pytest.fixture(scope="session")
def fig1_sweep(fig1):
    """One shared 12-step default sweep on the example domain."""
    return sweep(fig1)
