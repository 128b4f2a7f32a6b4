"""Exact Cheeger constants by exhaustive subset enumeration.

h(Omega) = min over nonempty D inside Omega (D = Omega allowed) of
|boundary D|_w / |D|_mu. The search is exhaustive over all 2^n - 1 subsets,
vectorized in chunks, and refuses domains past a hard size limit. Minimizers
are rechecked in exact rational arithmetic (every float is a rational, so
Fraction sums of the stored mu/w are exact), which settles ties exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainTooLargeError
from .graph import Domain, boundary_weight, volume

__all__ = [
    "CutRecord",
    "CheegerReport",
    "cheeger_constant",
    "cut_ratio",
    "is_cheeger_cut",
    "nested_chain_check",
]

ENUMERATION_LIMIT = 25
_CHUNK_BITS = 16
# relative slack when collecting float-stage candidates for the exact recheck;
# roundoff in the ratio of two short sums is ~1e-15, so this is generous
_CANDIDATE_SLACK = 1e-9


@dataclass(frozen=True)
class CutRecord:
    """One subset with its cut data, ids in canonical order."""

    subset: tuple[str, ...]
    cut_weight: float
    volume: float
    ratio: float

    def to_json_dict(self) -> dict:
        return {
            "subset": list(self.subset),
            "cut_weight": self.cut_weight,
            "volume": self.volume,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class CheegerReport:
    """Exact minimum ratio, every minimizing cut, and the search size."""

    h: float
    h_exact: Fraction
    cuts: tuple[CutRecord, ...]
    subsets_checked: int

    def to_json_dict(self) -> dict:
        return {
            "h": self.h,
            "h_exact": {"num": self.h_exact.numerator, "den": self.h_exact.denominator},
            "subsets_checked": self.subsets_checked,
            "cuts": [c.to_json_dict() for c in self.cuts],
        }


def _chunk_ratios(d: Domain, start: int, stop: int) -> np.ndarray:
    """Cut ratios for subset bitmasks in [start, stop); mask 0 yields +inf."""
    n = d.size
    masks = np.arange(start, stop, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.float64)
    vol = bits @ d.mu_omega
    cut = bits @ d.exterior_weight
    ii, jj, ww = d.interior_i, d.interior_j, d.interior_w
    for e in range(len(ww)):
        cut += ww[e] * np.abs(bits[:, ii[e]] - bits[:, jj[e]])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(vol > 0, cut / np.where(vol > 0, vol, 1.0), np.inf)
    return ratio


def _exact_ratio(d: Domain, mask: int) -> Fraction:
    """Cut ratio of a bitmask in exact rational arithmetic over raw mu/w."""
    g = d.graph
    in_cut = np.zeros(g.n_vertices, dtype=bool)
    for k, v in enumerate(d.omega):
        if mask >> k & 1:
            in_cut[g.index[v]] = True
    cut = Fraction(0)
    for (i, j), w in zip(g.edges, g.weights):
        if in_cut[i] != in_cut[j]:
            cut += Fraction(float(w))
    vol = Fraction(0)
    for k in np.flatnonzero(in_cut):
        vol += Fraction(float(g.mu[k]))
    return cut / vol


def cheeger_constant(d: Domain, limit: int = ENUMERATION_LIMIT) -> CheegerReport:
    """Enumerate every nonempty subset of Omega and return the exact minimum.

    Raises DomainTooLargeError when |Omega| > limit; 2^25 is already minutes
    of work and this tool is for desk-scale instances.
    """
    n = d.size
    if n > limit:
        raise DomainTooLargeError(
            f"|omega| = {n} exceeds the enumeration limit {limit}; "
            f"exhaustive search over 2^{n} subsets refused"
        )
    total = 1 << n
    step = min(total, 1 << _CHUNK_BITS)

    hmin = np.inf
    for start in range(0, total, step):
        r = _chunk_ratios(d, start, min(start + step, total))
        hmin = min(hmin, float(np.min(r)))

    threshold = hmin * (1.0 + _CANDIDATE_SLACK)
    candidates: list[int] = []
    for start in range(0, total, step):
        r = _chunk_ratios(d, start, min(start + step, total))
        for k in np.flatnonzero(r <= threshold):
            candidates.append(start + int(k))

    exact = {m: _exact_ratio(d, m) for m in candidates}
    h_exact = min(exact.values())
    winners = [m for m in candidates if exact[m] == h_exact]
    winners.sort(key=lambda m: (bin(m).count("1"), tuple(k for k in range(n) if m >> k & 1)))

    cuts = []
    for m in winners:
        subset = tuple(d.omega[k] for k in range(n) if m >> k & 1)
        cw = boundary_weight(d.graph, subset)
        vol = volume(d, subset)
        cuts.append(CutRecord(subset, cw, vol, cw / vol))
    return CheegerReport(float(h_exact), h_exact, tuple(cuts), total - 1)


def cut_ratio(d: Domain, s: Iterable[str]) -> float:
    """|boundary s|_w / |s|_mu for a nonempty subset of Omega."""
    subset = tuple(s)
    if not subset:
        raise ValueError("cut ratio of the empty set is undefined")
    d.subset_indices(subset)
    return boundary_weight(d.graph, subset) / volume(d, subset)


def is_cheeger_cut(
    d: Domain,
    s: Iterable[str],
    tol: float = 0.0,
    report: CheegerReport | None = None,
) -> bool:
    """True iff the subset attains h(Omega) within tol.

    tol = 0 performs the comparison in exact rational arithmetic. A
    precomputed report can be passed to avoid re-enumeration in loops.
    """
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    subset = tuple(s)
    if not subset:
        raise ValueError("the empty set is not a cut")
    idx = d.subset_indices(subset)
    if report is None:
        report = cheeger_constant(d)
    if tol == 0.0:
        mask = 0
        for k in idx:
            mask |= 1 << int(k)
        return _exact_ratio(d, mask) == report.h_exact
    return abs(cut_ratio(d, subset) - report.h) <= tol


def nested_chain_check(sets: Sequence[Iterable[str]]) -> bool:
    """True iff the sets are strictly nested in the given order (each a strict
    subset of its predecessor) and all nonempty."""
    chain = [frozenset(s) for s in sets]
    if any(not s for s in chain):
        return False
    return all(b < a for a, b in zip(chain, chain[1:]))
