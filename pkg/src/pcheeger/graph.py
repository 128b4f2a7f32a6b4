"""Weighted graphs, Dirichlet domains, and functions supported on them.

A finite simple graph carries a positive vertex measure mu and positive
symmetric edge weights w. A Domain fixes a nonempty vertex subset Omega that
is connected through its own edges and has at least one edge to the rest of
the graph; functions on the domain live on Omega and are implicitly zero
outside it. Everything downstream (cut ratios, energies, the descent solver)
works through the arrays cached on Domain, so vertex order is canonicalized
once here: vertices sorted by id, edges sorted by endpoint index pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "WeightedGraph",
    "Domain",
    "DirichletFunction",
    "volume",
    "boundary_weight",
    "is_connected",
    "p_norm",
    "load_graph_json",
    "graph_to_json_dict",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Immutable weighted graph with canonical vertex and edge order.

    vertex_ids : vertex identifiers, sorted.
    mu         : vertex measure, aligned with vertex_ids, all > 0.
    edges      : (m, 2) int array of index pairs i < j, lexicographically sorted.
    weights    : edge weights aligned with edges, all > 0.
    """

    vertex_ids: tuple[str, ...]
    mu: np.ndarray
    edges: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(
        cls,
        vertices: Mapping[str, float],
        edges: Iterable[tuple[str, str, float]],
    ) -> "WeightedGraph":
        """Validate and canonicalize raw vertex/edge data."""
        if not vertices:
            raise ValueError("graph has no vertices")
        ids = tuple(sorted(vertices))
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate vertex ids")
        index = {v: k for k, v in enumerate(ids)}
        mu = np.array([float(vertices[v]) for v in ids])
        if not np.all(mu > 0):
            bad = ids[int(np.argmin(mu))]
            raise ValueError(f"vertex measure must be positive, got mu[{bad!r}] = {vertices[bad]}")

        pairs: dict[tuple[int, int], float] = {}
        for u, v, w in edges:
            if u not in index or v not in index:
                missing = u if u not in index else v
                raise ValueError(f"edge endpoint {missing!r} is not a declared vertex")
            if u == v:
                raise ValueError(f"self loop at {u!r}")
            if float(w) <= 0:
                raise ValueError(f"edge weight must be positive, got w[{u!r}, {v!r}] = {w}")
            i, j = sorted((index[u], index[v]))
            if (i, j) in pairs:
                raise ValueError(f"duplicate edge {ids[i]!r} -- {ids[j]!r}")
            pairs[(i, j)] = float(w)

        order = sorted(pairs)
        edge_arr = np.array(order, dtype=np.int64).reshape(len(order), 2)
        w_arr = np.array([pairs[ij] for ij in order])
        return cls(ids, _freeze(mu), _freeze(edge_arr), _freeze(w_arr))

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.vertex_ids)}

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor index lists, by vertex index."""
        nbrs: list[list[int]] = [[] for _ in self.vertex_ids]
        for i, j in self.edges:
            nbrs[i].append(int(j))
            nbrs[j].append(int(i))
        return tuple(tuple(n) for n in nbrs)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)

    def vertex_indices(self, subset: Iterable[str]) -> np.ndarray:
        """Sorted index array for a subset of vertex ids. Unknown ids raise."""
        idx = self.index
        try:
            out = sorted(idx[v] for v in set(subset))
        except KeyError as exc:
            raise ValueError(f"unknown vertex id {exc.args[0]!r}") from None
        return np.array(out, dtype=np.int64)


def is_connected(g: WeightedGraph, subset: Iterable[str]) -> bool:
    """True iff the subset is connected through edges with both ends inside it.

    The empty set is not connected.
    """
    members = set(g.vertex_indices(subset).tolist())
    if not members:
        return False
    stack = [next(iter(members))]
    seen = {stack[0]}
    while stack:
        v = stack.pop()
        for u in g.adjacency[v]:
            if u in members and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == members


@dataclass(frozen=True, eq=False)
class Domain:
    """A connected vertex subset Omega with Dirichlet exterior.

    Construction enforces: Omega nonempty, Omega a subset of V, Omega connected
    via its own edges, and at least one edge leaving Omega (so the exterior
    condition is not vacuous; Omega = V is rejected).
    """

    graph: WeightedGraph
    omega: tuple[str, ...]

    @classmethod
    def build(cls, g: WeightedGraph, omega: Iterable[str]) -> "Domain":
        ids = tuple(g.vertex_ids[i] for i in g.vertex_indices(omega))
        if not ids:
            raise ValueError("omega is empty")
        if not is_connected(g, ids):
            raise ValueError("omega is not connected inside itself")
        d = cls(g, ids)
        if not np.any(d.exterior_weight > 0):
            raise ValueError("no edge leaves omega; the exterior condition is vacuous")
        return d

    @cached_property
    def omega_index(self) -> dict[str, int]:
        """Vertex id -> position in the canonical Omega order."""
        return {v: k for k, v in enumerate(self.omega)}

    @cached_property
    def mu_omega(self) -> np.ndarray:
        g = self.graph
        return _freeze(np.array([g.mu[g.index[v]] for v in self.omega]))

    @cached_property
    def _interior(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Edges with both endpoints in Omega, as local index arrays (i, j, w)."""
        g = self.graph
        local = {g.index[v]: k for k, v in enumerate(self.omega)}
        ii, jj, ww = [], [], []
        for (i, j), w in zip(g.edges, g.weights):
            li, lj = local.get(int(i)), local.get(int(j))
            if li is not None and lj is not None:
                ii.append(li)
                jj.append(lj)
                ww.append(w)
        return (
            _freeze(np.array(ii, dtype=np.int64)),
            _freeze(np.array(jj, dtype=np.int64)),
            _freeze(np.array(ww)),
        )

    @property
    def interior_i(self) -> np.ndarray:
        return self._interior[0]

    @property
    def interior_j(self) -> np.ndarray:
        return self._interior[1]

    @property
    def interior_w(self) -> np.ndarray:
        return self._interior[2]

    @cached_property
    def exterior_weight(self) -> np.ndarray:
        """Per-Omega-vertex total weight of edges leaving Omega."""
        g = self.graph
        local = {g.index[v]: k for k, v in enumerate(self.omega)}
        out = np.zeros(len(self.omega))
        for (i, j), w in zip(g.edges, g.weights):
            li, lj = local.get(int(i)), local.get(int(j))
            if (li is None) != (lj is None):
                out[li if li is not None else lj] += w
        return _freeze(out)

    @property
    def size(self) -> int:
        return len(self.omega)

    def subset_indices(self, s: Iterable[str]) -> np.ndarray:
        """Local indices of a subset of Omega. Ids outside Omega raise."""
        idx = self.omega_index
        members = set(s)
        bad = members.difference(idx)
        if bad:
            raise ValueError(f"subset is not contained in omega: {sorted(bad)!r}")
        return np.array(sorted(idx[v] for v in members), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class DirichletFunction:
    """Real function on Omega, implicitly zero on the rest of the graph.

    values is aligned with domain.omega.
    """

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.domain.size,):
            raise ValueError(
                f"expected {self.domain.size} values aligned with omega, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("function values must be finite")
        object.__setattr__(self, "values", _freeze(vals.copy()))

    @classmethod
    def from_dict(cls, d: Domain, values: Mapping[str, float]) -> "DirichletFunction":
        """Build from an id -> value mapping; ids missing from it get 0."""
        bad = set(values).difference(d.omega_index)
        if bad:
            raise ValueError(f"function assigns values outside omega: {sorted(bad)!r}")
        arr = np.zeros(d.size)
        for v, x in values.items():
            arr[d.omega_index[v]] = float(x)
        return cls(d, arr)

    @classmethod
    def indicator(cls, d: Domain, subset: Iterable[str]) -> "DirichletFunction":
        arr = np.zeros(d.size)
        arr[d.subset_indices(subset)] = 1.0
        return cls(d, arr)

    def as_dict(self) -> dict[str, float]:
        return {v: float(x) for v, x in zip(self.domain.omega, self.values)}

    def value(self, vertex_id: str) -> float:
        i = self.domain.omega_index.get(vertex_id)
        return 0.0 if i is None else float(self.values[i])

    def support(self) -> tuple[str, ...]:
        return tuple(v for v, x in zip(self.domain.omega, self.values) if x != 0.0)

    def normalized(self, p: float) -> "DirichletFunction":
        """Scale so the mu-weighted p-norm is 1."""
        nrm = p_norm(self.domain, self, p)
        if nrm == 0:
            raise ValueError("cannot normalize the zero function")
        return DirichletFunction(self.domain, self.values / nrm)


def volume(d: Domain, s: Iterable[str]) -> float:
    """mu-volume of a subset of Omega."""
    return float(np.sum(d.mu_omega[d.subset_indices(s)]))


def boundary_weight(g: WeightedGraph, s: Iterable[str]) -> float:
    """Total weight of edges with exactly one endpoint in s (s a subset of V)."""
    members = np.zeros(g.n_vertices, dtype=bool)
    members[g.vertex_indices(s)] = True
    crossing = members[g.edges[:, 0]] != members[g.edges[:, 1]]
    return float(np.sum(g.weights[crossing]))


def p_norm(d: Domain, u: DirichletFunction, p: float) -> float:
    """mu-weighted p-norm of u: (sum_x mu_x |u(x)|^p)^(1/p). Requires p >= 1."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if u.domain is not d:
        raise ValueError("function does not belong to this domain")
    total = float(np.sum(d.mu_omega * np.abs(u.values) ** p))
    return total ** (1.0 / p)


# --- JSON wire format -------------------------------------------------------
#
# {"vertices": [{"id": "...", "mu": 1.0}, ...],
#  "edges":    [{"u": "...", "v": "...", "w": 1.0}, ...],
#  "omega":    ["...", ...]}


def _require(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def graph_from_json_dict(data) -> tuple[WeightedGraph, tuple[str, ...]]:
    """Parse the graph wire format; returns the graph and the omega id list."""
    _require(isinstance(data, dict), "top level must be a JSON object")
    for key in ("vertices", "edges", "omega"):
        _require(key in data, f"missing {key!r} field")
    _require(isinstance(data["vertices"], list), "'vertices' must be an array")
    _require(isinstance(data["edges"], list), "'edges' must be an array")
    _require(isinstance(data["omega"], list), "'omega' must be an array")

    vertices: dict[str, float] = {}
    for k, item in enumerate(data["vertices"]):
        _require(isinstance(item, dict), f"vertices[{k}] must be an object")
        _require("id" in item, f"vertices[{k}].id missing")
        _require("mu" in item, f"vertices[{k}].mu missing")
        _require(isinstance(item["id"], str), f"vertices[{k}].id must be a string")
        _require(isinstance(item["mu"], (int, float)), f"vertices[{k}].mu must be a number")
        _require(item["id"] not in vertices, f"vertices[{k}].id {item['id']!r} repeated")
        vertices[item["id"]] = float(item["mu"])

    edges = []
    for k, item in enumerate(data["edges"]):
        _require(isinstance(item, dict), f"edges[{k}] must be an object")
        for field in ("u", "v", "w"):
            _require(field in item, f"edges[{k}].{field} missing")
        _require(isinstance(item["u"], str), f"edges[{k}].u must be a string")
        _require(isinstance(item["v"], str), f"edges[{k}].v must be a string")
        _require(isinstance(item["w"], (int, float)), f"edges[{k}].w must be a number")
        edges.append((item["u"], item["v"], float(item["w"])))

    for k, v in enumerate(data["omega"]):
        _require(isinstance(v, str), f"omega[{k}] must be a vertex id string")

    return WeightedGraph.build(vertices, edges), tuple(data["omega"])


def load_graph_json(path) -> Domain:
    """Load a domain from a graph JSON file."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    g, omega = graph_from_json_dict(data)
    return Domain.build(g, omega)


def graph_to_json_dict(d: Domain) -> dict:
    """Serialize a domain back to the wire format (canonical order)."""
    g = d.graph
    return {
        "vertices": [{"id": v, "mu": float(g.mu[k])} for k, v in enumerate(g.vertex_ids)],
        "edges": [
            {"u": g.vertex_ids[int(i)], "v": g.vertex_ids[int(j)], "w": float(w)}
            for (i, j), w in zip(g.edges, g.weights)
        ],
        "omega": list(d.omega),
    }


def function_from_json_dict(d: Domain, data) -> DirichletFunction:
    """Parse the function wire format {"values": {id: number}}.

    Also accepts any object carrying a "u" field in that format (such as an
    eigen report), so solver output files round-trip unchanged.
    """
    _require(isinstance(data, dict), "function file must be a JSON object")
    if "values" not in data and isinstance(data.get("u"), dict):
        data = data["u"]
    _require("values" in data, "missing 'values' field")
    _require(isinstance(data["values"], dict), "'values' must be an object")
    for k, x in data["values"].items():
        _require(isinstance(x, (int, float)), f"values[{k!r}] must be a number")
    return DirichletFunction.from_dict(d, {k: float(x) for k, x in data["values"].items()})


def function_to_json_dict(u: DirichletFunction) -> dict:
    return {"values": u.as_dict()}
