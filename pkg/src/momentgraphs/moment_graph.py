"""Moment graphs of finite subsets of a block, the GKM condition, and serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .blocks import BlockWindow, integral_finite_roots
from .exactpoly import LinearForm, as_fraction
from .roots import RootSystem, Weight, dot_reflect, leq, rho_pairing


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    label: LinearForm

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class GKMViolation:
    vertex: int
    edge1: Edge
    edge2: Edge


@dataclass(frozen=True)
class MomentGraph:
    """Finite moment graph.

    ``order`` holds every strict relation ``(i, j)`` meaning vertex ``i`` lies
    strictly below vertex ``j``.  Edges are stored with ``u < v`` in that order
    whenever the endpoints are comparable (which is always the case for graphs
    built from a block window).  Labels are linear forms in ``nvars`` variables.
    """

    vertices: tuple
    order: frozenset
    edges: tuple[Edge, ...]
    nvars: int

    def __post_init__(self):
        n = len(self.vertices)
        for i, j in self.order:
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ValueError(f"bad order relation {(i, j)}")
        seen = set()
        for e in self.edges:
            if e.u == e.v:
                raise ValueError("self-loop")
            if not (0 <= e.u < n and 0 <= e.v < n):
                raise ValueError("edge endpoint out of range")
            if e.label.nvars != self.nvars or e.label.is_zero():
                raise ValueError("edge label must be a nonzero form in nvars variables")
            key = frozenset((e.u, e.v))
            if key in seen:
                raise ValueError(f"duplicate edge between {e.u} and {e.v}")
            seen.add(key)

    # order ------------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.vertices)

    def lt(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    def le(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.order

    def down_set(self, i: int) -> frozenset:
        return frozenset(j for j in range(len(self)) if self.le(j, i))

    def up_set(self, i: int) -> frozenset:
        return frozenset(j for j in range(len(self)) if self.le(i, j))

    def is_open(self, S: Iterable[int]) -> bool:
        S = frozenset(S)
        return all(self.down_set(i) <= S for i in S)

    def is_closed(self, S: Iterable[int]) -> bool:
        return self.is_open(frozenset(range(len(self))) - frozenset(S))

    def minimal_vertices(self) -> list[int]:
        return [i for i in range(len(self)) if not any(self.lt(j, i) for j in range(len(self)))]

    @cached_property
    def depth(self) -> tuple[int, ...]:
        """Length of the longest strictly increasing chain ending at each vertex."""
        out = [0] * len(self)
        for i in self.linear_extension():
            below = [out[j] + 1 for j in range(len(self)) if self.lt(j, i)]
            out[i] = max(below, default=0)
        return tuple(out)

    def linear_extension(self) -> list[int]:
        """Vertices sorted compatibly with the order (ties by index)."""
        remaining = set(range(len(self)))
        out = []
        while remaining:
            nxt = min(i for i in remaining if not any(self.lt(j, i) for j in remaining))
            out.append(nxt)
            remaining.remove(nxt)
        return out

    def open_sets(self) -> list[frozenset]:
        """All down-closed subsets (unions of principal down-sets)."""
        opens = {frozenset()}
        for i in self.linear_extension():
            opens |= {s | self.down_set(i) for s in opens}
        return sorted(opens, key=lambda s: (len(s), sorted(s)))

    def diameter(self) -> int:
        """Longest shortest path in the underlying undirected graph (per component)."""
        n = len(self)
        best = 0
        for s in range(n):
            dist = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for x in frontier:
                    for e in self.incident(x):
                        y = e.other(x)
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            best = max(best, max(dist.values()))
        return best

    def components(self) -> int:
        parent = list(range(len(self)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.u)] = find(e.v)
        return len({find(i) for i in range(len(self))})

    def incident(self, i: int) -> list[Edge]:
        return [e for e in self.edges if i in (e.u, e.v)]

    def edge_between(self, i: int, j: int) -> Edge | None:
        for e in self.edges:
            if {e.u, e.v} == {i, j}:
                return e
        return None

    def subgraph(self, keep: Sequence[int]) -> MomentGraph:
        keep = list(keep)
        pos = {v: k for k, v in enumerate(keep)}
        order = frozenset((pos[i], pos[j]) for i, j in self.order if i in pos and j in pos)
        edges = tuple(Edge(pos[e.u], pos[e.v], e.label) for e in self.edges if e.u in pos and e.v in pos)
        return MomentGraph(tuple(self.vertices[i] for i in keep), order, edges, self.nvars)


def make_graph(nvertices: int, edges: Iterable[tuple[int, int, Sequence]], nvars: int, order=None, names=None) -> MomentGraph:
    """Abstract moment graph; by default the order is generated by the edges ``u < v``."""
    edge_list = tuple(Edge(u, v, LinearForm(lbl).normalized()) for u, v, lbl in edges)
    if order is None:
        rel = {(e.u, e.v) for e in edge_list}
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        order = rel
    vertices = tuple(names) if names is not None else tuple(f"v{i}" for i in range(nvertices))
    return MomentGraph(vertices, frozenset(tuple(p) for p in order), edge_list, nvars)


# ---------------------------------------------------------------------------


def reflection_edge(rs: RootSystem, lam: Weight, mu: Weight):
    """The positive integral ``(alpha, n)`` with ``mu = s_{alpha+n delta}.lambda``, or None."""
    for a in integral_finite_roots(rs, lam):
        if sum(a) <= 0:
            continue
        p = rho_pairing(rs, lam, a)
        if p == 0:
            continue
        if dot_reflect(rs, lam, a, 0).finite != mu.finite:
            continue
        n = (lam.delta - mu.delta) / p
        if n.denominator == 1:
            return a, int(n)
    return None


def build_moment_graph(W: BlockWindow, K: Iterable[int]) -> MomentGraph:
    """Full sub-moment-graph of the window on the index set ``K``."""
    rs = W.root_system
    weights = sorted({W.weights[i] for i in K}, key=Weight.sort_key)
    n = len(weights)
    order = frozenset((i, j) for i in range(n) for j in range(n) if i != j and leq(rs, weights[i], weights[j]))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            hit = reflection_edge(rs, weights[i], weights[j])
            if hit is None:
                continue
            label = rs.coroot(hit[0]).normalized()
            u, v = (j, i) if (j, i) in order else (i, j)
            edges.append(Edge(u, v, label))
    edges.sort(key=lambda e: (min(e.u, e.v), max(e.u, e.v)))
    return MomentGraph(tuple(weights), order, tuple(edges), rs.rank)


def gkm_check(G: MomentGraph) -> GKMViolation | None:
    """None if labels of distinct edges at every vertex are pairwise non-proportional."""
    for x in range(len(G)):
        inc = G.incident(x)
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                if inc[a].label.is_proportional(inc[b].label):
                    return GKMViolation(x, inc[a], inc[b])
    return None


def delta_condition_check(K: Iterable[Weight]) -> bool:
    """True iff no two weights of ``K`` differ by a nonzero multiple of delta."""
    finite_parts = [w.finite for w in K]
    return len(finite_parts) == len(set(finite_parts))


# ---------------------------------------------------------------------------
# serialization


def _vertex_json(v):
    return v.to_json() if isinstance(v, Weight) else str(v)


def _vertex_from_json(data):
    return Weight.from_json(data) if isinstance(data, dict) else data


def graph_to_dict(G: MomentGraph) -> dict:
    return {
        "nvars": G.nvars,
        "vertices": [_vertex_json(v) for v in G.vertices],
        "order": sorted([list(p) for p in G.order]),
        "edges": [{"u": e.u, "v": e.v, "label": e.label.to_json()} for e in G.edges],
    }


def graph_from_dict(data: dict) -> MomentGraph:
    try:
        edges = tuple(Edge(int(e["u"]), int(e["v"]), LinearForm(as_fraction(c) for c in e["label"])) for e in data["edges"])
        nvars = int(data["nvars"]) if "nvars" in data else (edges[0].label.nvars if edges else 1)
        return MomentGraph(
            tuple(_vertex_from_json(v) for v in data["vertices"]),
            frozenset((int(i), int(j)) for i, j in data["order"]),
            edges,
            nvars,
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed moment graph JSON: {exc}") from exc


def _dot_id(i: int) -> str:
    return f"n{i}"


def export_graph(G: MomentGraph, format: str = "json") -> str:
    if format == "json":
        return json.dumps(graph_to_dict(G), indent=2, sort_keys=True) + "\n"
    if format != "dot":
        raise ValueError(f"unknown format {format!r}")
    lines = ["digraph moment_graph {", "  rankdir=BT;"]
    for i, v in enumerate(G.vertices):
        lines.append(f'  {_dot_id(i)} [label="{v}"];')
    by_depth: dict[int, list[int]] = {}
    for i, d in enumerate(G.depth):
        by_depth.setdefault(d, []).append(i)
    for d in sorted(by_depth):
        members = "; ".join(_dot_id(i) for i in by_depth[d])
        lines.append(f"  {{ rank=same; {members}; }}")
    for e in G.edges:
        lines.append(f'  {_dot_id(e.u)} -> {_dot_id(e.v)} [dir=none, label="{e.label.coroot_string()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def import_graph(text: str) -> MomentGraph:
    return graph_from_dict(json.loads(text))
