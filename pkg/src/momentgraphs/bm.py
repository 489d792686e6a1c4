"""Braden-MacPherson sheaves, their global sections, and the Hom/endomorphism checks.

The sheaf is built upward from the unique minimal vertex.  At a vertex ``x``
the sections already constructed on ``{y < x}`` are mapped to
``⊕_{y---x, y<x} B^y / l B^y``; the stalk ``B^x`` is a graded free cover of
that image, one generator for each minimal generator found by graded
Nakayama (degrees ``<= D``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .ambient import Ambient
from .exactpoly import (
    EchelonSpace,
    Polynomial,
    _monomials,
    mat_vec,
    nullspace,
    polynomial_kernel,
    reduce_mod_linear,
    reduction_matrix,
)
from .moment_graph import MomentGraph, delta_condition_check, gkm_check, graph_from_dict, graph_to_dict
from .roots import Weight
from .sections import (
    ModuleMap,
    SectionModule,
    exactness_failures,
    generic_rank,
    verma_flag_report,
)
from .structure import structure_basis


@dataclass
class BMSheaf:
    graph: MomentGraph
    base: int
    stalks: dict[int, tuple[int, ...]]
    edge_maps: dict[tuple[int, int], tuple[tuple[Polynomial, ...], ...]]
    degree_bound: int
    construction_log: dict[int, tuple[int, ...]]

    @property
    def ambient(self) -> Ambient:
        blocks = tuple((v, d) for v in range(len(self.graph)) for d in self.stalks.get(v, ()))
        return Ambient(self.graph.nvars, blocks)

    def stalk_rank(self, v: int) -> int:
        return len(self.stalks.get(v, ()))

    def to_dict(self) -> dict:
        n = len(self.graph)
        return {
            "graph": graph_to_dict(self.graph),
            "base": self.base,
            "degree_bound": self.degree_bound,
            "stalks": [list(self.stalks.get(v, ())) for v in range(n)],
            "edge_maps": [
                {"u": y, "v": x, "matrix": [[str(p) for p in row] for row in mat]}
                for (y, x), mat in sorted(self.edge_maps.items())
            ],
            "construction_log": [list(self.construction_log.get(v, ())) for v in range(n)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> BMSheaf:
        try:
            G = graph_from_dict(data["graph"])
            variables = Ambient(G.nvars, ()).variables
            stalks = {v: tuple(int(d) for d in degs) for v, degs in enumerate(data["stalks"]) if degs}
            maps = {}
            for m in data["edge_maps"]:
                maps[(int(m["u"]), int(m["v"]))] = tuple(
                    tuple(Polynomial.parse(t, variables) for t in row) for row in m["matrix"]
                )
            log = {v: tuple(int(x) for x in dims) for v, dims in enumerate(data["construction_log"]) if dims}
            return cls(G, int(data["base"]), stalks, maps, int(data["degree_bound"]), log)
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed sheaf JSON: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> BMSheaf:
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# sections of a partially built sheaf


def _oriented_edges(G: MomentGraph):
    for e in G.edges:
        if G.lt(e.v, e.u):
            yield e.v, e.u, e.label
        else:
            yield e.u, e.v, e.label


def _section_space(G, stalks, edge_maps, T: Iterable[int], d: int) -> tuple[Ambient, list[list[Fraction]]]:
    """Degree-``d`` sections over ``T``: compatible tuples modulo each edge label."""
    T = set(T)
    amb = Ambient(G.nvars, tuple((v, a) for v in sorted(T) for a in stalks.get(v, ())))
    N = amb.dim(d)
    offs = amb.offsets(d)
    variables = amb.variables
    rows = []
    for y, w, label in _oriented_edges(G):
        if y not in T or w not in T or not stalks.get(y):
            continue
        ys, ws = amb.blocks_at(y), amb.blocks_at(w)
        # a missing map means B^w = 0, so sections must vanish mod the label at y
        R = edge_maps.get((y, w), ())
        for k, by in enumerate(ys):
            deg = d - amb.blocks[by][1]
            if deg < 0:
                continue
            red = reduction_matrix(label.coefficients, deg)
            if not red:
                continue
            block = [[Fraction(0)] * N for _ in red]
            pos, size = offs[by]
            for i, r in enumerate(red):
                block[i][pos : pos + size] = r
            for j, bw in enumerate(ws if R else ()):
                entry = R[k][j]
                qdeg = d - amb.blocks[bw][1]
                if entry.is_zero() or qdeg < 0:
                    continue
                qpos = offs[bw][0]
                for t, mon in enumerate(_monomials(qdeg, G.nvars)):
                    col = mat_vec(red, (Polynomial.monomial(variables, mon) * entry).to_vector(deg))
                    for i, c in enumerate(col):
                        if c:
                            block[i][qpos + t] -= c
            rows.extend(block)
    if rows:
        return amb, nullspace(rows, N)
    return amb, [[Fraction(int(i == j)) for i in range(N)] for j in range(N)]


def _boundary_image(amb: Ambient, vec, d, lower_edges) -> list:
    offs = amb.offsets(d)
    out = []
    for y, label in lower_edges:
        for b in amb.blocks_at(y):
            deg = d - amb.blocks[b][1]
            if deg < 0:
                continue
            pos, size = offs[b]
            out.extend(mat_vec(reduction_matrix(label.coefficients, deg), vec[pos : pos + size]))
    return out


def bm_construct(G: MomentGraph, base: int | None = None, degree_bound: int = 6) -> BMSheaf:
    violation = gkm_check(G)
    if violation is not None:
        raise ValueError(f"graph is not GKM at vertex {violation.vertex}")
    minimal = G.minimal_vertices()
    if len(minimal) != 1:
        raise ValueError(f"graph has {len(minimal)} minimal vertices; a unique one is required")
    if base is None:
        base = minimal[0]
    if base != minimal[0]:
        raise ValueError(f"vertex {base} is not the minimal vertex {minimal[0]}")
    D = degree_bound
    stalks: dict[int, tuple[int, ...]] = {base: (0,)}
    maps: dict[tuple[int, int], tuple] = {}
    log: dict[int, tuple[int, ...]] = {base: tuple(0 for _ in range(D + 1))}
    for x in G.linear_extension():
        if x == base:
            continue
        below = [y for y in range(len(G)) if G.lt(y, x)]
        lower = [(y, label) for y, w, label in _oriented_edges(G) if w == x and G.lt(y, x) and stalks.get(y)]
        lower.sort(key=lambda t: t[0])
        degrees, chosen, dims = [], [], []
        prev = None
        for d in range(D + 1):
            amb, basis = _section_space(G, stalks, maps, below, d)
            images = [_boundary_image(amb, v, d, lower) for v in basis]
            width = len(images[0]) if images else len(_boundary_image(amb, [0] * amb.dim(d), d, lower))
            span = EchelonSpace(width)
            if prev is not None:
                pamb, pbasis = prev
                for v in pbasis:
                    for i in range(G.nvars):
                        exp = tuple(int(j == i) for j in range(G.nvars))
                        span.add(_boundary_image(amb, pamb.shift_vector(v, d - 1, exp), d, lower))
            full = span.copy()
            for v, img in zip(basis, images):
                full.add(img)
                if span.add(img):
                    degrees.append(d)
                    chosen.append(amb.from_vector(v, d))
            dims.append(full.dim)
            prev = (amb, basis)
        log[x] = tuple(dims)
        if not degrees:
            continue
        stalks[x] = tuple(degrees)
        for y, label in lower:
            amb_y = [b for b in amb.blocks_at(y)]
            mat = tuple(tuple(reduce_mod_linear(sec[b], label) for sec in chosen) for b in amb_y)
            maps[(y, x)] = mat
    return BMSheaf(G, base, stalks, maps, D, log)


def global_sections(B: BMSheaf) -> SectionModule:
    """Compatible tuples over the whole graph, degreewise ``<= D``, with minimal generators."""
    G = B.graph
    amb = B.ambient
    pieces = {}
    for d in range(B.degree_bound + 1):
        sec_amb, basis = _section_space(G, B.stalks, B.edge_maps, range(len(G)), d)
        assert sec_amb == amb
        pieces[d] = EchelonSpace(amb.dim(d), basis)
    return SectionModule.from_pieces(G, amb, pieces, B.degree_bound)


# ---------------------------------------------------------------------------
# Hom spaces and endomorphisms


def hom_basis(M: SectionModule, N: SectionModule, k: int) -> list[list[tuple]]:
    """Degree-``k`` ``Z``-linear maps ``M -> N`` as images of the minimal generators of ``M``.

    A map is determined by the images ``n_i`` of the generators ``g_i``.  It
    extends to a ``Z``-linear map exactly when at each vertex every relation
    among the ``g_i`` over the fraction field is also satisfied by the ``n_i``.
    """
    if M.graph != N.graph:
        raise ValueError("modules live on different graphs")
    gens = M.minimal_generators()
    targets = []
    for e, _ in gens:
        deg = e + k
        targets.append(N.piece(deg).basis if deg >= 0 else [])
    unknowns = [(i, r) for i, t in enumerate(targets) for r in range(len(t))]
    if not unknowns:
        return []
    images = {(i, r): N.ambient.from_vector(targets[i][r], gens[i][0] + k) for i, r in unknowns}
    variables = M.ambient.variables
    rows = []
    for mu in range(len(M.graph)):
        nblocks = N.ambient.blocks_at(mu)
        if not nblocks:
            continue
        mblocks = M.ambient.blocks_at(mu)
        columns = [[g[b] for b in mblocks] for _, g in gens]
        local = Ambient(N.ambient.nvars, tuple(N.ambient.blocks[b] for b in nblocks))
        for c in polynomial_kernel(columns, variables):
            lead = next(i for i, ci in enumerate(c) if not ci.is_zero())
            deg = c[lead].degree() + gens[lead][0] + k
            cols = []
            for i, r in unknowns:
                if c[i].is_zero():
                    cols.append([Fraction(0)] * local.dim(deg))
                else:
                    n = images[(i, r)]
                    cols.append(local.to_vector(tuple(c[i] * n[b] for b in nblocks), deg))
            rows.extend([[col[t] for col in cols] for t in range(local.dim(deg))])
    solutions = nullspace(rows, len(unknowns)) if rows else [
        [Fraction(int(a == b)) for a in range(len(unknowns))] for b in range(len(unknowns))
    ]
    out = []
    for sol in solutions:
        per_gen = []
        for i, t in enumerate(targets):
            deg = gens[i][0] + k
            vec = [Fraction(0)] * N.ambient.dim(deg) if deg >= 0 else []
            for r, v in enumerate(t):
                c = sol[unknowns.index((i, r))]
                if c:
                    vec = [a + c * b for a, b in zip(vec, v)]
            per_gen.append(N.ambient.from_vector(vec, deg) if deg >= 0 else N.ambient.zero())
        out.append(per_gen)
    return out


def hom_dimension(M: SectionModule, N: SectionModule, k: int) -> int:
    return len(hom_basis(M, N, k))


@dataclass(frozen=True)
class EndomorphismImage:
    dims: tuple[int, ...]
    bases: tuple[tuple[tuple[Polynomial, ...], ...], ...]


def _endomorphism_degree(M: SectionModule, d: int) -> list[tuple[Polynomial, ...]]:
    G = M.graph
    n = G.nvars
    std = Ambient.standard(len(G), n)
    variables = std.variables
    unknowns = [(mu, mon) for mu in range(len(G)) for mon in _monomials(d, n)]
    rows = []
    for e, g in M.minimal_generators():
        space = M.piece(e + d)
        cols = []
        for mu, mon in unknowns:
            z = Polynomial.monomial(variables, mon)
            elt = M.ambient.scale_by(g, {mu: z})
            cols.append(space.residual(M.ambient.to_vector(elt, e + d)))
        rows.extend([[col[t] for col in cols] for t in range(space.n)])
    if rows:
        sols = nullspace(rows, len(unknowns))
    else:
        sols = [[Fraction(int(a == b)) for a in range(len(unknowns))] for b in range(len(unknowns))]
    return [std.from_vector(s, d) for s in sols]


def endomorphism_image(M: SectionModule, max_degree: int | None = None) -> EndomorphismImage:
    """Tuples ``(z_mu)`` in ``⊕ S_d`` acting componentwise with ``z M ⊆ M``, per degree."""
    D = M.degree_bound if max_degree is None else max_degree
    bases = tuple(tuple(_endomorphism_degree(M, d)) for d in range(D + 1))
    return EndomorphismImage(tuple(len(b) for b in bases), bases)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class SoergelReport:
    multiplicity_free: bool
    support_equals_k: bool
    delta_condition: bool
    stalk_ranks: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.multiplicity_free and self.support_equals_k and self.delta_condition

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "multiplicity_free": self.multiplicity_free,
            "support_equals_K": self.support_equals_k,
            "delta_condition": self.delta_condition,
            "stalk_ranks": list(self.stalk_ranks),
        }


def check_soergel_assumptions(G: MomentGraph, base: int | None = None, K: Sequence[int] | None = None, degree_bound: int = 6) -> SoergelReport:
    """Multiplicity-freeness, support and the delta-condition for the BM sheaf on ``K``.

    Abstract vertices (not weights) carry no delta-coordinate; for them the
    delta-condition holds vacuously.
    """
    if K is not None:
        K = sorted(K)
        if base is not None:
            base = K.index(base)
        G = G.subgraph(K)
    B = bm_construct(G, base, degree_bound)
    gamma = global_sections(B)
    ranks = tuple(B.stalk_rank(v) for v in range(len(G)))
    support = all(generic_rank(gamma, v) > 0 for v in range(len(G)))
    weights = [v for v in G.vertices if isinstance(v, Weight)]
    delta_ok = delta_condition_check(weights) if len(weights) == len(G) else True
    return SoergelReport(all(r <= 1 for r in ranks), support, delta_ok, ranks)


@dataclass(frozen=True)
class SubgenericReport:
    sections_match: bool
    endomorphisms_match: bool
    exact_sequence: bool
    multiplicities: tuple[int, int]

    @property
    def passed(self) -> bool:
        return self.sections_match and self.endomorphisms_match and self.exact_sequence and self.multiplicities == (1, 1)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "sections_match": self.sections_match,
            "endomorphisms_match": self.endomorphisms_match,
            "exact_sequence": self.exact_sequence,
            "multiplicities": list(self.multiplicities),
        }


def subgeneric_sequence(gamma: SectionModule) -> tuple:
    """The sequence ``0 -> V(upper)[1] -> gamma -> V(lower) -> 0`` on a single edge."""
    G = gamma.graph
    e = G.edges[0]
    lo, hi = e.u, e.v
    D = gamma.degree_bound
    sub = SectionModule.standard(G, hi, D, shift=1)
    quo = SectionModule.standard(G, lo, D)
    ell = e.label.to_polynomial(gamma.ambient.variables)
    hb = gamma.ambient.blocks_at(hi)[0]
    lb = gamma.ambient.blocks_at(lo)[0]
    f = ModuleMap(sub, gamma, {(hb, hi): ell})
    g = ModuleMap(gamma, quo, {(lo, lb): Polynomial.constant(gamma.ambient.variables, 1)})
    return sub, quo, f, g


def subgeneric_report(G: MomentGraph, degree_bound: int = 6) -> SubgenericReport:
    if len(G) != 2 or len(G.edges) != 1:
        raise ValueError("the subgeneric check needs a single-edge graph")
    B = bm_construct(G, None, degree_bound)
    gamma = global_sections(B)
    D = degree_bound
    z = SectionModule.structure_module(G, D)
    same = gamma.ambient == z.ambient and all(gamma.piece(d) == z.piece(d) for d in range(D + 1))
    endo = endomorphism_image(gamma).dims == tuple(structure_basis(G, d).dim for d in range(D + 1))
    sub, quo, f, g = subgeneric_sequence(gamma)
    exact = not exactness_failures(sub, gamma, quo, f, g)
    flag = verma_flag_report(gamma)
    e = G.edges[0]
    mult = (flag.multiplicities[e.u], flag.multiplicities[e.v])
    return SubgenericReport(same, endo, exact, mult)


@dataclass(frozen=True)
class StruktursatzReport:
    hom_dims: tuple[int, ...]
    stalk_ranks: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.hom_dims == self.stalk_ranks

    def to_dict(self) -> dict:
        return {"passed": self.passed, "hom_dims": list(self.hom_dims), "stalk_ranks": list(self.stalk_ranks)}


def struktursatz_report(G: MomentGraph, base: int | None = None, degree_bound: int = 6) -> StruktursatzReport:
    B = bm_construct(G, base, degree_bound)
    gamma = global_sections(B)
    homs = tuple(hom_dimension(gamma, SectionModule.standard(G, nu, degree_bound), 0) for nu in range(len(G)))
    return StruktursatzReport(homs, tuple(B.stalk_rank(v) for v in range(len(G))))
