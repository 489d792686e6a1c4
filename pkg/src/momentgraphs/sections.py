"""Verma-flag section modules over the structure algebra.

A :class:`SectionModule` is the ``S``-span of finitely many homogeneous
elements of an ambient ``⊕_x ⊕_k S(-a_{x,k})``.  Every answer is computed
degreewise up to the module's ``degree_bound`` ``D`` and is only certified in
degrees ``<= D``.

The localizations used on the representation-theoretic side never appear:
generic ranks are ranks over the fraction field (computed by evaluation at
random integral points), and every other statement is a degreewise equality
of ``Q``-vector spaces.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .ambient import Ambient, Element
from .exactpoly import (
    EchelonSpace,
    LinearForm,
    Polynomial,
    _monomials,
    evaluation_rank,
    graded_dim,
    nullspace,
)
from .moment_graph import Edge, MomentGraph, gkm_check, graph_from_dict, graph_to_dict

DEFAULT_DEGREE_BOUND = 6
_RNG_SEED = 20240917


def _element_degree(ambient: Ambient, element: Sequence[Polynomial]) -> int | None:
    degs = set()
    for p, (_, s) in zip(element, ambient.blocks):
        if p.is_zero():
            continue
        if not p.is_homogeneous():
            raise ValueError(f"component {p} is not homogeneous")
        degs.add(p.degree() + s)
    if len(degs) > 1:
        raise ValueError(f"generator components have inconsistent degrees {sorted(degs)}")
    return degs.pop() if degs else None


class SectionModule:
    """Graded ``S``-submodule of an ambient free module on the vertices of a moment graph."""

    def __init__(
        self,
        graph: MomentGraph,
        generators: Iterable[Sequence[Polynomial]],
        degree_bound: int = DEFAULT_DEGREE_BOUND,
        ambient: Ambient | None = None,
    ):
        self.graph = graph
        self.ambient = ambient or Ambient.standard(len(graph), graph.nvars)
        if self.ambient.nvars != graph.nvars:
            raise ValueError("ambient and graph use different numbers of variables")
        self.degree_bound = degree_bound
        gens = []
        for g in generators:
            g = tuple(g)
            if len(g) != len(self.ambient.blocks):
                raise ValueError(f"generator has {len(g)} components, ambient has {len(self.ambient.blocks)} blocks")
            d = _element_degree(self.ambient, g)
            if d is not None:
                gens.append((d, g))
        self.generators: tuple[tuple[int, Element], ...] = tuple(gens)
        self._pieces: dict[int, EchelonSpace] = {}
        self._minimal = None

    # construction helpers ---------------------------------------------------
    @classmethod
    def standard(cls, G: MomentGraph, mu: int, degree_bound: int = DEFAULT_DEGREE_BOUND, shift: int = 0) -> SectionModule:
        """``V(mu)``, optionally with its generator placed in degree ``shift``."""
        if not 0 <= mu < len(G):
            raise ValueError(f"invalid vertex {mu}")
        blocks = tuple((v, shift if v == mu else 0) for v in range(len(G)))
        amb = Ambient(G.nvars, blocks)
        gen = tuple(
            Polynomial.constant(amb.variables, 1 if v == mu else 0) for v in range(len(G))
        )
        return cls(G, [gen], degree_bound, amb)

    @classmethod
    def structure_module(cls, G: MomentGraph, degree_bound: int = DEFAULT_DEGREE_BOUND) -> SectionModule:
        """``Z(K)`` as a module over itself."""
        from .structure import structure_basis

        amb = Ambient.standard(len(G), G.nvars)
        pieces = {}
        for d in range(degree_bound + 1):
            pieces[d] = EchelonSpace(amb.dim(d), (amb.to_vector(t.components, d) for t in structure_basis(G, d).basis))
        return cls.from_pieces(G, amb, pieces, degree_bound)

    @classmethod
    def from_pieces(cls, G: MomentGraph, ambient: Ambient, pieces: dict[int, EchelonSpace], degree_bound: int) -> SectionModule:
        """Module with minimal generators read off from S-stable degreewise pieces ``0..D``."""
        gens = []
        for d in range(degree_bound + 1):
            span = EchelonSpace(ambient.dim(d))
            if d > 0:
                for v in pieces[d - 1].basis:
                    for i in range(ambient.nvars):
                        exp = tuple(int(j == i) for j in range(ambient.nvars))
                        span.add(ambient.shift_vector(v, d - 1, exp))
            for v in pieces[d].basis:
                if span.add(v):
                    gens.append(ambient.from_vector(v, d))
        module = cls(G, gens, degree_bound, ambient)
        for d in range(degree_bound + 1):
            module._pieces[d] = pieces[d].copy()
        return module

    def with_bound(self, degree_bound: int) -> SectionModule:
        return SectionModule(self.graph, [g for _, g in self.generators], degree_bound, self.ambient)

    # degreewise data ----------------------------------------------------------
    def piece(self, d: int) -> EchelonSpace:
        """``M_d`` as a subspace of the ambient degree-``d`` coordinates."""
        if d < 0:
            return EchelonSpace(0)
        if d not in self._pieces:
            amb = self.ambient
            space = EchelonSpace(amb.dim(d))
            if d > 0:
                for v in self.piece(d - 1).basis:
                    for i in range(amb.nvars):
                        exp = tuple(int(j == i) for j in range(amb.nvars))
                        space.add(amb.shift_vector(v, d - 1, exp))
            for e, g in self.generators:
                if e == d:
                    space.add(amb.to_vector(g, d))
            self._pieces[d] = space
        return self._pieces[d]

    def hilbert(self, max_degree: int | None = None) -> list[int]:
        D = self.degree_bound if max_degree is None else max_degree
        return [self.piece(d).dim for d in range(D + 1)]

    def contains(self, element: Sequence[Polynomial]) -> bool:
        d = _element_degree(self.ambient, element)
        if d is None:
            return True
        return self.piece(d).contains(self.ambient.to_vector(element, d))

    def minimal_generators(self) -> list[tuple[int, Element]]:
        """Minimal homogeneous generators (graded Nakayama), canonical per degree."""
        if self._minimal is None:
            top = max([self.degree_bound] + [e for e, _ in self.generators])
            amb = self.ambient
            gens = []
            for d in range(top + 1):
                span = EchelonSpace(amb.dim(d))
                if d > 0:
                    for v in self.piece(d - 1).basis:
                        for i in range(amb.nvars):
                            exp = tuple(int(j == i) for j in range(amb.nvars))
                            span.add(amb.shift_vector(v, d - 1, exp))
                for v in self.piece(d).basis:
                    if span.add(v):
                        gens.append((d, amb.from_vector(v, d)))
            self._minimal = gens
        return list(self._minimal)

    def generator_degrees(self) -> list[int]:
        return [d for d, _ in self.minimal_generators()]

    def is_zero(self) -> bool:
        return not self.generators

    # generic structure ---------------------------------------------------------
    def _columns(self, vertices: Iterable[int] | None) -> list[list[Polynomial]]:
        blocks = range(len(self.ambient.blocks)) if vertices is None else [
            b for v in vertices for b in self.ambient.blocks_at(v)
        ]
        return [[g[b] for b in blocks] for _, g in self.generators]

    def _label_forms(self) -> list[LinearForm]:
        return [e.label for e in self.graph.edges]

    def generic_rank_at(self, vertices: Iterable[int] | None = None) -> int:
        return _generic_rank(self._columns(vertices), self._label_forms(), self.ambient.nvars)

    def total_rank(self) -> int:
        return self.generic_rank_at(None)

    # serialization ---------------------------------------------------------------
    def to_dict(self) -> dict:
        amb = self.ambient
        std = amb == Ambient.standard(len(self.graph), self.graph.nvars)
        gens = []
        for _, g in self.generators:
            if std:
                gens.append([str(p) for p in g])
            else:
                gens.append([[str(g[b]) for b in amb.blocks_at(v)] for v in range(len(self.graph))])
        out = {"graph": graph_to_dict(self.graph), "generators": gens, "degree_bound": self.degree_bound}
        if not std:
            out["stalk_shifts"] = [[amb.blocks[b][1] for b in amb.blocks_at(v)] for v in range(len(self.graph))]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> SectionModule:
        try:
            G = graph_from_dict(data["graph"])
            D = int(data.get("degree_bound", DEFAULT_DEGREE_BOUND))
            if "stalk_shifts" in data:
                shifts = data["stalk_shifts"]
                blocks = tuple((v, int(s)) for v in range(len(G)) for s in shifts[v])
                amb = Ambient(G.nvars, blocks)
                gens = []
                for g in data["generators"]:
                    gens.append(tuple(Polynomial.parse(t, amb.variables) for v in range(len(G)) for t in g[v]))
            else:
                amb = Ambient.standard(len(G), G.nvars)
                gens = [tuple(Polynomial.parse(t, amb.variables) for t in g) for g in data["generators"]]
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed section module JSON: {exc}") from exc
        return cls(G, gens, D, amb)

    @classmethod
    def from_json(cls, text: str) -> SectionModule:
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"SectionModule({len(self.generators)} generators on {len(self.graph)} vertices, D={self.degree_bound})"


# ---------------------------------------------------------------------------
# generic rank


def _random_point(rng: random.Random, nvars: int, bound: int, labels: Sequence[LinearForm]) -> list[int]:
    while True:
        pt = [rng.randint(-bound, bound) for _ in range(nvars)]
        if all(x != 0 for x in pt) and all(l.evaluate(pt) != 0 for l in labels):
            return pt


def _generic_rank(columns: Sequence[Sequence[Polynomial]], labels: Sequence[LinearForm], nvars: int) -> int:
    if not columns or not columns[0]:
        return 0
    rng = random.Random(_RNG_SEED)
    bound = 50
    for _ in range(6):
        ranks = {evaluation_rank(columns, _random_point(rng, nvars, bound, labels)) for _ in range(3)}
        if len(ranks) == 1:
            return ranks.pop()
        bound *= 10
    raise RuntimeError("generic rank evaluation did not stabilize")


def generic_rank(M: SectionModule, mu: int) -> int:
    """Rank of ``M`` at ``mu`` after inverting every edge label (rank over the fraction field)."""
    return M.generic_rank_at([mu])


# ---------------------------------------------------------------------------
# subquotients


def _project(M: SectionModule, vertices: Iterable[int], keep: Iterable[int] | None = None) -> SectionModule:
    """Image of the projection onto ``vertices``; ``keep`` optionally shrinks the ambient."""
    vs = set(vertices)
    amb = M.ambient
    blocks = range(len(amb.blocks))
    if keep is not None:
        keep = set(keep)
        blocks = [b for b in blocks if amb.blocks[b][0] in keep]
        amb = amb.restricted(keep)
    zero = Polynomial(amb.variables)
    gens = [tuple(g[b] if M.ambient.blocks[b][0] in vs else zero for b in blocks) for _, g in M.generators]
    return SectionModule(M.graph, gens, M.degree_bound, amb)


def _supported_on(M: SectionModule, vertices: Iterable[int]) -> SectionModule:
    """``M ∩ ⊕_{x in vertices} M_Q^x``: elements vanishing outside ``vertices``."""
    amb = M.ambient
    outside = [x for x in amb.vertices() if x not in set(vertices)]
    pieces = {}
    for d in range(M.degree_bound + 1):
        basis = M.piece(d).basis
        cols = amb.coordinate_mask(outside, d)
        rows = [[b[j] for b in basis] for j in cols]
        combos = nullspace(rows, len(basis)) if basis else []
        space = EchelonSpace(amb.dim(d))
        for c in combos:
            space.add([sum((ci * b[t] for ci, b in zip(c, basis) if ci), Fraction(0)) for t in range(amb.dim(d))])
        pieces[d] = space
    return SectionModule.from_pieces(M.graph, amb, pieces, M.degree_bound)


def restrict_closed(M: SectionModule, I: Iterable[int]) -> SectionModule:
    """``M_I = M ∩ ⊕_{mu in I} M_Q^mu`` for a closed subset ``I``."""
    I = frozenset(I)
    if not M.graph.is_closed(I):
        raise ValueError(f"{sorted(I)} is not closed")
    return _supported_on(M, I)


def quotient_open(M: SectionModule, J: Iterable[int]) -> SectionModule:
    """``M^J = M / M_I``, realized as the image of the projection onto the ``J``-components."""
    J = frozenset(J)
    if not M.graph.is_open(J):
        raise ValueError(f"{sorted(J)} is not open")
    return _project(M, J)


# ---------------------------------------------------------------------------
# freeness and flags


@dataclass(frozen=True)
class FreenessReport:
    free: bool
    generator_degrees: tuple[int, ...]
    hilbert: tuple[int, ...]
    free_hilbert: tuple[int, ...]
    certified_degree: int

    @property
    def syzygy_dims(self) -> tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.free_hilbert, self.hilbert))


def is_free(M: SectionModule) -> FreenessReport:
    """Minimal generators, then Hilbert function against the free module on them.

    The two Hilbert functions agree in degrees ``<= D`` exactly when the
    minimal generators have no syzygies there.
    """
    degs = tuple(M.generator_degrees())
    D = M.degree_bound
    n = M.ambient.nvars
    actual = tuple(M.hilbert(D))
    expected = tuple(sum(graded_dim(d - e, n) for e in degs) for d in range(D + 1))
    return FreenessReport(actual == expected, degs, actual, expected, D)


@dataclass(frozen=True)
class GradedModuleInfo:
    generator_degrees: tuple[int, ...]
    hilbert: tuple[int, ...]
    free: bool

    @property
    def rank(self) -> int:
        return len(self.generator_degrees) if self.free else -1


def describe(M: SectionModule) -> GradedModuleInfo:
    rep = is_free(M)
    return GradedModuleInfo(rep.generator_degrees, rep.hilbert, rep.free)


@dataclass(frozen=True)
class FlagReport:
    is_flag: bool
    multiplicities: dict
    verma_multiplicities: dict
    generator_degrees: dict
    non_free_opens: tuple
    certified_degree: int

    def to_dict(self) -> dict:
        return {
            "is_flag": self.is_flag,
            "multiplicities": {str(k): v for k, v in self.multiplicities.items()},
            "verma_multiplicities": {str(k): v for k, v in self.verma_multiplicities.items()},
            "generator_degrees": {str(k): list(v) for k, v in self.generator_degrees.items()},
            "non_free_opens": [sorted(J) for J in self.non_free_opens],
            "certified_degree": self.certified_degree,
        }


def verma_flag_report(M: SectionModule) -> FlagReport:
    """Check freeness of ``M^J`` for every open ``J`` and read off multiplicities.

    ``multiplicities`` are generic ranks; ``verma_multiplicities`` are the ranks
    of the subquotients ``M^{<=mu} / M^{<mu}``; ``generator_degrees`` are the
    degrees of the free subquotient at each vertex.
    """
    G = M.graph
    bad = tuple(J for J in G.open_sets() if not is_free(quotient_open(M, J)).free)
    mult = {mu: generic_rank(M, mu) for mu in range(len(G))}
    verma = {}
    degrees = {}
    for mu in range(len(G)):
        down = G.down_set(mu)
        top = quotient_open(M, down)
        below = quotient_open(M, down - {mu})
        verma[mu] = top.total_rank() - below.total_rank()
        degrees[mu] = tuple(_supported_on(top, [mu]).generator_degrees())
    return FlagReport(not bad, mult, verma, degrees, bad, M.degree_bound)


# ---------------------------------------------------------------------------
# stalks and edge modules


def stalk(M: SectionModule, chi: int) -> SectionModule:
    """``M^chi``: image of ``M`` in the ``chi`` component."""
    if not 0 <= chi < len(M.graph):
        raise ValueError(f"invalid vertex {chi}")
    return _project(M, [chi], keep=[chi])


@lru_cache(maxsize=256)
def _z_generators(G: MomentGraph, degree_bound: int) -> tuple[tuple[int, Element], ...]:
    """Minimal S-module generators of ``Z(G)`` in degrees ``<= degree_bound``."""
    return tuple(SectionModule.structure_module(G, degree_bound).minimal_generators())


def _edge_endpoints(G: MomentGraph, E) -> Edge:
    if isinstance(E, Edge):
        return E
    e = G.edge_between(*E)
    if e is None:
        raise ValueError(f"no edge between {E}")
    return e


def edge_module(M: SectionModule, E) -> SectionModule:
    """``M^E``: the ``Z(E)``-submodule of ``M^chi ⊕ M^chi'`` generated by ``M^{chi,chi'}``."""
    from .structure import edge_graph

    e = _edge_endpoints(M.graph, E)
    pair = _project(M, [e.u, e.v], keep=[e.u, e.v])
    amb = pair.ambient
    D = M.degree_bound
    zgens = _z_generators(edge_graph(e.label), D)
    pieces = {}
    for d in range(D + 1):
        space = EchelonSpace(amb.dim(d))
        for a, z in zgens:
            if a > d:
                continue
            factors = {e.u: z[0], e.v: z[1]}
            for v in pair.piece(d - a).basis:
                space.add(amb.multiply_vector(v, d - a, factors, a))
        pieces[d] = space
    return SectionModule.from_pieces(M.graph, amb, pieces, D)


def edge_intersection(M: SectionModule, E, chi: int) -> SectionModule:
    """``(M^E)_chi = M^E ∩ M^chi``: elements of ``M^E`` vanishing at the other endpoint."""
    e = _edge_endpoints(M.graph, E)
    if chi not in (e.u, e.v):
        raise ValueError("vertex is not an endpoint of the edge")
    return _supported_on(edge_module(M, e), [chi])


def _times_label(M: SectionModule, label: LinearForm) -> dict[int, EchelonSpace]:
    amb = M.ambient
    ell = label.to_polynomial(amb.variables)
    factors = {v: ell for v in amb.vertices()}
    out = {}
    for d in range(M.degree_bound + 1):
        space = EchelonSpace(amb.dim(d))
        for v in M.piece(d - 1).basis if d > 0 else []:
            space.add(amb.multiply_vector(v, d - 1, factors, 1))
        out[d] = space
    return out


@dataclass(frozen=True)
class ProjectivityReport:
    passed: bool
    stalk_free: dict
    edge_condition: dict
    z_stable: bool
    certified_degree: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "stalk_free": {str(k): v for k, v in self.stalk_free.items()},
            "edge_condition": {f"{u}-{v}": ok for (u, v), ok in self.edge_condition.items()},
            "z_stable": self.z_stable,
            "certified_degree": self.certified_degree,
        }


def is_z_stable(M: SectionModule) -> bool:
    """Whether the span is closed under the structure algebra (checked on generators, degrees <= D)."""
    D = M.degree_bound
    amb = M.ambient
    gens = [(e, amb.to_vector(g, e)) for e, g in M.minimal_generators()]
    for a, z in _z_generators(M.graph, D):
        factors = dict(enumerate(z))
        for e, g in gens:
            if a + e > D:
                continue
            if not M.piece(a + e).contains(amb.multiply_vector(g, e, factors, a)):
                return False
    return True


def check_projective(M: SectionModule) -> ProjectivityReport:
    """The two local criteria for projectivity in the Verma-flag category.

    (1) every stalk ``M^chi`` is free; (2) for every edge ``chi < chi'`` with
    label ``l``, ``(M^E)_chi = l * M^chi``.  Both are compared degreewise up
    to ``D``.  ``z_stable`` records that ``M`` is a module over ``Z`` at all.
    """
    G = M.graph
    violation = gkm_check(G)
    if violation is not None:
        raise ValueError(f"graph is not GKM at vertex {violation.vertex}")
    D = M.degree_bound
    stalk_free = {chi: is_free(stalk(M, chi)).free for chi in range(len(G))}
    edge_ok = {}
    for e in G.edges:
        lower = e.u
        left = edge_intersection(M, e, lower)
        right = _times_label(_project(M, [lower], keep=[e.u, e.v]), e.label)
        edge_ok[(e.u, e.v)] = all(left.piece(d) == right[d] for d in range(D + 1))
    zs = is_z_stable(M)
    passed = all(stalk_free.values()) and all(edge_ok.values()) and zs
    return ProjectivityReport(passed, stalk_free, edge_ok, zs, D)


# ---------------------------------------------------------------------------
# maps and exactness


class ModuleMap:
    """Block-diagonal map between section modules on the same graph.

    ``entries[(t, s)]`` is the polynomial sending ambient block ``s`` of the
    source into block ``t`` of the target; both blocks must sit at the same
    vertex.  The map raises degrees by ``degree``.
    """

    def __init__(self, source: SectionModule, target: SectionModule, entries: dict, degree: int = 0):
        if source.graph != target.graph:
            raise ValueError("source and target live on different graphs")
        self.source = source
        self.target = target
        self.degree = degree
        sa, ta = source.ambient, target.ambient
        self.entries = {}
        for (t, s), p in entries.items():
            if ta.blocks[t][0] != sa.blocks[s][0]:
                raise ValueError("map entries must preserve vertices")
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(ta.variables, p)
            want = degree + sa.blocks[s][1] - ta.blocks[t][1]
            if not p.is_zero() and not p.is_homogeneous(want):
                raise ValueError(f"entry {(t, s)} must be homogeneous of degree {want}")
            if not p.is_zero():
                self.entries[(t, s)] = p

    @classmethod
    def zero(cls, source: SectionModule, target: SectionModule) -> ModuleMap:
        return cls(source, target, {})

    @classmethod
    def identity(cls, M: SectionModule) -> ModuleMap:
        return cls(M, M, {(b, b): Polynomial.constant(M.ambient.variables, 1) for b in range(len(M.ambient.blocks))})

    def apply(self, element: Sequence[Polynomial]) -> Element:
        ta = self.target.ambient
        out = [Polynomial(ta.variables) for _ in ta.blocks]
        for (t, s), p in self.entries.items():
            out[t] = out[t] + p * element[s]
        return tuple(out)

    def apply_vector(self, vec: Sequence, d: int) -> list[Fraction]:
        elt = self.apply(self.source.ambient.from_vector(vec, d))
        return self.target.ambient.to_vector(elt, d + self.degree)

    def lands_in_target(self) -> bool:
        return all(self.target.contains(self.apply(g)) for _, g in self.source.generators)


def _image(f: ModuleMap, space: EchelonSpace, d: int) -> EchelonSpace:
    out = EchelonSpace(f.target.ambient.dim(d + f.degree))
    for v in space.basis:
        out.add(f.apply_vector(v, d))
    return out


def is_exact(M1: SectionModule, M2: SectionModule, M3: SectionModule, f: ModuleMap, g: ModuleMap) -> bool:
    """``0 -> M1 -> M2 -> M3 -> 0`` is exact after truncation to every open ``J``, degrees ``<= D``."""
    return not exactness_failures(M1, M2, M3, f, g)


def exactness_failures(M1, M2, M3, f: ModuleMap, g: ModuleMap) -> list[tuple]:
    if f.source is not M1 or f.target is not M2 or g.source is not M2 or g.target is not M3:
        raise ValueError("maps are not composable with the given modules")
    if not (f.lands_in_target() and g.lands_in_target()):
        return [("map", "image not contained in target")]
    G = M2.graph
    D = M2.degree_bound
    failures = []
    for J in G.open_sets():
        A, B, C = (quotient_open(M, J) for M in (M1, M2, M3))
        fJ = ModuleMap(A, B, f.entries, f.degree)
        gJ = ModuleMap(B, C, g.entries, g.degree)
        for d in range(D + 1):
            a_deg = d - f.degree
            Ad = A.piece(a_deg) if a_deg >= 0 else EchelonSpace(A.ambient.dim(0))
            Bd = B.piece(d)
            im_f = _image(fJ, Ad, a_deg) if a_deg >= 0 else EchelonSpace(B.ambient.dim(d))
            im_g = _image(gJ, Bd, d)
            Cd = C.piece(d + g.degree)
            if im_f.dim != Ad.dim:
                failures.append((tuple(sorted(J)), d, "not injective"))
            elif im_g != Cd:
                failures.append((tuple(sorted(J)), d, "not surjective"))
            elif any(any(x for x in gJ.apply_vector(v, d)) for v in im_f.basis):
                failures.append((tuple(sorted(J)), d, "composition nonzero"))
            elif im_f.dim != Bd.dim - im_g.dim:
                failures.append((tuple(sorted(J)), d, "not exact in the middle"))
    return failures
