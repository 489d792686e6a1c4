"""The structure algebra of a moment graph, computed one degree at a time.

``Z(K)`` consists of tuples ``(z_x)`` of polynomials, one per vertex, with
``z_u ≡ z_v`` modulo the label of every edge ``u --- v``.  It is only ever
materialized degreewise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .ambient import Ambient
from .exactpoly import LinearForm, Polynomial, graded_dim, reduce_mod_linear, reduction_matrix, solve_graded
from .moment_graph import Edge, MomentGraph


@dataclass(frozen=True)
class SectionTuple:
    components: tuple[Polynomial, ...]

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __mul__(self, other: SectionTuple) -> SectionTuple:
        return SectionTuple(tuple(a * b for a, b in zip(self.components, other.components)))

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.components) + ")"


@dataclass(frozen=True)
class StructureBasis:
    degree: int
    basis: tuple[SectionTuple, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def is_section(G: MomentGraph, t: SectionTuple | Sequence[Polynomial]) -> bool:
    comps = t.components if isinstance(t, SectionTuple) else tuple(t)
    if len(comps) != len(G):
        raise ValueError(f"tuple has {len(comps)} components, graph has {len(G)} vertices")
    return all(reduce_mod_linear(comps[e.u] - comps[e.v], e.label).is_zero() for e in G.edges)


def congruence_rows(G: MomentGraph, d: int) -> list[list[Fraction]]:
    """Linear constraints on ``⊕_x S_d`` expressing the edge congruences."""
    n = G.nvars
    m = graded_dim(d, n)
    total = m * len(G)
    rows = []
    for e in G.edges:
        red = reduction_matrix(e.label.coefficients, d)
        for r in red:
            row = [Fraction(0)] * total
            row[e.u * m : (e.u + 1) * m] = r
            row[e.v * m : (e.v + 1) * m] = [-x for x in r]
            rows.append(row)
    return rows


def structure_basis(G: MomentGraph, d: int) -> StructureBasis:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return _structure_basis_cached(G, d)


@lru_cache(maxsize=512)
def _structure_basis_cached(G: MomentGraph, d: int) -> StructureBasis:
    amb = Ambient.standard(len(G), G.nvars)
    sol = solve_graded(congruence_rows(G, d), amb.dim(d), degree=d)
    return StructureBasis(d, tuple(SectionTuple(amb.from_vector(v, d)) for v in sol.basis))


def structure_dims(G: MomentGraph, max_degree: int) -> list[int]:
    return [structure_basis(G, d).dim for d in range(max_degree + 1)]


def edge_graph(label: LinearForm) -> MomentGraph:
    return MomentGraph(("chi", "chi'"), frozenset({(0, 1)}), (Edge(0, 1, label.normalized()),), label.nvars)


def edge_structure_basis(label: LinearForm | Edge, d: int) -> StructureBasis:
    """Basis of the local structure algebra ``Z(E)`` in degree ``d``."""
    if isinstance(label, Edge):
        label = label.label
    return structure_basis(edge_graph(label), d)


def standard_module_V(G: MomentGraph, mu: int):
    """The rank-one module supported at ``mu``; ``(z_x)`` acts through ``z_mu``."""
    from .sections import SectionModule

    return SectionModule.standard(G, mu)
