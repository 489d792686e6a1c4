"""Coordinates on graded free modules ``⊕ S(-shift)`` indexed by moment-graph vertices.

An :class:`Ambient` is a list of blocks ``(vertex, shift)``; an element of
degree ``d`` has one polynomial of degree ``d - shift`` per block.  Vectors are
concatenations of the blocks' monomial coefficient vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exactpoly import Polynomial, _monomial_index, _monomials, default_variables, graded_dim

Element = tuple[Polynomial, ...]


@dataclass(frozen=True)
class Ambient:
    nvars: int
    blocks: tuple[tuple[int, int], ...]

    @classmethod
    def standard(cls, nvertices: int, nvars: int) -> Ambient:
        return cls(nvars, tuple((v, 0) for v in range(nvertices)))

    @property
    def variables(self) -> tuple[str, ...]:
        return default_variables(self.nvars)

    def blocks_at(self, vertex: int) -> list[int]:
        return [b for b, (v, _) in enumerate(self.blocks) if v == vertex]

    def rank_at(self, vertex: int) -> int:
        return len(self.blocks_at(vertex))

    def vertices(self) -> list[int]:
        return sorted({v for v, _ in self.blocks})

    @lru_cache(maxsize=None)
    def offsets(self, d: int) -> tuple[tuple[int, int], ...]:
        out = []
        pos = 0
        for _, s in self.blocks:
            size = graded_dim(d - s, self.nvars)
            out.append((pos, size))
            pos += size
        return tuple(out)

    def dim(self, d: int) -> int:
        offs = self.offsets(d)
        return offs[-1][0] + offs[-1][1] if offs else 0

    def zero(self) -> Element:
        return tuple(Polynomial(self.variables) for _ in self.blocks)

    def to_vector(self, element: Sequence[Polynomial], d: int) -> list[Fraction]:
        if len(element) != len(self.blocks):
            raise ValueError("element does not match the ambient blocks")
        vec: list[Fraction] = []
        for p, (_, s) in zip(element, self.blocks):
            if d - s < 0:
                if not p.is_zero():
                    raise ValueError("nonzero component below its block shift")
                continue
            vec.extend(p.to_vector(d - s))
        return vec

    def from_vector(self, vec: Sequence, d: int) -> Element:
        out = []
        for (pos, size), (_, s) in zip(self.offsets(d), self.blocks):
            if size == 0:
                out.append(Polynomial(self.variables))
            else:
                out.append(Polynomial.from_vector(self.variables, d - s, vec[pos : pos + size]))
        return tuple(out)

    def coordinate_mask(self, vertices: Iterable[int], d: int) -> list[int]:
        """Coordinate indices (degree ``d``) belonging to blocks at the given vertices."""
        vs = set(vertices)
        idx = []
        for (pos, size), (v, _) in zip(self.offsets(d), self.blocks):
            if v in vs:
                idx.extend(range(pos, pos + size))
        return idx

    def project(self, vec: Sequence, vertices: Iterable[int], d: int) -> list[Fraction]:
        """Zero out every coordinate outside the given vertices."""
        keep = set(self.coordinate_mask(vertices, d))
        return [x if i in keep else Fraction(0) for i, x in enumerate(vec)]

    def shift_vector(self, vec: Sequence, d: int, exp: tuple[int, ...]) -> list[Fraction]:
        """Multiply a degree-``d`` vector by the monomial ``x^exp``."""
        k = sum(exp)
        out = [Fraction(0)] * self.dim(d + k)
        for (pos, size), (pos2, _), (_, s) in zip(self.offsets(d), self.offsets(d + k), self.blocks):
            if size == 0:
                continue
            src = _monomials(d - s, self.nvars)
            dst = _monomial_index(d + k - s, self.nvars)
            for t, e in enumerate(src):
                c = vec[pos + t]
                if c:
                    out[pos2 + dst[tuple(a + b for a, b in zip(e, exp))]] = c
        return out

    def multiply_vector(self, vec: Sequence, d: int, factors: dict[int, Polynomial], k: int) -> list:
        """Vector form of :meth:`scale_by`; every factor is homogeneous of degree ``k``."""
        out = [0] * self.dim(d + k)
        for (pos, size), (pos2, _), (v, s) in zip(self.offsets(d), self.offsets(d + k), self.blocks):
            f = factors.get(v)
            if size == 0 or f is None or f.is_zero():
                continue
            src = _monomials(d - s, self.nvars)
            dst = _monomial_index(d + k - s, self.nvars)
            terms = list(f.terms.items())
            for t, e in enumerate(src):
                c = vec[pos + t]
                if c:
                    for fe, fc in terms:
                        j = pos2 + dst[tuple(a + b for a, b in zip(e, fe))]
                        out[j] += c * fc
        return out

    def scale_by(self, element: Sequence[Polynomial], factors: dict[int, Polynomial]) -> Element:
        """Multiply each block by the polynomial attached to its vertex (0 if absent)."""
        zero = Polynomial(self.variables)
        return tuple(p * factors[v] if v in factors else zero for p, (v, _) in zip(element, self.blocks))

    def restricted(self, vertices: Iterable[int]) -> Ambient:
        vs = set(vertices)
        return Ambient(self.nvars, tuple(b for b in self.blocks if b[0] in vs))
