"""Finite and affine root data, critical-level weights and the dot-action.

Weights are stored in the fundamental-weight basis together with their
delta-coefficient; the level is always the critical one and never stored.
Finite roots are integer tuples in the simple-root basis.

At the critical level ``<lambda + rho, K> = 0``, so the affine dot-reflection
collapses to ::

    s_{alpha + n delta} . lambda = lambda - <lambda_bar + rho_bar, alpha^vee> (alpha + n delta)

and neither ``rho`` nor ``K`` has to be materialized.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactpoly import LinearForm, as_fraction, format_fraction

Root = tuple[int, ...]

# Bourbaki numbering; entry [i][j] = <alpha_i, alpha_j^vee>
_CARTAN = {
    "A": lambda r: [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)],
}

_POSITIVE_ROOT_COUNT = {
    "A": lambda r: r * (r + 1) // 2,
    "B": lambda r: r * r,
    "C": lambda r: r * r,
    "D": lambda r: r * (r - 1),
    "E": lambda r: {6: 36, 7: 63, 8: 120}[r],
    "F": lambda r: 24,
    "G": lambda r: 6,
}


def cartan_matrix(cartan_type: str, rank: int) -> list[list[int]]:
    t = cartan_type.upper()
    if t == "A" and rank >= 1:
        return _CARTAN["A"](rank)
    if t in "BC" and rank >= 2:
        m = _CARTAN["A"](rank)
        # B: alpha_r short; C: alpha_r long
        if t == "B":
            m[rank - 2][rank - 1] = -2
        else:
            m[rank - 1][rank - 2] = -2
        return m
    if t == "D" and rank >= 4:
        m = _CARTAN["A"](rank)
        m[rank - 2][rank - 1] = m[rank - 1][rank - 2] = 0
        m[rank - 3][rank - 1] = m[rank - 1][rank - 3] = -1
        return m
    if t == "E" and rank in (6, 7, 8):
        m = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, rank - 1)]
        for i, j in edges:
            m[i][j] = m[j][i] = -1
        return m
    if t == "F" and rank == 4:
        m = _CARTAN["A"](4)
        m[1][2] = -2
        return m
    if t == "G" and rank == 2:
        return [[2, -1], [-3, 2]]
    raise ValueError(f"unsupported Cartan type {cartan_type}{rank}")


def parse_type(name: str) -> tuple[str, int]:
    name = name.strip()
    if len(name) < 2 or not name[0].isalpha() or not name[1:].isdigit():
        raise ValueError(f"bad root system name {name!r}; expected e.g. 'A2'")
    return name[0].upper(), int(name[1:])


def _invert(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


class RootSystem:
    """Root datum of a finite simple Lie algebra, invariant form with ``(gamma, gamma) = 2``."""

    def __init__(self, cartan_type: str, rank: int):
        self.cartan_type = cartan_type.upper()
        self.rank = rank
        self.cartan = cartan_matrix(cartan_type, rank)
        self.name = f"{self.cartan_type}{rank}"
        n = rank
        # squared lengths up to a global scale: A[i][j] |a_j|^2 = A[j][i] |a_i|^2
        lengths: list[Fraction | None] = [None] * n
        lengths[0] = Fraction(1)
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and self.cartan[i][j] and lengths[j] is None:
                    lengths[j] = lengths[i] * self.cartan[j][i] / self.cartan[i][j]
                    stack.append(j)
        self._lengths_unnormalized = lengths
        self.positive_roots: list[Root] = self._close_positive_roots()
        self.highest_root: Root = max(self.positive_roots, key=sum)
        scale = Fraction(2) / self._norm_unscaled(self.highest_root)
        self.simple_lengths = tuple(l * scale for l in lengths)
        self.roots: list[Root] = self.positive_roots + [tuple(-a for a in r) for r in self.positive_roots]
        self._cartan_inv = _invert(self.cartan)
        self._coroots: dict[Root, LinearForm] = {}

    # construction -----------------------------------------------------------
    def _norm_unscaled(self, root: Root) -> Fraction:
        n = self.rank
        total = Fraction(0)
        for i in range(n):
            for j in range(n):
                # (a_i, a_j) = A[i][j] |a_j|^2 / 2
                total += root[i] * root[j] * self.cartan[i][j] * self._lengths_unnormalized[j] / 2
        return total

    def _close_positive_roots(self) -> list[Root]:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = set(simple)
        layer = list(simple)
        while layer:
            nxt = []
            for beta in layer:
                for i in range(n):
                    # alpha_i string through beta: p - q = <beta, alpha_i^vee>
                    p = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        if tuple(down) in found:
                            p += 1
                        else:
                            break
                    q = p - sum(beta[j] * self.cartan[j][i] for j in range(n))
                    if q > 0:
                        up = list(beta)
                        up[i] += 1
                        t = tuple(up)
                        if t not in found:
                            found.add(t)
                            nxt.append(t)
            layer = nxt
        return sorted(found, key=lambda r: (sum(r), tuple(-x for x in r)))

    # queries ------------------------------------------------------------------
    @property
    def simple_roots(self) -> list[Root]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    @property
    def simple_coroots(self) -> list[LinearForm]:
        return [self.coroot(r) for r in self.simple_roots]

    @property
    def rho_finite(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(1) for _ in range(self.rank))

    def norm(self, root: Root) -> Fraction:
        n = self.rank
        return sum(
            (root[i] * root[j] * self.cartan[i][j] * self.simple_lengths[j] / 2 for i in range(n) for j in range(n)),
            Fraction(0),
        )

    def form(self, a: Root, b: Root) -> Fraction:
        n = self.rank
        return sum(
            (a[i] * b[j] * self.cartan[i][j] * self.simple_lengths[j] / 2 for i in range(n) for j in range(n)),
            Fraction(0),
        )

    def coroot(self, root: Root) -> LinearForm:
        """``alpha^vee`` in simple-coroot coordinates."""
        root = tuple(root)
        if root not in self._coroots:
            nr = self.norm(root)
            self._coroots[root] = LinearForm(root[i] * self.simple_lengths[i] / nr for i in range(self.rank))
        return self._coroots[root]

    def root_in_weight_basis(self, root: Root) -> tuple[Fraction, ...]:
        n = self.rank
        return tuple(Fraction(sum(root[i] * self.cartan[i][j] for i in range(n))) for j in range(n))

    def weight_to_root_coords(self, finite: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Express a finite weight in the simple-root basis (rational in general)."""
        n = self.rank
        return tuple(sum((finite[i] * self._cartan_inv[i][j] for i in range(n)), Fraction(0)) for j in range(n))

    def is_root(self, root: Sequence[int]) -> bool:
        return tuple(root) in self._root_set

    @cached_property
    def _root_set(self) -> frozenset:
        return frozenset(self.roots)

    def is_positive(self, root: Root) -> bool:
        return sum(root) > 0

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)


_SYSTEMS: dict[str, RootSystem] = {}


def build_root_system(cartan_type: str, rank: int | None = None) -> RootSystem:
    """Root system by type and rank, or by a name such as ``"A2"``."""
    if rank is None:
        cartan_type, rank = parse_type(cartan_type)
    key = f"{cartan_type.upper()}{rank}"
    if key not in _SYSTEMS:
        rs = RootSystem(cartan_type, rank)
        expected = _POSITIVE_ROOT_COUNT[rs.cartan_type](rank)
        if len(rs.positive_roots) != expected:
            raise RuntimeError(f"{key}: found {len(rs.positive_roots)} positive roots, expected {expected}")
        _SYSTEMS[key] = rs
    return _SYSTEMS[key]


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True, order=False)
class Weight:
    """Critical-level affine weight: finite part (fundamental-weight basis) plus delta-coefficient."""

    finite: tuple[Fraction, ...]
    delta: Fraction = Fraction(0)

    def __init__(self, finite: Sequence, delta=0):
        object.__setattr__(self, "finite", tuple(as_fraction(x) for x in finite))
        object.__setattr__(self, "delta", as_fraction(delta))

    def __add__(self, other: Weight) -> Weight:
        return Weight([a + b for a, b in zip(self.finite, other.finite)], self.delta + other.delta)

    def __sub__(self, other: Weight) -> Weight:
        return Weight([a - b for a, b in zip(self.finite, other.finite)], self.delta - other.delta)

    def shift(self, k) -> Weight:
        return Weight(self.finite, self.delta + as_fraction(k))

    def sort_key(self):
        return (self.delta, self.finite)

    def to_json(self) -> dict:
        return {"finite": [format_fraction(x) for x in self.finite], "delta": format_fraction(self.delta)}

    @classmethod
    def from_json(cls, data) -> Weight:
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "finite" not in data:
            raise ValueError(f"not a weight: {data!r}")
        return cls(data["finite"], data.get("delta", "0"))

    def __str__(self) -> str:
        fin = ",".join(format_fraction(x) for x in self.finite)
        return f"({fin}|{format_fraction(self.delta)})"


@dataclass(frozen=True)
class AffineRealRoot:
    finite_root: Root
    n: int

    def is_positive(self) -> bool:
        return self.n > 0 or (self.n == 0 and sum(self.finite_root) > 0)


def pairing(rs: RootSystem, finite_weight: Sequence, coroot: LinearForm | Root) -> Fraction:
    """``<lambda_bar, beta^vee>``; ``coroot`` may be given as the root itself."""
    if not isinstance(coroot, LinearForm):
        coroot = rs.coroot(tuple(coroot))
    if len(finite_weight) != rs.rank or coroot.nvars != rs.rank:
        raise ValueError("weight/coroot do not match the root system")
    return sum((as_fraction(w) * c for w, c in zip(finite_weight, coroot.coefficients)), Fraction(0))


def rho_pairing(rs: RootSystem, lam: Weight, alpha: Root) -> Fraction:
    """``<lambda_bar + rho_bar, alpha^vee>``."""
    coroot = rs.coroot(tuple(alpha))
    return sum(((x + 1) * c for x, c in zip(lam.finite, coroot.coefficients) if c), Fraction(0))


def dot_reflect(rs: RootSystem, lam: Weight, alpha: Root, n: int) -> Weight:
    """``s_{alpha + n delta} . lambda`` at the critical level."""
    alpha = tuple(alpha)
    if not rs.is_root(alpha):
        raise ValueError(f"{alpha} is not a root of {rs.name}")
    p = rho_pairing(rs, lam, alpha)
    a = rs.root_in_weight_basis(alpha)
    return Weight([x - p * y for x, y in zip(lam.finite, a)], lam.delta - p * n)


def simple_affine_coefficients(rs: RootSystem, lam: Weight, mu: Weight) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Coefficients of ``mu - lambda`` on ``-gamma + delta`` and on the finite simple roots."""
    diff = mu - lam
    c0 = diff.delta
    fin = rs.weight_to_root_coords(diff.finite)
    gamma = rs.highest_root
    return c0, tuple(f + c0 * g for f, g in zip(fin, gamma))


def leq(rs: RootSystem, lam: Weight, mu: Weight) -> bool:
    """``lambda <= mu``: ``mu - lambda`` is a nonnegative integer combination of the simple affine roots."""
    c0, cs = simple_affine_coefficients(rs, lam, mu)
    if c0.denominator != 1 or c0 < 0:
        return False
    return all(c.denominator == 1 and c >= 0 for c in cs)


def positive_affine_window(rs: RootSystem, bound_n: int) -> list[AffineRealRoot]:
    """Positive real affine roots ``alpha + n delta`` with ``n <= bound_n``."""
    if bound_n < 0:
        raise ValueError("bound_n must be >= 0")
    out = [AffineRealRoot(a, 0) for a in rs.positive_roots]
    for n in range(1, bound_n + 1):
        out.extend(AffineRealRoot(a, n) for a in rs.roots)
    return out
