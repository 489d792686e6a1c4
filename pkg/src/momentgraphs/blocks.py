"""Integral roots, finite windows into critical-level blocks, and the order topology.

A block is infinite, so every topological predicate here is computed inside a
finite :class:`BlockWindow`.  Within a finite poset "locally bounded" is
automatic; the predicate is kept so callers can ask the same questions they
would ask of the infinite block.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .roots import Root, RootSystem, Weight, dot_reflect, leq, rho_pairing

SubsetFlags = frozenset  # a set of indices into a BlockWindow


def integral_finite_roots(rs: RootSystem, lam: Weight) -> list[Root]:
    """Finite roots ``alpha`` with ``<lambda_bar + rho_bar, alpha^vee>`` integral.

    At the critical level ``alpha + n delta`` is integral for every ``n`` as
    soon as ``alpha`` is.
    """
    return [a for a in rs.roots if rho_pairing(rs, lam, a).denominator == 1]


def _positive(roots: Iterable[Root]) -> list[Root]:
    return [a for a in roots if sum(a) > 0]


@dataclass(frozen=True)
class BlockWindow:
    root_system: RootSystem
    base: Weight
    weights: tuple[Weight, ...]
    delta_bound: int
    height_bound: int
    _leq: tuple[tuple[bool, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if not self._leq:
            n = len(self.weights)
            table = tuple(tuple(leq(self.root_system, self.weights[i], self.weights[j]) for j in range(n)) for i in range(n))
            object.__setattr__(self, "_leq", table)

    def __len__(self) -> int:
        return len(self.weights)

    def index(self, w: Weight) -> int:
        return self.weights.index(w)

    def le(self, i: int, j: int) -> bool:
        return self._leq[i][j]

    def lt(self, i: int, j: int) -> bool:
        return i != j and self._leq[i][j]

    def down_set(self, i: int) -> frozenset:
        return frozenset(j for j in range(len(self)) if self._leq[j][i])

    def up_set(self, i: int) -> frozenset:
        return frozenset(j for j in range(len(self)) if self._leq[i][j])

    def hasse_edges(self) -> list[tuple[int, int]]:
        n = len(self)
        out = []
        for i in range(n):
            for j in range(n):
                if self.lt(i, j) and not any(self.lt(i, k) and self.lt(k, j) for k in range(n)):
                    out.append((i, j))
        return out

    def to_json(self) -> dict:
        return {
            "type": self.root_system.name,
            "base": self.base.to_json(),
            "delta_bound": self.delta_bound,
            "height_bound": self.height_bound,
            "weights": [w.to_json() for w in self.weights],
        }

    @classmethod
    def from_json(cls, data) -> BlockWindow:
        from .roots import build_root_system

        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            build_root_system(data["type"]),
            Weight.from_json(data["base"]),
            tuple(Weight.from_json(w) for w in data["weights"]),
            int(data["delta_bound"]),
            int(data["height_bound"]),
        )

    def to_dot(self) -> str:
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for i, w in enumerate(self.weights):
            lines.append(f'  n{i} [label="{w}"];')
        for i, j in self.hasse_edges():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _finite_height(rs: RootSystem, w: Weight, base: Weight) -> Fraction:
    return sum(rs.weight_to_root_coords((w - base).finite), Fraction(0))


def block_window(rs: RootSystem, lam0: Weight, delta_bound: int, height_bound: int) -> BlockWindow:
    """Finite slice of the block of ``lam0``.

    The box is ``0 <= delta(w) - delta(lam0) <= delta_bound`` and
    ``|ht(w_bar - lam0_bar)| <= height_bound``.  Exploration runs a BFS over
    integral reflections ``s_{alpha + n delta}`` with ``|n| <= delta_bound``,
    keeping every weight inside the delta range (finite parts always stay in a
    finite Weyl orbit), and the height clip is applied to the fixed point.
    """
    if delta_bound < 0 or height_bound < 0:
        raise ValueError("bounds must be nonnegative")
    if len(lam0.finite) != rs.rank:
        raise ValueError("base weight does not match the root system")
    alphas = _positive(integral_finite_roots(rs, lam0))
    lo, hi = lam0.delta, lam0.delta + delta_bound
    seen = {lam0}
    queue = deque([lam0])
    while queue:
        lam = queue.popleft()
        for a in alphas:
            for n in range(-delta_bound, delta_bound + 1):
                mu = dot_reflect(rs, lam, a, n)
                if lo <= mu.delta <= hi and mu not in seen:
                    seen.add(mu)
                    queue.append(mu)
    kept = [w for w in seen if abs(_finite_height(rs, w, lam0)) <= height_bound]
    kept.sort(key=Weight.sort_key)
    return BlockWindow(rs, lam0, tuple(kept), delta_bound, height_bound)


def alpha_up(rs: RootSystem, alpha: Root, lam: Weight) -> Weight:
    """``alpha ↑ lambda``: the least ``s_{alpha + n delta} . lambda`` lying above ``lambda``.

    Closed form: with ``p = <lambda_bar + rho_bar, alpha^vee>`` the candidates
    above ``lambda`` are ``lambda - p (alpha + n delta)`` with
    ``-p (alpha + n delta)`` a nonnegative multiple of a positive root; the
    smallest is the one with the smallest delta-shift.
    """
    alpha = tuple(alpha)
    p = rho_pairing(rs, lam, alpha)
    if p.denominator != 1:
        raise ValueError(f"{alpha} is not integral for {lam}")
    if p == 0:
        return lam
    positive = sum(alpha) > 0
    if p > 0:
        n = -1 if positive else 0
    else:
        n = 0 if positive else 1
    return dot_reflect(rs, lam, alpha, n)


def alpha_up_scan(rs: RootSystem, alpha: Root, lam: Weight, bound: int = 10) -> Weight:
    """Brute-force ``alpha ↑ lambda`` over ``n in [-bound, bound]``."""
    cands = {dot_reflect(rs, lam, alpha, n) for n in range(-bound, bound + 1)}
    cands = [c for c in cands if leq(rs, lam, c)]
    if not cands:
        raise RuntimeError("no candidate above lambda within the scan bound")
    minimal = [c for c in cands if not any(d != c and leq(rs, d, c) for d in cands)]
    if len(minimal) != 1:
        raise RuntimeError(f"no unique minimum among {minimal}")
    return minimal[0]


# ---------------------------------------------------------------------------
# topology (window-relative)


def _check_subset(S: Iterable[int], W: BlockWindow) -> frozenset:
    S = frozenset(S)
    if any(not (0 <= i < len(W)) for i in S):
        raise ValueError("subset index out of range")
    return S


def is_open(S: Iterable[int], W: BlockWindow) -> bool:
    S = _check_subset(S, W)
    return all(W.down_set(i) <= S for i in S)


def is_closed(S: Iterable[int], W: BlockWindow) -> bool:
    S = _check_subset(S, W)
    return is_open(frozenset(range(len(W))) - S, W)


def is_locally_closed(S: Iterable[int], W: BlockWindow) -> bool:
    """Convexity: ``a <= c <= b`` with ``a, b`` in ``S`` forces ``c`` in ``S``."""
    S = _check_subset(S, W)
    n = len(W)
    return all(c in S for a in S for b in S for c in range(n) if W.le(a, c) and W.le(c, b))


def is_locally_bounded(S: Iterable[int], W: BlockWindow) -> bool:
    # every up-set in a finite window is finite
    _check_subset(S, W)
    return True


def k_plus(K: Iterable[int], W: BlockWindow) -> frozenset:
    K = _check_subset(K, W)
    if not is_locally_closed(K, W):
        raise ValueError("K is not locally closed")
    out = set()
    for i in K:
        out |= W.down_set(i)
    return frozenset(out)


def k_minus(K: Iterable[int], W: BlockWindow) -> frozenset:
    K = _check_subset(K, W)
    plus = k_plus(K, W)
    out = set()
    for i in plus - K:
        out |= W.down_set(i)
    return frozenset(out)
