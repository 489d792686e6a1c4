import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import A1, A2, a1_window, a2_window
from momentgraphs.blocks import (
    BlockWindow,
    alpha_up,
    alpha_up_scan,
    block_window,
    integral_finite_roots,
    is_closed,
    is_locally_bounded,
    is_locally_closed,
    is_open,
    k_minus,
    k_plus,
)
from momentgraphs.roots import Weight, dot_reflect, leq

LAM0 = Weight([0], 0)


def small_window():
    """The A1 window ``{lam0 - alpha, lam0, lam0 - alpha + delta}``."""
    ws = (Weight([-2], 0), Weight([0], 0), Weight([-2], 1))
    return BlockWindow(A1, LAM0, ws, 1, 4)


def test_integral_roots():
    assert sorted(integral_finite_roots(A1, LAM0)) == [(-1,), (1,)]
    assert integral_finite_roots(A1, Weight([Fraction(1, 2)], 0)) == []
    assert len(integral_finite_roots(A2, Weight([0, 0], 0))) == 6


def test_a1_window_example():
    W = block_window(A1, LAM0, 1, 4)
    assert set(W.weights) == {Weight([0], 0), Weight([0], 1), Weight([-2], 0), Weight([-2], 1)}
    assert block_window(A1, Weight([Fraction(1, 2)], 0), 2, 4).weights == (Weight([Fraction(1, 2)], 0),)


def orbit_oracle(rs, lam0, delta_bound, height_bound):
    """Finite Weyl dot-orbit of the finite part times every delta shift reachable by integral reflections."""
    finite = {lam0.finite}
    frontier = [lam0.finite]
    alphas = [a for a in integral_finite_roots(rs, lam0) if sum(a) > 0]
    while frontier:
        nxt = []
        for f in frontier:
            for a in alphas:
                g = dot_reflect(rs, Weight(f, 0), a, 0).finite
                if g not in finite:
                    finite.add(g)
                    nxt.append(g)
        frontier = nxt
    out = set()
    for f in finite:
        h = sum(rs.weight_to_root_coords([x - y for x, y in zip(f, lam0.finite)]))
        if abs(h) > height_bound:
            continue
        for k in range(delta_bound + 1):
            out.add(Weight(f, lam0.delta + k))
    return out


@pytest.mark.parametrize("finite,db,hb", [((0, 0), 1, 4), ((0, 0), 2, 2), ((-1, 0), 1, 4), ((0, 0), 1, 1)])
def test_a2_window_matches_orbit_oracle(finite, db, hb):
    W = block_window(A2, Weight(list(finite), 0), db, hb)
    assert set(W.weights) == orbit_oracle(A2, Weight(list(finite), 0), db, hb)
    assert len(set(W.weights)) == len(W.weights)


def test_window_json_round_trip():
    W = a2_window(1, 4)
    assert BlockWindow.from_json(W.to_json()).weights == W.weights


def test_alpha_up_examples():
    assert alpha_up(A1, (1,), LAM0) == Weight([-2], 1)
    assert alpha_up(A1, (1,), Weight([-1], 0)) == Weight([-1], 0)
    assert alpha_up(A1, (1,), Weight([-2], 0)) == Weight([0], 0)
    assert alpha_up_scan(A1, (1,), LAM0) == Weight([-2], 1)


@pytest.mark.parametrize("rs", [A1, A2])
def test_alpha_up_matches_scan(rs):
    rng = random.Random(5)
    for _ in range(150):
        lam = Weight([rng.randint(-5, 5) for _ in range(rs.rank)], rng.randint(-3, 3))
        alpha = rng.choice(rs.roots)
        assert alpha_up(rs, alpha, lam) == alpha_up_scan(rs, alpha, lam)


def test_alpha_up_rejects_non_integral():
    with pytest.raises(ValueError):
        alpha_up(A1, (1,), Weight([Fraction(1, 2)], 0))


def test_topology_examples():
    W = small_window()
    assert is_open([], W) and is_closed([], W)
    assert is_open([0], W)
    assert is_closed([2], W)
    assert is_locally_closed([1], W) and not is_open([1], W)
    assert is_locally_bounded([1], W)
    assert k_plus([1], W) == {0, 1} and k_minus([1], W) == {0}
    assert k_plus(range(3), W) == {0, 1, 2} and k_minus(range(3), W) == set()
    assert k_plus([0], W) == {0} and k_minus([0], W) == set()
    with pytest.raises(ValueError):
        k_plus([0, 2], W)


def brute_locally_closed(S, W):
    """Locally closed = intersection of an open and a closed subset."""
    n = len(W)
    for bits in itertools.product([0, 1], repeat=n):
        O = {i for i in range(n) if bits[i]}
        if not is_open(O, W):
            continue
        for bits2 in itertools.product([0, 1], repeat=n):
            C = {i for i in range(n) if bits2[i]}
            if is_closed(C, W) and O & C == set(S):
                return True
    return False


@given(st.sets(st.integers(0, 5)))
def test_locally_closed_is_open_meet_closed(S):
    W = a1_window(2, 4)
    assert is_locally_closed(S, W) == brute_locally_closed(S, W)


@given(st.sets(st.integers(0, 11), max_size=6))
def test_open_closed_duality(S):
    W = a2_window(1, 4)
    assert is_open(S, W) == is_closed(set(range(len(W))) - S, W)
    if is_locally_closed(S, W):
        plus, minus = k_plus(S, W), k_minus(S, W)
        assert is_open(plus, W) and is_open(minus, W)
        assert plus - minus == frozenset(S)


def test_window_order_matches_leq():
    W = a2_window(1, 4)
    for i, j in itertools.product(range(len(W)), repeat=2):
        assert W.le(i, j) == leq(A2, W.weights[i], W.weights[j])
