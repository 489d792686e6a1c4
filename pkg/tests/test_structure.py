import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import a1_window, a2_window, full_graph, poly, single_edge
from momentgraphs.exactpoly import LinearForm, monomial_basis
from momentgraphs.moment_graph import make_graph
from momentgraphs.structure import (
    SectionTuple,
    edge_structure_basis,
    is_section,
    structure_basis,
    structure_dims,
)


def sympy_structure_dim(G, d):
    """Independent count: solve the congruences with sympy polynomial remainders."""
    xs = sympy.symbols(f"x0:{G.nvars}")
    monos = monomial_basis(d, G.nvars)
    unknowns = []
    comps = []
    for v in range(len(G)):
        cs = sympy.symbols(f"c{v}_0:{len(monos)}")
        unknowns += cs
        comps.append(sum(c * sympy.prod([x**k for x, k in zip(xs, m)]) for c, m in zip(cs, monos)))
    eqs = []
    for e in G.edges:
        ell = sum(sympy.Rational(c.numerator, c.denominator) * x for c, x in zip(e.label.coefficients, xs))
        _, r = sympy.reduced(sympy.expand(comps[e.u] - comps[e.v]), [ell], *xs, order="lex")
        eqs += sympy.Poly(r, *xs).coeffs() if r != 0 else []
    if not eqs:
        return len(unknowns)
    A, _ = sympy.linear_eq_to_matrix(eqs, unknowns)
    return len(unknowns) - A.rank()


def test_edge_dims():
    assert structure_dims(single_edge(), 4) == [1, 2, 2, 2, 2]
    assert [edge_structure_basis(LinearForm([1, 1]), d).dim for d in range(3)] == [1, 3, 5]


def test_star_and_two_variable_examples():
    # one variable, both labels x: every degree-1 form is divisible by x
    star = make_graph(3, [(0, 1, [1]), (0, 2, [1])], 1)
    assert structure_basis(star, 1).dim == 3
    assert structure_basis(make_graph(3, [(0, 1, [1, 0]), (0, 2, [0, 1])], 2), 1).dim == 4
    edge2 = single_edge(2, (1, 0))
    assert structure_basis(edge2, 1).dim == 3
    assert structure_basis(make_graph(1, [], 2), 3).dim == 4


def test_negative_degree():
    with pytest.raises(ValueError):
        structure_basis(single_edge(), -1)


def test_is_section_examples():
    G = single_edge()
    assert is_section(G, [poly("1"), poly("1")])
    assert is_section(G, [poly("0"), poly("x0")])
    assert not is_section(G, [poly("1"), poly("0")])
    assert is_section(G, SectionTuple((poly("x0^2+3"), poly("3"))))
    with pytest.raises(ValueError):
        is_section(G, [poly("1")])


def small_graphs():
    """Window graphs on up to five vertices plus adversarial abstract ones."""
    rng = random.Random(17)
    out = []
    for W in (a1_window(2, 4), a2_window(1, 4), a2_window(1, 2, (-1, 0))):
        full = full_graph(W)
        for _ in range(6):
            K = rng.sample(range(len(W)), rng.randint(2, min(5, len(W))))
            out.append(full.subgraph(sorted(K)))
    # parallel labels at a vertex, a triangle with dependent labels, and rational coefficients
    out.append(make_graph(3, [(0, 1, [1, 0]), (0, 2, [2, 0])], 2))
    out.append(make_graph(3, [(0, 1, [1, 0]), (1, 2, [0, 1]), (0, 2, [1, 1])], 2))
    out.append(make_graph(4, [(0, 1, [1, -1]), (1, 2, [3, 1]), (2, 3, [1, 2]), (0, 3, [2, 5])], 2))
    return out


@pytest.mark.parametrize("G", small_graphs())
def test_dims_match_sympy(G):
    for d in range(4):
        assert structure_basis(G, d).dim == sympy_structure_dim(G, d)


@settings(max_examples=25)
@given(st.sets(st.integers(0, 11), min_size=1, max_size=5), st.integers(0, 3))
def test_basis_elements_are_sections(K, d):
    G = full_graph(a2_window(1, 4)).subgraph(sorted(K))
    for t in structure_basis(G, d).basis:
        assert is_section(G, t)
        assert all(p.is_zero() or p.degree() == d for p in t.components)


@settings(max_examples=25)
@given(st.sets(st.integers(0, 11), min_size=1, max_size=4), st.integers(0, 2), st.integers(0, 2))
def test_product_closed(K, d1, d2):
    G = full_graph(a2_window(1, 4)).subgraph(sorted(K))
    for a in structure_basis(G, d1).basis:
        for b in structure_basis(G, d2).basis:
            assert is_section(G, a * b)


def test_dims_bounded_by_free():
    G = full_graph(a2_window(1, 4)).subgraph([0, 1, 2, 3])
    for d in range(4):
        assert structure_basis(G, d).dim <= 4 * len(monomial_basis(d, 2))
