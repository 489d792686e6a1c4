from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from momentgraphs.exactpoly import (
    EchelonSpace,
    LinearForm,
    Polynomial,
    determinant,
    graded_dim,
    monomial_basis,
    nullspace,
    poly_arith,
    polynomial_kernel,
    reduce_mod_linear,
    solve_graded,
)

X = ("x", "y")
SYM = sympy.symbols("x y")


def P(text, variables=X):
    return Polynomial.parse(text, variables)


def to_sympy(p: Polynomial):
    out = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(SYM, exp):
            term *= s**k
        out += term
    return sympy.expand(out)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
terms = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeffs, max_size=5)
polys = terms.map(lambda t: Polynomial(X, t))


def homogeneous(d):
    return st.lists(coeffs, min_size=d + 1, max_size=d + 1).map(lambda v: Polynomial.from_vector(X, d, v))


def test_arith_examples():
    assert poly_arith(P("x"), P("-x"), "add").is_zero()
    assert poly_arith(P("x+y"), P("x-y"), "mul") == P("x^2-y^2")
    assert poly_arith(P("x^2*y"), Fraction(3, 2), "scale") == P("3/2*x^2*y")


def test_variable_mismatch():
    with pytest.raises(ValueError):
        P("x") + Polynomial.parse("z", ("z", "w"))


def test_no_zero_coefficients():
    p = Polynomial(X, {(1, 0): 1, (0, 1): 0})
    assert list(p.terms) == [(1, 0)]
    assert (P("x") - P("x")).terms == {}


@given(polys, polys)
def test_ring_ops_match_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))


@given(polys)
def test_string_round_trip(p):
    assert Polynomial.parse(str(p), X) == p


@given(polys, polys, polys)
def test_distributivity(p, q, r):
    assert p * (q + r) == p * q + p * r


def test_monomial_basis_examples():
    assert monomial_basis(0, 3) == [(0, 0, 0)]
    assert monomial_basis(2, 1) == [(2,)]
    assert monomial_basis(2, 2) == [(2, 0), (1, 1), (0, 2)]


@given(st.integers(0, 6), st.integers(1, 4))
def test_graded_dim_counts_basis(d, n):
    assert graded_dim(d, n) == len(monomial_basis(d, n)) == sympy.binomial(d + n - 1, n - 1)


def test_reduce_examples():
    assert reduce_mod_linear(P("x"), LinearForm([1, 0])).is_zero()
    assert reduce_mod_linear(P("x^2"), LinearForm([1, -1])) in (P("y^2"), P("x^2"))
    assert reduce_mod_linear(P("x+y"), LinearForm([1, 1])).is_zero()
    with pytest.raises(ValueError):
        reduce_mod_linear(P("x"), LinearForm([0, 0]))


@given(polys, st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any))
def test_reduce_is_remainder(p, ell):
    """``p - r`` is divisible by the form, and ``r`` only depends on ``p`` mod the form."""
    form = LinearForm(ell)
    r = reduce_mod_linear(p, form)
    quotient, remainder = sympy.div(to_sympy(p) - to_sympy(r), to_sympy(form.to_polynomial(X)), *SYM)
    assert remainder == 0
    shifted = p + form.to_polynomial(X) * P("x*y+3")
    assert reduce_mod_linear(shifted, form) == r


def test_solve_graded_examples():
    assert solve_graded([], 3).dim == 3
    assert solve_graded([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3).dim == 0
    assert solve_graded([[1, -1]], 2).basis == ((Fraction(1), Fraction(1)),)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), max_size=6))
def test_echelon_matches_sympy_rank(rows):
    space = EchelonSpace(5, rows)
    assert space.dim == (sympy.Matrix(rows).rank() if rows else 0)
    for r in rows:
        assert space.contains(r)
    kernel = nullspace(rows, 5)
    assert len(kernel) == 5 - space.dim
    for v in kernel:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_echelon_equality_is_canonical():
    a = EchelonSpace(3, [[1, 2, 3], [0, 1, 1]])
    b = EchelonSpace(3, [[1, 3, 4], [2, 4, 6]])
    assert a == b


@given(st.lists(homogeneous(1), min_size=2, max_size=3), st.lists(homogeneous(1), min_size=2, max_size=3))
def test_polynomial_kernel_spans_fraction_field_kernel(col_a, col_b):
    n = min(len(col_a), len(col_b))
    columns = [col_a[:n], col_b[:n], [a + b for a, b in zip(col_a[:n], col_b[:n])]]
    kernel = polynomial_kernel(columns, X)
    matrix = sympy.Matrix([[to_sympy(c[i]) for c in columns] for i in range(n)])
    assert len(kernel) == 3 - matrix.rank()
    for v in kernel:
        for i in range(n):
            assert sum((v[j] * columns[j][i] for j in range(3)), Polynomial(X)).is_zero()


def test_determinant():
    m = [[P("x"), P("y")], [P("1"), P("x")]]
    assert determinant(m, X) == P("x^2-y")
