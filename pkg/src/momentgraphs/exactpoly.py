"""Exact polynomial arithmetic over the rationals and graded linear algebra.

Polynomials live in ``S = Q[x0, ..., x{n-1}]`` where the variables are the
simple-coroot coordinates of the Cartan subalgebra.  Everything here is exact;
no floating point is used anywhere.

String grammar (used for serialization)::

    poly    := "0" | term (("+" | "-") term)*
    term    := ["-"] factor ("*" factor)*
    factor  := rational | var ["^" int]
    rational:= int ["/" int]
    var     := name from the polynomial's variable list (default x0, x1, ...)

Terms are written in graded-lex order, highest degree first; a coefficient of
1 and an exponent of 1 are omitted.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from gmpy2 import mpq

Rational = Fraction
_MPQ = type(mpq(0))
Exponent = tuple[int, ...]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if type(value) is _MPQ:
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def default_variables(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


# ---------------------------------------------------------------------------
# monomials


@lru_cache(maxsize=None)
def _monomials(d: int, n: int) -> tuple[Exponent, ...]:
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in _monomials(d - first, n - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _monomial_index(d: int, n: int) -> dict[Exponent, int]:
    return {e: i for i, e in enumerate(_monomials(d, n))}


def monomial_basis(d: int, n: int) -> list[Exponent]:
    """Exponent vectors of total degree ``d`` in ``n`` variables, graded-lex order.

    Within a degree the order is lexicographically descending, so for
    ``d=2, n=2`` the result is ``[(2, 0), (1, 1), (0, 2)]``.
    """
    if d < 0 or n < 1:
        raise ValueError("need d >= 0 and n >= 1")
    return list(_monomials(d, n))


def graded_dim(d: int, n: int) -> int:
    """``dim S_d`` for ``n`` variables (zero for negative degrees)."""
    if d < 0:
        return 0
    return comb(d + n - 1, n - 1)


def _term_key(exp: Exponent):
    return (-sum(exp), tuple(-e for e in exp))


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable multivariate polynomial with rational coefficients."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str] | int, terms: dict | None = None):
        if isinstance(variables, int):
            variables = default_variables(variables)
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match {n} variables")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = as_fraction(coeff)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, variables) -> Polynomial:
        return cls(variables)

    @classmethod
    def constant(cls, variables, c) -> Polynomial:
        if isinstance(variables, int):
            variables = default_variables(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, i: int) -> Polynomial:
        if isinstance(variables, int):
            variables = default_variables(variables)
        exp = [0] * len(variables)
        exp[i] = 1
        return cls(variables, {tuple(exp): 1})

    @classmethod
    def monomial(cls, variables, exp: Exponent, c=1) -> Polynomial:
        return cls(variables, {tuple(exp): c})

    @classmethod
    def from_vector(cls, variables, d: int, vector: Sequence) -> Polynomial:
        """Inverse of :meth:`to_vector`."""
        if isinstance(variables, int):
            variables = default_variables(variables)
        basis = _monomials(d, len(variables)) if d >= 0 else ()
        if len(vector) != len(basis):
            raise ValueError("vector length does not match dim S_d")
        return cls(variables, {e: c for e, c in zip(basis, vector) if c})

    # basic queries ----------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs == {d}

    def to_vector(self, d: int) -> list[Fraction]:
        """Coefficients over ``monomial_basis(d, n)``; requires homogeneity."""
        idx = _monomial_index(d, self.nvars) if d >= 0 else {}
        vec = [Fraction(0)] * len(idx)
        for e, c in self.terms.items():
            try:
                vec[idx[e]] = c
            except KeyError:
                raise ValueError(f"polynomial is not homogeneous of degree {d}") from None
        return vec

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    # arithmetic -------------------------------------------------------------
    def _check(self, other: Polynomial) -> None:
        if self.variables != other.variables:
            raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.variables, as_fraction(other))

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.variables, terms)

    def __rmul__(self, other) -> Polynomial:
        return self.scale(other)

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> Polynomial:
        c = as_fraction(c)
        return Polynomial(self.variables, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # text ---------------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, key=_term_key):
            c = self.terms[exp]
            factors = []
            for name, k in zip(self.variables, exp):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = format_fraction(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_fraction(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | int) -> Polynomial:
        if isinstance(variables, int):
            variables = default_variables(variables)
        variables = tuple(variables)
        names = {v: i for i, v in enumerate(variables)}
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial string")
        if s[0] not in "+-":
            s = "+" + s
        chunks = re.findall(r"[+-][^+-]+", s)
        if "".join(chunks) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        terms: dict[Exponent, Fraction] = {}
        for chunk in chunks:
            sign = -1 if chunk[0] == "-" else 1
            coeff = Fraction(sign)
            exp = [0] * len(variables)
            for factor in chunk[1:].split("*"):
                m = re.fullmatch(r"(\d+)(?:/(\d+))?", factor)
                if m:
                    coeff *= Fraction(int(m.group(1)), int(m.group(2) or 1))
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
                if not m or m.group(1) not in names:
                    raise ValueError(f"bad factor {factor!r} in {text!r}")
                exp[names[m.group(1)]] += int(m.group(2) or 1)
            key = tuple(exp)
            terms[key] = terms.get(key, 0) + coeff
        return cls(variables, terms)


def poly_arith(p: Polynomial, q, op: str) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul`` on two polynomials, or ``scale`` by a rational."""
    if op == "scale":
        return p.scale(q)
    if not isinstance(q, Polynomial):
        raise TypeError(f"{op} needs two polynomials")
    p._check(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# linear forms


@dataclass(frozen=True)
class LinearForm:
    """A degree-one element of S, e.g. a coroot written in simple-coroot coordinates."""

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable):
        object.__setattr__(self, "coefficients", tuple(as_fraction(c) for c in coefficients))

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def normalized(self) -> LinearForm:
        """Sign-normalize so the first nonzero coordinate is positive."""
        for c in self.coefficients:
            if c:
                return self if c > 0 else LinearForm(-x for x in self.coefficients)
        return self

    def is_proportional(self, other: LinearForm) -> bool:
        a, b = self.coefficients, other.coefficients
        if len(a) != len(b):
            raise ValueError("linear forms over different spaces")
        return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))

    def to_polynomial(self, variables=None) -> Polynomial:
        variables = variables or default_variables(self.nvars)
        terms = {}
        for i, c in enumerate(self.coefficients):
            e = [0] * self.nvars
            e[i] = 1
            terms[tuple(e)] = c
        return Polynomial(variables, terms)

    def evaluate(self, point: Sequence) -> Fraction:
        return sum((c * Fraction(x) for c, x in zip(self.coefficients, point)), Fraction(0))

    def to_json(self) -> list[str]:
        return [format_fraction(c) for c in self.coefficients]

    def coroot_string(self) -> str:
        """Human label in the simple-coroot basis, e.g. ``a1^+2a2^``."""
        out = ""
        for i, c in enumerate(self.coefficients, start=1):
            if not c:
                continue
            mag = abs(c)
            coef = "" if mag == 1 else format_fraction(mag)
            sign = "-" if c < 0 else ("+" if out else "")
            out += f"{sign}{coef}a{i}^"
        return out or "0"


# ---------------------------------------------------------------------------
# reduction modulo a principal linear ideal


def _elimination(ell: LinearForm) -> tuple[int, tuple[Fraction, ...]]:
    if ell.is_zero():
        raise ValueError("cannot reduce modulo the zero linear form")
    j = max(i for i, c in enumerate(ell.coefficients) if c)
    cj = ell.coefficients[j]
    # x_j = sum_i sub[i] * x_i  (sub[j] = 0)
    sub = tuple(Fraction(0) if i == j else -c / cj for i, c in enumerate(ell.coefficients))
    return j, sub


@lru_cache(maxsize=4096)
def _reduced_monomial(exp: Exponent, coeffs: tuple[Fraction, ...]) -> tuple[tuple[Exponent, Fraction], ...]:
    j, sub = _elimination(LinearForm(coeffs))
    n = len(exp)
    k = exp[j]
    base = list(exp)
    base[j] = 0
    # expand (sum_i sub_i x_i)^k multinomially
    lin = Polynomial(n, {tuple(1 if t == i else 0 for t in range(n)): sub[i] for i in range(n) if sub[i]})
    power = lin ** k
    out = {}
    for e, c in power.terms.items():
        e2 = tuple(a + b for a, b in zip(e, base))
        out[e2] = out.get(e2, 0) + c
    return tuple((e, c) for e, c in out.items() if c)


def reduce_mod_linear(p: Polynomial, ell: LinearForm) -> Polynomial:
    """Canonical representative of ``p`` modulo the principal ideal ``(ell)``.

    The variable with the largest index among those with a nonzero coefficient
    in ``ell`` is eliminated by solving ``ell = 0`` for it.  Two polynomials are
    congruent mod ``ell`` exactly when their reductions are equal.
    """
    if ell.nvars != p.nvars:
        raise ValueError("linear form and polynomial live in different rings")
    if ell.is_zero():
        raise ValueError("cannot reduce modulo the zero linear form")
    terms: dict[Exponent, Fraction] = {}
    for e, c in p.terms.items():
        for e2, c2 in _reduced_monomial(e, ell.coefficients):
            terms[e2] = terms.get(e2, 0) + c * c2
    return Polynomial(p.variables, terms)


@lru_cache(maxsize=None)
def reduction_matrix(coeffs: tuple[Fraction, ...], d: int) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix of ``S_d -> S_d / (ell)_d`` in monomial coordinates.

    Rows index the surviving monomials (those not involving the eliminated
    variable); columns index ``monomial_basis(d, n)``.
    """
    n = len(coeffs)
    j, _ = _elimination(LinearForm(coeffs))
    cols = _monomials(d, n)
    rows = [e for e in cols if e[j] == 0]
    ridx = {e: i for i, e in enumerate(rows)}
    mat = [[Fraction(0)] * len(cols) for _ in rows]
    for c_i, e in enumerate(cols):
        for e2, c in _reduced_monomial(e, coeffs):
            mat[ridx[e2]][c_i] += c
    return tuple(tuple(r) for r in mat)


# ---------------------------------------------------------------------------
# rational linear algebra


class EchelonSpace:
    """A subspace of ``Q^n`` held in reduced row-echelon form.

    Rows are kept fully reduced with leading coefficient 1, so the basis is
    canonical: two spaces are equal iff their ``basis`` lists are equal.
    Entries are stored as GMP rationals (``gmpy2.mpq``), which compare and
    hash equal to the corresponding ``Fraction``.
    """

    __slots__ = ("n", "_rows")

    def __init__(self, n: int, vectors: Iterable[Sequence] = ()):
        self.n = n
        self._rows: dict[int, list[Fraction]] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def basis(self) -> list[list[Fraction]]:
        return [list(self._rows[p]) for p in sorted(self._rows)]

    def residual(self, v: Sequence) -> list[Fraction]:
        """``v`` minus its component along the pivot rows; linear in ``v``."""
        if len(v) != self.n:
            raise ValueError(f"vector of length {len(v)} in a space of dimension {self.n}")
        r = [mpq(x) for x in v]
        for p, row in self._rows.items():
            c = r[p]
            if c:
                for i in range(p, self.n):
                    if row[i]:
                        r[i] -= c * row[i]
        return r

    def contains(self, v: Sequence) -> bool:
        return not any(self.residual(v))

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; returns True if it enlarged the space."""
        r = self.residual(v)
        p = next((i for i, x in enumerate(r) if x), None)
        if p is None:
            return False
        lead = r[p]
        if lead != 1:
            r = [x / lead for x in r]
        for q, row in self._rows.items():
            c = row[p]
            if c:
                for i in range(p, self.n):
                    if r[i]:
                        row[i] -= c * r[i]
        self._rows[p] = r
        return True

    def copy(self) -> EchelonSpace:
        out = EchelonSpace(self.n)
        out._rows = {p: list(r) for p, r in self._rows.items()}
        return out

    def is_subspace_of(self, other: EchelonSpace) -> bool:
        return all(other.contains(v) for v in self._rows.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, EchelonSpace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def coordinates(self, v: Sequence) -> list[Fraction]:
        """Coefficients of ``v`` in the canonical basis; ``v`` must lie in the space."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [Fraction(v[p]) for p in sorted(self._rows)]


def rank(rows: Iterable[Sequence], n: int) -> int:
    return EchelonSpace(n, rows).dim


def nullspace(rows: Sequence[Sequence], n: int) -> list[list[Fraction]]:
    """Canonical (RREF) basis of ``{v in Q^n : row . v = 0 for all rows}``."""
    space = EchelonSpace(n, rows)
    pivots = space.pivots
    prow = {p: space._rows[p] for p in pivots}
    free = [j for j in range(n) if j not in prow]
    basis = []
    for f in free:
        v = [mpq(0)] * n
        v[f] = mpq(1)
        for p, row in prow.items():
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return EchelonSpace(n, basis).basis


@dataclass(frozen=True)
class GradedVectorSpaceBasis:
    """Canonical basis of a subspace of a single graded piece."""

    degree: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def solve_graded(constraints: Sequence[Sequence], dim: int, degree: int = 0) -> GradedVectorSpaceBasis:
    """Solution space of the homogeneous system ``c . v = 0`` for each constraint row.

    ``dim`` is the dimension of the coordinate space (needed when there are
    no constraints).  The returned basis is in reduced row-echelon form.
    """
    for c in constraints:
        if len(c) != dim:
            raise ValueError("constraint length does not match coordinate dimension")
    basis = nullspace([[as_fraction(x) for x in c] for c in constraints], dim)
    return GradedVectorSpaceBasis(degree, tuple(tuple(as_fraction(x) for x in v) for v in basis))


def mat_vec(matrix: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * b for a, b in zip(row, v) if a and b), mpq(0)) for row in matrix]


def evaluation_rank(columns: Sequence[Sequence[Polynomial]], point: Sequence[int]) -> int:
    """Rank over Q of a polynomial matrix (given by columns) evaluated at ``point``."""
    if not columns:
        return 0
    nrows = len(columns[0])
    rows = [[col[i].evaluate(point) for col in columns] for i in range(nrows)]
    return rank(rows, len(columns))


def determinant(matrix: Sequence[Sequence[Polynomial]], variables) -> Polynomial:
    """Laplace expansion along the first row; fine for the small minors used here."""
    n = len(matrix)
    if n == 0:
        return Polynomial.constant(variables, 1)
    if n == 1:
        return matrix[0][0]
    total = Polynomial(variables)
    for j, a in enumerate(matrix[0]):
        if a.is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = a * determinant(minor, variables)
        total = total + term if j % 2 == 0 else total - term
    return total


def polynomial_kernel(columns: Sequence[Sequence[Polynomial]], variables, seed: int = 7) -> list[list[Polynomial]]:
    """Polynomial vectors spanning the kernel over the fraction field of a polynomial matrix.

    The matrix is given by its columns.  A nonvanishing maximal minor ``B`` is
    located at a random point; each non-pivot column ``j`` then yields the
    Cramer relation ``det(B) e_j - sum_p det(B_p(a_j)) e_p``.
    """
    ncols = len(columns)
    if ncols == 0:
        return []
    nrows = len(columns[0])
    unit = lambda j: [Polynomial.constant(variables, int(i == j)) for i in range(ncols)]
    if nrows == 0:
        return [unit(j) for j in range(ncols)]
    rng = random.Random(seed)
    bound = 100
    for _ in range(8):
        best = None
        for _ in range(3):
            pt = [rng.randint(-bound, bound) for _ in range(len(variables))]
            vals = [[columns[j][i].evaluate(pt) for j in range(ncols)] for i in range(nrows)]
            cols = EchelonSpace(nrows)
            pcols = [j for j in range(ncols) if cols.add([vals[i][j] for i in range(nrows)])]
            if best is None or len(pcols) > len(best[0]):
                rws = EchelonSpace(len(pcols))
                prows = [i for i in range(nrows) if rws.add([vals[i][j] for j in pcols])]
                best = (pcols, prows)
        pcols, prows = best
        B = [[columns[j][i] for j in pcols] for i in prows]
        det = determinant(B, variables)
        kernel = []
        for j in range(ncols):
            if j in pcols:
                continue
            v = [Polynomial(variables) for _ in range(ncols)]
            v[j] = det
            for p, jp in enumerate(pcols):
                Bp = [row[:p] + [columns[j][i]] + row[p + 1 :] for row, i in zip(B, prows)]
                v[jp] = -determinant(Bp, variables)
            kernel.append(v)
        ok = all(
            sum((v[j] * columns[j][i] for j in range(ncols)), Polynomial(variables)).is_zero()
            for v in kernel
            for i in range(nrows)
        )
        if ok:
            return kernel
        bound *= 10
    raise RuntimeError("could not certify a generic kernel")
