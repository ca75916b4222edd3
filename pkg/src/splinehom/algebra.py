"""Homogeneous polynomials and ideals generated by powers of linear forms.

Monomials of a fixed degree are listed in graded lexicographic order with
``x0`` largest, descending.  A degree-``d`` slice of ``S = Q[x0..xn]`` is
the vector space with that ordered monomial basis; reduced row echelon forms
therefore put pivots on leading monomials, and the non-pivot monomials give
a normal-form basis of the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence

from . import linalg

__all__ = [
    "monomials",
    "monomial_index",
    "HomogeneousPoly",
    "PowerIdeal",
    "QuotientSlice",
    "FatPointResolution",
    "TooFewGenerators",
    "linear_power",
    "ideal_matrix",
    "ideal_degree_dim",
    "quotient_dim",
    "quotient_hilbert_function",
    "quotient_basis",
    "minimal_generators",
    "fat_point_resolution",
    "binom",
]


class TooFewGenerators(ValueError):
    """Raised when the fat-points data is requested for fewer than 2 generators."""


def binom(m: int, k: int) -> int:
    """Combinatorial binomial: zero when ``m < k`` or ``m < 0``."""
    if k < 0 or m < k:
        return 0
    return comb(m, k)


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    if d < 0:
        return ()
    if nvars == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(nvars, d))}


def _normalize_form(form: Sequence) -> tuple[int, ...]:
    return linalg.primitive_vector(form)


@lru_cache(maxsize=None)
def linear_power(form: tuple[int, ...], e: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Nonzero terms of ``l**e`` for the linear form with coefficient vector ``form``."""
    nvars = len(form)
    fe = factorial(e)
    terms = []
    support = [i for i, c in enumerate(form) if c]
    for expo in monomials(nvars, e):
        if any(k and i not in support for i, k in enumerate(expo)):
            continue
        coef = fe
        for i, k in enumerate(expo):
            if k:
                coef = coef // factorial(k) * form[i] ** k
        # multinomial factor divides exactly after all divisions
        terms.append((expo, coef))
    return tuple((m, c) for m, c in terms if c)


@dataclass(frozen=True)
class HomogeneousPoly:
    """A homogeneous polynomial with exact rational coefficients."""

    nvars: int
    degree: int
    coeffs: tuple[tuple[tuple[int, ...], Fraction], ...] = ()

    @staticmethod
    def from_dict(nvars: int, degree: int, coeffs: dict) -> "HomogeneousPoly":
        items = []
        for m, c in coeffs.items():
            if len(m) != nvars or sum(m) != degree:
                raise ValueError(f"monomial {m} is not of degree {degree} in {nvars} variables")
            c = Fraction(c)
            if c:
                items.append((tuple(m), c))
        items.sort(reverse=True)
        return HomogeneousPoly(nvars, degree, tuple(items))

    @staticmethod
    def linear(form: Sequence) -> "HomogeneousPoly":
        n = len(form)
        return HomogeneousPoly.from_dict(
            n, 1, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(form)}
        )

    @staticmethod
    def power_of_form(form: Sequence, e: int) -> "HomogeneousPoly":
        form = tuple(int(x) for x in linalg.integer_row([Fraction(x) for x in form]))
        return HomogeneousPoly.from_dict(len(form), e, dict(linear_power(form, e)))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if (self.nvars, self.degree) != (other.nvars, other.degree):
            raise ValueError("degree or ring mismatch")
        acc = self.as_dict()
        for m, c in other.coeffs:
            acc[m] = acc.get(m, 0) + c
        return HomogeneousPoly.from_dict(self.nvars, self.degree, acc)

    def __neg__(self) -> "HomogeneousPoly":
        return HomogeneousPoly(self.nvars, self.degree, tuple((m, -c) for m, c in self.coeffs))

    def __sub__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        return self + (-other)

    def scale(self, k) -> "HomogeneousPoly":
        k = Fraction(k)
        if not k:
            return HomogeneousPoly(self.nvars, self.degree)
        return HomogeneousPoly(self.nvars, self.degree, tuple((m, c * k) for m, c in self.coeffs))

    def __mul__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        if self.nvars != other.nvars:
            raise ValueError("ring mismatch")
        acc: dict = {}
        for m1, c1 in self.coeffs:
            for m2, c2 in other.coeffs:
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, 0) + c1 * c2
        return HomogeneousPoly.from_dict(self.nvars, self.degree + other.degree, acc)

    def __pow__(self, e: int) -> "HomogeneousPoly":
        out = HomogeneousPoly.from_dict(self.nvars, 0, {(0,) * self.nvars: 1})
        for _ in range(e):
            out = out * self
        return out

    def vector(self) -> list[Fraction]:
        """Coefficient vector in the ordered monomial basis of its degree."""
        idx = monomial_index(self.nvars, self.degree)
        v = [Fraction(0)] * len(idx)
        for m, c in self.coeffs:
            v[idx[m]] = c
        return v

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.coeffs:
            term = c
            for x, k in zip(point, m):
                term *= Fraction(x) ** k
            total += term
        return total


@dataclass(frozen=True)
class PowerIdeal:
    """Ideal generated by powers ``l**e`` of linear forms.

    Forms are stored as primitive integer vectors with first nonzero entry
    positive; the generator list is kept sorted so equal ideals compare equal.
    """

    nvars: int
    generators: tuple[tuple[tuple[int, ...], int], ...] = ()

    @staticmethod
    def make(nvars: int, gens: Iterable[tuple[Sequence, int]]) -> "PowerIdeal":
        out = set()
        for form, e in gens:
            if len(form) != nvars:
                raise ValueError("form length does not match the number of variables")
            if e < 1:
                raise ValueError("exponents must be at least 1")
            out.add((_normalize_form(form), int(e)))
        return PowerIdeal(nvars, tuple(sorted(out, key=lambda g: (g[1], g[0]))))

    def is_zero(self) -> bool:
        return not self.generators

    def forms(self) -> list[tuple[int, ...]]:
        return sorted({f for f, _ in self.generators})

    def __add__(self, other: "PowerIdeal") -> "PowerIdeal":
        return PowerIdeal.make(self.nvars, list(self.generators) + list(other.generators))


def ideal_matrix(J: PowerIdeal, d: int) -> list[list[int]]:
    """Rows ``m * l**e`` spanning ``J_d``, as integer vectors over the degree-d monomials."""
    n = J.nvars
    idx = monomial_index(n, d)
    size = len(idx)
    rows = []
    for form, e in J.generators:
        if e > d:
            continue
        terms = linear_power(form, e)
        for m in monomials(n, d - e):
            row = [0] * size
            for expo, c in terms:
                row[idx[tuple(a + b for a, b in zip(m, expo))]] = c
            rows.append(row)
    return rows


def ideal_degree_dim(J: PowerIdeal, d: int, modular: bool = False) -> int:
    """``dim J_d`` computed as the rank of the generator-multiple matrix."""
    if d < 0:
        return 0
    rows = ideal_matrix(J, d)
    if not rows:
        return 0
    return linalg.rank(rows, modular=modular)


@lru_cache(maxsize=None)
def _reduced_generators(J: PowerIdeal):
    """Rewrite ``J`` in coordinates on the span of its forms.

    Returns ``(c, gens)`` where ``c`` is the dimension of the span and
    ``gens`` the generators as forms in ``c`` variables.  ``S/J`` is then
    the tensor product of ``Q[y1..yc]/J'`` with a free polynomial ring in
    the remaining ``nvars - c`` variables.
    """
    forms = J.forms()
    red, _ = linalg.rref(forms, J.nvars)
    c = len(red)
    gens = []
    for form, e in J.generators:
        coords = linalg.solve_coordinates(red, form)
        gens.append((coords, e))
    return c, PowerIdeal.make(c, gens) if c else PowerIdeal(0)


@lru_cache(maxsize=None)
def _reduced_hf_table(J: PowerIdeal, modular: bool = False) -> tuple[int, ...]:
    """Hilbert function of the finite-length reduction, up to its first zero."""
    c, Jr = _reduced_generators(J)
    if c == 0:
        return (1,)
    table = []
    j = 0
    while True:
        h = comb(j + c - 1, c - 1) - ideal_degree_dim(Jr, j, modular)
        if h == 0:
            break
        table.append(h)
        j += 1
    return tuple(table)


def quotient_hilbert_function(J: PowerIdeal, d: int, modular: bool = False) -> int:
    """``HF(S/J, d)`` through the reduction to the span of the forms."""
    if d < 0:
        return 0
    n = J.nvars
    if J.is_zero():
        return comb(d + n - 1, n - 1)
    c = _reduced_generators(J)[0]
    k = n - c
    table = _reduced_hf_table(J, modular)
    if k == 0:
        return table[d] if d < len(table) else 0
    return sum(h * comb(d - j + k - 1, k - 1) for j, h in enumerate(table) if j <= d)


def quotient_dim(J: PowerIdeal, d: int) -> int:
    """``HF(S/J, d) = dim S_d - dim J_d`` by direct rank computation."""
    if d < 0:
        return 0
    return comb(d + J.nvars - 1, J.nvars - 1) - ideal_degree_dim(J, d)


@dataclass(frozen=True)
class QuotientSlice:
    """Coordinates on ``(S/J)_d`` and the reduction ``S_d -> (S/J)_d``.

    ``basis`` lists the indices of standard (non-pivot) monomials.  For a
    pivot monomial ``p`` the normal form is ``-sum(tail[p][c] * e_c)``.
    """

    nvars: int
    degree: int
    basis: tuple[int, ...]
    tail: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def position(self) -> dict[int, int]:
        return {b: i for i, b in enumerate(self.basis)}

    def reduce_monomial(self, col: int) -> dict[int, Fraction]:
        """Normal form of a single monomial, keyed by position in ``basis``."""
        pos = self.position()
        if col in pos:
            return {pos[col]: Fraction(1)}
        return {pos[c]: -v for c, v in self.tail.get(col, {}).items()}

    def reduce(self, vec: Sequence) -> list[Fraction]:
        pos = self.position()
        out = [Fraction(0)] * len(self.basis)
        for col, x in enumerate(vec):
            if not x:
                continue
            if col in pos:
                out[pos[col]] += x
            else:
                for c, v in self.tail.get(col, {}).items():
                    out[pos[c]] -= x * v
        return out


_QUOTIENT_CACHE: dict = {}


def quotient_basis(J: PowerIdeal, d: int) -> QuotientSlice:
    key = (J, d)
    hit = _QUOTIENT_CACHE.get(key)
    if hit is not None:
        return hit
    size = comb(d + J.nvars - 1, J.nvars - 1) if d >= 0 else 0
    rows = ideal_matrix(J, d) if d >= 0 else []
    if not rows:
        qs = QuotientSlice(J.nvars, d, tuple(range(size)), {})
    else:
        red, den, pivots = linalg.rref_integer(rows, size)
        pivset = set(pivots)
        basis = tuple(c for c in range(size) if c not in pivset)
        tail = {}
        for row, p in zip(red, pivots):
            piv = row[p]
            tail[p] = {c: Fraction(row[c], piv) for c in basis if row[c]}
        qs = QuotientSlice(J.nvars, d, basis, tail)
    _QUOTIENT_CACHE[key] = qs
    return qs


def _in_ideal(kept: list, form: tuple[int, ...], e: int, nvars: int) -> bool:
    if not kept:
        return False
    J = PowerIdeal.make(nvars, kept)
    rows = ideal_matrix(J, e)
    if not rows:
        return False
    target = dict(linear_power(form, e))
    idx = monomial_index(nvars, e)
    vec = [0] * len(idx)
    for m, c in target.items():
        vec[idx[m]] = c
    return linalg.rank(rows + [vec]) == linalg.rank(rows)


def minimal_generators(J: PowerIdeal):
    """Greedy minimal generating set of a power ideal.

    Generators are visited by ascending exponent, ties broken by the form
    key; a power on a hyperplane already seen is dropped, as is any power
    already in the ideal of the kept ones.  Returns ``(mu, beta, kept)``.
    """
    if not J.generators:
        return 0, (), ()
    seen = set()
    kept: list = []
    for form, e in sorted(J.generators, key=lambda g: (g[1], g[0])):
        if form in seen:
            continue
        seen.add(form)
        if _in_ideal(kept, form, e, J.nvars):
            continue
        kept.append((form, e))
    beta = tuple(e for _, e in kept)
    return len(kept), beta, tuple(kept)


@dataclass(frozen=True)
class FatPointResolution:
    mu: int
    beta: tuple[int, ...]
    Omega: int
    a: int
    b: int

    def hilbert_function(self, d: int, nvars: int) -> int:
        """HF of ``S/J`` implied by the two-step resolution (``nvars`` = n+1)."""
        n = nvars - 1
        val = binom(d + n, n)
        for e in self.beta:
            val -= binom(d + n - e, n)
        val += self.a * binom(d + n - self.Omega - 1, n)
        val += self.b * binom(d + n - self.Omega, n)
        return val


def fat_point_resolution(beta: Sequence[int]) -> FatPointResolution:
    """Resolution data of a codimension-2 ideal with minimal generator degrees ``beta``."""
    beta = tuple(sorted(int(e) for e in beta))
    mu = len(beta)
    if mu < 2:
        raise TooFewGenerators(f"need at least 2 minimal generators, got {mu}")
    total = sum(beta)
    omega = (total - mu) // (mu - 1) + 1
    a = total + (1 - mu) * omega
    b = mu - 1 - a
    return FatPointResolution(mu, beta, omega, a, b)
