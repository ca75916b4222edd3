"""Exact linear algebra over the rationals.

Matrices are plain lists of rows whose entries are ``int`` or ``Fraction``.
Every routine clears denominators row by row first, so elimination runs on
integers.  Small matrices go through a pure-Python fraction-free (Bareiss)
elimination; large ones are handed to FLINT's exact integer routines when the
``python-flint`` package is importable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

try:  # pragma: no cover - exercised implicitly
    import flint
except ImportError:  # pragma: no cover
    flint = None

# Matrices with fewer entries than this use the pure-Python path.
_FLINT_THRESHOLD = 400

# Large prime used by the optional (uncertified) modular mode.
MODULAR_PRIME = 2305843009213693951  # 2**61 - 1

# Primes tried in turn by the certified rank routine.
_PRIMES = (4611686018427387847, 4611686018427387817, 4611686018427387787)


def integer_row(row: Iterable) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    row = list(row)
    den = 1
    for x in row:
        if type(x) is not int and x.denominator != 1:
            den = lcm(den, x.denominator)
    if den == 1:
        return [int(x) for x in row]
    return [int(x * den) for x in row]


def integer_matrix(rows: Iterable[Iterable]) -> list[list[int]]:
    return [integer_row(r) for r in rows]


def _drop_zero_rows(rows):
    return [r for r in rows if any(r)]


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination."""
    a = [list(r) for r in _drop_zero_rows(rows)]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for i in range(rank + 1, m):
            row = a[i]
            f = row[col]
            if f:
                for j in range(col + 1, n):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(col + 1, n):
                    row[j] = (p * row[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q.

    Returns ``(R, pivots)`` where ``R`` is the list of nonzero rows (as
    ``Fraction`` lists) and ``pivots`` the pivot column of each row.
    """
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return [], []
    if flint is not None and len(rows) * ncols >= _FLINT_THRESHOLD:
        return _flint_rref(rows, ncols)
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    m = len(a)
    for c in range(ncols):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        pr = a[r]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ai = a[i]
                a[i] = [x - f * y for x, y in zip(ai, pr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def _flint_rref(rows, ncols):
    mat = flint.fmpz_mat(integer_matrix(rows))
    red, den, rk = mat.rref()
    out = []
    pivots = []
    den = int(den)
    for i in range(rk):
        ints = [int(red[i, j]) for j in range(ncols)]
        row = [Fraction(x, den) for x in ints]
        out.append(row)
        pivots.append(next(j for j, x in enumerate(ints) if x))
    return out, pivots


def rref_integer(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form as ``(int_rows, den, pivots)``.

    The true reduced rows are ``int_rows[i] / den``.  Useful when only a few
    entries are needed as fractions.
    """
    rows = integer_matrix(rows)
    if flint is None or not rows:
        red, piv = rref(rows, ncols)
        den = 1
        for r in red:
            for x in r:
                den = lcm(den, Fraction(x).denominator)
        return [[int(x * den) for x in r] for r in red], den, piv
    red, den, rk = flint.fmpz_mat(rows).rref()
    ents = [int(x) for x in red.entries()]
    out = [ents[i * ncols:(i + 1) * ncols] for i in range(rk)]
    piv = [next(j for j, x in enumerate(r) if x) for r in out]
    return out, int(den), piv


def rank(rows: Sequence[Sequence], modular: bool = False) -> int:
    """Exact rank over Q (or rank mod a large prime when ``modular``)."""
    rows = _drop_zero_rows([integer_row(r) for r in rows])
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    if flint is None or m * n < _FLINT_THRESHOLD:
        if m > n:
            rows = [list(c) for c in zip(*rows)]
        return bareiss_rank(rows)
    if modular:
        return flint.nmod_mat(rows, MODULAR_PRIME).rank()
    return certified_rank(rows)


def _pivot_columns(red, nrows, ncols):
    piv = []
    c = 0
    for i in range(nrows):
        while c < ncols and int(red[i, c]) == 0:
            c += 1
        if c == ncols:
            break
        piv.append(c)
        c += 1
    return piv


def certified_rank(rows: list[list[int]], primes: Sequence[int] = _PRIMES) -> int:
    """Exact rank of an integer matrix via a modular guess plus a certificate.

    A rank ``r`` observed modulo ``p`` is a lower bound over Q, witnessed by an
    ``r x r`` minor that is nonzero mod ``p``.  The remaining rows are then
    expressed over Q in terms of the ``r`` independent rows (p-adic solve on
    the minor) and the relation is checked exactly, which bounds the rank from
    above.  If the check fails the prime was unlucky and the next is tried;
    after the list is exhausted we fall back to fraction-free elimination.
    """
    m, n = len(rows), len(rows[0])
    if m > n:
        rows = [list(c) for c in zip(*rows)]
        m, n = n, m
    for p in primes:
        at = flint.nmod_mat([list(c) for c in zip(*rows)], p)
        red, r = at.rref()
        if r == m:
            return m
        prow = _pivot_columns(red, r, m)
        top = [rows[i] for i in prow]
        red2, r2 = flint.nmod_mat(top, p).rref()
        pcol = _pivot_columns(red2, r2, n)
        if r == 0:
            if all(not any(row) for row in rows):
                return 0
            continue
        pset = set(prow)
        rest = [rows[i] for i in range(m) if i not in pset]
        minor = flint.fmpz_mat([[row[c] for c in pcol] for row in top])
        rhs = flint.fmpz_mat([[row[c] for row in rest] for c in pcol])
        y = minor.transpose().solve(rhs)  # r x k, columns are coefficient vectors
        num, den = y.numer_denom()
        lhs = num.transpose() * flint.fmpz_mat(top)
        if lhs == flint.fmpz_mat(rest) * den:
            return r
    return bareiss_rank(rows)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel over Q, one vector per free column."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[free]
        basis.append(v)
    return basis


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix (Bareiss)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    dens = []
    a = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        dens.append(den)
        a.append([int(Fraction(x) * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if sw is None:
                return Fraction(0)
            a[k], a[sw] = a[sw], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    total_den = 1
    for d in dens:
        total_den *= d
    return Fraction(sign * a[n - 1][n - 1], total_den)


def solve_coordinates(basis: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Coordinates of ``v`` in the span of the independent vectors ``basis``.

    Raises ``ValueError`` when ``v`` is not in the span.
    """
    k = len(basis)
    n = len(v)
    aug = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    red, pivots = rref(aug, k + 1)
    if k in pivots:
        raise ValueError("vector not in span")
    coords = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        coords[p] = row[k]
    return coords


def primitive_vector(v: Sequence, positive_first: bool = True) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    With ``positive_first`` the first nonzero entry is made positive.
    """
    ints = integer_row([Fraction(x) for x in v])
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive normalization")
    ints = [x // g for x in ints]
    if positive_first:
        first = next(x for x in ints if x)
        if first < 0:
            ints = [-x for x in ints]
    return tuple(ints)


def positive_primitive(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the same ray (positive multiple)."""
    ints = integer_row([Fraction(x) for x in v])
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector does not span a ray")
    return tuple(x // g for x in ints)
