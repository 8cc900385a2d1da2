"""Exact linear algebra over Q, Z and Z/p.

Matrices are lists of rows.  Entries may be ``int`` or ``Fraction``; every
routine returns ``Fraction`` or ``int`` values, never floats.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def to_fraction_matrix(a) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def rref(a, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    If ``ncols`` is given only the first ``ncols`` columns are used as pivots
    (useful for augmented systems).
    """
    m = to_fraction_matrix(a)
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    limit = cols if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(limit):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : a x = 0}, one vector per free column, in column order."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(a, b) -> tuple[list[Fraction] | None, int]:
    """Solve a x = b.  Returns (particular solution or None, nullity)."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug, ncols=n)
    for row in red[len(pivots):]:
        if row[n] != 0:
            return None, n - len(pivots)
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return x, n - len(pivots)


def det(a) -> Fraction:
    m = to_fraction_matrix(a)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, pivots = rref(aug, ncols=n)
    if len(pivots) != n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul(a, b) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a) -> Matrix:
    return [list(r) for r in zip(*a)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def common_denominator(values) -> int:
    d = 1
    for x in values:
        den = Fraction(x).denominator
        d = d * den // gcd(d, den)
    return d


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return rank(list(basis) + [list(v)]) == rank(basis)


# --- integer matrices -----------------------------------------------------

def smith_normal_form(a) -> list[int]:
    """Invariant factors (nonzero diagonal of the Smith form) of an integer matrix."""
    m = [[int(x) for x in row] for row in a]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                q = m[i][t] // m[t][t]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    m[t], m[i] = m[i], m[t]
                    done = False
            for j in range(t + 1, cols):
                q = m[t][j] // m[t][t]
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    for row in m:
                        row[t], row[j] = row[j], row[t]
                    done = False
            if done:
                # divisibility: fold in any entry the pivot does not divide
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if m[i][j] % m[t][t]), None)
                if bad is not None:
                    m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
                    done = False
        diag.append(abs(m[t][t]))
        t += 1
    return diag


# --- modular arithmetic ---------------------------------------------------

def mod_fraction(x, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"prime {p} divides denominator {x.denominator}")
    return x.numerator * pow(x.denominator, -1, p) % p


def det_mod(a, p: int) -> int:
    m = [[mod_fraction(x, p) for x in row] for row in a]
    n = len(m)
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result = result * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv % p
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return result % p


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n (deterministic below 3.3e24)."""
    c = n + 1
    while not is_probable_prime(c):
        c += 1
    return c


PRIME_FLOOR = 2 ** 31


def auto_primes(count: int, seed: int = 0, avoid: Sequence[int] = ()) -> list[int]:
    """``count`` distinct primes above 2**31 not dividing any of ``avoid``."""
    out = []
    c = PRIME_FLOOR + (seed % (1 << 16))
    while len(out) < count:
        c = next_prime(c)
        if all(a % c for a in avoid if a):
            out.append(c)
    return out
