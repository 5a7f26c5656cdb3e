"""Characteristic polynomials, exact discriminants and splitting types mod p.

Polynomials over Z or F_p are plain lists of coefficients, lowest degree
first.  A :class:`CharPoly` stores the trace-style coefficients
``(a_1, ..., a_n)`` of ``X^n - a_1 X^{n-1} + ... + (-1)^n a_n``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .arith import divisors, is_perfect_square


@dataclass(frozen=True)
class CharPoly:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) < 2:
            raise ValueError("degree must be at least 2")
        if self.coeffs[-1] == 0:
            raise ValueError("a_n = 0: characteristic polynomial of a singular matrix")

    @classmethod
    def from_monic(cls, poly: Sequence[int]) -> "CharPoly":
        """Build from monic coefficients, lowest degree first."""
        poly = [int(c) for c in poly]
        if poly[-1] != 1:
            raise ValueError("polynomial is not monic")
        n = len(poly) - 1
        return cls(tuple((-1) ** i * poly[n - i] for i in range(1, n + 1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def monic(self) -> list[int]:
        """Integer coefficients of X^n - a_1 X^{n-1} + ..., lowest degree first."""
        n = self.degree
        poly = [0] * (n + 1)
        poly[n] = 1
        for i, a in enumerate(self.coeffs, start=1):
            poly[n - i] = (-1) ** i * a
        return poly

    def __call__(self, x):
        return poly_eval(self.monic(), x)


@dataclass(frozen=True)
class FactorizationType:
    degrees: tuple[int, ...]
    ramified: bool

    @property
    def n(self) -> int:
        return sum(self.degrees)


# ---------------------------------------------------------------------------
# integer polynomials and determinants

def poly_eval(poly: Sequence, x):
    acc = 0
    for c in reversed(poly):
        acc = acc * x + c
    return acc


def poly_derivative(poly: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(poly)][1:]


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list]:
    """Sylvester matrix of f and g (coefficient lists, lowest degree first).

    Entries are copied verbatim so any ring with ``+``, ``*`` and zero works.
    """
    m = len(f) - 1
    n = len(g) - 1
    size = m + n
    zero = 0 * f[0]
    rows = []
    fh = list(reversed(f))
    gh = list(reversed(g))
    for i in range(n):
        rows.append([zero] * i + fh + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gh + [zero] * (size - n - 1 - i))
    return rows


def det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free Gaussian elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_leibniz(matrix: Sequence[Sequence]):
    """Determinant by permutation expansion, for entries in any commutative ring.

    Only meant for the small (<= 5x5) Sylvester matrices of degree <= 3 maps.
    """
    n = len(matrix)
    total = None
    for perm in itertools.permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            entry = matrix[i][j]
            if entry == 0:
                term = None
                break
            term = entry if term is None else term * entry
        if term is None:
            continue
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        if inversions % 2:
            term = -term
        total = term if total is None else total + term
    return 0 if total is None else total


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    return det_bareiss(sylvester_matrix(f, g))


def discriminant(p: CharPoly) -> int:
    """(-1)^{n(n-1)/2} Res(f, f') for the monic characteristic polynomial."""
    f = p.monic()
    n = p.degree
    return (-1) ** (n * (n - 1) // 2) * resultant(f, poly_derivative(f))


def is_elliptic(p: CharPoly) -> bool:
    """Irreducibility over Q, for degrees 2 and 3 only."""
    n = p.degree
    if n == 2:
        return not is_perfect_square(discriminant(p))
    if n == 3:
        # monic integer cubic is reducible iff it has an integer root dividing the constant
        f = p.monic()
        for d in divisors(abs(f[0])):
            if poly_eval(f, d) == 0 or poly_eval(f, -d) == 0:
                return False
        return True
    raise ValueError(f"ellipticity test only implemented for degree 2 and 3, got {n}")


# ---------------------------------------------------------------------------
# arithmetic in F_p[X]

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], p: int) -> list[int]:
    return _trim([c % p for c in a])


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = a[-1] * inv % p
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        _trim(a)
    return _trim(q), a


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def factor_type_mod_p(f: CharPoly, p: int) -> FactorizationType:
    """Degrees of the irreducible factors of f mod p, with multiplicity.

    Distinct-degree factorization: at step i, gcd(h, X^{p^i} - X) collects the
    degree-i factors still dividing h; repeated division peels multiplicities.
    """
    h = _pmod(f.monic(), p)
    ramified = len(_pgcd(h, _pmod(poly_derivative(f.monic()), p), p)) > 1
    degrees: list[int] = []
    x = [0, 1]
    xp = x
    i = 0
    while len(h) > 1:
        i += 1
        if 2 * i > len(h) - 1:
            # remaining factor is irreducible; its multiplicity is already removed below
            break
        xp = _ppowmod(xp, p, h, p)
        g = _pgcd(h, _psub(xp, x, p), p)
        while len(g) > 1:
            degrees.extend([i] * ((len(g) - 1) // i))
            h = _pdivmod(h, g, p)[0]
            g = _pgcd(h, g, p)
        xp = _pdivmod(xp, h, p)[1] if len(h) > 1 else xp
    if len(h) > 1:
        degrees.append(len(h) - 1)
    return FactorizationType(tuple(sorted(degrees)), ramified)


def roots_mod_p(f: CharPoly, p: int) -> list[int]:
    """Roots of f in F_p by exhaustive scan (the cross-check route for small p)."""
    poly = f.monic()
    return [r for r in range(p) if poly_eval(poly, r) % p == 0]


def splitting_counts(ft: FactorizationType) -> Counter:
    return Counter(ft.degrees)
