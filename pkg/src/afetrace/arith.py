"""Exact integer kernels: Kronecker symbol, factorization, discriminant decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

MAX_FACTOR_INPUT = 2**63 - 1


class NotADiscriminantError(ValueError):
    """Raised for integers that are not congruent to 0 or 1 mod 4 (or are zero)."""


class SquareDiscriminantError(ValueError):
    """Raised when a field discriminant is demanded but delta is a positive square."""


@dataclass(frozen=True)
class DiscriminantDecomposition:
    """``delta = s**2 * fund`` with ``fund`` fundamental (or ``fund == 1`` for squares)."""

    delta: int
    s: int
    fund: int

    @property
    def is_square(self) -> bool:
        return self.fund == 1


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n), extended to all integers n.

    Uses the binary Jacobi recursion with quadratic reciprocity; the factors
    for n = -1 and n = 2 are handled separately.
    """
    D = int(D)
    n = int(n)
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    if v:
        if D % 2 == 0:
            return 0
        n >>= v
        if v & 1 and D % 8 in (3, 5):
            result = -result
    # n is odd and positive: Jacobi symbol (D/n)
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, primes ascending."""
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    if n > MAX_FACTOR_INPUT:
        raise OverflowError(f"{n} exceeds the supported range 2**63 - 1")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    # 6k +/- 1 wheel
    p = 5
    step = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def is_perfect_square(n: int) -> bool:
    n = int(n)
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    return factorize(n) == [(n, 1)]


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(abs(n)))


def is_fundamental_discriminant(D: int) -> bool:
    D = int(D)
    if D == 1 or D == 0:
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


@lru_cache(maxsize=4096)
def decompose_discriminant(delta: int, require_field: bool = False) -> DiscriminantDecomposition:
    """Split a discriminant into ``s**2 * fund`` with ``fund`` fundamental.

    A positive square comes back with ``fund == 1``; pass
    ``require_field=True`` to have it rejected instead.
    """
    delta = int(delta)
    if delta == 0 or delta % 4 not in (0, 1):
        raise NotADiscriminantError(f"{delta} is not a nonzero discriminant (must be 0 or 1 mod 4)")
    if is_perfect_square(delta):
        if require_field:
            raise SquareDiscriminantError(f"{delta} is a perfect square: no quadratic field")
        return DiscriminantDecomposition(delta, math.isqrt(delta), 1)
    sign = -1 if delta < 0 else 1
    t = 1
    core = 1
    for p, e in factorize(abs(delta)):
        t *= p ** (e // 2)
        if e % 2:
            core *= p
    core *= sign
    if core % 4 == 1:
        return DiscriminantDecomposition(delta, t, core)
    # core = 2,3 mod 4; t is even because delta = 0,1 mod 4
    return DiscriminantDecomposition(delta, t // 2, 4 * core)
