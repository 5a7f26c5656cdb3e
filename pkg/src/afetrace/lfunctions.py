"""Quadratic Dirichlet L-values at s >= 1 and the class number formula.

Three independent routes to L(1, chi_D):

* :func:`l_value_direct` -- partial sums over whole periods with a rigorous
  Abel-summation tail bound;
* :func:`l_value_cnf` -- the class number formula, fed by brute-force form
  counting (D < 0) or the continued-fraction regulator (D > 0);
* the approximate functional equation in :mod:`afetrace.gamma_afe`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .arith import (
    decompose_discriminant,
    is_fundamental_discriminant,
    is_perfect_square,
    kronecker,
    prime_divisors,
    primes_up_to,
)
from .polynomials import CharPoly, discriminant, factor_type_mod_p, is_elliptic

DEFAULT_N_MAX = 10**6


class Estimate(NamedTuple):
    value: float
    error: float


class DivergentLValueError(ValueError):
    """L(s, chi) requested at s = 1 for a principal character."""


@dataclass(frozen=True)
class QuadraticCharacter:
    D: int

    def __post_init__(self):
        if self.D == 0 or self.D % 4 not in (0, 1):
            raise ValueError(f"{self.D} is not a discriminant")

    @property
    def period(self) -> int:
        return abs(self.D)

    @property
    def is_principal(self) -> bool:
        return is_perfect_square(self.D)

    def __call__(self, n: int) -> int:
        return kronecker(self.D, n)

    def table(self) -> np.ndarray:
        """Values chi(1), ..., chi(period)."""
        return _character_table(self.D)


@dataclass(frozen=True)
class ClassData:
    D: int
    h: int
    w: int = 2
    reg: float | None = None

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("class number must be >= 1")
        if self.D < 0 and self.w not in (2, 4, 6):
            raise ValueError(f"w must be 2, 4 or 6, got {self.w}")
        if self.D > 0 and not (self.reg and self.reg > 0):
            raise ValueError("real quadratic class data needs a positive regulator")


@dataclass
class EulerProductResult:
    value: float
    ramified: list[int] = field(default_factory=list)
    split: int = 0
    inert: int = 0


@lru_cache(maxsize=512)
def _character_table(D: int) -> np.ndarray:
    k = abs(D)
    tab = np.array([kronecker(D, n) for n in range(1, k + 1)], dtype=np.float64)
    tab.setflags(write=False)
    return tab


@lru_cache(maxsize=512)
def _period_data(D: int) -> tuple[float, float, float]:
    """Mean c of chi over a period, mean of the partial sums of (chi - c), max |U|.

    U(n) are the partial sums of the mean-zero periodic sequence
    S'(n) - mean(S') where S' are the partial sums of chi - c.
    """
    tab = _character_table(D)
    k = len(tab)
    c = float(np.sum(tab)) / k
    # exact rational arithmetic would be nicer, but the values are small integers / k
    s_part = np.cumsum(tab - c)
    s_bar = float(np.mean(s_part))
    u = np.cumsum(s_part - s_bar)
    u_max = float(np.max(np.abs(np.concatenate(([0.0], u)))))
    return c, s_bar, u_max


@lru_cache(maxsize=4096)
def l_value_direct(D: int, s: float = 1.0, N_max: int = DEFAULT_N_MAX) -> Estimate:
    """sum_{n >= 1} kronecker(D, n) n^{-s} with a rigorous tail bound.

    The partial sum runs over whole periods (N is N_max rounded up to a
    multiple of |D|).  With c the mean of chi and S' the partial sums of
    chi - c, summation by parts twice gives

        tail = c * zeta(s, N+1) + mean(S') (N+1)^{-s} + R,
        |R| <= max|U| * ((N+1)^{-s} - (N+2)^{-s}),

    which is what is returned as the error (plus a floating-point allowance).
    """
    chi = QuadraticCharacter(D)
    if s < 1:
        raise ValueError("direct summation needs s >= 1")
    if chi.is_principal and s == 1:
        raise DivergentLValueError(f"L(1, chi_{D}) diverges: the character is principal")
    k = chi.period
    N = max(int(N_max), k)
    N = -(-N // k) * k
    tab = chi.table()
    n = np.arange(1, N + 1, dtype=np.float64)
    terms = np.tile(tab, N // k) * n ** (-s)
    partial = float(np.sum(terms))
    c, s_bar, u_max = _period_data(D)
    tail = s_bar * (N + 1.0) ** (-s)
    if c != 0.0:
        tail += c * float(hurwitz_zeta(s, N + 1.0))
    remainder = u_max * ((N + 1.0) ** (-s) - (N + 2.0) ** (-s))
    rounding = 4 * math.log2(N) * np.finfo(float).eps * float(np.sum(np.abs(terms)))
    return Estimate(partial + tail, float(remainder + rounding))


def l_modified(delta: int, s: float = 1.0, N_max: int = DEFAULT_N_MAX) -> Estimate:
    """L(s, kronecker(delta, .)) for a possibly non-fundamental discriminant."""
    if is_perfect_square(delta):
        raise DivergentLValueError(f"{delta} is a perfect square")
    return l_value_direct(delta, s, N_max)


def euler_correction(D: int, f: int) -> float:
    """prod_{q | f} (1 - chi_D(q)/q), linking L(1, chi_{f^2 D}) to L(1, chi_D)."""
    out = 1.0
    if f > 1:
        for q in prime_divisors(f):
            out *= 1.0 - kronecker(D, q) / q
    return out


# ---------------------------------------------------------------------------
# class numbers and regulators

def class_number_bf(D: int) -> ClassData:
    """Count reduced forms (a, b, c) of discriminant D < 0."""
    if D >= 0 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a negative fundamental discriminant")
    if D <= -10**6:
        raise ValueError("desk-scale only: need -10**6 < D < 0")
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            h += 1
        a += 1
    w = {-3: 6, -4: 4}.get(D, 2)
    return ClassData(D, h, w)


def _cf_quadratic(P: int, Q: int, N: int):
    """Partial quotients of (P + sqrt(N)) / Q, requiring Q | N - P^2."""
    r = math.isqrt(N)
    while True:
        # Q stays positive for the two starting points used below
        a = (P + r) // Q
        yield a
        P = a * Q - P
        Q = (N - P * P) // Q


def fundamental_unit(D: int) -> tuple[int, int]:
    """(t, u) with (t + u sqrt(D)) / 2 the fundamental unit of discriminant D > 0.

    Found as the first continued-fraction convergent of omega = (1+sqrt D)/2
    (or sqrt(D/4)) whose norm form equals +-1.
    """
    if D <= 0 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a positive fundamental discriminant")
    if D % 4 == 1:
        quotients = _cf_quadratic(1, 2, D)
        norm = lambda x, y: x * x - x * y - (D - 1) // 4 * y * y  # noqa: E731
    else:
        d = D // 4
        quotients = _cf_quadratic(0, 1, d)
        norm = lambda x, y: x * x - d * y * y  # noqa: E731
    p0, q0, p1, q1 = 1, 0, next(quotients), 1
    while abs(norm(p1, q1)) != 1:
        a = next(quotients)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    if D % 4 == 1:
        # p - q*omega' = (2p - q + q sqrt D) / 2
        return 2 * p1 - q1, q1
    return 2 * p1, q1


def regulator_bf(D: int) -> float:
    if not 0 < D < 10**6:
        raise ValueError("desk-scale only: need 0 < D < 10**6")
    t, u = fundamental_unit(D)
    # log((t + u sqrt D)/2) without forming the (possibly huge) float t
    return math.log(u / 2) + math.log(math.sqrt(D) + t / u)


def class_data(D: int, N_max: int = DEFAULT_N_MAX) -> ClassData:
    """Class number data for a fundamental discriminant.

    For D > 0 the class number comes from the analytic route: h is
    L(1, chi_D) sqrt(D) / (2 reg) rounded, and must land within 1e-3 of an integer.
    """
    if D < 0:
        return class_number_bf(D)
    reg = regulator_bf(D)
    L, err = l_value_direct(D, 1.0, N_max)
    h_real = L * math.sqrt(D) / (2 * reg)
    h = round(h_real)
    if h < 1 or abs(h_real - h) > 1e-3 + err * math.sqrt(D) / (2 * reg):
        raise ArithmeticError(f"analytic class number for D={D} not near an integer: {h_real}")
    return ClassData(D, h, 2, reg)


def l_value_cnf(cd: ClassData) -> Estimate:
    if cd.D < 0:
        value = 2 * math.pi * cd.h / (cd.w * math.sqrt(-cd.D))
    else:
        value = 2 * cd.h * cd.reg / math.sqrt(cd.D)
    return Estimate(value, 8 * math.ulp(1.0) * value)


# ---------------------------------------------------------------------------
# cyclic cubic fields

def dedekind_ratio_euler(f: CharPoly, s: float, P_max: int) -> EulerProductResult:
    """Euler product of zeta_E(s)/zeta(s) for a cyclic cubic field E over p <= P_max.

    Split primes contribute (1 - p^-s)^-2, inert ones (1 + p^-s + p^-2s)^-1;
    ramified primes are skipped (factor 1) and listed in the result.
    """
    if f.degree != 3 or not is_elliptic(f):
        raise ValueError("need an irreducible cubic")
    disc = discriminant(f)
    if not is_perfect_square(disc):
        raise ValueError(f"cubic is not Galois: discriminant {disc} is not a square")
    out = EulerProductResult(1.0)
    log_value = 0.0
    for p in primes_up_to(int(P_max)):
        ft = factor_type_mod_p(f, p)
        if ft.ramified:
            out.ramified.append(p)
            continue
        x = p ** (-s)
        if ft.degrees == (1, 1, 1):
            log_value -= 2 * math.log1p(-x)
            out.split += 1
        elif ft.degrees == (3,):
            log_value -= math.log1p(x + x * x)
            out.inert += 1
        else:
            raise ArithmeticError(f"splitting type {ft.degrees} at p={p} impossible for a cyclic cubic")
    out.value = math.exp(log_value)
    return out


def fundamental_part(delta: int) -> int:
    return decompose_discriminant(delta).fund
