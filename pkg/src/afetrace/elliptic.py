"""Elliptic terms of the GL(2) trace formula and the GL(3) Kottwitz orbital integrals.

A class with trace m and determinant sign * p^k has discriminant
delta = m^2 - 4 sign p^k = s^2 D_E.  Arithmetic-side quantities (p-adic
orbital products, Kottwitz values) are exact ``Fraction`` objects; floats
enter only through L-values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .arith import (
    DiscriminantDecomposition,
    decompose_discriminant,
    divisors,
    is_perfect_square,
    is_prime,
    kronecker,
    prime_divisors,
)
from .lfunctions import Estimate, class_data, l_modified, l_value_cnf, l_value_direct

LProvider = Callable[[int], Estimate]


@dataclass(frozen=True)
class EllipticClassGL2:
    m: int
    sign: int
    p: int
    k: int
    delta: int
    decomp: DiscriminantDecomposition

    @classmethod
    def build(cls, m: int, sign: int, p: int, k: int) -> "EllipticClassGL2":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        delta = m * m - 4 * sign * p**k
        return cls(m, sign, p, k, delta, decompose_discriminant(delta))

    @property
    def s_gamma(self) -> int:
        return self.decomp.s

    @property
    def D_E(self) -> int:
        return self.decomp.fund

    @property
    def elliptic(self) -> bool:
        return not self.decomp.is_square

    @property
    def x(self) -> float:
        """The archimedean coordinate m / (2 p^{k/2})."""
        return self.m / (2 * self.p ** (self.k / 2))


@dataclass(frozen=True)
class ThetaModel:
    """Archimedean weight on R^{n-1}: a callable with a declared singularity exponent."""

    weight: Callable
    beta: float = 0.0
    support: float = math.inf

    def __call__(self, *x) -> float:
        if math.hypot(*x) >= self.support:
            return 0.0
        return float(self.weight(*x))

    @classmethod
    def bump(cls, radius: float = 1.0, centre: float = 0.0) -> "ThetaModel":
        """exp(-1/(1 - r^2)) scaled to the radius; smooth, compactly supported."""

        def w(x):
            r2 = ((x - centre) / radius) ** 2
            return math.exp(1.0 - 1.0 / (1.0 - r2)) if r2 < 1 else 0.0

        return cls(w, 0.0, abs(centre) + radius)

    @classmethod
    def zero(cls) -> "ThetaModel":
        return cls(lambda *x: 0.0, 0.0, 0.0)


def _theta_for(theta, sign: int) -> ThetaModel:
    if isinstance(theta, Mapping):
        return theta[sign]
    return theta


def enumerate_elliptic(p: int, k: int, M: int, include_squares: bool = False) -> list[EllipticClassGL2]:
    """Classes with |m| <= M and det = +-p^k, ordered by sign (+ first) then ascending m.

    delta = 0 (a repeated eigenvalue) never gives a class; perfect-square
    delta are skipped unless ``include_squares``.
    """
    if not is_prime(p) or k < 1 or M < 0:
        raise ValueError("need p prime, k >= 1, M >= 0")
    out = []
    for sign in (1, -1):
        for m in range(-M, M + 1):
            delta = m * m - 4 * sign * p**k
            if delta == 0:
                continue
            if is_perfect_square(delta) and not include_squares:
                continue
            out.append(EllipticClassGL2.build(m, sign, p, k))
    return out


def padic_orbital_product(cls: EllipticClassGL2) -> Fraction:
    """sum_{f | s} f prod_{q | f} (1 - (D/q)/q), exactly."""
    D = cls.D_E
    total = Fraction(0)
    for f in divisors(cls.s_gamma):
        term = Fraction(f)
        for q in prime_divisors(f) if f > 1 else ():
            term *= 1 - Fraction(kronecker(D, q), q)
        total += term
    return total


def lvalue_provider(route: str = "direct", **kwargs) -> LProvider:
    """L(1, chi_D) for fundamental D by one of the routes direct | cnf | afe."""
    if route == "direct":
        return lambda D: l_value_direct(D, 1.0, **kwargs)
    if route == "cnf":
        return lambda D: l_value_cnf(class_data(D))
    if route == "afe":
        from .gamma_afe import l_value_afe

        return lambda D: l_value_afe(D, 1.0, **kwargs)
    raise ValueError(f"unknown L-value route {route!r}")


def volume(cls: EllipticClassGL2, lf: LProvider | None = None) -> Estimate:
    """sqrt|D_E| L(1, chi_{D_E}), the measure of the centralizer quotient."""
    if not cls.elliptic:
        raise ValueError("perfect-square discriminant: no quadratic field")
    lf = lf or lvalue_provider()
    L, err = lf(cls.D_E)
    root = math.sqrt(abs(cls.D_E))
    return Estimate(root * L, root * err)


@dataclass
class LfunSumReport:
    delta: int
    lhs: float
    rhs: float
    error: float
    discrepancy: float
    printed_ratio: float
    f_values: list[int]
    passed: bool


def verify_lfun_sum(cls: EllipticClassGL2, tol: float = 1e-4, N_max: int = 10**6) -> LfunSumReport:
    """Check  sum' (1/f) L(1, delta/f^2) = (1/s) L(1, chi_D) * padic_orbital_product.

    The primed sum runs over f with f^2 | delta and delta/f^2 = 0, 1 mod 4.
    ``printed_ratio`` is sqrt|D| L(1,chi_D) sum_f(...) divided by the left side,
    which comes out as sqrt|delta|.
    """
    if not cls.elliptic:
        raise ValueError("verify_lfun_sum needs an elliptic class")
    delta = cls.delta
    lhs = 0.0
    err2 = 0.0
    fs = []
    for f in range(1, math.isqrt(abs(delta)) + 1):
        if delta % (f * f) or (delta // (f * f)) % 4 not in (0, 1):
            continue
        fs.append(f)
        v, e = l_modified(delta // (f * f), 1.0, N_max)
        lhs += v / f
        err2 += (e / f) ** 2
    L, eL = l_value_direct(cls.D_E, 1.0, N_max)
    orb = float(padic_orbital_product(cls))
    rhs = L * orb / cls.s_gamma
    err = math.sqrt(err2 + (eL * orb / cls.s_gamma) ** 2)
    printed = math.sqrt(abs(cls.D_E)) * L * orb / lhs
    disc = abs(lhs - rhs)
    return LfunSumReport(delta, lhs, rhs, err, disc, printed, fs, disc < tol)


@dataclass
class EllipticTerm:
    cls: EllipticClassGL2
    volume: float | None
    padic: Fraction
    theta: float
    term: float


def elliptic_terms(
    p: int,
    k: int,
    theta,
    M: int,
    lf: LProvider | None = None,
    include_squares: bool = False,
    square_term: Callable[[EllipticClassGL2], float] | None = None,
) -> list[EllipticTerm]:
    """Per-class terms (1/s) L(1, chi_D) theta(m/(2 p^{k/2})) prod_q Orb, in summation order.

    Square-discriminant classes have no L-value; with ``include_squares`` they
    are listed with ``volume=None`` and contribute ``square_term(cls)`` (0 if not given).
    """
    lf = lf or lvalue_provider()
    out = []
    for c in enumerate_elliptic(p, k, M, include_squares):
        th = _theta_for(theta, c.sign)(c.x)
        orb = padic_orbital_product(c)
        if not c.elliptic:
            t = square_term(c) if square_term else 0.0
            out.append(EllipticTerm(c, None, orb, th, t))
            continue
        if th == 0.0:
            out.append(EllipticTerm(c, None, orb, th, 0.0))
            continue
        vol = volume(c, lf).value
        L = vol / math.sqrt(abs(c.D_E))
        out.append(EllipticTerm(c, vol, orb, th, L * th * float(orb) / c.s_gamma))
    return out


def elliptic_sum_gl2(
    p: int,
    k: int,
    theta,
    M: int,
    lf: LProvider | None = None,
    include_squares: bool = False,
    square_term: Callable[[EllipticClassGL2], float] | None = None,
) -> float:
    """Sum of the elliptic terms; compensated summation in the fixed class order."""
    terms = elliptic_terms(p, k, theta, M, lf, include_squares, square_term)
    return math.fsum(t.term for t in terms)


# ---------------------------------------------------------------------------
# residue-class splitting of the completed m-sum

@dataclass
class SplitReport:
    ell: int
    f: int
    M: int
    direct: float
    grouped: float
    discrepancy: float
    n_terms: int
    n_classes: int
    passed: bool


def _admissible(delta: int, f: int) -> bool:
    ff = f * f
    return delta % ff == 0 and (delta // ff) % 4 in (0, 1)


def residue_split_check(
    ell: int,
    f: int,
    p: int,
    k: int,
    sign: int,
    G: Callable[[int], float],
    M: int,
    theta: ThetaModel | None = None,
    include_squares: bool = True,
    tol: float = 1e-12,
) -> SplitReport:
    """The m-sum of ((m^2 - 4 sign p^k)/f^2 / ell) theta(m/2p^{k/2}) G(m), two ways.

    Directly over |m| <= M, and grouped by residues a mod 4 ell f^2 with the
    Kronecker symbol evaluated at the residue a.  Both sides use fsum.
    """
    if ell < 1 or f < 1:
        raise ValueError("ell, f must be >= 1")
    modulus = 4 * ell * f * f
    if M % modulus:
        raise ValueError(f"M={M} must be a multiple of 4 ell f^2 = {modulus}")
    theta = theta or ThetaModel(lambda x: 1.0)
    pk4 = 4 * sign * p**k
    scale = 2 * p ** (k / 2)

    def keep(delta):
        return include_squares or not is_perfect_square(delta)

    def weight(m):
        return theta(m / scale) * G(m)

    direct_terms = []
    for m in range(-M, M + 1):
        delta = m * m - pk4
        if _admissible(delta, f) and keep(delta):
            direct_terms.append(kronecker(delta // (f * f), ell) * weight(m))

    grouped_terms = []
    n_classes = 0
    for a in range(modulus):
        da = a * a - pk4
        if not _admissible(da, f):
            continue
        n_classes += 1
        symbol = kronecker(da // (f * f), ell)
        first = a - ((a + M) // modulus) * modulus
        inner = [weight(m) for m in range(first, M + 1, modulus) if keep(m * m - pk4)]
        grouped_terms.append(symbol * math.fsum(inner))

    direct = math.fsum(direct_terms)
    grouped = math.fsum(grouped_terms)
    disc = abs(direct - grouped)
    return SplitReport(ell, f, M, direct, grouped, disc, len(direct_terms), n_classes, disc < tol)


# ---------------------------------------------------------------------------
# GL(3)

def kottwitz_gl3(p: int, n: int, variant: str = "unramified", val_beta: int | None = None) -> Fraction:
    """Kottwitz's unit-element orbital integrals on GL(3), transcribed verbatim.

    unramified:  (p^{3n+1}(p+1)(p^2+p+1) - 3p^{2n}(p^2+p+1) + 3) / ((p-1)^2 (p+1))
    ramified:    (p^{3n+1}(p+1)p^{1+v} - p^{2n}(p^2 + (p+1)p^{2v}) + 1) / ((p-1)^2 (p+1))
    with v = val(beta) in {1, 2}.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("n must be >= 1")
    den = (p - 1) ** 2 * (p + 1)
    if variant == "unramified":
        num = p ** (3 * n + 1) * (p + 1) * (p * p + p + 1) - 3 * p ** (2 * n) * (p * p + p + 1) + 3
    elif variant == "ramified":
        if val_beta not in (1, 2):
            raise ValueError("ramified variant needs val_beta in {1, 2}")
        v = val_beta
        num = p ** (3 * n + 1) * (p + 1) * p ** (1 + v) - p ** (2 * n) * (p * p + (p + 1) * p ** (2 * v)) + 1
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return Fraction(num, den)


def gaussian_weight(width: float) -> Callable[[int], float]:
    return lambda m: math.exp(-((m / width) ** 2))
