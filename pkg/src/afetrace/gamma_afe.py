"""Gamma factors, the cutoff functions V_s and the approximate functional equation.

The cutoff integrals

    V_s(y) = 1/(2 pi i) int_{(sigma)} y^{-u} G(u) gamma(s+u)/gamma(s) du/u

are evaluated on a fixed composite Gauss-Legendre rule along the vertical
line, precomputed once per (shape, shift, abscissa, height) so that many
values of y reduce to one matrix-vector product.  G defaults to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .arith import is_fundamental_discriminant
from .lfunctions import Estimate, QuadraticCharacter

# Lanczos approximation, g = 7, nine terms
LANCZOS_G = 7.0
LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)

PANEL_WIDTH = 0.5
GL_FINE = 20
GL_COARSE = 12
DEFAULT_TOL = 1e-12


class GammaPoleError(ValueError):
    """Gamma evaluated at (or a gamma factor hits) a pole."""


class QuadratureError(ArithmeticError):
    """Contour quadrature did not reach the requested accuracy."""


# ---------------------------------------------------------------------------
# complex gamma

def _loggamma_right(z: np.ndarray) -> np.ndarray:
    z = z - 1.0
    x = np.full(z.shape, LANCZOS_COEF[0], dtype=complex)
    for i in range(1, len(LANCZOS_COEF)):
        x = x + LANCZOS_COEF[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _check_poles(z: np.ndarray) -> None:
    near = np.round(z.real)
    hit = (z.imag == 0) & (z.real == near) & (near <= 0)
    if np.any(hit):
        raise GammaPoleError(f"Gamma has a pole at {z[hit][0].real:g}")


def loggamma(z):
    """log Gamma(z) (some branch) for complex z; reflection below Re z = 1/2."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    _check_poles(z)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.5
    out[right] = _loggamma_right(z[right])
    left = ~right
    if np.any(left):
        zl = z[left]
        k = np.round(zl.real)
        # sin(pi z) = (-1)^k sin(pi (z - k)) keeps full relative accuracy near the poles
        sin_pi = np.where(k % 2 == 0, 1.0, -1.0) * np.sin(np.pi * (zl - k))
        out[left] = math.log(math.pi) - np.log(sin_pi) - _loggamma_right(1.0 - zl)
    return out[0] if scalar else out


def gamma_complex(z):
    """Gamma(z) via the Lanczos approximation (reflection formula for Re z < 1/2)."""
    return np.exp(loggamma(z))


def stirling_gamma(sigma: float, t: float) -> float:
    """Leading Stirling approximation to |Gamma(sigma + i t)|."""
    t = abs(t)
    if t < 1:
        raise ValueError("Stirling form needs |t| >= 1")
    return math.sqrt(2 * math.pi) * t ** (sigma - 0.5) * math.exp(-math.pi * t / 2)


# ---------------------------------------------------------------------------
# gamma factors

@dataclass(frozen=True)
class GammaShape:
    """Archimedean data (d, d+, d-, r1, r2) of an Artin L-function."""

    d: int
    d_plus: int
    d_minus: int
    r1: int
    r2: int

    def __post_init__(self):
        if self.d < 1 or min(self.d_plus, self.d_minus, self.r1, self.r2) < 0:
            raise ValueError(f"invalid gamma shape {self}")
        if self.a + self.b == 0:
            raise ValueError("gamma shape without any Gamma factor")

    @classmethod
    def odd_quadratic(cls) -> "GammaShape":
        return cls(1, 0, 1, 1, 0)

    @classmethod
    def even_quadratic(cls) -> "GammaShape":
        return cls(1, 1, 0, 1, 0)

    @classmethod
    def for_discriminant(cls, D: int) -> "GammaShape":
        return cls.odd_quadratic() if D < 0 else cls.even_quadratic()

    @property
    def a(self) -> int:
        return self.d_plus + self.d * self.r2

    @property
    def b(self) -> int:
        return self.d_minus + self.d * self.r2

    @property
    def places_consistent(self) -> bool:
        """d+ + d- = d r1, i.e. the multiplicities come from r1 real places."""
        return self.d_plus + self.d_minus == self.d * self.r1

    @property
    def pi_exponent(self) -> float:
        """gamma(s) carries pi^{-pi_exponent * s}."""
        return self.d * (self.r1 + self.r2) / 2

    def pole_free_from(self, s: float) -> float:
        """Abscissa of the right-most pole of u -> gamma(s + u)."""
        return -s if self.a > 0 else -s - 1


def log_gamma_factor(shape: GammaShape, s):
    s = np.asarray(s, dtype=complex)
    out = -shape.pi_exponent * s * math.log(math.pi)
    if shape.a:
        out = out + shape.a * loggamma(s / 2)
    if shape.b:
        out = out + shape.b * loggamma((s + 1) / 2)
    return out


def gamma_factor(shape: GammaShape, s):
    """pi^{-d s (r1+r2)/2} Gamma(s/2)^a Gamma((s+1)/2)^b; GammaPoleError at poles."""
    value = np.exp(log_gamma_factor(shape, s))
    return complex(value) if np.ndim(value) == 0 else value


# ---------------------------------------------------------------------------
# vertical-line kernels

@dataclass(frozen=True)
class AFEConfig:
    q: int
    X: float = 1.0
    sigma0: float = 3.0
    T: float | None = None
    N_max: int | None = None
    eps_rho: complex = 1.0
    tol: float = 1e-10
    G: Callable | None = None

    def __post_init__(self):
        if self.q < 1 or self.X <= 0 or self.sigma0 <= 0:
            raise ValueError(f"invalid AFE configuration {self}")
        if abs(abs(self.eps_rho) - 1) > 1e-12:
            raise ValueError("root number must have modulus 1")
        if self.G is not None and abs(self.G(0.0) - 1) > 1e-12:
            raise ValueError("G must satisfy G(0) = 1")


@lru_cache(maxsize=None)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _panel_rule(T: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss_legendre(n)
    edges = np.arange(0.0, T + PANEL_WIDTH / 2, PANEL_WIDTH)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _envelope_tail(shape: GammaShape, shift: float, sigma: float, T: float, y) -> np.ndarray:
    """Stirling-based bound for the part of the integral beyond |Im u| = T."""
    x = shift + sigma
    half = T / 2
    mag = math.pi ** (-shape.pi_exponent * x)
    slack = 1 + 4 / half
    if shape.a:
        mag *= (stirling_gamma(x / 2, half) * slack) ** shape.a
    if shape.b:
        mag *= (stirling_gamma((x + 1) / 2, half) * slack) ** shape.b
    mag /= math.pi * math.hypot(sigma, T)
    rate = (shape.a + shape.b) * math.pi / 4
    growth = max((shape.a * (x - 1) + shape.b * x) / 2 - 1, 0.0)
    denom = rate - growth / T
    if denom <= 0:
        return np.full(np.shape(y), np.inf)
    return np.asarray(y, dtype=float) ** (-sigma) * mag / denom


class MellinKernel:
    """1/(2 pi i) int_{(sigma)} y^{-u} G(u) gamma(shift + u) du/u, truncated at |Im u| = T.

    The integrand is conjugate symmetric, so only [0, T] is integrated.
    """

    def __init__(self, shape: GammaShape, shift: float, sigma: float, T: float, G=None):
        self.shape = shape
        self.shift = float(shift)
        self.sigma = float(sigma)
        self.T = float(T)
        if self.sigma <= shape.pole_free_from(self.shift) or self.sigma == 0:
            raise ValueError(f"contour Re u = {sigma} passes a pole")
        self._fine = self._rule(GL_FINE, G)
        self._coarse = self._rule(GL_COARSE, G)

    def _rule(self, n, G):
        t, w = _panel_rule(self.T, n)
        u = self.sigma + 1j * t
        g = np.exp(log_gamma_factor(self.shape, self.shift + u)) / u
        if G is not None:
            g = g * np.array([G(ui) for ui in u])
        return u, w * g / math.pi

    def _apply(self, rule, log_y):
        u, g = rule
        return (np.exp(-np.outer(log_y, u)) @ g).real

    def envelope_tail(self, y) -> np.ndarray:
        return _envelope_tail(self.shape, self.shift, self.sigma, self.T, y)

    def __call__(self, y) -> tuple[np.ndarray, np.ndarray]:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        log_y = np.log(y)
        fine = self._apply(self._fine, log_y)
        coarse = self._apply(self._coarse, log_y)
        return fine, np.abs(fine - coarse) + self.envelope_tail(y)

    def abs_integral(self) -> float:
        """(1/2pi) int |gamma(shift+u) G(u) / u| dt over the whole line (for decay bounds)."""
        u, g = self._fine
        return float(np.sum(np.abs(g))) + float(self.envelope_tail(1.0))


@lru_cache(maxsize=256)
def _kernel(shape: GammaShape, shift: float, sigma: float, T: float, G=None) -> MellinKernel:
    return MellinKernel(shape, shift, sigma, T, G)


def _choose_T(shape, shift, sigma, y_extreme, tol, G=None) -> float:
    T = 10.0
    while T < 400:
        if float(_envelope_tail(shape, shift, sigma, T, y_extreme)) < tol:
            return T
        T += 5.0
    raise QuadratureError(f"no truncation height below 400 reaches tolerance {tol}")


def mellin_integral(shape, shift, y, sigma, T=None, tol=DEFAULT_TOL, G=None):
    """Values and error estimates of the vertical-line integral for an array of y."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    if T is None:
        y_ext = float(np.min(y)) if sigma > 0 else float(np.max(y))
        T = _choose_T(shape, shift, sigma, y_ext, tol, G)
    return _kernel(shape, float(shift), float(sigma), float(T), G)(y)


def _left_abscissa(shape: GammaShape, s: float) -> float | None:
    pole = shape.pole_free_from(s)
    return pole / 2 if pole < 0 else None


def cutoff_V(shape: GammaShape, s: float, y, cfg: AFEConfig | None = None) -> Estimate:
    """V_s(y) with an error estimate (quadrature difference plus truncation).

    For y >= 1 the integral is taken at Re u = cfg.sigma0.  For y < 1 the
    contour moves left past the residue 1 at u = 0, to halfway towards the
    first pole of gamma(s + u); this avoids the y^{-sigma0} amplification.
    """
    cfg = cfg or AFEConfig(q=1)
    log_gs = log_gamma_factor(shape, s)
    inv_gs = np.exp(-log_gs).real
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    values = np.empty(y_arr.shape)
    errors = np.empty(y_arr.shape)
    left = _left_abscissa(shape, s)
    small = (y_arr < 1) if left is not None else np.zeros(y_arr.shape, bool)
    if np.any(~small):
        v, e = mellin_integral(shape, s, y_arr[~small], cfg.sigma0, cfg.T, cfg.tol, cfg.G)
        values[~small], errors[~small] = v * inv_gs, e * abs(inv_gs)
    if np.any(small):
        v, e = mellin_integral(shape, s, y_arr[small], left, cfg.T, cfg.tol, cfg.G)
        values[small], errors[small] = 1.0 + v * inv_gs, e * abs(inv_gs)
    if np.ndim(y) == 0:
        return Estimate(float(values[0]), float(errors[0]))
    return Estimate(values, errors)


def second_kernel(shape: GammaShape, s: float, y, cfg: AFEConfig | None = None) -> Estimate:
    """K(y) = 1/(2 pi i) int y^{-u} G(u) gamma(1-s+u) du/u at Re u = cfg.sigma0.

    eps(s) V_{1-s}(y) = eps(rho) q^{1/2-s} K(y) / gamma(s); no division by
    gamma(1-s), so this stays finite where gamma(1-s) has a pole.
    """
    cfg = cfg or AFEConfig(q=1)
    v, e = mellin_integral(shape, 1.0 - s, y, cfg.sigma0, cfg.T, cfg.tol, cfg.G)
    if np.ndim(y) == 0:
        return Estimate(float(v[0]), float(e[0]))
    return Estimate(v, e)


def decay_constant(shape: GammaShape, shift: float, m: float, normalizer: float = 1.0) -> float:
    """C with |int_{(sigma0)} y^{-u} gamma(shift+u) du/u / (2 pi i)| <= C y^{-m}, all y > 0.

    Obtained by moving the contour to Re u = m (no poles in between).
    """
    T = _choose_T(shape, shift, m, 1.0, 1e-14)
    return _kernel(shape, float(shift), float(m), T).abs_integral() / abs(normalizer)


# ---------------------------------------------------------------------------
# decay theorem

class DecayReport(NamedTuple):
    m: float
    sup: float
    argsup: float
    bound: float
    values: np.ndarray
    tail_decreasing: bool
    passed: bool


def decay_check(shape: GammaShape, s: float, m: float, y_grid, cfg: AFEConfig | None = None) -> DecayReport:
    """sup over the grid of |V_s(y)| y^m, compared with the contour-shift constant C_m."""
    y = np.asarray(sorted(set(float(v) for v in y_grid)))
    if y[0] < 1 or y[-1] > 100:
        raise ValueError("y_grid must lie in [1, 100]")
    vals, errs = cutoff_V(shape, s, y, cfg)
    scaled = np.abs(vals) * y**m
    slack = errs * y**m
    i = int(np.argmax(scaled))
    gs = abs(gamma_factor(shape, s))
    C = decay_constant(shape, s, m, gs)
    half = len(y) // 2
    tail = scaled[half:]
    tail_slack = slack[half:]
    decreasing = bool(np.all(tail[1:] <= tail[:-1] + tail_slack[1:] + tail_slack[:-1] + 1e-300))
    finite = bool(np.all(np.isfinite(scaled)))
    passed = finite and bool(np.all(scaled <= C + slack)) and decreasing
    return DecayReport(m, float(scaled[i]), float(y[i]), C, vals, decreasing, passed)


# ---------------------------------------------------------------------------
# the approximate functional equation

def kronecker_coeffs(D: int) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized n -> kronecker(D, n) for n >= 1 via the period table."""
    tab = QuadraticCharacter(D).table()
    k = len(tab)
    return lambda n: tab[(np.asarray(n) - 1) % k]


def _series_length(C: float, scale: float, s_exp: float, m: float, tol: float) -> int:
    """n1 with C scale^m sum_{n > n1} n^{-(s_exp + m)} <= tol, by the integral test."""
    alpha = s_exp + m
    if alpha <= 1:
        raise ValueError("decay order too small for a convergent tail")
    return max(1, math.ceil((C * scale**m / ((alpha - 1) * tol)) ** (1 / (alpha - 1))))


def _truncation(shape, shift, normalizer, scale, s_exp, tol, cap):
    """Pick the decay order m minimizing the number of terms; return (n1, tail bound)."""
    best = None
    for m in (4.0, 8.0, 12.0, 16.0):
        C = decay_constant(shape, shift, m, normalizer)
        n1 = _series_length(C, scale, s_exp, m, tol)
        if best is None or n1 < best[0]:
            best = (n1, C, m)
    n1, C, m = best
    if cap is not None and n1 > cap:
        n1 = cap
    alpha = s_exp + m
    return n1, C * scale**m * n1 ** (1 - alpha) / (alpha - 1)


def _combine(total: complex, err: float):
    if abs(total.imag) <= 1e-14 * max(1.0, abs(total)):
        return Estimate(float(total.real), float(err))
    return Estimate(total, float(err))


def afe_first_term(shape, s, coeffs, cfg: AFEConfig) -> Estimate:
    Y = cfg.X * math.sqrt(cfg.q)
    gs = abs(gamma_factor(shape, s))
    n1, tail = _truncation(shape, s, gs, Y, s, cfg.tol / 10, cfg.N_max)
    n = np.arange(1, n1 + 1)
    lam = np.asarray(coeffs(n))
    v, e = cutoff_V(shape, s, n / Y, cfg)
    w = n ** (-float(s))
    total = complex(np.sum(lam * w * v))
    err = float(np.sum(np.abs(lam) * w * e)) + tail
    return _combine(total, err)


def afe_second_term(shape: GammaShape, s: float, coeffs, cfg: AFEConfig) -> Estimate:
    """eps(rho) q^{1/2-s} / gamma(s) * sum conj(lam(n)) n^{s-1} K(n X / sqrt q)."""
    gs = gamma_factor(shape, s)
    pref = cfg.eps_rho * cfg.q ** (0.5 - s) / gs
    scale = math.sqrt(cfg.q) / cfg.X
    n1, tail = _truncation(shape, 1.0 - s, 1.0, scale, 1.0 - s, cfg.tol / 10 / abs(pref), cfg.N_max)
    n = np.arange(1, n1 + 1)
    lam = np.conj(np.asarray(coeffs(n)))
    if not np.any(lam):
        return Estimate(0.0, 0.0)
    k, e = second_kernel(shape, s, n / scale, cfg)
    w = n ** (float(s) - 1.0)
    total = complex(pref * np.sum(lam * w * k))
    err = abs(pref) * (float(np.sum(np.abs(lam) * w * e)) + tail)
    return _combine(total, err)


def root_factor(shape: GammaShape, s: float, cfg: AFEConfig) -> complex:
    """eps(s, rho) = eps(rho) q^{1/2-s} gamma(1-s)/gamma(s); GammaPoleError if gamma(1-s) poles."""
    return cfg.eps_rho * cfg.q ** (0.5 - s) * gamma_factor(shape, 1 - s) / gamma_factor(shape, s)


def afe_second_term_naive(shape: GammaShape, s: float, coeffs, cfg: AFEConfig) -> Estimate:
    """The same term as eps(s, rho) sum conj(lam(n)) n^{s-1} V_{1-s}(n X/sqrt q).

    Only for shapes where gamma(1-s) is finite; kept as a cross-check.
    """
    eps_s = root_factor(shape, s, cfg)
    scale = math.sqrt(cfg.q) / cfg.X
    g1s = abs(gamma_factor(shape, 1 - s))
    n1, tail = _truncation(shape, 1.0 - s, g1s, scale, 1.0 - s, cfg.tol / 10 / abs(eps_s), cfg.N_max)
    n = np.arange(1, n1 + 1)
    lam = np.conj(np.asarray(coeffs(n)))
    v, e = cutoff_V(shape, 1.0 - s, n / scale, cfg)
    w = n ** (float(s) - 1.0)
    total = complex(eps_s * np.sum(lam * w * v))
    err = abs(eps_s) * (float(np.sum(np.abs(lam) * w * e)) + tail)
    return _combine(total, err)


def afe_evaluate(shape: GammaShape, s: float, coeffs, cfg: AFEConfig) -> Estimate:
    """L(s) as the sum of the two smoothed series of the approximate functional equation."""
    if not 0 <= s <= 1:
        raise ValueError("the approximate functional equation is used for real s in [0, 1]")
    first = afe_first_term(shape, s, coeffs, cfg)
    second = afe_second_term(shape, s, coeffs, cfg)
    return _combine(complex(first.value + second.value), first.error + second.error)


def l_value_afe(D: int, s: float = 1.0, X: float = 1.0, tol: float = 1e-10) -> Estimate:
    """L(s, chi_D) for a fundamental discriminant D != 1 (conductor |D|, root number +1)."""
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    cfg = AFEConfig(q=abs(D), X=X, tol=tol)
    return afe_evaluate(GammaShape.for_discriminant(D), s, kronecker_coeffs(D), cfg)
