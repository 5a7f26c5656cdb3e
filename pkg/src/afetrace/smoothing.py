"""Numerical probes of f(x) = theta(x) phi(|D(x)|^{-alpha}) near the discriminant locus.

theta is modeled as |D(x)|^{-beta} (optionally times a smooth bump), which is
exactly the singularity class "not worse than |x|^{-beta}"; D is the
discriminant of X^n - x_1 X^{n-1} + ... +- a_n as a polynomial in the free
coefficients.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .polynomials import det_leibniz, poly_derivative, sylvester_matrix


class StepUnderflowError(ValueError):
    """Finite-difference step too small to resolve at the given point."""


class Poly:
    """Sparse multivariate integer polynomial: {exponent tuple: coefficient}."""

    def __init__(self, terms: dict, nvars: int):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def const(cls, c: int, nvars: int) -> "Poly":
        return cls({(0,) * nvars: c}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars)

    def _lift(self, other):
        return other if isinstance(other, Poly) else Poly.const(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = defaultdict(int, self.terms)
        for e, c in other.terms.items():
            out[e] += c
        return Poly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        out = defaultdict(int)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[tuple(a + b for a, b in zip(e1, e2))] += c1 * c2
        return Poly(out, self.nvars)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        return self.terms == Poly.const(other, self.nvars).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(out, self.nvars)

    def __call__(self, *x):
        x = [np.asarray(v, dtype=float) for v in x]
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for v, k in zip(x, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    def __repr__(self):
        return f"Poly({dict(sorted(self.terms.items(), reverse=True))})"


@dataclass(frozen=True)
class DiscMap:
    """x -> disc(X^n - x_1 X^{n-1} + ... + (-1)^n a_n) with exact polynomial coefficients."""

    n: int
    a_n: int
    poly: Poly
    grad: tuple

    def __call__(self, *x):
        return self.poly(*x)

    def gradient(self, *x) -> np.ndarray:
        return np.array([g(*x) for g in self.grad])

    @property
    def nvars(self) -> int:
        return self.n - 1


def disc_map_gl_n(a_n: int, n: int) -> DiscMap:
    if n not in (2, 3):
        raise ValueError(f"discriminant maps implemented for n = 2, 3 only, got {n}")
    nv = n - 1
    # monic coefficients, lowest degree first: X^n - x1 X^{n-1} + x2 X^{n-2} ... + (-1)^n a_n
    coeffs = [None] * (n + 1)
    coeffs[n] = Poly.const(1, nv)
    for i in range(1, n):
        coeffs[n - i] = Poly.var(i - 1, nv) * ((-1) ** i)
    coeffs[0] = Poly.const((-1) ** n * a_n, nv)
    deriv = poly_derivative(coeffs)
    res = det_leibniz(sylvester_matrix(coeffs, deriv))
    disc = res * ((-1) ** (n * (n - 1) // 2))
    return DiscMap(n, a_n, disc, tuple(disc.diff(i) for i in range(nv)))


# ---------------------------------------------------------------------------
# Schwartz cutoffs

def _phi_gaussian(y):
    return np.exp(-np.square(y))


def _phi_kernel(tag: str) -> Callable:
    from .gamma_afe import GammaShape, cutoff_V

    shape = GammaShape.odd_quadratic()
    s = 1.0 if tag == "V1" else 0.0

    def phi(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros(y.shape)
        # V decays like exp(-pi y^2): beyond y = 12 it is below 1e-190
        live = y < 12
        if np.any(live):
            v, e = cutoff_V(shape, s, y[live])
            # values inside their own quadrature error are unresolved noise, not signal
            out[live] = np.where(np.abs(v) > e, v, 0.0)
        return out

    return phi


def finite_order_phi(order: float) -> Callable:
    """(1 + y^2)^{-order/2}: decays exactly like y^{-order}, so it is only order-M Schwartz."""
    return lambda y: (1.0 + np.square(y)) ** (-order / 2)


@dataclass
class SmoothProbeSpec:
    disc_map: DiscMap
    beta: float
    alpha: float
    phi: str | Callable = "gaussian"
    decay_order: float = math.inf
    bump_radius: float | None = None
    bump_centre: Sequence[float] | None = None
    distances: Sequence[float] = field(default_factory=lambda: [10.0**-k for k in range(1, 7)])
    steps: Sequence[float] = field(default_factory=lambda: [10.0**-k for k in range(2, 6)])

    def __post_init__(self):
        if self.beta < 0 or self.alpha <= 0:
            raise ValueError("need beta >= 0 and alpha > 0")
        if isinstance(self.phi, str):
            if self.phi == "gaussian":
                self._phi = _phi_gaussian
            elif self.phi in ("V1", "V0"):
                self._phi = _phi_kernel(self.phi)
            else:
                raise ValueError(f"unknown cutoff {self.phi!r}")
        else:
            self._phi = self.phi

    @property
    def margin(self) -> float:
        """M alpha - 1 - beta; positive means the smoothing argument applies."""
        return self.decay_order * self.alpha - 1 - self.beta

    @property
    def condition_holds(self) -> bool:
        return self.margin > 0

    def theta(self, x: np.ndarray, d: np.ndarray) -> np.ndarray:
        out = np.abs(d) ** (-self.beta)
        if self.bump_radius is not None:
            centre = np.asarray(self.bump_centre if self.bump_centre is not None else np.zeros(x.shape[-1]))
            r2 = np.sum((x - centre) ** 2, axis=-1) / self.bump_radius**2
            out = out * np.where(r2 < 1, np.exp(1 - 1 / np.where(r2 < 1, 1 - r2, 1.0)), 0.0)
        return out

    def f(self, x) -> np.ndarray:
        """theta(x) phi(|D(x)|^{-alpha}), set to 0 on the zero locus of D."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        d = np.asarray(self.disc_map(*x.T), dtype=float)
        out = np.zeros(d.shape)
        nz = d != 0
        if np.any(nz):
            dn = d[nz]
            out[nz] = self.theta(x[nz], dn) * self._phi(np.abs(dn) ** (-self.alpha))
        return out


def _directions(nvars: int) -> np.ndarray:
    if nvars == 1:
        return np.array([[1.0], [-1.0]])
    dirs = [np.eye(nvars)[i] * sgn for i in range(nvars) for sgn in (1, -1)]
    for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        dirs.append(np.array(signs, dtype=float) / math.sqrt(2))
    dirs.append(np.array([2.0, 1.0]) / math.sqrt(5))
    return np.array(dirs)


def _as_point(spec: SmoothProbeSpec, point) -> np.ndarray:
    a = np.atleast_1d(np.asarray(point, dtype=float))
    if a.shape != (spec.disc_map.nvars,):
        raise ValueError(f"point must have {spec.disc_map.nvars} coordinates")
    return a


@dataclass
class ValueDecayReport:
    point: tuple
    distances: list[float]
    max_abs: list[float]
    monotone: bool
    finest: float
    passed: bool


def probe_value_decay(spec: SmoothProbeSpec, singular_point, threshold: float = 1e-8) -> ValueDecayReport:
    """max over rays of |f(a + h e)| for shrinking h; must decrease and end below threshold."""
    a = _as_point(spec, singular_point)
    if spec.disc_map(*a) != 0:
        raise ValueError(f"{tuple(a)} is not on the discriminant locus")
    hs = sorted(spec.distances, reverse=True)
    dirs = _directions(len(a))
    maxima = []
    for h in hs:
        maxima.append(float(np.max(np.abs(spec.f(a + h * dirs)))))
    monotone = all(later <= earlier * (1 + 1e-9) + 1e-300 for earlier, later in zip(maxima, maxima[1:]))
    finest = maxima[-1]
    return ValueDecayReport(tuple(a), hs, maxima, monotone, finest, monotone and finest < threshold)


@dataclass
class DerivativeReport:
    point: tuple
    order: int
    steps: list[float]
    quotients: np.ndarray
    empirical_order: float
    finest: float
    passed: bool


def _check_step(a: np.ndarray, h: float) -> None:
    scale = max(1.0, float(np.max(np.abs(a))))
    if h <= 1e3 * np.finfo(float).eps * scale or np.any(a + h == a):
        raise StepUnderflowError(f"step {h:g} is at machine precision for the point {tuple(a)}")


def _difference_quotients(spec: SmoothProbeSpec, a: np.ndarray, h: float, order: int) -> np.ndarray:
    """Finite-difference quotients at a, with f(a) taken as 0.

    Order 1 returns the forward, backward and central quotients per
    coordinate: a central quotient alone cancels singularities symmetric in h.
    Order 2 returns the second differences per pair of coordinates.
    """
    _check_step(a, h)
    nv = len(a)
    E = np.eye(nv) * h
    fa = 0.0 if spec.disc_map(*a) == 0 else float(spec.f(a)[0])
    if order == 1:
        fp = spec.f(a + E)
        fm = spec.f(a - E)
        return np.concatenate([(fp - fa) / h, (fa - fm) / h, (fp - fm) / (2 * h)])
    if order == 2:
        out = []
        fp = spec.f(a + E)
        fm = spec.f(a - E)
        out.extend((fp - 2 * fa + fm) / h**2)
        for i in range(nv):
            for j in range(i + 1, nv):
                pts = np.array([a + E[i] + E[j], a + E[i] - E[j], a - E[i] + E[j], a - E[i] - E[j]])
                v = spec.f(pts)
                out.append((v[0] - v[1] - v[2] + v[3]) / (4 * h * h))
        # one-sided second differences
        out.extend((spec.f(a + 2 * E) - 2 * fp + fa) / h**2)
        out.extend((fa - 2 * fm + spec.f(a - 2 * E)) / h**2)
        return np.array(out)
    raise ValueError("order must be 1 or 2")


def probe_derivatives(
    spec: SmoothProbeSpec, singular_point, order: int = 1, threshold: float = 1e-6
) -> DerivativeReport:
    """Difference quotients at a point of the locus, for the steps in the spec.

    Passes when the largest quotient at the finest step is below threshold
    and the quotients do not grow as the step shrinks.  The empirical order is
    the log-log slope of the largest quotient against h (inf when it vanishes).
    """
    a = _as_point(spec, singular_point)
    steps = sorted(spec.steps, reverse=True)
    q = np.array([_difference_quotients(spec, a, h, order) for h in steps])
    worst = np.max(np.abs(q), axis=1)
    positive = worst > 0
    if np.sum(positive) >= 2:
        slope = np.polyfit(np.log(np.asarray(steps)[positive]), np.log(worst[positive]), 1)[0]
    else:
        slope = math.inf
    finest = float(worst[-1])
    shrinking = all(later <= earlier * (1 + 1e-9) + 1e-300 for earlier, later in zip(worst, worst[1:]))
    return DerivativeReport(tuple(a), order, steps, q, float(slope), finest, finest < threshold and shrinking)


def richardson_gradient(spec: SmoothProbeSpec, point, h: float = 1e-3) -> np.ndarray:
    """Central differences with one Richardson step, for points off the locus."""
    a = _as_point(spec, point)
    _check_step(a, h)
    E = np.eye(len(a))

    def central(step):
        return (spec.f(a + step * E) - spec.f(a - step * E)) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def bound_constant(spec: SmoothProbeSpec, points: np.ndarray) -> float:
    """Smallest C with |f| <= C min(1, |D|^{M alpha - beta}) on the given points."""
    x = np.atleast_2d(points)
    d = np.abs(np.asarray(spec.disc_map(*x.T), dtype=float))
    fx = np.abs(spec.f(x))
    expo = spec.decay_order * spec.alpha - spec.beta
    with np.errstate(divide="ignore"):
        ref = np.minimum(1.0, d**expo)
    mask = ref > 0
    return float(np.max(fx[mask] / ref[mask])) if np.any(mask) else 0.0
