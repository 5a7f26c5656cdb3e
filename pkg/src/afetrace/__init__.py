"""Numerical companions to the elliptic terms of the trace formula.

Quadratic L-values by three routes, the approximate functional equation with
contour-integral cutoffs, GL(2)/GL(3) p-adic orbital products, and finite
difference probes of the smoothing mechanism near the discriminant locus.
"""

__version__ = "0.1.0"

from .arith import DiscriminantDecomposition, decompose_discriminant, kronecker
from .elliptic import EllipticClassGL2, ThetaModel, kottwitz_gl3, padic_orbital_product, verify_lfun_sum
from .gamma_afe import AFEConfig, GammaShape, afe_evaluate, cutoff_V, gamma_complex, l_value_afe
from .lfunctions import ClassData, Estimate, QuadraticCharacter, l_value_cnf, l_value_direct
from .polynomials import CharPoly, FactorizationType, discriminant, factor_type_mod_p
from .smoothing import SmoothProbeSpec, disc_map_gl_n, probe_derivatives, probe_value_decay

__all__ = [
    "AFEConfig",
    "CharPoly",
    "ClassData",
    "DiscriminantDecomposition",
    "EllipticClassGL2",
    "Estimate",
    "FactorizationType",
    "GammaShape",
    "QuadraticCharacter",
    "SmoothProbeSpec",
    "ThetaModel",
    "afe_evaluate",
    "cutoff_V",
    "decompose_discriminant",
    "disc_map_gl_n",
    "discriminant",
    "factor_type_mod_p",
    "gamma_complex",
    "kottwitz_gl3",
    "kronecker",
    "l_value_afe",
    "l_value_cnf",
    "l_value_direct",
    "padic_orbital_product",
    "probe_derivatives",
    "probe_value_decay",
    "verify_lfun_sum",
]
