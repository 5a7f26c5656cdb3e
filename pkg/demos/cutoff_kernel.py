"""The cutoff V_1(y) for the odd and even quadratic gamma shapes.

For the odd shape V_1(y) = exp(-pi y^2); for the even shape it is
erfc(sqrt(pi) y).  Both are computed here from the contour integral alone.
"""
import numpy as np
from scipy.special import erfc

from afetrace import GammaShape, cutoff_V

ys = np.array([1e-3, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0])
odd, err_odd = cutoff_V(GammaShape.odd_quadratic(), 1.0, ys)
even, err_even = cutoff_V(GammaShape.even_quadratic(), 1.0, ys)
print(f"{'y':>7} {'V odd':>12} {'exp(-pi y^2)':>13} {'V even':>12} {'erfc':>12}  est. error")
for y, a, b, ea, eb in zip(ys, odd, even, err_odd, err_even):
    print(f"{y:7.3f} {a:12.4e} {np.exp(-np.pi * y * y):13.4e} {b:12.4e} {erfc(np.sqrt(np.pi) * y):12.4e}  {max(ea, eb):.1e}")
