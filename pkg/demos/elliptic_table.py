"""Elliptic terms of the GL(2) trace formula at p^k = 4.

Each class gamma with trace m and determinant +-4 contributes
theta(x) * volume * (p-adic orbital product); the volume is sqrt|D_E| L(1, chi_D).
"""
import math

from afetrace.elliptic import ThetaModel, elliptic_terms, verify_lfun_sum

terms = elliptic_terms(2, 2, ThetaModel.bump(1.0), 6)
print(f"{'m':>3} {'sign':>4} {'delta':>6} {'s':>2} {'D_E':>5} {'volume':>10} {'orb':>4} {'term':>10}")
for t in terms:
    c = t.cls
    vol = "" if t.volume is None else f"{t.volume:10.6f}"
    print(f"{c.m:>3} {c.sign:>4} {c.delta:>6} {c.s_gamma:>2} {c.D_E:>5} {vol:>10} {str(t.padic):>4} {t.term:10.6f}")
print("total:", math.fsum(t.term for t in terms))

# the class m = 0, det 4 has delta = -16 and both sides of the L-function sum equal 3 pi / 8
rep = verify_lfun_sum(terms[[t.cls.m for t in terms].index(0)].cls)
print(f"delta = {rep.delta}: lhs {rep.lhs:.8f}  rhs {rep.rhs:.8f}  3pi/8 {3 * math.pi / 8:.8f}")
