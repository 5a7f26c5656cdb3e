"""L(1, chi_D) three ways for a handful of discriminants.

The direct sum carries a rigorous tail bound, the class number route is
exact up to rounding, and the AFE route is checked at several X.
"""
from afetrace import l_value_afe, l_value_cnf, l_value_direct
from afetrace.lfunctions import class_data

print(f"{'D':>6} {'direct':>14} {'cnf':>14} {'afe X=1/4':>14} {'afe X=4':>14}  h")
for D in (-3, -4, -23, -163, 5, 8, 13, 97):
    cd = class_data(D)
    direct = l_value_direct(D)
    row = [direct.value, l_value_cnf(cd).value, l_value_afe(D, 1.0, 0.25).value, l_value_afe(D, 1.0, 4.0).value]
    print(f"{D:>6} " + " ".join(f"{v:14.10f}" for v in row) + f"  {cd.h}")
