import math

import mpmath
import pytest

from afetrace.arith import is_fundamental_discriminant, kronecker, primes_up_to
from afetrace.lfunctions import (
    ClassData,
    DivergentLValueError,
    QuadraticCharacter,
    class_data,
    class_number_bf,
    dedekind_ratio_euler,
    euler_correction,
    fundamental_unit,
    l_modified,
    l_value_cnf,
    l_value_direct,
    regulator_bf,
)
from afetrace.polynomials import CharPoly

L5 = 2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5)


def mp_lvalue(D, s=1):
    """L(s, chi_D) via Hurwitz zeta: |D|^{-s} sum_a chi(a) zeta(s, a/|D|)."""
    k = abs(D)
    mpmath.mp.dps = 30
    if s == 1:
        # the principal parts cancel; use the digamma form -1/k sum chi(a) psi(a/k)
        return float(-sum(kronecker(D, a) * mpmath.digamma(mpmath.mpf(a) / k) for a in range(1, k + 1)) / k)
    return float(sum(kronecker(D, a) * mpmath.zeta(s, mpmath.mpf(a) / k) for a in range(1, k + 1)) / mpmath.mpf(k) ** s)


@pytest.mark.parametrize("D,expected", [(-4, math.pi / 4), (5, L5), (-16, math.pi / 4)])
def test_direct_examples(D, expected):
    v, e = l_value_direct(D, 1.0, 10**6)
    assert abs(v - expected) < 1e-5
    assert abs(v - expected) <= e + 1e-13


def test_direct_vs_mpmath():
    for D in (-3, -7, -8, 8, 12, 13, -15, 21, -84, 97, -163, 173):
        v, e = l_value_direct(D, 1.0)
        assert abs(v - mp_lvalue(D)) <= e + 1e-13
    for D, s in ((-4, 2.0), (5, 1.5), (-23, 3.0)):
        v, e = l_value_direct(D, s)
        assert abs(v - mp_lvalue(D, s)) <= e + 1e-13


def test_catalan():
    assert abs(l_value_direct(-4, 2.0).value - 0.915965594177219015) < 1e-14


def test_tail_bound_honest():
    for D in (-4, 5, -23, 28, -199, 197, 61, -300):
        v1, e1 = l_value_direct(D, 1.0, 10**4)
        v2, e2 = l_value_direct(D, 1.0, 2 * 10**4)
        assert abs(v1 - v2) <= e1
        assert abs(v1 - mp_lvalue(D)) <= e1


def test_divergent_rejected():
    with pytest.raises(DivergentLValueError):
        l_value_direct(1, 1.0)
    with pytest.raises(DivergentLValueError):
        l_value_direct(9, 1.0)
    with pytest.raises(DivergentLValueError):
        l_modified(36, 1.0)
    with pytest.raises(ValueError):
        l_value_direct(-4, 0.5)
    with pytest.raises(ValueError):
        QuadraticCharacter(3)


def test_principal_character_above_one():
    # chi_1 = 1 gives zeta(2)
    assert abs(l_value_direct(1, 2.0).value - math.pi**2 / 6) < 1e-12


def test_character_period():
    chi = QuadraticCharacter(-20)
    assert chi.period == 20
    assert [chi(n) for n in range(1, 8)] == [1, 0, 1, 0, 0, 0, 1]
    assert list(chi.table()[:7]) == [1, 0, 1, 0, 0, 0, 1]


@pytest.mark.parametrize("D,h,w", [(-4, 1, 4), (-23, 3, 2), (-3, 1, 6), (-7, 1, 2), (-15, 2, 2), (-47, 5, 2), (-71, 7, 2), (-84, 4, 2), (-163, 1, 2), (-199, 9, 2)])
def test_class_number_bf(D, h, w):
    cd = class_number_bf(D)
    assert (cd.h, cd.w) == (h, w)


def test_class_number_rejects():
    with pytest.raises(ValueError):
        class_number_bf(-16)
    with pytest.raises(ValueError):
        class_number_bf(5)


def pell_brute(D):
    """Smallest (t, u) with t^2 - D u^2 = +-4, by scanning u."""
    u = 1
    while True:
        for target in (-4, 4):
            t2 = D * u * u + target
            if t2 > 0:
                t = math.isqrt(t2)
                if t * t == t2:
                    return t, u
        u += 1


@pytest.mark.parametrize("D,expected", [(5, math.log((1 + math.sqrt(5)) / 2)), (8, math.log(1 + math.sqrt(2))), (13, math.log((3 + math.sqrt(13)) / 2))])
def test_regulator_examples(D, expected):
    assert abs(regulator_bf(D) - expected) < 1e-12


def test_fundamental_unit_vs_pell_scan():
    for D in range(5, 200):
        if not is_fundamental_discriminant(D):
            continue
        t, u = fundamental_unit(D)
        assert abs(t * t - D * u * u) == 4
        bt, bu = pell_brute(D)
        # the smallest u with a solution of norm +-4 gives the fundamental unit
        assert (t, u) == (bt, bu)


def test_regulator_large_units():
    # D = 94*4: fundamental unit 2143295 + 221064 sqrt 94
    assert fundamental_unit(376) == (2 * 2143295, 221064)
    assert abs(regulator_bf(376) - math.log(2143295 + 221064 * math.sqrt(94))) < 1e-9


@pytest.mark.parametrize("cd,expected", [
    (ClassData(-4, 1, 4), math.pi / 4),
    (ClassData(-23, 3, 2), 3 * math.pi / math.sqrt(23)),
    (ClassData(5, 1, 2, math.log((1 + math.sqrt(5)) / 2)), L5),
])
def test_cnf_examples(cd, expected):
    assert abs(l_value_cnf(cd).value - expected) < 1e-14


def test_cnf_value_minus_23():
    assert abs(l_value_cnf(class_data(-23)).value - 1.96520205) < 1e-8


def test_class_data_validation():
    with pytest.raises(ValueError):
        ClassData(-4, 0, 4)
    with pytest.raises(ValueError):
        ClassData(-4, 1, 3)
    with pytest.raises(ValueError):
        ClassData(5, 1, 2, None)


def test_real_class_numbers():
    known = {5: 1, 8: 1, 40: 2, 60: 2, 65: 2, 79 * 4: 3, 229: 3, 145: 4}
    for D, h in known.items():
        assert class_data(D).h == h


def test_three_routes_negative_and_positive():
    for D in list(range(-299, 0)) + list(range(2, 100)):
        if not is_fundamental_discriminant(D):
            continue
        direct = l_value_direct(D, 1.0).value
        cnf = l_value_cnf(class_data(D)).value
        assert abs(direct - cnf) < 1e-5


@pytest.mark.parametrize("delta,expected", [
    (-16, math.pi / 4),
    (-28, math.pi / math.sqrt(7) / 2),
    (45, L5 * 4 / 3),
])
def test_l_modified_examples(delta, expected):
    assert abs(l_modified(delta).value - expected) < 1e-8


def test_euler_factor_identity():
    for D in range(-100, 101):
        if not is_fundamental_discriminant(D):
            continue
        base = l_value_direct(D, 1.0, 10**5).value
        for f in range(1, 13):
            lhs = l_modified(f * f * D, 1.0, 10**5).value
            assert abs(lhs - base * euler_correction(D, f)) < 1e-4


def test_dedekind_examples():
    f1 = CharPoly.from_monic([-1, -3, 0, 1])
    r = dedekind_ratio_euler(f1, 2.0, 2)
    assert abs(r.value - 16 / 21) < 1e-15
    assert r.inert == 1 and r.ramified == []
    f2 = CharPoly.from_monic([1, -2, -1, 1])
    r = dedekind_ratio_euler(f2, 2.0, 3)
    inert = lambda p: 1 / (1 + p**-2 + p**-4)  # noqa: E731
    assert abs(r.value - inert(2) * inert(3)) < 1e-15
    assert dedekind_ratio_euler(f2, 2.0, 1).value == 1.0


def test_dedekind_ramified_reported():
    r = dedekind_ratio_euler(CharPoly.from_monic([1, -2, -1, 1]), 2.0, 50)
    assert r.ramified == [7]
    r = dedekind_ratio_euler(CharPoly.from_monic([-1, -3, 0, 1]), 2.0, 50)
    assert r.ramified == [3]


def test_dedekind_rejects_non_galois():
    with pytest.raises(ValueError):
        dedekind_ratio_euler(CharPoly.from_monic([-2, 0, 0, 1]), 2.0, 10)
    with pytest.raises(ValueError):
        dedekind_ratio_euler(CharPoly((1, 2)), 2.0, 10)


@pytest.mark.parametrize("monic", [[-1, -3, 0, 1], [1, -2, -1, 1]])
def test_dedekind_cauchy(monic):
    f = CharPoly.from_monic(monic)
    P = [125 * 2**j for j in range(7)]
    vals = [dedekind_ratio_euler(f, 2.0, p).value for p in P]
    gaps = [abs(b - a) for a, b in zip(vals, vals[1:])]
    # each local factor moves log P by at most 2.1/p^2, so a doubling from X
    # moves P by at most about 2.1 P / X: a Cauchy envelope halving each step
    envelope = [2.2 * max(vals) / X for X in P[:-1]]
    assert all(g <= e for g, e in zip(gaps, envelope))
    assert gaps[-1] < gaps[0] / 10


def test_dedekind_matches_product_of_two_lvalues():
    # for Q(zeta_7)^+, zeta_E/zeta = |L(s, chi)|^2 for a cubic character chi mod 7
    s = 2.0
    mpmath.mp.dps = 20
    w = mpmath.exp(2j * mpmath.pi / 3)
    chi = {1: 1, 3: w, 2: w**2, 6: 1, 4: w, 5: w**2}  # 3 generates (Z/7)^*: 3^1=3, 3^2=2, 3^3=6
    L = sum(chi[a] * mpmath.zeta(s, mpmath.mpf(a) / 7) for a in range(1, 7)) / 7**s
    target = float(abs(L) ** 2)
    r = dedekind_ratio_euler(CharPoly.from_monic([1, -2, -1, 1]), s, 20000)
    # at the ramified prime 7 the true ratio has local factor 1, as does |L|^2
    assert abs(r.value - target) < 1e-4
