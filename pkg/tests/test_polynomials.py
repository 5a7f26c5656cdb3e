import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from afetrace.arith import is_perfect_square, primes_up_to
from afetrace.polynomials import (
    CharPoly,
    det_bareiss,
    det_leibniz,
    discriminant,
    factor_type_mod_p,
    is_elliptic,
    poly_eval,
    roots_mod_p,
)


def cubic(a, b):
    """X^3 + a X + b."""
    return CharPoly.from_monic([b, a, 0, 1])


def test_charpoly_validation():
    with pytest.raises(ValueError):
        CharPoly((3,))
    with pytest.raises(ValueError):
        CharPoly((1, 0))
    p = CharPoly((1, 2))
    assert p.monic() == [2, -1, 1]
    assert p(0) == 2
    assert CharPoly.from_monic(p.monic()) == p


def test_discriminant_examples():
    assert discriminant(CharPoly((1, 2))) == -7
    assert discriminant(cubic(-3, -1)) == 81
    assert discriminant(CharPoly((3, 3, 1))) == 0


def test_discriminant_quadratic_closed_form():
    for m in range(-50, 51):
        for c in range(-50, 51):
            if c == 0:
                continue
            assert discriminant(CharPoly((m, c))) == m * m - 4 * c


def test_discriminant_depressed_cubic_closed_form():
    for a in range(-30, 31):
        for b in range(-30, 31):
            if b == 0:
                continue
            assert discriminant(cubic(a, b)) == -4 * a**3 - 27 * b * b


def test_discriminant_matches_root_product():
    # prod_{i<j} (r_i - r_j)^2 from numerical roots
    rng = random.Random(3)
    for _ in range(50):
        coeffs = (rng.randint(-9, 9), rng.randint(-9, 9), rng.choice([-5, -3, -1, 1, 2, 7]))
        f = CharPoly(coeffs)
        roots = np.roots(f.monic()[::-1])
        prod = np.prod([(x - y) ** 2 for x, y in itertools.combinations(roots, 2)])
        assert abs(prod.real - discriminant(f)) < 1e-6 * max(1, abs(discriminant(f)))


def test_quartic_discriminant():
    # X^4 + 1 has discriminant 256
    f = CharPoly.from_monic([1, 0, 0, 0, 1])
    assert discriminant(f) == 256


def test_elliptic_quadratic_disc_mod_4():
    for m in range(-100, 101):
        for c in range(-100, 101):
            if c == 0:
                continue
            f = CharPoly((m, c))
            if is_elliptic(f):
                assert discriminant(f) % 4 in (0, 1)


def test_is_elliptic_examples():
    assert is_elliptic(CharPoly((1, 2)))
    assert not is_elliptic(CharPoly((1, -2)))
    assert is_elliptic(cubic(-3, -1))
    assert not is_elliptic(CharPoly((3, 3, 1)))
    with pytest.raises(ValueError):
        is_elliptic(CharPoly.from_monic([1, 0, 0, 0, 1]))


def test_bareiss_vs_leibniz():
    rng = random.Random(0)
    for n in range(1, 6):
        for _ in range(20):
            M = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
            assert det_bareiss(M) == det_leibniz(M)
            assert abs(det_bareiss(M) - round(np.linalg.det(np.array(M, float)))) <= 1e-6 * 10**n


def test_bareiss_zero_pivot():
    assert det_bareiss([[0, 1], [1, 0]]) == -1
    assert det_bareiss([[0, 0], [1, 2]]) == 0
    assert det_bareiss([]) == 1


@pytest.mark.parametrize("f,p,degrees,ramified", [
    # X^2 - X + 2 has discriminant -7 = 3 mod 5, a non-residue: irreducible mod 5
    (CharPoly((1, 2)), 5, (2,), False),
    # X^2 - X + 3 = (X - 2)(X - 4) mod 5
    (CharPoly((1, 3)), 5, (1, 1), False),
    (CharPoly.from_monic([1, -2, -1, 1]), 13, (1, 1, 1), False),
    (CharPoly.from_monic([1, -2, -1, 1]), 7, (1, 1, 1), True),
    (CharPoly.from_monic([-1, -3, 0, 1]), 2, (3,), False),
])
def test_factor_type_examples(f, p, degrees, ramified):
    ft = factor_type_mod_p(f, p)
    assert ft.degrees == degrees
    assert ft.ramified == ramified


def test_factor_type_example_roots():
    assert roots_mod_p(CharPoly((1, 2)), 5) == []
    assert roots_mod_p(CharPoly((1, 3)), 5) == [2, 4]
    assert roots_mod_p(CharPoly.from_monic([1, -2, -1, 1]), 13) == [3, 5, 6]


def brute_factor_type(monic, p):
    """Degrees of irreducible factors of a monic poly of degree <= 3 mod p, by root scanning."""
    n = len(monic) - 1
    roots = []
    poly = [c % p for c in monic]
    # peel linear factors with multiplicity by synthetic division
    changed = True
    while changed and len(poly) > 1:
        changed = False
        for r in range(p):
            if poly_eval(poly, r) % p == 0:
                # divide by (X - r)
                q = [0] * (len(poly) - 1)
                acc = 0
                for i in range(len(poly) - 1, 0, -1):
                    acc = (acc * r + poly[i]) % p
                    q[i - 1] = acc
                poly = q
                roots.append(r)
                changed = True
                break
    rest = len(poly) - 1
    degrees = [1] * len(roots) + ([rest] if rest else [])
    assert sum(degrees) == n
    return tuple(sorted(degrees))


def test_factor_type_vs_root_scan():
    rng = random.Random(11)
    primes = primes_up_to(200)
    for _ in range(1000):
        n = rng.choice([2, 3])
        coeffs = [rng.randint(-50, 50) for _ in range(n - 1)] + [rng.choice([-1, 1]) * rng.randint(1, 50)]
        f = CharPoly(tuple(coeffs))
        p = rng.choice(primes)
        ft = factor_type_mod_p(f, p)
        assert ft.n == n
        assert ft.degrees == brute_factor_type(f.monic(), p)
        assert len(roots_mod_p(f, p)) == len(set(roots_mod_p(f, p)))


@settings(max_examples=200)
@given(st.lists(st.integers(-100, 100), min_size=2, max_size=5).filter(lambda c: c[-1] != 0), st.sampled_from(primes_up_to(500)))
def test_factor_type_degrees_sum(coeffs, p):
    ft = factor_type_mod_p(CharPoly(tuple(coeffs)), p)
    assert ft.n == len(coeffs)


def test_ramified_iff_p_divides_disc():
    for coeffs in [(1, 2), (0, -3, -1), (1, -2, -1), (5, 7, 3)]:
        f = CharPoly(coeffs)
        d = discriminant(f)
        for p in primes_up_to(100):
            assert factor_type_mod_p(f, p).ramified == (d % p == 0)


@pytest.mark.parametrize("monic", [[-1, -3, 0, 1], [1, -2, -1, 1]])
def test_galois_cubic_types(monic):
    f = CharPoly.from_monic(monic)
    assert is_perfect_square(discriminant(f))
    for p in primes_up_to(10**4):
        ft = factor_type_mod_p(f, p)
        if not ft.ramified:
            assert ft.degrees in ((1, 1, 1), (3,))


def test_repeated_factor_multiplicity():
    # (X - 1)^2 (X + 2) = X^3 - 3X + 2 mod 7
    f = CharPoly.from_monic([2, -3, 0, 1])
    ft = factor_type_mod_p(f, 7)
    assert ft.degrees == (1, 1, 1) and ft.ramified
    # (X^2 + 1)^2 mod 3: X^4 + 2X^2 + 1
    g = CharPoly.from_monic([1, 0, 2, 0, 1])
    ft = factor_type_mod_p(g, 3)
    assert ft.degrees == (2, 2) and ft.ramified
