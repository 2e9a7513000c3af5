"""Exact multivariate polynomial arithmetic over the rationals."""

import random
from fractions import Fraction

import pytest

from truncmod.arith import (
    ArithError,
    PolyRing,
    grevlex,
    lex,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


def ring2():
    return PolyRing(("x", "y"))


def random_poly(ring, rng, max_terms=4, max_deg=3):
    p = ring.zero()
    nv = len(ring.variables)
    for _ in range(rng.randrange(max_terms + 1)):
        exps = tuple(rng.randrange(max_deg + 1) for _ in range(nv))
        coeff = Fraction(rng.randrange(-5, 6), rng.randrange(1, 4))
        p = p + ring.from_terms({exps: coeff})
    return p


def test_sum_of_conjugate_linears():
    R = ring2()
    x, _ = R.gens()
    assert (x + 1) + (x - 1) == 2 * x


def test_difference_of_squares():
    R = ring2()
    x, y = R.gens()
    assert (x + y) * (x - y) == x * x - y * y


def test_multiplication_by_zero_annihilates():
    R = ring2()
    x, y = R.gens()
    for p in (x * x + 3 * y, R.one(), R.parse("x^3 - 1/2*y")):
        assert (p * R.zero()).is_zero()


def test_constant_term_examples():
    R = ring2()
    assert R.parse("x^2 + 3").constant_term() == 3
    assert R.parse("5*x*y + 7").evaluate_at_origin() == 7
    assert R.zero().constant_term() == 0


def test_ring_laws_on_random_inputs():
    R = ring2()
    rng = random.Random(20814)
    for _ in range(40):
        p, q, r = (random_poly(R, rng) for _ in range(3))
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + R.zero() == p
        assert p * R.one() == p


def test_parse_format_round_trip():
    R = ring2()
    for text in ("0", "1", "-x", "x^2 - 1", "1/2*x*y + 7", "-x + y^3", "x^2*y^2 - 2/3"):
        p = R.parse(text)
        assert R.parse(R.format(p)) == p


def test_parse_power_and_grouping():
    R = ring2()
    assert R.parse("(x+y)^2 - 2*x*y") == R.parse("x^2 + y^2")
    assert R.parse("x^3") == R.gen("x") ** 3


def test_parse_rejects_bad_input():
    R = ring2()
    with pytest.raises(ArithError):
        R.parse("x + @")
    with pytest.raises(ArithError):
        R.parse("x^-1")
    with pytest.raises(ArithError):
        R.parse("z")


def test_substitution_is_a_ring_map():
    R = ring2()
    x, y = R.gens()
    images = {"x": y * y - 1, "y": x + y}
    rng = random.Random(7)
    for _ in range(15):
        p, q = random_poly(R, rng), random_poly(R, rng)
        sp, sq = p.substitute(images), q.substitute(images)
        assert (p + q).substitute(images) == sp + sq
        assert (p * q).substitute(images) == sp * sq
    assert R.one().substitute(images) == R.one()


def test_evaluate_at_rational_point():
    R = ring2()
    p = R.parse("x*y + 1")
    assert p.evaluate({"x": Fraction(2), "y": Fraction(3)}) == 7


def test_degree_helpers():
    R = ring2()
    p = R.parse("x*y^2")
    assert p.total_degree() == 3
    assert p.degree_in("y") == 2
    assert p.weighted_degree((1, 2)) == 5
    assert R.parse("x^2 + y^2").is_homogeneous()
    assert not R.parse("x + 1").is_homogeneous()


def test_coefficient_extraction():
    R = ring2()
    p = R.parse("3*x*y + 2*x + 5")
    assert p.coefficient((1, 1)) == 3
    assert p.coefficient_in("x", 1) == R.parse("3*y + 2")
    assert p.scale(2) == R.parse("6*x*y + 4*x + 10")


def test_monomial_helpers():
    assert mono_mul((1, 0), (0, 2)) == (1, 2)
    assert mono_divides((1, 0), (1, 2))
    assert not mono_divides((2, 0), (1, 2))
    assert mono_div((1, 2), (1, 0)) == (0, 2)
    assert mono_lcm((2, 0), (1, 1)) == (2, 1)


def test_monomial_orders_are_total_and_multiplicative():
    rng = random.Random(99)
    for order in (lex(), grevlex()):
        monos = [tuple(rng.randrange(4) for _ in range(2)) for _ in range(25)]
        key = order.key
        for a in monos:
            for b in monos:
                # totality: keys decide every pair
                assert (key(a) < key(b)) or (key(b) < key(a)) or a == b
                if key(a) < key(b):
                    for c in monos:
                        assert key(mono_mul(a, c)) < key(mono_mul(b, c))
        # the unit monomial is smallest
        assert all(key((0, 0)) <= key(m) for m in monos)


def test_leading_terms_under_each_order():
    Rg = PolyRing(("x", "y"), order=grevlex())
    Rl = PolyRing(("x", "y"), order=lex())
    assert Rg.parse("x^2 + y^3").leading() == ((0, 3), Fraction(1))
    assert Rl.parse("x^2 + y^3").leading() == ((2, 0), Fraction(1))
