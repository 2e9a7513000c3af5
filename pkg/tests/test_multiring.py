"""Truncated polynomial extensions R[x..][t]/(t^n) and their automorphisms."""

import random

import pytest

from truncmod.arith import ArithError
from truncmod.multiring import (
    AutMap,
    TruncRing,
    compose,
    in_multiplicative_system,
    invert_local,
    is_zero_divisor,
    verify_cocycle,
    zero_divisor_witness,
)


def ring(n=2):
    return TruncRing(("x", "y"), n)


def random_elem(tr, rng, max_deg=2):
    p = tr.S.zero()
    nv = len(tr.S.variables)
    for _ in range(rng.randrange(4)):
        exps = [0] * nv
        for _ in range(rng.randrange(max_deg + 1)):
            exps[rng.randrange(nv)] += 1
        exps[-1] = min(exps[-1], tr.n - 1)
        p = p + tr.S.from_terms({tuple(exps): rng.randrange(-3, 4)})
    return tr.elem(tr.truncate(p))


def test_zero_divisor_examples():
    tr = ring()
    assert is_zero_divisor(tr.elem("t"))
    assert not is_zero_divisor(tr.elem("1 + t"))
    assert not is_zero_divisor(tr.elem("x"))
    assert is_zero_divisor(tr.elem("0"))
    assert not is_zero_divisor(tr.elem("x + t"))
    assert not is_zero_divisor(tr.elem("1 + x*t"))


def test_zero_divisor_witness_annihilates():
    tr = ring()
    w = zero_divisor_witness(tr.elem("x*t"))
    assert w is not None and not w.is_zero()
    assert tr.truncate(w.poly * tr.elem("x*t").poly).is_zero()
    assert zero_divisor_witness(tr.elem("1 + t")) is None


def test_zero_divisor_iff_outside_multiplicative_system():
    tr = ring(3)
    rng = random.Random(41)
    for _ in range(40):
        u = random_elem(tr, rng)
        assert is_zero_divisor(u) != in_multiplicative_system(u)


def test_multiplicative_system_is_the_nonzero_bottom_layer_locus():
    tr = ring()
    assert in_multiplicative_system(tr.elem("1 + t"))
    assert in_multiplicative_system(tr.elem("x + 1"))
    assert in_multiplicative_system(tr.elem("x"))
    assert not in_multiplicative_system(tr.elem("t"))
    assert not in_multiplicative_system(tr.elem("x*t"))


def test_invert_local_exact_when_unit_mod_t():
    tr = ring()
    u = tr.elem("1 + t")
    inv = invert_local(u)
    assert tr.truncate(inv.poly * u.poly) == tr.S.one()
    assert inv.poly == tr.S.parse("1 - t")


def test_invert_local_jet_expansion():
    tr = ring()
    u = tr.elem("1 + x")
    inv = invert_local(u, jet_order=4)
    err = tr.truncate(inv.poly * u.poly) - tr.S.one()
    # the residual is supported in base degrees >= the jet order
    assert all(sum(e[:-1]) >= 4 for e in err.terms)


def test_invert_local_rejects_non_units():
    tr = ring()
    with pytest.raises(ArithError):
        invert_local(tr.elem("x"))


def test_truncation_and_projection():
    tr = ring()
    assert tr.truncate(tr.S.parse("t^2")).is_zero()
    assert tr.drop_t(tr.S.parse("x + y*t")) == tr.base.parse("x")
    assert tr.t_coefficient(tr.S.parse("x + 3*y*t"), 1) == tr.base.parse("3*y")


def test_elem_round_trip_through_coefficients():
    tr = ring(3)
    u = tr.elem("1 + x*t + y^2*t^2")
    assert tr.from_coeffs(u.coeffs()).poly == u.poly


def test_compose_combines_derivations():
    tr = ring()
    B = tr.base
    phi = AutMap.from_deriv(tr, {"x": B.parse("x^2"), "y": B.parse("0")}, B.parse("1"))
    psi = AutMap.from_deriv(tr, {"x": B.parse("y"), "y": B.parse("x")}, B.parse("1"))
    comp = compose(phi, psi)
    assert comp.deriv_coeff("x") == B.parse("x^2 + y")
    assert comp.deriv_coeff("y") == B.parse("x")
    assert comp.alpha() == B.one()


def test_compose_weights_second_derivation_by_first_scale():
    tr = ring()
    B = tr.base
    phi = AutMap.from_deriv(tr, {"x": B.parse("x^2"), "y": B.parse("0")}, B.parse("1"))
    scale2 = AutMap.from_deriv(tr, {"x": B.parse("y"), "y": B.parse("0")}, B.parse("2"))
    comp = compose(scale2, phi)
    assert comp.deriv_coeff("x") == B.parse("y + 2*x^2")
    assert comp.alpha() == B.parse("2")


def test_identity_laws():
    tr = ring()
    B = tr.base
    phi = AutMap.from_deriv(tr, {"x": B.parse("x*y"), "y": B.parse("1")}, B.parse("3"))
    ident = AutMap.identity(tr)
    for other in (compose(ident, phi), compose(phi, ident)):
        assert other.var_images == phi.var_images
        assert other.t_image == phi.t_image


def test_apply_respects_t_nilpotence():
    tr = ring()
    B = tr.base
    phi = AutMap.from_deriv(tr, {"x": B.parse("x^2"), "y": B.parse("0")}, B.parse("1"))
    # x maps to x + x^2 t, so x t maps to x t exactly (t^2 dies)
    assert phi.apply(tr.S.parse("x*t + y")) == tr.S.parse("x*t + y")


def test_composition_is_associative_on_elements():
    tr = ring(3)
    B = tr.base
    rng = random.Random(17)

    def rand_aut():
        d = {
            v: B.from_terms(
                {(rng.randrange(2), rng.randrange(2)): rng.randrange(-2, 3)}
            )
            for v in ("x", "y")
        }
        alpha = B.from_terms({(0, 0): rng.choice([1, 2, -1])})
        return AutMap.from_deriv(tr, d, alpha)

    samples = [tr.S.parse(s) for s in ("x", "y", "t", "x*y + t", "x*t^2 - y")]
    for _ in range(10):
        f, g, h = rand_aut(), rand_aut(), rand_aut()
        left = compose(compose(f, g), h)
        right = compose(f, compose(g, h))
        for s in samples:
            assert left.apply(s) == right.apply(s)


def test_cocycle_verification():
    tr = ring()
    B = tr.base
    one = B.parse("1")
    ij = AutMap.from_deriv(tr, {"x": B.parse("1"), "y": B.parse("0")}, one)
    jk = AutMap.from_deriv(tr, {"x": B.parse("0"), "y": B.parse("1")}, one)
    good = AutMap.from_deriv(tr, {"x": B.parse("1"), "y": B.parse("1")}, one)
    bad = AutMap.from_deriv(tr, {"x": B.parse("1"), "y": B.parse("0")}, one)
    assert verify_cocycle(ij, jk, good)
    assert not verify_cocycle(ij, jk, bad)


def test_cocycle_matches_composition():
    tr = ring()
    B = tr.base
    rng = random.Random(23)
    for _ in range(8):
        ij = AutMap.from_deriv(
            tr,
            {v: B.from_terms({(1, 0): rng.randrange(-2, 3)}) for v in ("x", "y")},
            B.parse(str(rng.choice([1, 2]))),
        )
        jk = AutMap.from_deriv(
            tr,
            {v: B.from_terms({(0, 1): rng.randrange(-2, 3)}) for v in ("x", "y")},
            B.parse(str(rng.choice([1, 3]))),
        )
        assert verify_cocycle(ij, jk, compose(ij, jk))


def test_t_power_relations_shape():
    tr = ring(3)
    rels = tr.t_power_relations(2)
    # one relation t^n * e_i per free position
    assert len(rels) == 2
    for v in rels:
        (term,) = v.keys()
        pos, exps = term
        assert exps == (0, 0, 3)
