"""Ideals of embedded double points on a doubled plane, their invariants,
chart changes, the homological checks, and extension modules."""

import random
from fractions import Fraction

import pytest

from truncmod.arith import ArithError
from truncmod.doublepoint import (
    DoublePointError,
    LocalDoubleRing,
    PointIdeal,
    affine_difference,
    change_chart,
    ext_complex_check,
    extension_module,
    ideals_equal,
    is_balanced_extension,
    lambda_coord,
    lambda_to_ideal,
    make_chart,
    recover_ideal,
    tau,
    verify_maximal_ideal_resolution,
)
from truncmod.fpmod import ModMap, Submodule, free_module, is_balanced
from truncmod.groebner import SpanGB, vec_from_polys
from truncmod.regseq import balanced_ideal


def the_ring():
    return LocalDoubleRing()


# ----------------------------------------------------------------- invariants


def test_tau_examples():
    ring = the_ring()
    assert tau(PointIdeal(ring, "0", "0")).as_pair() == (0, 0)
    assert tau(PointIdeal(ring, "1", "0")).as_pair() == (0, -1)
    assert tau(PointIdeal(ring, "y^2", "0")).as_pair() == (0, 0)
    assert tau(PointIdeal(ring, "0", "1")).as_pair() == (1, 0)


def test_tau_ignores_higher_order_representatives():
    ring = the_ring()
    rng = random.Random(31)
    pool = ["x", "y", "x*y", "x^2", "y^2", "x - y"]
    for _ in range(6):
        a0, b0 = rng.randrange(-3, 4), rng.randrange(-3, 4)
        h = rng.choice(pool)
        k = rng.choice(pool)
        J = PointIdeal(ring, str(a0), str(b0))
        Jp = PointIdeal(ring, f"{a0} + {h}", f"{b0} + {k}")
        assert tau(J).as_pair() == tau(Jp).as_pair()
        assert ideals_equal(J, Jp)


def test_ideal_equality_examples():
    ring = the_ring()
    J0 = PointIdeal(ring, "0", "0")
    J1 = PointIdeal(ring, "1", "0")
    J2 = PointIdeal(ring, "y^2", "0")
    assert not ideals_equal(J1, J0)
    assert ideals_equal(J2, J0)
    assert ideals_equal(J1, J1)


def test_point_ideal_contains_square_of_maximal_ideal():
    ring = the_ring()
    S = ring.S
    J = PointIdeal(ring, "3", "y")
    for text in ("x^2", "x*y", "y^2", "x*t", "y*t", "t^2"):
        assert J.contains(S.parse(text))
    assert not J.contains(S.parse("1"))
    assert not J.contains(S.parse("t"))


def test_point_ideal_rejects_t_in_coefficients():
    # the twist coefficients live in the base plane ring, which has no t
    ring = the_ring()
    with pytest.raises(ArithError):
        PointIdeal(ring, "t", "0")


def test_quotient_by_point_ideal_has_rank_two():
    ring = the_ring()
    S = ring.S
    for a, b in (("0", "0"), ("1", "0"), ("2", "y"), ("1 + x", "y^2")):
        J = PointIdeal(ring, a, b)
        span = SpanGB(
            S, 1, [vec_from_polys((J.gen_x,)), vec_from_polys((J.gen_y,)),
                   vec_from_polys((S.parse("t^2"),))]
        )
        seen = set()
        for i in range(4):
            for j in range(4 - i):
                for k in range(2):
                    mono = S.parse("x") ** i * S.parse("y") ** j * S.parse("t") ** k
                    nf = span.normal_form(vec_from_polys((mono,)))
                    # every residue lives in the plane spanned by 1 and t
                    assert all(
                        exps in ((0, 0, 0), (0, 0, 1)) for (_, exps) in nf
                    )
                    seen.update(exps for (_, exps) in nf)
        assert seen == {(0, 0, 0), (0, 0, 1)}


def test_point_ideals_are_balanced_modules():
    ring = the_ring()
    tr = ring.trunc
    for a, b in (("0", "0"), ("1", "0"), ("y", "x")):
        seq = [tr.elem(f"x + ({a})*t"), tr.elem(f"y + ({b})*t")]
        assert is_balanced(balanced_ideal(seq)).balanced


# ----------------------------------------------------------- the coordinate map


def test_lambda_examples_and_roundtrip():
    ring = the_ring()
    assert lambda_coord(PointIdeal(ring, "0", "0")).coords == (0, 0)
    assert lambda_coord(PointIdeal(ring, "1", "0")).coords == (-1, 0)
    for coords in (("-1", "0"), ("2", "5"), ("0", "-3")):
        J = lambda_to_ideal(ring, coords)
        expected = tuple(Fraction(c) for c in coords)
        assert lambda_coord(J).coords == expected


def test_lambda_separates_ideals():
    ring = the_ring()
    seen = {}
    for a in ("-1", "0", "2"):
        for b in ("0", "1"):
            J = PointIdeal(ring, a, b)
            coords = lambda_coord(J).coords
            for other, prev in seen.items():
                assert (coords == prev) == ideals_equal(J, other)
            seen[J] = coords


# --------------------------------------------------------------- chart changes


def test_identity_chart_is_neutral():
    ring = the_ring()
    J = PointIdeal(ring, "4", "-7")
    ch = make_chart(ring)
    assert change_chart(J, ch).coords == lambda_coord(J).coords


def test_swap_chart_swaps_and_negates():
    ring = the_ring()
    J = PointIdeal(ring, "1", "0")
    sw = make_chart(ring, alpha="0", beta="1", gamma="1", delta="0")
    assert change_chart(J, sw).coords == (0, -1)


def test_general_linear_chart_frozen_value():
    ring = the_ring()
    J = PointIdeal(ring, "5", "11")
    ch = make_chart(ring, alpha="1", beta="2", gamma="3", delta="7")
    assert change_chart(J, ch).coords == (-27, -92)


def test_chart_with_shift_terms_agrees_both_routes():
    # the direct recomputation and the transformation law are compared
    # inside change_chart; a disagreement raises
    ring = the_ring()
    J = PointIdeal(ring, "2", "-1")
    ch = make_chart(ring, alpha="1", beta="0", gamma="1", delta="1", u="x", v="y")
    coords = change_chart(J, ch).coords
    assert all(isinstance(c, Fraction) for c in coords)


def test_singular_chart_rejected():
    ring = the_ring()
    J = PointIdeal(ring, "1", "0")
    ch = make_chart(ring, alpha="1", beta="2", gamma="2", delta="4")
    with pytest.raises(DoublePointError):
        change_chart(J, ch)


def test_nonvanishing_shift_rejected():
    ring = the_ring()
    J = PointIdeal(ring, "1", "0")
    ch = make_chart(ring, u="1")
    with pytest.raises(DoublePointError):
        change_chart(J, ch)


def test_affine_difference_is_chart_independent():
    ring = the_ring()
    J1 = PointIdeal(ring, "1", "0")
    J2 = PointIdeal(ring, "0", "0")
    charts = (
        make_chart(ring, alpha="0", beta="1", gamma="1", delta="0"),
        make_chart(ring, alpha="1", beta="2", gamma="3", delta="7"),
        make_chart(ring, alpha="2", beta="0", gamma="0", delta="1", u="x", v="0"),
    )
    diff = affine_difference(J1, J2, charts=charts)
    assert diff == (-1, 0)


# ------------------------------------------------------- homological evidence


def test_maximal_ideal_resolution_table():
    ring = the_ring()
    rep = verify_maximal_ideal_resolution(ring, 4)
    assert rep.ok
    assert rep.failures == []
    assert rep.dimension_table == [
        (2, 3, 3, 0, 0),
        (3, 6, 6, 3, 3),
        (4, 9, 9, 6, 6),
    ]


def test_resolution_negative_control():
    ring = the_ring()
    P = ring.S.parse
    broken = [(P("y"), P("-x")), (P("t"), P("0")), (P("0"), P("x"))]
    rep = verify_maximal_ideal_resolution(ring, 3, phi1_cols=broken)
    assert not rep.ok
    assert rep.failures


def test_ext_complex_table():
    ring = the_ring()
    rep = ext_complex_check(ring, 4)
    assert rep.ok
    assert rep.failures == []
    assert rep.dimension_table == [
        (2, 3, 0, 3, 3),
        (3, 5, 3, 2, 2),
        (4, 7, 4, 3, 3),
    ]


def test_ext_complex_negative_control():
    ring = the_ring()
    P = ring.S.parse
    broken = [[P("y"), P("-x")], [P("0"), P("x")], [P("0"), P("0")]]
    rep = ext_complex_check(ring, 3, psi1=broken)
    assert not rep.ok
    assert rep.failures


# ----------------------------------------------------------- extension modules


def test_extension_module_exactness():
    ring = the_ring()
    res = extension_module(ring, (1, 0), "-1", verify=True)
    assert res.inclusion.is_injective()
    assert res.projection.is_surjective()
    comp = res.projection.compose(res.inclusion)
    assert all(res.projection.target.element_is_zero(c) for c in comp.columns)


def test_balance_of_extension_grid():
    ring = the_ring()
    grid = {
        "1": True,
        "-1": True,
        "2": True,
        "1 + x": True,
        "0": False,
        "x": False,
        "y^2": False,
    }
    for rho, expected in grid.items():
        assert is_balanced_extension(ring, (1, 0), rho) == expected
        assert is_balanced_extension(ring, (0, 0), rho) == expected


def test_zero_multiplier_extension_is_t_annihilated():
    ring = the_ring()
    M = extension_module(ring, (1, 0), "0").module
    assert M.is_t_annihilated()
    # contrast: a unit multiplier leaves t acting nontrivially
    assert not extension_module(ring, (1, 0), "1").module.is_t_annihilated()


def test_unit_multiplier_extension_matches_point_ideal():
    ring = the_ring()
    tr = ring.trunc
    S = ring.S
    for a_txt, b_txt in (("2", "3"), ("y", "x"), ("1 + x", "y^2")):
        a = ring.base.parse(a_txt)
        b = ring.base.parse(b_txt)
        J = PointIdeal(ring, a_txt, b_txt)
        M = extension_module(ring, (b, -a), "-1", verify=True).module
        F = free_module(tr, 1)
        x, y, t = S.parse("x"), S.parse("y"), S.parse("t")
        cols = [
            (tr.truncate(x + tr.inject(a) * t),),
            (tr.truncate(y + tr.inject(b) * t),),
            (x * t,),
            (y * t,),
        ]
        phi = ModMap(M, F, cols)
        assert phi.is_injective()
        assert phi.image_submodule().equals(
            Submodule(F, [(J.gen_x,), (J.gen_y,)])
        )


def test_recover_ideal_examples():
    ring = the_ring()
    B = ring.base
    rec = recover_ideal(ring, "-y*t")
    assert (B.format(rec.a), B.format(rec.b)) == ("1", "0")
    rec2 = recover_ideal(ring, "x*t")
    assert (B.format(rec2.a), B.format(rec2.b)) == ("0", "1")


def test_recover_inverts_tau():
    ring = the_ring()
    for a, b in (("0", "0"), ("1", "0"), ("-2", "5"), ("3", "3"), ("0", "-1")):
        J = PointIdeal(ring, a, b)
        assert ideals_equal(recover_ideal(ring, tau(J)), J)


def test_tau_string_and_pair_inputs_agree():
    ring = the_ring()
    via_string = extension_module(ring, "-y*t", "1").module
    via_pair = extension_module(ring, (0, -1), "1").module
    assert via_string.relations == via_pair.relations
