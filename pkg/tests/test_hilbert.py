"""Hilbert series, Hilbert polynomials, and the reduced polynomial computed
through t-power filtrations."""

from fractions import Fraction

import pytest

from truncmod.multiring import TruncRing
from truncmod.fpmod import (
    FiltrationChain,
    Grading,
    PresMod,
    Submodule,
    free_module,
    subquotient,
    truncated_free,
)
from truncmod.hilbert import (
    HilbertError,
    HilbertPolynomial,
    hilbert_polynomial,
    hilbert_series_ideal,
    hilbert_series_presmod,
    monomials_of_weighted_degree,
    polynomial_from_series,
    presmod_dimension_by_enumeration,
    rank_degree_reduced,
    reduced_hilbert_polynomial,
)
from truncmod.regseq import ideal_presentation


def plane(n=1):
    return TruncRing(("x0", "x1", "x2"), n)


def F(*coeffs):
    return tuple(Fraction(c) for c in coeffs)


# --------------------------------------------------------------------- series


def test_series_of_polynomial_plane():
    tr = TruncRing(("x", "y"), 1)
    hs = hilbert_series_presmod(free_module(tr, 1))
    assert hs.dimensions(5) == [1, 2, 3, 4, 5, 6]


def test_series_of_coordinate_hyperplane_quotient():
    tr = TruncRing(("x", "y"), 1)
    Q = PresMod(tr, 1, [(tr.S.parse("x"),)], grading=Grading((0,), 1))
    assert hilbert_series_presmod(Q).dimensions(4) == [1, 1, 1, 1, 1]


def test_series_of_fat_point_quotient():
    tr = TruncRing(("x", "y"), 1)
    S = tr.S
    Q = PresMod(
        tr,
        1,
        [(S.parse("x^2"),), (S.parse("x*y"),), (S.parse("y^2"),)],
        grading=Grading((0,), 1),
    )
    assert hilbert_series_presmod(Q).dimensions(4) == [1, 2, 0, 0, 0]


def test_quotient_ring_series_helper():
    R = TruncRing(("x", "y"), 1).base
    assert hilbert_series_ideal(R, []).dimensions(4) == [1, 2, 3, 4, 5]
    assert hilbert_series_ideal(R, [R.parse("x")]).dimensions(4) == [1, 1, 1, 1, 1]
    fat = [R.parse(s) for s in ("x^2", "x*y", "y^2")]
    assert hilbert_series_ideal(R, fat).dimensions(4) == [1, 2, 0, 0, 0]


def test_series_match_enumeration():
    tr = TruncRing(("x", "y"), 2)
    M = ideal_presentation([tr.elem("x^2"), tr.elem("y^2"), tr.elem("x*y")])
    hs = hilbert_series_presmod(M)
    assert hs.dimensions(6) == [0, 0, 3, 7, 9, 11, 13]
    for d in range(7):
        assert hs.dimension(d) == presmod_dimension_by_enumeration(M, d)


# ---------------------------------------------------------------- polynomials


def test_hilbert_polynomial_of_plane():
    hp = hilbert_polynomial(free_module(plane(), 1))
    assert hp.coeffs == F(1, "3/2", "1/2")
    assert [hp.evaluate(d) for d in range(5)] == [1, 3, 6, 10, 15]


def test_hilbert_polynomial_of_twisted_plane():
    hp = hilbert_polynomial(free_module(plane(), 1, gen_degrees=(1,)))
    assert hp.coeffs == F(0, "1/2", "1/2")


def test_hilbert_polynomial_of_point_ideal_sheaf():
    tr = plane()
    I = ideal_presentation([tr.elem("x0"), tr.elem("x1")])
    hp = hilbert_polynomial(I)
    assert hp.coeffs == F(0, "3/2", "1/2")
    assert [hp.evaluate(d) for d in range(4)] == [0, 2, 5, 9]


def test_polynomial_degree_and_evaluation():
    hp = HilbertPolynomial.make([Fraction(1), Fraction(2), Fraction(1)])
    assert hp.degree() == 2
    assert hp.evaluate(3) == 16
    assert HilbertPolynomial.make([]).degree() == -1


def test_polynomial_from_series_agrees_for_large_degrees():
    tr = plane()
    I = ideal_presentation([tr.elem("x0"), tr.elem("x1")])
    hs = hilbert_series_presmod(I)
    hp = polynomial_from_series(hs)
    for d in range(4, 9):
        assert hp.evaluate(d) == hs.dimension(d)


# ---------------------------------------------------------- reduced polynomial


def test_reduced_polynomial_of_double_structure_sheaf():
    hp = reduced_hilbert_polynomial(free_module(plane(2), 1))
    assert hp.coeffs == F(1, 2, 1)


def test_reduced_polynomial_of_zero_module():
    Z = PresMod(plane(2), 0, [], grading=Grading((), 1))
    assert reduced_hilbert_polynomial(Z).coeffs == ()


def test_reduced_polynomial_additivity_on_t_sequence():
    tr = plane(2)
    S2 = free_module(tr, 1)
    t_part = subquotient(S2, [(tr.S.parse("t"),)], [S2.zero_column()])
    reduced_part = PresMod(tr, 1, [(tr.S.parse("t"),)], grading=Grading((0,), 1))
    total = reduced_hilbert_polynomial(S2)
    left = reduced_hilbert_polynomial(t_part)
    right = reduced_hilbert_polynomial(reduced_part)
    assert left.coeffs == F(0, "1/2", "1/2")
    assert right.coeffs == F(1, "3/2", "1/2")
    width = max(len(total.coeffs), len(left.coeffs), len(right.coeffs))

    def pad(p):
        return list(p.coeffs) + [Fraction(0)] * (width - len(p.coeffs))

    assert pad(total) == [a + b for a, b in zip(pad(left), pad(right))]


def test_reduced_polynomial_accepts_explicit_filtration():
    tr = plane(2)
    S2 = free_module(tr, 1)
    full = Submodule(S2, [S2.gen_column(0)])
    middle = Submodule(S2, [(tr.S.parse("t"),)])
    zero = Submodule(S2, [S2.zero_column()])
    chain = FiltrationChain(S2, [full, middle, zero])
    assert reduced_hilbert_polynomial(S2, filtration=chain).coeffs == F(1, 2, 1)


def test_reduced_polynomial_rejects_coarse_filtration():
    tr = plane(2)
    S2 = free_module(tr, 1)
    full = Submodule(S2, [S2.gen_column(0)])
    zero = Submodule(S2, [S2.zero_column()])
    chain = FiltrationChain(S2, [full, zero])
    # the single quotient is the whole module, on which t acts nontrivially
    with pytest.raises(HilbertError):
        reduced_hilbert_polynomial(S2, filtration=chain)


def test_reduced_polynomial_with_trivial_t_weight_matches_plain():
    tr = TruncRing(("x0", "x1", "x2"), 2)
    M = free_module(tr, 1, t_weight=0)
    hp = reduced_hilbert_polynomial(M)
    plain = hilbert_polynomial(free_module(plane(), 2))
    assert hp.coeffs == plain.coeffs


# ------------------------------------------------------------- rank and degree


def test_rank_of_double_structure_sheaf():
    rd = rank_degree_reduced(free_module(plane(2), 1))
    assert rd.support_dimension == 2
    assert rd.rank_coefficient == 2


def test_rank_of_plane_is_one():
    rd = rank_degree_reduced(free_module(plane(), 1))
    assert rd.support_dimension == 2
    assert rd.rank_coefficient == 1
    assert rd.degree_coefficient == Fraction(3, 2)


def test_rank_of_finite_length_module_is_zero():
    tr = plane()
    S = tr.S
    fin = PresMod(
        tr,
        1,
        [(S.parse("x0"),), (S.parse("x1"),), (S.parse("x2"),)],
        grading=Grading((0,), 1),
    )
    rd = rank_degree_reduced(fin)
    assert rd.support_dimension == -1
    assert rd.rank_coefficient == 0


# ------------------------------------------------------------------ enumeration


def test_weighted_monomial_enumeration():
    assert monomials_of_weighted_degree(2, (1, 1), 3) == [
        (0, 3),
        (1, 2),
        (2, 1),
        (3, 0),
    ]
    assert monomials_of_weighted_degree(2, (1, 2), 2) == [(0, 1), (2, 0)]
    assert monomials_of_weighted_degree(1, (3,), 2) == []


def test_enumeration_of_graded_free_module():
    tr = plane(2)
    assert presmod_dimension_by_enumeration(free_module(tr, 1), 3) == 16


def test_series_requires_grading():
    tr = TruncRing(("x", "y"), 2)
    M = PresMod(tr, 1, [(tr.S.parse("x + t"),)])
    with pytest.raises(HilbertError):
        hilbert_series_presmod(M)
