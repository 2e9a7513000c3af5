"""Regular sequences in truncated rings and the balanced-ideal connection."""

import itertools

import pytest

from truncmod.multiring import TruncRing
from truncmod.fpmod import is_balanced, quasi_free_type
from truncmod.regseq import (
    SequenceError,
    balanced_ideal,
    ideal_presentation,
    is_regular_sequence,
    koszul_h1_vanishes,
    shadow_membership,
)


def ring(n=2, variables=("x", "y")):
    return TruncRing(variables, n)


def test_coordinate_sequence_is_regular():
    tr = ring()
    rep = is_regular_sequence([tr.elem("x"), tr.elem("y")])
    assert rep.regular
    assert rep.witness is None


def test_repeated_element_fails_with_witness():
    tr = ring()
    rep = is_regular_sequence([tr.elem("x"), tr.elem("x")])
    assert not rep.regular
    # positions are reported 1-based
    assert rep.witness_index == 2
    # the witness multiplies the offending element into the earlier ideal
    # without lying in that ideal itself; re-check by membership
    from truncmod.groebner import SpanGB, vec_from_polys

    w = rep.witness
    S = tr.S
    earlier = SpanGB(S, 1, [vec_from_polys((S.parse("x"),))] + tr.t_power_relations(1))
    assert not earlier.contains(vec_from_polys((w,)))
    assert earlier.contains(vec_from_polys((tr.truncate(w * S.parse("x")),)))


def test_perturbed_coordinates_stay_regular():
    tr = ring()
    rep = is_regular_sequence([tr.elem("x + t"), tr.elem("y + x*t")])
    assert rep.regular
    assert [tr.base.format(r) for r in rep.reductions] == ["x", "y"]


def test_weak_convention_ignores_unit_ideals():
    tr = ring()
    rep = is_regular_sequence([tr.elem("1 + x")])
    assert rep.regular
    # the colon-ladder criterion is the weak one: once the partial ideal
    # reaches the whole ring every later step passes vacuously
    rep2 = is_regular_sequence([tr.elem("1 + x"), tr.elem("x")])
    assert rep2.regular


def test_zero_divisor_first_element_fails():
    tr = ring()
    rep = is_regular_sequence([tr.elem("t"), tr.elem("x")])
    assert not rep.regular
    assert rep.witness_index == 1


def test_shadow_membership_examples():
    tr = ring()
    B = tr.base
    assert shadow_membership(B.parse("x"), [tr.elem("x")])
    assert not shadow_membership(B.parse("1"), [tr.elem("x"), tr.elem("y")])
    assert shadow_membership(B.parse("x^2"), [tr.elem("x + t"), tr.elem("y")])


def test_shadow_membership_linear_cases():
    tr = ring()
    B = tr.base
    seq = [tr.elem("x + t"), tr.elem("y + x*t")]
    assert shadow_membership(B.parse("x"), seq)
    assert shadow_membership(B.parse("y"), seq)
    assert shadow_membership(B.parse("x*y - y^2"), seq)
    assert not shadow_membership(B.parse("1"), seq)
    assert not shadow_membership(B.parse("x + 1"), seq)


def test_shadow_membership_requires_regular_sequence():
    tr = ring()
    with pytest.raises(SequenceError):
        shadow_membership(tr.base.parse("x"), [tr.elem("x"), tr.elem("x")])


def test_balanced_ideal_of_coordinates():
    tr = ring()
    I = balanced_ideal([tr.elem("x"), tr.elem("y")])
    assert is_balanced(I).balanced
    assert I.ngens == 2


def test_balanced_ideal_principal_case_is_free():
    tr = ring()
    I = balanced_ideal([tr.elem("x + t")])
    assert is_balanced(I).balanced
    assert quasi_free_type(I).type_vector == (0, 1)


def test_balanced_ideal_for_twisted_generators():
    tr = ring()
    for a, b in (("0", "0"), ("1", "0"), ("y", "x"), ("1 + x", "y^2")):
        seq = [tr.elem(f"x + ({a})*t"), tr.elem(f"y + ({b})*t")]
        I = balanced_ideal(seq)
        assert is_balanced(I).balanced


def test_balanced_ideal_rejects_non_regular_input():
    tr = ring()
    with pytest.raises(SequenceError):
        balanced_ideal([tr.elem("x"), tr.elem("x")])


def test_regularity_is_permutation_invariant_for_homogeneous_input():
    tr = ring()
    homogeneous_cases = [
        (["x", "y"], True),
        (["x", "x"], False),
        (["x + y", "x - y"], True),
        (["x*t", "y"], False),
    ]
    for texts, expected in homogeneous_cases:
        for perm in itertools.permutations(texts):
            rep = is_regular_sequence([tr.elem(s) for s in perm])
            assert rep.regular == expected


def test_koszul_cross_check_on_short_sequences():
    tr = ring()
    cases = [
        ["x", "y"],
        ["x", "x"],
        ["x + t", "y + x*t"],
        ["x^2", "y^2", "x*y"],
    ]
    for texts in cases:
        seq = [tr.elem(s) for s in texts]
        assert koszul_h1_vanishes(seq) == is_regular_sequence(seq).regular


def test_monomial_triple_boundary_case():
    # three quadrics in two variables: never a regular sequence, yet the
    # ideal they span is balanced; the implication only runs one way
    tr = ring(2, ("X", "Y"))
    seq = [tr.elem("X^2"), tr.elem("Y^2"), tr.elem("X*Y")]
    rep = is_regular_sequence(seq)
    assert not rep.regular
    I = ideal_presentation(seq)
    assert is_balanced(I).balanced
    with pytest.raises(SequenceError):
        balanced_ideal(seq)
