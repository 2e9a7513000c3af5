"""Regular sequences over R[n] = Q[x..][t]/(t^n) and the ideals they generate.

A sequence is regular when each entry is a non zero divisor modulo its
predecessors.  The verdict is computed twice: by running the colon-ideal
ladder directly in R[n], and by reducing every entry mod t and running the
same ladder over the base ring.  The two runs must agree; a failure comes
with a witness element that multiplies into the partial ideal without
belonging to it.

Passing ``jet_order=N`` adjoins all base monomials of degree N to every
ideal, which turns the global tests into tests at the origin up to N-jets;
by default everything is exact over the polynomial ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import ArithError, Poly, PolyRing
from .fpmod import Grading, PresMod, is_balanced
from .groebner import (
    SpanGB,
    VecT,
    kernel_through,
    quotient_by_poly,
    vec_from_polys,
    vec_to_polys,
)
from .hilbert import monomials_of_weighted_degree
from .multiring import TruncElem, TruncRing


class SequenceError(ArithError):
    """Bad sequence input, or two regularity routes that disagree."""


@dataclass
class SequenceReport:
    """Outcome of a regularity test.

    ``witness_index`` is the 1-based position k of the first failure and
    ``witness`` an element a with a*x_k in (x_1..x_{k-1}) but a itself not;
    both are None for a regular sequence.
    """

    elements: list[TruncElem]
    reductions: list[Poly]
    regular: bool
    witness_index: int | None = None
    witness: Poly | None = None


def _common_ring(seq: list[TruncElem]) -> TruncRing:
    if not seq:
        raise SequenceError("empty sequence")
    ring = seq[0].ring
    if any(u.ring != ring for u in seq):
        raise SequenceError("sequence elements live in different rings")
    return ring


def _jet_monomials(ring: PolyRing, order: int | None) -> list[Poly]:
    if order is None:
        return []
    exps = monomials_of_weighted_degree(ring.nvars, (1,) * ring.nvars, order)
    return [Poly(ring, {e: Fraction(1)}) for e in exps]


def _ladder(ring: PolyRing, gens: list[Poly], ambient: list[Poly]
            ) -> tuple[int | None, Poly | None]:
    """First failure of the colon ladder: smallest 0-based k such that
    ((ambient, x_1..x_k) : x_{k+1}) exceeds the ideal, with an offending
    colon generator; (None, None) when every step passes."""
    prior: list[VecT] = [vec_from_polys((p,)) for p in ambient]
    for k, f in enumerate(gens):
        colon = quotient_by_poly(ring, 1, prior, f)
        span = SpanGB(ring, 1, prior)
        for c in colon:
            if not span.contains(c):
                return k, vec_to_polys(ring, 1, c)[0]
        prior.append(vec_from_polys((f,)))
    return None, None


def is_regular_sequence(seq: list[TruncElem],
                        jet_order: int | None = None) -> SequenceReport:
    """Two-route regularity test; raises SequenceError when the direct R[n]
    ladder and the reduced base-ring ladder disagree."""
    ring = _common_ring(seq)
    reductions = [ring.drop_t(u.poly) for u in seq]

    base_jets = _jet_monomials(ring.base, jet_order)
    k_base, _ = _ladder(ring.base, reductions, base_jets)

    ambient = [ring.t ** ring.n] + [ring.inject(m) for m in base_jets]
    k_direct, witness = _ladder(ring.S, [u.poly for u in seq], ambient)

    if (k_base is None) != (k_direct is None):
        raise SequenceError(
            f"regularity routes disagree: base ladder "
            f"{'passes' if k_base is None else f'fails at {k_base + 1}'}, "
            f"direct ladder "
            f"{'passes' if k_direct is None else f'fails at {k_direct + 1}'}")

    if k_direct is None:
        return SequenceReport(list(seq), reductions, True)

    # re-verify the witness by explicit membership
    prior = ([vec_from_polys((p,)) for p in ambient]
             + [vec_from_polys((u.poly,)) for u in seq[:k_direct]])
    span = SpanGB(ring.S, 1, prior)
    w = ring.truncate(witness)
    if span.contains(vec_from_polys((w,))) \
            or not span.contains(vec_from_polys((ring.truncate(w * seq[k_direct].poly),))):
        raise SequenceError("failure witness does not verify")
    return SequenceReport(list(seq), reductions, False, k_direct + 1, w)


def shadow_membership(y: Poly, seq: list[TruncElem],
                      jet_order: int | None = None) -> bool:
    """Whether t^(n-1)*y lands in the sequence ideal; equivalently (for a
    regular sequence, and checked both ways) whether y lies in the ideal of
    the t = 0 reductions."""
    ring = _common_ring(seq)
    if y.ring != ring.base:
        raise SequenceError("shadow element must live in the base ring")
    report = is_regular_sequence(seq, jet_order)
    if not report.regular:
        raise SequenceError("shadow test requires a regular sequence")

    base_jets = _jet_monomials(ring.base, jet_order)
    direct_span = SpanGB(ring.S, 1,
                         [vec_from_polys((u.poly,)) for u in seq]
                         + [vec_from_polys((ring.t ** ring.n,))]
                         + [vec_from_polys((ring.inject(m),)) for m in base_jets])
    probe = ring.truncate(ring.t ** (ring.n - 1) * ring.inject(y))
    in_ideal = direct_span.contains(vec_from_polys((probe,)))

    base_span = SpanGB(ring.base, 1,
                       [vec_from_polys((p,)) for p in report.reductions]
                       + [vec_from_polys((m,)) for m in base_jets])
    in_shadow = base_span.contains(vec_from_polys((y,)))

    if in_ideal != in_shadow:
        raise SequenceError(
            f"shadow routes disagree: t-power membership {in_ideal}, "
            f"reduction membership {in_shadow}")
    return in_ideal


def ideal_presentation(seq: list[TruncElem]) -> PresMod:
    """The ideal generated by the sequence, as a module: one generator per
    element, relations the complete syzygy module over R[n]."""
    ring = _common_ring(seq)
    cols = [vec_from_polys((u.poly,)) for u in seq]
    syz = kernel_through(ring.S, len(seq), cols, ring.t_power_relations(1))
    relations = [vec_to_polys(ring.S, len(seq), v) for v in syz]

    grading = None
    weights = (1,) * ring.base.nvars + (1,)
    degs = []
    for u in seq:
        ds = {sum(w * e for w, e in zip(weights, exp)) for exp in u.poly.terms}
        if len(ds) != 1:
            degs = None
            break
        degs.append(ds.pop())
    if degs is not None:
        try:
            return PresMod(ring, len(seq), relations, Grading(tuple(degs), 1))
        except ArithError:
            pass
    return PresMod(ring, len(seq), relations)


def balanced_ideal(seq: list[TruncElem],
                   jet_order: int | None = None) -> PresMod:
    """The ideal of a regular sequence as a presented module, with the
    balance property asserted on the result."""
    report = is_regular_sequence(seq, jet_order)
    if not report.regular:
        raise SequenceError(
            f"sequence is not regular (fails at position {report.witness_index})")
    M = ideal_presentation(seq)
    verdict = is_balanced(M)
    if not verdict.balanced:
        raise SequenceError("ideal of a regular sequence failed the balance check")
    return M


def koszul_h1_vanishes(seq: list[TruncElem]) -> bool:
    """Whether the first homology of the length-one Koszul layer vanishes:
    every coefficient vector killing the sequence is generated by the
    trivial pairwise relations.  Agrees with regularity for homogeneous
    sequences in the irrelevant ideal; intended as a cross-check for short
    sequences."""
    ring = _common_ring(seq)
    p = len(seq)
    cols = [vec_from_polys((u.poly,)) for u in seq]
    cycles = kernel_through(ring.S, p, cols, ring.t_power_relations(1))
    boundary: list[VecT] = []
    for i in range(p):
        for j in range(i + 1, p):
            col: VecT = {}
            for e, c in seq[i].poly.terms.items():
                col[(j, e)] = col.get((j, e), Fraction(0)) + c
            for e, c in seq[j].poly.terms.items():
                col[(i, e)] = col.get((i, e), Fraction(0)) - c
            boundary.append(col)
    span = SpanGB(ring.S, p, boundary + ring.t_power_relations(p))
    return all(span.contains(z) for z in cycles)
