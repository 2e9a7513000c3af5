"""Groebner bases for submodules of free modules over Q[x1..xd].

Elements of S^r are stored sparsely as ``dict[(position, exponents)] ->
Fraction``.  Positions may be grouped into blocks; terms in an earlier block
dominate every term in a later block, which turns syzygy computation into an
elimination problem: the basis of the span of ``(v_i, e_i)`` in S^(r+k),
with the first r positions dominant, contains in its second block a
generating set for the syzygies of ``(v_1..v_k)``, and its mixed elements
carry division lifts.

Within a block, terms compare by the ring's monomial order with ties broken
toward earlier positions.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import (
    Exponents,
    MonomialOrder,
    Poly,
    PolyRing,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

Term = tuple[int, Exponents]
VecT = dict[Term, Fraction]


class ModuleOrder:
    def __init__(self, order: MonomialOrder, blocks: tuple[int, ...]):
        self.order = order
        self.blocks = blocks

    def key(self, term: Term):
        pos, exps = term
        return (-self.blocks[pos], self.order.key(exps), -pos)


def module_order(ring: PolyRing, rank: int, blocks: tuple[int, ...] | None = None,
                 order: MonomialOrder | None = None) -> ModuleOrder:
    return ModuleOrder(order or ring.order, blocks or (0,) * rank)


# -- vector helpers ------------------------------------------------------


def vec_from_polys(polys: list[Poly] | tuple[Poly, ...]) -> VecT:
    v: VecT = {}
    for pos, p in enumerate(polys):
        for e, c in p.terms.items():
            v[(pos, e)] = c
    return v


def vec_to_polys(ring: PolyRing, rank: int, v: VecT) -> tuple[Poly, ...]:
    parts: list[dict[Exponents, Fraction]] = [{} for _ in range(rank)]
    for (pos, e), c in v.items():
        parts[pos][e] = c
    return tuple(Poly(ring, t) for t in parts)


def vec_lead(v: VecT, morder: ModuleOrder) -> Term:
    return max(v, key=morder.key)


def vec_sub_scaled(v: VecT, w: VecT, mono: Exponents, coeff: Fraction) -> VecT:
    """v - coeff * x^mono * w, computed sparsely."""
    out = dict(v)
    for (pos, e), c in w.items():
        t = (pos, mono_mul(e, mono))
        s = out.get(t, 0) - coeff * c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def vec_scale(v: VecT, coeff: Fraction) -> VecT:
    if coeff == 0:
        return {}
    return {t: coeff * c for t, c in v.items()}


def vec_add(v: VecT, w: VecT) -> VecT:
    out = dict(v)
    for t, c in w.items():
        s = out.get(t, 0) + c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def vec_mul_poly(v: VecT, p: Poly) -> VecT:
    out: VecT = {}
    for e1, c1 in p.terms.items():
        for (pos, e2), c2 in v.items():
            t = (pos, mono_mul(e1, e2))
            s = out.get(t, 0) + c1 * c2
            if s:
                out[t] = s
            else:
                del out[t]
    return out


def _monic(v: VecT, morder: ModuleOrder) -> VecT:
    c = v[vec_lead(v, morder)]
    return v if c == 1 else vec_scale(v, Fraction(1) / c)


# -- division ------------------------------------------------------------


def vec_reduce(v: VecT, basis: list[VecT], morder: ModuleOrder,
               leads: list[Term] | None = None,
               with_lift: bool = False):
    """Full normal form of ``v`` modulo ``basis``.

    Returns ``remainder`` or, with ``with_lift``, ``(remainder, quotients)``
    where ``v = sum(quotients[i] * basis[i]) + remainder`` and each quotient
    is a ``dict[Exponents, Fraction]``.
    """
    if leads is None:
        leads = [vec_lead(g, morder) for g in basis]
    quotients: list[dict[Exponents, Fraction]] = [{} for _ in basis] if with_lift else []
    remainder: VecT = {}
    work = dict(v)
    while work:
        t = max(work, key=morder.key)
        pos, exps = t
        hit = -1
        for i, (lp, le) in enumerate(leads):
            if lp == pos and mono_divides(le, exps):
                hit = i
                break
        if hit < 0:
            remainder[t] = work.pop(t)
            continue
        g = basis[hit]
        mono = mono_div(exps, leads[hit][1])
        coeff = work[t] / g[leads[hit]]
        work = vec_sub_scaled(work, g, mono, coeff)
        if with_lift:
            q = quotients[hit]
            q[mono] = q.get(mono, Fraction(0)) + coeff
    if with_lift:
        return remainder, quotients
    return remainder


# -- Buchberger ----------------------------------------------------------


def _spair(f: VecT, g: VecT, lf: Term, lg: Term) -> VecT:
    lcm = mono_lcm(lf[1], lg[1])
    a = vec_sub_scaled({}, f, mono_div(lcm, lf[1]), Fraction(-1) / f[lf])
    return vec_sub_scaled(a, g, mono_div(lcm, lg[1]), Fraction(1) / g[lg])


def buchberger(vecs: list[VecT], morder: ModuleOrder, rank_one: bool = False) -> list[VecT]:
    """Groebner basis of the span, via normal pair selection with the
    Gebauer-Moeller update.  The coprime-lead shortcut is sound only in
    ambient rank one, so callers must flag that case explicitly."""
    basis: list[VecT] = []
    leads: list[Term] = []
    pairs: dict[tuple[int, int], tuple[int, Exponents]] = {}

    def add(v: VecT) -> None:
        v = _monic(v, morder)
        new = len(basis)
        lnew = vec_lead(v, morder)
        # Gebauer-Moeller B: discard old pairs strictly refined by the newcomer.
        for (i, j) in list(pairs):
            if leads[i][0] != lnew[0]:
                continue
            lcm_ij = pairs[(i, j)][1]
            if (
                mono_divides(lnew[1], lcm_ij)
                and mono_lcm(leads[i][1], lnew[1]) != lcm_ij
                and mono_lcm(leads[j][1], lnew[1]) != lcm_ij
            ):
                del pairs[(i, j)]
        fresh = []
        for i in range(new):
            if leads[i][0] == lnew[0]:
                fresh.append((i, mono_lcm(leads[i][1], lnew[1])))
        fresh.sort(key=lambda item: (sum(item[1]), morder.order.key(item[1]), item[0]))
        kept: list[tuple[int, Exponents]] = []
        for i, lcm in fresh:
            if any(mono_divides(k_lcm, lcm) for _, k_lcm in kept):
                continue
            kept.append((i, lcm))
        for i, lcm in kept:
            if rank_one and mono_mul(leads[i][1], lnew[1]) == lcm:
                continue  # coprime leads, S-pair reduces to zero
            pairs[(i, new)] = (lnew[0], lcm)
        basis.append(v)
        leads.append(lnew)

    for v in vecs:
        if v:
            add(v)
    while pairs:
        (i, j) = min(pairs, key=lambda ij: (morder.key(pairs[ij]), ij))
        del pairs[(i, j)]
        s = _spair(basis[i], basis[j], leads[i], leads[j])
        if not s:
            continue
        r = vec_reduce(s, basis, morder, leads)
        if r:
            add(r)
    return basis


def interreduce(basis: list[VecT], morder: ModuleOrder) -> list[VecT]:
    """Minimal, tail-reduced, monic basis (the unique reduced GB when the
    input is a GB)."""
    order_key = lambda v: morder.key(vec_lead(v, morder))
    work = sorted((v for v in basis if v), key=order_key)
    kept: list[VecT] = []
    kept_leads: list[Term] = []
    for v in work:
        pos, exps = vec_lead(v, morder)
        if any(lp == pos and mono_divides(le, exps) for lp, le in kept_leads):
            continue
        kept.append(v)
        kept_leads.append((pos, exps))
    reduced = []
    for i, v in enumerate(kept):
        others = kept[:i] + kept[i + 1 :]
        lothers = kept_leads[:i] + kept_leads[i + 1 :]
        r = vec_reduce(v, others, morder, lothers) if others else v
        reduced.append(_monic(r, morder))
    reduced.sort(key=lambda v: morder.key(vec_lead(v, morder)), reverse=True)
    return reduced


def reduced_groebner(vecs: list[VecT], morder: ModuleOrder, rank_one: bool = False) -> list[VecT]:
    return interreduce(buchberger(vecs, morder, rank_one=rank_one), morder)


def is_groebner(basis: list[VecT], morder: ModuleOrder) -> bool:
    """Direct Buchberger-criterion check; used by tests as an oracle."""
    basis = [v for v in basis if v]
    leads = [vec_lead(v, morder) for v in basis]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if leads[i][0] != leads[j][0]:
                continue
            s = _spair(basis[i], basis[j], leads[i], leads[j])
            if s and vec_reduce(s, basis, morder, leads):
                return False
    return True


# -- spans with membership, lifts and syzygies ---------------------------


class SpanGB:
    """Groebner data for the span of ``vecs`` inside S^rank.

    Built on the graph trick: a basis of span{(v_i, e_i)} in S^(rank+k) with
    the first block dominant yields, in one computation, a GB of the span,
    normal forms with lifts, and a generating set of syzygies.  Every
    element ``(h, c)`` of the graph span satisfies ``h = sum(c_i * v_i) +
    (v-part of the original combination)``; concretely reduction of ``(v,
    0)`` to ``(h, c)`` certifies ``v = h - sum(c_i * v_i)``.
    """

    def __init__(self, ring: PolyRing, rank: int, vecs: list[VecT],
                 order: MonomialOrder | None = None):
        self.ring = ring
        self.rank = rank
        self.vecs = list(vecs)
        k = len(vecs)
        blocks = (0,) * rank + (1,) * k
        self.morder = ModuleOrder(order or ring.order, blocks)
        graph = []
        for i, v in enumerate(vecs):
            g = dict(v)
            g[(rank + i, (0,) * ring.nvars)] = Fraction(1)
            graph.append(g)
        gb = buchberger(graph, self.morder)
        gb = interreduce(gb, self.morder)
        self._graph_gb = gb
        self._graph_leads = [vec_lead(g, self.morder) for g in gb]
        self.gb = []         # GB of the span itself
        self._syz: list[VecT] = []  # syzygies, as vectors in S^k
        for g in gb:
            first = {t: c for t, c in g.items() if t[0] < rank}
            second = {(t[0] - rank, t[1]): c for t, c in g.items() if t[0] >= rank}
            if first:
                self.gb.append(first)
            else:
                self._syz.append(second)
        self.gb_leads = [vec_lead(v, self.morder) for v in self.gb]

    def normal_form(self, v: VecT) -> VecT:
        return vec_reduce(v, self.gb, self.morder, self.gb_leads)

    def contains(self, v: VecT) -> bool:
        return not self.normal_form(v)

    def nf_with_lift(self, v: VecT) -> tuple[VecT, list[VecT] | None]:
        """Normal form plus, when the remainder is zero, coefficients
        ``c`` with ``v = sum(c_i * v_i)`` (``c_i`` as rank-one VecT)."""
        work = dict(v)
        r = vec_reduce(work, self._graph_gb, self.morder, self._graph_leads)
        first = {t: c for t, c in r.items() if t[0] < self.rank}
        if first:
            return first, None
        coeffs: list[VecT] = [{} for _ in self.vecs]
        for (pos, e), c in r.items():
            coeffs[pos - self.rank][(0, e)] = -c
        return {}, coeffs

    def lift(self, v: VecT) -> list[Poly] | None:
        rem, coeffs = self.nf_with_lift(v)
        if rem:
            return None
        return [vec_to_polys(self.ring, 1, c)[0] for c in coeffs]

    def syzygies(self) -> list[VecT]:
        """Generators of {c in S^k : sum(c_i * v_i) = 0}."""
        return [dict(s) for s in self._syz]


def syzygy_basis(ring: PolyRing, rank: int, vecs: list[VecT],
                 order: MonomialOrder | None = None) -> list[VecT]:
    return SpanGB(ring, rank, vecs, order=order).syzygies()


def kernel_through(ring: PolyRing, source_count: int, columns: list[VecT],
                   target_relations: list[VecT]) -> list[VecT]:
    """Generators of {c in S^p : sum(c_i * columns_i) in span(target_relations)}.

    The columns and relations live in a common free module; syzygies of the
    concatenated list are projected onto the column block.
    """
    combined = list(columns) + list(target_relations)
    ambient_rank = 0
    for v in combined:
        for (pos, _e) in v:
            ambient_rank = max(ambient_rank, pos + 1)
    syz = syzygy_basis(ring, ambient_rank, combined)
    out: list[VecT] = []
    seen = set()
    for s in syz:
        proj = {t: c for t, c in s.items() if t[0] < source_count}
        if proj:
            sig = frozenset((t, c) for t, c in _monic(proj, module_order(ring, source_count)).items())
            if sig not in seen:
                seen.add(sig)
                out.append(proj)
    return out


def span_contains_all(span: SpanGB, vecs: list[VecT]) -> bool:
    return all(span.contains(v) for v in vecs)


def spans_equal(ring: PolyRing, rank: int, a: list[VecT], b: list[VecT]) -> bool:
    sa = SpanGB(ring, rank, a)
    sb = SpanGB(ring, rank, b)
    return span_contains_all(sa, b) and span_contains_all(sb, a)


def intersect_spans(ring: PolyRing, rank: int, a: list[VecT], b: list[VecT]) -> list[VecT]:
    """Generators of span(a) ∩ span(b): for each syzygy of a++b, the a-part
    combination lands in both spans."""
    syz = syzygy_basis(ring, rank, list(a) + list(b))
    out = []
    for s in syz:
        u: VecT = {}
        for (pos, e), c in s.items():
            if pos < len(a):
                u = vec_add(u, vec_mul_poly(a[pos], Poly(ring, {e: c})))
        if u:
            out.append(u)
    return out


def quotient_by_poly(ring: PolyRing, rank: int, span: list[VecT], f: Poly) -> list[VecT]:
    """Generators of (span : f) = {u in S^rank : f*u in span}."""
    unit = (0,) * ring.nvars
    cols = []
    for i in range(rank):
        e_i: VecT = {(i, unit): Fraction(1)}
        cols.append(vec_mul_poly(e_i, f))
    return kernel_through(ring, rank, cols, span)


def saturate_by_poly(ring: PolyRing, rank: int, span: list[VecT], f: Poly) -> list[VecT]:
    """Generators of (span : f^infinity), by iterating (.: f) to stability."""
    current = list(span)
    while True:
        bigger = quotient_by_poly(ring, rank, current, f)
        cur_gb = SpanGB(ring, rank, current)
        if span_contains_all(cur_gb, bigger):
            return current
        current = bigger
