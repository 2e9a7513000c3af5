"""Finitely presented modules over the truncated ring R[n] = Q[x..][t]/(t^n).

A module is a cokernel presentation: a free cover S^g together with relation
columns; the truncation relations t^n*e_i are adjoined silently everywhere,
so callers work with honest R[n]-modules while all Groebner computations run
over the plain polynomial ring S = Q[x.., t].

The t-power filtrations are the organizing structure:

* descending images   M = M_0 ⊇ M_1 ⊇ ... ⊇ M_n = 0,   M_i = t^i M
* ascending kernels   0 = A_0 ⊆ A_1 ⊆ ... ⊆ A_n = M,   A_i = ann(t^i)

with layer quotients G_i = M_i / M_{i+1} and G^(i) = A_i / A_{i-1}, the
comparison maps between consecutive layers induced by multiplication by t,
and their kernels/cokernels measuring how far the two filtrations are from
coinciding.  A module where they coincide is called balanced here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import ArithError, Poly, mono_div, mono_divides
from .groebner import (
    SpanGB,
    VecT,
    kernel_through,
    module_order,
    vec_from_polys,
    vec_to_polys,
)
from .multiring import TruncRing

Column = tuple[Poly, ...]


class ModuleError(ArithError):
    """Raised for inconsistent module data or violated preconditions."""


@dataclass(frozen=True)
class Grading:
    """Degrees of the free-cover generators plus the weight of t (base
    variables always weigh 1)."""

    gen_degrees: tuple[int, ...]
    t_weight: int = 1


def column_degree(ring: TruncRing, col: Column, grading: Grading) -> int | None:
    """The common degree of all terms of a homogeneous relation column;
    None for a zero column.  Raises on inhomogeneous input."""
    weights = (1,) * ring.base.nvars + (grading.t_weight,)
    deg: int | None = None
    for j, p in enumerate(col):
        for e in p.terms:
            d = sum(w * x for w, x in zip(weights, e)) + grading.gen_degrees[j]
            if deg is None:
                deg = d
            elif d != deg:
                raise ModuleError(f"inhomogeneous column {tuple(str(q) for q in col)}")
    return deg


class PresMod:
    """An R[n]-module presented by relation columns over a free cover."""

    def __init__(self, ring: TruncRing, ngens: int, relations: list[Column],
                 grading: Grading | None = None):
        self.ring = ring
        self.ngens = ngens
        cleaned: list[Column] = []
        for col in relations:
            if len(col) != ngens:
                raise ModuleError(f"relation of length {len(col)}, expected {ngens}")
            col = tuple(ring.truncate(ring.inject(p) if p.ring == ring.base else p)
                        for p in col)
            if any(p for p in col):
                cleaned.append(col)
        self.relations = cleaned
        if grading is not None:
            if len(grading.gen_degrees) != ngens:
                raise ModuleError("grading length does not match generator count")
            for col in cleaned:
                column_degree(ring, col, grading)
        self.grading = grading
        self._span: SpanGB | None = None

    def __repr__(self) -> str:
        return f"<PresMod {self.ngens} gens, {len(self.relations)} relations over {self.ring!r}>"

    # -- spans ----------------------------------------------------------

    def effective_relations(self) -> list[VecT]:
        rels = [vec_from_polys(c) for c in self.relations]
        return rels + self.ring.t_power_relations(self.ngens)

    def rel_span(self) -> SpanGB:
        if self._span is None:
            self._span = SpanGB(self.ring.S, self.ngens, self.effective_relations())
        return self._span

    def element_is_zero(self, vec: Column | VecT) -> bool:
        v = vec_from_polys(vec) if isinstance(vec, tuple) else vec
        return self.rel_span().contains(v)

    def elements_equal(self, a: Column, b: Column) -> bool:
        return self.element_is_zero(tuple(p - q for p, q in zip(a, b)))

    def is_zero_module(self) -> bool:
        return all(self.element_is_zero(self.gen_column(i)) for i in range(self.ngens))

    def is_t_annihilated(self) -> bool:
        t = self.ring.t
        return all(self.element_is_zero(tuple(t * p for p in self.gen_column(i)))
                   for i in range(self.ngens))

    def gen_column(self, i: int) -> Column:
        return tuple(self.ring.S.one() if j == i else self.ring.S.zero()
                     for j in range(self.ngens))

    def zero_column(self) -> Column:
        return tuple(self.ring.S.zero() for _ in range(self.ngens))


def free_module(ring: TruncRing, rank: int, gen_degrees: tuple[int, ...] | None = None,
                t_weight: int = 1) -> PresMod:
    grading = Grading(gen_degrees or (0,) * rank, t_weight)
    return PresMod(ring, rank, [], grading)


def truncated_free(ring: TruncRing, i: int, degree: int = 0, t_weight: int = 1) -> PresMod:
    """R[i] = R[n]/(t^i) as an R[n]-module (one generator, relation t^i)."""
    if not 0 <= i <= ring.n:
        raise ModuleError(f"truncation level {i} out of range for n={ring.n}")
    return PresMod(ring, 1, [(ring.t ** i,)], Grading((degree,), t_weight))


def direct_sum(*mods: PresMod) -> PresMod:
    ring = mods[0].ring
    if any(m.ring != ring for m in mods):
        raise ModuleError("direct sum over mixed rings")
    total = sum(m.ngens for m in mods)
    rels: list[Column] = []
    offset = 0
    for m in mods:
        for col in m.relations:
            padded = [ring.S.zero()] * total
            for j, p in enumerate(col):
                padded[offset + j] = p
            rels.append(tuple(padded))
        offset += m.ngens
    grading = None
    if all(m.grading is not None for m in mods):
        tw = {m.grading.t_weight for m in mods}
        if len(tw) == 1:
            degs = sum((m.grading.gen_degrees for m in mods), ())
            grading = Grading(degs, tw.pop())
    return PresMod(ring, total, rels, grading)


# -- submodules and chains ------------------------------------------------


class Submodule:
    """A submodule of a PresMod, recorded by generators in the free cover."""

    def __init__(self, ambient: PresMod, gens: list[Column]):
        self.ambient = ambient
        self.gens = [tuple(ambient.ring.truncate(p) for p in g) for g in gens]
        self._span: SpanGB | None = None

    def span(self) -> SpanGB:
        # Span of the generators together with the ambient relations: the
        # full preimage of the submodule in the free cover.
        if self._span is None:
            vecs = [vec_from_polys(g) for g in self.gens]
            self._span = SpanGB(self.ambient.ring.S, self.ambient.ngens,
                                vecs + self.ambient.effective_relations())
        return self._span

    def contains(self, vec: Column) -> bool:
        return self.span().contains(vec_from_polys(vec))

    def contains_submodule(self, other: Submodule) -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: Submodule) -> bool:
        return self.contains_submodule(other) and other.contains_submodule(self)

    def is_zero(self) -> bool:
        return all(self.ambient.element_is_zero(g) for g in self.gens)

    def intersection_gens(self, other: Submodule) -> list[Column]:
        from .groebner import intersect_spans

        ring = self.ambient.ring
        a = [vec_from_polys(g) for g in self.gens] + self.ambient.effective_relations()
        b = [vec_from_polys(g) for g in other.gens] + self.ambient.effective_relations()
        met = intersect_spans(ring.S, self.ambient.ngens, a, b)
        return [vec_to_polys(ring.S, self.ambient.ngens, v) for v in met]

    def sum_gens(self, other: Submodule) -> list[Column]:
        return list(self.gens) + list(other.gens)


class FiltrationChain:
    """A descending chain of submodules from the ambient module to zero."""

    def __init__(self, ambient: PresMod, members: list[Submodule], validate: bool = True):
        self.ambient = ambient
        self.members = members
        if validate:
            full = Submodule(ambient, [ambient.gen_column(i) for i in range(ambient.ngens)])
            if not members or not members[0].equals(full):
                raise ModuleError("chain must start at the ambient module")
            if not members[-1].is_zero():
                raise ModuleError("chain must end at zero")
            for a, b in zip(members, members[1:]):
                if not a.contains_submodule(b):
                    raise ModuleError("chain members must descend")

    def __len__(self) -> int:
        return len(self.members)

    def quotient(self, k: int) -> PresMod:
        """Presentation of members[k]/members[k+1]."""
        return subquotient(self.ambient, self.members[k].gens, self.members[k + 1].gens)

    def quotients(self) -> list[PresMod]:
        return [self.quotient(k) for k in range(len(self.members) - 1)]


def subquotient(M: PresMod, a_gens: list[Column], b_gens: list[Column]) -> PresMod:
    """Present span(a_gens)/(span(b_gens) + 0) inside M; generators are the
    classes of a_gens, relations are complete by the syzygy computation."""
    ring = M.ring
    a_vecs = [vec_from_polys(g) for g in a_gens]
    b_vecs = [vec_from_polys(g) for g in b_gens]
    rel_cols = kernel_through(ring.S, len(a_vecs), a_vecs,
                              b_vecs + M.effective_relations())
    cols = [vec_to_polys(ring.S, len(a_vecs), v) for v in rel_cols]
    grading = None
    if M.grading is not None:
        try:
            degs = []
            for g in a_gens:
                d = column_degree(ring, g, M.grading)
                degs.append(0 if d is None else d)
            grading = Grading(tuple(degs), M.grading.t_weight)
        except ModuleError:
            grading = None
    return PresMod(ring, len(a_vecs), cols, grading)


def quotient_by_submodule(M: PresMod, gens: list[Column]) -> PresMod:
    """M / span(gens): same generators, extra relations."""
    return PresMod(M.ring, M.ngens, M.relations + [tuple(g) for g in gens], M.grading)


def restrict_to_base(M: PresMod) -> PresMod:
    """M/tM with the t-action killed; still presented over the same ring."""
    t_gens = [tuple(M.ring.t * p for p in M.gen_column(i)) for i in range(M.ngens)]
    return quotient_by_submodule(M, t_gens)


# -- canonical filtrations ------------------------------------------------


def first_canonical_filtration(M: PresMod) -> FiltrationChain:
    """The descending chain of images of multiplication by t^i."""
    ring = M.ring
    members = []
    for i in range(ring.n + 1):
        gens = [tuple(ring.t ** i * p for p in M.gen_column(j)) for j in range(M.ngens)]
        members.append(Submodule(M, gens))
    return FiltrationChain(M, members, validate=False)


def annihilator_kernel(M: PresMod, i: int) -> list[Column]:
    """Generators of {m in M : t^i m = 0}, via a syzygy computation."""
    ring = M.ring
    cols = [vec_from_polys(tuple(ring.t ** i * p for p in M.gen_column(j)))
            for j in range(M.ngens)]
    ker = kernel_through(ring.S, M.ngens, cols, M.effective_relations())
    return [vec_to_polys(ring.S, M.ngens, v) for v in ker]


def second_canonical_filtration(M: PresMod) -> FiltrationChain:
    """The chain of t-power annihilators, stored descending:
    M = ann(t^n) ⊇ ann(t^(n-1)) ⊇ ... ⊇ ann(t^0) = 0."""
    members = [Submodule(M, annihilator_kernel(M, i))
               for i in range(M.ring.n, -1, -1)]
    return FiltrationChain(M, members, validate=False)


# -- maps -----------------------------------------------------------------


class ModMap:
    """A homomorphism between presented modules, as images of generators.

    Columns live in the target's free cover; construction verifies that
    every source relation maps into the target's relation span.
    """

    def __init__(self, source: PresMod, target: PresMod, columns: list[Column],
                 check: bool = True):
        if len(columns) != source.ngens:
            raise ModuleError(f"{len(columns)} image columns for {source.ngens} generators")
        self.source = source
        self.target = target
        self.columns = [tuple(target.ring.truncate(p) for p in c) for c in columns]
        if check:
            for rel in source.relations:
                img = self.apply_cover(rel)
                if not target.element_is_zero(img):
                    raise ModuleError("images do not respect a source relation")

    def apply_cover(self, vec: Column) -> Column:
        """Image of an element given in source free-cover coordinates."""
        ring = self.target.ring
        out = [ring.S.zero()] * self.target.ngens
        for i, coeff in enumerate(vec):
            if coeff.is_zero():
                continue
            for j, p in enumerate(self.columns[i]):
                out[j] = out[j] + coeff * p
        return tuple(ring.truncate(p) for p in out)

    def compose(self, inner: ModMap) -> ModMap:
        """self after inner (inner acts first)."""
        if inner.target is not self.source and inner.target.ngens != self.source.ngens:
            raise ModuleError("composition mismatch")
        cols = [self.apply_cover(c) for c in inner.columns]
        return ModMap(inner.source, self.target, cols, check=False)

    def kernel_gens(self) -> list[Column]:
        ring = self.target.ring
        cols = [vec_from_polys(c) for c in self.columns]
        ker = kernel_through(ring.S, self.source.ngens, cols,
                             self.target.effective_relations())
        return [vec_to_polys(ring.S, self.source.ngens, v) for v in ker]

    def kernel_presentation(self) -> PresMod:
        return subquotient(self.source, self.kernel_gens(), [])

    def is_injective(self) -> bool:
        return all(self.source.element_is_zero(g) for g in self.kernel_gens())

    def image_submodule(self) -> Submodule:
        return Submodule(self.target, list(self.columns))

    def cokernel_presentation(self) -> PresMod:
        return quotient_by_submodule(self.target, list(self.columns))

    def is_surjective(self) -> bool:
        span = self.image_submodule().span()
        return all(span.contains(vec_from_polys(self.target.gen_column(j)))
                   for j in range(self.target.ngens))


def express_in_submodule(M: PresMod, sub_gens: list[Column], vec: Column) -> Column | None:
    """Coefficients writing ``vec`` as a combination of ``sub_gens`` modulo
    the relations of M; None when vec is not in the submodule."""
    ring = M.ring
    vecs = [vec_from_polys(g) for g in sub_gens] + M.effective_relations()
    span = SpanGB(ring.S, M.ngens, vecs)
    lifted = span.lift(vec_from_polys(vec))
    if lifted is None:
        return None
    return tuple(ring.truncate(p) for p in lifted[: len(sub_gens)])


# -- comparison maps between filtration layers ----------------------------


@dataclass
class ComparisonData:
    """Layer data of both t-power filtrations.

    lambdas[i] is the injection layer^(i+2) -> layer^(i+1) of the annihilator
    filtration (multiplication by t), mus[i] the surjection layer_i ->
    layer_(i+1) of the image filtration, gamma_ker[i] = ker(mus[i]) and
    gamma_coker[i] = coker(lambdas[i]); all lists run over i = 0..n-2.
    """

    lower_layers: list[PresMod]      # G_i, i = 0..n-1
    upper_layers: list[PresMod]      # G^(i), i = 1..n
    lower_members: list[Submodule]   # M_i, i = 0..n
    upper_members: list[Submodule]   # ann(t^i), i = 0..n
    lambdas: list[ModMap]
    mus: list[ModMap]
    gamma_ker: list[PresMod]
    gamma_coker: list[PresMod]


def comparison_maps(M: PresMod) -> ComparisonData:
    ring = M.ring
    n = ring.n
    first = first_canonical_filtration(M)
    lower_members = first.members
    upper_members_desc = second_canonical_filtration(M).members
    upper_members = list(reversed(upper_members_desc))  # index i = ann(t^i)

    lower_layers = [subquotient(M, lower_members[i].gens, lower_members[i + 1].gens)
                    for i in range(n)]
    upper_layers = [subquotient(M, upper_members[i + 1].gens, upper_members[i].gens)
                    for i in range(n)]  # entry i = layer^(i+1)

    def upper_layer(i: int) -> PresMod:
        return upper_layers[i - 1]

    lambdas: list[ModMap] = []
    for i in range(1, n):
        src = upper_layer(i + 1)
        tgt = upper_layer(i)
        cols = []
        for g in upper_members[i + 1].gens:
            tg = tuple(ring.t * p for p in g)
            lifted = express_in_submodule(M, upper_members[i].gens, tg)
            if lifted is None:
                raise ModuleError("t-image escaped the next annihilator (presentation bug)")
            cols.append(lifted)
        lam = ModMap(src, tgt, cols)
        if not lam.is_injective():
            raise ModuleError("annihilator layer map failed injectivity")
        lambdas.append(lam)

    mus: list[ModMap] = []
    for i in range(n - 1):
        src = lower_layers[i]
        tgt = lower_layers[i + 1]
        cols = [tgt.gen_column(j) for j in range(tgt.ngens)]
        mu = ModMap(src, tgt, cols)
        if not mu.is_surjective():
            raise ModuleError("image layer map failed surjectivity")
        mus.append(mu)

    gamma_ker = [mu.kernel_presentation() for mu in mus]
    gamma_coker = [lam.cokernel_presentation() for lam in lambdas]

    return ComparisonData(
        lower_layers=lower_layers,
        upper_layers=upper_layers,
        lower_members=lower_members,
        upper_members=upper_members,
        lambdas=lambdas,
        mus=mus,
        gamma_ker=gamma_ker,
        gamma_coker=gamma_coker,
    )


# -- balanced test --------------------------------------------------------


@dataclass
class BalancedReport:
    balanced: bool
    by_composite: bool
    by_filtration: bool
    witness_level: int | None = None    # i with ann(t^(n-i)) ⊄ t^i M
    witness: Column | None = None       # cover coordinates of an offender
    note: str = ""


def is_balanced(M: PresMod) -> BalancedReport:
    """Two independent routes: surjectivity of the composite of all
    annihilator layer injections, and levelwise equality t^i M = ann(t^(n-i));
    the routes must agree."""
    ring = M.ring
    n = ring.n

    data = comparison_maps(M) if n >= 2 else None
    if n <= 1:
        by_composite = True
    else:
        composite = data.lambdas[0]
        for lam in data.lambdas[1:]:
            composite = composite.compose(lam)
        # composite: layer^(n) -> layer^(1)
        by_composite = composite.is_surjective()

    by_filtration = True
    witness_level = None
    witness = None
    first_members = (data.lower_members if data is not None
                     else first_canonical_filtration(M).members)
    upper_members = (data.upper_members if data is not None
                     else list(reversed(second_canonical_filtration(M).members)))
    for i in range(1, n):
        lower = Submodule(M, first_members[i].gens)
        for g in upper_members[n - i].gens:
            if not lower.contains(g):
                by_filtration = False
                witness_level = i
                witness = g
                break
        if not by_filtration:
            break

    if by_composite != by_filtration:
        raise ModuleError(
            f"balanced criteria disagree (composite={by_composite}, filtration={by_filtration})"
        )
    note = ("all comparison kernels and cokernels vanish" if by_composite
            else f"ann(t^{n - (witness_level or 0)}) exceeds t^{witness_level} M")
    return BalancedReport(by_composite, by_composite, by_filtration,
                          witness_level, witness, note)


# -- freeness and types ---------------------------------------------------


def base_relation_matrix(Q: PresMod) -> list[list[Poly]]:
    """Relation matrix of a t-annihilated module over the base ring
    (rows = generators), obtained by killing t in the relation columns."""
    ring = Q.ring
    rows: list[list[Poly]] = [[] for _ in range(Q.ngens)]
    for col in Q.relations:
        reduced = [ring.drop_t(p) for p in col]
        if all(p.is_zero() for p in reduced):
            continue
        for j in range(Q.ngens):
            rows[j].append(reduced[j])
    return rows


def minimal_graded_presentation(gen_degrees: list[int], matrix: list[list[Poly]]
                                ) -> tuple[list[int], list[list[Poly]]]:
    """Iteratively split off generators hit by unit (constant) relation
    entries; on homogeneous data the result is the minimal presentation."""
    degs = list(gen_degrees)
    rows = [list(r) for r in matrix]
    while True:
        ncols = len(rows[0]) if rows else 0
        pivot = None
        for j in range(ncols):
            for k in range(len(rows)):
                p = rows[k][j]
                if p.terms and p.total_degree() == 0:
                    pivot = (k, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        k, j = pivot
        c = rows[k][j].constant_term()
        col_j = [rows[r][j].scale(Fraction(1) / c) for r in range(len(rows))]
        for jj in range(ncols):
            if jj == j:
                continue
            factor = rows[k][jj]
            if factor.is_zero():
                continue
            for r in range(len(rows)):
                rows[r][jj] = rows[r][jj] - factor * col_j[r]
        del degs[k]
        rows = [row for r, row in enumerate(rows) if r != k]
        rows = [[row[jj] for jj in range(ncols) if jj != j] for row in rows]
        if rows:
            keep = [jj for jj in range(len(rows[0]))
                    if any(rows[r][jj].terms for r in range(len(rows)))]
            rows = [[row[jj] for jj in keep] for row in rows]
    return degs, rows


@dataclass
class QuasiFreeReport:
    type_vector: tuple[int, ...] | None
    layer_ranks: list[int] | None = None
    first_nonfree: int | None = None
    note: str = ""


def quasi_free_type(M: PresMod) -> QuasiFreeReport:
    """Type (m_1..m_n) when every image-filtration layer is a free base
    module; requires grading data (freeness is decided through the minimal
    graded presentation)."""
    if M.grading is None:
        raise ModuleError("quasi_free_type needs grading data")
    n = M.ring.n
    chain = first_canonical_filtration(M)
    ranks: list[int] = []
    for i in range(n):
        layer = chain.quotient(i)
        if layer.grading is None:
            raise ModuleError("filtration layer lost its grading")
        degs, rows = minimal_graded_presentation(
            list(layer.grading.gen_degrees), base_relation_matrix(layer))
        if rows and rows[0]:
            return QuasiFreeReport(None, None, i,
                                   note=f"layer {i} of the image filtration is not free")
        ranks.append(len(degs))
    ranks.append(0)
    mvec = tuple(ranks[i - 1] - ranks[i] for i in range(1, n + 1))
    if any(m < 0 for m in mvec):
        return QuasiFreeReport(None, ranks[:-1], None,
                               note="rank sequence not decreasing; input not quasi-free")
    return QuasiFreeReport(mvec, ranks[:-1], None, note="all layers free")


def _exact_div(p: Poly, q: Poly) -> Poly:
    ring = p.ring
    out = ring.zero()
    r = p
    while r.terms:
        le, lc = r.leading()
        qe, qc = q.leading()
        if not mono_divides(qe, le):
            raise ModuleError("inexact division in fraction-free elimination")
        m = ring.monomial(mono_div(le, qe), lc / qc)
        out = out + m
        r = r - m * q
    return out


def generic_rank(matrix: list[list[Poly]]) -> int:
    """Rank over the fraction field of the base ring, by fraction-free
    (Bareiss) Gaussian elimination with exact polynomial division."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    nrows, ncols = len(rows), len(rows[0])
    rank = 0
    prev = None
    r0 = 0
    for c in range(ncols):
        pivot_row = None
        for r in range(r0, nrows):
            if rows[r][c].terms:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[r0], rows[pivot_row] = rows[pivot_row], rows[r0]
        piv = rows[r0][c]
        for r in range(r0 + 1, nrows):
            for cc in range(ncols):
                if cc == c:
                    continue
                num = rows[r][cc] * piv - rows[r][c] * rows[r0][cc]
                rows[r][cc] = _exact_div(num, prev) if prev is not None and num.terms else num
            rows[r][c] = rows[r][c].ring.zero()
        prev = piv
        rank += 1
        r0 += 1
        if r0 >= nrows:
            break
    return rank


def generic_type(M: PresMod) -> tuple[int, ...]:
    """Type of the generic fiber M ⊗ K[n]: layer ranks over Frac(base)."""
    n = M.ring.n
    chain = first_canonical_filtration(M)
    ranks = []
    for i in range(n):
        layer = chain.quotient(i)
        matrix = base_relation_matrix(layer)
        ranks.append(layer.ngens - generic_rank(matrix))
    ranks.append(0)
    return tuple(ranks[i - 1] - ranks[i] for i in range(1, n + 1))


# -- extensions -----------------------------------------------------------


@dataclass
class ExtensionResult:
    module: PresMod
    inclusion: ModMap     # N -> module
    projection: ModMap    # module -> M


def build_extension(N: PresMod, M: PresMod, f1_columns: list[Column],
                    verify: bool = False) -> ExtensionResult:
    """Glue N below M along a map from M's relation cover into N.

    M's presentation is read as a two-step cover F1 -> F0 -> M with F1 free
    on the relation columns; f1_columns gives the image in N of each F1
    basis vector.  The result is the cokernel of the combined map into
    N ⊕ F0, with its inclusion of N and projection onto M.
    """
    ring = M.ring
    if N.ring != ring:
        raise ModuleError("extension over mixed rings")
    q = len(M.relations)
    if len(f1_columns) != q:
        raise ModuleError(f"need one image per relation column ({q}), got {len(f1_columns)}")
    # The map must kill the relations among the relation columns, computed
    # over R[n]; otherwise it does not descend to im(F1 -> F0).
    phi1 = [vec_from_polys(c) for c in M.relations]
    syz2 = kernel_through(ring.S, q, phi1, ring.t_power_relations(M.ngens)) if q else []
    for s in syz2:
        polys = vec_to_polys(ring.S, q, s)
        img = [ring.S.zero()] * N.ngens
        for r, coeff in enumerate(polys):
            if coeff.is_zero():
                continue
            for l, p in enumerate(f1_columns[r]):
                img[l] = img[l] + coeff * p
        if not N.element_is_zero(tuple(img)):
            raise ModuleError("descent condition fails: images do not kill relation syzygies")

    total = N.ngens + M.ngens
    zero = ring.S.zero()
    rels: list[Column] = []
    for col in N.relations:
        rels.append(tuple(col) + (zero,) * M.ngens)
    for r in range(q):
        rels.append(tuple(f1_columns[r]) + tuple(M.relations[r]))

    grading = None
    if N.grading is not None and M.grading is not None \
            and N.grading.t_weight == M.grading.t_weight:
        candidate = Grading(N.grading.gen_degrees + M.grading.gen_degrees,
                            N.grading.t_weight)
        try:
            probe = PresMod(ring, total, rels, candidate)
            grading = candidate
            P = probe
        except ModuleError:
            P = PresMod(ring, total, rels, None)
    else:
        P = PresMod(ring, total, rels, None)

    incl = ModMap(N, P, [P.gen_column(k) for k in range(N.ngens)], check=False)
    proj = ModMap(P, M, [M.zero_column()] * N.ngens
                  + [M.gen_column(i) for i in range(M.ngens)], check=False)
    if verify:
        if not incl.is_injective():
            raise ModuleError("extension inclusion failed injectivity")
        if not proj.is_surjective():
            raise ModuleError("extension projection failed surjectivity")
        for k in range(N.ngens):
            if not M.element_is_zero(proj.apply_cover(incl.columns[k])):
                raise ModuleError("extension composite is nonzero")
        img = incl.image_submodule()
        for g in proj.kernel_gens():
            if not img.contains(g):
                raise ModuleError("extension kernel exceeds the included copy")
    return ExtensionResult(P, incl, proj)


def extension_R_by_Ri(ring: TruncRing, sigma: Poly, i: int,
                      verify: bool = False) -> ExtensionResult:
    """The extension of R = R[n]/(t) by R[i] classified by sigma: cokernel
    of (sigma, t) together with the truncation relation t^i on the lower
    generator.  Unit sigma at the origin gives R[i+1]; sigma = 0 splits."""
    if not 1 <= i <= ring.n - 1:
        raise ModuleError(f"level must satisfy 1 <= i <= n-1, got {i}")
    sigma = ring.inject(sigma) if sigma.ring == ring.base else sigma
    tw = 1
    sdeg = sigma.weighted_degree((1,) * ring.base.nvars + (tw,))
    graded = sigma.is_homogeneous((1,) * ring.base.nvars + (tw,))
    N = truncated_free(ring, i, degree=(tw - sdeg) if graded and sigma.terms else 0)
    M = truncated_free(ring, 1)
    if not graded:
        N = PresMod(ring, 1, N.relations, None)
        M = PresMod(ring, 1, M.relations, None)
    return build_extension(N, M, [(sigma,)], verify=verify)


# -- filtration refinement ------------------------------------------------


def refine_filtrations(D: FiltrationChain, F: FiltrationChain
                       ) -> tuple[FiltrationChain, FiltrationChain, list[tuple]]:
    """Common-refinement chains with matched layer quotients.

    Between consecutive members of D, the members of F are threaded through
    by D_{i+1} + (D_i ∩ F_j); dually for F.  The crosswise layer quotients
    match up pairwise (Zassenhaus), which is checked by comparing graded
    Hilbert series; the returned pairing lists ((i,j), series) entries for
    the nonzero layers.
    """
    from .hilbert import hilbert_series_presmod

    M = D.ambient
    if M is not F.ambient and M.ngens != F.ambient.ngens:
        raise ModuleError("refinement needs a common ambient module")
    if M.grading is None:
        raise ModuleError("refinement requires a graded ambient module")

    d_members = D.members
    f_members = F.members

    def thread(outer: list[Submodule], inner: list[Submodule]) -> tuple[list[Submodule], dict]:
        chain: list[Submodule] = []
        index: dict[tuple[int, int], int] = {}
        for i in range(len(outer) - 1):
            for j in range(len(inner)):
                inter = Submodule(M, outer[i].gens).intersection_gens(inner[j])
                gens = list(outer[i + 1].gens) + inter
                sub = Submodule(M, gens)
                index[(i, j)] = len(chain)
                chain.append(sub)
        chain.append(outer[-1])
        return chain, index

    d_chain, d_index = thread(d_members, f_members)
    f_chain, f_index = thread(f_members, d_members)

    pairing = []
    for i in range(len(d_members) - 1):
        for j in range(len(f_members) - 1):
            dq = subquotient(M, d_chain[d_index[(i, j)]].gens,
                             d_chain[d_index[(i, j)] + 1].gens)
            fq = subquotient(M, f_chain[f_index[(j, i)]].gens,
                             f_chain[f_index[(j, i)] + 1].gens)
            hs_d = hilbert_series_presmod(dq)
            hs_f = hilbert_series_presmod(fq)
            if hs_d != hs_f:
                raise ModuleError(
                    f"crosswise layers ({i},{j}) disagree: {hs_d} vs {hs_f}")
            if hs_d.numerator_coeffs:
                pairing.append(((i, j), hs_d))

    def collapse(chain: list[Submodule]) -> list[Submodule]:
        out = [chain[0]]
        for sub in chain[1:]:
            if not out[-1].equals(sub):
                out.append(sub)
        return out

    d_ref = FiltrationChain(M, collapse(d_chain), validate=False)
    f_ref = FiltrationChain(M, collapse(f_chain), validate=False)
    return d_ref, f_ref, pairing


# -- Hom and Ext ----------------------------------------------------------


def _block_relations(N: PresMod, blocks: int) -> list[VecT]:
    """Effective relations of N^blocks in flat coordinates (block b spans
    positions b*N.ngens .. (b+1)*N.ngens - 1)."""
    out: list[VecT] = []
    p = N.ngens
    for b in range(blocks):
        for rel in N.effective_relations():
            out.append({(b * p + pos, e): c for (pos, e), c in rel.items()})
    return out


@dataclass
class HomModule:
    """Hom(M, N) presented as an R[n]-module; generators are stored as flat
    matrices (source generator index major, target index minor)."""

    presentation: PresMod
    source: PresMod
    target: PresMod
    gen_matrices: list[list[Column]]    # per Hom generator: images of source gens

    def as_map(self, coefficients: list[Poly]) -> ModMap:
        ring = self.source.ring
        if len(coefficients) != len(self.gen_matrices):
            raise ModuleError("one coefficient per Hom generator required")
        cols = [[ring.S.zero()] * self.target.ngens for _ in range(self.source.ngens)]
        for c, mat in zip(coefficients, self.gen_matrices):
            if c.is_zero():
                continue
            cf = ring.inject(c) if c.ring == ring.base else c
            for i in range(self.source.ngens):
                for l in range(self.target.ngens):
                    cols[i][l] = cols[i][l] + cf * mat[i][l]
        return ModMap(self.source, self.target,
                      [tuple(ring.truncate(p) for p in col) for col in cols])


def hom_module(M: PresMod, N: PresMod) -> HomModule:
    """Present Hom_{R[n]}(M, N): solutions of the relation conditions inside
    N^(number of M generators), modulo maps with all images zero in N."""
    ring = M.ring
    g, p = M.ngens, N.ngens
    flat = g * p

    def flat_pos(i: int, l: int) -> int:
        return i * p + l

    cond_cols: list[VecT] = []
    for i in range(g):
        for l in range(p):
            col: VecT = {}
            for k, rel in enumerate(M.relations):
                for e, c in rel[i].terms.items():
                    col[(k * p + l, e)] = col.get((k * p + l, e), Fraction(0)) + c
            cond_cols.append(col)
    target_rels = _block_relations(N, len(M.relations)) if M.relations else []
    if M.relations:
        gens_flat = kernel_through(ring.S, flat, cond_cols, target_rels)
    else:
        unit = (0,) * ring.S.nvars
        gens_flat = [{(a, unit): Fraction(1)} for a in range(flat)]

    zero_rels = _block_relations(N, g)
    rel_cols = kernel_through(ring.S, len(gens_flat), gens_flat, zero_rels)

    gen_matrices: list[list[Column]] = []
    for gf in gens_flat:
        polys = vec_to_polys(ring.S, flat, gf)
        gen_matrices.append([tuple(polys[flat_pos(i, l)] for l in range(p))
                             for i in range(g)])

    grading = None
    if M.grading is not None and N.grading is not None \
            and M.grading.t_weight == N.grading.t_weight:
        weights = (1,) * ring.base.nvars + (M.grading.t_weight,)
        degs = []
        ok = True
        for gf in gens_flat:
            d: int | None = None
            for (pos, e), _c in gf.items():
                i, l = divmod(pos, p)
                dd = (sum(w * x for w, x in zip(weights, e))
                      + N.grading.gen_degrees[l] - M.grading.gen_degrees[i])
                if d is None:
                    d = dd
                elif d != dd:
                    ok = False
                    break
            degs.append(0 if d is None else d)
            if not ok:
                break
        if ok:
            grading = Grading(tuple(degs), M.grading.t_weight)

    pres = PresMod(ring, len(gens_flat),
                   [vec_to_polys(ring.S, len(gens_flat), rc) for rc in rel_cols],
                   grading)
    return HomModule(pres, M, N, gen_matrices)


def ext1_module(M: PresMod, N: PresMod) -> PresMod:
    """Ext^1_{R[n]}(M, N) from the start of a free resolution of M: the
    relation columns give F1 -> F0, their syzygies over R[n] give F2 -> F1,
    and Ext^1 is ker(Hom(F1,N) -> Hom(F2,N)) / im(Hom(F0,N) -> Hom(F1,N))."""
    ring = M.ring
    g, p = M.ngens, N.ngens
    q = len(M.relations)
    if q == 0:
        return PresMod(ring, 0, [])
    phi1 = [vec_from_polys(c) for c in M.relations]
    phi2 = kernel_through(ring.S, q, phi1, ring.t_power_relations(g))
    q2 = len(phi2)

    flat = q * p
    if q2:
        cond_cols: list[VecT] = []
        for j in range(q):
            for l in range(p):
                col: VecT = {}
                for k, syz in enumerate(phi2):
                    for (pos, e), c in syz.items():
                        if pos == j:
                            key = (k * p + l, e)
                            col[key] = col.get(key, Fraction(0)) + c
                cond_cols.append(col)
        z_gens = kernel_through(ring.S, flat, cond_cols, _block_relations(N, q2))
    else:
        unit = (0,) * ring.S.nvars
        z_gens = [{(a, unit): Fraction(1)} for a in range(flat)]

    b_cols: list[VecT] = []
    for i in range(g):
        for l in range(p):
            col: VecT = {}
            for j, rel in enumerate(M.relations):
                for e, c in rel[i].terms.items():
                    key = (j * p + l, e)
                    col[key] = col.get(key, Fraction(0)) + c
            if col:
                b_cols.append(col)

    rel_cols = kernel_through(ring.S, len(z_gens), z_gens,
                              b_cols + _block_relations(N, q))

    # Grade as a subquotient of N^(number of relations): flat slot (j, l)
    # carries the degree of N's generator l.  Attached only when every
    # generator comes out homogeneous under that convention.
    grading = None
    if M.grading is not None and N.grading is not None \
            and M.grading.t_weight == N.grading.t_weight:
        weights = (1,) * ring.base.nvars + (M.grading.t_weight,)
        degs = []
        ok = True
        for zg in z_gens:
            d: int | None = None
            for (pos, e), _c in zg.items():
                l = pos % p
                dd = (sum(w * x for w, x in zip(weights, e))
                      + N.grading.gen_degrees[l])
                if d is None:
                    d = dd
                elif d != dd:
                    ok = False
                    break
            degs.append(0 if d is None else d)
            if not ok:
                break
        if ok:
            grading = Grading(tuple(degs), M.grading.t_weight)
            try:
                return PresMod(ring, len(z_gens),
                               [vec_to_polys(ring.S, len(z_gens), rc)
                                for rc in rel_cols], grading)
            except ModuleError:
                pass
    return PresMod(ring, len(z_gens),
                   [vec_to_polys(ring.S, len(z_gens), rc) for rc in rel_cols])


# -- reduction-to-base surjectivity test ----------------------------------


def surjective_iff_restriction(phi: ModMap) -> bool:
    """Surjectivity of phi decided on the t = 0 reduction, cross-checked
    against the direct cokernel test; the two must agree (t is nilpotent,
    so a map onto M/tM is onto M)."""
    direct = phi.is_surjective()
    ring = phi.target.ring
    t_cols = [tuple(ring.t * p for p in phi.target.gen_column(j))
              for j in range(phi.target.ngens)]
    reduced_span = SpanGB(
        ring.S, phi.target.ngens,
        [vec_from_polys(c) for c in phi.columns]
        + [vec_from_polys(c) for c in t_cols]
        + phi.target.effective_relations())
    via_reduction = all(
        reduced_span.contains(vec_from_polys(phi.target.gen_column(j)))
        for j in range(phi.target.ngens))
    if direct != via_reduction:
        raise ModuleError("surjectivity criteria disagree (reduction vs direct)")
    return direct


# -- local (at the origin) vanishing --------------------------------------


def vanishes_locally(Q: PresMod) -> bool:
    """Whether Q localizes to zero at the origin: by the finitely generated
    module version of Nakayama, Q_(x..,t) = 0 iff the constant-term matrix
    of the relation columns has full row rank."""
    g = Q.ngens
    if g == 0:
        return True
    cols = []
    for col in Q.relations:
        vec = [p.constant_term() for p in col]
        if any(vec):
            cols.append(vec)
    # rank over Q of the g x len(cols) matrix
    matrix = [[cols[c][r] for c in range(len(cols))] for r in range(g)]
    rank = 0
    rows = [row[:] for row in matrix]
    ncols = len(cols)
    r0 = 0
    for c in range(ncols):
        piv = next((r for r in range(r0, g) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = Fraction(1) / rows[r0][c]
        rows[r0] = [v * inv for v in rows[r0]]
        for r in range(g):
            if r != r0 and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[r0])]
        rank += 1
        r0 += 1
        if r0 >= g:
            break
    return rank == g


# -- presentation obfuscation (for type-recovery tests) -------------------


def transformed_presentation(M: PresMod, seed: int, steps: int = 12) -> PresMod:
    """An equivalent presentation of M produced by random invertible row and
    column operations (degree-compatible when M is graded), plus redundant
    relation columns; the presented module is unchanged."""
    rng = random.Random(seed)
    ring = M.ring
    g = M.ngens
    rows = [[col[j] for col in M.relations] for j in range(g)]
    degs = list(M.grading.gen_degrees) if M.grading else [0] * g
    tw = M.grading.t_weight if M.grading else 1
    weights = (1,) * ring.base.nvars + (tw,)

    def random_homog(target_deg: int) -> Poly | None:
        if target_deg < 0:
            return None
        if target_deg == 0:
            return ring.S.const(rng.choice([1, -1, 2]))
        # monomial x^a * t^k of weighted degree target_deg with k < n
        for _ in range(8):
            k = rng.randrange(0, ring.n) if tw else 0
            if tw and k * tw > target_deg:
                continue
            rest = target_deg - k * tw
            exps = [0] * ring.base.nvars
            for _ in range(rest):
                exps[rng.randrange(ring.base.nvars)] += 1
            e = tuple(exps) + (k,)
            return ring.S.monomial(e, rng.choice([1, -1, 2]))
        return None

    ncols = lambda: len(rows[0]) if rows and rows[0] else 0

    for _ in range(steps):
        op = rng.choice(["row_add", "col_add", "row_scale", "col_scale",
                         "row_swap", "col_swap", "redundant"])
        nc = ncols()
        if op == "row_add" and g >= 2:
            i, j = rng.sample(range(g), 2)
            q = random_homog(degs[i] - degs[j]) if M.grading else random_homog(rng.randrange(3))
            if q is None:
                continue
            for c in range(nc):
                rows[j][c] = ring.truncate(rows[j][c] + q * rows[i][c])
        elif op == "col_add" and nc >= 2:
            a, b = rng.sample(range(nc), 2)
            if M.grading:
                da = column_degree(ring, tuple(rows[r][a] for r in range(g)),
                                   Grading(tuple(degs), tw))
                db = column_degree(ring, tuple(rows[r][b] for r in range(g)),
                                   Grading(tuple(degs), tw))
                if da is None or db is None:
                    continue
                q = random_homog(db - da)
            else:
                q = random_homog(rng.randrange(3))
            if q is None:
                continue
            for r in range(g):
                rows[r][b] = ring.truncate(rows[r][b] + q * rows[r][a])
        elif op == "row_scale" and g >= 1:
            i = rng.randrange(g)
            c = Fraction(rng.choice([1, -1, 2, 3]))
            for cc in range(nc):
                rows[i][cc] = rows[i][cc].scale(c)
        elif op == "col_scale" and nc >= 1:
            a = rng.randrange(nc)
            c = Fraction(rng.choice([1, -1, 2, 3]))
            for r in range(g):
                rows[r][a] = rows[r][a].scale(c)
        elif op == "row_swap" and g >= 2:
            i, j = rng.sample(range(g), 2)
            for cc in range(nc):
                rows[i][cc], rows[j][cc] = rows[j][cc], rows[i][cc]
            degs[i], degs[j] = degs[j], degs[i]
        elif op == "col_swap" and nc >= 2:
            a, b = rng.sample(range(nc), 2)
            for r in range(g):
                rows[r][a], rows[r][b] = rows[r][b], rows[r][a]
        elif op == "redundant" and nc >= 1:
            a = rng.randrange(nc)
            q = random_homog(tw) or ring.S.one()
            for r in range(g):
                rows[r].append(ring.truncate(q * rows[r][a]))

    cols = [tuple(rows[r][c] for r in range(g)) for c in range(ncols())]
    grading = Grading(tuple(degs), tw) if M.grading else None
    # row scaling by constants keeps homogeneity; row_add was degree-matched
    return PresMod(ring, g, cols, grading)
