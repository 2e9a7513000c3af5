"""Graded dimension counting for modules over Q[x..][t]/(t^n).

Hilbert series are stored exactly as a numerator polynomial in z over the
denominator prod_i (1 - z^(w_i)), one factor per ambient variable with its
weight.  Numerators come from lead-term modules of a Groebner basis through
the standard divide-and-conquer recursion on monomial ideals.  Polynomial
extraction (dimension as a polynomial in the degree) is exact over the
rationals and only defined when every weight involved is 1; modules whose
t-weight differs are first restricted to the base ring, one generator copy
per t-power.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .arith import ArithError, Exponents, Poly, PolyRing
from .groebner import SpanGB, VecT, module_order, vec_from_polys, vec_lead
from . import fpmod


class HilbertError(ArithError):
    """Raised for ungraded input or unusable weight vectors."""


# -- series ---------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """numerator / prod (1 - z^w) with integer numerator coefficients."""

    numerator_coeffs: tuple[tuple[int, int], ...]   # sorted (degree, coeff)
    weights: tuple[int, ...]                        # sorted denominator weights

    @staticmethod
    def make(num: dict[int, int], weights: tuple[int, ...]) -> HilbertSeries:
        cleaned = tuple(sorted((d, c) for d, c in num.items() if c))
        return HilbertSeries(cleaned, tuple(sorted(weights)))

    def shifted(self, k: int) -> HilbertSeries:
        return HilbertSeries(tuple((d + k, c) for d, c in self.numerator_coeffs),
                             self.weights)

    def dimensions(self, up_to: int) -> list[int]:
        arr = [0] * (up_to + 1)
        for d, c in self.numerator_coeffs:
            if 0 <= d <= up_to:
                arr[d] += c
        for w in self.weights:
            if w <= 0:
                raise HilbertError("cannot expand a series with non-positive weights")
            for k in range(w, up_to + 1):
                arr[k] += arr[k - w]
        return arr

    def dimension(self, d: int) -> int:
        if d < 0:
            return 0
        return self.dimensions(d)[d]

    def is_zero(self) -> bool:
        return not self.numerator_coeffs

    def __str__(self) -> str:
        if not self.numerator_coeffs:
            return "0"
        parts = []
        for d, c in self.numerator_coeffs:
            mono = "1" if d == 0 else ("z" if d == 1 else f"z^{d}")
            if d == 0:
                parts.append(str(c))
            else:
                mag = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
                parts.append(f"-{mag}" if c < 0 else mag)
        num = " + ".join(parts).replace("+ -", "- ")
        counts: dict[int, int] = {}
        for w in self.weights:
            counts[w] = counts.get(w, 0) + 1
        den = "*".join(f"(1 - z^{w})^{m}" if m > 1 else f"(1 - z^{w})"
                       for w, m in sorted(counts.items())).replace("z^1)", "z)")
        return f"({num}) / ({den})" if den else f"({num})"


def _interreduce_monomials(gens: list[Exponents]) -> list[Exponents]:
    out: list[Exponents] = []
    for e in sorted(set(gens), key=lambda e: (sum(e), e)):
        if not any(all(a <= b for a, b in zip(f, e)) for f in out):
            out.append(e)
    return out


def monomial_quotient_numerator(gens: list[Exponents], weights: tuple[int, ...],
                                _memo: dict | None = None) -> dict[int, int]:
    """Numerator of the series of S/(monomial ideal), by recursion on one
    generator at a time: N(I) = N(I - m) - z^deg(m) * N((I - m) : m)."""
    if _memo is None:
        _memo = {}
    gens = _interreduce_monomials(gens)
    key = tuple(gens)
    if key in _memo:
        return dict(_memo[key])
    if not gens:
        result: dict[int, int] = {0: 1}
    elif any(sum(e) == 0 for e in gens):
        result = {}
    elif len(gens) == 1:
        d = sum(w * a for w, a in zip(weights, gens[0]))
        result = {0: 1, d: -1} if d else {}
    else:
        m = gens[-1]
        rest = gens[:-1]
        a = monomial_quotient_numerator(rest, weights, _memo)
        colon = [tuple(max(x - y, 0) for x, y in zip(e, m)) for e in rest]
        b = monomial_quotient_numerator(colon, weights, _memo)
        dm = sum(w * x for w, x in zip(weights, m))
        result = dict(a)
        for d, c in b.items():
            result[d + dm] = result.get(d + dm, 0) - c
        result = {d: c for d, c in result.items() if c}
    _memo[key] = dict(result)
    return result


def _validate_weights(ring: PolyRing, weights: tuple[int, ...] | None) -> tuple[int, ...]:
    if weights is None:
        weights = (1,) * ring.nvars
    if len(weights) != ring.nvars:
        raise HilbertError(f"expected {ring.nvars} weights, got {len(weights)}")
    if any(w <= 0 for w in weights):
        raise HilbertError("grading is not positive: all weights must be >= 1")
    return tuple(weights)


def hilbert_series_ideal(ring: PolyRing, gens: list[Poly],
                         weights: tuple[int, ...] | None = None) -> HilbertSeries:
    """Series of S/(gens); a reduced Groebner basis is computed internally."""
    from .groebner import reduced_groebner

    weights = _validate_weights(ring, weights)
    vecs = [vec_from_polys((g,)) for g in gens if not g.is_zero()]
    gb = reduced_groebner(vecs, module_order(ring, 1), rank_one=True)
    leads = [vec_lead(v, module_order(ring, 1))[1] for v in gb]
    num = monomial_quotient_numerator(leads, weights)
    return HilbertSeries.make(num, weights)


def module_series(ring: PolyRing, rank: int, columns: list[VecT],
                  gen_degrees: tuple[int, ...],
                  weights: tuple[int, ...]) -> HilbertSeries:
    """Series of ring^rank (with generator degree shifts) modulo the span of
    the given vector columns."""
    weights = _validate_weights(ring, weights)
    morder = module_order(ring, rank)
    leads_by_pos: dict[int, list[Exponents]] = {j: [] for j in range(rank)}
    if columns:
        span = SpanGB(ring, rank, columns)
        for v in span.gb:
            pos, exps = vec_lead(v, morder)
            leads_by_pos[pos].append(exps)
    num: dict[int, int] = {}
    memo: dict = {}
    for j in range(rank):
        kj = monomial_quotient_numerator(leads_by_pos[j], weights, memo)
        for d, c in kj.items():
            dd = d + gen_degrees[j]
            num[dd] = num.get(dd, 0) + c
    return HilbertSeries.make(num, weights)


def hilbert_series_presmod(M) -> HilbertSeries:
    """Series of a graded module over R[n]; positive t-weight is handled
    directly over S, weight zero through restriction to the base ring."""
    if M.grading is None:
        raise HilbertError("hilbert series needs grading data")
    w = M.grading.t_weight
    ring = M.ring
    if w >= 1:
        weights = (1,) * ring.base.nvars + (w,)
        return module_series(ring.S, M.ngens, M.effective_relations(),
                             M.grading.gen_degrees, weights)
    base_ring, rank, cols, degrees = restricted_base_data(M)
    return module_series(base_ring, rank, cols, degrees, (1,) * base_ring.nvars)


def restricted_base_data(M) -> tuple[PolyRing, int, list[VecT], tuple[int, ...]]:
    """M as a module over the base ring: one generator per (original
    generator, t-power) pair, each S-relation unfolded across t-powers."""
    if M.grading is None:
        raise HilbertError("restriction of scalars needs grading data")
    ring = M.ring
    n, g = ring.n, M.ngens
    w = M.grading.t_weight
    degrees = tuple(M.grading.gen_degrees[j] + k * w
                    for j in range(g) for k in range(n))
    cols: list[VecT] = []
    for col in M.relations:
        parts = [[ring.t_coefficient(p, l) for l in range(n)] for p in col]
        for k in range(n):
            vec: VecT = {}
            for j in range(g):
                for l in range(n - k):
                    q = parts[j][l]
                    for e, c in q.terms.items():
                        vec[(j * n + (l + k), e)] = c
            if vec:
                cols.append(vec)
    return ring.base, g * n, cols, degrees


# -- polynomials ----------------------------------------------------------


@dataclass(frozen=True)
class HilbertPolynomial:
    """Exact polynomial in the degree variable, ascending coefficients."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(coeffs: list[Fraction]) -> HilbertPolynomial:
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return HilbertPolynomial(tuple(coeffs))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, d: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * d + c
        return acc

    def __add__(self, other: HilbertPolynomial) -> HilbertPolynomial:
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return HilbertPolynomial.make(out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "1" if k == 0 else ("d" if k == 1 else f"d^{k}")
            if k == 0:
                body = f"{abs(c)}"
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else ("-" + s[2:] if s.startswith("- ") else s)


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def polynomial_from_series(hs: HilbertSeries) -> HilbertPolynomial:
    """The eventual dimension polynomial of a series whose weights are all 1:
    for numerator sum a_j z^j over (1-z)^v this is
    sum a_j * binom(d - j + v - 1, v - 1), exact for d >= max j."""
    if any(w != 1 for w in hs.weights):
        raise HilbertError("polynomial extraction requires all weights equal to 1")
    v = len(hs.weights)
    k = v - 1
    total = [Fraction(0)] * max(k + 1, 1)
    for j, c in hs.numerator_coeffs:
        # binom(d - j + v - 1, k) as a polynomial in d
        term = [Fraction(1)]
        for s in range(k):
            term = _poly_mul(term, [Fraction(v - 1 - j - s), Fraction(1)])
        scale = Fraction(c, factorial(k))
        for i, x in enumerate(term):
            total[i] += scale * x
    return HilbertPolynomial.make(total)


def hilbert_polynomial(M) -> HilbertPolynomial:
    """Dimension-in-degree polynomial of a graded module, through restriction
    of scalars to the base ring (valid for any t-weight >= 0).

    The extracted polynomial is checked against brute-force dimension counts
    at three degrees past the point where the series becomes polynomial."""
    base_ring, rank, cols, degrees = restricted_base_data(M)
    weights = (1,) * base_ring.nvars
    hs = module_series(base_ring, rank, cols, degrees, weights)
    poly = polynomial_from_series(hs)
    start = max([j for j, _ in hs.numerator_coeffs] + [0])
    for d in range(start, start + 3):
        counted = dimension_by_enumeration(base_ring, rank, cols, degrees,
                                           weights, d)
        if poly.evaluate(d) != counted:
            raise HilbertError(
                f"series polynomial disagrees with the direct count in degree {d}")
    return poly


def layer_base_series(G) -> HilbertSeries:
    """Series of a t-annihilated graded layer as a base-ring module: kill t
    in the relation columns and count over Q[x..] alone."""
    if G.grading is None:
        raise HilbertError("layer series needs grading data")
    ring = G.ring
    cols: list[VecT] = []
    for col in G.relations:
        reduced = tuple(ring.drop_t(p) for p in col)
        if any(p.terms for p in reduced):
            cols.append(vec_from_polys(reduced))
    return module_series(ring.base, G.ngens, cols, G.grading.gen_degrees,
                         (1,) * ring.base.nvars)


def reduced_hilbert_polynomial(M, filtration=None,
                               verify: bool = True) -> HilbertPolynomial:
    """Hilbert polynomial through the t-power layer decomposition: the sum of
    the base-ring polynomials of the image-filtration layers.  With verify,
    the annihilator-filtration layers and the direct restriction of scalars
    must give the same answer.

    A caller-supplied FiltrationChain may be passed as well; its quotients
    must all be annihilated by t, and its layer sum must agree with the
    canonical value."""
    if M.grading is None:
        raise HilbertError("reduced hilbert polynomial needs grading data")
    chain = fpmod.first_canonical_filtration(M)
    total = HilbertPolynomial.make([])
    for i in range(M.ring.n):
        layer = chain.quotient(i)
        total = total + polynomial_from_series(layer_base_series(layer))
    if verify:
        chain2 = fpmod.second_canonical_filtration(M)
        alt = HilbertPolynomial.make([])
        for k in range(len(chain2.members) - 1):
            layer = chain2.quotient(k)
            alt = alt + polynomial_from_series(layer_base_series(layer))
        direct = hilbert_polynomial(M)
        if not (total == alt == direct):
            raise HilbertError(
                f"layer polynomials disagree: {total} vs {alt} vs {direct}")
    if filtration is not None:
        supplied = HilbertPolynomial.make([])
        for k in range(len(filtration.members) - 1):
            layer = filtration.quotient(k)
            if not layer.is_t_annihilated():
                raise HilbertError(
                    f"supplied filtration quotient {k} is not annihilated by t")
            supplied = supplied + polynomial_from_series(layer_base_series(layer))
        if supplied != total:
            raise HilbertError(
                f"supplied filtration sums to {supplied}, canonical value is {total}")
    return total


@dataclass(frozen=True)
class ReducedRankDegree:
    support_dimension: int
    rank_coefficient: Fraction      # leading coefficient times m!
    degree_coefficient: Fraction    # next coefficient times (m-1)!


def rank_degree_reduced(M) -> ReducedRankDegree:
    p = reduced_hilbert_polynomial(M)
    m = p.degree()
    if m < 0:
        return ReducedRankDegree(-1, Fraction(0), Fraction(0))
    lead = p.coeffs[m] * factorial(m)
    sub = p.coeffs[m - 1] * factorial(m - 1) if m >= 1 else Fraction(0)
    return ReducedRankDegree(m, lead, sub)


# -- brute-force dimension counts (independent of the series machinery) ----


def monomials_of_weighted_degree(nvars: int, weights: tuple[int, ...],
                                 d: int) -> list[Exponents]:
    if d < 0:
        return []
    out: list[Exponents] = []

    def rec(i: int, remaining: int, acc: list[int]) -> None:
        if i == nvars:
            if remaining == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        top = remaining // w
        for e in range(top + 1):
            acc.append(e)
            rec(i + 1, remaining - e * w, acc)
            acc.pop()

    rec(0, d, [])
    return out


def dimension_by_enumeration(ring: PolyRing, rank: int, columns: list[VecT],
                             gen_degrees: tuple[int, ...],
                             weights: tuple[int, ...], d: int) -> int:
    """Dimension of the degree-d part of ring^rank (shifted) / span(columns),
    by listing monomial basis vectors and row-reducing the span in that
    degree.  Columns must be homogeneous."""
    weights = _validate_weights(ring, weights)
    basis: list[tuple[int, Exponents]] = []
    index: dict[tuple[int, Exponents], int] = {}
    for j in range(rank):
        for e in monomials_of_weighted_degree(ring.nvars, weights, d - gen_degrees[j]):
            index[(j, e)] = len(basis)
            basis.append((j, e))
    if not basis:
        return 0

    def wdeg(e: Exponents) -> int:
        return sum(w * x for w, x in zip(weights, e))

    span_rows: list[list[Fraction]] = []
    for col in columns:
        if not col:
            continue
        degs = {wdeg(e) + gen_degrees[pos] for (pos, e) in col}
        if len(degs) != 1:
            raise HilbertError("brute-force count needs homogeneous columns")
        dc = degs.pop()
        for m in monomials_of_weighted_degree(ring.nvars, weights, d - dc):
            row = [Fraction(0)] * len(basis)
            for (pos, e), c in col.items():
                shifted = tuple(a + b for a, b in zip(e, m))
                row[index[(pos, shifted)]] += c
            span_rows.append(row)

    rank_rows = 0
    pivots: list[tuple[int, list[Fraction]]] = []
    for row in span_rows:
        for pc, pr in pivots:
            if row[pc] != 0:
                f = row[pc]
                row = [a - f * b for a, b in zip(row, pr)]
        lead = next((i for i, v in enumerate(row) if v != 0), None)
        if lead is None:
            continue
        inv = Fraction(1) / row[lead]
        row = [v * inv for v in row]
        pivots.append((lead, row))
        rank_rows += 1
    return len(basis) - rank_rows


def presmod_dimension_by_enumeration(M, d: int) -> int:
    """Brute-force graded dimension of a PresMod at degree d."""
    if M.grading is None:
        raise HilbertError("dimension count needs grading data")
    w = M.grading.t_weight
    ring = M.ring
    if w >= 1:
        weights = (1,) * ring.base.nvars + (w,)
        return dimension_by_enumeration(ring.S, M.ngens, M.effective_relations(),
                                        M.grading.gen_degrees, weights, d)
    base_ring, rank, cols, degrees = restricted_base_data(M)
    return dimension_by_enumeration(base_ring, rank, cols, degrees,
                                    (1,) * base_ring.nvars, d)
