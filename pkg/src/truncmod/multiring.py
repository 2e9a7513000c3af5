"""The truncated extension R[t]/(t^n) of a polynomial base ring R = Q[x1..xd].

Elements are polynomials in the base variables and t, reduced so that no
term carries t^n or higher.  An element is a zero divisor exactly when its
t-free part vanishes; the complement (elements with nonzero t-free part) is
the multiplicative system used for generic-fiber arguments.

Ring substitution maps that fix every variable mod t and scale t by a local
unit form the automorphism groupoid used for double-structure gluing data;
for n = 2 such a map is captured by a derivation-like coefficient vector D
plus a multiplier alpha, with composition law D = D_outer + alpha_outer *
D_inner.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import ArithError, MonomialOrder, Poly, PolyRing, grevlex
from .groebner import VecT

T_NAME = "t"


class TruncRing:
    """Q[base_vars][t]/(t^n); ``S`` is the ambient polynomial ring, ``base``
    the subring of t-free polynomials."""

    def __init__(self, base_vars: tuple[str, ...] | list[str], n: int,
                 order: MonomialOrder | None = None):
        if n < 1:
            raise ArithError(f"multiplicity must be >= 1, got {n}")
        base_vars = tuple(base_vars)
        if T_NAME in base_vars:
            raise ArithError(f"{T_NAME!r} is reserved for the truncation variable")
        self.n = n
        self.base = PolyRing(base_vars, order or grevlex())
        self.S = PolyRing(base_vars + (T_NAME,), order or grevlex())
        self.t = self.S.gen(T_NAME)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TruncRing) and self.S == other.S and self.n == other.n

    def __repr__(self) -> str:
        return f"TruncRing({self.base.variables}, n={self.n})"

    # -- polynomial plumbing in S ---------------------------------------

    def truncate(self, p: Poly) -> Poly:
        """Reduce mod t^n (drop terms of t-degree >= n)."""
        ti = self.S._index[T_NAME]
        return Poly(self.S, {e: c for e, c in p.terms.items() if e[ti] < self.n})

    def inject(self, p: Poly) -> Poly:
        """Lift a base polynomial into S."""
        if p.ring == self.S:
            return p
        if p.ring != self.base:
            raise ArithError("polynomial from a foreign ring")
        return Poly(self.S, {e + (0,): c for e, c in p.terms.items()})

    def drop_t(self, p: Poly) -> Poly:
        """Image in the base ring under t -> 0."""
        if p.ring == self.base:
            return p
        ti = self.S._index[T_NAME]
        return Poly(self.base, {e[:-1]: c for e, c in p.terms.items() if e[ti] == 0})

    def t_coefficient(self, p: Poly, k: int) -> Poly:
        """The base polynomial multiplying t^k."""
        ti = self.S._index[T_NAME]
        return Poly(self.base, {e[:-1]: c for e, c in p.terms.items() if e[ti] == k})

    def t_power_relations(self, rank: int) -> list[VecT]:
        """The silent relations t^n * e_i that realize R[n]-semantics inside
        free modules over S."""
        exps = (0,) * self.base.nvars + (self.n,)
        return [{(i, exps): Fraction(1)} for i in range(rank)]

    def parse(self, text: str) -> Poly:
        return self.truncate(self.S.parse(text))

    def elem(self, value) -> TruncElem:
        if isinstance(value, TruncElem):
            return value
        if isinstance(value, str):
            return TruncElem(self, self.parse(value))
        if isinstance(value, Poly):
            if value.ring == self.base:
                value = self.inject(value)
            return TruncElem(self, self.truncate(value))
        return TruncElem(self, self.S.const(value))

    def from_coeffs(self, coeffs: list[Poly]) -> TruncElem:
        if len(coeffs) > self.n:
            raise ArithError(f"at most {self.n} t-coefficients, got {len(coeffs)}")
        p = self.S.zero()
        for k, c in enumerate(coeffs):
            p = p + self.inject(c) * self.t ** k
        return TruncElem(self, p)


class TruncElem:
    """An element of R[n], kept reduced mod t^n."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: TruncRing, poly: Poly):
        self.ring = ring
        self.poly = ring.truncate(poly)

    def coeffs(self) -> list[Poly]:
        return [self.ring.t_coefficient(self.poly, k) for k in range(self.ring.n)]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncElem):
            return self.ring == other.ring and self.poly == other.poly
        return self.poly == other

    def _coerce(self, other) -> TruncElem:
        return other if isinstance(other, TruncElem) else self.ring.elem(other)

    def __add__(self, other):
        return TruncElem(self.ring, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __neg__(self):
        return TruncElem(self.ring, -self.poly)

    def __sub__(self, other):
        return TruncElem(self.ring, self.poly - self._coerce(other).poly)

    def __rsub__(self, other):
        return TruncElem(self.ring, self._coerce(other).poly - self.poly)

    def __mul__(self, other):
        return TruncElem(self.ring, self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return TruncElem(self.ring, self.poly ** k)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"<TruncElem {self.poly} (n={self.ring.n})>"


def is_zero_divisor(u: TruncElem) -> bool:
    """True iff the t-free part of u vanishes (0 counts as a zero divisor)."""
    return u.ring.t_coefficient(u.poly, 0).is_zero()


def zero_divisor_witness(u: TruncElem) -> TruncElem | None:
    """A nonzero v with u*v = 0, when u is a zero divisor; None otherwise.

    For u with vanishing t-free part, t^(n-1) works; in the n = 1 case only
    u = 0 qualifies and any nonzero v annihilates it.
    """
    if not is_zero_divisor(u):
        return None
    ring = u.ring
    if ring.n == 1:
        return ring.elem(1)  # u must be 0 here
    return TruncElem(ring, ring.t ** (ring.n - 1))


def in_multiplicative_system(u: TruncElem) -> bool:
    """Membership in S_n = {u : t-free part nonzero}."""
    return not is_zero_divisor(u)


def invert_local(u: TruncElem, jet_order: int = 6) -> TruncElem:
    """Inverse of a local unit (nonzero constant term), correct modulo
    t^n and modulo (base maximal ideal)^jet_order.  Plain Neumann series:
    u = c(1 - h) with h in the ideal (x1..xd, t), so 1/u = (1/c) * sum h^k,
    and the sum stabilizes once k exceeds both bounds.
    """
    c = u.poly.constant_term()
    if c == 0:
        raise ArithError("not a unit at the origin (zero constant term)")
    ring = u.ring
    h = ring.elem(1) - TruncElem(ring, u.poly.scale(Fraction(1) / c))
    acc = ring.elem(1)
    power = ring.elem(1)
    for _ in range(max(jet_order, ring.n) + 1):
        power = power * h
        power = TruncElem(ring, _drop_high_base_degree(power.poly, jet_order))
        if power.is_zero():
            break
        acc = acc + power
    return TruncElem(ring, acc.poly.scale(Fraction(1) / c))


def _drop_high_base_degree(p: Poly, bound: int) -> Poly:
    nb = p.ring.nvars - 1  # last variable is t
    return Poly(p.ring, {e: c for e, c in p.terms.items() if sum(e[:nb]) < bound})


class AutMap:
    """A substitution endomorphism of R[n]: every base variable maps to
    itself plus a multiple of t, and t maps to alpha*t with alpha a unit at
    the origin.  Such maps are automorphisms locally; composition and
    equality are exact polynomial operations."""

    def __init__(self, ring: TruncRing, var_images: dict[str, Poly], t_image: Poly):
        self.ring = ring
        images: dict[str, Poly] = {}
        for v in ring.base.variables:
            img = ring.truncate(var_images.get(v, ring.S.gen(v)))
            if ring.drop_t(img) != ring.base.gen(v):
                raise ArithError(f"image of {v} must reduce to {v} mod t")
            images[v] = img
        t_image = ring.truncate(t_image)
        if not ring.t_coefficient(t_image, 0).is_zero():
            raise ArithError("image of t must be a multiple of t")
        if ring.n >= 2 and ring.t_coefficient(t_image, 1).constant_term() == 0:
            raise ArithError("t must map to (unit at origin) * t")
        self.var_images = images
        self.t_image = t_image

    @classmethod
    def identity(cls, ring: TruncRing) -> AutMap:
        return cls(ring, {}, ring.t)

    @classmethod
    def from_deriv(cls, ring: TruncRing, d_coeffs: dict[str, Poly], alpha: Poly) -> AutMap:
        """n = 2 form: x_k -> x_k + D(x_k) t and t -> alpha t, with D given
        by base polynomials and alpha a base polynomial, unit at origin."""
        images = {
            v: ring.S.gen(v) + ring.inject(d) * ring.t
            for v, d in d_coeffs.items()
        }
        return cls(ring, images, ring.inject(alpha) * ring.t)

    def deriv_coeff(self, var: str) -> Poly:
        """D(var): the t-linear coefficient of the image of var (n = 2 data)."""
        return self.ring.t_coefficient(self.var_images[var], 1)

    def alpha(self) -> Poly:
        """The t-linear coefficient of the image of t."""
        return self.ring.t_coefficient(self.t_image, 1)

    def apply(self, p: Poly) -> Poly:
        """Image of a polynomial of S (or the base ring) under the map."""
        ring = self.ring
        if p.ring == ring.base:
            p = ring.inject(p)
        table = dict(self.var_images)
        table[T_NAME] = self.t_image
        return ring.truncate(p.substitute(table))

    def apply_elem(self, u: TruncElem) -> TruncElem:
        return TruncElem(self.ring, self.apply(u.poly))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AutMap)
            and self.ring == other.ring
            and self.var_images == other.var_images
            and self.t_image == other.t_image
        )

    def __repr__(self) -> str:
        imgs = ", ".join(f"{v} -> {img}" for v, img in self.var_images.items())
        return f"<AutMap {imgs}; t -> {self.t_image}>"


def compose(phi: AutMap, psi: AutMap) -> AutMap:
    """The map beta -> phi(psi(beta)) (psi acts first).

    For n = 2 the result's derivation data is D_phi + alpha_phi * D_psi and
    its multiplier is alpha_phi * alpha_psi.
    """
    if phi.ring != psi.ring:
        raise ArithError("automorphisms over different rings")
    var_images = {v: phi.apply(img) for v, img in psi.var_images.items()}
    t_image = phi.apply(psi.t_image)
    return AutMap(phi.ring, var_images, t_image)


def verify_cocycle(phi_ij: AutMap, phi_jk: AutMap, phi_ik: AutMap) -> bool:
    """Whether compose(phi_ij, phi_jk) equals phi_ik exactly."""
    return compose(phi_ij, phi_jk) == phi_ik
