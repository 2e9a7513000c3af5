"""Exact multivariate polynomial arithmetic over the rationals.

Polynomials are stored sparsely as a mapping from exponent tuples to
``fractions.Fraction`` coefficients.  A :class:`PolyRing` fixes the variable
names and the active monomial order; every :class:`Poly` carries a reference
to its ring.  The canonical text form (descending terms, reduced fraction
coefficients, ``x^2*y`` monomials) round-trips through :meth:`PolyRing.parse`.
"""

from __future__ import annotations

import re
from fractions import Fraction

Exponents = tuple[int, ...]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


class ArithError(ValueError):
    """Raised for malformed polynomial input or ring mismatches."""


def _grevlex_key(exps: Exponents) -> tuple:
    # Larger total degree wins; ties broken by the smaller exponent at the
    # last position where they differ (classic graded reverse lex).
    return (sum(exps), tuple(-e for e in reversed(exps)))


class MonomialOrder:
    """A monomial order: ``lex``, ``grevlex``, or a two-block elimination
    order (grevlex within each block, first block dominant).

    ``key(exps)`` returns a tuple that sorts ascending with the order, so
    ``max(terms, key=order.key)`` picks the leading monomial.
    """

    def __init__(self, kind: str, block_split: int | None = None):
        if kind not in ("lex", "grevlex", "block"):
            raise ArithError(f"unknown monomial order {kind!r}")
        if (kind == "block") != (block_split is not None):
            raise ArithError("block orders need a split index, others must not have one")
        self.kind = kind
        self.block_split = block_split

    def key(self, exps: Exponents) -> tuple:
        if self.kind == "lex":
            return exps
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        k = self.block_split
        return (_grevlex_key(exps[:k]), _grevlex_key(exps[k:]))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.block_split == other.block_split
        )

    def __repr__(self) -> str:
        if self.kind == "block":
            return f"MonomialOrder('block', block_split={self.block_split})"
        return f"MonomialOrder({self.kind!r})"


def lex() -> MonomialOrder:
    return MonomialOrder("lex")


def grevlex() -> MonomialOrder:
    return MonomialOrder("grevlex")


def elim_block(split: int) -> MonomialOrder:
    """Elimination order: the first ``split`` variables dominate the rest."""
    return MonomialOrder("block", block_split=split)


def mono_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Exponents, b: Exponents) -> bool:
    """True when the monomial with exponents ``a`` divides the one with ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """Q[variables] with a fixed monomial order."""

    def __init__(self, variables: tuple[str, ...] | list[str], order: MonomialOrder | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ArithError(f"duplicate variable names in {variables}")
        self.variables = variables
        self.nvars = len(variables)
        self.order = order if order is not None else grevlex()
        self._index = {v: i for i, v in enumerate(variables)}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.order == other.order
        )

    def __repr__(self) -> str:
        return f"PolyRing({self.variables}, {self.order!r})"

    # -- constructors -------------------------------------------------

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, c) -> Poly:
        c = Fraction(c)
        if c == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def gen(self, name: str) -> Poly:
        if name not in self._index:
            raise ArithError(f"{name!r} is not a variable of {self.variables}")
        exps = [0] * self.nvars
        exps[self._index[name]] = 1
        return Poly(self, {tuple(exps): Fraction(1)})

    def gens(self) -> list[Poly]:
        return [self.gen(v) for v in self.variables]

    def monomial(self, exps: Exponents, coeff=1) -> Poly:
        if len(exps) != self.nvars:
            raise ArithError(f"expected {self.nvars} exponents, got {exps}")
        c = Fraction(coeff)
        return Poly(self, {tuple(exps): c} if c else {})

    def from_terms(self, terms: dict[Exponents, Fraction]) -> Poly:
        clean = {tuple(e): Fraction(c) for e, c in terms.items() if c != 0}
        for e in clean:
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise ArithError(f"bad exponent tuple {e}")
        return Poly(self, clean)

    # -- text form -----------------------------------------------------

    def format(self, p: Poly) -> str:
        if not p.terms:
            return "0"
        parts: list[str] = []
        for exps in sorted(p.terms, key=self.order.key, reverse=True):
            coeff = p.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e
            )
            mag = abs(coeff)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def parse(self, text: str) -> Poly:
        """Parse ``+ - * / ^`` expressions (also ``**``) over the ring
        variables; division is only by nonzero constants."""
        return _Parser(self, text).parse()


class Poly:
    """Immutable sparse polynomial; do not mutate ``terms`` after creation."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict[Exponents, Fraction]):
        self.ring = ring
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ArithError("mixed rings in polynomial arithmetic")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        raise ArithError(f"cannot coerce {other!r} into {self.ring!r}")

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other) -> Poly:
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        terms: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = mono_mul(e1, e2)
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ArithError(f"polynomial power must be a nonnegative int, got {k!r}")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> Poly:
        c = Fraction(c)
        if c == 0:
            return self.ring.zero()
        return Poly(self.ring, {e: c * v for e, v in self.terms.items()})

    # -- inspection ----------------------------------------------------

    def total_degree(self) -> int:
        """Maximum total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def weighted_degree(self, weights: tuple[int, ...]) -> int:
        if not self.terms:
            return -1
        return max(sum(w * x for w, x in zip(weights, e)) for e in self.terms)

    def leading(self, order: MonomialOrder | None = None) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ArithError("the zero polynomial has no leading term")
        order = order or self.ring.order
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def coefficient(self, exps: Exponents) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree_in(self, var: str) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = self.ring._index[var]
        return max(e[i] for e in self.terms)

    def coefficient_in(self, var: str, k: int) -> Poly:
        """The coefficient of ``var^k``, as a polynomial with that variable's
        exponent zeroed out (it stays a member of the same ring)."""
        i = self.ring._index[var]
        terms = {}
        for e, c in self.terms.items():
            if e[i] == k:
                reduced = list(e)
                reduced[i] = 0
                terms[tuple(reduced)] = c
        return Poly(self.ring, terms)

    def is_homogeneous(self, weights: tuple[int, ...] | None = None) -> bool:
        if not self.terms:
            return True
        weights = weights or (1,) * self.ring.nvars
        degs = {sum(w * x for w, x in zip(weights, e)) for e in self.terms}
        return len(degs) == 1

    # -- substitution --------------------------------------------------

    def substitute(self, images: dict[str, Poly]) -> Poly:
        """Evaluate the polynomial at ``var -> image`` (images live in the
        target ring; unmapped variables must not occur)."""
        if not self.terms:
            return next(iter(images.values())).ring.zero() if images else self
        target = next(iter(images.values())).ring if images else self.ring
        for v in self.ring.variables:
            if v not in images and any(e[self.ring._index[v]] for e in self.terms):
                raise ArithError(f"no image supplied for variable {v!r}")
        out = target.zero()
        for e, c in self.terms.items():
            term = target.const(c)
            for v, k in zip(self.ring.variables, e):
                if k:
                    term = term * images[v] ** k
            out = out + term
        return out

    def evaluate(self, point: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.ring.variables, e):
                if k:
                    v *= Fraction(point[name]) ** k
            total += v
        return total

    def evaluate_at_origin(self) -> Fraction:
        return self.constant_term()

    def __str__(self) -> str:
        return self.ring.format(self)

    def __repr__(self) -> str:
        return f"<Poly {self.ring.format(self)}>"


class _Parser:
    """Recursive-descent parser for the canonical polynomial text form."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[str]:
        tokens = []
        i = 0
        while i < len(text):
            m = _TOKEN_RE.match(text, i)
            if not m:
                raise ArithError(f"bad character at position {i} in {text!r}")
            tokens.append(m.group("int") or m.group("name") or m.group("op"))
            i = m.end()
        return tokens

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self) -> str:
        tok = self._peek()
        if tok is None:
            raise ArithError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self._expr()
        if self._peek() is not None:
            raise ArithError(f"trailing input {self.tokens[self.pos:]} in {self.text!r}")
        return p

    def _expr(self) -> Poly:
        negate = False
        while self._peek() in ("+", "-"):
            if self._next() == "-":
                negate = not negate
        p = self._term()
        if negate:
            p = -p
        while self._peek() in ("+", "-"):
            op = self._next()
            q = self._term()
            p = p + q if op == "+" else p - q
        return p

    def _term(self) -> Poly:
        p = self._factor()
        while self._peek() in ("*", "/"):
            op = self._next()
            q = self._factor()
            if op == "*":
                p = p * q
            else:
                if q.total_degree() > 0 or q.is_zero():
                    raise ArithError(f"division only by nonzero constants in {self.text!r}")
                p = p.scale(1 / q.constant_term())
        return p

    def _factor(self) -> Poly:
        p = self._atom()
        while self._peek() in ("^", "**"):
            self._next()
            sign = 1
            while self._peek() == "-":
                self._next()
                sign = -sign
            k = self._next()
            if not k.isdigit():
                raise ArithError(f"exponent must be an integer, got {k!r}")
            if sign < 0:
                raise ArithError("negative exponents are not supported")
            p = p ** int(k)
        return p

    def _atom(self) -> Poly:
        tok = self._next()
        if tok == "(":
            p = self._expr()
            if self._next() != ")":
                raise ArithError(f"unbalanced parentheses in {self.text!r}")
            return p
        if tok == "-":
            return -self._atom()
        if tok.isdigit():
            return self.ring.const(int(tok))
        if tok in self.ring._index:
            return self.ring.gen(tok)
        raise ArithError(f"unknown symbol {tok!r} (variables are {self.ring.variables})")
