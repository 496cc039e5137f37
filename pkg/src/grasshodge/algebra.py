"""Exact coefficient fields, polynomial rings and polynomials.

Monomials are plain exponent tuples over the ring's variable list.  Every
variable carries a bidegree ``(a, b)``; Plücker variables are ``(0, 1)`` and
the Cayley fiber variable ``y_i`` is ``(1, -d_i)``.  Printing and monomial
enumeration use plain degrevlex; the Gröbner engine uses a weighted variant
(see ``groebner.order_weights``).
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import gmpy2

DEFAULT_PRIME = 32003

Monomial = tuple  # exponent vector


class FieldError(ValueError):
    pass


class RationalField:
    """The rationals, elements are ``gmpy2.mpq``."""

    characteristic = 0
    name = "QQ"

    def __call__(self, value) -> gmpy2.mpq:
        if isinstance(value, Fraction):
            return gmpy2.mpq(value.numerator, value.denominator)
        if isinstance(value, str):
            return gmpy2.mpq(value)
        return gmpy2.mpq(value)

    @property
    def zero(self):
        return gmpy2.mpq(0)

    @property
    def one(self):
        return gmpy2.mpq(1)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def normalize(self, a):
        return a

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers modulo a prime ``p``; elements are ints in ``[0, p)``."""

    def __init__(self, p: int = DEFAULT_PRIME):
        if p < 2 or not gmpy2.is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = int(p)
        self.characteristic = self.p
        self.name = f"GF({self.p})"

    def __call__(self, value) -> int:
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, (Fraction, type(gmpy2.mpq(0)))):
            num, den = int(value.numerator), int(value.denominator)
            if den % p == 0:
                raise FieldError(f"denominator {den} vanishes mod {p}")
            return num * pow(den, -1, p) % p
        return int(value) % p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def normalize(self, a):
        return a % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()


def field_from_spec(spec: str | None):
    """Parse ``q`` / ``qq`` or ``fp`` / ``fp:P`` into a field."""
    if spec is None or spec.lower() in ("q", "qq"):
        return QQ
    s = spec.lower()
    if s == "fp":
        return PrimeField(DEFAULT_PRIME)
    if s.startswith("fp:"):
        return PrimeField(int(s[3:]))
    raise FieldError(f"unknown field {spec!r}; expected q or fp[:P]")


class ContextError(ValueError):
    pass


class PolyRing:
    """Polynomial ring over a field with named, bigraded variables.

    ``names`` fixes the variable order, which is also the order used by the
    degrevlex term order (the last variable is the smallest).
    """

    def __init__(self, names: Sequence[str], bidegrees: Sequence[tuple[int, int]], field=QQ):
        if len(names) != len(bidegrees):
            raise ValueError("one bidegree per variable required")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = tuple(names)
        self.bidegrees = tuple((int(a), int(b)) for a, b in bidegrees)
        self.field = field
        self.nvars = len(self.names)
        self.index = {name: i for i, name in enumerate(self.names)}

    def _key(self):
        return (self.names, self.bidegrees, self.field)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"PolyRing({self.nvars} vars over {self.field!r})"

    def with_field(self, field) -> "PolyRing":
        return PolyRing(self.names, self.bidegrees, field)

    @cached_property
    def is_bigraded(self) -> bool:
        return any(a != 0 for a, _ in self.bidegrees)

    # -- monomials -------------------------------------------------------
    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def var_monomial(self, i: int, e: int = 1) -> Monomial:
        m = [0] * self.nvars
        m[i] = e
        return tuple(m)

    def monomial_bidegree(self, m: Monomial) -> tuple[int, int]:
        a = b = 0
        for e, (wa, wb) in zip(m, self.bidegrees):
            if e:
                a += e * wa
                b += e * wb
        return (a, b)

    def monomial_str(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- element constructors ---------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.one_monomial(): self.field.one})

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {self.one_monomial(): self.field(c)})

    def var(self, name_or_index) -> "Polynomial":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return Polynomial(self, {self.var_monomial(i): self.field.one})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def from_dict(self, terms: Mapping[Monomial, object]) -> "Polynomial":
        f = self.field
        clean = {}
        for m, c in terms.items():
            c = f(c)
            if c != 0:
                clean[tuple(m)] = c
        return Polynomial(self, clean)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


def degrevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in degrevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "_terms", "__dict__")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self._terms = terms

    # -- structure ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in decreasing degrevlex order."""
        return sorted(self._terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=degrevlex_key)

    def leading_coefficient(self):
        return self._terms[self.leading_monomial()]

    @cached_property
    def bidegrees(self) -> frozenset:
        return frozenset(self.ring.monomial_bidegree(m) for m in self._terms)

    @property
    def is_homogeneous(self) -> bool:
        """All terms share one bidegree (for rings without fiber variables: one degree)."""
        return len(self.bidegrees) <= 1

    @property
    def bidegree(self) -> tuple[int, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no bidegree")
        if len(self.bidegrees) != 1:
            raise ValueError("polynomial is not bihomogeneous")
        return next(iter(self.bidegrees))

    @property
    def degree(self) -> int:
        """Total degree (x and y variables all of weight one)."""
        if not self._terms:
            return -1
        return max(sum(m) for m in self._terms)

    def variables_used(self) -> set[int]:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ContextError("polynomials live in different rings")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        norm = self.ring.field.normalize
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field.normalize
        return Polynomial(self.ring, {m: norm(-c) for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        field = self.ring.field
        c = field(c)
        if c == 0:
            return self.ring.zero()
        norm = field.normalize
        return Polynomial(self.ring, {m: norm(v * c) for m, v in self._terms.items()})

    def mul_monomial(self, mono: Monomial, c=1) -> "Polynomial":
        field = self.ring.field
        c = field(c)
        if c == 0:
            return self.ring.zero()
        norm = field.normalize
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): norm(v * c) for m, v in self._terms.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        norm = self.ring.field.normalize
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(self.ring, {m: v for m, v in ((m, norm(v)) for m, v in out.items()) if v})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if other == 0:
            return not self._terms
        return self == self.ring.constant(other)

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def primitive(self) -> "Polynomial":
        """Over QQ: integer coefficients with content one and positive leading coefficient."""
        if not self._terms or self.ring.field.characteristic:
            return self.monic()
        den = 1
        for c in self._terms.values():
            den = gmpy2.lcm(den, c.denominator)
        nums = [int(c * den) for c in self._terms.values()]
        g = 0
        for v in nums:
            g = gmpy2.gcd(g, v)
        scale = gmpy2.mpq(den, g)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self.scale(scale)

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Move to a ring with the same variables (e.g. another field)."""
        if ring.names != self.ring.names:
            raise ContextError("variable lists differ")
        return ring.from_dict(self._terms)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(f: Polynomial) -> str:
    """Render in the text grammar accepted by :func:`parse_polynomial`."""
    if f.is_zero():
        return "0"
    char = f.ring.field.characteristic
    out = []
    for m, c in f.sorted_terms():
        if char:
            # symmetric representative reads better
            v = int(c)
            c = v - char if v > char // 2 else v
        neg = c < 0
        a = -c if neg else c
        mono = f.ring.monomial_str(m)
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.column = col


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_]\w*\s*\[[^\]]*\])|(?P<op>[-+*^()])|(?P<bad>\S))"
)


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``x[1,2]^2 + 2*x[1,3]^2``-style text into ``ring``.

    Variable tokens are normalized by dropping whitespace inside brackets;
    Plücker indices must be strictly increasing.
    """
    tokens = []
    for mt in _TOKEN.finditer(text):
        if mt.group("bad") is not None:
            raise PolynomialSyntaxError(f"unexpected character {mt.group('bad')!r}", text, mt.start("bad"))
        kind = mt.lastgroup
        tokens.append((kind, mt.group(kind), mt.start(kind)))
    if text.strip() and not tokens:
        raise PolynomialSyntaxError("empty polynomial", text, 0)
    tokens.append(("end", "", len(text)))
    field = ring.field
    pos = 0
    result: dict = {}

    def peek():
        return tokens[pos]

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def variable(tok):
        _, raw, where = tok
        name = re.sub(r"\s+", "", raw)
        head, inner = name.split("[", 1)
        idx = inner[:-1].split(",") if inner[:-1] else []
        try:
            vals = [int(v) for v in idx]
        except ValueError:
            raise PolynomialSyntaxError(f"bad index list in {raw!r}", text, where) from None
        if head == "x" and any(b <= a for a, b in zip(vals, vals[1:])):
            raise PolynomialSyntaxError(f"indices not increasing in {raw!r}", text, where)
        if name not in ring.index:
            raise PolynomialSyntaxError(f"variable {raw!r} out of range for this ring", text, where)
        return ring.index[name]

    if peek()[0] == "end":
        return ring.zero()
    first = True
    while peek()[0] != "end":
        sign = 1
        kind, val, where = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise PolynomialSyntaxError(f"expected + or -, got {val!r}", text, where)
        first = False
        coeff = Fraction(sign)
        expo = [0] * ring.nvars
        need_factor = True
        while need_factor:
            kind, val, where = take()
            if kind == "num":
                coeff *= Fraction(val)
            elif kind == "var":
                i = variable((kind, val, where))
                e = 1
                if peek()[1] == "^":
                    take()
                    k2, v2, w2 = take()
                    if k2 != "num" or "/" in v2:
                        raise PolynomialSyntaxError("exponent must be a nonnegative integer", text, w2)
                    e = int(v2)
                expo[i] += e
            else:
                raise PolynomialSyntaxError(f"expected coefficient or variable, got {val!r}", text, where)
            if peek()[1] == "*":
                take()
            else:
                need_factor = False
        m = tuple(expo)
        c = field.normalize(result.get(m, field.zero) + field(coeff))
        if c:
            result[m] = c
        else:
            result.pop(m, None)
    return Polynomial(ring, result)


# -- monomial enumeration -------------------------------------------------------

def monomials_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    """All exponent vectors of the given total degree, in lexicographic order."""
    if degree < 0:
        return
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        m = [0] * nvars
        for i in combo:
            m[i] += 1
        yield tuple(m)


def _split_vars(ring: PolyRing):
    xs = [i for i, (a, _) in enumerate(ring.bidegrees) if a == 0]
    ys = [i for i, (a, _) in enumerate(ring.bidegrees) if a != 0]
    return xs, ys


def enumerate_monomials(ring: PolyRing, target) -> list[Monomial]:
    """Monomials of the ring in the slice ``target``.

    ``target`` is a bidegree ``(a, b)`` or, for a ring without fiber
    variables, an integer degree.  Fiber variables must have a-weight one and
    Plücker-type variables a-weight zero with b-weight one.
    """
    a, b = _as_bidegree(target)
    if a < 0:
        return []
    xs, ys = _split_vars(ring)
    for i in xs:
        if ring.bidegrees[i] != (0, 1):
            raise ValueError("enumerate_monomials expects x-variables of bidegree (0,1)")
    for i in ys:
        if ring.bidegrees[i][0] != 1:
            raise ValueError("enumerate_monomials expects y-variables of a-weight one")
    out = []
    for beta in monomials_of_degree(len(ys), a):
        xdeg = b - sum(e * ring.bidegrees[i][1] for e, i in zip(beta, ys))
        if xdeg < 0:
            continue
        for alpha in monomials_of_degree(len(xs), xdeg):
            m = [0] * ring.nvars
            for e, i in zip(alpha, xs):
                m[i] = e
            for e, i in zip(beta, ys):
                m[i] = e
            out.append(tuple(m))
    out.sort(key=degrevlex_key, reverse=True)
    return out


def _as_bidegree(target) -> tuple[int, int]:
    if isinstance(target, int):
        return (0, target)
    a, b = target
    return (int(a), int(b))


def count_monomials(ring: PolyRing, target) -> int:
    """Cardinality of :func:`enumerate_monomials` via the binomial formula."""
    from math import comb

    a, b = _as_bidegree(target)
    if a < 0:
        return 0
    xs, ys = _split_vars(ring)
    nx = len(xs)
    total = 0
    for beta in monomials_of_degree(len(ys), a):
        xdeg = b - sum(e * ring.bidegrees[i][1] for e, i in zip(beta, ys))
        if xdeg >= 0:
            total += comb(xdeg + nx - 1, nx - 1) if nx else int(xdeg == 0)
    return total


def sum_polys(ring: PolyRing, polys: Iterable[Polynomial]) -> Polynomial:
    acc = ring.zero()
    for p in polys:
        acc = acc + p
    return acc
