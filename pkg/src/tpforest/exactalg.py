"""Exact rationals and sparse multivariate polynomials.

Arithmetic is delegated to FLINT's ``fmpq_mpoly``; this module owns the
variable universe, the canonical (degree-lexicographic) text form, the parser
used for ``--set VAR=POLY`` and the coefficientwise partial order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import flint
from flint.utils.flint_exceptions import DomainError

Rational = flint.fmpq

# Sizes of the indexed families in the default universe.
DEFAULT_K = 16  # y1..yK
DEFAULT_M = 24  # phi0..phiM and xi0..xiM (xi is housed, not used)

_BASE_NAMES = ("x", "y", "z", "a", "b", "q", "r", "w", "wp")
_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


class UniverseError(ValueError):
    """Variable unknown to the ring, or operands from different rings."""


def as_rational(c) -> Rational:
    if isinstance(c, Rational):
        return c
    if isinstance(c, (int, flint.fmpz)):
        return Rational(c)
    if isinstance(c, Fraction):
        return Rational(c.numerator, c.denominator)
    raise TypeError(f"not an exact rational: {c!r}")


_RINGS: Dict[Tuple[str, ...], "Ring"] = {}


def _ring_from_names(names: Tuple[str, ...]) -> "Ring":
    return Ring(names)


class Ring:
    """A totally ordered variable universe with its polynomial ring over Q.

    Rings are interned by their name tuple, so two rings with the same
    universe are the same object (this also makes pickling round-trip).
    """

    def __new__(cls, names: Sequence[str]):
        names = tuple(names)
        hit = _RINGS.get(names)
        if hit is not None:
            return hit
        if len(set(names)) != len(names):
            raise UniverseError("duplicate variable names")
        for nm in names:
            if not _NAME_RE.match(nm):
                raise UniverseError(f"bad variable name {nm!r}")
        self = super().__new__(cls)
        self.names = names
        self.index = {nm: i for i, nm in enumerate(names)}
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "deglex")
        self._gens = tuple(MultiPoly(self, g) for g in self.ctx.gens())
        _RINGS[names] = self
        return self

    def __reduce__(self):
        return (_ring_from_names, (self.names,))

    def __repr__(self) -> str:
        return f"Ring({len(self.names)} vars)"

    @property
    def nvars(self) -> int:
        return len(self.names)

    def gen(self, name: str) -> "MultiPoly":
        name = canonical_name(name)
        try:
            return self._gens[self.index[name]]
        except KeyError:
            raise UniverseError(f"variable {name!r} not in universe") from None

    def gens(self, *names: str) -> Tuple["MultiPoly", ...]:
        return tuple(self.gen(n) for n in names)

    def const(self, c) -> "MultiPoly":
        return MultiPoly(self, self.ctx.constant(as_rational(c)))

    def zero(self) -> "MultiPoly":
        return self.const(0)

    def one(self) -> "MultiPoly":
        return self.const(1)

    def phi(self, m: int) -> "MultiPoly":
        name = f"phi{m}"
        if name not in self.index:
            raise UniverseError(f"phi index {m} exceeds the declared prefix")
        return self.gen(name)

    def yvar(self, i: int) -> "MultiPoly":
        name = f"y{i}"
        if name not in self.index:
            raise UniverseError(f"y-weight index {i} exceeds the declared prefix")
        return self.gen(name)

    def from_terms(self, terms: Mapping) -> "MultiPoly":
        """Build from {exponent: coeff}; exponents are full tuples or {name: exp}."""
        d = {}
        n = self.nvars
        for e, c in terms.items():
            if isinstance(e, Mapping):
                v = [0] * n
                for nm, k in e.items():
                    v[self.index[canonical_name(nm)]] += int(k)
                e = tuple(v)
            elif len(e) != n:
                raise UniverseError("exponent vector has wrong length")
            c = as_rational(c)
            if c != 0:
                d[tuple(e)] = d.get(tuple(e), Rational(0)) + c
        return MultiPoly(self, self.ctx.from_dict(d) if d else self.ctx.constant(0))

    def parse(self, text: str) -> "MultiPoly":
        return _Parser(self, text).parse()


def make_ring(K: int = DEFAULT_K, M: int = DEFAULT_M) -> Ring:
    names = list(_BASE_NAMES)
    names += [f"y{i}" for i in range(1, K + 1)]
    names += [f"phi{m}" for m in range(M + 1)]
    names += [f"xi{m}" for m in range(M + 1)]
    return Ring(names)


def canonical_name(name: str) -> str:
    name = name.strip()
    name = name.replace("′", "'")
    if name in ("w'",):
        return "wp"
    if name.startswith("φ"):
        return "phi" + name[1:]
    if name.startswith("ξ"):
        return "xi" + name[1:]
    return name


# ---------------------------------------------------------------------------
# MultiPoly


Scalar = Union[int, Rational, Fraction]


class MultiPoly:
    """Immutable polynomial over Q in a fixed Ring."""

    __slots__ = ("ring", "p")

    def __init__(self, ring: Ring, p):
        self.ring = ring
        self.p = p

    # -- coercion
    def _lift(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring:
                raise UniverseError("operands belong to different variable universes")
            return other
        try:
            return MultiPoly(self.ring, self.ring.ctx.constant(as_rational(other)))
        except TypeError:
            return None

    def __reduce__(self):
        items = tuple((e, (int(c.p), int(c.q))) for e, c in self.p.to_dict().items())
        return (_unpickle_poly, (self.ring, items))

    # -- arithmetic
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly(self.ring, self.p + o.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly(self.ring, self.p - o.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly(self.ring, o.p - self.p)

    def __neg__(self):
        return MultiPoly(self.ring, -self.p)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return MultiPoly(self.ring, self.p * o.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        return MultiPoly(self.ring, self.p ** k)

    def __truediv__(self, other):
        """Exact division; raises ArithmeticError when the quotient is not a polynomial."""
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.p.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        try:
            return MultiPoly(self.ring, self.p / o.p)
        except DomainError:
            raise ArithmeticError("polynomial division is not exact") from None

    # -- comparison
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring is other.ring and self.p == other.p
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.p == self.ring.ctx.constant(c)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.ring.names, frozenset((e, str(c)) for e, c in self.p.to_dict().items())))

    def __bool__(self):
        return not self.p.is_zero()

    # -- inspection
    def is_zero(self) -> bool:
        return self.p.is_zero()

    def is_constant(self) -> bool:
        return self.p.is_constant()

    def constant_term(self) -> Rational:
        z = (0,) * self.ring.nvars
        return self.p.to_dict().get(z, Rational(0))

    def to_rational(self) -> Rational:
        if not self.p.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.constant_term()

    def to_int(self) -> int:
        c = self.to_rational()
        if c.q != 1:
            raise ValueError(f"not an integer: {c}")
        return int(c.p)

    def terms(self) -> List[Tuple[Tuple[int, ...], Rational]]:
        """Terms in canonical order (ascending total degree, then lex in the universe order)."""
        items = list(self.p.to_dict().items())
        items.sort(key=lambda t: (sum(t[0]), t[0]))
        return items

    def degree(self, var: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if self.p.is_zero():
            return -1
        return int(self.p.degrees()[self.ring.index[canonical_name(var)]])

    def total_degree(self) -> int:
        return -1 if self.p.is_zero() else int(self.p.total_degree())

    def variables(self) -> List[str]:
        degs = self.p.degrees() if not self.p.is_zero() else ()
        return [self.ring.names[i] for i, d in enumerate(degs) if d > 0]

    def __len__(self):
        return len(self.p)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def _unpickle_poly(ring: Ring, items) -> MultiPoly:
    d = {e: Rational(n, q) for e, (n, q) in items}
    return MultiPoly(ring, ring.ctx.from_dict(d) if d else ring.ctx.constant(0))


R = make_ring()


# ---------------------------------------------------------------------------
# Canonical text form


def format_monomial(ring: Ring, exp: Sequence[int]) -> str:
    parts = []
    for i, e in enumerate(exp):
        if e == 1:
            parts.append(ring.names[i])
        elif e > 1:
            parts.append(f"{ring.names[i]}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(p: MultiPoly) -> str:
    terms = p.terms()
    if not terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(p.ring, e)
        if mono == "1":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-zφξ][A-Za-z0-9_'′]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.toks: List[Tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse {text!r} at offset {pos}")
            num, name, op = m.groups()
            if num is not None:
                self.toks.append(("num", num))
            elif name is not None:
                self.toks.append(("name", name))
            else:
                self.toks.append(("op", "^" if op == "**" else op))
            pos = m.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> MultiPoly:
        if not self.toks:
            raise ParseError("empty polynomial")
        v = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input near token {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            v = v * rhs if op == "*" else v / rhs
        return v

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, tok = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal")
            return base ** int(tok)
        return base

    def atom(self):
        kind, tok = self.take()
        if kind == "num":
            return self.ring.const(int(tok))
        if kind == "name":
            try:
                return self.ring.gen(tok)
            except UniverseError as e:
                raise ParseError(str(e)) from None
        if (kind, tok) == ("op", "("):
            v = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("unbalanced parenthesis")
            return v
        raise ParseError(f"unexpected token {tok!r}")


def parse_poly(text: str, ring: Ring = R) -> MultiPoly:
    return ring.parse(text)


# ---------------------------------------------------------------------------
# Operations


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


@dataclass(frozen=True)
class NonnegVerdict:
    ok: bool
    monomial: Optional[MultiPoly] = None
    coeff: Optional[Rational] = None

    def __bool__(self):
        return self.ok


def is_coeffwise_nonneg(p: MultiPoly) -> NonnegVerdict:
    """Nonnegativity of every coefficient; the witness is the first negative term in canonical order."""
    if isinstance(p, MultiPoly):
        for e, c in p.terms():
            if c < 0:
                return NonnegVerdict(False, p.ring.from_terms({e: 1}), c)
        return NonnegVerdict(True)
    c = as_rational(p)
    return NonnegVerdict(True) if c >= 0 else NonnegVerdict(False, None, c)


def coeff_of(p: MultiPoly, var: str, k: int) -> MultiPoly:
    if k < 0:
        raise ValueError("k must be nonnegative")
    i = p.ring.index[canonical_name(var)]
    d = {}
    for e, c in p.p.to_dict().items():
        if e[i] == k:
            e2 = list(e)
            e2[i] = 0
            d[tuple(e2)] = c
    return p.ring.from_terms(d)


def substitute(p: MultiPoly, bindings: Mapping) -> MultiPoly:
    """Simultaneously replace variables by polynomials (or scalars)."""
    ring = p.ring
    if not bindings:
        return p
    images = list(ring.ctx.gens())
    for var, val in bindings.items():
        name = var if isinstance(var, str) else _single_var(var)
        idx = ring.index.get(canonical_name(name))
        if idx is None:
            raise UniverseError(f"variable {name!r} not in universe")
        if isinstance(val, MultiPoly):
            if val.ring is not ring:
                raise UniverseError("binding from a different universe")
            images[idx] = val.p
        else:
            images[idx] = ring.ctx.constant(as_rational(val))
    return MultiPoly(ring, p.p.compose(*images))


def _single_var(v: MultiPoly) -> str:
    names = v.variables()
    if len(names) != 1 or len(v) != 1 or v != v.ring.gen(names[0]):
        raise UniverseError(f"{v} is not a variable")
    return names[0]


def is_homogeneous(p: MultiPoly, weights: Mapping[str, int], d: int) -> bool:
    """Every monomial has weighted degree d (unlisted variables weigh 0)."""
    w = [0] * p.ring.nvars
    for name, wt in weights.items():
        w[p.ring.index[canonical_name(name)]] = wt
    for e in p.p.to_dict():
        if sum(a * b for a, b in zip(e, w)) != d:
            return False
    return True


def lift(c, ring: Ring = R) -> MultiPoly:
    """Coerce a scalar or polynomial into ``ring``."""
    if isinstance(c, MultiPoly):
        if c.ring is not ring:
            raise UniverseError("polynomial from a different universe")
        return c
    return ring.const(c)


def poly_sum(items: Iterable, ring: Ring = R) -> MultiPoly:
    acc = ring.ctx.constant(0)
    for it in items:
        acc += lift(it, ring).p
    return MultiPoly(ring, acc)
