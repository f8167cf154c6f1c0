"""Exact sparse multivariate polynomial arithmetic over Q and Q(i).

Polynomials are dictionaries mapping exponent tuples to Gaussian-rational
coefficients (pairs of ``fractions.Fraction``).  Everything here is exact:
no floating point is involved anywhere, so polynomial identities can be
checked by literal equality.

The module also provides monomial orders (graded reverse lexicographic,
lexicographic and block/elimination orders), differential operators
``L(D)f``, the Hermitian pairing on homogeneous polynomials with
``<x^a, x^b> = a!`` on the diagonal, and a canonical text format with an
exact ``parse``/``format`` round trip.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "Scalar",
    "PolyRing",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "block_order",
    "Polynomial",
    "RingMismatchError",
    "ParseError",
    "parse_polynomial",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)

ScalarLike = Union["Scalar", Fraction, int]


class RingMismatchError(ValueError):
    """Operands live in different polynomial rings."""


class ParseError(ValueError):
    """Syntax or semantic error in a polynomial expression.

    ``position`` is the 0-based character offset into the parsed text.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


@dataclass(frozen=True, slots=True)
class Scalar:
    """A Gaussian rational ``re + im*i`` with exact Fraction components.

    Purely real values have ``im == 0`` exactly; Fraction keeps both parts
    reduced with positive denominators, so every value has one stored form.
    """

    re: Fraction
    im: Fraction

    @staticmethod
    def of(value: ScalarLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar(Fraction(value), _ZERO)

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not self.im and not other.im:
            return Scalar(self.re * other.re, _ZERO)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "Scalar") -> "Scalar":
        if other.is_zero:
            raise ZeroDivisionError("scalar division by zero")
        if not self.im and not other.im:
            return Scalar(self.re / other.re, _ZERO)
        norm = other.re * other.re + other.im * other.im
        return Scalar(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def conjugate(self) -> "Scalar":
        if not self.im:
            return self
        return Scalar(self.re, -self.im)

    def inverse(self) -> "Scalar":
        return ONE_SCALAR / self

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({self.re!r}, {self.im!r})"


ZERO_SCALAR = Scalar(_ZERO, _ZERO)
ONE_SCALAR = Scalar(_ONE, _ZERO)
I_SCALAR = Scalar(_ZERO, _ONE)


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c: Scalar) -> str:
    """Render a scalar in the expression grammar: ``a``, ``b*i`` or ``a+b*i``."""
    if c.is_zero:
        return "0"
    if c.is_real:
        return _format_fraction(c.re)
    if not c.re:
        mag = abs(c.im)
        body = "i" if mag == 1 else f"{_format_fraction(mag)}*i"
        return body if c.im > 0 else f"-{body}"
    mag = abs(c.im)
    imag = "i" if mag == 1 else f"{_format_fraction(mag)}*i"
    join = "+" if c.im > 0 else "-"
    return f"{_format_fraction(c.re)}{join}{imag}"


# --- monomials -------------------------------------------------------------
#
# A monomial is a plain tuple of nonnegative integer exponents, one per ring
# variable.  Total degree is the sum of the entries; the factorial a! used by
# the Fischer pairing is the product of entry factorials.

Monomial = tuple  # tuple[int, ...]


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_factorial(m: Monomial) -> int:
    out = 1
    for e in m:
        out *= math.factorial(e)
    return out


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Exponent vector of x^a / x^b; requires divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _grevlex_key(m: Monomial):
    # Graded reverse lex: compare total degree, then from the last variable
    # backwards with the smaller exponent winning.
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True, slots=True)
class MonomialOrder:
    """A total, multiplicative monomial order with 1 minimal.

    ``kind`` is one of ``"grevlex"``, ``"lex"`` or ``"block"``.  A block
    order eliminates the first ``block`` variables: any monomial containing
    one of them is larger than every monomial free of them, and ties within
    each group are broken by grevlex.
    """

    kind: str
    block: int = 0

    def key(self, m: Monomial):
        """Sort key; larger key means larger monomial."""
        if self.kind == "grevlex":
            return _grevlex_key(m)
        if self.kind == "lex":
            return tuple(m)
        k = self.block
        return (_grevlex_key(m[:k]), _grevlex_key(m[k:]))

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)

    def __str__(self) -> str:
        if self.kind == "block":
            return f"block({self.block})"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    """Elimination order for the first ``k`` ring variables."""
    if k < 1:
        raise ValueError("block order needs at least one eliminated variable")
    return MonomialOrder("block", k)


@dataclass(frozen=True, slots=True)
class PolyRing:
    """A polynomial ring: ordered variable names plus a coefficient field tag.

    ``field`` is ``"Q"`` (rationals) or ``"Qi"`` (Gaussian rationals).  The
    declaration order of the variables fixes every monomial order and the
    canonical printed form.
    """

    variables: tuple
    field: str = "Q"

    def __post_init__(self):
        if self.field not in ("Q", "Qi"):
            raise ValueError(f"unknown coefficient field {self.field!r}")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for name in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"invalid variable name {name!r}")
        if self.field == "Qi" and "i" in self.variables:
            raise ValueError("variable 'i' shadows the imaginary unit in a Qi ring")

    @property
    def dim(self) -> int:
        return len(self.variables)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value: ScalarLike) -> "Polynomial":
        c = Scalar.of(value)
        if c.is_zero:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.dim: c})

    def var(self, name: str) -> "Polynomial":
        idx = self.variables.index(name)
        exps = [0] * self.dim
        exps[idx] = 1
        return Polynomial(self, {tuple(exps): ONE_SCALAR})

    def gens(self) -> list:
        return [self.var(v) for v in self.variables]

    def monomial(self, exps: Sequence[int], coeff: ScalarLike = 1) -> "Polynomial":
        c = Scalar.of(coeff)
        if c.is_zero:
            return self.zero()
        return Polynomial(self, {tuple(exps): c})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __str__(self) -> str:
        tag = "Q(i)" if self.field == "Qi" else "Q"
        return f"{tag}[{', '.join(self.variables)}]"


def ring(*variables: str, field: str = "Q") -> PolyRing:
    """Convenience constructor: ``ring('x', 'y')`` or ``ring('x', field='Qi')``."""
    return PolyRing(tuple(variables), field)


class Polynomial:
    """An immutable sparse polynomial: exponent tuple -> nonzero Scalar.

    All arithmetic is exact and never mutates; operands must share a ring.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, Scalar]):
        clean = {}
        d = ring.dim
        for mono, coeff in terms.items():
            if coeff.is_zero:
                continue
            if len(mono) != d:
                raise ValueError(f"exponent tuple {mono} has wrong length for {ring}")
            if ring.field == "Q" and not coeff.is_real:
                raise ValueError("non-real coefficient in a ring over Q")
            clean[mono] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- predicates and views ------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; rejects the zero polynomial (no sentinel value)."""
        if not self.terms:
            raise ValueError("degree of the zero polynomial is undefined")
        return max(mono_degree(m) for m in self.terms)

    def lowest_degree(self) -> int:
        """Smallest total degree present among the terms; rejects zero."""
        if not self.terms:
            raise ValueError("lowest degree of the zero polynomial is undefined")
        return min(mono_degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def coefficient(self, mono: Monomial) -> Scalar:
        return self.terms.get(tuple(mono), ZERO_SCALAR)

    def constant(self) -> Scalar:
        return self.terms.get((0,) * self.ring.dim, ZERO_SCALAR)

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        if not self.terms:
            raise ValueError("leading monomial of the zero polynomial is undefined")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Scalar:
        return self.terms[self.leading_monomial(order)]

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list:
        """Terms as (monomial, coefficient), largest monomial first."""
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=True)

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    # -- arithmetic ------------------------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError(f"rings differ: {self.ring} vs {other.ring}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono)
            acc = coeff if acc is None else acc + coeff
            if acc.is_zero:
                out.pop(mono, None)
            else:
                out[mono] = acc
        return self._raw(self.ring, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono)
            acc = -coeff if acc is None else acc - coeff
            if acc.is_zero:
                out.pop(mono, None)
            else:
                out[mono] = acc
        return self._raw(self.ring, out)

    def __neg__(self) -> "Polynomial":
        return self._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                acc = out.get(mono)
                acc = ca * cb if acc is None else acc + ca * cb
                if acc.is_zero:
                    out.pop(mono, None)
                else:
                    out[mono] = acc
        return self._raw(self.ring, out)

    def scale(self, c: ScalarLike) -> "Polynomial":
        c = Scalar.of(c)
        if c.is_zero:
            return self.ring.zero()
        return self._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def term_mul(self, mono: Monomial, coeff: Scalar) -> "Polynomial":
        """Multiply by the single term coeff * x^mono."""
        if coeff.is_zero:
            return self.ring.zero()
        return self._raw(
            self.ring,
            {tuple(x + y for x, y in zip(m, mono)): v * coeff for m, v in self.terms.items()},
        )

    def conjugate(self) -> "Polynomial":
        """Coefficient-wise complex conjugate (identity over Q)."""
        return self._raw(self.ring, {m: c.conjugate() for m, c in self.terms.items()})

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> "Polynomial":
        # Internal fast path: terms already clean (no zeros, right arity).
        p = object.__new__(cls)
        object.__setattr__(p, "ring", ring)
        object.__setattr__(p, "terms", terms)
        return p

    # -- structure -------------------------------------------------------------

    def leading_form(self) -> "Polynomial":
        """Sum of the top-total-degree terms; homogeneous by construction."""
        n = self.degree()
        return self._raw(
            self.ring, {m: c for m, c in self.terms.items() if mono_degree(m) == n}
        )

    def homogeneous_component(self, k: int) -> "Polynomial":
        """Degree-k slice; zero when no terms of that degree exist."""
        if k < 0:
            raise ValueError("homogeneous component degree must be nonnegative")
        return self._raw(
            self.ring, {m: c for m, c in self.terms.items() if mono_degree(m) == k}
        )

    def evaluate(self, point: Sequence[ScalarLike]) -> Scalar:
        """Exact value at a point with one coordinate per ring variable."""
        if len(point) != self.ring.dim:
            raise ValueError(
                f"point has {len(point)} coordinates, ring has {self.ring.dim}"
            )
        coords = [Scalar.of(v) for v in point]
        total = ZERO_SCALAR
        for mono, coeff in self.terms.items():
            value = coeff
            for exp, v in zip(mono, coords):
                for _ in range(exp):
                    value = value * v
            total = total + value
        return total

    def substitute_ring(self, target: PolyRing, index_map: Sequence[int]) -> "Polynomial":
        """Reinterpret in ``target``: variable j here becomes index_map[j] there."""
        out: dict = {}
        base = (0,) * target.dim
        for mono, coeff in self.terms.items():
            exps = list(base)
            for j, e in enumerate(mono):
                if e:
                    exps[index_map[j]] += e
            out[tuple(exps)] = coeff
        return Polynomial(target, out)

    # -- comparisons and hashing -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"<{format_polynomial(self)} in {self.ring}>"


def apply_diff_op(op: "Polynomial", target: "Polynomial") -> "Polynomial":
    """Apply L(D) to f: each variable in ``op`` acts as a partial derivative.

    Coefficients of ``op`` are used as written (no conjugation).  Exact and
    linear in both arguments.
    """
    if op.ring != target.ring:
        raise RingMismatchError("operator and argument live in different rings")
    out: dict = {}
    for alpha, c in op.terms.items():
        for beta, b in target.terms.items():
            if not mono_divides(alpha, beta):
                continue
            factor = 1
            for a_e, b_e in zip(alpha, beta):
                # falling factorial b_e * (b_e-1) * ... * (b_e-a_e+1)
                for step in range(a_e):
                    factor *= b_e - step
            mono = mono_div(beta, alpha)
            contrib = c * b * Scalar.of(factor)
            acc = out.get(mono)
            acc = contrib if acc is None else acc + contrib
            if acc.is_zero:
                out.pop(mono, None)
            else:
                out[mono] = acc
    return Polynomial._raw(op.ring, out)


def fischer_product(f: "Polynomial", op: "Polynomial") -> Scalar:
    """Hermitian pairing <f, L> = conj(L)(D) f on homogeneous polynomials.

    Monomials are orthogonal with <x^a, x^a> = a!, so the value is
    sum over a of a! * f_a * conj(L_a).  Both arguments must be homogeneous
    of the same degree.
    """
    if f.ring != op.ring:
        raise RingMismatchError("pairing requires a shared ring")
    if f.is_zero or op.is_zero:
        return ZERO_SCALAR
    if not f.is_homogeneous() or not op.is_homogeneous():
        raise ValueError("Fischer pairing requires homogeneous arguments")
    if f.degree() != op.degree():
        raise ValueError("Fischer pairing requires equal degrees")
    total = ZERO_SCALAR
    for mono, a in f.terms.items():
        b = op.terms.get(mono)
        if b is None:
            continue
        total = total + Scalar.of(mono_factorial(mono)) * a * b.conjugate()
    return total


# --- canonical printing -----------------------------------------------------


def _format_monomial(ring: PolyRing, mono: Monomial) -> str:
    parts = []
    for name, e in zip(ring.variables, mono):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: "Polynomial") -> str:
    """Canonical text form: descending grevlex terms, reduced coefficients.

    The output always re-parses to the same polynomial.
    """
    if p.is_zero:
        return "0"
    pieces = []
    for mono, coeff in p.sorted_terms(GREVLEX):
        mono_s = _format_monomial(p.ring, mono)
        if coeff.is_real:
            negative = coeff.re < 0
            mag = abs(coeff.re)
            if not mono_s:
                body = _format_fraction(mag)
            elif mag == 1:
                body = mono_s
            else:
                body = f"{_format_fraction(mag)}*{mono_s}"
        elif not coeff.re:
            negative = coeff.im < 0
            mag = abs(coeff.im)
            atom = "i" if mag == 1 else f"{_format_fraction(mag)}*i"
            body = f"{atom}*{mono_s}" if mono_s else atom
        else:
            negative = False
            inner = format_scalar(coeff)
            body = f"({inner})*{mono_s}" if mono_s else f"({inner})"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


# --- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()/]))"
)


class _Parser:
    """Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | base ('^' integer)?
    base   := rational | 'i' | variable | '(' expr ')'

    Multiplication is always explicit; '/' appears only inside rational
    literals such as 3/2.
    """

    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.pos = 0
        self.tokens: list = []
        scan = 0
        while scan < len(text):
            m = _TOKEN_RE.match(text, scan)
            if m is None:
                stripped = text[scan:].lstrip()
                if not stripped:
                    break
                at = len(text) - len(stripped)
                raise ParseError(f"unexpected character {stripped[0]!r}", at)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            scan = m.end()

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, symbol: str):
        kind, value, at = self.next()
        if kind != "op" or value != symbol:
            raise ParseError(f"expected {symbol!r}", at)

    def parse(self) -> "Polynomial":
        p = self.expr()
        kind, value, at = self.peek()
        if kind is not None:
            raise ParseError(f"unexpected token {value!r}", at)
        return p

    def expr(self) -> "Polynomial":
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.next()
            p = self.term()
            if value == "-":
                p = -p
        else:
            p = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                q = self.term()
                p = p + q if value == "+" else p - q
            else:
                return p

    def term(self) -> "Polynomial":
        p = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.next()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> "Polynomial":
        kind, value, at = self.peek()
        if kind == "op" and value == "-":
            self.next()
            return -self.factor()
        base = self.base()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.next()
            kind, value, at = self.next()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", at)
            power = int(value)
            out = self.ring.one()
            for _ in range(power):
                out = out * base
            return out
        return base

    def base(self) -> "Polynomial":
        kind, value, at = self.next()
        if kind == "num":
            numerator = int(value)
            kind2, value2, _ = self.peek()
            if kind2 == "op" and value2 == "/":
                self.next()
                kind3, value3, at3 = self.next()
                if kind3 != "num":
                    raise ParseError("malformed rational literal", at3)
                denominator = int(value3)
                if denominator == 0:
                    raise ParseError("zero denominator", at3)
                return self.ring.const(Fraction(numerator, denominator))
            return self.ring.const(numerator)
        if kind == "name":
            if value in self.ring.variables:
                return self.ring.var(value)
            if value == "i":
                if self.ring.field != "Qi":
                    raise ParseError("imaginary unit used in a ring over Q", at)
                return self.ring.const(I_SCALAR)
            raise ParseError(f"unknown variable {value!r}", at)
        if kind == "op" and value == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError(
            "expected a number, variable or parenthesized expression", at
        )


def parse_polynomial(text: str, ring: PolyRing) -> "Polynomial":
    """Parse UTF-8 expression text into a polynomial of ``ring``."""
    return _Parser(text, ring).parse()
