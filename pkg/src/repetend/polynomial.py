"""Univariate polynomials over the rationals, Sturm sequences and an exact parser.

Grammar accepted by :func:`parse_expression` (whitespace ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := atom (('^' | '**') unary)?
    atom    := INTEGER | VARIABLE | '(' expr ')'

Rationals are written ``p/q``; decimal points and exponents are rejected so no
floating value can enter a computation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ParseError
from .linalg import fraction_str, to_fraction


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[Fraction, ...]  # lowest degree first; empty for zero

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(to_fraction(c) for c in self.coeffs))

    @classmethod
    def of(cls, *coeffs) -> Polynomial:
        return cls(tuple(coeffs))

    @classmethod
    def x(cls) -> Polynomial:
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def const(cls, c) -> Polynomial:
        return cls((to_fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # ring operations

    def _lift(self, other) -> Polynomial:
        return other if isinstance(other, Polynomial) else Polynomial.const(other)

    def __add__(self, other) -> Polynomial:
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> Polynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Polynomial:
        return self._lift(other) - self

    def __mul__(self, other) -> Polynomial:
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other) -> Polynomial:
        other = self._lift(other)
        if other.degree != 0:
            raise ParseError("polynomials may only be divided by nonzero constants")
        return Polynomial(tuple(c / other.coeffs[0] for c in self.coeffs))

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ParseError("polynomial exponents must be nonnegative integers")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        lead = other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return Polynomial(tuple(quot)), Polynomial(tuple(rem[:dq]) if dq > 0 else ())

    def __mod__(self, other: Polynomial) -> Polynomial:
        return self.divmod(other)[1]

    def derivative(self) -> Polynomial:
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def monic(self) -> Polynomial:
        return self / self.lead if self.coeffs else self

    def is_monic(self) -> bool:
        return self.lead == 1

    def gcd(self, other: Polynomial) -> Polynomial:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0

    def __str__(self) -> str:
        return format_poly(self.coeffs, "x")


def format_poly(coeffs: Sequence[Fraction], var: str) -> str:
    """Render coefficients (lowest first) as a parseable expression, highest degree first."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{fraction_str(mag)}*{mono}"
        else:
            body = fraction_str(mag)
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# Sturm machinery


def sturm_sequence(f: Polynomial) -> list[Polynomial]:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sign_changes_at(seq: list[Polynomial], x: Fraction) -> int:
    return _variations([_sign(p(x)) for p in seq])


def sign_changes_at_infinity(seq: list[Polynomial], positive: bool) -> int:
    signs = []
    for p in seq:
        s = _sign(p.lead)
        if not positive and p.degree % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_roots(seq: list[Polynomial], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    return sign_changes_at(seq, lo) - sign_changes_at(seq, hi)


def count_real_roots(f: Polynomial) -> int:
    seq = sturm_sequence(f)
    return sign_changes_at_infinity(seq, False) - sign_changes_at_infinity(seq, True)


def root_bound(f: Polynomial) -> Fraction:
    """A power of two strictly exceeding the modulus of every root (Cauchy bound)."""
    lead = abs(f.lead)
    cauchy = 1 + max((abs(c) / lead for c in f.coeffs[:-1]), default=Fraction(0))
    b = Fraction(1)
    while b <= cauchy:
        b *= 2
    return b


def isolate_real_roots(f: Polynomial) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals (lo, hi] for the real roots of a squarefree ``f``, in increasing order.

    Endpoints are dyadic; an exact rational root is returned as a point interval.
    """
    seq = sturm_sequence(f)
    b = root_bound(f)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    fixed = []
    for lo, hi in sorted(out):
        if f(hi) == 0:
            fixed.append((hi, hi))
        else:
            fixed.append((lo, hi))
    return fixed


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()])|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(4) is not None:
            bad = m.start(4)
            hint = " (floating literals are not accepted; write p/q)" if m.group(4) == "." else ""
            raise ParseError(f"unexpected character {m.group(4)!r}{hint}", text, bad)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("num", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: dict[str, Callable[[], object]], const: Callable[[Fraction], object]):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = variables
        self.const = const

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "name" or tok[:2] == ("op", "("):
                # juxtaposition, as in 2x or 3/2 y
                value = value * self.power()
                continue
            if tok[:2] not in (("op", "*"), ("op", "/")):
                break
            self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    self.fail("division by zero", tok)
                except ParseError as exc:
                    self.fail(str(exc), tok)
        return value

    def unary(self):
        tok = self.peek()
        if tok[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if tok[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[:2] in (("op", "^"), ("op", "**")):
            self.take()
            sign = 1
            while self.peek()[:2] in (("op", "-"), ("op", "+")):
                if self.take()[1] == "-":
                    sign = -sign
            etok = self.peek()
            if etok[0] != "num":
                self.fail("exponent must be an integer literal")
            self.take()
            try:
                return base ** (sign * int(etok[1]))
            except (ParseError, ZeroDivisionError) as exc:
                self.fail(str(exc) or "invalid power", etok)
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.const(Fraction(int(val)))
        if kind == "name":
            if val not in self.variables:
                self.fail(f"unknown variable {val!r} (expected one of {sorted(self.variables)})", tok)
            return self.variables[val]()
        if (kind, val) == ("op", "("):
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return value
        self.fail(f"unexpected token {val!r}" if kind != "end" else "unexpected end of input", tok)


def parse_expression(text: str, variables: dict[str, Callable[[], object]], const: Callable[[Fraction], object]):
    """Evaluate ``text`` with the given variable constructors and constant lift."""
    return _Parser(text, variables, const).parse()


def parse_polynomial(text: str, var: str = "x") -> Polynomial:
    return parse_expression(text, {var: Polynomial.x}, Polynomial.const)


def parse_rational(text: str) -> Fraction:
    value = parse_expression(text, {}, lambda q: q)
    return to_fraction(value)
