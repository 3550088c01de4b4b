"""Real algebraic number fields Q(y) with a distinguished real embedding.

A field is a monic squarefree minimal polynomial ``f`` plus one of its real
roots, identified by a rational isolating interval.  Elements are coordinate
vectors in the power basis ``1, y, ..., y^(n-1)``.  Signs are decided by
evaluating the element's polynomial on an isolating interval with a centred
Taylor bound and bisecting until the bound excludes zero.

The tightest interval found so far for each root is memoised in a small
lock-protected table, so repeated sign tests during an expansion do not redo
the same bisections.  The memo only ever narrows an interval; every caller
sees a valid isolating interval at all times.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import floor
from typing import Sequence, Union

from .errors import (
    AmbiguousInterval,
    DivisionByZero,
    FieldMismatch,
    NoRealRootInInterval,
    NonpositiveDenominator,
    NotSquarefree,
    ParseError,
    Reducible,
    RepetendError,
)
from .linalg import ExactMatrix, det, fraction_str, to_fraction
from .polynomial import (
    Polynomial,
    count_real_roots,
    count_roots,
    format_poly,
    isolate_real_roots,
    parse_expression,
    parse_polynomial,
    sturm_sequence,
)


class NotMonic(RepetendError):
    pass


Interval = tuple[Fraction, Fraction]


# root refinement


class _RootTable:
    """Shared memo of the narrowest known isolating interval per (poly, root)."""

    def __init__(self):
        self._lock = threading.Lock()
        self._best: dict[tuple, Interval] = {}

    def get(self, poly: Polynomial, interval: Interval) -> Interval:
        key = (poly.coeffs, interval)
        with self._lock:
            return self._best.get(key, interval)

    def refine(self, poly: Polynomial, interval: Interval, width: Fraction) -> Interval:
        """Return an isolating interval of width at most ``width`` for the root in ``interval``."""
        key = (poly.coeffs, interval)
        with self._lock:
            lo, hi = self._best.get(key, interval)
        if hi - lo <= width:
            return lo, hi
        slo = _sgn(poly(lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = _sgn(poly(mid))
            if s == 0:
                lo = hi = mid
                break
            if s == slo:
                lo = mid
            else:
                hi = mid
        with self._lock:
            best = self._best.get(key, interval)
            if hi - lo < best[1] - best[0]:
                self._best[key] = (lo, hi)
            else:
                lo, hi = best
        return lo, hi


_ROOTS = _RootTable()


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _taylor_sign(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int | None:
    """Sign of the polynomial on [lo, hi] if constant there and nonzero, else None."""
    if lo == hi:
        return _sgn(_horner(coeffs, lo))
    m = (lo + hi) / 2
    r = (hi - lo) / 2
    # Taylor coefficients at m by repeated synthetic division
    c = list(coeffs)
    shifted = []
    for _ in range(len(c)):
        acc = Fraction(0)
        nxt = []
        for a in reversed(c):
            acc = acc * m + a
            nxt.append(acc)
        shifted.append(nxt[-1])
        # quotient coefficients, lowest first
        c = list(reversed(nxt[:-1]))
    centre = shifted[0]
    bound = Fraction(0)
    rk = Fraction(1)
    for t in shifted[1:]:
        rk *= r
        bound += abs(t) * rk
    if centre > bound:
        return 1
    if centre < -bound:
        return -1
    return None


def _horner(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _trim(coeffs: Sequence[Fraction]) -> list[Fraction]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class Embedding:
    """One real root of a field's minimal polynomial."""

    minpoly: Polynomial
    index: int  # position among the real roots in increasing order
    interval: Interval
    chosen: bool = False

    def current_interval(self) -> Interval:
        return _ROOTS.get(self.minpoly, self.interval)

    def refine(self, width: Fraction) -> Interval:
        return _ROOTS.refine(self.minpoly, self.interval, width)

    def sign_of(self, coeffs: Sequence[Fraction]) -> int:
        """Sign of the polynomial with these coefficients at this root (exact)."""
        c = _trim(coeffs)
        if not c:
            return 0
        if len(c) == 1:
            return _sgn(c[0])
        lo, hi = self.current_interval()
        width = hi - lo
        checked_gcd = False
        rounds = 0
        while True:
            s = _taylor_sign(c, lo, hi)
            if s is not None:
                return s
            rounds += 1
            if rounds >= 4 and not checked_gcd:
                # a polynomial vanishing at the root shares a factor with minpoly
                checked_gcd = True
                if self._vanishes(c):
                    return 0
            width = (hi - lo) / 2**16 if hi > lo else width
            lo, hi = self.refine(width)

    def _vanishes(self, c: Sequence[Fraction]) -> bool:
        g = self.minpoly.gcd(Polynomial(tuple(c)))
        if g.degree < 1:
            return False
        lo, hi = self.current_interval()
        if lo == hi:
            return g(lo) == 0
        return count_roots(sturm_sequence(g), lo, hi) == 1

    def approximate(self, bits: int = 64) -> Fraction:
        lo, hi = self.refine(Fraction(1, 2**bits))
        return (lo + hi) / 2

    def __str__(self) -> str:
        lo, hi = self.current_interval()
        return f"root #{self.index} in [{fraction_str(lo)}, {fraction_str(hi)}]"


# fields


@dataclass(frozen=True)
class NumberField:
    minpoly: Polynomial
    root_index: int
    root_interval: Interval
    signature: tuple[int, int]
    irreducibility: str = "verified"  # or "asserted" for degree >= 4
    roots: tuple[Interval, ...] = dc_field(default=(), compare=False, repr=False)

    def __hash__(self):
        return hash((self.minpoly.coeffs, self.root_index))

    def __eq__(self, other):
        if not isinstance(other, NumberField):
            return NotImplemented
        return self.minpoly.coeffs == other.minpoly.coeffs and self.root_index == other.root_index

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def unit_rank(self) -> int:
        r1, r2 = self.signature
        return r1 + r2 - 1

    @cached_property
    def embedding(self) -> Embedding:
        return Embedding(self.minpoly, self.root_index, self.root_interval, True)

    @cached_property
    def embeddings(self) -> tuple[Embedding, ...]:
        return tuple(
            Embedding(self.minpoly, i, iv, i == self.root_index) for i, iv in enumerate(self.roots)
        )

    @cached_property
    def _reduction(self) -> tuple[tuple[Fraction, ...], ...]:
        # power-basis coordinates of y^n ... y^(2n-2)
        n = self.degree
        cur = [-c for c in self.minpoly.coeffs[:n]]
        table = [tuple(cur)]
        for _ in range(n - 2):
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [a + top * b for a, b in zip(cur, table[0])]
            table.append(tuple(cur))
        return tuple(table)

    def element(self, value) -> FieldElement:
        """Lift an element, rational, coordinate sequence or ``y``-expression string."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, str):
            return parse_element(self, value)
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return self.const(value)
        coords = [to_fraction(c) for c in value]
        if len(coords) > self.degree:
            raise FieldMismatch(f"{len(coords)} coordinates for a degree-{self.degree} field")
        return FieldElement(self, tuple(coords + [Fraction(0)] * (self.degree - len(coords))))

    def const(self, c) -> FieldElement:
        return FieldElement(self, (to_fraction(c),) + (Fraction(0),) * (self.degree - 1))

    def gen(self) -> FieldElement:
        return self.element([0, 1])

    def zero(self) -> FieldElement:
        return self.const(0)

    def one(self) -> FieldElement:
        return self.const(1)

    def power_basis(self) -> list[FieldElement]:
        """(y^(n-1), ..., y, 1), the ordering used for polynomial vectors."""
        n = self.degree
        return [self.element([0] * k + [1]) for k in range(n - 1, -1, -1)]

    def reduce(self, coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
        n = self.degree
        out = list(coeffs[:n]) + [Fraction(0)] * max(0, n - len(coeffs))
        for k in range(n, len(coeffs)):
            c = coeffs[k]
            if c:
                for i, b in enumerate(self._reduction[k - n]):
                    if b:
                        out[i] += c * b
        return tuple(out)

    def describe(self) -> dict:
        lo, hi = self.root_interval
        return {
            "minpoly": str(self.minpoly),
            "root_index": str(self.root_index),
            "root_interval": [fraction_str(lo), fraction_str(hi)],
            "signature": [str(self.signature[0]), str(self.signature[1])],
            "irreducibility": self.irreducibility,
        }

    def __str__(self) -> str:
        return f"Q[y]/({format_poly(self.minpoly.coeffs, 'y')}), {self.embedding}"


RootSelector = Union[None, int, str, Sequence]


def _has_rational_root(f: Polynomial, roots: Sequence[Interval]) -> bool:
    # clear denominators; a rational root p/q has q dividing the leading coefficient
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    lead = abs(int(f.lead * den))
    for lo, hi in roots:
        if lo == hi:
            return True
        emb = Embedding(f, -1, (lo, hi))
        lo2, hi2 = emb.refine(Fraction(1, 4 * lead * lead))
        if lo2 == hi2:
            return True
        guess = ((lo2 + hi2) / 2).limit_denominator(lead)
        if f(guess) == 0:
            return True
    return False


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _separate(f: Polynomial, lo: Fraction, hi: Fraction) -> Interval:
    """Shrink an isolating interval until its left endpoint is not a root of ``f``."""
    if lo == hi:
        return lo, hi
    seq = sturm_sequence(f)
    while f(lo) == 0:
        mid = (lo + hi) / 2
        if count_roots(seq, mid, hi) == 1:
            lo = mid
        else:
            hi = mid
        if f(hi) == 0:
            return hi, hi
    return lo, hi


def make_field(minpoly, root: RootSelector = None) -> NumberField:
    """Build a field from a monic minimal polynomial and a root selector.

    ``root`` may be an index into the real roots in increasing order (negative
    indices count from the largest), a ``(lo, hi)`` pair of rationals bounding
    exactly one root (closed interval), ``"positive"`` for the unique positive
    root, or None when the polynomial has exactly one real root.
    """
    f = parse_polynomial(minpoly) if isinstance(minpoly, str) else minpoly
    if f.degree < 2:
        raise ParseError(f"minimal polynomial must have degree at least 2, got {f.degree}")
    if not f.is_monic():
        raise NotMonic(f"minimal polynomial {f} is not monic")
    if not f.is_squarefree():
        raise NotSquarefree(f"{f} has a repeated factor")
    roots = tuple(_separate(f, lo, hi) for lo, hi in isolate_real_roots(f))
    n = f.degree
    if n <= 3 and _has_rational_root(f, roots):
        raise Reducible(f"{f} has a rational root")
    irreducibility = "verified" if n <= 3 else "asserted"
    r1 = len(roots)
    assert r1 == count_real_roots(f)
    signature = (r1, (n - r1) // 2)
    if r1 == 0:
        raise NoRealRootInInterval(f"{f} has no real roots")
    index = _select_root(f, roots, root)
    return NumberField(f, index, roots[index], signature, irreducibility, roots)


def _select_root(f: Polynomial, roots: tuple[Interval, ...], root: RootSelector) -> int:
    r1 = len(roots)
    if root is None:
        if r1 != 1:
            raise AmbiguousInterval(f"{f} has {r1} real roots; choose one explicitly")
        return 0
    if isinstance(root, bool):
        raise TypeError("root selector cannot be a boolean")
    if isinstance(root, int):
        if not -r1 <= root < r1:
            raise NoRealRootInInterval(f"root index {root} out of range for {r1} real roots")
        return root % r1
    if isinstance(root, str):
        text = root.strip().lower()
        if text in ("positive", "pos"):
            pos = [i for i, (lo, hi) in enumerate(roots) if _root_positive(f, lo, hi)]
            if not pos:
                raise NoRealRootInInterval(f"{f} has no positive root")
            if len(pos) > 1:
                raise AmbiguousInterval(f"{f} has {len(pos)} positive roots")
            return pos[0]
        if text in ("largest", "max"):
            return r1 - 1
        if text in ("smallest", "min"):
            return 0
        try:
            return _select_root(f, roots, int(text))
        except ValueError:
            pass
        parts = text.strip("[]() ").split(",")
        if len(parts) == 2:
            from .polynomial import parse_rational

            return _select_root(f, roots, (parse_rational(parts[0]), parse_rational(parts[1])))
        raise ParseError(f"cannot read root selector {root!r}")
    lo, hi = (to_fraction(x) for x in root)
    if lo > hi:
        lo, hi = hi, lo
    inside = [i for i, iv in enumerate(roots) if _root_in(f, iv, lo, hi)]
    if not inside:
        raise NoRealRootInInterval(f"no root of {f} in [{fraction_str(lo)}, {fraction_str(hi)}]")
    if len(inside) > 1:
        raise AmbiguousInterval(f"[{fraction_str(lo)}, {fraction_str(hi)}] holds {len(inside)} roots of {f}")
    return inside[0]


def _root_positive(f: Polynomial, lo: Fraction, hi: Fraction) -> bool:
    return Embedding(f, -1, (lo, hi)).sign_of((Fraction(0), Fraction(1))) > 0


def _root_in(f: Polynomial, iv: Interval, lo: Fraction, hi: Fraction) -> bool:
    e = Embedding(f, -1, iv)
    return e.sign_of((-lo, Fraction(1))) >= 0 and e.sign_of((-hi, Fraction(1))) <= 0


# elements


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise FieldMismatch(f"{len(self.coords)} coordinates for a degree-{self.field.degree} field")

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("operands live in different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.const(other)
        raise TypeError(f"cannot combine a field element with {type(other).__name__}")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __add__(self, other) -> FieldElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElement(self.field, (self.coords[0] + other,) + self.coords[1:])
        o = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other) -> FieldElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElement(self.field, (self.coords[0] - other,) + self.coords[1:])
        o = self._coerce(other)
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other) -> FieldElement:
        return (-self) + other

    def __mul__(self, other) -> FieldElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        a, b = self.coords, o.coords
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElement(self.field, self.field.reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise DivisionByZero("division by the zero element")
        if self.is_rational():
            return self.field.const(1 / self.coords[0])
        f = self.field.minpoly
        g = Polynomial(self.coords)
        # extended Euclid: track s with s*g = r (mod f)
        r0, r1 = f, g
        s0, s1 = Polynomial(()), Polynomial.const(1)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree > 0:
            raise Reducible(f"{f} shares the factor {r0.monic()} with {g}; the field is not irreducible")
        s = s0 / r0.coeffs[0]
        return self.field.element(self.field.reduce(s.coeffs))

    def __truediv__(self, other) -> FieldElement:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise DivisionByZero("division by zero")
            return FieldElement(self.field, tuple(a / other for a in self.coords))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> FieldElement:
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> FieldElement:
        if not isinstance(k, int):
            raise TypeError("field elements only take integer powers")
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = self.field.one()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ordering under the chosen embedding

    def sign(self) -> int:
        return self.field.embedding.sign_of(self.coords)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    # algebraic invariants

    @cached_property
    def mult_matrix(self) -> ExactMatrix:
        """Multiplication-by-self in the power basis; column j holds self*y^j."""
        n = self.field.degree
        cols = []
        cur = self
        y = self.field.gen()
        for _ in range(n):
            cols.append(cur.coords)
            cur = cur * y
        return ExactMatrix.from_columns(cols)

    def norm(self) -> Fraction:
        return det(self.mult_matrix)

    def charpoly(self) -> list[Fraction]:
        from .linalg import charpoly

        return charpoly(self.mult_matrix)

    def degree(self) -> int:
        """Degree of the element over the rationals."""
        from .linalg import rank

        powers = []
        cur = self.field.one()
        for _ in range(self.field.degree):
            powers.append(cur.coords)
            cur = cur * self
        return rank(powers)

    def approximate(self, bits: int = 64) -> Fraction:
        """Rational within roughly 2^-bits of the embedded value."""
        return approximate_at(self, self.field.embedding, bits)

    def __float__(self) -> float:
        return float(self.approximate(60))

    def to_json(self) -> list[str]:
        return [fraction_str(c) for c in self.coords]

    def __str__(self) -> str:
        return format_poly(self.coords, "y")

    def __repr__(self) -> str:
        return f"FieldElement({self})"


def approximate_at(a: FieldElement, emb: Embedding, bits: int = 64) -> Fraction:
    c = _trim(a.coords)
    if len(c) <= 1:
        return c[0] if c else Fraction(0)
    # Lipschitz bound on a bounded neighbourhood of the root
    lo, hi = emb.current_interval()
    big = max(abs(lo), abs(hi)) + 1
    lip = sum(k * abs(x) * big ** (k - 1) for k, x in enumerate(c) if k) + 1
    lo, hi = emb.refine(Fraction(1, 2**bits) / lip)
    return _horner(c, (lo + hi) / 2)


def parse_element(field: NumberField, text: str) -> FieldElement:
    return parse_expression(text, {"y": field.gen}, field.const)


# module-level operations


def elem_op(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    ops = {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    if not isinstance(b, FieldElement) or a.field != b.field:
        raise FieldMismatch("operands live in different fields")
    return ops[op](b)


def sign(a: FieldElement) -> int:
    return a.sign()


def floor_ratio(a: FieldElement, b: FieldElement) -> int:
    """Largest integer k with k*b <= a, for b > 0."""
    if b.sign() <= 0:
        raise NonpositiveDenominator("floor_ratio needs a positive denominator")
    if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.field != b.field:
        raise FieldMismatch("operands live in different fields")
    if b.is_rational() and a.is_rational():
        return floor(a.coords[0] / b.coords[0])
    bits = 32
    while True:
        bq = b.approximate(bits)
        aq = a.approximate(bits)
        if bq > 0:
            break
        bits *= 2
    k = floor(aq / bq)
    while (a - b * k).sign() < 0:
        k -= 1
    while (a - b * (k + 1)).sign() >= 0:
        k += 1
    return k


def norm(a: FieldElement) -> Fraction:
    return a.norm()


def real_embeddings(field: NumberField) -> tuple[Embedding, ...]:
    return field.embeddings


def embed_sign(a: FieldElement, embedding: Embedding) -> int:
    if embedding.minpoly.coeffs != a.field.minpoly.coeffs:
        raise FieldMismatch("embedding belongs to a different field")
    return embedding.sign_of(a.coords)


def conjugate_signs(vector: Sequence[FieldElement], embedding: Embedding) -> tuple[int, ...]:
    return tuple(embed_sign(v, embedding) for v in vector)
