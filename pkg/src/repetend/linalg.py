"""Dense exact matrices over the rationals.

Entries are :class:`fractions.Fraction` values stored row-major in nested
tuples, so matrices are immutable and hashable.  Matrix-vector products accept
any vector whose entries support ``+`` and multiplication by a Fraction, which
is how multiplication matrices are applied to vectors of field elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    EqualIndices,
    IndexOutOfRange,
    NegativeEntry,
    NonIntegerEntry,
    ParseError,
    SingularMatrix,
)


def to_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction (no floats)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE"):
            raise ValueError(f"floating literal not allowed: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} as an exact entry")


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ExactMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0 or any(len(r) != n for r in self.rows):
            raise DimensionMismatch("matrix must be square and nonempty")

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> ExactMatrix:
        return cls(tuple(tuple(to_fraction(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return _identity(n)

    @classmethod
    def zero(cls, n: int) -> ExactMatrix:
        return cls(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> ExactMatrix:
        n = len(columns)
        return cls.of([[columns[j][i] for j in range(n)] for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.dim)]

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(tuple(zip(*self.rows)))

    def is_integer(self) -> bool:
        return all(x.denominator == 1 for row in self.rows for x in row)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.rows for x in row)

    def is_identity(self) -> bool:
        return self == _identity(self.dim)

    def _check(self, other: ExactMatrix) -> None:
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(tuple(tuple(-a for a in r) for r in self.rows))

    def scale(self, c) -> ExactMatrix:
        c = to_fraction(c)
        return ExactMatrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            self._check(other)
            cols = other.columns()
            return ExactMatrix(
                tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.rows)
            )
        return self.apply(other)

    def apply(self, vector: Sequence):
        """Return ``M·v`` as a tuple; ``v`` may hold rationals or field elements."""
        if len(vector) != self.dim:
            raise DimensionMismatch(f"vector of length {len(vector)} for dimension {self.dim}")
        out = []
        for row in self.rows:
            acc = None
            for a, x in zip(row, vector):
                if a == 0:
                    continue
                term = x * a if a != 1 else x
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else vector[0] * 0)
        return tuple(out)

    def __pow__(self, k: int) -> ExactMatrix:
        return mat_pow(self, k)

    # determinants and inverses

    def det(self) -> Fraction:
        return det(self)

    def inverse(self) -> ExactMatrix:
        return inverse(self)

    # serialization

    def to_json(self) -> list[list[str]]:
        return [[fraction_str(x) for x in row] for row in self.rows]

    @classmethod
    def from_json(cls, data) -> ExactMatrix:
        return cls.of(data)

    def render(self) -> str:
        cells = self.to_json()
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)

    def __str__(self) -> str:
        return self.render()


@lru_cache(maxsize=None)
def _identity(n: int) -> ExactMatrix:
    return ExactMatrix(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))


def transvection(n: int, i: int, j: int) -> ExactMatrix:
    """Identity plus a single 1 at (i, j); indices are 1-based."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"T_{{{i}{j}}} outside dimension {n}")
    if i == j:
        raise EqualIndices(f"transvection needs i != j, got {i}")
    return _transvection(n, i, j)


@lru_cache(maxsize=None)
def _transvection(n: int, i: int, j: int) -> ExactMatrix:
    return ExactMatrix.of([[int(r == c or (r == i - 1 and c == j - 1)) for c in range(n)] for r in range(n)])


def permutation_matrix(images: Sequence[int]) -> ExactMatrix:
    """Matrix P with ``P e_k = e_{images[k]}`` (1-based images), i.e. ``(P v)_{π(k)} = v_k``."""
    n = len(images)
    if sorted(images) != list(range(1, n + 1)):
        raise IndexOutOfRange(f"{images} is not a permutation of 1..{n}")
    return ExactMatrix.of([[int(images[c] == r + 1) for c in range(n)] for r in range(n)])


def mat_pow(m: ExactMatrix, k: int) -> ExactMatrix:
    if k < 0:
        m = inverse(m)
        k = -k
    result = _identity(m.dim)
    base = m
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def mat_prod(mats: Iterable[ExactMatrix], n: int) -> ExactMatrix:
    result = _identity(n)
    for m in mats:
        result = result @ m
    return result


def _bareiss(rows: list[list[Fraction]]) -> Fraction:
    # Fraction-free elimination; divisions are exact for integer input.
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det(m: ExactMatrix) -> Fraction:
    """Exact determinant by Bareiss elimination on the denominator-cleared matrix."""
    scale = 1
    rows = []
    for row in m.rows:
        lcm = 1
        for x in row:
            lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
        scale *= lcm
        rows.append([Fraction(int(x * lcm)) for x in row])
    return _bareiss(rows) / scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def inverse(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse: adjugate over determinant for integer matrices, Gauss-Jordan otherwise."""
    n = m.dim
    if m.is_integer() and n <= 4:
        d = det(m)
        if d == 0:
            raise SingularMatrix("matrix is singular")
        if n == 1:
            return ExactMatrix.of([[1 / d]])
        adj = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[m.rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
                adj[j][i] = (-1) ** (i + j) * _bareiss(minor)
        return ExactMatrix.of([[x / d for x in row] for row in adj])
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return ExactMatrix.of([row[n:] for row in a])


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve the square system ``a x = b`` exactly; None when ``a`` is singular."""
    n = len(a)
    rows = [[to_fraction(x) for x in row] + [to_fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [x / p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [row[n] for row in rows]


def rank(vectors: Sequence[Sequence[Fraction]]) -> int:
    rows = [[to_fraction(x) for x in v] for v in vectors]
    r = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def charpoly(m: ExactMatrix) -> list[Fraction]:
    """Characteristic polynomial ``det(x·I - M)``, coefficients lowest degree first.

    Faddeev-LeVerrier recursion; exact over the rationals.
    """
    n = m.dim
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = _identity(n)
    mk = ExactMatrix.zero(n)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(coeffs[n - k + 1]))
        trace = sum((mk.rows[i][i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return coeffs


def is_primitive(m: ExactMatrix) -> bool:
    """True iff some power ``M^k`` with ``k <= n² - 2n + 2`` is entrywise positive."""
    for row in m.rows:
        for x in row:
            if x.denominator != 1:
                raise NonIntegerEntry(f"entry {x} is not an integer")
            if x < 0:
                raise NegativeEntry(f"entry {x} is negative")
    n = m.dim
    pattern = [[x > 0 for x in row] for row in m.rows]
    power = pattern
    for _ in range(n * n - 2 * n + 2):
        if all(all(row) for row in power):
            return True
        power = [[any(power[i][k] and pattern[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return False


def parse_matrix(text: str) -> ExactMatrix:
    """Parse ``"1 2 2; 1 1 2; 1 1 1"`` or the nested-list form ``[[1, 2], [3, 4]]``.

    Entries are integers or fractions such as ``-3/4``, separated by spaces or
    commas.
    """
    body = text.strip()
    if body.startswith("[["):
        chunks = body[2:].rstrip("]").split("]")
        raw = [c.strip(" ,[") for c in chunks]
    else:
        raw = body.strip("[]").split(";")
    rows = []
    for chunk in raw:
        row = []
        for token in chunk.replace(",", " ").split():
            try:
                row.append(Fraction(token))
            except ValueError:
                raise ParseError(f"bad matrix entry {token!r}", text, text.find(token)) from None
        rows.append(row)
    if not rows or not rows[0]:
        raise ParseError("empty matrix", text)
    return ExactMatrix.of(rows)
