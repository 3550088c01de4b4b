"""Matrices of multiplication in a chosen basis and the column-reconstruction tuples.

For a basis ``v`` of a field and an element ``lam`` of it, :func:`t_matrix`
returns the rational matrix ``M`` with ``M @ v == lam * v``.  Such a matrix is
fixed by any single column: a :class:`QTuple` for pivot ``l`` holds matrices
``Q_1..Q_n`` with ``M[:, i] = Q_i @ M[:, l]`` for every multiplication matrix
``M`` of the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    BasisMismatch,
    DegenerateEigenvalue,
    DegenerateGamma,
    DimensionMismatch,
    NotABasis,
    NotAMultiplicationMatrix,
    ZeroB3,
)
from .linalg import ExactMatrix, inverse, permutation_matrix, to_fraction
from .realfield import FieldElement, NumberField


@dataclass(frozen=True)
class FieldBasis:
    field: NumberField
    elements: tuple[FieldElement, ...]
    change_of_basis: ExactMatrix  # column j = power-basis coordinates of elements[j]

    @property
    def dim(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def make_basis(elements: Sequence[FieldElement]) -> FieldBasis:
    if not elements:
        raise NotABasis("empty basis")
    field = elements[0].field
    if any(e.field != field for e in elements):
        raise BasisMismatch("basis elements come from different fields")
    if len(elements) != field.degree:
        raise NotABasis(f"{len(elements)} elements cannot span a degree-{field.degree} field")
    b = ExactMatrix.from_columns([e.coords for e in elements])
    if b.det() == 0:
        raise NotABasis("elements are linearly dependent over the rationals")
    return FieldBasis(field, tuple(elements), b)


def _as_basis(basis) -> FieldBasis:
    return basis if isinstance(basis, FieldBasis) else make_basis(list(basis))


def t_matrix(basis, lam: FieldElement) -> ExactMatrix:
    """The transposed multiplication matrix: ``M @ v == lam * v``."""
    basis = _as_basis(basis)
    lam = _lift(basis, lam)
    b = basis.change_of_basis
    m = (inverse(b) @ lam.mult_matrix @ b).T
    return m


def _lift(basis: FieldBasis, lam) -> FieldElement:
    if isinstance(lam, FieldElement):
        if lam.field != basis.field:
            raise BasisMismatch("element and basis live in different fields")
        return lam
    return basis.field.element(lam)


def eigen_element(m: ExactMatrix, basis) -> FieldElement:
    """The element ``lam`` with ``m @ v == lam * v``; raises if there is none."""
    basis = _as_basis(basis)
    if m.dim != basis.dim:
        raise DimensionMismatch(f"{m.dim}x{m.dim} matrix for a basis of size {basis.dim}")
    v = basis.elements
    mv = m.apply(v)
    lam = mv[-1] / v[-1]
    for i, (lhs, vi) in enumerate(zip(mv, v)):
        if lhs != lam * vi:
            raise NotAMultiplicationMatrix(f"component {i + 1} of M·v is not {lam} times v")
    return lam


@dataclass(frozen=True)
class QTuple:
    pivot: int  # 1-based
    mats: tuple[ExactMatrix, ...]

    @property
    def dim(self) -> int:
        return len(self.mats)

    def __getitem__(self, i: int) -> ExactMatrix:
        return self.mats[i]

    def to_json(self) -> dict:
        return {"pivot": str(self.pivot), "mats": [m.to_json() for m in self.mats]}

    @classmethod
    def from_json(cls, data) -> QTuple:
        return cls(int(data["pivot"]), tuple(ExactMatrix.from_json(m) for m in data["mats"]))


def apply_q(q: QTuple, column: Sequence) -> ExactMatrix:
    """Rebuild the matrix whose i-th column is ``mats[i] @ column``."""
    col = tuple(to_fraction(c) for c in column)
    if len(col) != q.dim:
        raise DimensionMismatch(f"column of length {len(col)} for a {q.dim}-tuple")
    return ExactMatrix.from_columns([m.apply(col) for m in q.mats])


def q_from_powers(m: ExactMatrix, pivot: int) -> QTuple:
    """Solve ``(M^k)[:, i] = Q_i (M^k)[:, pivot]`` for k = 1..n."""
    n = m.dim
    if not 1 <= pivot <= n:
        raise DimensionMismatch(f"pivot {pivot} outside 1..{n}")
    powers = [m]
    for _ in range(n - 1):
        powers.append(powers[-1] @ m)
    c = ExactMatrix.from_columns([p.column(pivot - 1) for p in powers])
    if c.det() == 0:
        raise DegenerateEigenvalue("the pivot columns of M..M^n are dependent; the eigenvalue is not of full degree")
    c_inv = inverse(c)
    mats = []
    for i in range(n):
        d = ExactMatrix.from_columns([p.column(i) for p in powers])
        mats.append(d @ c_inv)
    return QTuple(pivot, tuple(mats))


def q_tuple(basis, pivot: int) -> QTuple:
    """Q for an arbitrary basis and pivot, via the multiplication matrix of the generator."""
    basis = _as_basis(basis)
    return q_from_powers(t_matrix(basis, basis.field.gen()), pivot)


def q_closed_form_poly_basis(field: NumberField) -> QTuple:
    """Closed-form Q for the basis (y^(n-1), ..., y, 1) and pivot 1."""
    n = field.degree
    alpha = [field.minpoly.coeff(r) for r in range(n)]

    def a(idx: int) -> Fraction:
        return alpha[idx] if 0 <= idx < n else Fraction(0)

    mats = []
    for i in range(1, n + 1):
        rows = []
        for j in range(1, n + 1):
            row = []
            for k in range(1, n + 1):
                if i <= j and k == j - i + 1:
                    val = Fraction(1)
                elif 2 <= i <= j and j - i + 2 <= k <= j:
                    val = a(n - i + 1 + j - k)
                elif j < i and j + 1 <= k <= n + j - i + 1:
                    val = -a(n - i + 1 + j - k)
                else:
                    val = Fraction(0)
                row.append(val)
            rows.append(row)
        mats.append(ExactMatrix.of(rows))
    return QTuple(1, tuple(mats))


def permute_q(q: QTuple, p: ExactMatrix) -> QTuple:
    """Q for the permuted basis ``w = P v``: ``Q^w[pi(k)] = P Q[k] P^-1``."""
    n = q.dim
    images = []
    for k in range(n):
        col = p.column(k)
        images.append(next(i for i in range(n) if col[i] == 1) + 1)
    p_inv = p.T
    out: list[ExactMatrix | None] = [None] * n
    for k in range(n):
        out[images[k] - 1] = p @ q.mats[k] @ p_inv
    return QTuple(images[q.pivot - 1], tuple(out))


# P with P(x, y, 1) = (1, x, y), and P~ with P~(x, y, 1) = (y, 1, x)
CYCLE_2 = permutation_matrix((2, 3, 1))
CYCLE_3 = permutation_matrix((3, 1, 2))


@dataclass(frozen=True)
class CubicConstants:
    b1: Fraction
    b2: Fraction
    b3: Fraction
    c1: Fraction
    c2: Fraction
    c3: Fraction
    c4: Fraction
    c5: Fraction
    c6: Fraction

    def q1(self) -> QTuple:
        s = self
        return QTuple(
            1,
            (
                ExactMatrix.identity(3),
                ExactMatrix.of([[0, s.b1, s.c1], [1, s.b2, s.c2], [0, s.b3, s.c3]]),
                ExactMatrix.of([[0, s.c1, s.c4], [0, s.c2, s.c5], [1, s.c3, s.c6]]),
            ),
        )


def cubic_constants(alpha: Sequence, gamma: Sequence) -> CubicConstants:
    """b1..c6 for v = (x, y, 1) with y^3 + a2 y^2 + a1 y + a0 = 0 and x = g0 + g1 y + g2 y^2."""
    a0, a1, a2 = (to_fraction(t) for t in alpha)
    g0, g1, g2 = (to_fraction(t) for t in gamma)
    if g2 == 0:
        raise DegenerateGamma("x must involve y^2 (gamma_2 = 0 gives no basis)")
    return CubicConstants(
        b1=g2 * g0 + g1 * a2 * g2 - g1 * g1 - a1 * g2 * g2,
        b2=a2 * g2 - 2 * g1,
        b3=g2,
        c1=g0 * a2 * g2 - g0 * g1 - a0 * g2 * g2,
        c2=-g0,
        c3=a2 * g2 - g1,
        c4=g0 * a1 * g2 - g0 * g0 - a0 * g2 * g1,
        c5=-a0 * g2,
        c6=a1 * g2 - 2 * g0,
    )


def q_cubic(a0, a1, a2, g0, g1, g2) -> tuple[QTuple, QTuple, QTuple]:
    """Q1 for (x, y, 1), Q2 for (1, x, y) and Q3 for (y, 1, x)."""
    q1 = cubic_constants((a0, a1, a2), (g0, g1, g2)).q1()
    return q1, permute_q(q1, CYCLE_2), permute_q(q1, CYCLE_3)


def cubic_q_triple(basis) -> tuple[QTuple, QTuple, QTuple]:
    """Q_1, Q_2, Q_3 of one basis (x, y, 1), as consumed by the comparison tests."""
    basis = _as_basis(basis)
    if basis.dim != 3:
        raise DimensionMismatch("cubic tuples need a basis of size 3")
    m = t_matrix(basis, basis.field.gen())
    return tuple(q_from_powers(m, ell) for ell in (1, 2, 3))  # type: ignore[return-value]


def _constants_from_q1(q: QTuple) -> CubicConstants:
    m2, m3 = q.mats[1], q.mats[2]
    return CubicConstants(
        b1=m2[0, 1], b2=m2[1, 1], b3=m2[2, 1],
        c1=m2[0, 2], c2=m2[1, 2], c3=m2[2, 2],
        c4=m3[0, 2], c5=m3[1, 2], c6=m3[2, 2],
    )


def _constants_from_q2(q: QTuple) -> CubicConstants:
    m1, m3 = q.mats[0], q.mats[2]
    return CubicConstants(
        b1=m3[1, 2], b2=m3[2, 2], b3=m3[0, 2],
        c1=m1[1, 2], c2=m1[2, 2], c3=m1[0, 2],
        c4=m1[1, 0], c5=m1[2, 0], c6=m1[0, 0],
    )


def _constants_from_q3(q: QTuple) -> CubicConstants:
    m1, m2 = q.mats[0], q.mats[1]
    return CubicConstants(
        b1=m1[2, 0], b2=m1[0, 0], b3=m1[1, 0],
        c1=m1[2, 1], c2=m1[0, 1], c3=m1[1, 1],
        c4=m2[2, 1], c5=m2[0, 1], c6=m2[1, 1],
    )


def triple_constants(q1: QTuple, q2: QTuple, q3: QTuple) -> tuple[CubicConstants, CubicConstants, CubicConstants]:
    for q, want in ((q1, 1), (q2, 2), (q3, 3)):
        if q.pivot != want or q.dim != 3:
            raise DimensionMismatch(f"expected a cubic tuple with pivot {want}, got pivot {q.pivot}")
    return _constants_from_q1(q1), _constants_from_q2(q2), _constants_from_q3(q3)


def _comparison(k: CubicConstants) -> bool:
    if k.b3 == 0:
        raise ZeroB3("pivot entry b3 vanishes")
    return k.b3 * (k.b3 + 2 * k.c3 - k.b2 - k.c5 + k.c6 - 2 * k.c2) > 0


def cubic_predicates(q1: QTuple, q2: QTuple, q3: QTuple) -> tuple[bool, bool, bool]:
    """(y < 1, x > 1, x < y) for v = (x, y, 1) in a complex cubic field.

    Only valid when the field has exactly one real embedding; the tuples alone
    cannot tell, so the caller is responsible for that check.
    """
    k1, k2, k3 = triple_constants(q1, q2, q3)
    return _comparison(k1), _comparison(k2), _comparison(k3)


def cubic_norm_ratios(q1: QTuple, q2: QTuple, q3: QTuple) -> tuple[Fraction, Fraction, Fraction]:
    """(|N(y)/N(1)|, |N(1)/N(x)|, |N(x)/N(y)|) as |c5/b3| of each tuple."""
    out = []
    for k in triple_constants(q1, q2, q3):
        if k.b3 == 0:
            raise ZeroB3("pivot entry b3 vanishes")
        out.append(abs(k.c5 / k.b3))
    return tuple(out)  # type: ignore[return-value]


def qtuple_text(q: QTuple) -> str:
    blocks = [m.render().splitlines() for m in q.mats]
    lines = [f"Q (pivot {q.pivot})"]
    for row in zip(*blocks):
        lines.append("   ".join(row))
    return "\n".join(lines)
