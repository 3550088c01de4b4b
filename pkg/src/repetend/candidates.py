"""Candidate matrices of repetend built from units, and the AJPA periodic families.

Every matrix of repetend of a unimodular expansion of a basis ``v`` is the
transposed multiplication matrix of some unit.  Given fundamental units
``eps_1..eps_r`` (supplied, then verified) the candidates are
``+-prod T(eps_i)^m_i``; odd degree is required so that the only roots of
unity are +-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .algorithms import Algorithm, StepLabel
from .errors import (
    ConstraintViolated,
    DegenerateGamma,
    EvenDegree,
    InvalidM,
    NotAMultiplicationMatrix,
    NotAUnit,
    WrongUnitCount,
)
from .expansion import DEFAULT_BUDGET, Expansion, expand, unit_certificate
from .linalg import ExactMatrix, fraction_str, is_primitive, to_fraction
from .multmatrix import FieldBasis, eigen_element, make_basis, t_matrix
from .polynomial import Polynomial
from .realfield import FieldElement, NumberField, approximate_at, make_field


@dataclass(frozen=True)
class UnitSystem:
    field: NumberField
    units: tuple[FieldElement, ...]
    verified: bool = True

    @property
    def rank(self) -> int:
        return len(self.units)


def verify_units(field: NumberField, units: Sequence) -> UnitSystem:
    lifted = tuple(field.element(u) for u in units)
    for u in lifted:
        if u.is_zero():
            raise NotAUnit("zero is not a unit")
        cert = unit_certificate(u)
        if not cert.integral:
            raise NotAUnit(f"{u} is not an algebraic integer (charpoly has non-integer coefficients)")
        if not cert.is_unit:
            raise NotAUnit(f"{u} has norm {fraction_str(cert.norm)}, not +-1")
    if len(lifted) != field.unit_rank:
        raise WrongUnitCount(
            f"signature {field.signature} gives unit rank {field.unit_rank}, got {len(lifted)} units"
        )
    return UnitSystem(field, lifted, True)


def first_column_from_unit(gamma: Sequence, alpha: Sequence, beta: Sequence) -> tuple[Fraction, Fraction, Fraction]:
    """First column of T(eps)^T in the basis (x, y, 1) for eps = b1 + b2*y + b3*x.

    ``y^3 + a2 y^2 + a1 y + a0 = 0`` and ``x = g0 + g1 y + g2 y^2``.
    """
    g0, g1, g2 = (to_fraction(t) for t in gamma)
    _a0, a1, a2 = (to_fraction(t) for t in alpha)
    b1, b2, b3 = (to_fraction(t) for t in beta)
    if g2 == 0:
        raise DegenerateGamma("gamma_2 = 0: (x, y, 1) is not a basis")
    x1 = b1 + b2 * (g1 / g2 - a2) + b3 * (g1 * g1 / g2 - 2 * g1 * a2 + a2 * a2 * g2 + 2 * g0 - a1 * g2)
    y1 = b2 / g2 + b3 * (g1 / g2 - a2)
    z1 = b3
    return x1, y1, z1


@dataclass(frozen=True)
class Candidate:
    sign: int
    exponents: tuple[int, ...]
    matrix: ExactMatrix
    filters: dict = dc_field(default_factory=dict, compare=False, hash=False)

    @property
    def accepted(self) -> bool:
        return all(self.filters.values())

    def to_json(self) -> dict:
        return {
            "sign": "+" if self.sign > 0 else "-",
            "exponents": [str(m) for m in self.exponents],
            "matrix": self.matrix.to_json(),
            "filters": dict(sorted(self.filters.items())),
            "accepted": self.accepted,
        }


def _power_table(m: ExactMatrix, bound: int) -> dict[int, ExactMatrix]:
    table = {0: ExactMatrix.identity(m.dim)}
    inv = m.inverse() if bound else m
    for k in range(1, bound + 1):
        table[k] = table[k - 1] @ m
        table[-k] = table[-(k - 1)] @ inv
    return table


def _require_odd(field: NumberField) -> None:
    if field.degree % 2 == 0:
        raise EvenDegree("candidate signs +-1 exhaust the roots of unity only in odd degree")


def raw_candidate_count(rank: int, bound: int) -> int:
    return 2 * (2 * bound + 1) ** rank


def enumerate_candidates(
    basis,
    unitsys: UnitSystem,
    bound: int,
    require_integer: bool = True,
    require_det_one: bool = True,
    require_primitive: bool = False,
    keep_rejected: bool = False,
) -> list[Candidate]:
    """All +-prod T_i^m_i with |m_i| <= bound, annotated with filter verdicts.

    The identity is never a matrix of repetend and is always rejected.  With
    ``keep_rejected`` every grid point is returned; otherwise only accepted ones.
    """
    basis = basis if isinstance(basis, FieldBasis) else make_basis(list(basis))
    _require_odd(unitsys.field)
    if bound < 0:
        raise ConstraintViolated(f"bound must be nonnegative, got {bound}")
    tables = [_power_table(t_matrix(basis, u), bound) for u in unitsys.units]
    n = basis.dim
    out = []
    for exps in itertools.product(range(-bound, bound + 1), repeat=unitsys.rank):
        prod = ExactMatrix.identity(n)
        for table, m in zip(tables, exps):
            prod = prod @ table[m]
        for sign in (1, -1):
            mat = prod if sign > 0 else -prod
            filters = {"not_identity": not mat.is_identity()}
            if require_integer:
                filters["integer"] = mat.is_integer()
            if require_det_one:
                filters["det_one"] = mat.det() == 1
            if require_primitive:
                filters["primitive"] = (
                    mat.is_integer() and mat.is_nonnegative() and is_primitive(mat)
                )
            cand = Candidate(sign, tuple(exps), mat, filters)
            if keep_rejected or cand.accepted:
                out.append(cand)
    out.sort(key=lambda c: (tuple(abs(m) for m in c.exponents), c.exponents, -c.sign))
    return out


def _log_guess(lam: FieldElement, unitsys: UnitSystem, dps: int = 100) -> Optional[tuple[int, ...]]:
    """Round the solution of log|sigma_j(lam)| = sum m_i log|sigma_j(eps_i)| over real embeddings."""
    import mpmath

    field = unitsys.field
    embs = field.embeddings
    r = unitsys.rank
    if r == 0 or len(embs) < r:
        return None
    bits = int(dps * 3.33) + 16
    with mpmath.workdps(dps):

        def log_abs(a: FieldElement, emb) -> mpmath.mpf:
            q = approximate_at(a, emb, bits)
            return mpmath.log(abs(mpmath.mpf(q.numerator) / q.denominator))

        rows = [[log_abs(u, e) for u in unitsys.units] for e in embs]
        rhs = [log_abs(lam, e) for e in embs]
        a = mpmath.matrix(rows)
        b = mpmath.matrix(rhs)
        try:
            if len(embs) == r:
                sol = mpmath.lu_solve(a, b)
            else:
                sol = mpmath.qr_solve(a, b)[0]
        except ZeroDivisionError:
            return None
        return tuple(int(mpmath.nint(sol[i])) for i in range(r))


def _assemble(basis: FieldBasis, unitsys: UnitSystem, exps: Sequence[int]) -> ExactMatrix:
    out = ExactMatrix.identity(basis.dim)
    for u, m in zip(unitsys.units, exps):
        out = out @ (t_matrix(basis, u) ** m)
    return out


@dataclass(frozen=True)
class Match:
    sign: int
    exponents: tuple[int, ...]
    method: str  # "log-guess" or "exhaustive"

    def to_json(self) -> dict:
        return {
            "sign": "+" if self.sign > 0 else "-",
            "exponents": [str(m) for m in self.exponents],
            "method": self.method,
        }


def match_repetend(m: ExactMatrix, basis, unitsys: UnitSystem, bound: int = 10) -> Optional[Match]:
    """Exponents with m = sign * prod T(eps_i)^m_i, or None (identity and misses included)."""
    basis = basis if isinstance(basis, FieldBasis) else make_basis(list(basis))
    _require_odd(unitsys.field)
    if m.is_identity():
        return None
    try:
        lam = eigen_element(m, basis)
    except NotAMultiplicationMatrix:
        return None
    guess = _log_guess(lam, unitsys)
    if guess is not None:
        base = _assemble(basis, unitsys, guess)
        for sign in (1, -1):
            if (base if sign > 0 else -base) == m:
                return Match(sign, guess, "log-guess")
    tables = [_power_table(t_matrix(basis, u), bound) for u in unitsys.units]
    for exps in sorted(
        itertools.product(range(-bound, bound + 1), repeat=unitsys.rank),
        key=lambda e: (sum(abs(x) for x in e), e),
    ):
        prod = ExactMatrix.identity(basis.dim)
        for table, k in zip(tables, exps):
            prod = prod @ table[k]
        if prod == m:
            return Match(1, tuple(exps), "exhaustive")
        if -prod == m:
            return Match(-1, tuple(exps), "exhaustive")
    return None


def search_units(field: NumberField, box: int = 10, limit: Optional[int] = None) -> list[FieldElement]:
    """Units with power-basis coordinates in [-box, box]; a desk-scale helper, not exhaustive."""
    found = []
    rng = range(-box, box + 1)
    for coords in sorted(itertools.product(rng, repeat=field.degree), key=lambda c: (sum(map(abs, c)), c)):
        if not any(coords[1:]):
            continue
        u = field.element(list(coords))
        if abs(u.norm()) == 1 and unit_certificate(u).is_unit:
            found.append(u)
            if limit is not None and len(found) >= limit:
                break
    return found


# AJPA families


@dataclass(frozen=True)
class FamilyInstance:
    name: str
    params: dict
    field: NumberField
    vector: tuple[FieldElement, ...]
    preperiod: tuple[StepLabel, ...]
    repetend: tuple[StepLabel, ...]

    @property
    def predicted_names(self) -> list[str]:
        return [s.name for s in self.preperiod + self.repetend]

    def notation(self) -> str:
        pre = " ".join(s.name for s in self.preperiod)
        rep = " ".join(s.name for s in self.repetend)
        return (pre + " " if pre else "") + "overline{" + rep + "}"


def _a(i: int, j: int, k: int) -> StepLabel:
    return StepLabel(Algorithm.AJPA, (i, j, k))


def _as_int(name: str, value, minimum: int) -> int:
    q = to_fraction(value)
    if q.denominator != 1:
        raise ConstraintViolated(f"{name} = {fraction_str(q)} must be an integer")
    if q < minimum:
        raise ConstraintViolated(f"{name} = {q} must be at least {minimum}")
    return int(q)


def family_field(s: int, t: int) -> NumberField:
    return make_field(Polynomial.of(-1, t, s, 1), "positive")


def ajpa_family(s, t, f=0, r=0) -> FamilyInstance:
    """The vector (y^2 + f y + r, y, 1) for y^3 + s y^2 + t y - 1 = 0 with its predicted expansion."""
    s = _as_int("s", s, 1)
    t = _as_int("t", t, 1)
    f = _as_int("f", f, 0)
    r = _as_int("r", r, 0)
    if not t > s:
        raise ConstraintViolated(f"t > s fails for (s, t) = ({s}, {t})")
    if not 4 * t > s * s:
        raise ConstraintViolated(f"t > s^2/4 fails for (s, t) = ({s}, {t})")
    field = family_field(s, t)
    if field.signature != (1, 1):
        raise ConstraintViolated("the field is not complex cubic")  # excluded by 4t > s^2
    y = field.gen()
    if f > 0:
        u = y * y + y * f
        if not (1 - u).sign() > 0:
            raise ConstraintViolated(f"y^2 + f y < 1 fails for f = {f}")
        k = abs(f**3 - s * f * f + f * t + 1)
        if not (k - (y + f) * (y + f)).sign() > 0:
            raise ConstraintViolated(f"y^2 + f y < y sqrt({k}) fails for f = {f}")
    vector = (y * y + y * f + r, y, field.one())
    pre = ((_a(3, r, 0),) if r > 0 else ()) + (_a(2, f, t),)
    rep = (_a(1, t, s), _a(3, t, s), _a(2, s, t))
    return FamilyInstance("ajpa", {"s": s, "t": t, "f": f, "r": r}, field, vector, pre, rep)


TAMURA_M1_REPETEND = ((1, 0, 1), (2, 2, 1), (3, 0, 1), (1, 1, 2), (2, 1, 0), (3, 1, 2))


def tamura_vector(m, literal: bool = False) -> FamilyInstance:
    """The cube-root vectors with period 6 (m = 1) or period 3 (m >= 2).

    By default the vector is (y^2 + 2my + m^2, y, 1); with ``literal`` it is
    (y^2 + 2my, y, 1), which equals (cbrt((m^3+1)^2) - m^2, cbrt(m^3+1) - m, 1).
    The two differ by one leading step A(3, m^2, 0).
    """
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise InvalidM(f"m must be a positive integer, got {m!r}")
    r = 0 if literal else m * m
    if m >= 2:
        inst = ajpa_family(3 * m, 3 * m * m, 2 * m, r)
        return FamilyInstance(
            "tamura", {"m": m, "literal": literal}, inst.field, inst.vector, inst.preperiod, inst.repetend
        )
    field = family_field(3, 3)
    y = field.gen()
    vector = (y * y + y * 2 + r, y, field.one())
    pre = () if literal else (_a(3, 1, 0),)
    rep = tuple(_a(*ix) for ix in TAMURA_M1_REPETEND)
    return FamilyInstance("tamura", {"m": m, "literal": literal}, field, vector, pre, rep)


def infinite_word(pre: Sequence, rep: Sequence, length: int) -> list:
    """First ``length`` letters of ``pre`` followed by ``rep`` repeated forever."""
    word = list(pre[:length])
    while len(word) < length and rep:
        word.extend(rep[: length - len(word)])
    return word


@dataclass(frozen=True)
class FamilyCheck:
    instance: FamilyInstance
    expansion: Expansion
    passed: bool
    same_split: bool  # observed minimal (N, p) equals the predicted block lengths

    def to_json(self) -> dict:
        e = self.expansion
        return {
            "family": self.instance.name,
            "params": {k: str(v).lower() if isinstance(v, bool) else str(v) for k, v in sorted(self.instance.params.items())},
            "predicted": self.instance.notation(),
            "observed": e.notation(compress=False),
            "verdict": e.verdict.value,
            "preperiod": None if e.preperiod is None else str(e.preperiod),
            "period": None if e.period is None else str(e.period),
            "same_split": self.same_split,
            "result": "PASS" if self.passed else "FAIL",
        }


def verify_family(inst: FamilyInstance, budget: int = DEFAULT_BUDGET) -> FamilyCheck:
    """Expand with AJPA and compare the infinite label word with the prediction.

    The predicted split need not be minimal (when the last preperiod letter
    equals the last repetend letter the observed repetend is a rotation), so the
    comparison is on words, plus equality of the period.
    """
    e = expand(inst.field, inst.vector, Algorithm.AJPA, budget)
    if not e.is_periodic:
        return FamilyCheck(inst, e, False, False)
    p = len(inst.repetend)
    length = max(len(inst.preperiod), e.preperiod) + 2 * p
    observed = infinite_word([s.label for s in e.preperiod_steps], [s.label for s in e.repetend_steps], length)
    predicted = infinite_word(list(inst.preperiod), list(inst.repetend), length)
    ok = e.period == p and observed == predicted
    return FamilyCheck(inst, e, ok, e.preperiod == len(inst.preperiod) and e.period == p)


def admissible_f(s: int, t: int, f_max: int = 50) -> list[int]:
    """Positive f up to f_max meeting the side conditions for (s, t)."""
    out = []
    for f in range(1, f_max + 1):
        try:
            ajpa_family(s, t, f, 0)
        except ConstraintViolated:
            continue
        out.append(f)
    return out
