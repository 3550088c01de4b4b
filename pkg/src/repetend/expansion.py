"""The generic expansion driver, periodicity detection and repetend analysis."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .algorithms import Algorithm, McfStep, classify, make_state, required_dimension
from .errors import FieldMismatch, NonpositiveInput, NotABasis, NotPeriodic, WrongDimension
from .linalg import ExactMatrix, charpoly, fraction_str, inverse, is_primitive, mat_prod
from .multmatrix import eigen_element, make_basis
from .polynomial import format_poly
from .realfield import FieldElement, NumberField, embed_sign

DEFAULT_BUDGET = 10_000


class Verdict(enum.Enum):
    TERMINATED = "TERMINATED"
    EVENTUALLY_PERIODIC = "EVENTUALLY_PERIODIC"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


@dataclass
class Expansion:
    algorithm: Algorithm
    field: NumberField
    vector: tuple[FieldElement, ...]
    steps: list[McfStep]
    states: list[tuple[FieldElement, ...]]  # states[i] is v^(i) scaled so its last entry is 1
    verdict: Verdict
    budget: int
    preperiod: Optional[int] = None
    period: Optional[int] = None

    @property
    def labels(self) -> list[str]:
        return [s.label.name for s in self.steps]

    @property
    def preperiod_steps(self) -> list[McfStep]:
        return self.steps[: self.preperiod] if self.is_periodic else list(self.steps)

    @property
    def repetend_steps(self) -> list[McfStep]:
        if not self.is_periodic:
            return []
        return self.steps[self.preperiod : self.preperiod + self.period]

    @property
    def is_periodic(self) -> bool:
        return self.verdict is Verdict.EVENTUALLY_PERIODIC

    @property
    def is_purely_periodic(self) -> bool:
        return self.is_periodic and self.preperiod == 0

    def notation(self, compress: bool = True) -> str:
        """Expansion in the ``R overline{N}`` shorthand."""
        pre = _names(self.preperiod_steps, compress)
        if not self.is_periodic:
            tail = {"TERMINATED": "(terminated)", "BUDGET_EXHAUSTED": "..."}[self.verdict.value]
            return " ".join(pre + [tail])
        rep = _names(self.repetend_steps, compress)
        return " ".join(pre + ["overline{" + " ".join(rep) + "}"])


def _names(steps: Sequence[McfStep], compress: bool) -> list[str]:
    names = [s.label.name for s in steps]
    if not compress:
        return names
    out: list[str] = []
    i = 0
    while i < len(names):
        j = i
        while j < len(names) and names[j] == names[i]:
            j += 1
        run = j - i
        out.append(names[i] if run == 1 else f"{names[i]}^{run}")
        i = j
    return out


def _normalize(v: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
    last = v[-1]
    if last == 1:
        return tuple(v)
    inv = last.inverse()
    return tuple(x * inv for x in v[:-1]) + (last.field.one(),)


def _key(v: Sequence[FieldElement]) -> tuple:
    return tuple(x.coords for x in v)


_INVERSES: dict[ExactMatrix, ExactMatrix] = {}


def _inverse(m: ExactMatrix) -> ExactMatrix:
    inv = _INVERSES.get(m)
    if inv is None:
        inv = inverse(m)
        if len(_INVERSES) < 4096:
            _INVERSES[m] = inv
    return inv


def lift_vector(field: NumberField, vector: Sequence) -> tuple[FieldElement, ...]:
    out = []
    for x in vector:
        if isinstance(x, FieldElement) and x.field != field:
            raise FieldMismatch(f"component {x} lives in another field")
        out.append(field.element(x))
    return tuple(out)


def expand(field: NumberField, vector: Sequence, algorithm, budget: int = DEFAULT_BUDGET) -> Expansion:
    """Run the algorithm until a state repeats, no set applies, or the budget runs out."""
    algorithm = Algorithm.parse(algorithm)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    v0 = lift_vector(field, vector)
    need = required_dimension(algorithm)
    if need is not None and len(v0) != need:
        raise WrongDimension(f"{algorithm.value} expands vectors of length {need}, got {len(v0)}")
    if len(v0) < 2:
        raise WrongDimension("need at least two components")
    make_state(v0)

    state = _normalize(v0)
    states = [state]
    seen = {_key(state): 0}
    steps: list[McfStep] = []
    verdict = Verdict.BUDGET_EXHAUSTED
    pre = per = None
    while len(steps) < budget:
        step = classify(algorithm, state)
        if step is None:
            verdict = Verdict.TERMINATED
            break
        nxt = _inverse(step.matrix).apply(state)
        steps.append(step)
        signs = [x.sign() for x in nxt]
        if any(s < 0 for s in signs):
            raise NonpositiveInput(f"step {step.label} left the nonnegative cone; classifier bug")
        if any(s == 0 for s in signs):
            verdict = Verdict.TERMINATED
            break
        state = _normalize(nxt)
        key = _key(state)
        if key in seen:
            # first repeat of a deterministic orbit: both indices are minimal
            pre = seen[key]
            per = len(steps) - pre
            verdict = Verdict.EVENTUALLY_PERIODIC
            break
        seen[key] = len(states)
        states.append(state)
    return Expansion(algorithm, field, v0, steps, states, verdict, budget, pre, per)


# repetend analysis


@dataclass(frozen=True)
class RepetendMatrices:
    preperiod: ExactMatrix  # R
    repetend: ExactMatrix  # N
    conjugated: ExactMatrix  # M = R N R^-1

    def __iter__(self):
        return iter((self.preperiod, self.repetend, self.conjugated))


def repetend_matrix(e: Expansion) -> RepetendMatrices:
    if not e.is_periodic:
        raise NotPeriodic(f"expansion verdict is {e.verdict.value}")
    n = len(e.vector)
    r = mat_prod((s.matrix for s in e.preperiod_steps), n)
    nrep = mat_prod((s.matrix for s in e.repetend_steps), n)
    m = r @ nrep @ inverse(r)
    return RepetendMatrices(r, nrep, m)


@dataclass(frozen=True)
class UnitCertificate:
    unit: FieldElement
    charpoly: tuple[Fraction, ...]  # lowest degree first, monic
    degree: int
    norm: Fraction
    integral: bool
    is_unit: bool

    def to_json(self) -> dict:
        return {
            "coords": self.unit.to_json(),
            "expression": str(self.unit),
            "charpoly": [fraction_str(c) for c in self.charpoly],
            "charpoly_text": format_poly(self.charpoly, "x"),
            "degree": str(self.degree),
            "norm": fraction_str(self.norm),
            "integral": self.integral,
            "is_unit": self.is_unit,
        }


def unit_certificate(unit: FieldElement) -> UnitCertificate:
    cp = tuple(unit.charpoly())
    integral = all(c.denominator == 1 for c in cp)
    return UnitCertificate(
        unit=unit,
        charpoly=cp,
        degree=unit.degree(),
        norm=unit.norm(),
        integral=integral,
        is_unit=integral and abs(cp[0]) == 1,
    )


def recover_unit(e: Expansion) -> UnitCertificate:
    """The eigenvalue of the matrix of repetend, with a unit certificate."""
    m = repetend_matrix(e).conjugated
    try:
        basis = make_basis(list(e.vector))
    except (NotABasis, FieldMismatch) as exc:
        raise NotABasis(f"the expanded vector is not a basis of its field: {exc}") from exc
    return unit_certificate(eigen_element(m, basis))


# necessary conditions for pure periodicity


@dataclass(frozen=True)
class PureExclusion:
    totally_positive_conjugate: Optional[int]  # index of an offending real embedding
    norm_test_applicable: bool
    norm_sign: Optional[int]
    norm_sign_violation: bool

    @property
    def excluded(self) -> bool:
        return self.totally_positive_conjugate is not None or self.norm_sign_violation

    def to_json(self) -> dict:
        return {
            "totally_positive_conjugate": None
            if self.totally_positive_conjugate is None
            else str(self.totally_positive_conjugate),
            "norm_test_applicable": self.norm_test_applicable,
            "norm_sign": None if self.norm_sign is None else str(self.norm_sign),
            "norm_sign_violation": self.norm_sign_violation,
            "pure_periodicity_excluded": self.excluded,
        }


def is_polynomial_vector(v: Sequence[FieldElement]) -> bool:
    """True when v is proportional to (y^(n-1), ..., y, 1) for the field generator y."""
    field = v[0].field
    n = field.degree
    if len(v) != n:
        return False
    w = _normalize(v)
    return list(w) == field.power_basis()


def pure_exclusion(field: NumberField, vector: Sequence) -> PureExclusion:
    v = lift_vector(field, vector)
    make_basis(list(v))
    offending = None
    for emb in field.embeddings:
        if emb.chosen:
            continue
        if all(embed_sign(x, emb) > 0 for x in v):
            offending = emb.index
            break
    applicable = is_polynomial_vector(v)
    nsign = None
    violation = False
    if applicable:
        n = field.degree
        nval = field.gen().norm()
        nsign = (nval > 0) - (nval < 0)
        violation = nsign != (-1) ** (n - 1)
    return PureExclusion(offending, applicable, nsign, violation)


# reporting


@dataclass
class ExpansionReport:
    expansion: Expansion
    checks: dict = dc_field(default_factory=dict)
    unit: Optional[UnitCertificate] = None
    matrices: Optional[RepetendMatrices] = None


def analyse(e: Expansion) -> ExpansionReport:
    """Repetend matrices, unit and consistency checks for a finished expansion."""
    report = ExpansionReport(e)
    checks = report.checks
    checks["product_invariant"] = check_product_invariant(e)
    if e.is_periodic:
        mats = repetend_matrix(e)
        report.matrices = mats
        m = mats.conjugated
        checks["det_abs_one"] = abs(m.det()) == 1
        cp = charpoly(m)
        checks["charpoly_integral_unit"] = all(c.denominator == 1 for c in cp) and abs(cp[0]) == 1
        checks["repetend_not_identity"] = not mats.repetend.is_identity()
        if mats.repetend.is_nonnegative() and mats.repetend.is_integer():
            checks["repetend_primitive"] = is_primitive(mats.repetend)
        field = e.field
        if len(e.vector) == field.degree:
            try:
                report.unit = recover_unit(e)
                checks["eigenvector"] = True
            except NotABasis:
                checks["eigenvector"] = False
    return report


def check_product_invariant(e: Expansion) -> bool:
    """(A^(0) ... A^(i-1)) v^(i) is proportional to v^(0) for every recorded state."""
    n = len(e.vector)
    prod = ExactMatrix.identity(n)
    base = _normalize(e.vector)
    for i, state in enumerate(e.states):
        if _normalize(prod.apply(state)) != base:
            return False
        if i < len(e.steps):
            prod = prod @ e.steps[i].matrix
    return True


def expansion_to_json(report: ExpansionReport) -> dict:
    e = report.expansion
    out = {
        "algorithm": e.algorithm.value,
        "field": e.field.describe(),
        "vector": [x.to_json() for x in e.vector],
        "vector_text": [str(x) for x in e.vector],
        "verdict": e.verdict.value,
        "preperiod": None if e.preperiod is None else str(e.preperiod),
        "period": None if e.period is None else str(e.period),
        "budget": str(e.budget),
        "notation": e.notation(),
        "steps": [{"label": s.label.to_json(), "matrix": s.matrix.to_json()} for s in e.steps],
    }
    if report.matrices is not None:
        out["preperiod_matrix"] = report.matrices.preperiod.to_json()
        out["repetend_product"] = report.matrices.repetend.to_json()
        out["repetend_matrix"] = report.matrices.conjugated.to_json()
    else:
        out["repetend_matrix"] = None
    out["unit"] = report.unit.to_json() if report.unit is not None else None
    out["checks"] = dict(sorted(report.checks.items()))
    return out


def expansion_to_text(report: ExpansionReport) -> str:
    e = report.expansion
    lines = [
        f"field: {e.field}",
        f"vector: ({', '.join(str(x) for x in e.vector)})",
        f"algorithm: {e.algorithm.value}",
        f"verdict: {e.verdict.value}",
    ]
    if e.is_periodic:
        lines.append(f"preperiod N = {e.preperiod}, period p = {e.period}")
    else:
        lines.append(f"steps taken: {len(e.steps)}")
    lines.append(f"expansion: {e.notation()}")
    if report.matrices is not None:
        lines.append("matrix of repetend M = R N R^-1:")
        lines.extend("  " + row for row in report.matrices.conjugated.render().splitlines())
    if report.unit is not None:
        u = report.unit
        lines.append(f"unit: {u.unit}  (charpoly {format_poly(u.charpoly, 'x')}, norm {fraction_str(u.norm)})")
    for name, ok in sorted(report.checks.items()):
        lines.append(f"check {name}: {'ok' if ok else 'FAILED'}")
    return "\n".join(lines)
