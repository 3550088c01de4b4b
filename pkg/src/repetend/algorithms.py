"""Classification steps of the supported continued fraction algorithms.

Each classifier takes a strictly positive state vector and returns the label
and matrix ``A`` of the set containing it, or None when no set does.  The
driver then replaces ``v`` by ``A^-1 v``.  Positions are 1-based throughout,
matching the transvection names ``T_ij``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .errors import NonpositiveInput, ParseError, WrongDimension
from .linalg import ExactMatrix, mat_pow, transvection
from .realfield import FieldElement, floor_ratio


class Algorithm(enum.Enum):
    RCF_ADD = "rcf-add"
    RCF_MULT = "rcf-mult"
    JPA = "jpa"
    BRUN = "brun"
    SELMER = "selmer"
    AJPA = "ajpa"

    @classmethod
    def parse(cls, name) -> Algorithm:
        if isinstance(name, Algorithm):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            choices = ", ".join(a.value for a in cls)
            raise ParseError(f"unknown algorithm {name!r}; choose one of {choices}") from None


@dataclass(frozen=True)
class StepLabel:
    algorithm: Algorithm
    indices: tuple[int, ...]

    @property
    def name(self) -> str:
        a, ix = self.algorithm, self.indices
        if a in (Algorithm.RCF_ADD, Algorithm.RCF_MULT):
            branch, k = ix
            return f"C{branch}" if k == 1 else f"C{branch}^{k}"
        if a is Algorithm.JPA:
            return "A_JP(" + ",".join(str(j) for j in ix) + ")"
        if a in (Algorithm.BRUN, Algorithm.SELMER):
            i, j = ix
            return f"T{i}{j}"
        return "A(" + ",".join(str(j) for j in ix) + ")"

    def to_json(self) -> dict:
        return {"name": self.name, "indices": [str(i) for i in self.indices]}

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class McfStep:
    label: StepLabel
    matrix: ExactMatrix


@dataclass(frozen=True)
class State:
    vector: tuple[FieldElement, ...]

    @property
    def dim(self) -> int:
        return len(self.vector)


def make_state(vector: Sequence[FieldElement]) -> State:
    for i, v in enumerate(vector):
        if v.sign() <= 0:
            raise NonpositiveInput(f"component {i + 1} ({v}) is not strictly positive")
    return State(tuple(vector))


def _vec(state) -> tuple[FieldElement, ...]:
    return state.vector if isinstance(state, State) else tuple(state)


# RCF

C1 = ExactMatrix.of([[1, 1], [0, 1]])
C2 = ExactMatrix.of([[1, 0], [1, 1]])


@lru_cache(maxsize=None)
def _rcf_matrix(branch: int, k: int) -> ExactMatrix:
    return mat_pow(C1 if branch == 1 else C2, k)


def classify_rcf(state, multiplicative: bool) -> Optional[McfStep]:
    v1, v0 = _require(state, 2)
    alg = Algorithm.RCF_MULT if multiplicative else Algorithm.RCF_ADD
    c = (v1 - v0).sign()
    branch = 1 if c >= 0 else 2
    if not multiplicative:
        return McfStep(StepLabel(alg, (branch, 1)), _rcf_matrix(branch, 1))
    big, small = (v1, v0) if branch == 1 else (v0, v1)
    k = floor_ratio(big, small)
    if k >= 2 and big == small * k:
        # an exact multiple would land on the boundary; stop one short
        k -= 1
    return McfStep(StepLabel(alg, (branch, k)), _rcf_matrix(branch, k))


# JPA


@lru_cache(maxsize=None)
def jpa_matrix(indices: tuple[int, ...]) -> ExactMatrix:
    n = len(indices) + 1
    rows = [[0] * n for _ in range(n)]
    rows[0][n - 1] = 1
    for ell in range(2, n + 1):
        rows[ell - 1][ell - 2] = 1
        rows[ell - 1][n - 1] += indices[ell - 2]
    return ExactMatrix.of(rows)


def classify_jpa(state) -> Optional[McfStep]:
    v = _vec(state)
    n = len(v)
    if n < 2:
        raise WrongDimension("JPA needs at least two components")
    last = v[-1]
    if any((last - x).sign() <= 0 for x in v[:-1]):
        return None
    js = tuple(floor_ratio(v[ell], v[0]) for ell in range(1, n))
    if js[-1] < 1:
        return None
    return McfStep(StepLabel(Algorithm.JPA, js), jpa_matrix(js))


# Brun and Selmer


def strict_order(v: Sequence[FieldElement]) -> Optional[tuple[int, ...]]:
    """1-based positions sorted by increasing value, or None on any tie."""
    n = len(v)
    below = [0] * n  # how many components are smaller than v[i]
    for i in range(n):
        for j in range(i + 1, n):
            s = (v[i] - v[j]).sign()
            if s == 0:
                return None
            below[i if s > 0 else j] += 1
    order = [0] * n
    for i, rank in enumerate(below):
        order[rank] = i + 1
    return tuple(order)


def classify_brun(state) -> Optional[McfStep]:
    sigma = strict_order(_vec(state))
    if sigma is None:
        return None
    i, j = sigma[-1], sigma[-2]
    return McfStep(StepLabel(Algorithm.BRUN, (i, j)), transvection(len(sigma), i, j))


def classify_selmer(state) -> Optional[McfStep]:
    sigma = strict_order(_vec(state))
    if sigma is None:
        return None
    i, j = sigma[-1], sigma[0]
    return McfStep(StepLabel(Algorithm.SELMER, (i, j)), transvection(len(sigma), i, j))


# AJPA on (v1, v2, v0), stored at positions 1, 2, 3


@lru_cache(maxsize=None)
def ajpa_matrix(i: int, j: int, k: int) -> ExactMatrix:
    a, b = (p for p in (1, 2, 3) if p != i)
    return mat_pow(transvection(3, a, i), j) @ mat_pow(transvection(3, b, i), k)


def classify_ajpa(state) -> Optional[McfStep]:
    v = _vec(state)
    if len(v) != 3:
        raise WrongDimension("AJPA is defined for three components")
    norms = [abs(x.norm()) for x in v]
    found = None
    for i in (1, 2, 3):
        a, b = (p for p in (1, 2, 3) if p != i)
        pivot = v[i - 1]
        for p, q in ((a, b), (b, a)):
            vp, vq = v[p - 1], v[q - 1]
            if (vp - pivot).sign() <= 0 or (vp - vq).sign() <= 0:
                continue
            # pivot / sqrt|N(pivot)| > v_q / sqrt|N(v_q)|, squared (all positive)
            if (pivot * pivot * norms[q - 1] - vq * vq * norms[i - 1]).sign() <= 0:
                continue
            j = floor_ratio(v[a - 1], pivot)
            k = floor_ratio(v[b - 1], pivot)
            if j < 0 or k < 0:
                continue
            if found is not None:
                raise AssertionError("AJPA sets overlapped; they are disjoint by construction")
            found = McfStep(StepLabel(Algorithm.AJPA, (i, j, k)), ajpa_matrix(i, j, k))
    return found


def _require(state, n: int) -> tuple[FieldElement, ...]:
    v = _vec(state)
    if len(v) != n:
        raise WrongDimension(f"expected {n} components, got {len(v)}")
    return v


CLASSIFIERS: dict[Algorithm, Callable[[object], Optional[McfStep]]] = {
    Algorithm.RCF_ADD: lambda s: classify_rcf(s, False),
    Algorithm.RCF_MULT: lambda s: classify_rcf(s, True),
    Algorithm.JPA: classify_jpa,
    Algorithm.BRUN: classify_brun,
    Algorithm.SELMER: classify_selmer,
    Algorithm.AJPA: classify_ajpa,
}


def classify(algorithm, state) -> Optional[McfStep]:
    return CLASSIFIERS[Algorithm.parse(algorithm)](state)


def required_dimension(algorithm) -> Optional[int]:
    a = Algorithm.parse(algorithm)
    if a in (Algorithm.RCF_ADD, Algorithm.RCF_MULT):
        return 2
    if a is Algorithm.AJPA:
        return 3
    return None
