"""Acceptance criteria 1-9, all exact.

Each criterion records one PASS/FAIL line, printed in the pytest terminal
summary and also when the file is run directly (``python tests/test_acceptance.py``).
A sub-check that cannot hold is kept as a strict xfail and printed as XFAIL.
"""

from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from repetend import candidates as cand
from repetend.cli import run
from repetend.expansion import Expansion, expand, pure_exclusion, repetend_matrix
from repetend.linalg import ExactMatrix, mat_pow, permutation_matrix
from repetend.multmatrix import apply_q, make_basis, q_from_powers, t_matrix
from repetend.realfield import make_field

RESULTS: dict[str, tuple[str, str]] = {}
CORPUS: list[Expansion] = []  # runs gathered by criteria 1-6 for criterion 8


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = ("PASS" if ok else "FAIL", detail)
    assert ok, detail


def remember(e: Expansion) -> Expansion:
    CORPUS.append(e)
    return e


K2 = make_field("x^3 - 2")
Y = K2.gen()
CUBE = (K2.one(), Y, Y * Y)

BRUN_DISPLAY = "T32 overline{T21 T13^3 T32 T23^3 T32 T21^3 T13 T31 T12 T23 T31 T12}"
# the displayed Selmer word, T31 followed by a 15-letter repetend ending in T31
SELMER_PRE = ["T31"]
SELMER_REP = "T23 T13 T21 T32 T12 T31 T21 T32 T13 T23 T12 T32 T13 T21 T31".split()


def test_criterion_1_rcf():
    q = make_field("x^2 - 2", "positive")
    s = q.gen()
    a = remember(expand(q, (s, q.one()), "rcf-mult"))
    b = remember(expand(q, (s - 1, q.one()), "rcf-mult"))
    ok = (
        a.labels == ["C1", "C2^2", "C1^2"] and (a.preperiod, a.period) == (1, 2)
        and b.labels == ["C2^2", "C1^2"] and b.is_purely_periodic
    )
    record("1", ok, f"(sqrt2, 1) = {a.notation()}; (sqrt2 - 1, 1) = {b.notation()}")


def test_criterion_2_jpa():
    e = remember(expand(K2, CUBE, "jpa"))
    ok = e.labels == ["A_JP(1,1)", "A_JP(2,3)", "A_JP(3,3)"] and (e.preperiod, e.period) == (2, 1)
    record("2", ok, f"{e.notation()}, (N, p) = ({e.preperiod}, {e.period})")


def test_criterion_3_brun_selmer_sequences():
    b = remember(expand(K2, CUBE, "brun"))
    s = remember(expand(K2, CUBE, "selmer"))
    observed = cand.infinite_word(s.labels[: s.preperiod], s.labels[s.preperiod :], 60)
    displayed = cand.infinite_word(SELMER_PRE, SELMER_REP, 60)
    ok = b.notation() == BRUN_DISPLAY and observed == displayed and s.period == 15
    record(
        "3",
        ok,
        f"Brun {b.notation()} (period {b.period}); Selmer period {s.period}, word equals the display",
    )


@pytest.mark.xfail(strict=True, reason="the displayed Brun repetend has 18 steps (12 run-length blocks), not 13")
def test_criterion_3_brun_repetend_length_13():
    b = expand(K2, CUBE, "brun")
    RESULTS["3-length"] = ("XFAIL", f"Brun repetend has {b.period} steps; a length of 13 is not attainable")
    assert b.period == 13


def test_criterion_4_q_machinery():
    basis = make_basis([Y * Y, Y, K2.one()])
    m = t_matrix(basis, Y * Y + Y + 1)
    q = q_from_powers(m, 1)
    want_q = (
        ExactMatrix.identity(3),
        ExactMatrix.of([[0, 0, 2], [1, 0, 0], [0, 1, 0]]),
        ExactMatrix.of([[0, 2, 0], [0, 0, 2], [1, 0, 0]]),
    )
    powers = {
        1: ExactMatrix.of([[1, 2, 2], [1, 1, 2], [1, 1, 1]]),
        2: ExactMatrix.of([[5, 6, 8], [4, 5, 6], [3, 4, 5]]),
        3: ExactMatrix.of([[19, 24, 30], [15, 19, 24], [12, 15, 19]]),
    }
    ok = q.mats == want_q and all(
        mat_pow(m, k) == want and apply_q(q, want.column(0)) == want for k, want in powers.items()
    )
    record("4", ok, "Q_1 triple and M, M^2, M^3 rebuilt from their first columns")


K7 = make_field("x^3 + x^2 - 2*x - 1", 2)
Z = K7.gen()
V7 = (Z * Z, Z, K7.one())


def test_criterion_5_matrix_of_repetend():
    basis = make_basis(list(V7))
    eps1, eps2 = -1 + Z + Z * Z, 2 - Z * Z
    units = cand.verify_units(K7, [eps1, eps2])
    m1_ok = t_matrix(basis, eps1) == ExactMatrix.of([[1, 1, 0], [0, 1, 1], [1, 1, -1]])
    m2_ok = t_matrix(basis, eps2) == ExactMatrix.of([[-1, 1, 1], [1, 0, -1], [-1, 0, 2]])
    pv = permutation_matrix((3, 2, 1)).apply(V7)
    runs = [
        ("jpa", pv, [[3, 9, 4], [4, 11, 5], [5, 14, 6]], (1, -3)),
        ("brun", V7, [[20, 45, 16], [16, 36, 13], [13, 29, 10]], (3, -3)),
        ("selmer", V7, [[2, 3, 1], [1, 3, 1], [1, 2, 1]], (0, -2)),
    ]
    found = []
    ok = m1_ok and m2_ok
    for alg, vec, want, exps in runs:
        e = remember(expand(K7, vec, alg))
        m = repetend_matrix(e).conjugated
        hit = cand.match_repetend(m, make_basis(list(vec)), units)
        found.append(None if hit is None else hit.exponents)
        ok = ok and m == ExactMatrix.of(want) and hit is not None and hit.sign == 1 and hit.exponents == exps
    record("5", ok, f"M1, M2 exact; repetend matrices exact; exponents {found}")


def test_criterion_6_ajpa_families():
    runs = fails = 0
    missing_f = []
    for s in range(1, 6):
        for t in range(s + 1, 7):
            if 4 * t <= s * s:
                continue
            fs = cand.admissible_f(s, t, 20)
            if not fs:
                missing_f.append((s, t))
            for f in [0] + fs:
                for r in (0, 1, 2):
                    check = cand.verify_family(cand.ajpa_family(s, t, f, r))
                    if check.expansion.is_periodic:
                        CORPUS.append(check.expansion)
                    runs += 1
                    fails += not (check.passed and check.expansion.period == 3)
    tamura = []
    for m in range(1, 6):
        check = cand.verify_family(cand.tamura_vector(m))
        tamura.append(check.passed and check.expansion.period == (6 if m == 1 else 3))
        literal = cand.verify_family(cand.tamura_vector(m, literal=True))
        CORPUS.extend(c.expansion for c in (check, literal) if c.expansion.is_periodic)
    ok = fails == 0 and all(tamura)
    detail = f"{runs - fails}/{runs} family runs, tamura m=1..5 {'ok' if all(tamura) else tamura}"
    if missing_f:
        detail += f"; no admissible f > 0 for {missing_f}"
    record("6", ok, detail)


# criterion 7 reuses the property suites of the module tests (each draws 100 cases, fixed seed)

def _property_suites():
    from tests import test_algorithms, test_multmatrix, test_realfield
    return [
        test_realfield.test_field_axioms,
        test_realfield.test_norm_is_multiplicative,
        test_multmatrix.test_t_matrix_is_a_homomorphism,
        test_multmatrix.test_q_round_trip,
        test_multmatrix.test_closed_form_equals_powers_on_power_basis,
        test_multmatrix.test_cubic_predicates_match_direct_signs,
        test_multmatrix.test_cubic_norm_ratios_match_determinant_norms,
        test_algorithms.test_classify_is_scale_invariant,
    ]


def test_criterion_7_property_suites():
    failed = []
    suites = _property_suites()
    for fn in suites:
        try:
            fn()
        except Exception as exc:  # hypothesis re-raises the shrunk failure
            failed.append(f"{fn.__name__}: {type(exc).__name__}")
    record("7", not failed, f"{len(suites) - len(failed)}/{len(suites)} property suites hold" + (f" ({failed})" if failed else ""))


def _ensure_corpus():
    if len(CORPUS) < 10:
        test_criterion_1_rcf()
        test_criterion_2_jpa()
        test_criterion_3_brun_selmer_sequences()
        test_criterion_5_matrix_of_repetend()
        test_criterion_6_ajpa_families()


def test_criterion_8_pure_periodicity_conditions():
    _ensure_corpus()
    pure = [e for e in CORPUS if e.is_purely_periodic]
    # tails of eventually periodic runs are purely periodic vectors too
    tails = [(e.field, e.states[e.preperiod]) for e in CORPUS if e.is_periodic and e.preperiod > 0]
    vectors = [(e.field, e.vector) for e in pure] + tails
    offenders = [str(v) for k, v in vectors if pure_exclusion(k, v).excluded]
    q = make_field("x^2 - 2", 1)
    ex1 = pure_exclusion(q, (q.gen() + 2, q.one()))
    k = make_field("x^3 - 3*x + 1", 1)
    w = k.gen()
    ex2 = pure_exclusion(k, (w * w, w, k.one()))
    ok = not offenders and ex1.excluded and ex1.totally_positive_conjugate is not None and ex2.norm_sign_violation
    record(
        "8",
        ok,
        f"{len(pure)} purely periodic runs and {len(tails)} periodic tails show no obstruction; "
        f"both counterexample vectors excluded",
    )


JSON_RUNS = [
    ["expand", "--field", "x^2 - 2", "--root", "positive", "--vector", "y, 1", "--algorithm", "rcf-mult"],
    ["expand", "--field", "x^3 - 2", "--vector", "1, y, y^2", "--algorithm", "jpa"],
    ["expand", "--field", "x^3 - 2", "--vector", "1, y, y^2", "--algorithm", "brun"],
    ["expand", "--field", "x^3 - 2", "--vector", "1, y, y^2", "--algorithm", "selmer"],
    ["qmap", "--field", "x^3 - 2", "--vector", "y^2, y, 1"],
    ["candidates", "--field", "x^3 + x^2 - 2*x - 1", "--root", "2", "--vector", "y^2, y, 1",
     "--units", "-1 + y + y^2; 2 - y^2", "--algorithm", "brun"],
    ["family", "ajpa", "--scan", "--max-t", "4", "--max-r", "1"],
    ["family", "tamura", "--scan"],
    ["check-pure", "--field", "x^3 - 3*x + 1", "--root", "1", "--vector", "y^2, y, 1"],
]


def _json(argv):
    out = io.StringIO()
    assert run(argv + ["--format", "json"], out, io.StringIO()) == 0
    return out.getvalue()


def test_criterion_9_determinism():
    same = [_json(argv) == _json(argv) for argv in JSON_RUNS]
    proc = [
        subprocess.run([sys.executable, "-m", "repetend", *argv, "--format", "json"], capture_output=True, text=True).stdout
        for argv in (JSON_RUNS[2], JSON_RUNS[2])
    ]
    ok = all(same) and proc[0] == proc[1] == _json(JSON_RUNS[2])
    record("9", ok, f"{sum(same)}/{len(same)} runs byte-identical in process, and across processes")


def summary_lines() -> list[str]:
    order = ["1", "2", "3", "3-length", "4", "5", "6", "7", "8", "9"]
    return [f"criterion {k}: {RESULTS[k][0]}  {RESULTS[k][1]}" for k in order if k in RESULTS]


if __name__ == "__main__":
    sys.path.insert(0, __file__.rsplit("/tests/", 1)[0])
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(summary_lines()))
