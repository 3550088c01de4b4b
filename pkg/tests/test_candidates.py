from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from repetend import candidates as cand
from repetend.errors import ConstraintViolated, EvenDegree, InvalidM, NotAUnit, WrongUnitCount
from repetend.linalg import ExactMatrix
from repetend.multmatrix import make_basis, t_matrix
from repetend.polynomial import Polynomial
from repetend.realfield import make_field

K7 = make_field("x^3 + x^2 - 2*x - 1", 2)
Z = K7.gen()
BASIS7 = make_basis([Z * Z, Z, K7.one()])
UNITS7 = cand.verify_units(K7, [-1 + Z + Z * Z, 2 - Z * Z])
K2 = make_field("x^3 - 2")
Y = K2.gen()


def test_verify_units():
    assert UNITS7.rank == 2
    with pytest.raises(NotAUnit):
        cand.verify_units(K2, [Y])
    with pytest.raises(NotAUnit):
        cand.verify_units(K2, [Y / 2 + 1])
    with pytest.raises(WrongUnitCount):
        cand.verify_units(K7, [Z])


def test_candidate_enumeration_counts():
    found = cand.enumerate_candidates(BASIS7, UNITS7, 3)
    assert len(found) == 48
    assert all(c.accepted and c.matrix.det() == 1 for c in found)
    units2 = cand.verify_units(K2, [Y * Y + Y + 1])
    basis2 = make_basis([K2.one(), Y, Y * Y])
    everything = cand.enumerate_candidates(basis2, units2, 2, keep_rejected=True)
    assert len(everything) == cand.raw_candidate_count(1, 2) == 10
    prim = cand.enumerate_candidates(basis2, units2, 2, require_primitive=True)
    assert [c.exponents for c in prim] == [(1,), (2,)]
    with pytest.raises(EvenDegree):
        q2 = make_field("x^2 - 2", "positive")
        cand.enumerate_candidates([q2.gen(), q2.one()], cand.verify_units(q2, [q2.gen() + 1]), 2)
    with pytest.raises(ConstraintViolated):
        cand.enumerate_candidates(basis2, units2, -1)


def test_match_repetend():
    swapped = make_basis([K7.one(), Z, Z * Z])  # JPA ran on the reversed vector
    for mat, basis, exps in (
        ([[3, 9, 4], [4, 11, 5], [5, 14, 6]], swapped, (1, -3)),
        ([[20, 45, 16], [16, 36, 13], [13, 29, 10]], BASIS7, (3, -3)),
        ([[2, 3, 1], [1, 3, 1], [1, 2, 1]], BASIS7, (0, -2)),
    ):
        hit = cand.match_repetend(ExactMatrix.of(mat), basis, UNITS7)
        assert hit is not None and hit.sign == 1 and hit.exponents == exps
    assert cand.match_repetend(ExactMatrix.identity(3), BASIS7, UNITS7) is None


def test_search_units_finds_the_cube_root_unit():
    found = cand.search_units(K2, box=2)
    assert any(u == Y * Y + Y + 1 or u == 1 / (Y * Y + Y + 1) or u == Y - 1 for u in found)


def test_family_constructors():
    inst = cand.ajpa_family(2, 3, 1, 1)
    assert inst.notation() == "A(3,1,0) A(2,1,3) overline{A(1,3,2) A(3,3,2) A(2,2,3)}"
    with pytest.raises(ConstraintViolated):
        cand.ajpa_family(3, 2)
    with pytest.raises(ConstraintViolated):
        cand.ajpa_family(4, 4)
    with pytest.raises(ConstraintViolated):
        cand.ajpa_family(2, 3, Fraction(1, 2))
    with pytest.raises(InvalidM):
        cand.tamura_vector(0)
    assert cand.infinite_word([1], [2, 3], 6) == [1, 2, 3, 2, 3, 2]


def test_family_verification_small_cases():
    for s, t in ((1, 2), (2, 3), (3, 4)):
        for f in [0] + cand.admissible_f(s, t, 10)[:2]:
            check = cand.verify_family(cand.ajpa_family(s, t, f, 1))
            assert check.passed, check.to_json()


rat = st.fractions(min_value=-4, max_value=4, max_denominator=3)
ALPHAS = [(-2, 0, 0), (-1, -2, 1), (-1, 3, 2), (1, -1, 0)]


@given(st.sampled_from(ALPHAS), rat, rat, rat.filter(lambda q: q != 0), rat, rat, rat)
def test_first_column_formula_matches_t_matrix(alpha, g0, g1, g2, b1, b2, b3):
    k = make_field(Polynomial.of(*alpha, 1), 0)
    y = k.gen()
    x = g0 + y * g1 + y * y * g2
    eps = b1 + y * b2 + x * b3
    col = t_matrix(make_basis([x, y, k.one()]), eps).column(0)
    assert cand.first_column_from_unit((g0, g1, g2), alpha, (b1, b2, b3)) == tuple(col)
