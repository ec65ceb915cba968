from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoorbit import PHI, FieldMismatchError, QArray, QNum
from twoorbit.exact import inverse, rank, solve

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
radicands = st.sampled_from([2, 3, 5])


@st.composite
def qnums(draw, D=None):
    D = draw(radicands) if D is None else D
    return QNum(draw(fractions), draw(fractions), D)


def test_lowest_terms_and_equality():
    x = QNum(Fraction(2, 4), Fraction(6, 8), 5)
    y = QNum(Fraction(1, 2), Fraction(3, 4), 5)
    assert x == y and hash(x) == hash(y)
    assert QNum(3) == 3 and QNum(Fraction(1, 3)) == Fraction(1, 3)


def test_golden_ratio_identities():
    assert PHI * PHI == PHI + 1
    assert 1 / PHI == PHI - 1
    assert (2 * PHI - 1) ** 2 == 5


def test_radicand_must_be_squarefree():
    with pytest.raises(ValueError):
        QNum(1, 1, 4)
    with pytest.raises(ValueError):
        QNum(1, 1, 0)


def test_mixed_fields_are_rejected():
    with pytest.raises(FieldMismatchError):
        QNum(0, 1, 2) + QNum(0, 1, 3)


def test_rationals_mix_with_any_field():
    assert QNum(1, 1, 5) + 2 == QNum(3, 1, 5)
    assert QNum(2) * QNum(0, 1, 3) == QNum(0, 2, 3)
    assert QNum(1) - QNum(0, 1, 3) == QNum(1, -1, 3)
    assert QNum(1) < QNum(0, 1, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QNum(1, 1, 5) / QNum(0, 0, 5)


def test_sqrt_in_field():
    assert QNum(Fraction(3, 2), Fraction(1, 2), 5).sqrt() == PHI
    with pytest.raises(ValueError):
        QNum(3, 1, 5).sqrt()
    assert QNum(Fraction(9, 4)).sqrt() == Fraction(3, 2)
    assert QNum(2, 0, 2).sqrt() == QNum(0, 1, 2)
    with pytest.raises(ValueError):
        QNum(2).sqrt()


@pytest.mark.parametrize("text", ["0", "-3/7", "1+√5", "-1/4-1/4√5", "2√3", "-√2"])
def test_parse_roundtrip(text):
    x = QNum.parse(text)
    assert QNum.parse(str(x)) == x


@given(qnums(5), qnums(5), qnums(5))
def test_field_axioms(x, y, z):
    assert x + y == y + x and x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x != 0:
        assert x * (1 / x) == 1


@given(qnums())
def test_conjugate_norm(x):
    assert x * x.conjugate() == x.norm()


@given(qnums(), qnums())
def test_order_is_total_and_consistent(x, y):
    if x.D != y.D:
        return
    assert (x < y) + (x == y) + (x > y) == 1
    assert (x < y) == ((y - x).sign() > 0)


def test_sign_agrees_with_float_on_random_inputs():
    rng = np.random.default_rng(20260101)
    checked = 0
    for _ in range(10_000):
        D = int(rng.choice([2, 3, 5, 6, 7]))
        a = Fraction(int(rng.integers(-10**6, 10**6)), int(rng.integers(1, 1000)))
        b = Fraction(int(rng.integers(-10**6, 10**6)), int(rng.integers(1, 1000)))
        x = QNum(a, b, D)
        f = float(a) + float(b) * math.sqrt(D)
        if abs(f) > 1e-6 * (abs(float(a)) + 1):
            assert x.sign() == (1 if f > 0 else -1)
            checked += 1
    assert checked > 9_000


def test_sign_of_near_cancellation():
    # 1393/985 approximates sqrt2 to within 4e-7; exact sign is still right
    assert QNum(-1393, 985, 2).sign() == 1
    assert QNum(1393, -985, 2).sign() == -1
    # 2^62 scale forces the object-dtype path in QArray.signs
    big = 2**62
    A = QArray(np.array([big, -big], dtype=object), np.array([-big + 1, big - 1], dtype=object), 1, 2)
    assert list(A.signs()) == [-1, 1]


@settings(max_examples=50)
@given(st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=3, max_size=3), st.lists(fractions, min_size=3, max_size=3))
def test_qarray_matmul_matches_entrywise(rows, vec):
    A = QArray.from_entries([[QNum(x, x / 2, 5) for x in row] for row in rows], 5)
    v = QArray.from_entries([[QNum(x, -x, 5)] for x in vec], 5)
    got = (A @ v).entries()
    want = [[sum((QNum(x, x / 2, 5) * QNum(y, -y, 5) for x, y in zip(row, vec)), QNum(0, 0, 5))] for row in rows]
    assert got == want


def test_signs_match_qnum_sign():
    rng = np.random.default_rng(7)
    P = rng.integers(-50, 50, size=200)
    Q = rng.integers(-50, 50, size=200)
    A = QArray(P, Q, 3, 5)
    assert list(A.signs()) == [QNum(Fraction(int(p), 3), Fraction(int(q), 3), 5).sign() for p, q in zip(P, Q)]


def test_entry_codes_separate_values():
    A = QArray.from_entries([[1, PHI, PHI], [2, 1, PHI - 1]], 5)
    c = A.entry_codes()
    assert c[0, 1] == c[0, 2] and c[0, 0] == c[1, 1]
    assert len({int(c[0, 0]), int(c[0, 1]), int(c[1, 0]), int(c[1, 2])}) == 4


def test_overflow_falls_back_to_exact_objects():
    A = QArray(np.full((2, 2), 2**40), None, 1, 0)
    B = A @ A
    assert B.entries()[0][0] == 2 * 2**80


def test_solve_inverse_rank():
    A = QArray.from_entries([[2, 1, 0], [1, PHI, 0], [0, 0, 3]], 5)
    Ai = inverse(A)
    assert Ai @ A == QArray.identity(3, 5)
    b = QArray.from_entries([[1], [0], [PHI]], 5)
    x = solve(A, b)
    assert A @ x == b
    assert rank(A) == 3
    S = QArray.from_entries([[1, 2], [2, 4]], 0)
    assert rank(S) == 1
    with pytest.raises(Exception):
        solve(S, QArray.from_entries([[1], [0]], 0))


def test_key_is_canonical():
    a = QArray.from_entries([[Fraction(1, 2), 1]], 0)
    b = QArray(np.array([[2, 4]]), None, 4, 0)
    assert a == b and a.key() == b.key()
