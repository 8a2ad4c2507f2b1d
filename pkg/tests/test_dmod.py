import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lcft.dmod import (NotClosedError, OneFormQ, decompose_one_form, dlog_S, dlog_T, dlog_unit,
                       exterior_derivative, in_image_test, is_closed, log_one_unit, phi1_pullback,
                       random_closed_form, recover_phi1_coeffs)
from lcft.literal import parse_bivar
from lcft.series import QQ, BivarLaurent

W = (-8, 8, -8, 8)


def B(text, window=W):
    return parse_bivar(text, QQ, window)


def test_exterior_derivative_example():
    w = exterior_derivative(B("S^-1*T^-1"))
    assert w == OneFormQ(B("-S^-2*T^-1"), B("-S^-1*T^-2"))
    assert is_closed(w)


def test_closedness_examples():
    assert not is_closed(OneFormQ(B("T"), B("0")))
    assert is_closed(dlog_S())
    assert is_closed(dlog_T())


def test_decompose_examples():
    r = decompose_one_form(dlog_S(W))
    assert r.A == 0 and r.A_int == 1 and r.B == 0 and not r.h
    r = decompose_one_form(exterior_derivative(B("S^-1*T^-1")))
    assert r.A == r.B == 0 and r.h == B("S^-1*T^-1")
    # dlog(1 - S) = -(sum_{m>=1} S^m) dlog S
    P = BivarLaurent(QQ, {(m, 0): Fraction(-1) for m in range(1, 9)}, W)
    w = OneFormQ.from_dlog_basis(P, BivarLaurent(QQ, {}, W))
    r = decompose_one_form(w)
    assert r.A == r.B == 0 and not r.h
    assert r.absorbed == BivarLaurent(QQ, {(m, 0): Fraction(-1, m) for m in range(1, 9)}, W)
    assert r.absorbed == log_one_unit([(Fraction(-1), 1, 0)], W)


def test_decompose_rejects_open_forms():
    with pytest.raises(NotClosedError):
        decompose_one_form(OneFormQ(B("T"), B("0")))


def test_pullback_examples():
    assert phi1_pullback({(1, 1): 1}) == exterior_derivative(parse_bivar("S^-1*T^-1", QQ))
    assert phi1_pullback({}) == OneFormQ(BivarLaurent(QQ, {}), BivarLaurent(QQ, {}))
    assert phi1_pullback({(1, 2): 3}) == exterior_derivative(parse_bivar("3*S^-1*T^-2", QQ))
    with pytest.raises(ValueError):
        phi1_pullback({(0, 1): 1})


def test_image_examples():
    w = phi1_pullback({(1, 1): 1}, W)
    assert in_image_test(w)
    assert in_image_test(dlog_S(W) + w)
    assert not in_image_test(dlog_S(W) * Fraction(1, 2))
    assert not in_image_test(exterior_derivative(B("S^-1")))


@pytest.mark.parametrize("seed", range(100))
def test_reassembly(seed):
    w = random_closed_form(random.Random(seed))
    r = decompose_one_form(w)
    assert r.reassemble() == w
    assert r.support_ok()
    assert 0 <= r.A < 1 and 0 <= r.B < 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-5, 5), st.integers(-5, 5))
def test_decomposition_is_invariant_under_dlog(seed, a, b):
    rng = random.Random(seed)
    w = random_closed_form(rng, window=(8, 8))
    win = (-8, 8, -8, 8)
    factors = []
    for _ in range(3):
        i, j = rng.randint(-3, 3), rng.randint(1, 3)
        factors.append((Fraction(rng.randint(-5, 5), rng.randint(1, 4)), i, j))
    factors.append((Fraction(rng.randint(1, 5)), rng.randint(1, 3), 0))
    r1 = decompose_one_form(w)
    r2 = decompose_one_form(w + dlog_unit(a, b, factors, win))
    assert (r1.A, r1.B) == (r2.A, r2.B)
    assert r1.h == r2.h


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(1, 6), st.integers(1, 6)),
                       st.fractions(max_denominator=9).filter(bool), max_size=8))
def test_pullback_lands_in_image_and_is_injective(coeffs):
    w = phi1_pullback(coeffs, W)
    assert in_image_test(w)
    assert recover_phi1_coeffs(w) == coeffs


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(-6, 6), st.integers(-6, 6)),
                       st.fractions(max_denominator=9), max_size=10))
def test_d_squared_is_zero(coeffs):
    assert is_closed(exterior_derivative(BivarLaurent(QQ, coeffs)))
