from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from lcft.gf import (GF, GF_q, TwistedElem, default_modulus, frobenius, frobenius_iter, is_irreducible,
                     parse_field_spec, semilinear_rank, solve_wp_q, twisted_mul)

SMALL = [GF(2), GF(3), GF(5), GF(2, 2), GF(2, 3), GF(3, 2), GF(2, 4)]


def test_builtin_moduli_are_smallest_irreducibles():
    assert default_modulus(2, 2) == (1, 1, 1)
    assert default_modulus(2, 3) == (1, 1, 0, 1)
    assert default_modulus(2, 4) == (1, 1, 0, 0, 1)
    assert is_irreducible(default_modulus(3, 2), 3)


def test_reducible_modulus_is_rejected():
    with pytest.raises(ValueError):
        GF(2, 2, (1, 0, 1))  # (w + 1)^2
    with pytest.raises(ValueError):
        GF(4)


def test_field_spec_parsing():
    F = parse_field_spec("2^2:1,1,1")
    assert F is GF(2, 2)
    assert parse_field_spec("3").q == 3
    assert parse_field_spec("2^3:1,0,1,1").modulus == (1, 1, 0, 1)
    with pytest.raises(ValueError):
        parse_field_spec("2^2:1,1")
    assert GF_q(9) is GF(3, 2)
    with pytest.raises(ValueError):
        GF_q(6)


def test_frobenius_fixed_points():
    F = GF(2, 2)
    assert frobenius(F.zero) == F.zero
    assert frobenius(F.one) == F.one


def test_frobenius_on_w_in_f4():
    # w^2 = w + 1 modulo w^2 + w + 1
    F = GF(2, 2)
    w = F.gen
    assert frobenius(w) == F([1, 1])
    assert str(frobenius(w)) == "w + 1"


@pytest.mark.parametrize("F", SMALL, ids=lambda F: f"F{F.q}")
def test_frobenius_order_n(F):
    assert all(frobenius_iter(x, F.n) == x for x in F.elements())


@pytest.mark.parametrize("F", SMALL, ids=lambda F: f"F{F.q}")
def test_frobenius_is_ring_hom(F):
    for x, y in product(F.elements(), repeat=2):
        assert frobenius(x + y) == frobenius(x) + frobenius(y)
        assert frobenius(x * y) == frobenius(x) * frobenius(y)


@pytest.mark.parametrize("F", SMALL, ids=lambda F: f"F{F.q}")
def test_field_axioms_inverse(F):
    for x in F.units():
        assert x * x.inverse() == F.one
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()


def test_solve_wp_q_examples():
    F4 = GF(2, 2)
    assert solve_wp_q(F4.zero, 4, F4) == set(F4.elements())
    # x^2 + x = 1 has the roots w, w + 1 in F_4
    assert solve_wp_q(F4.one, 2, F4) == {F4.gen, F4.gen + 1}
    # x^2 + x takes values only in {0, 1} on F_4, so a = w has no root
    assert solve_wp_q(F4.gen, 2, F4) == set()
    F2 = GF(2)
    assert solve_wp_q(F2.one, 2, F2) == set()


@pytest.mark.parametrize("F,q", [(GF(2, 2), 2), (GF(2, 2), 4), (GF(2, 4), 2), (GF(2, 4), 4), (GF(3, 2), 3)])
def test_solve_wp_q_returns_cosets(F, q):
    small = [x for x in F.elements() if x ** q == x]
    assert len(small) == q
    for a in F.elements():
        roots = solve_wp_q(a, q, F)
        assert len(roots) in (0, q)
        if roots:
            x0 = next(iter(roots))
            assert roots == {x0 + c for c in small}


def test_twisted_mul_examples():
    F = GF(2, 2)
    w = F.gen
    one = TwistedElem.identity(F)
    B = TwistedElem(F, [w, F.one])
    assert twisted_mul(one, B) == B
    s = TwistedElem.sigma(F)
    assert twisted_mul(s, TwistedElem(F, {0: w})) == TwistedElem(F, {1: w + 1})
    assert twisted_mul(s, s) == one


def _twisted_samples(F):
    vals = F.elements()
    return [TwistedElem(F, [a, b]) for a, b in product(vals, repeat=2)][::3]


def test_twisted_mul_associative_and_distributive():
    F = GF(2, 2)
    S = _twisted_samples(F)
    for A, B, C in product(S, repeat=3):
        assert (A * B) * C == A * (B * C)
        assert A * (B + C) == A * B + A * C


def test_twisted_action_is_compatible():
    F = GF(2, 2)
    S = _twisted_samples(F)
    for A, B in product(S, repeat=2):
        for x in F.elements():
            assert (A * B).act(x) == A.act(B.act(x))


def test_semilinear_rank_examples():
    F2, F4 = GF(2), GF(2, 2)
    assert semilinear_rank([{0: F2.one}], F2) == 1
    assert semilinear_rank([], F4) == 0

    # sigma moves index k to 2k, as p-power Frobenius does on S^-k classes
    def sigma(vec):
        return {2 * k: c ** 2 for k, c in vec.items()}
    assert semilinear_rank([{1: F4.one}, {3: F4.gen}], F4, sigma) == 4


def test_semilinear_rank_detects_dependence():
    F4 = GF(2, 2)
    # with the coordinatewise default sigma, the orbit of a class stays in its own line
    assert semilinear_rank([{0: F4.gen}], F4) == 1
    assert semilinear_rank([{0: F4.one}, {0: F4.gen}], F4) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_power_laws(F, data):
    x = F.elements()[data.draw(st.integers(0, F.q - 1))]
    a, b = data.draw(st.integers(0, 40)), data.draw(st.integers(0, 40))
    assert x ** a * x ** b == x ** (a + b)
    assert x ** F.q == x
