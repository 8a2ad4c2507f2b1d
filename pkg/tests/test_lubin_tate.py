import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from lcft.gf import GF, GF_q
from lcft.lubin_tate import (AdditiveSeries, build_tower, f_series, formal_mult, galois_act,
                             galois_series_identity, units_mod, verify_fiber)
from lcft.polyring import QElem
from lcft.series import TruncSeries

M = 12


def T_poly(field, coeffs, prec=M):
    return TruncSeries(field, {k: field.from_int(c) if isinstance(c, int) else c for k, c in coeffs.items()},
                       prec, "T")


@pytest.mark.parametrize("q", [2, 3, 4])
def test_formal_mult_examples(q):
    F = GF_q(q)
    assert formal_mult(T_poly(F, {0: 1}), q * q + 1, M=M) == AdditiveSeries(q, {0: T_poly(F, {0: 1})}, q * q + 1)
    assert formal_mult(T_poly(F, {1: 1}), q * q + 1, M=M) == f_series(q, F, M)


def test_formal_mult_one_plus_T():
    F = GF(2)
    got = formal_mult(T_poly(F, {0: 1, 1: 1}), 5, M=M)
    assert got == AdditiveSeries(2, {0: T_poly(F, {0: 1, 1: 1}), 1: T_poly(F, {0: 1})}, 5)
    assert str(got) == "(1 + T)*X + X^2 (mod X^5)"


def test_truncated_unit_gives_decaying_precision():
    F = GF(2)
    u = T_poly(F, {0: 1, 1: 1}, prec=4)
    mult = formal_mult(u, 2 ** 3 + 1)
    assert [mult.coeffs[e].prec for e in sorted(mult.coeffs)] == [4 - e for e in sorted(mult.coeffs)]


def random_unit(field, rng, n):
    return T_poly(field, {0: rng.choice(field.units()), **{k: rng.choice(field.elements()) for k in range(1, n)}},
                  prec=n)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(0, 10 ** 6))
def test_module_law(q, seed):
    F = GF_q(q)
    rng = random.Random(seed)
    u, v = random_unit(F, rng, 6), random_unit(F, rng, 6)
    x_prec = q ** 3 + 1
    assert formal_mult(u, x_prec).compose(formal_mult(v, x_prec)) == formal_mult(u * v, x_prec)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_formal_mult_is_additive(q, seed):
    F = GF_q(q)
    rng = random.Random(seed)
    tower = build_tower(2, F, M)
    L = tower.levels[1]
    mult = formal_mult(random_unit(F, rng, 3), q * q + 1, M=M)

    def rand_elem():
        a = tower.lift(T_poly(F, {k: rng.choice(F.elements()) for k in range(3)}), 2)
        return a + tower.lift(T_poly(F, {0: rng.choice(F.elements())}), 2) * tower.alpha(2) + \
            tower.alpha(1, 2) * rng.randint(0, 1)
    x, y = rand_elem(), rand_elem()
    assert mult.evaluate(x + y) == mult.evaluate(x) + mult.evaluate(y)


def test_build_tower_examples():
    F2, F3 = GF(2), GF(3)
    t = build_tower(1, F2, M)
    assert t.levels[0].degree == 1
    assert t.alpha(1) == t.levels[0].embed(t.T())  # alpha_1 = -T = T
    t = build_tower(2, F2, M)
    a1, a2 = t.alpha(1, 2), t.alpha(2)
    assert t.levels[1].degree == 2
    assert a2 ** 2 + a2 * t.T() + t.lift(t.T(), 2) == t.levels[1].zero
    assert a1 == t.lift(t.T(), 2)
    t = build_tower(1, F3, M)
    assert t.levels[0].degree == 2
    assert t.alpha(1) ** 2 == t.levels[0].embed(-t.T())


def test_tower_size_limit():
    with pytest.raises(ValueError):
        build_tower(4, GF_q(4), M)


@pytest.mark.parametrize("q,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2)])
def test_verify_fiber(q, m):
    tower = build_tower(m, GF_q(q), M)
    assert verify_fiber(tower, m)


def test_fiber_relations_q2_m2():
    tower = build_tower(2, GF(2), M)
    a1, a2 = tower.alpha(1, 2), tower.alpha(2)
    T = tower.lift(tower.T(), 2)
    assert a1 ** 2 == -T * a1
    assert a2 ** 2 == a1 - T * a2


def test_perturbed_fiber_fails():
    tower = build_tower(2, GF(2), M)
    alphas = [tower.alpha(1, 2), tower.alpha(2) + 1]
    assert not verify_fiber(tower, 2, alphas)


def test_galois_identity_unit():
    tower = build_tower(2, GF(2), M)
    x = tower.alpha(2) * tower.alpha(2) + tower.lift(tower.T(), 2)
    assert galois_act(T_poly(GF(2), {0: 1}, 2), x, tower) == x


def test_galois_example_q2_m2():
    F = GF(2)
    tower = build_tower(2, F, M)
    s = galois_act(T_poly(F, {0: 1, 1: 1}, 2), tower.alpha(2), tower)
    T = tower.lift(tower.T(), 2)
    assert s == tower.alpha(2) + T
    assert s ** 2 + T * s + T == tower.levels[1].zero


@pytest.mark.parametrize("q,m", [(2, 2), (2, 3), (3, 2)])
def test_galois_action_is_a_homomorphism(q, m):
    F = GF_q(q)
    tower = build_tower(m, F, M)
    units = units_mod(F, m)
    rng = random.Random(q * 10 + m)
    pairs = list(product(units, repeat=2)) if len(units) <= 8 else rng.sample(list(product(units, repeat=2)), 20)
    a = tower.alpha(m)
    for u, v in pairs:
        uv = (u * v).truncate(m)
        assert galois_act(u, galois_act(v, a, tower), tower) == galois_act(uv, a, tower)


@pytest.mark.parametrize("q,m", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_galois_series_identity_all_units(q, m):
    F = GF_q(q)
    tower = build_tower(m, F, M)
    for u in units_mod(F, m):
        assert galois_series_identity(u, tower, m)


def _from_base(x):
    if not isinstance(x, QElem):
        return True
    return all(not c for c in x.coords[1:]) and _from_base(x.coords[0])


@pytest.mark.parametrize("q,m", [(2, 2), (3, 1)])
def test_fixed_field_is_K(q, m):
    F = GF_q(q)
    tower = build_tower(m, F, M)
    units = units_mod(F, m)
    rng = random.Random(5)
    L = tower.levels[m - 1]
    K = tower.base
    for _ in range(40):
        coords = [K.monomial(rng.choice(F.elements()), rng.randint(0, 3)) if k == 0 or rng.random() < 0.5
                  else K.zero for k in range(L.degree)]
        x = L.zero
        for k, c in enumerate(coords):
            x = x + tower.lift(c, m) * tower.alpha(m) ** k
        fixed = all(galois_act(u, x, tower) == x for u in units)
        assert fixed == _from_base(x)
