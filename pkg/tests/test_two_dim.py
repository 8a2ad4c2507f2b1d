import random

import pytest
from hypothesis import given, settings, strategies as st

from lcft.gf import GF, GF_q
from lcft.literal import parse_bivar
from lcft.series import BivarLaurent
from lcft.two_dim import (KernelCoords, TwoForm, as_system_galois, fiber_check_2d, inverse_cartier_minus_one,
                          kernel_inflate, kernel_point_count, kernel_test_and_project, normal_form_support_ok,
                          primitive_indices, symbol_dlog, wp_q, wp_q_normal_form)


def test_symbol_coefficients():
    F = GF(2)
    form = symbol_dlog((3, 3), F)
    assert form[(1, 1)] == BivarLaurent.monomial(F, F.one, -1, -1)
    assert form[(2, 3)] == BivarLaurent.monomial(F, F.one, -2, -3)
    assert not symbol_dlog((0, 0), F)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_symbol_matches_closed_formula(q):
    F = GF_q(q)
    form = symbol_dlog((4, 3), F)
    for (i, j), c in form.coeffs.items():
        assert c == BivarLaurent.monomial(F, F.one, -i, -j)


def test_inverse_cartier_examples():
    F = GF(2, 2)
    a = F.gen
    assert not inverse_cartier_minus_one(TwoForm(2, (4, 4)))
    out = inverse_cartier_minus_one(TwoForm(2, (4, 4), {(1, 1): a}))
    assert out.coeffs == {(2, 2): a ** 2}
    assert not inverse_cartier_minus_one(TwoForm(2, (2, 2), {(1, 1): a, (2, 2): a ** 2}))


def test_inverse_cartier_window_too_small():
    F = GF(3)
    with pytest.raises(ValueError, match="too small"):
        inverse_cartier_minus_one(TwoForm(3, (2, 2), {(1, 1): F.one}))


def test_kernel_examples():
    F = GF(2, 2)
    a = F.gen
    omega = TwoForm(2, (4, 4), {(1, 1): a, (2, 2): a ** 2, (4, 4): a ** 4})
    member, proj = kernel_test_and_project(omega)
    assert member and proj == KernelCoords(2, (4, 4), {(1, 1): a})
    member, _ = kernel_test_and_project(TwoForm(2, (4, 4), {(2, 2): F.one}))
    assert not member


def random_kernel_coords(field, window, rng):
    p = field.p
    return KernelCoords(p, window, {k: rng.choice(field.elements()) for k in primitive_indices(window, p)})


@pytest.mark.parametrize("field", [GF(2), GF(3), GF(2, 2), GF(3, 2)], ids=lambda F: f"F{F.q}")
def test_kernel_round_trip_and_annihilation(field):
    rng = random.Random(field.q)
    for _ in range(50):
        window = (rng.randint(field.p, 9), rng.randint(field.p, 9))
        coords = random_kernel_coords(field, window, rng)
        omega = kernel_inflate(coords)
        assert not inverse_cartier_minus_one(omega)
        member, proj = kernel_test_and_project(omega)
        assert member and proj == coords


def test_kernel_point_count_brute_force():
    # on a small window, count every assignment of the full grid that C^-1 - 1 kills
    from itertools import product
    F = GF(2)
    window = (2, 2)
    idx = [(i, j) for i in range(1, 3) for j in range(1, 3)]
    count = 0
    for vals in product(F.elements(), repeat=len(idx)):
        omega = TwoForm(2, window, dict(zip(idx, vals)))
        if not inverse_cartier_minus_one(omega):
            count += 1
    assert kernel_point_count(window, F) == count


# --- normal forms ------------------------------------------------------------------

def bivar(text, field, I=12, J=12):
    return parse_bivar(text, field, (-I, I, -J, J))


def test_normal_form_examples():
    F2, F4 = GF(2), GF(2, 2)
    for c in F4.elements():
        f = BivarLaurent(F4, {(0, 0): c} if c else {}, (-4, 4, -4, 4))
        assert wp_q_normal_form(f, 4).form == f
    r = wp_q_normal_form(bivar("S^-2*T^-2", F2), 2)
    assert r.form == bivar("S^-1*T^-1", F2)
    r = wp_q_normal_form(bivar("T^3", F2), 2)
    assert not r.form
    assert r.witness == parse_bivar("T^3 + T^6 + T^12", F2)
    assert r.verified


def test_normal_form_window_too_small():
    F = GF(2)
    f = BivarLaurent(F, {(-4, -4): F.one}, (-4, 4, -4, -4))
    with pytest.raises(ValueError, match="too small"):
        wp_q_normal_form(f, 2)


def random_bivar(field, rng, I=8, J=8, terms=8):
    coeffs = {}
    for _ in range(terms):
        coeffs[(rng.randint(-I, I), rng.randint(-J, J))] = rng.choice(field.elements())
    return BivarLaurent(field, coeffs, (-I, I, -J, J))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2), (2, 4), (3, 3), (3, 9), (5, 5)]), st.integers(0, 10 ** 6))
def test_normal_form_properties(pq, seed):
    p, q = pq
    field = GF_q(q)
    f = random_bivar(field, random.Random(seed))
    r = wp_q_normal_form(f, q)
    # witness: x^q - x = f - nf on the window
    assert r.verified
    assert wp_q(r.witness, q, f.window) == f - r.form
    assert normal_form_support_ok(r.form, q)
    assert wp_q_normal_form(r.form, q).form == r.form


def test_support_rule_examples():
    F = GF(2)
    assert normal_form_support_ok(bivar("S^-3 + S^2*T^-1 + S^-2*T^-3 + 1", F), 2)
    assert not normal_form_support_ok(bivar("S^-2", F), 2)
    assert not normal_form_support_ok(bivar("S^2*T^-2", F), 2)
    assert not normal_form_support_ok(bivar("T", F), 2)


# --- the Artin-Schreier system ----------------------------------------------------

def test_galois_examples():
    for q in (2, 3, 4):
        g = as_system_galois((1, 1), GF_q(q))
        assert [(i, j) for i, j, _ in g.system.generators] == [(1, 1)]
        assert g.group_order == q
    g = as_system_galois((2, 2), GF(2))
    assert [(i, j) for i, j, _ in g.system.generators] == [(1, 1), (1, 2), (2, 1)]
    assert g.rank == 3 and g.group_order == 8
    g = as_system_galois((1, 1), GF(2, 2))
    assert g.rank == 2 and g.group_order == 4


@pytest.mark.parametrize("q", [2, 4])
@pytest.mark.parametrize("I", [1, 2, 3, 4])
@pytest.mark.parametrize("J", [1, 2, 3, 4])
def test_group_order_equals_kernel_points(q, I, J):
    g = as_system_galois((I, J), GF_q(q))
    assert g.independent
    assert g.rank == GF_q(q).n * g.generator_count
    assert g.group_order == g.kernel_points


def test_fiber_examples():
    F = GF(2)
    assert fiber_check_2d((1, 1), F)
    assert fiber_check_2d((2, 2), F)
    assert fiber_check_2d((3, 2), GF(3))
    bump = {(1, 1): BivarLaurent.monomial(F, F.one, 0, 0)}
    assert not fiber_check_2d((2, 2), F, perturb=bump)
