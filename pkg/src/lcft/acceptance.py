"""The ten end-to-end acceptance checks, shared by ``lcft verify`` and the tests.

Each check returns a :class:`CheckResult`; randomized checks take a seed so
that a run is reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from lcft import aj, artin_hasse, dmod, lubin_tate, reciprocity, two_dim
from lcft.gf import GF
from lcft.series import QQ, BivarLaurent, SeriesRing, TruncSeries


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        budget = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail} [{self.seconds:.2f}s{budget}]"


def _timed(number, name, limit, fn, *args):
    t0 = time.perf_counter()
    ok, detail = fn(*args)
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok = False
        detail += f"; too slow ({dt:.2f}s)"
    return CheckResult(number, name, ok, detail, dt, limit)


def random_one_unit(rng: random.Random, field, N: int, var: str = "t") -> TruncSeries:
    els = field.elements()
    return TruncSeries(field, {0: field.one, **{e: rng.choice(els) for e in range(1, N)}}, N, var)


# 1 -------------------------------------------------------------------------

def check_ah_dlog_identity(N: int = 64):
    bad = []
    for p in (2, 3, 5):
        F = GF(p)
        lhs = artin_hasse.hat_dlog(artin_hasse.artin_hasse_F(p, N))
        rhs = {}
        pe = 1
        while pe < N:
            rhs[pe] = -F.one
            pe *= p
        if not (lhs.truncate(N) == TruncSeries(F, rhs, N, "t")) or lhs.prec < N:
            bad.append(p)
    return not bad, f"p in (2,3,5), N={N}" + (f"; mismatch for p={bad}" if bad else "")


# 2 -------------------------------------------------------------------------

def check_ah_round_trip(seed: int = 0, count: int = 100, N: int = 32):
    rng = random.Random(seed)
    fails = 0
    for field in (GF(2), GF(2, 2), GF(3, 2)):
        for _ in range(count):
            u = random_one_unit(rng, field, N)
            coords = artin_hasse.ah_decompose(u, N)
            if not (artin_hasse.ah_compose(coords, N, field) == u):
                fails += 1
    return fails == 0, f"{3 * count} units over F_2, F_4, F_9 at N={N}, {fails} failures"


# 3 -------------------------------------------------------------------------

def canonical_coordinates(p: int, N: int = 32) -> artin_hasse.ModPCoords:
    K = SeriesRing(GF(p), "T", N + 8)
    u = TruncSeries(K, {0: K.one, 1: -K.monomial(GF(p).one, -1)}, N, aj.HAT)
    return artin_hasse.alpha_dlog(u)


def check_dlog_point(N: int = 32):
    bad = []
    for p in (2, 3):
        F = GF(p)
        coords = canonical_coordinates(p, N)
        for n in range(1, N):
            if n % p == 0:
                continue
            want = TruncSeries(F, {-n: F.int_inverse(n)}, coords[n].prec, "T")
            if not (coords[n] == want) or coords[n].prec <= -n:
                bad.append((p, n))
    return not bad, f"p in (2,3), all p∤n < {N}" + (f"; mismatches {bad[:5]}" if bad else "")


# 4 -------------------------------------------------------------------------

def check_eta_factor(limit_n: int = 20):
    bad = []
    cases = 0
    for field in (GF(2), GF(3), GF(2, 2)):
        coords = canonical_coordinates(field.p, limit_n)
        for n in range(1, limit_n):
            if n % field.p == 0:
                continue
            # the canonical coordinate lives over F_p; move it into F_q
            base = {e: field.from_int(c.v) for e, c in coords[n].coeffs.items()}
            for a in field.units():
                cases += 1
                d = reciprocity.as_pullback(a, n, field)
                closed = TruncSeries(field, {-n: a * field.int_inverse(n)}, d.rhs.prec, "T")
                via_coord = TruncSeries(field, base, coords[n].prec, "T") * a
                if not (d.rhs == closed and d.rhs == via_coord):
                    bad.append((field.q, n, str(a)))
    return not bad, f"{cases} (q, n, a) cases" + (f"; mismatches {bad[:5]}" if bad else "")


# 5 -------------------------------------------------------------------------

def check_lubin_tate(M: int = 16):
    bad = []
    for q, m in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        tower = lubin_tate.build_tower(m, GF(q), M)
        if not lubin_tate.verify_fiber(tower, m):
            bad.append(("fiber", q, m))
    units = 0
    for q, m in ((2, 2), (2, 3)):
        tower = lubin_tate.build_tower(m, GF(q), M)
        for u in lubin_tate.units_mod(GF(q), m):
            units += 1
            if not lubin_tate.galois_series_identity(u, tower, m):
                bad.append(("galois", q, m, str(u)))
    return not bad, f"5 fiber identities, {units} Galois identities" + (f"; failures {bad}" if bad else "")


# 6 -------------------------------------------------------------------------

def random_aj_member(rng: random.Random, field, N: int = 8, M: int = 16) -> tuple[TruncSeries, TruncSeries]:
    """(u, u * (1 - T That^-1)) with u in O_K[[That]], u = 1 mod T."""
    K = SeriesRing(field, "T", M)
    els = field.elements()

    def small(lo):
        return TruncSeries(field, {e: rng.choice(els) for e in range(lo, 6)}, M, "T")
    u = {0: K.one + small(1)}
    for k in range(1, N + 1):
        u[k] = small(1)
    u = TruncSeries(K, u, N + 1, aj.HAT)
    return u, u * aj.canonical_member(field, N + 1, M)


def check_aj(seed: int = 0, count: int = 20):
    rng = random.Random(seed)
    problems = []
    for field in (GF(2), GF(3)):
        c = aj.canonical_member(field, 8, 24)
        if not aj.is_aj(c):
            problems.append("canonical member rejected")
        members = []
        for _ in range(count):
            u, f = random_aj_member(rng, field, 8, 24)
            if not aj.is_aj(f):
                problems.append("random member rejected")
                continue
            if f.valuation() != -1:
                problems.append("valuation != -1")
            members.append(f)
        for k in range(len(members) - 2):
            f, g, h = members[k], members[k + 1], members[k + 2]
            r_fg, r_gh, r_fh = aj.aj_ratio(f, g), aj.aj_ratio(g, h), aj.aj_ratio(f, h)
            if not (f * r_fg == g):
                problems.append("f * ratio != g")
            if not (r_fg * r_gh == r_fh):
                problems.append("cocycle fails")
        if not (aj.aj_ratio(c, c) == 1):
            problems.append("ratio(f, f) != 1")
    return not problems, f"{2 * count} random members over F_2, F_3" + (f"; {problems[:3]}" if problems else "")


# 7 -------------------------------------------------------------------------

def check_kernel(seed: int = 0, count: int = 50, window=(8, 8)):
    rng = random.Random(seed)
    bad = 0
    for p in (2, 3):
        field = GF(p, 2)
        els = field.elements()
        for _ in range(count):
            coords = two_dim.KernelCoords(p, window, {k: rng.choice(els) for k in two_dim.primitive_indices(window, p)})
            omega = two_dim.kernel_inflate(coords)
            member, proj = two_dim.kernel_test_and_project(omega)
            if not (member and proj == coords and not two_dim.inverse_cartier_minus_one(omega)):
                bad += 1
    return bad == 0, f"{2 * count} kernel elements in window {window}, {bad} failures"


# 8 -------------------------------------------------------------------------

def random_bivariate(rng: random.Random, field, window=(6, 6), terms: int = 10) -> BivarLaurent:
    I, J = window
    els = field.elements()
    coeffs = {}
    for _ in range(terms):
        coeffs[(rng.randint(-I, I), rng.randint(-J, J))] = rng.choice(els)
    return BivarLaurent(field, coeffs, (-I, I, -J, J))


def check_normal_form(seed: int = 0, count: int = 100, window=(6, 6)):
    rng = random.Random(seed)
    bad = 0
    for q, field in ((2, GF(2, 2)), (4, GF(2, 2))):
        for _ in range(count):
            f = random_bivariate(rng, field, window)
            r = two_dim.wp_q_normal_form(f, q)
            again = two_dim.wp_q_normal_form(r.form, q)
            ok = (r.verified and again.form == r.form and not again.discarded
                  and two_dim.normal_form_support_ok(r.form, q))
            bad += not ok
    return bad == 0, f"{2 * count} inputs, q in (2,4), window {window}, {bad} failures"


# 9 -------------------------------------------------------------------------

def check_two_dim_galois(max_window=(4, 4)):
    bad = []
    cases = 0
    for field in (GF(2), GF(2, 2)):
        for I in range(1, max_window[0] + 1):
            for J in range(1, max_window[1] + 1):
                cases += 1
                g = two_dim.as_system_galois((I, J), field)
                if not (g.independent and g.rank == field.n * g.generator_count
                        and g.group_order == g.kernel_points and two_dim.fiber_check_2d((I, J), field)):
                    bad.append((field.q, I, J))
    return not bad, f"{cases} windows up to {max_window}, q in (2,4)" + (f"; failures {bad}" if bad else "")


# 10 ------------------------------------------------------------------------

def check_dmod(seed: int = 0, count: int = 100, window=(6, 6)):
    rng = random.Random(seed)
    I, J = window
    lw = (-I, I, -J, J)
    problems = []
    for _ in range(count):
        om = dmod.random_closed_form(rng, window)
        r = dmod.decompose_one_form(om)
        if not (r.reassemble() == om and r.support_ok()):
            problems.append("reassembly")
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        factors = [(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(-3, 3), rng.randint(1, 3))
                   for _ in range(2)] + [(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(1, 3), 0)]
        r2 = dmod.decompose_one_form(om + dmod.dlog_unit(a, b, factors, lw))
        if not (r2.A == r.A and r2.B == r.B and r2.h == r.h):
            problems.append("invariance")
        c = {(rng.randint(1, I), rng.randint(1, J)): Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)}
        pb = dmod.phi1_pullback(c, lw)
        if not dmod.in_image_test(pb):
            problems.append("pullback not in image")
        if dmod.recover_phi1_coeffs(pb) != {k: v for k, v in c.items() if v}:
            problems.append("pullback not injective")
        expected = r.A == 0 and r.B == 0 and all(i <= -1 and j <= -1 for (i, j) in r.h.coeffs)
        if dmod.in_image_test(om) != expected:
            problems.append("image test inconsistent")
    if dmod.in_image_test(dmod.dlog_S(lw) * Fraction(1, 2)):
        problems.append("(1/2) dlog S accepted")
    return not problems, f"{count} random closed forms, window {window}" + (f"; {problems[:3]}" if problems else "")


CHECKS = [
    (1, "Artin-Hasse dlog identity", 1.0, check_ah_dlog_identity, False),
    (2, "Artin-Hasse round trip", 5.0, check_ah_round_trip, True),
    (3, "alpha o dlog of 1 - T^-1 That", None, check_dlog_point, False),
    (4, "Artin-Schreier pullback factor 1/n", None, check_eta_factor, False),
    (5, "Lubin-Tate fiber and Galois identities", 10.0, check_lubin_tate, False),
    (6, "AJ membership, valuation, ratios", None, check_aj, True),
    (7, "Ker(C^-1 - 1) round trip", None, check_kernel, True),
    (8, "wp_q normal forms with witnesses", None, check_normal_form, True),
    (9, "Artin-Schreier system rank and order", None, check_two_dim_galois, False),
    (10, "connection form decomposition", 10.0, check_dmod, True),
]


def run_check(number: int, seed: int = 0) -> CheckResult:
    for num, name, limit, fn, seeded in CHECKS:
        if num == number:
            return _timed(num, name, limit, fn, *((seed,) if seeded else ()))
    raise KeyError(number)


def run_all(seed: int = 0) -> list[CheckResult]:
    return [run_check(num, seed) for num, *_ in CHECKS]
