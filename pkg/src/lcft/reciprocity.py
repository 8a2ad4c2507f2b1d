"""Explicit pullbacks of the Kummer and Artin-Schreier isogenies along the
rational point given by the canonical AJ element, and the independence of
the resulting character data from the chosen AJ element.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from lcft import aj
from lcft.artin_hasse import alpha_dlog, hat_dlog
from lcft.gf import FieldElem, FiniteField
from lcft.polyring import QElem, QuotientRing
from lcft.series import SeriesRing, TruncSeries


class TrivialClassError(ValueError):
    """a = 0: the Artin-Schreier extension splits."""


@dataclass
class KummerDatum:
    n: int
    base_point: TruncSeries
    equation: list  # coefficients of y^n - base_point, low to high
    ring: QuotientRing
    roots_of_unity: list
    fiber: list
    character_table: dict
    eisenstein: bool
    simply_transitive: bool
    cyclic_of_order_n: bool


@dataclass
class ASDatum:
    a: FieldElem
    n: int
    p: int
    rhs: TruncSeries
    coordinate: TruncSeries  # alpha_dlog(1 - T^-1 That) at index n
    checks: dict = dc_field(default_factory=dict)

    def equation(self) -> str:
        from lcft.literal import format_series
        return f"x^{self.p} - x = {format_series(self.rhs)}"


def roots_of_unity(n: int, field: FiniteField) -> list[FieldElem]:
    """mu_n in F_q, listed as g^0, g^1, ..., g^(n-1) for a fixed generator g."""
    if (field.q - 1) % n:
        raise ValueError(f"mu_{n} is not contained in F_{field.q}")
    g = field.gen_unit() if hasattr(field, "gen_unit") else _primitive_root(field)
    z = g ** ((field.q - 1) // n)
    return [z ** k for k in range(n)]


def _primitive_root(field: FiniteField) -> FieldElem:
    for x in field.units():
        k, y = 1, x
        while y != field.one:
            y = y * x
            k += 1
        if k == field.q - 1:
            return x
    raise ArithmeticError("no primitive root found")


def is_eisenstein(coeffs: list[TruncSeries]) -> bool:
    """Monic, non-leading coefficients in (T), constant term of valuation exactly 1."""
    *rest, lead = coeffs
    if lead != 1:
        return False
    for c in rest:
        if c and c.valuation() < 1:
            return False
    return bool(rest[0]) and rest[0].valuation() == 1


def kummer_pullback(n: int, field: FiniteField, M: int = 16) -> KummerDatum:
    """The cover y^n = -T with its mu_n-torsor structure."""
    p = field.p
    if n < 1 or n % p == 0:
        raise ValueError(f"n = {n} must be prime to p = {p}")
    mu = roots_of_unity(n, field)
    K = SeriesRing(field, "T", M)
    base = -K.gen
    eq = [-base] + [K.zero] * (n - 1) + [K.one]
    L = QuotientRing(K, eq, name="y")
    y = L.gen
    fiber = [y * z for z in mu]
    on_fiber = all(pt ** n == L.embed(base) for pt in fiber)
    distinct = all(not (fiber[i] == fiber[j]) for i in range(n) for j in range(i))
    # for every ordered pair of fiber points, exactly one zeta moves one to the other
    transitive = on_fiber and distinct and all(
        sum(1 for z in mu if fiber[i] * z == fiber[j]) == 1 for i in range(n) for j in range(n))
    table = {z: k for k, z in enumerate(mu)}
    cyclic = len(table) == n and all(table[mu[i] * mu[j]] == (i + j) % n for i in range(n) for j in range(n))
    return KummerDatum(n, base, eq, L, mu, fiber, table, is_eisenstein(eq), transitive, cyclic)


def _canonical_coordinate(field: FiniteField, n: int) -> TruncSeries:
    """alpha_dlog(1 - T^-1 That) at index n, with coefficients in K."""
    M = n + 8
    K = SeriesRing(field, "T", M)
    u = TruncSeries(K, {0: K.one, 1: -K.monomial(field.one, -1)}, n + 1, aj.HAT)
    return alpha_dlog(u)[n]


def as_pullback(a: FieldElem, n: int, field: FiniteField) -> ASDatum:
    """x^p - x = a * (coordinate n of the canonical point) = a/(n T^n)."""
    p = field.p
    if not a:
        raise TrivialClassError("trivial class: a = 0 gives the split extension")
    if n < 1 or n % p == 0:
        raise ValueError(f"n = {n} must be prime to p = {p}")
    a = field(a)
    coord = _canonical_coordinate(field, n)
    rhs = coord * a
    closed = TruncSeries(field, {-n: a * field.int_inverse(n)}, rhs.prec, "T")
    checks = {"rhs = a/(n T^n)": rhs == closed, "valuation": rhs.valuation() == -n}
    return ASDatum(a, n, p, rhs, coord, checks)


def unit_coords(u: TruncSeries, N: int | None = None) -> dict:
    """(-b_n/n) for p∤n, where That*u'/u = sum b_n That^n; u any unit of K[[That]]."""
    if not u.coeffs or min(u.coeffs) != 0:
        raise ValueError("not a unit of K[[That]]")
    ring = u.ring
    p = ring.characteristic
    N = u.prec if N is None else min(N, u.prec)
    b = hat_dlog(u)
    return {n: -(b[n] * ring.int_inverse(n)) for n in range(1, min(N, b.prec)) if not (p and n % p == 0)}


def _in_maximal_ideal(c: TruncSeries) -> bool:
    return not c.coeffs or min(c.coeffs) >= 1


def eta_invariance_check(f1: TruncSeries, f2: TruncSeries, primeT: TruncSeries | None = None,
                         N: int | None = None) -> bool:
    """Character data of f1 and f2 agree up to the coboundary of their ratio.

    The ratio r = f2/f1 must be 1 mod (T) coefficientwise; then the unit
    coordinates of f2 minus those of f1 equal those of r, and all of the
    latter lie in (T).
    """
    field = f1.ring.base
    if primeT is None:
        primeT = TruncSeries(field, {1: field.one}, f1.ring.prec, "T")
    u1, v1 = aj.split_coords(f1, primeT)
    u2, v2 = aj.split_coords(f2, primeT)
    if v1 != v2:
        return False
    r = aj.aj_ratio(f1, f2)
    for k, c in r.items():
        if c.coeffs and min(c.coeffs) < 0:
            return False
        if c[0] != (1 if k == 0 else 0):
            return False
    c1, c2, cr = unit_coords(u1, N), unit_coords(u2, N), unit_coords(r, N)
    for n in set(c1) & set(c2) & set(cr):
        if not (c2[n] - c1[n] == cr[n]):
            return False
        if not _in_maximal_ideal(cr[n]):
            return False
    return True
