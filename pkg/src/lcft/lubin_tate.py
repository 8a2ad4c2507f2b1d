"""The Lubin-Tate module over O_K = F_q[[T]] for f(X) = T*X + X^q.

The formal group is the additive one, so every endomorphism is an additive
series sum_e c_e X^(q^e).  The T^m-torsion tower is built as a chain of
quotient rings

    L_1 = K[x]/(x^(q-1) + T),   L_{j+1} = L_j[x]/(x^q + T*x - alpha_j),

with alpha_j the class of x at level j, so that f(alpha_1) = 0 and
f(alpha_{j+1}) = alpha_j hold by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from lcft.gf import FiniteField
from lcft.polyring import QElem, QuotientRing
from lcft.series import PrecisionError, SeriesRing, TruncSeries, coeff_frobenius

HAT = "That"


@dataclass
class AdditiveSeries:
    """sum_e coeffs[e] * X^(q^e), known for q^e < x_prec."""

    q: int
    coeffs: dict  # e -> TruncSeries in T
    x_prec: int

    def exponents(self) -> list[int]:
        return [self.q ** e for e in sorted(self.coeffs)]

    def coefficient(self, k: int):
        """Coefficient of X^k (zero unless k is a power of q)."""
        e = 0
        while self.q ** e < k:
            e += 1
        if self.q ** e != k:
            return 0
        return self.coeffs.get(e, 0)

    def evaluate(self, x):
        acc = None
        xe = x
        for e in range(max(self.coeffs, default=-1) + 1):
            if e:
                xe = xe ** self.q
            c = self.coeffs.get(e)
            if c is not None and c:
                term = xe * c
                acc = term if acc is None else acc + term
        return acc if acc is not None else x * 0

    def compose(self, other: AdditiveSeries) -> AdditiveSeries:
        """self(other(X))."""
        out: dict = {}
        x_prec = min(self.x_prec, other.x_prec)
        for e, a in self.coeffs.items():
            for k, b in other.coeffs.items():
                if self.q ** (e + k) >= x_prec:
                    continue
                t = a * b ** (self.q ** e)
                out[e + k] = out[e + k] + t if e + k in out else t
        return AdditiveSeries(self.q, {e: c for e, c in out.items() if c}, x_prec)

    def __eq__(self, other):
        if not isinstance(other, AdditiveSeries) or other.q != self.q:
            return NotImplemented
        x_prec = min(self.x_prec, other.x_prec)
        keys = {e for e in (set(self.coeffs) | set(other.coeffs)) if self.q ** e < x_prec}
        for e in keys:
            a, b = self.coeffs.get(e), other.coeffs.get(e)
            if a is None:
                if b:
                    return False
            elif b is None:
                if a:
                    return False
            elif not (a == b):
                return False
        return True

    __hash__ = None

    def __str__(self):
        from lcft.literal import format_coeff
        terms = []
        for e in sorted(self.coeffs):
            c = format_coeff(self.coeffs[e])
            mono = "X" if e == 0 else f"X^{self.q ** e}"
            terms.append(mono if c == "1" else f"({c})*{mono}")
        return (" + ".join(terms) or "0") + f" (mod X^{self.x_prec})"


def _field_q(u: TruncSeries) -> int:
    return u.ring.q


def f_series(q: int, field: FiniteField, M: int) -> AdditiveSeries:
    return AdditiveSeries(q, {0: TruncSeries(field, {1: field.one}, M, "T"),
                              1: TruncSeries(field, {0: field.one}, M, "T")}, q * q + 1)


def formal_mult(u: TruncSeries, x_prec: int, M: int | None = None) -> AdditiveSeries:
    """[u](X) = sum_m b_m f^(o m)(X), truncated at X^x_prec.

    With M = None, u is known mod T^N (N = u.prec): terms with m >= N are
    unknown and the coefficient of X^(q^e) is therefore known mod T^(N-e).
    With M given, u is read as an exact polynomial and every coefficient is
    kept mod T^M.
    """
    field = u.ring
    q = field.q
    N = u.prec
    if M is None:
        prec_of = lambda e: N - e
        top = N
        work = N
    else:
        prec_of = lambda e: M
        top = max(u.coeffs, default=-1) + 1
        work = M
    T = TruncSeries(field, {1: field.one}, work, "T")
    # iterate: cur = f^(o m) as {e: coeff}
    cur = {0: TruncSeries(field, {0: field.one}, work, "T")}
    acc: dict = {}
    for m in range(top):
        b = u.coeffs.get(m)
        if b:
            for e, c in cur.items():
                t = c * b
                acc[e] = acc[e] + t if e in acc else t
        nxt: dict = {}
        for e, c in cur.items():
            t = c * T
            nxt[e] = nxt[e] + t if e in nxt else t
            if q ** (e + 1) < x_prec:
                t = c ** q
                nxt[e + 1] = nxt[e + 1] + t if e + 1 in nxt else t
        cur = {e: c for e, c in nxt.items() if c}
    out = {}
    for e, c in acc.items():
        if q ** e < x_prec:
            c = c.truncate(prec_of(e))
            if c:
                out[e] = c
    return AdditiveSeries(q, out, x_prec)


@dataclass
class LTTower:
    field: FiniteField
    q: int
    M: int
    base: SeriesRing
    levels: list  # QuotientRing per level, levels[0] is L_1
    alphas: list  # alphas[j-1] = alpha_j in L_j

    @property
    def height(self) -> int:
        return len(self.levels)

    def T(self) -> TruncSeries:
        return self.base.gen

    def lift(self, x, to_level: int):
        """Embed an element of L_j (j = 0 for K) into L_to_level."""
        j = self.level_of(x)
        for k in range(j, to_level):
            x = self.levels[k].embed(x)
        return x

    def level_of(self, x) -> int:
        if isinstance(x, QElem):
            return self.levels.index(x.ring) + 1
        return 0

    def alpha(self, j: int, level: int | None = None):
        a = self.alphas[j - 1]
        return a if level is None else self.lift(a, level)

    def apply_f(self, x):
        return x * self.T() + x ** self.q


TowerElem = QElem


def build_tower(m: int, field: FiniteField, M: int = 16) -> LTTower:
    """The T^m-torsion tower with alpha_1, ..., alpha_m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    q = field.q
    if (q - 1) * q ** (m - 1) > 64:
        raise ValueError("tower degree exceeds the supported size (q^m <= 64)")
    K = SeriesRing(field, "T", M)
    T = K.gen
    eq1 = [T] + [K.zero] * (q - 2) + [K.one]
    levels = [QuotientRing(K, eq1, name="a1")]
    alphas = [levels[0].gen]
    for j in range(1, m):
        prev = levels[-1]
        eq = [-alphas[-1], prev.embed(T)] + [prev.zero] * (q - 2) + [prev.one]
        levels.append(QuotientRing(prev, eq, name=f"a{j + 1}"))
        alphas.append(levels[-1].gen)
    tower = LTTower(field, q, M, K, levels, alphas)
    _certify(tower, eq1)
    return tower


def _certify(tower: LTTower, eq1: list) -> None:
    from lcft.reciprocity import is_eisenstein
    if not is_eisenstein(eq1):
        raise ArithmeticError("level-1 polynomial is not Eisenstein")
    for j in range(1, tower.height + 1):
        x = tower.alpha(j)
        for _ in range(j - 1):
            x = tower.apply_f(x)
        if not x:
            raise PrecisionError(f"f^(o{j - 1})(alpha_{j}) vanishes to precision T^{tower.M}")
        if tower.apply_f(x):
            raise ArithmeticError(f"f^(o{j})(alpha_{j}) is nonzero")


def _hat_series(ring, coeffs: dict, prec: int) -> TruncSeries:
    return TruncSeries(ring, coeffs, prec, HAT)


def torsion_series(tower: LTTower, m: int, alphas: list | None = None) -> TruncSeries:
    """g = sum_{j<m} alpha_{j+1} That^j with coefficients in L_m."""
    alphas = alphas or [tower.alpha(j + 1, m) for j in range(m)]
    L = tower.levels[m - 1]
    return _hat_series(L, {j: tower.lift(alphas[j], m) for j in range(m)}, m)


def verify_fiber(tower: LTTower, m: int, alphas: list | None = None) -> bool:
    """F(g) = (-T + That) g mod That^m, F the q-power map on coefficients."""
    if m > tower.height:
        raise ValueError("tower not built to level m")
    L = tower.levels[m - 1]
    g = torsion_series(tower, m, alphas)
    lhs = coeff_frobenius(g, tower.q)
    shift = _hat_series(L, {0: tower.lift(-tower.T(), m), 1: L.one}, m + 1)
    return lhs == shift * g


def is_unit(u: TruncSeries) -> bool:
    return bool(u.coeffs) and min(u.coeffs) == 0


def sigma_alpha(u: TruncSeries, tower: LTTower, j: int) -> QElem:
    """sigma_u(alpha_j) = [u](alpha_j), evaluated in L_j."""
    if not is_unit(u):
        raise ValueError("u is not a unit")
    q = tower.q
    mult = formal_mult(u.truncate(j), q ** (j - 1) + 1, M=tower.M)
    return mult.evaluate(tower.alpha(j))


def galois_act(u: TruncSeries, x, tower: LTTower):
    """The K-automorphism sigma_u of the tower applied to x."""
    if not is_unit(u):
        raise ValueError("u is not a unit")
    cache: dict = {}

    def images(level: int) -> QElem:
        if level not in cache:
            cache[level] = sigma_alpha(u, tower, level)
        return cache[level]

    def act(y):
        level = tower.level_of(y)
        if level == 0:
            return y
        ring = tower.levels[level - 1]
        s = images(level)
        acc = ring.zero
        power = ring.one
        for c in y.coords:
            if c:
                acc = acc + power * act(c)
            power = power * s
        return acc

    return act(x)


def galois_series_identity(u: TruncSeries, tower: LTTower, m: int) -> bool:
    """sum_j sigma_u(alpha_{j+1}) That^j = u(That) * sum_j alpha_{j+1} That^j mod That^m."""
    L = tower.levels[m - 1]
    lhs = _hat_series(L, {j: tower.lift(galois_act(u, tower.alpha(j + 1), tower), m) for j in range(m)}, m)
    u_hat = _hat_series(L, {k: L.embed(tower.base.monomial(c, 0)) for k, c in u.coeffs.items() if k < m}, m)
    return lhs == u_hat * torsion_series(tower, m)


def units_mod(field: FiniteField, m: int) -> list[TruncSeries]:
    """All units of F_q[[T]]/T^m."""
    out = []
    for b0 in field.units():
        for rest in product(field.elements(), repeat=m - 1):
            out.append(TruncSeries(field, {0: b0, **{k + 1: c for k, c in enumerate(rest)}}, m, "T"))
    return out
