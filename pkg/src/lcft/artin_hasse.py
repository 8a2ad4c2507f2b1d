"""The Artin-Hasse series F(t) = exp(-sum_e t^(p^e)/p^e) and the coordinates
it induces on 1-units.

Every 1-unit u of F_q[[t]] factors uniquely as a product of F(a_{nm} t^(n p^m))
with p not dividing n; modulo p-th powers the coordinates a_{n0} are recovered
by -b_n/n where t*u'/u = sum b_n t^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from lcft.gf import GF, FiniteField, is_prime
from lcft.series import TruncSeries

VAR = "t"


def split_index(d: int, p: int) -> tuple[int, int]:
    """d = n * p^m with p not dividing n."""
    m = 0
    while d % p == 0:
        d //= p
        m += 1
    return d, m


@dataclass
class WittCoords:
    """a_{nm} indexed by p∤n >= 1, m >= 0, with n*p^m < prec."""

    p: int
    prec: int
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        for (n, m), a in self.entries.items():
            if n < 1 or n % self.p == 0 or m < 0 or n * self.p ** m >= self.prec:
                raise ValueError(f"index ({n},{m}) outside the coordinate grid for p={self.p}, prec={self.prec}")
        self.entries = {k: a for k, a in self.entries.items() if a}

    def __getitem__(self, key):
        return self.entries.get(tuple(key), 0)

    def __eq__(self, other):
        if not isinstance(other, WittCoords):
            return NotImplemented
        return self.p == other.p and self.entries == other.entries


@dataclass
class ModPCoords:
    """Coordinates indexed by p∤n with 1 <= n < prec."""

    p: int
    prec: int
    entries: dict = dc_field(default_factory=dict)

    def __getitem__(self, n):
        return self.entries[n]

    def nonzero(self) -> dict:
        return {n: c for n, c in self.entries.items() if c}


@lru_cache(maxsize=None)
def artin_hasse_rational(p: int, N: int) -> tuple[Fraction, ...]:
    """Coefficients of F(t) mod t^N as exact rationals."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    h = [Fraction(0)] * N
    pe = 1
    while pe < N:
        h[pe] = Fraction(-1, pe)
        pe *= p
    # g = exp(h): n g_n = sum_k k h_k g_{n-k}
    g = [Fraction(1)] + [Fraction(0)] * (N - 1)
    for n in range(1, N):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if h[k]:
                acc += k * h[k] * g[n - k]
        g[n] = acc / n
    return tuple(g)


@lru_cache(maxsize=None)
def artin_hasse_ints(p: int, N: int) -> tuple[int, ...]:
    """Coefficients of F(t) mod (p, t^N) as residues 0..p-1."""
    out = []
    for c in artin_hasse_rational(p, N):
        if c.denominator % p == 0:
            raise ArithmeticError("Artin-Hasse coefficient is not p-integral")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    return tuple(out)


@lru_cache(maxsize=None)
def artin_hasse_inverse_ints(p: int, N: int) -> tuple[int, ...]:
    """Coefficients of E(t) = 1/F(t) mod (p, t^N)."""
    f = artin_hasse_ints(p, N)
    e = [1] + [0] * (N - 1)
    for k in range(1, N):
        e[k] = -sum(f[i] * e[k - i] for i in range(1, k + 1)) % p
    return tuple(e)


def artin_hasse_F(p: int, N: int, field: FiniteField | None = None) -> TruncSeries:
    """F(t) mod t^N with coefficients in F_p (or in ``field`` of characteristic p)."""
    if N < 2:
        raise ValueError("precision must be at least 2")
    field = field or GF(p)
    if field.p != p:
        raise ValueError("field characteristic does not match p")
    return TruncSeries(field, {i: field.from_int(c) for i, c in enumerate(artin_hasse_ints(p, N))}, N, VAR)


def _substituted(table: tuple[int, ...], a, d: int, N: int, field, var: str) -> TruncSeries:
    """sum_k table[k] * (a t^d)^k mod t^N."""
    coeffs = {}
    ak = field.one
    for k in range(0, (N - 1) // d + 1):
        c = table[k]
        if c:
            coeffs[k * d] = field.from_int(c) * ak
        ak = ak * a
    return TruncSeries(field, coeffs, N, var)


def _mul_trunc(f: dict, g: dict, N: int) -> dict:
    out: dict = {}
    gi = sorted(g.items())
    for e1, c1 in f.items():
        for e2, c2 in gi:
            e = e1 + e2
            if e >= N:
                break
            out[e] = out[e] + c1 * c2 if e in out else c1 * c2
    return {e: c for e, c in out.items() if c}


def ah_compose(coords: WittCoords, N: int, field: FiniteField, var: str = VAR) -> TruncSeries:
    """prod F(a_{nm} t^(n p^m)) mod t^N."""
    p = coords.p
    table = artin_hasse_ints(p, N)
    acc = {0: field.one}
    for (n, m), a in sorted(coords.entries.items()):
        d = n * p ** m
        if d >= N:
            continue
        acc = _mul_trunc(acc, _substituted(table, field(a) if not hasattr(a, "field") else a, d, N, field, var).coeffs, N)
    return TruncSeries(field, acc, N, var)


def _check_one_unit(u: TruncSeries) -> None:
    if not u.coeffs or min(u.coeffs) < 0 or u[0] != 1:
        raise ValueError("not a 1-unit (constant term must be 1 and no negative exponents)")


def ah_decompose(u: TruncSeries, N: int | None = None) -> WittCoords:
    """The coordinates a_{nm} with ah_compose(coords) = u mod t^N."""
    _check_one_unit(u)
    field = u.ring
    p = field.characteristic
    N = u.prec if N is None else min(N, u.prec)
    inv_table = artin_hasse_inverse_ints(p, N)
    cur = {e: c for e, c in u.coeffs.items() if e < N}
    entries = {}
    while True:
        degs = [e for e in cur if e > 0]
        if not degs:
            break
        d = min(degs)
        # F(x) = 1 - x + ..., so the coordinate is minus the leading coefficient
        a = -cur[d]
        entries[split_index(d, p)] = a
        cur = _mul_trunc(cur, _substituted(inv_table, a, d, N, field, u.var).coeffs, N)
    return WittCoords(p, N, entries)


def hat_dlog(u: TruncSeries) -> TruncSeries:
    """var * u'/u, i.e. the coefficient series of dlog u against dlog var."""
    return u.derivative().shift(1) / u


def alpha_dlog(u: TruncSeries, N: int | None = None) -> ModPCoords:
    """(-b_n/n)_{p∤n} where var*u'/u = sum b_n var^n.

    Generic over the coefficient ring: it only needs a characteristic and
    ``int_inverse``.
    """
    if not u.coeffs or min(u.coeffs) < 0 or u[0] != 1:
        raise ValueError("not a 1-unit (constant term must be 1 and no negative exponents)")
    ring = u.ring
    p = ring.characteristic
    N = u.prec if N is None else min(N, u.prec)
    b = hat_dlog(u)
    out = {}
    for n in range(1, N):
        if p and n % p == 0:
            continue
        bn = b[n]
        out[n] = -(bn * ring.int_inverse(n)) if bn else ring.zero
    return ModPCoords(p, N, out)
