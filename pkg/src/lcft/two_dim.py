"""Two-dimensional local fields K = k((S))((T)), k = F_q.

Covers 2-forms a_ij S^i T^j dlog S ∧ dlog T over k[[S,T]], the operator
C^-1 - 1 on their classes, its kernel (parametrized by the p-primitive
indices), the dlog of the symbol {-S + Shat, -T + That}, normal forms of
K modulo x^q - x, and the Artin-Schreier system x_ij^q - x_ij = S^-i T^-j.

Index windows (I, J) for 2-forms mean 1 <= i <= I, 1 <= j <= J.  For
Laurent polynomials a window (I, J) means -I <= i <= I, -J <= j <= J.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from math import gcd

from lcft.gf import FiniteField, semilinear_rank
from lcft.polyring import QuotientRing
from lcft.series import BivarLaurent, BivarRing, SeriesRing, TruncSeries


def _primitive(i: int, j: int, p: int) -> bool:
    return gcd(i, j) % p != 0


def form_indices(window) -> list[tuple[int, int]]:
    I, J = window
    return [(i, j) for i in range(1, I + 1) for j in range(1, J + 1)]


def primitive_indices(window, p: int) -> list[tuple[int, int]]:
    return [(i, j) for i, j in form_indices(window) if _primitive(i, j, p)]


def laurent_window(window) -> tuple[int, int, int, int]:
    I, J = window
    return (-I, I, -J, J)


@dataclass
class TwoForm:
    """sum a_ij Shat^i That^j dlog Shat ∧ dlog That on the window (I, J)."""

    p: int
    window: tuple
    coeffs: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.window = tuple(self.window)
        I, J = self.window
        for (i, j) in self.coeffs:
            if not (1 <= i <= I and 1 <= j <= J):
                raise ValueError(f"index ({i},{j}) outside window {self.window}")
        self.coeffs = {k: c for k, c in self.coeffs.items() if c}

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), 0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[k] == other[k] for k in keys)


@dataclass
class KernelCoords:
    """Coordinates at p-primitive indices of the window."""

    p: int
    window: tuple
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.window = tuple(self.window)
        for (i, j) in self.entries:
            if not _primitive(i, j, self.p):
                raise ValueError(f"index ({i},{j}) is not p-primitive")
        self.entries = {k: c for k, c in self.entries.items() if c}

    def __eq__(self, other):
        if not isinstance(other, KernelCoords):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self.entries.get(k, 0) == other.entries.get(k, 0) for k in keys)


# --- the symbol ------------------------------------------------------------

def _dlog_coefficients(field, var: str, hat: str, n: int) -> dict:
    """Coefficients of dlog(-V + Vhat) against dlog Vhat, as series in V."""
    K = SeriesRing(field, var, n + 2)
    u = TruncSeries(K, {0: -K.gen, 1: K.one}, n + 1, hat)
    b = u.derivative().shift(1) / u
    return {k: b[k] for k in range(1, n + 1)}


def symbol_dlog(window, field) -> TwoForm:
    """dlog{-S + Shat, -T + That} as a 2-form with coefficients in K."""
    I, J = window
    p = field.characteristic
    if I < 1 or J < 1:
        return TwoForm(p, (max(I, 0), max(J, 0)), {})
    A = _dlog_coefficients(field, "S", "Shat", I)
    B = _dlog_coefficients(field, "T", "That", J)
    coeffs = {}
    for (i, j) in form_indices(window):
        # each factor is a Laurent monomial; their product is the bivariate coefficient
        a, b = A[i], B[j]
        prod = {}
        for ei, ci in a.coeffs.items():
            for ej, cj in b.coeffs.items():
                prod[(ei, ej)] = ci * cj
        coeffs[(i, j)] = BivarLaurent(field, prod)
    form = TwoForm(p, window, coeffs)
    closed = TwoForm(p, window, {(i, j): BivarLaurent.monomial(field, field.one, -i, -j)
                                 for (i, j) in form_indices(window)})
    if form != closed:
        raise ArithmeticError("series expansion of the symbol disagrees with S^-i T^-j")
    return form


# --- C^-1 - 1 and its kernel -------------------------------------------------

def inverse_cartier_minus_one(omega: TwoForm) -> TwoForm:
    """Class of (C^-1 - 1)omega: coefficient a_ij^p - a_{pi,pj} at (pi, pj)."""
    p = omega.p
    I, J = omega.window
    if omega and (I < p or J < p):
        raise ValueError(f"window {omega.window} too small: no index (p*i, p*j) fits")
    out = {}
    for i in range(1, I // p + 1):
        for j in range(1, J // p + 1):
            a = omega[(i, j)]
            c = (a ** p if a else a) - omega[(p * i, p * j)]
            if c:
                out[(p * i, p * j)] = c
    return TwoForm(p, omega.window, out)


def kernel_test_and_project(omega: TwoForm) -> tuple[bool, KernelCoords]:
    """Membership in Ker(C^-1 - 1) on the window and the primitive coordinates."""
    member = not inverse_cartier_minus_one(omega) if omega.window[0] >= omega.p and omega.window[1] >= omega.p \
        else True
    proj = {k: c for k, c in omega.coeffs.items() if _primitive(*k, omega.p)}
    return member, KernelCoords(omega.p, omega.window, proj)


def kernel_inflate(coords: KernelCoords) -> TwoForm:
    """a_{p^e i, p^e j} = a_ij^(p^e) within the window."""
    p = coords.p
    I, J = coords.window
    out = {}
    for (i, j), a in coords.entries.items():
        e, ai, aj, c = 0, i, j, a
        while ai <= I and aj <= J:
            out[(ai, aj)] = c
            ai, aj, c = ai * p, aj * p, c ** p
            e += 1
    return TwoForm(p, coords.window, out)


# --- K / wp_q K ----------------------------------------------------------------

@dataclass
class NormalForm:
    form: BivarLaurent
    witness: BivarLaurent  # x with x^q - x = f - form on the window
    discarded: BivarLaurent  # f - form
    verified: bool


def _positive(i: int, j: int) -> bool:
    return j >= 1 or (j == 0 and i >= 1)


def _nth_root(c, k: int):
    """The unique c^(1/k) for k a power of p in a finite field."""
    f = c.field
    return c ** pow(k, -1, f.q - 1) if c else c


def wp_q(x: BivarLaurent, q: int, window=None) -> BivarLaurent:
    out = x ** q - x
    return out.with_window(window) if window is not None else out


def wp_q_normal_form(f: BivarLaurent, q: int) -> NormalForm:
    """Canonical representative of f modulo {x^q - x}, with a witness.

    Positive monomials (T-exponent >= 1, or T-exponent 0 and S-exponent
    >= 1) are removed using x = -sum_e g^(q^e); constants stay; c S^a T^b
    with q | a, q | b is replaced by c^(1/q) S^(a/q) T^(b/q) until the
    exponent pair is no longer q-divisible.
    """
    if f.window is None:
        raise ValueError("normal forms need a bounded window")
    field = f.ring
    i_lo, i_hi, j_lo, j_hi = f.window
    nf: dict = {}
    wit: dict = {}

    def add(d, k, c):
        v = d[k] + c if k in d else c
        if v:
            d[k] = v
        else:
            d.pop(k, None)

    for (a, b), c in f.coeffs.items():
        if _positive(a, b):
            # g^(q^e) until it leaves the window in the convergent direction
            e, ga, gb, gc = 0, a, b, c
            while (gb >= 1 and gb <= j_hi) or (gb == 0 and ga <= i_hi):
                add(wit, (ga, gb), -gc)
                ga, gb, gc = ga * q, gb * q, gc ** q
                e += 1
            continue
        if (a, b) == (0, 0):
            add(nf, (0, 0), c)
            continue
        ca, cb, cc = a, b, c
        while ca % q == 0 and cb % q == 0:
            ca, cb = ca // q, cb // q
            cc = _nth_root(cc, q)
            if not (i_lo <= ca <= i_hi and j_lo <= cb <= j_hi):
                raise ValueError(f"window {f.window} too small to hold the reduction of S^{a}T^{b}")
            add(wit, (ca, cb), cc)
        add(nf, (ca, cb), cc)
    form = BivarLaurent(field, nf, f.window)
    witness = BivarLaurent(field, wit, None)
    discarded = f - form
    verified = wp_q(witness, q, f.window) == discarded
    return NormalForm(form, witness, discarded, verified)


def normal_form_support_ok(g: BivarLaurent, q: int) -> bool:
    """Support lies in the index sets of K/wp_q K: constants, S^-i with q∤i,
    and S^i T^-j with (i, j) not both divisible by q."""
    for (i, j) in g.coeffs:
        if (i, j) == (0, 0):
            continue
        if _positive(i, j):
            return False
        if i % q == 0 and j % q == 0:
            return False
    return True


# --- the Artin-Schreier system ------------------------------------------------

@dataclass
class ASSystem:
    field: FiniteField
    window: tuple
    generators: list  # (i, j, rhs)


def as_system(window, field: FiniteField) -> ASSystem:
    p = field.p
    gens = [(i, j, BivarLaurent.monomial(field, field.one, -i, -j)) for (i, j) in primitive_indices(window, p)]
    return ASSystem(field, tuple(window), gens)


def frobenius_on_classes(field: FiniteField):
    """The p-power map on K/wp_q K in normal-form coordinates."""
    p, q = field.p, field.q

    def sigma(vec: dict) -> dict:
        out: dict = {}
        for (a, b), c in vec.items():
            a2, b2, c2 = a * p, b * p, c ** p
            while (a2, b2) != (0, 0) and a2 % q == 0 and b2 % q == 0:
                a2, b2, c2 = a2 // q, b2 // q, _nth_root(c2, q)
            v = out.get((a2, b2), field.zero) + c2
            out[(a2, b2)] = v
        return {k: c for k, c in out.items() if c}
    return sigma


def kernel_point_count(window, field: FiniteField) -> int:
    """|Ker(C^-1 - 1)(F_q)| on the window, by enumerating each p-power chain."""
    p = field.p
    I, J = window
    total = 1
    for (i, j) in primitive_indices(window, p):
        chain = []
        a, b = i, j
        while a <= I and b <= J:
            chain.append((a, b))
            a, b = a * p, b * p
        count = 0
        for vals in product(field.elements(), repeat=len(chain)):
            if all(vals[k] ** p == vals[k + 1] for k in range(len(chain) - 1)):
                count += 1
        total *= count
    return total


@dataclass
class GaloisData:
    system: ASSystem
    rank: int
    generator_count: int
    group_order: int
    kernel_points: int
    independent: bool


def as_system_galois(window, field: FiniteField) -> GaloisData:
    """Group order q^r and semilinear independence of the r generators."""
    system = as_system(window, field)
    classes = []
    for (i, j, rhs) in system.generators:
        nf = wp_q_normal_form(rhs.with_window((-i, i, -j, j)), field.q).form
        classes.append(dict(nf.coeffs))
    r = len(classes)
    rank = semilinear_rank(classes, field, frobenius_on_classes(field))
    return GaloisData(system, rank, r, field.q ** r, kernel_point_count(window, field), rank == field.n * r)


def fiber_check_2d(window, field: FiniteField, perturb: dict | None = None) -> bool:
    """(F - 1) sum x_ij Shat^i That^j (...) equals the primitive part of the symbol.

    Each x_ij lives in K[x]/(x^q - x - rhs_ij); ``perturb`` adds extra terms
    to chosen right-hand sides.
    """
    q = field.q
    ring = BivarRing(field)
    symbol = symbol_dlog(window, field)
    for (i, j, rhs) in as_system(window, field).generators:
        if perturb and (i, j) in perturb:
            rhs = rhs + perturb[(i, j)]
        R = QuotientRing(ring, [-rhs, -ring.one] + [ring.zero] * (q - 2) + [ring.one], name=f"x{i}{j}")
        x = R.gen
        lhs = x ** q - x
        if not (lhs == R.embed(symbol[(i, j)])):
            return False
    return True
