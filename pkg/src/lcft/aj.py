"""Membership, ratios and coordinate splitting for the set of "Abel-Jacobi"
elements f in K[[That]][1/That], K = F_q((T)).

f is a member when (1) f generates the ideal cut out by That = T, certified
by exact division by the canonical member 1 - T*That^-1 with a quotient
that is a unit of O_K[[That]], and (2) f reduces to 1 modulo the maximal
ideal (T) of O_K.
"""

from __future__ import annotations

from dataclasses import dataclass

from lcft.series import PrecisionError, SeriesRing, TruncSeries

HAT = "That"
MIN_PREC = 4


class UndecidableError(PrecisionError):
    """The given precision is too low to decide membership."""


class NotMemberError(ValueError):
    pass


@dataclass
class AjCertificate:
    member: bool
    condition1: bool
    condition2: bool
    quotient: TruncSeries | None
    reason: str

    def __bool__(self) -> bool:
        return self.member


def base_ring(field, M: int) -> SeriesRing:
    return SeriesRing(field, "T", M)


def canonical_member(field, N: int = 8, M: int = 16, prime: TruncSeries | None = None) -> TruncSeries:
    """1 - pi * pi(That)^-1 mod That^N for the prime pi (default T), coefficients mod T^M."""
    K = base_ring(field, M)
    if prime is None:
        return TruncSeries(K, {0: K.one, -1: -K.gen}, N, HAT)
    if not prime.coeffs or prime.valuation() != 1:
        raise ValueError("prime must have valuation 1")
    pi = TruncSeries(field, prime.coeffs, M, "T")
    pi_hat = from_T_series(prime, K, N + 2)
    return (1 - pi_hat.inverse() * pi).truncate(N)


def from_T_series(g: TruncSeries, K: SeriesRing, N: int) -> TruncSeries:
    """g(That): a series in T over F_q re-read in That with constant K-coefficients."""
    return TruncSeries(K, {e: K.monomial(c, 0) for e, c in g.coeffs.items()}, min(N, g.prec), HAT)


def _coeff(f: TruncSeries, k: int) -> TruncSeries:
    c = f.coeffs.get(k)
    return c if c is not None else f.ring.zero


def _check_precision(f: TruncSeries) -> None:
    if not isinstance(f.ring, SeriesRing):
        raise TypeError("candidate must have coefficients in a series ring K")
    if f.prec < MIN_PREC:
        raise UndecidableError(f"That-precision {f.prec} < {MIN_PREC}")
    precs = [c.prec for c in f.coeffs.values()] + [f.ring.prec]
    if min(precs) < MIN_PREC:
        raise UndecidableError(f"T-precision {min(precs)} < {MIN_PREC}")


def evaluate_at_T(f: TruncSeries) -> TruncSeries:
    """f with That := T, as a series in T (precision from both truncations)."""
    K = f.ring
    prec = min([f.prec, K.prec + min(f.lo, f.prec)] + [c.prec + k for k, c in f.coeffs.items()])
    acc = TruncSeries(K.base, {}, prec, "T")
    for k, c in f.coeffs.items():
        acc = acc + c.shift(k)
    return acc.truncate(prec)


def divide_by_canonical(f: TruncSeries) -> TruncSeries:
    """q with f = (1 - T*That^-1) * q, by long division from the low end.

    q_k = -sum_{j<k} f_j T^(j-k); each coefficient carries the T-precision
    the division justifies, and the That-precision is cut where a
    coefficient would be entirely unknown.
    """
    K = f.ring
    lo = min(f.lo, f.prec)
    out = {}
    top = f.prec + 1
    for k in range(lo + 1, f.prec + 1):
        terms = [(_coeff(f, j), j - k) for j in range(lo, k)]
        prec = min(c.prec + s for c, s in terms)
        if prec < 1:
            top = k
            break
        acc = TruncSeries(K.base, {}, prec, "T")
        for c, s in terms:
            if c:
                acc = acc + c.shift(s)
        out[k] = -acc.truncate(prec)
    return TruncSeries(K, out, top, HAT)


def _reduces_to_one(f: TruncSeries) -> tuple[bool, str]:
    for k, c in f.items():
        if c.coeffs and min(c.coeffs) < 0:
            return False, f"coefficient of That^{k} is not integral"
        if c.prec < 1:
            raise UndecidableError(f"coefficient of That^{k} has no T-precision")
        want = 1 if k == 0 else 0
        if c[0] != want:
            return False, f"coefficient of That^{k} reduces to {c[0]} mod T, expected {want}"
    if 0 not in f.coeffs:
        return False, "constant coefficient reduces to 0 mod T, expected 1"
    return True, ""


def is_aj(f: TruncSeries) -> AjCertificate:
    """Decide membership; the certificate carries the unit quotient."""
    _check_precision(f)
    ev = evaluate_at_T(f)
    if ev:
        return AjCertificate(False, False, False, None,
                             f"condition (1) fails: f(That := T) = {ev} is nonzero")
    q = divide_by_canonical(f)
    if q.prec < 2:
        raise UndecidableError("quotient precision too low")
    if q.coeffs and min(q.coeffs) < 0:
        return AjCertificate(False, False, False, q, "condition (1) fails: quotient has negative That-exponents")
    for k, c in q.items():
        if c.coeffs and min(c.coeffs) < 0:
            return AjCertificate(False, False, False, q,
                                 f"condition (1) fails: quotient coefficient at That^{k} is not integral")
    q0 = _coeff(q, 0)
    if not q0 or q0.valuation() != 0:
        return AjCertificate(False, False, False, q, "condition (1) fails: quotient constant term is not a unit")
    ok2, why = _reduces_to_one(f)
    if not ok2:
        return AjCertificate(False, True, False, q, f"condition (2) fails: {why}")
    return AjCertificate(True, True, True, q, "member")


def _require(f: TruncSeries) -> AjCertificate:
    cert = is_aj(f)
    if not cert:
        raise NotMemberError(cert.reason)
    return cert


def aj_ratio(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """The unique u with f*u = g; u lies in O_K[[That]] and is 1 mod T."""
    qf = _require(f).quotient
    qg = _require(g).quotient
    u = qg * qf.inverse()
    return u


def split_coords(f: TruncSeries, primeT: TruncSeries) -> tuple[TruncSeries, int]:
    """f = unit * primeT(That)^v; returns (unit, v)."""
    _require(f)
    if not primeT.coeffs or primeT.valuation() != 1:
        raise ValueError("primeT must have valuation 1")
    v = f.valuation()
    pi_hat = from_T_series(primeT, f.ring, f.prec - v + 1)
    unit = f * pi_hat ** (-v)
    return unit, v
