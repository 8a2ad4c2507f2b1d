"""Closed 1-forms on K = Q((S))((T)) modulo dlog K^x.

A 1-form aS dS + aT dT is rewritten as P dlog S + Q dlog T with P = S*aS,
Q = T*aT.  For a monomial S^a T^b closedness reads b*P_ab = a*Q_ab, so
every monomial other than the constant one is exact: it is d(h S^a T^b)
with h = P_ab/a (or Q_ab/b).  The constants P_00, Q_00 are the classes in
Q/Z of dlog S and dlog T.  Monomials with T-exponent >= 1, or T-exponent
0 and S-exponent >= 1, are logarithms of 1-units and are absorbed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from lcft.series import QQ, BivarLaurent


class NotClosedError(ValueError):
    pass


def _shift(b: BivarLaurent, di: int, dj: int) -> BivarLaurent:
    w = b.window
    win = None if w is None else (w[0] + di, w[1] + di, w[2] + dj, w[3] + dj)
    return BivarLaurent(b.ring, {(i + di, j + dj): c for (i, j), c in b.coeffs.items()}, win)


@dataclass
class OneFormQ:
    aS: BivarLaurent
    aT: BivarLaurent

    @classmethod
    def from_dlog_basis(cls, P: BivarLaurent, Q: BivarLaurent) -> OneFormQ:
        """The form P dlog S + Q dlog T."""
        return cls(_shift(P, -1, 0), _shift(Q, 0, -1))

    def dlog_basis(self) -> tuple[BivarLaurent, BivarLaurent]:
        return _shift(self.aS, 1, 0), _shift(self.aT, 0, 1)

    @property
    def window(self):
        return self.aS.window, self.aT.window

    def __add__(self, other: OneFormQ) -> OneFormQ:
        return OneFormQ(self.aS + other.aS, self.aT + other.aT)

    def __sub__(self, other: OneFormQ) -> OneFormQ:
        return OneFormQ(self.aS - other.aS, self.aT - other.aT)

    def __mul__(self, c) -> OneFormQ:
        return OneFormQ(self.aS * c, self.aT * c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OneFormQ):
            return NotImplemented
        return self.aS == other.aS and self.aT == other.aT

    __hash__ = None

    def __str__(self):
        return f"({self.aS}) dS + ({self.aT}) dT"


def zero_form(window=None) -> OneFormQ:
    return OneFormQ(BivarLaurent(QQ, {}, window), BivarLaurent(QQ, {}, window))


def exterior_derivative(f: BivarLaurent) -> OneFormQ:
    return OneFormQ(f.diff_S(), f.diff_T())


def dlog_S(window=None) -> OneFormQ:
    return OneFormQ.from_dlog_basis(BivarLaurent(QQ, {(0, 0): Fraction(1)}, window), BivarLaurent(QQ, {}, window))


def dlog_T(window=None) -> OneFormQ:
    return OneFormQ.from_dlog_basis(BivarLaurent(QQ, {}, window), BivarLaurent(QQ, {(0, 0): Fraction(1)}, window))


def _meet(w1, w2):
    if w1 is None:
        return w2
    if w2 is None:
        return w1
    return (max(w1[0], w2[0]), min(w1[1], w2[1]), max(w1[2], w2[2]), min(w1[3], w2[3]))


def closedness_defect(omega: OneFormQ) -> dict:
    """{(a, b): b*P_ab - a*Q_ab} where nonzero, on the common window."""
    P, Q = omega.dlog_basis()
    win = _meet(P.window, Q.window)
    out = {}
    for key in set(P.coeffs) | set(Q.coeffs):
        if win is not None and not (win[0] <= key[0] <= win[1] and win[2] <= key[1] <= win[3]):
            continue
        a, b = key
        v = b * P[key] - a * Q[key]
        if v:
            out[key] = v
    return out


def is_closed(omega: OneFormQ) -> bool:
    return not closedness_defect(omega)


def _log_region(a: int, b: int) -> bool:
    return b >= 1 or (b == 0 and a >= 1)


@dataclass
class DecompResult:
    A: Fraction  # class of the dlog S coefficient in [0, 1)
    B: Fraction  # class of the dlog T coefficient in [0, 1)
    h: BivarLaurent
    A_int: int
    B_int: int
    absorbed: BivarLaurent  # potential of the part lying in dlog of 1-units

    def support_ok(self) -> bool:
        return all(_h_region(i, j) for (i, j) in self.h.coeffs)

    def reassemble(self) -> OneFormQ:
        P = BivarLaurent(QQ, {(0, 0): self.A + self.A_int}, self.h.window)
        Q = BivarLaurent(QQ, {(0, 0): self.B + self.B_int}, self.h.window)
        return OneFormQ.from_dlog_basis(P, Q) + exterior_derivative(self.h) + exterior_derivative(self.absorbed)


def _h_region(i: int, j: int) -> bool:
    """S^-i, T^-j, S^i T^-j, S^-i T^-j (i, j >= 1)."""
    return (j == 0 and i <= -1) or (j <= -1)


def _split_mod_Z(x: Fraction) -> tuple[Fraction, int]:
    k = math.floor(x)
    return x - k, k


def decompose_one_form(omega: OneFormQ) -> DecompResult:
    """omega = A dlog S + B dlog T + dh + (absorbed exact part)."""
    defect = closedness_defect(omega)
    if defect:
        raise NotClosedError(f"form is not closed: defect at {sorted(defect)[:4]}")
    P, Q = omega.dlog_basis()
    win = _meet(P.window, Q.window)
    h, absorbed = {}, {}
    for key in set(P.coeffs) | set(Q.coeffs):
        if key == (0, 0):
            continue
        a, b = key
        c = P[key] / a if a else Q[key] / b
        (absorbed if _log_region(a, b) else h)[key] = c
    A, A_int = _split_mod_Z(Fraction(P[(0, 0)]))
    B, B_int = _split_mod_Z(Fraction(Q[(0, 0)]))
    return DecompResult(A, B, BivarLaurent(QQ, h, win), A_int, B_int, BivarLaurent(QQ, absorbed, win))


def phi1_pullback(coeffs: dict, window=None) -> OneFormQ:
    """d(sum a_nm S^-n T^-m)."""
    for (n, m) in coeffs:
        if n < 1 or m < 1:
            raise ValueError(f"index ({n},{m}) must have n, m >= 1")
    f = BivarLaurent(QQ, {(-n, -m): Fraction(c) for (n, m), c in coeffs.items()}, window)
    return exterior_derivative(f)


def in_image_test(omega: OneFormQ) -> bool:
    d = decompose_one_form(omega)
    return d.A == 0 and d.B == 0 and all(i <= -1 and j <= -1 for (i, j) in d.h.coeffs)


def recover_phi1_coeffs(omega: OneFormQ) -> dict:
    """Inverse of phi1_pullback on its image."""
    d = decompose_one_form(omega)
    return {(-i, -j): c for (i, j), c in d.h.coeffs.items()}


# --- dlog of units ---------------------------------------------------------------

def log_one_unit(factors: list[tuple[Fraction, int, int]], window) -> BivarLaurent:
    """log prod (1 + c S^a T^b), truncated to the window; monomials must be in the log region."""
    i_lo, i_hi, j_lo, j_hi = window
    out: dict = {}
    for c, a, b in factors:
        if not _log_region(a, b):
            raise ValueError(f"S^{a}T^{b} is not topologically nilpotent")
        k = 1
        while True:
            ka, kb = k * a, k * b
            if kb > j_hi or (kb == 0 and ka > i_hi):
                break
            # the S-exponent can only run off the window on the negative side when b >= 1
            if i_lo <= ka <= i_hi:
                out[(ka, kb)] = out.get((ka, kb), 0) + Fraction((-1) ** (k + 1)) * Fraction(c) ** k / k
            k += 1
    return BivarLaurent(QQ, {key: v for key, v in out.items() if v}, window)


def dlog_unit(a: int, b: int, factors: list[tuple[Fraction, int, int]], window) -> OneFormQ:
    """dlog(S^a T^b prod (1 + c S^i T^j)) on the window."""
    P = BivarLaurent(QQ, {(0, 0): Fraction(a)}, window)
    Q = BivarLaurent(QQ, {(0, 0): Fraction(b)}, window)
    return OneFormQ.from_dlog_basis(P, Q) + exterior_derivative(log_one_unit(factors, window))


def random_closed_form(rng: random.Random, window=(6, 6), terms: int = 8) -> OneFormQ:
    """A dlog S + B dlog T + d(random Laurent polynomial) with rational coefficients."""
    I, J = window
    lw = (-I, I, -J, J)
    frac = lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 6))
    f = {}
    for _ in range(terms):
        key = (rng.randint(-I, I), rng.randint(-J, J))
        if key != (0, 0):
            f[key] = frac()
    P = BivarLaurent(QQ, {(0, 0): frac()}, lw)
    Q = BivarLaurent(QQ, {(0, 0): frac()}, lw)
    # wide window for f so that differentiation keeps every term
    return OneFormQ.from_dlog_basis(P, Q) + exterior_derivative(BivarLaurent(QQ, f, lw))
