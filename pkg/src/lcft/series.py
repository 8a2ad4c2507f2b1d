"""Truncated Laurent series with explicit precision, generic over the
coefficient ring, and windowed bivariate Laurent polynomials.

A :class:`TruncSeries` is known modulo ``var^prec``.  Coefficients may be
field elements, Fractions, other truncated series (nesting), or quotient
ring elements; each operation propagates precision rather than cutting at a
global order.  Equality is equality to the common precision.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from lcft.gf import FieldElem


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


class PrecisionError(ValueError):
    """Raised when the available precision cannot decide a question."""


def inv(c):
    """Multiplicative inverse of a coefficient."""
    if hasattr(c, "inverse"):
        return c.inverse()
    if not c:
        raise ZeroDivisionError("inverse of zero")
    return Fraction(1) / c


class Rationals:
    """The coefficient ring Q of exact Fractions."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, k: int) -> Fraction:
        return Fraction(k)

    def int_inverse(self, k: int) -> Fraction:
        return Fraction(1, k)

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def __repr__(self):
        return "QQ"


QQ = Rationals()


class SeriesRing:
    """Ring of truncated Laurent series in ``var`` over ``base``.

    ``prec`` is the default precision for constants created by the ring; it
    is used when the series serve as coefficients of another series.
    """

    def __init__(self, base, var: str = "T", prec: int = 20):
        self.base = base
        self.var = var
        self.prec = prec
        self.characteristic = base.characteristic

    @property
    def zero(self) -> TruncSeries:
        return TruncSeries(self.base, {}, self.prec, self.var)

    @property
    def one(self) -> TruncSeries:
        return TruncSeries(self.base, {0: self.base.one}, self.prec, self.var)

    @property
    def gen(self) -> TruncSeries:
        return TruncSeries(self.base, {1: self.base.one}, self.prec, self.var)

    def from_int(self, k: int) -> TruncSeries:
        return TruncSeries(self.base, {0: self.base.from_int(k)}, self.prec, self.var)

    def int_inverse(self, k: int):
        # a scalar of the base ring; series scale coefficientwise by it
        return self.base.int_inverse(k)

    def monomial(self, c, e: int) -> TruncSeries:
        return TruncSeries(self.base, {e: c}, self.prec, self.var)

    def __call__(self, x) -> TruncSeries:
        if isinstance(x, TruncSeries) and x.var == self.var:
            return x
        return TruncSeries(self.base, {0: self.base.one * x}, self.prec, self.var)

    def __repr__(self):
        return f"SeriesRing({self.base!r}, {self.var!r}, prec={self.prec})"


class TruncSeries:
    """sum_{e < prec} coeffs[e] * var^e  +  O(var^prec)."""

    __slots__ = ("ring", "var", "coeffs", "prec")

    def __init__(self, ring, coeffs: Mapping[int, object] | Iterable = (), prec: int = 20, var: str = "T"):
        self.ring = ring
        self.var = var
        self.prec = prec
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {e: c for e, c in coeffs.items() if e < prec and c}

    # -- constructors ------------------------------------------------------
    @classmethod
    def monomial(cls, ring, c, e: int, prec: int, var: str = "T") -> TruncSeries:
        return cls(ring, {e: c}, prec, var)

    @classmethod
    def constant(cls, ring, c, prec: int, var: str = "T") -> TruncSeries:
        return cls(ring, {0: c}, prec, var)

    def _new(self, coeffs, prec) -> TruncSeries:
        s = TruncSeries.__new__(TruncSeries)
        s.ring, s.var, s.prec, s.coeffs = self.ring, self.var, prec, coeffs
        return s

    # -- basic queries -----------------------------------------------------
    def __getitem__(self, e: int):
        if e >= self.prec:
            raise PrecisionError(f"coefficient of {self.var}^{e} is beyond precision {self.prec}")
        return self.coeffs.get(e, self.ring.zero)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def valuation(self) -> int:
        if not self.coeffs:
            raise PrecisionError("valuation of a series that is zero to its precision")
        return min(self.coeffs)

    @property
    def lo(self) -> int:
        """Lowest exponent; for the zero series, its precision."""
        return min(self.coeffs) if self.coeffs else self.prec

    def leading_coefficient(self):
        return self.coeffs[self.valuation()]

    def exponents(self) -> list[int]:
        return sorted(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items())

    def _same(self, other) -> bool:
        return isinstance(other, TruncSeries) and other.var == self.var

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if self._same(other):
            prec = min(self.prec, other.prec)
            out = {e: c for e, c in self.coeffs.items() if e < prec}
            for e, c in other.coeffs.items():
                if e < prec:
                    if e in out:
                        s = out[e] + c
                        if s:
                            out[e] = s
                        else:
                            del out[e]
                    else:
                        out[e] = c
            return self._new(out, prec)
        if 0 >= self.prec:
            return self
        out = dict(self.coeffs)
        s = self[0] + other
        if s:
            out[0] = s
        else:
            out.pop(0, None)
        return self._new(out, self.prec)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._same(other):
            prec = min(self.prec + other.lo, other.prec + self.lo)
            out: dict = {}
            b_items = sorted(other.coeffs.items())
            for e1, c1 in self.coeffs.items():
                for e2, c2 in b_items:
                    e = e1 + e2
                    if e >= prec:
                        break
                    if e in out:
                        out[e] = out[e] + c1 * c2
                    else:
                        out[e] = c1 * c2
            return self._new({e: c for e, c in out.items() if c}, prec)
        out = {}
        for e, c in self.coeffs.items():
            v = c * other
            if v:
                out[e] = v
        return self._new(out, self.prec)

    def __rmul__(self, other):
        out = {}
        for e, c in self.coeffs.items():
            v = other * c
            if v:
                out[e] = v
        return self._new(out, self.prec)

    def inverse(self) -> TruncSeries:
        """1/f; the leading coefficient must be invertible."""
        v = self.valuation()
        lead = self.coeffs[v]
        try:
            lead_inv = inv(lead)
        except (ZeroDivisionError, PrecisionError, AttributeError, TypeError) as exc:
            raise ValueError("leading coefficient is not a unit") from exc
        rel = self.prec - v
        a = [self.coeffs.get(v + i) for i in range(rel)]
        b = [lead_inv]
        for k in range(1, rel):
            acc = None
            for i in range(1, k + 1):
                ai = a[i]
                if ai is None:
                    continue
                bk = b[k - i]
                if not bk:
                    continue
                t = ai * bk
                acc = t if acc is None else acc + t
            if acc is None:
                b.append(self.ring.zero)
            else:
                b.append(-(acc * lead_inv))
        return self._new({i - v: c for i, c in enumerate(b) if c}, rel - v)

    def __truediv__(self, other):
        if self._same(other):
            return self * other.inverse()
        return self * inv(other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self._new({0: self.ring.one}, max(self.prec - self.lo, 1))
        p = getattr(self.ring, "characteristic", 0)
        if p and _is_power_of(k, p):
            # (f + O(v^N))^(p^e) = sum c^(p^e) v^(e p^e) + O(v^(N p^e))
            return self._new({e * k: c ** k for e, c in self.coeffs.items()}, self.prec * k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not self._same(other):
            if isinstance(other, (TruncSeries, BivarLaurent)):
                return NotImplemented
            other = self._new({0: other} if other else {}, self.prec)
        prec = min(self.prec, other.prec)
        keys = {e for e in self.coeffs if e < prec} | {e for e in other.coeffs if e < prec}
        for e in keys:
            a = self.coeffs.get(e)
            b = other.coeffs.get(e)
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

    # -- calculus and maps -------------------------------------------------
    def derivative(self) -> TruncSeries:
        out = {}
        for e, c in self.coeffs.items():
            if e:
                v = c * e
                if v:
                    out[e - 1] = v
        # the first unknown coefficient is e*f_e for the least e >= prec with
        # e nonzero in the coefficient ring
        p = getattr(self.ring, "characteristic", 0)
        e = self.prec
        while p and e % p == 0:
            e += 1
        return self._new(out, e - 1)

    def dlog(self) -> TruncSeries:
        """f'/f."""
        if not self.coeffs:
            raise ValueError("dlog of zero")
        return self.derivative() / self

    def shift(self, k: int) -> TruncSeries:
        """Multiply by var^k."""
        return self._new({e + k: c for e, c in self.coeffs.items()}, self.prec + k)

    def truncate(self, prec: int) -> TruncSeries:
        prec = min(prec, self.prec)
        return self._new({e: c for e, c in self.coeffs.items() if e < prec}, prec)

    def map_coeffs(self, fn: Callable, ring=None) -> TruncSeries:
        out = {}
        for e, c in self.coeffs.items():
            v = fn(c)
            if v:
                out[e] = v
        s = self._new(out, self.prec)
        if ring is not None:
            s.ring = ring
        return s

    def subs_monomial(self, c, d: int) -> TruncSeries:
        """f(c * var^d) for d >= 1; requires nonnegative exponents."""
        if d < 1:
            raise ValueError("substitution degree must be >= 1")
        if self.coeffs and min(self.coeffs) < 0:
            raise ValueError("substitution into a series with negative exponents")
        out = {}
        cp = None
        for e in sorted(self.coeffs):
            cp = c ** e
            v = self.coeffs[e] * cp
            if v:
                out[e * d] = v
        return self._new(out, self.prec * d if self.prec > 0 else self.prec)

    def rename(self, var: str) -> TruncSeries:
        s = self._new(dict(self.coeffs), self.prec)
        s.var = var
        return s

    def __repr__(self):
        from lcft.literal import format_series
        return f"TruncSeries({format_series(self)})"

    def __str__(self):
        from lcft.literal import format_series
        return format_series(self)


def arith(f: TruncSeries, g: TruncSeries, op: str) -> TruncSeries:
    """Binary operation by name; both operands must share the variable."""
    if f.var != g.var:
        raise ValueError(f"variable mismatch: {f.var} vs {g.var}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def invert(f: TruncSeries) -> TruncSeries:
    return f.inverse()


def valuation(f: TruncSeries) -> int:
    return f.valuation()


def dlog(f: TruncSeries) -> TruncSeries:
    return f.dlog()


def coeff_frobenius(g: TruncSeries, q: int) -> TruncSeries:
    """Raise every coefficient to the q-th power, exponents fixed."""
    def qpow(c):
        if isinstance(c, (FieldElem,)) or hasattr(c, "__pow__"):
            return c ** q
        raise TypeError(f"unsupported coefficient domain {type(c).__name__}")
    if isinstance(g.ring, Rationals):
        raise TypeError("q-power Frobenius is undefined on rational coefficients")
    return g.map_coeffs(qpow)


def min_coeff_prec(f: TruncSeries) -> int | None:
    """Smallest precision among series coefficients (None if none are series)."""
    precs = [c.prec for c in f.coeffs.values() if isinstance(c, TruncSeries)]
    return min(precs) if precs else None


# --- bivariate windows ------------------------------------------------------

Window = tuple  # (i_lo, i_hi, j_lo, j_hi), inclusive; None means unbounded


def _in_window(key, window) -> bool:
    if window is None:
        return True
    i, j = key
    return window[0] <= i <= window[1] and window[2] <= j <= window[3]


def _meet(w1, w2):
    if w1 is None:
        return w2
    if w2 is None:
        return w1
    return (max(w1[0], w2[0]), min(w1[1], w2[1]), max(w1[2], w2[2]), min(w1[3], w2[3]))


class BivarLaurent:
    """Finite Laurent polynomial sum c_{ij} S^i T^j restricted to a window.

    Stands for a truncation of an element of k((S))((T)).  Every result is
    the exact result restricted to the (intersected) window.
    """

    __slots__ = ("ring", "coeffs", "window")

    def __init__(self, ring, coeffs: Mapping[tuple, object] = (), window: Window | None = None):
        self.ring = ring
        self.window = tuple(window) if window is not None else None
        self.coeffs = {(int(k[0]), int(k[1])): c for k, c in dict(coeffs).items()
                       if c and _in_window(k, self.window)}

    @classmethod
    def monomial(cls, ring, c, i: int, j: int, window=None) -> BivarLaurent:
        return cls(ring, {(i, j): c}, window)

    def _new(self, coeffs, window):
        b = BivarLaurent.__new__(BivarLaurent)
        b.ring, b.window = self.ring, window
        b.coeffs = {k: c for k, c in coeffs.items() if c and _in_window(k, window)}
        return b

    def __getitem__(self, key):
        return self.coeffs.get(tuple(key), self.ring.zero)

    def __bool__(self):
        return bool(self.coeffs)

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items())

    def restrict(self, window) -> BivarLaurent:
        return self._new(dict(self.coeffs), _meet(self.window, window) if window is not None else self.window)

    def with_window(self, window) -> BivarLaurent:
        return self._new(dict(self.coeffs), window)

    def filter(self, pred: Callable[[int, int], bool]) -> BivarLaurent:
        return self._new({k: c for k, c in self.coeffs.items() if pred(*k)}, self.window)

    def __add__(self, other):
        if isinstance(other, BivarLaurent):
            out = dict(self.coeffs)
            for k, c in other.coeffs.items():
                out[k] = out[k] + c if k in out else c
            return self._new(out, _meet(self.window, other.window))
        out = dict(self.coeffs)
        out[(0, 0)] = self[(0, 0)] + other
        return self._new(out, self.window)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.coeffs.items()}, self.window)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _full_mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return {k: c for k, c in out.items() if c}

    def __mul__(self, other):
        if isinstance(other, BivarLaurent):
            return self._new(self._full_mul(self.coeffs, other.coeffs), _meet(self.window, other.window))
        return self._new({k: c * other for k, c in self.coeffs.items()}, self.window)

    def __rmul__(self, other):
        return self._new({k: other * c for k, c in self.coeffs.items()}, self.window)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        p = self.ring.characteristic
        if p and k > 0:
            e, r = 0, k
            while r % p == 0:
                r //= p
                e += 1
            if r == 1:
                # Frobenius: no cross terms in characteristic p
                return self._new({(i * k, j * k): c ** k for (i, j), c in self.coeffs.items()}, self.window)
        acc = {(0, 0): self.ring.one}
        base = dict(self.coeffs)
        while k:
            if k & 1:
                acc = self._full_mul(acc, base)
            k >>= 1
            if k:
                base = self._full_mul(base, base)
        return self._new(acc, self.window)

    def __eq__(self, other):
        if isinstance(other, BivarLaurent):
            return (self - other).coeffs == {}
        if other == 0:
            return not self.coeffs
        return NotImplemented

    __hash__ = None

    def diff_S(self) -> BivarLaurent:
        w = self.window
        win = None if w is None else (w[0] - 1, w[1] - 1, w[2], w[3])
        return self._new({(i - 1, j): c * i for (i, j), c in self.coeffs.items() if i}, win)

    def diff_T(self) -> BivarLaurent:
        w = self.window
        win = None if w is None else (w[0], w[1], w[2] - 1, w[3] - 1)
        return self._new({(i, j - 1): c * j for (i, j), c in self.coeffs.items() if j}, win)

    def map_coeffs(self, fn: Callable) -> BivarLaurent:
        return self._new({k: fn(c) for k, c in self.coeffs.items()}, self.window)

    def __repr__(self):
        from lcft.literal import format_bivar
        return f"BivarLaurent({format_bivar(self)})"

    def __str__(self):
        from lcft.literal import format_bivar
        return format_bivar(self)


class BivarRing:
    """Ring object for :class:`BivarLaurent` values over ``base`` in a window."""

    def __init__(self, base, window=None):
        self.base = base
        self.window = window
        self.characteristic = base.characteristic

    @property
    def zero(self) -> BivarLaurent:
        return BivarLaurent(self.base, {}, self.window)

    @property
    def one(self) -> BivarLaurent:
        return BivarLaurent(self.base, {(0, 0): self.base.one}, self.window)

    def from_int(self, k: int) -> BivarLaurent:
        return BivarLaurent(self.base, {(0, 0): self.base.from_int(k)}, self.window)

    def monomial(self, c, i: int, j: int) -> BivarLaurent:
        return BivarLaurent(self.base, {(i, j): c}, self.window)

    def __repr__(self):
        return f"BivarRing({self.base!r}, window={self.window})"
