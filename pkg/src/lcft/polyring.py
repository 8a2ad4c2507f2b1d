"""Quotient rings R[x]/(m(x)) for a monic m over an arbitrary coefficient ring.

Used to build towers of extensions symbolically: each level is a quotient
ring over the previous one, and elements are coordinate vectors in the
power basis 1, x, ..., x^{d-1}.
"""

from __future__ import annotations

from typing import Sequence


class QuotientRing:
    def __init__(self, base, modulus: Sequence, name: str = "x"):
        """``modulus`` lists coefficients low to high and must be monic."""
        mod = list(modulus)
        if len(mod) < 2:
            raise ValueError("modulus must have degree >= 1")
        if not (mod[-1] == 1 or mod[-1] == base.one):
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = mod
        self.degree = len(mod) - 1
        self.name = name
        self.characteristic = base.characteristic
        # x^d = -sum_{i<d} m_i x^i
        self._tail = [-c for c in mod[:-1]]

    @property
    def zero(self) -> QElem:
        return QElem(self, [self.base.zero] * self.degree)

    @property
    def one(self) -> QElem:
        return self.embed(self.base.one)

    @property
    def gen(self) -> QElem:
        if self.degree == 1:
            return QElem(self, [self._tail[0]])
        c = [self.base.zero] * self.degree
        c[1] = self.base.one
        return QElem(self, c)

    def embed(self, a) -> QElem:
        c = [self.base.zero] * self.degree
        c[0] = self.base.zero + a
        return QElem(self, c)

    def from_int(self, k: int) -> QElem:
        return self.embed(self.base.from_int(k))

    def int_inverse(self, k: int):
        return self.base.int_inverse(k)

    def __call__(self, x) -> QElem:
        if isinstance(x, QElem) and x.ring is self:
            return x
        if isinstance(x, (list, tuple)):
            return self.reduce(list(x))
        return self.embed(x)

    def reduce(self, poly: list) -> QElem:
        """Reduce a coefficient list (low to high, any length) mod the modulus."""
        d = self.degree
        poly = list(poly)
        for k in range(len(poly) - 1, d - 1, -1):
            c = poly[k]
            if not c:
                continue
            for i, t in enumerate(self._tail):
                poly[k - d + i] = poly[k - d + i] + c * t
        poly = poly[:d] + [self.base.zero] * max(0, d - len(poly))
        return QElem(self, poly)

    def evaluate(self, coeffs: Sequence, at: QElem) -> QElem:
        """Horner evaluation of a polynomial with base coefficients at ``at``."""
        acc = self.zero
        for c in reversed(list(coeffs)):
            acc = acc * at + c
        return acc

    def __repr__(self):
        return f"QuotientRing(deg {self.degree} over {self.base!r})"


class QElem:
    __slots__ = ("ring", "coords")

    def __init__(self, ring: QuotientRing, coords: list):
        self.ring = ring
        self.coords = coords

    def _lift(self, other):
        if isinstance(other, QElem) and other.ring is self.ring:
            return other
        # anything else is a scalar of some lower level
        return self.ring.embed(other)

    def __add__(self, other):
        o = self._lift(other)
        return QElem(self.ring, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return QElem(self.ring, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not (isinstance(other, QElem) and other.ring is self.ring):
            return QElem(self.ring, [a * other for a in self.coords])
        o = other
        d = self.ring.degree
        zero = self.ring.base.zero
        prod = [zero] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if not a:
                continue
            for j, b in enumerate(o.coords):
                if b:
                    prod[i + j] = prod[i + j] + a * b
        return self.ring.reduce(prod)

    def __rmul__(self, other):
        return QElem(self.ring, [other * a for a in self.coords])

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported in quotient rings")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __bool__(self):
        return any(bool(c) for c in self.coords)

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (ValueError, TypeError):
            return NotImplemented
        return all(a == b for a, b in zip(self.coords, o.coords))

    __hash__ = None

    def __repr__(self):
        return f"QElem({self})"

    def __str__(self):
        from lcft.literal import format_coeff
        name = self.ring.name
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            s = format_coeff(c)
            wrapped = f"({s})" if " " in s else s
            if i == 0:
                terms.append(wrapped)
            else:
                mono = name if i == 1 else f"{name}^{i}"
                terms.append(mono if s == "1" else f"{wrapped}*{mono}")
        return " + ".join(terms) if terms else "0"
