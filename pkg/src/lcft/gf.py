"""Exact arithmetic in F_q = F_p[w]/(modulus), the map x -> x^q - x, and the
twisted group algebra F_q[Gal(F_q/F_p)].

Elements are stored as integers encoding their polynomial-basis coefficient
vector in base p (digit i is the coefficient of w^i).  Multiplication goes
through log/antilog tables that are themselves built from schoolbook
polynomial multiplication modulo the defining polynomial.
"""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


# --- polynomials over F_p as coefficient lists, lowest degree first ---------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    n = len(modulus) - 1
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            # modulus is monic
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * modulus[i]) % p
    return prod[:n] + [0] * (n - len(prod[:n]))


def _poly_divides(d: Sequence[int], f: Sequence[int], p: int) -> bool:
    r = list(f)
    dd = _trim(list(d))
    inv_lead = pow(dd[-1], -1, p)
    while len(_trim(r)) >= len(dd):
        shift = len(r) - len(dd)
        c = r[-1] * inv_lead % p
        for i, x in enumerate(dd):
            r[shift + i] = (r[shift + i] - c * x) % p
        _trim(r)
    return not r


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= n/2."""
    n = len(modulus) - 1
    if n < 1 or modulus[-1] % p != 1:
        return False
    if n == 1:
        return True
    for deg in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _poly_divides(list(low) + [1], modulus, p):
                return False
    return True


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree n, ordering by sum c_i p^i.

    Gives w^2+w+1 (F_4), w^3+w+1 (F_8), w^2+1 (F_9), w^4+w+1 (F_16).
    """
    for code in range(p ** n):
        low = [(code // p ** i) % p for i in range(n)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise ValueError(f"no irreducible polynomial of degree {n} over F_{p}")


class FiniteField:
    """The field F_{p^n} with a fixed monic irreducible modulus.

    Use the cached factory :func:`GF` rather than instantiating directly, so
    that equal fields are the same object.
    """

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1:
            raise ValueError(f"modulus must have degree {n}")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        if p ** n > 2 ** 16:
            raise ValueError("fields with q > 2^16 are not supported")
        self.p = p
        self.n = n
        self.q = p ** n
        self.modulus = modulus
        self.characteristic = p
        self._build_tables()
        self._elems = [FieldElem(self, v) for v in range(self.q)]
        self.zero = self._elems[0]
        self.one = self._elems[1]

    # encoding helpers
    def _digits(self, v: int) -> list[int]:
        return [(v // self.p ** i) % self.p for i in range(self.n)]

    def _encode(self, digits: Iterable[int]) -> int:
        v = 0
        for i, d in enumerate(digits):
            v += (d % self.p) * self.p ** i
        return v

    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.q
        if p == 2:
            self._add = int.__xor__
            self._neg = list(range(q))
        elif n == 1:
            self._add = lambda a, b: (a + b) % p
            self._neg = [(-v) % p for v in range(q)]
        else:
            digits = [self._digits(v) for v in range(q)]
            self._neg = [self._encode((-d) % p for d in digits[v]) for v in range(q)]
            if q <= 256:
                table = [[self._encode(x + y for x, y in zip(digits[a], digits[b]))
                          for b in range(q)] for a in range(q)]
                self._add = lambda a, b: table[a][b]
            else:
                self._add = lambda a, b: self._encode(
                    x + y for x, y in zip(self._digits(a), self._digits(b)))
        # log / antilog tables from an explicit primitive element
        exp = log = None
        for g in range(1, q):
            gd = self._digits(g)
            powers = [1]
            cur = [1] + [0] * (n - 1)
            for _ in range(q - 2):
                cur = _poly_mulmod(cur, gd, self.modulus, p)
                v = self._encode(cur)
                if v == 1:
                    break
                powers.append(v)
            if len(powers) == q - 1:
                exp = powers
                log = [0] * q
                for k, v in enumerate(powers):
                    log[v] = k
                self.generator_value = g
                break
        if exp is None:  # pragma: no cover - impossible for a field
            raise RuntimeError("no primitive element found")
        self._exp = exp + exp
        self._log = log

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def __call__(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.field is not self:
                raise ValueError("element of a different field")
            return x
        if isinstance(x, Fraction):
            return self(x.numerator) * self(x.denominator).inverse()
        if isinstance(x, int):
            return self._elems[x % self.p]
        if isinstance(x, (list, tuple)):
            if len(x) > self.n:
                raise ValueError("too many coefficients")
            return self._elems[self._encode(int(c) for c in x)]
        raise TypeError(f"cannot convert {x!r} into F_{self.q}")

    def from_int(self, k: int) -> FieldElem:
        return self._elems[k % self.p]

    def int_inverse(self, k: int) -> FieldElem:
        if k % self.p == 0:
            raise ZeroDivisionError(f"{k} is not invertible in characteristic {self.p}")
        return self.from_int(k).inverse()

    @property
    def gen(self) -> FieldElem:
        """The class of w (for n = 1 this is the constant 0 residue of w - modulus)."""
        if self.n == 1:
            return self._elems[(-self.modulus[0]) % self.p]
        return self._elems[self.p]

    def elements(self) -> list[FieldElem]:
        return list(self._elems)

    def units(self) -> list[FieldElem]:
        return self._elems[1:]

    def element_from_code(self, v: int) -> FieldElem:
        return self._elems[v]

    def spec(self) -> str:
        """Field spec string ``p^n:c_n,...,c_0`` (highest degree first)."""
        return f"{self.p}^{self.n}:" + ",".join(str(c) for c in reversed(self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.spec()})"

    def __reduce__(self):
        return (GF, (self.p, self.n, self.modulus))


@functools.lru_cache(maxsize=None)
def _gf_cached(p: int, n: int, modulus: tuple[int, ...] | None) -> FiniteField:
    return FiniteField(p, n, modulus)


def GF(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Cached field factory; ``modulus`` is lowest-degree first."""
    if modulus is None:
        modulus = default_modulus(p, n) if is_prime(p) else None
    if modulus is not None:
        modulus = tuple(int(c) % p for c in modulus)
    return _gf_cached(p, n, modulus)


def GF_q(q: int) -> FiniteField:
    """The field with q elements, with the default modulus."""
    for p in range(2, q + 1):
        if is_prime(p):
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r == 1 and n >= 1:
                return GF(p, n)
            if n:
                break
    raise ValueError(f"{q} is not a prime power")


def parse_field_spec(text: str) -> FiniteField:
    """Parse ``"p^n:c_n,...,c_0"``, ``"p^n"`` or ``"p"``.

    Modulus coefficients are listed from the leading term down, so
    ``"2^3:1,0,1,1"`` is w^3 + w + 1.
    """
    text = text.strip()
    head, _, tail = text.partition(":")
    if "^" in head:
        p_s, n_s = head.split("^", 1)
        p, n = int(p_s), int(n_s)
    else:
        p, n = int(head), 1
    if tail.strip():
        coeffs = [int(c) for c in tail.split(",")]
        if len(coeffs) != n + 1:
            raise ValueError(f"expected {n + 1} modulus coefficients, got {len(coeffs)}")
        return GF(p, n, tuple(reversed(coeffs)))
    return GF(p, n)


class FieldElem:
    """An element of a :class:`FiniteField`; immutable and interned."""

    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field._digits(self.v))

    def _other(self, other):
        if type(other) is FieldElem:
            if other.field is not self.field:
                raise ValueError("operands lie in different fields")
            return other
        if isinstance(other, int):
            return self.field._elems[other % self.field.p]
        if isinstance(other, Fraction):
            return self.field(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        return f._elems[f._add(self.v, o.v)]

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return f._elems[f._neg[self.v]]

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        return f._elems[f._add(self.v, f._neg[o.v])]

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.field
        return f._elems[f._mul(self.v, o.v)]

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.v == 0:
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        return f._elems[f._exp[(f.q - 1 - f._log[self.v]) % (f.q - 1)]]

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        f = self.field
        if self.v == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return f.one if k == 0 else f.zero
        return f._elems[f._exp[(f._log[self.v] * k) % (f.q - 1)]]

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.v == o.v

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.v))

    def __bool__(self):
        return self.v != 0

    def frobenius(self, times: int = 1) -> FieldElem:
        return frobenius(self, self.field) if times == 1 else frobenius_iter(self, times)

    def nth_root_p(self, e: int = 1) -> FieldElem:
        """The unique y with y^(p^e) = self (F_q is perfect)."""
        f = self.field
        return self ** (f.p ** ((-e) % f.n))

    def __repr__(self):
        return f"FieldElem({self})"

    def __str__(self):
        f = self.field
        if f.n == 1:
            return str(self.v)
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if i == 0 else ("w" if i == 1 else f"w^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"


def frobenius(x: FieldElem, field: FiniteField | None = None) -> FieldElem:
    """x^p via p - 1 polynomial-basis multiplications reduced by the modulus."""
    field = field or x.field
    acc = [1] + [0] * (field.n - 1)
    xd = field._digits(x.v)
    for _ in range(field.p):
        acc = _poly_mulmod(acc, xd, field.modulus, field.p)
    return field._elems[field._encode(acc)]


def frobenius_iter(x: FieldElem, times: int) -> FieldElem:
    for _ in range(times % x.field.n if x.field.n else times):
        x = frobenius(x)
    return x


def solve_wp_q(a: FieldElem, q: int, search_field: FiniteField | None = None) -> set[FieldElem]:
    """All x in the search field with x^q - x = a, by exhaustive search."""
    search_field = search_field or a.field
    if a.field is not search_field:
        raise ValueError("a must be an element of the search field")
    if search_field.q > 2 ** 16:
        raise ValueError("search field too large for exhaustive search")
    return {x for x in search_field.elements() if x ** q - x == a}


class TwistedElem:
    """An element sum_e c_e sigma^e of F_q[Gal(F_q/F_p)], sigma the p-power map."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs: Mapping[int, FieldElem] | Sequence[FieldElem]):
        self.field = field
        if isinstance(coeffs, Mapping):
            slots = [field.zero] * field.n
            for e, c in coeffs.items():
                slots[e % field.n] = slots[e % field.n] + field(c)
        else:
            if len(coeffs) != field.n:
                raise ValueError(f"need exactly {field.n} slots")
            slots = [field(c) for c in coeffs]
        self.coeffs = tuple(slots)

    @classmethod
    def identity(cls, field: FiniteField) -> TwistedElem:
        return cls(field, {0: field.one})

    @classmethod
    def sigma(cls, field: FiniteField, e: int = 1, coeff: FieldElem | None = None) -> TwistedElem:
        return cls(field, {e: coeff if coeff is not None else field.one})

    def __add__(self, other: TwistedElem) -> TwistedElem:
        return TwistedElem(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: TwistedElem) -> TwistedElem:
        return twisted_mul(self, other, self.field)

    def act(self, x: FieldElem) -> FieldElem:
        """Action on F_q: (a sigma^e)(x) = a * x^(p^e)."""
        return sum((c * x ** (self.field.p ** e) for e, c in enumerate(self.coeffs)), self.field.zero)

    def __eq__(self, other):
        return isinstance(other, TwistedElem) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"({c})*s^{e}" for e, c in enumerate(self.coeffs) if c]
        return "TwistedElem(" + (" + ".join(terms) or "0") + ")"


def twisted_mul(A: TwistedElem, B: TwistedElem, field: FiniteField | None = None) -> TwistedElem:
    """(a s^e)(b s^f) = a * s^e(b) * s^(e+f mod n)."""
    field = field or A.field
    n = field.n
    out = [field.zero] * n
    for e, a in enumerate(A.coeffs):
        if not a:
            continue
        for f_, b in enumerate(B.coeffs):
            if b:
                out[(e + f_) % n] = out[(e + f_) % n] + a * frobenius_iter(b, e)
    return TwistedElem(field, out)


def fq_rank(vectors: Iterable[Mapping], field: FiniteField) -> int:
    """Rank over F_q of sparse vectors (mappings key -> FieldElem)."""
    pivots: dict = {}  # pivot key -> normalized row
    rank = 0
    for vec in vectors:
        row = {k: field(c) for k, c in vec.items() if c}
        while row:
            key = min(row, key=repr)
            if key in pivots:
                c = row[key]
                for k, v in pivots[key].items():
                    row[k] = row.get(k, field.zero) - c * v
                    if not row[k]:
                        del row[k]
            else:
                inv = row[key].inverse()
                pivots[key] = {k: v * inv for k, v in row.items()}
                rank += 1
                break
    return rank


def semilinear_rank(classes: Sequence[Mapping], field: FiniteField,
                    sigma: Callable[[Mapping], Mapping] | None = None) -> int:
    """F_q-dimension of the span of {sigma^e(c) : c in classes, 0 <= e < n}.

    ``sigma`` is the action of the p-power Frobenius on coordinate vectors;
    by default it raises every coordinate to the p-th power.  The classes
    generate a free F_q[Gal]-module of rank r exactly when this equals n*r.
    """
    if sigma is None:
        sigma = lambda vec: {k: frobenius(field(c)) for k, c in vec.items()}
    orbit = []
    for c in classes:
        vec = dict(c) if isinstance(c, Mapping) else dict(enumerate(c))
        for _ in range(field.n):
            orbit.append(vec)
            vec = sigma(vec)
    return fq_rank(orbit, field)
