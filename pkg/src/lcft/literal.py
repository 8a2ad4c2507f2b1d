"""Text I/O for series and coefficients.

Grammar (whitespace-insensitive)::

    literal := expr [ "(mod" VAR "^" INT { "," VAR "^" INT } ")" ]
    expr    := term { ("+" | "-") term }
    term    := ["-"] factor { ("*" | "/") factor }
    factor  := atom [ "^" ["-"] INT ]
    atom    := INT | NAME | "(" expr ")"

The name ``w`` denotes the generator of F_q; every other name is a series
variable.  With two variables the first one in the ``mod`` clause is the
outer variable, e.g. ``1 - 1*T^-1*That^1 (mod That^8, T^16)``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from lcft.gf import FieldElem, FiniteField
from lcft.series import QQ, BivarLaurent, Rationals, SeriesRing, TruncSeries


class LiteralError(ValueError):
    """Malformed literal."""


GEN = "w"
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_MOD = re.compile(r"\(\s*mod\s+([^)]*)\)\s*$")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif name is not None:
            tokens.append(("name", name))
        elif op.strip():
            if op not in "+-*/^(),":
                raise LiteralError(f"unexpected character {op!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


# polynomials: dict monomial-key -> Fraction; key = tuple(sorted((var, exp)))

def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            exps = dict(ka)
            for v, e in kb:
                exps[v] = exps.get(v, 0) + e
            key = tuple(sorted((v, e) for v, e in exps.items() if e))
            out[key] = out.get(key, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _padd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + sign * c
    return {k: c for k, c in out.items() if c}


def _ppow(a: dict, k: int) -> dict:
    if k < 0:
        if len(a) != 1:
            raise LiteralError("negative exponents apply only to monomials")
        (key, c), = a.items()
        return {tuple((v, e * k) for v, e in key): Fraction(1) / Fraction(c) ** (-k)}
    out = {(): Fraction(1)}
    for _ in range(k):
        out = _pmul(out, a)
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise LiteralError(f"expected {value or kind}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self) -> dict:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            acc = _padd(acc, self.term(), 1 if op == "+" else -1)
        return acc

    def term(self) -> dict:
        sign = 1
        while self.peek() in (("op", "-"), ("op", "+")):
            if self.take()[1] == "-":
                sign = -sign
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                acc = _pmul(acc, rhs)
            else:
                if list(rhs) != [()]:
                    raise LiteralError("division only by constants")
                acc = {k: c / rhs[()] for k, c in acc.items()}
        return {k: sign * c for k, c in acc.items()}

    def factor(self) -> dict:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            k = int(self.take("num")[1])
            base = _ppow(base, -k if neg else k)
        return base

    def atom(self) -> dict:
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return {(): Fraction(int(val))} if int(val) else {}
        if kind == "name":
            self.take()
            return {((val, 1),): Fraction(1)}
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise LiteralError(f"unexpected token {val!r}")


def parse_poly(text: str) -> dict:
    p = _Parser(_tokenize(text))
    if not p.toks:
        raise LiteralError("empty literal")
    out = p.expr()
    if p.i != len(p.toks):
        raise LiteralError(f"trailing input at {p.peek()[1]!r}")
    return out


def _split_mod(text: str) -> tuple[str, list[tuple[str, int]]]:
    m = _MOD.search(text)
    if not m:
        return text, []
    precs = []
    for part in m.group(1).split(","):
        part = part.strip()
        mm = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)\s*\^\s*(-?\d+)", part)
        if not mm:
            raise LiteralError(f"bad precision clause {part!r}")
        precs.append((mm.group(1), int(mm.group(2))))
    return text[:m.start()], precs


def _scalar(c: Fraction, gen_power: int, base):
    if isinstance(base, FiniteField):
        return base(c) * base.gen ** gen_power if gen_power else base(c)
    if gen_power:
        raise LiteralError("the generator w is only meaningful over F_q")
    if isinstance(base, Rationals):
        return Fraction(c)
    return base(c)


def parse_coeff(text: str, base):
    """Parse a scalar (integer, rational, or polynomial in w) into ``base``."""
    poly = parse_poly(text)
    acc = base.zero
    for key, c in poly.items():
        exps = dict(key)
        if set(exps) - {GEN}:
            raise LiteralError(f"unexpected variable in coefficient {text!r}")
        acc = acc + _scalar(c, exps.get(GEN, 0), base)
    return acc


def _variables(poly: dict) -> list[str]:
    seen = []
    for key in poly:
        for v, _ in key:
            if v != GEN and v not in seen:
                seen.append(v)
    return seen


def parse_series(text: str, base, prec: int | None = None, var: str | None = None,
                 inner_prec: int | None = None, inner_var: str | None = None) -> TruncSeries:
    """Parse a (possibly two-variable) series literal over ``base``."""
    body, mods = _split_mod(text)
    poly = parse_poly(body)
    names = _variables(poly)
    mod_prec = dict(mods)
    if mods:
        var = mods[0][0]
    elif var is None:
        if len(names) > 1 and "That" in names:
            var = "That"
        elif len(names) > 1:
            raise LiteralError("two variables need a (mod VAR^N) clause naming the outer one")
        else:
            var = names[0] if names else "T"
    others = [v for v in names + [m[0] for m in mods] if v != var]
    others = list(dict.fromkeys(others))
    if len(others) > 1:
        raise LiteralError(f"at most two variables supported, got {[var] + others}")
    if others:
        inner_var = others[0]
    outer_prec = mod_prec.get(var, prec)
    if outer_prec is None:
        raise LiteralError(f"no precision for {var}")
    if inner_var is None:
        coeffs: dict = {}
        for key, c in poly.items():
            exps = dict(key)
            e = exps.get(var, 0)
            coeffs[e] = coeffs.get(e, base.zero) + _scalar(c, exps.get(GEN, 0), base)
        return TruncSeries(base, coeffs, outer_prec, var)
    iprec = mod_prec.get(inner_var, inner_prec)
    if iprec is None:
        raise LiteralError(f"no precision for {inner_var}")
    ring = SeriesRing(base, inner_var, iprec)
    coeffs = {}
    for key, c in poly.items():
        exps = dict(key)
        e = exps.get(var, 0)
        mono = TruncSeries(base, {exps.get(inner_var, 0): _scalar(c, exps.get(GEN, 0), base)}, iprec, inner_var)
        coeffs[e] = coeffs[e] + mono if e in coeffs else mono
    return TruncSeries(ring, coeffs, outer_prec, var)


def parse_bivar(text: str, base, window=None) -> BivarLaurent:
    """Parse a Laurent polynomial in S and T."""
    poly = parse_poly(text)
    coeffs: dict = {}
    for key, c in poly.items():
        exps = dict(key)
        if set(exps) - {"S", "T", GEN}:
            raise LiteralError(f"only S, T (and w) allowed, got {sorted(exps)}")
        k = (exps.get("S", 0), exps.get("T", 0))
        v = _scalar(c, exps.get(GEN, 0), base)
        coeffs[k] = coeffs[k] + v if k in coeffs else v
    return BivarLaurent(base, coeffs, window)


# --- formatting -------------------------------------------------------------

def format_coeff(c) -> str:
    if isinstance(c, TruncSeries):
        return _series_body(c)
    return str(c)


def _is_one(c) -> bool:
    return not isinstance(c, TruncSeries) and c == 1


def _is_minus_one(c) -> bool:
    return isinstance(c, (Fraction, int)) and c == -1


def _mono(var: str, e: int) -> str:
    return var if e == 1 else f"{var}^{e}"


def _join(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def _term(c, mono: str) -> str:
    if not mono:
        s = format_coeff(c)
        return f"({s})" if isinstance(c, TruncSeries) and (" " in s) else s
    s = format_coeff(c)
    if _is_one(c) or s == "1":
        return mono
    if _is_minus_one(c) or s == "-1":
        return "-" + mono
    if isinstance(c, TruncSeries) or (" " in s) or (isinstance(c, FieldElem) and "w" in s and s != "w"):
        s = f"({s})"
    return f"{s}*{mono}"


def _series_body(f: TruncSeries) -> str:
    terms = []
    for e, c in f.items():
        terms.append(_term(c, "" if e == 0 else _mono(f.var, e)))
    return _join(terms)


def format_series(f: TruncSeries) -> str:
    clause = f"{f.var}^{f.prec}"
    inner = [c for c in f.coeffs.values() if isinstance(c, TruncSeries)]
    if inner:
        clause += f", {inner[0].var}^{min(c.prec for c in inner)}"
    elif isinstance(f.ring, SeriesRing):
        clause += f", {f.ring.var}^{f.ring.prec}"
    return f"{_series_body(f)} (mod {clause})"


def format_bivar(b: BivarLaurent) -> str:
    terms = []
    for (i, j), c in sorted(b.coeffs.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        parts = []
        if i:
            parts.append(_mono("S", i))
        if j:
            parts.append(_mono("T", j))
        terms.append(_term(c, "*".join(parts)))
    return _join(terms)


def format_field_value(c) -> str:
    return format_coeff(c)


__all__ = [
    "LiteralError", "parse_poly", "parse_coeff", "parse_series", "parse_bivar",
    "format_series", "format_bivar", "format_coeff", "QQ",
]
