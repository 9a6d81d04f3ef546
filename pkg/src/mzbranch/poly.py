"""Sparse exact polynomials in three vector variables (z; x, y) of R^m.

A monomial is a flat tuple of ``3m`` exponents laid out as
``(z_1..z_m, x_1..x_m, y_1..y_m)``. Coefficients are ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Tuple

Monomial = Tuple[int, ...]

VARS = ("z", "x", "y")
POLY_SCHEMA = "poly-v1"


class DimensionError(ValueError):
    """Operands live in different ambient dimensions m."""


class TriDegree(NamedTuple):
    """Total degrees in z, x and y."""

    a: int
    b: int
    c: int

    def valid(self) -> bool:
        return self.a >= 0 and self.b >= 0 and self.c >= 0

    def shift(self, da: int, db: int, dc: int) -> "TriDegree":
        return TriDegree(self.a + da, self.b + db, self.c + dc)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    num, sep, den = text.strip().partition("/")
    if sep:
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def format_rational(q: Fraction) -> str:
    """Always ``p/q`` so that serialized bytes do not depend on the value."""
    return f"{q.numerator}/{q.denominator}"


def monomial(m: int, z=None, x=None, y=None) -> Monomial:
    parts = []
    for seq in (z, x, y):
        seq = tuple(seq) if seq is not None else (0,) * m
        if len(seq) != m:
            raise DimensionError(f"exponent sequence {seq} does not have length {m}")
        if any(e < 0 for e in seq):
            raise ValueError(f"negative exponent in {seq}")
        parts.extend(seq)
    return tuple(parts)


def split(mono: Monomial, m: int) -> Tuple[Monomial, Monomial, Monomial]:
    return mono[:m], mono[m:2 * m], mono[2 * m:]


def tri_degree(mono: Monomial, m: int) -> TriDegree:
    return TriDegree(sum(mono[:m]), sum(mono[m:2 * m]), sum(mono[2 * m:]))


def monomial_key(mono: Monomial):
    """Graded order: lower total degree first, then lexicographically descending."""
    return (sum(mono), tuple(-e for e in mono))


def compositions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Exponent vectors of total ``n`` in descending lexicographic order."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def component_basis(m: int, d) -> List[Monomial]:
    """All monomials of tri-degree ``d``, z-exponents varying slowest."""
    if m < 1:
        raise ValueError("m must be positive")
    d = TriDegree(*d)
    if not d.valid():
        return []
    return [
        zs + xs + ys
        for zs, xs, ys in product(
            compositions(d.a, m), compositions(d.b, m), compositions(d.c, m)
        )
    ]


def component_dim(m: int, d) -> int:
    d = TriDegree(*d)
    if not d.valid():
        return 0
    return comb(d.a + m - 1, d.a) * comb(d.b + m - 1, d.b) * comb(d.c + m - 1, d.c)


class Polynomial:
    """Immutable sparse polynomial with rational coefficients and no stored zeros."""

    __slots__ = ("m", "terms", "_hash")

    def __init__(self, m: int, terms: Mapping[Monomial, object] | None = None):
        self.m = m
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            n = 3 * m
            for mono, c in terms.items():
                if len(mono) != n:
                    raise DimensionError(f"monomial {mono} does not match m={m}")
                c = as_fraction(c)
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, m: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.m = m
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, m: int) -> "Polynomial":
        return cls._raw(m, {})

    @classmethod
    def one(cls, m: int) -> "Polynomial":
        return cls.constant(m, 1)

    @classmethod
    def constant(cls, m: int, c) -> "Polynomial":
        return cls(m, {(0,) * (3 * m): c})

    @classmethod
    def var(cls, m: int, name: str, i: int) -> "Polynomial":
        """The coordinate ``name_i`` (1-based), ``name`` one of z, x, y."""
        if not 1 <= i <= m:
            raise IndexError(f"index {i} out of range 1..{m}")
        e = [0] * (3 * m)
        e[VARS.index(name) * m + i - 1] = 1
        return cls._raw(m, {tuple(e): Fraction(1)})

    @classmethod
    def from_monomial(cls, m: int, mono: Monomial, c=1) -> "Polynomial":
        return cls(m, {mono: c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.m, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: "Polynomial") -> None:
        if self.m != other.m:
            raise DimensionError(f"dimension mismatch: m={self.m} vs m={other.m}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.m, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial._raw(self.m, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = as_fraction(c)
        if not c:
            return Polynomial.zero(self.m)
        return Polynomial._raw(self.m, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Polynomial._raw(self.m, out)

    def __rmul__(self, other) -> "Polynomial":
        return self * other

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a nonnegative integer")
        result = Polynomial.one(self.m)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def tri_components(self) -> Dict[TriDegree, "Polynomial"]:
        m = self.m
        parts: Dict[TriDegree, Dict[Monomial, Fraction]] = {}
        for mono, c in self.terms.items():
            parts.setdefault(tri_degree(mono, m), {})[mono] = c
        return {d: Polynomial._raw(m, parts[d]) for d in sorted(parts)}

    def tri_degrees(self) -> List[TriDegree]:
        return sorted({tri_degree(mono, self.m) for mono in self.terms})

    def is_tri_homogeneous(self) -> bool:
        return len(self.tri_degrees()) <= 1

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: monomial_key(kv[0]))

    def __repr__(self) -> str:
        return f"Polynomial(m={self.m}, {self})"

    def __str__(self) -> str:
        return to_text(self)

    def to_json(self) -> dict:
        return poly_to_json(self)


def monomial_text(mono: Monomial, m: int) -> str:
    factors = []
    for v, name in enumerate(VARS):
        for i in range(m):
            e = mono[v * m + i]
            if e == 1:
                factors.append(f"{name}_{i + 1}")
            elif e > 1:
                factors.append(f"{name}_{i + 1}^{e}")
    return "*".join(factors)


def to_text(p: Polynomial) -> str:
    """Readable form that is also valid operator-DSL input (multiplication operators)."""
    if not p.terms:
        return "0"
    pieces = []
    for mono, c in p.sorted_terms():
        body = monomial_text(mono, p.m)
        mag = abs(c)
        if not body:
            text = format_rational(mag) if mag.denominator != 1 else str(mag.numerator)
        elif mag == 1:
            text = body
        else:
            num = str(mag.numerator) if mag.denominator == 1 else format_rational(mag)
            text = f"{num}*{body}"
        pieces.append(("-" if c < 0 else "+", text))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def poly_to_json(p: Polynomial) -> dict:
    m = p.m
    records = []
    for mono, c in p.sorted_terms():
        zs, xs, ys = split(mono, m)
        records.append({"z": list(zs), "x": list(xs), "y": list(ys), "coeff": format_rational(c)})
    return {"schema": POLY_SCHEMA, "m": m, "terms": records}


def poly_from_json(obj: dict) -> Polynomial:
    if obj.get("schema") != POLY_SCHEMA:
        raise ValueError(f"expected schema {POLY_SCHEMA!r}, got {obj.get('schema')!r}")
    m = int(obj["m"])
    terms: Dict[Monomial, Fraction] = {}
    for rec in obj["terms"]:
        mono = monomial(m, rec["z"], rec["x"], rec["y"])
        if mono in terms:
            raise ValueError(f"duplicate monomial {mono} in serialized polynomial")
        terms[mono] = parse_rational(rec["coeff"])
    return Polynomial(m, terms)


def linear_combination(m: int, pairs: Iterable[Tuple[object, Polynomial]]) -> Polynomial:
    """``sum c * p`` computed on integer numerators over one common denominator."""
    scaled = []
    common = 1
    for c, p in pairs:
        c = as_fraction(c)
        if not c or not p.terms:
            continue
        pden = 1
        for v in p.terms.values():
            pden = lcm(pden, v.denominator)
        den = c.denominator * pden
        scaled.append((c.numerator, pden, den, p))
        common = lcm(common, den)
    out: Dict[Monomial, int] = {}
    for num, pden, den, p in scaled:
        factor = num * (common // den)
        for mono, v in p.terms.items():
            out[mono] = out.get(mono, 0) + factor * v.numerator * (pden // v.denominator)
    return Polynomial._raw(m, {k: Fraction(v, common) for k, v in out.items() if v})
