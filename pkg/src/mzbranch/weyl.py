"""Normal-ordered differential operators with polynomial coefficients.

Every term is ``coeff * u^mul * d^der``: all multiplication operators stand to
the left of all derivatives. Exponent tuples use the same ``(z, x, y)`` layout
as :mod:`mzbranch.poly`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, lcm, perm
from typing import Dict, List, Mapping, Optional, Tuple

from .poly import (
    VARS,
    DimensionError,
    Monomial,
    Polynomial,
    as_fraction,
    format_rational,
    monomial,
    monomial_key,
    parse_rational,
    split,
)

WEYL_SCHEMA = "weyl-v1"

TermKey = Tuple[Monomial, Monomial]


def _accumulate(out: Dict, key, c) -> None:
    s = out.get(key, 0) + c
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class WeylOperator:
    """Canonical element of the Weyl algebra on the 3m coordinates."""

    __slots__ = ("m", "terms", "_compiled", "_hash")

    def __init__(self, m: int, terms: Mapping[TermKey, object] | None = None):
        self.m = m
        n = 3 * m
        clean: Dict[TermKey, Fraction] = {}
        for (mul, der), c in (terms or {}).items():
            if len(mul) != n or len(der) != n:
                raise DimensionError(f"term exponents do not match m={m}")
            c = as_fraction(c)
            if c:
                clean[(tuple(mul), tuple(der))] = c
        self.terms = clean
        self._compiled = None
        self._hash = None

    @classmethod
    def _raw(cls, m: int, terms: Dict[TermKey, Fraction]) -> "WeylOperator":
        op = cls.__new__(cls)
        op.m = m
        op.terms = terms
        op._compiled = None
        op._hash = None
        return op

    # constructors

    @classmethod
    def zero(cls, m: int) -> "WeylOperator":
        return cls._raw(m, {})

    @classmethod
    def scalar(cls, m: int, c) -> "WeylOperator":
        zero = (0,) * (3 * m)
        return cls(m, {(zero, zero): c})

    @classmethod
    def identity(cls, m: int) -> "WeylOperator":
        return cls.scalar(m, 1)

    @classmethod
    def variable(cls, m: int, name: str, i: int) -> "WeylOperator":
        """Multiplication by ``name_i``."""
        p = Polynomial.var(m, name, i)
        (mono,) = p.terms
        return cls._raw(m, {(mono, (0,) * (3 * m)): Fraction(1)})

    @classmethod
    def derivative(cls, m: int, name: str, i: int) -> "WeylOperator":
        """The partial derivative with respect to ``name_i``."""
        p = Polynomial.var(m, name, i)
        (mono,) = p.terms
        return cls._raw(m, {((0,) * (3 * m), mono): Fraction(1)})

    @classmethod
    def multiplication(cls, p: Polynomial) -> "WeylOperator":
        zero = (0,) * (3 * p.m)
        return cls._raw(p.m, {(mono, zero): c for mono, c in p.terms.items()})

    # basic protocol

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylOperator):
            return self.m == other.m and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == WeylOperator.scalar(self.m, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.m, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "WeylOperator":
        if isinstance(other, WeylOperator):
            if other.m != self.m:
                raise DimensionError(f"dimension mismatch: m={self.m} vs m={other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return WeylOperator.scalar(self.m, other)
        raise TypeError(f"cannot combine WeylOperator with {type(other).__name__}")

    def __add__(self, other) -> "WeylOperator":
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(out, k, c)
        return WeylOperator._raw(self.m, out)

    __radd__ = __add__

    def __neg__(self) -> "WeylOperator":
        return WeylOperator._raw(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "WeylOperator":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "WeylOperator":
        return self._coerce(other) - self

    def scale(self, c) -> "WeylOperator":
        c = as_fraction(c)
        if not c:
            return WeylOperator.zero(self.m)
        return WeylOperator._raw(self.m, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Polynomial):
            return self.apply(other)
        return compose(self, self._coerce(other))

    def __rmul__(self, other) -> "WeylOperator":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "WeylOperator":
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a nonnegative integer")
        result = WeylOperator.identity(self.m)
        for _ in range(n):
            result = compose(result, self)
        return result

    def __call__(self, p: Polynomial) -> Polynomial:
        return self.apply(p)

    # action on polynomials

    def _compile(self):
        """Integer numerators over one common denominator, for fast application."""
        if self._compiled is None:
            den = 1
            for c in self.terms.values():
                den = lcm(den, c.denominator)
            compiled = []
            for (mul, der), c in self.sorted_terms():
                dpos = [(i, d) for i, d in enumerate(der) if d]
                mpos = [(i, e) for i, e in enumerate(mul) if e]
                compiled.append((c.numerator * (den // c.denominator), dpos, mpos))
            self._compiled = (compiled, den)
        return self._compiled

    def _apply_numerators(self, items) -> Dict[Monomial, int]:
        compiled, _ = self._compile()
        out: Dict[Monomial, int] = {}
        for mono, pn in items:
            for c, dpos, mpos in compiled:
                coeff = c * pn
                e = list(mono)
                for i, d in dpos:
                    if e[i] < d:
                        break
                    coeff *= perm(e[i], d)
                    e[i] -= d
                else:
                    for i, k in mpos:
                        e[i] += k
                    key = tuple(e)
                    out[key] = out.get(key, 0) + coeff
        return out

    def apply_monomial(self, mono: Monomial) -> Dict[Monomial, Fraction]:
        den = self._compile()[1]
        raw = self._apply_numerators([(mono, 1)])
        return {k: Fraction(v, den) for k, v in raw.items() if v}

    def apply(self, p: Polynomial) -> Polynomial:
        if p.m != self.m:
            raise DimensionError(f"dimension mismatch: m={self.m} vs m={p.m}")
        pden = 1
        for c in p.terms.values():
            pden = lcm(pden, c.denominator)
        items = [(mono, c.numerator * (pden // c.denominator)) for mono, c in p.terms.items()]
        raw = self._apply_numerators(items)
        den = pden * self._compile()[1]
        return Polynomial._raw(self.m, {k: Fraction(v, den) for k, v in raw.items() if v})

    # grading

    def term_shift(self, key: TermKey) -> Tuple[int, int, int]:
        mul, der = key
        m = self.m
        return tuple(
            sum(mul[v * m:(v + 1) * m]) - sum(der[v * m:(v + 1) * m]) for v in range(3)
        )

    def shifts(self) -> List[Tuple[int, int, int]]:
        return sorted({self.term_shift(k) for k in self.terms})

    def shift(self) -> Optional[Tuple[int, int, int]]:
        """Common tri-degree shift ``(dz, dx, dy)`` of all terms, if any."""
        s = self.shifts()
        return s[0] if len(s) == 1 else None

    def bigrade(self) -> Optional[Tuple[int, int]]:
        return bigrade(self)

    def sorted_terms(self) -> List[Tuple[TermKey, Fraction]]:
        return sorted(
            self.terms.items(), key=lambda kv: (monomial_key(kv[0][0] + kv[0][1]), kv[0])
        )

    def __repr__(self) -> str:
        return f"WeylOperator(m={self.m}, {to_dsl(self)})"

    def __str__(self) -> str:
        return to_dsl(self)

    def to_json(self) -> dict:
        return weyl_to_json(self)


def _reorder(der: Monomial, mul: Monomial):
    """Expand ``d^der u^mul`` into normal-ordered pieces ``(coeff, mul', der')``."""
    active = [i for i in range(len(der)) if der[i] and mul[i]]
    if not active:
        return [(1, mul, der)]
    options = []
    for i in active:
        d, a = der[i], mul[i]
        options.append([(comb(d, k) * perm(a, k), k) for k in range(min(a, d) + 1)])
    pieces = []
    for choice in product(*options):
        coeff = 1
        new_mul = list(mul)
        new_der = list(der)
        for i, (c, k) in zip(active, choice):
            coeff *= c
            new_mul[i] -= k
            new_der[i] -= k
        pieces.append((coeff, tuple(new_mul), tuple(new_der)))
    return pieces


def compose(A: WeylOperator, B: WeylOperator) -> WeylOperator:
    """Normal-ordered product ``A o B``."""
    if A.m != B.m:
        raise DimensionError(f"dimension mismatch: m={A.m} vs m={B.m}")
    out: Dict[TermKey, Fraction] = {}
    for (amul, ader), ca in A.terms.items():
        for (bmul, bder), cb in B.terms.items():
            cab = ca * cb
            for k, mul, der in _reorder(ader, bmul):
                key = (
                    tuple(x + y for x, y in zip(amul, mul)),
                    tuple(x + y for x, y in zip(der, bder)),
                )
                _accumulate(out, key, cab * k)
    return WeylOperator._raw(A.m, out)


def commutator(A: WeylOperator, B: WeylOperator) -> WeylOperator:
    return compose(A, B) - compose(B, A)


def apply(A: WeylOperator, p: Polynomial) -> Polynomial:
    return A.apply(p)


def bigrade(A: WeylOperator) -> Optional[Tuple[int, int]]:
    """Label ``(lam, mu)`` with lam = dx - dy - dz and mu = 2(dx + dy).

    Returns None when the terms do not share a single label (the zero
    operator has no label either).
    """
    labels = set()
    for key in A.terms:
        dz, dx, dy = A.term_shift(key)
        labels.add((dx - dy - dz, 2 * (dx + dy)))
        if len(labels) > 1:
            return None
    return labels.pop() if labels else None


def weight_of_degree(d) -> int:
    """The lam-weight ``deg x - deg y - deg z`` of a tri-degree ``(a, b, c)``."""
    a, b, c = d
    return b - c - a


# text and JSON forms


def _factor_text(exps: Monomial, m: int, prefix: str) -> List[str]:
    out = []
    for v, name in enumerate(VARS):
        for i in range(m):
            e = exps[v * m + i]
            if e == 1:
                out.append(f"{prefix}{name}_{i + 1}")
            elif e > 1:
                out.append(f"{prefix}{name}_{i + 1}^{e}")
    return out


def to_dsl(A: WeylOperator) -> str:
    """Print in operator-DSL syntax; re-parsing gives back an equal operator."""
    if not A.terms:
        return "0"
    m = A.m
    pieces = []
    for (mul, der), c in A.sorted_terms():
        factors = _factor_text(mul, m, "") + _factor_text(der, m, "d")
        mag = abs(c)
        num = str(mag.numerator) if mag.denominator == 1 else format_rational(mag)
        if not factors:
            text = num
        elif mag == 1:
            text = "*".join(factors)
        else:
            text = "*".join([num] + factors)
        pieces.append(("-" if c < 0 else "+", text))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def weyl_to_json(A: WeylOperator) -> dict:
    m = A.m
    records = []
    for (mul, der), c in A.sorted_terms():
        mz, mx, my = split(mul, m)
        dz, dx, dy = split(der, m)
        records.append(
            {
                "mul": {"z": list(mz), "x": list(mx), "y": list(my)},
                "der": {"z": list(dz), "x": list(dx), "y": list(dy)},
                "coeff": format_rational(c),
            }
        )
    return {"schema": WEYL_SCHEMA, "m": m, "terms": records}


def weyl_from_json(obj: dict) -> WeylOperator:
    if obj.get("schema") != WEYL_SCHEMA:
        raise ValueError(f"expected schema {WEYL_SCHEMA!r}, got {obj.get('schema')!r}")
    m = int(obj["m"])
    terms: Dict[TermKey, Fraction] = {}
    for rec in obj["terms"]:
        mul = monomial(m, rec["mul"]["z"], rec["mul"]["x"], rec["mul"]["y"])
        der = monomial(m, rec["der"]["z"], rec["der"]["x"], rec["der"]["y"])
        if (mul, der) in terms:
            raise ValueError("duplicate term in serialized operator")
        terms[(mul, der)] = parse_rational(rec["coeff"])
    return WeylOperator(m, terms)
