"""Extremal projectors for the two commuting sl(2) copies and the projected generators.

The projector of a triple (X, Y, H) acts on a weight vector ``p`` of H-weight
``h`` as::

    p + sum_{j>=1} (-1)^j / j! / ((h+2)(h+3)...(h+j+1)) * Y^j X^j p

which is a finite sum because X is locally nilpotent on polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .poly import Polynomial, TriDegree, linear_combination
from .realizations import (
    LABELS,
    Label,
    Sl2Triple,
    build_catalog,
)
from .weyl import WeylOperator, bigrade


class SingularWeight(ArithmeticError):
    """A denominator ``h + i`` of the projector series vanished on some component."""

    def __init__(self, triple: str, degree: TriDegree, h: Fraction, j: int):
        super().__init__(
            f"{triple}-projector singular on component {degree}: weight h={h}, "
            f"factor h+{j + 1} = 0 at series order j={j}"
        )
        self.triple = triple
        self.degree = degree
        self.h = h
        self.j = j


class DomainError(ValueError):
    """Input to a projected generator is not in ker(D_s, L)."""


def extremal_apply(t: Sl2Triple, p: Polynomial) -> Polynomial:
    pieces = []
    for d, comp in p.tri_components().items():
        h = t.weight(d)
        pieces.append((1, comp))
        xj = comp
        denom = Fraction(1)
        j = 0
        while True:
            j += 1
            xj = t.X.apply(xj)
            if xj.is_zero():
                break
            factor = h + j + 1
            if factor == 0:
                raise SingularWeight(t.name, d, h, j)
            denom *= factor * j
            term = xj
            for _ in range(j):
                term = t.Y.apply(term)
            sign = -1 if j % 2 else 1
            pieces.append((Fraction(sign) / denom, term))
    return linear_combination(p.m, pieces)


class ProjectorContext:
    """The D_s- and L-triples in dimension m, plus the so(4) projector built from them."""

    def __init__(self, m: int):
        self.m = m
        self.catalog = build_catalog(m)
        self.ds = self.catalog.ds_triple
        self.l = self.catalog.l_triple

    def pi_ds(self, p: Polynomial) -> Polynomial:
        try:
            return extremal_apply(self.ds, p)
        except SingularWeight as exc:  # denominators are <= -k-2m+1 on (x,y)-degree k
            raise RuntimeError(f"D_s projector hit a pole, which is impossible: {exc}") from exc

    def pi_l(self, p: Polynomial) -> Polynomial:
        return extremal_apply(self.l, p)

    def pi_so4(self, p: Polynomial, order: str = "ds-l") -> Polynomial:
        """``pi_Ds pi_L p`` (L-projector first) or, with order="l-ds", ``pi_L pi_Ds p``."""
        if order == "ds-l":
            return self.pi_ds(self.pi_l(p))
        if order == "l-ds":
            return self.pi_l(self.pi_ds(p))
        raise ValueError(f"unknown order {order!r}")

    def in_kernel(self, p: Polynomial) -> bool:
        return self.ds.X.apply(p).is_zero() and self.l.X.apply(p).is_zero()

    def certify(self, p: Polynomial) -> Dict[str, bool]:
        return {
            "ds_image_zero": self.ds.X.apply(p).is_zero(),
            "l_image_zero": self.l.X.apply(p).is_zero(),
        }


def pi_so4(ctx: ProjectorContext, p: Polynomial) -> Polynomial:
    return ctx.pi_so4(p)


@dataclass
class LabeledGenerator:
    """Projected generator ``p -> pi_so4(Q p)`` on ker(D_s, L)."""

    label: Label
    color: str
    raw: WeylOperator
    ctx: ProjectorContext

    def __post_init__(self):
        if bigrade(self.raw) != self.label:
            raise ValueError(f"operator label {bigrade(self.raw)} does not match {self.label}")

    @property
    def name(self) -> str:
        return f"P({self.label[0]},{self.label[1]})"

    def apply(self, p: Polynomial, check_domain: bool = True) -> Polynomial:
        if check_domain and not self.ctx.in_kernel(p):
            raise DomainError(f"{self.name} acts on ker(D_s, L) only")
        return self.ctx.pi_so4(self.raw.apply(p))

    __call__ = apply


def generator(ctx: ProjectorContext, label: Label) -> LabeledGenerator:
    entry = ctx.catalog.q[tuple(label)]
    return LabeledGenerator(entry.label, entry.color, entry.op, ctx)


def generators(ctx: ProjectorContext, color: Optional[str] = None) -> List[LabeledGenerator]:
    gens = [generator(ctx, lab) for lab in LABELS]
    if color is not None:
        gens = [g for g in gens if g.color == color]
    return gens


def P_apply(g: LabeledGenerator, p: Polynomial) -> Polynomial:
    return g.apply(p)


def apply_word(ctx: ProjectorContext, word: Sequence[Label], p: Polynomial) -> Polynomial:
    """Apply ``P_{w_1} P_{w_2} ... P_{w_n}`` to p (rightmost letter first)."""
    for lab in reversed(list(word)):
        p = generator(ctx, lab).apply(p, check_domain=False)
        if p.is_zero():
            break
    return p
