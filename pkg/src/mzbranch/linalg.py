"""Fraction-free sparse elimination over the integers.

Rows are dicts ``column -> int``. Every stored row is primitive (content 1)
with a positive leading entry, so the echelon form is deterministic for a
given row order and the derived nullspace basis is canonical: it is the basis
read off the reduced row echelon form, which depends only on the row space
and the column order.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

Row = Dict[int, int]


def integer_row(row: Mapping[int, object]) -> Row:
    """Clear denominators of a rational row and make it primitive."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    for k, v in row.items():
        iv = int(v * den) if den != 1 else int(v)
        if iv:
            out[k] = iv
    return _primitive(out)


def _primitive(row: Row) -> Row:
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incrementally maintained row echelon form."""

    def __init__(self):
        self.pivots: Dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        """Eliminate pivot columns from the front of ``row``; returns the remainder."""
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            a, b = piv[c], row[c]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in row.items()} if fa != 1 else dict(row)
            for k, v in piv.items():
                s = new.get(k, 0) - fb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            row = _primitive(new)
        return row

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a (possibly rational) row; True when it raised the rank."""
        row = self.reduce(integer_row(row))
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def contains(self, row: Mapping[int, object]) -> bool:
        return not self.reduce(integer_row(row))

    def nullspace(self, ncols: int) -> List[Dict[int, Fraction]]:
        """RREF nullspace basis: one vector per free column, that entry equal to 1."""
        pivcols = sorted(self.pivots, reverse=True)
        free = [c for c in range(ncols) if c not in self.pivots]
        basis = []
        for f in free:
            x: Dict[int, Fraction] = {f: Fraction(1)}
            for c in pivcols:
                if c > f:
                    continue
                row = self.pivots[c]
                s = 0
                for k, v in row.items():
                    if k != c:
                        xv = x.get(k)
                        if xv:
                            s += v * xv
                if s:
                    x[c] = -Fraction(s) / row[c]
            basis.append(x)
        return basis


def rank(rows: Iterable[Mapping[int, object]]) -> int:
    ech = Echelon()
    for row in _short_first(rows):
        ech.add(row)
    return ech.rank


def _short_first(rows: Iterable[Mapping[int, object]]) -> List[Row]:
    # processing sparse rows first limits fill-in; the echelon's row space is unaffected
    ints = [integer_row(r) for r in rows]
    ints = [r for r in ints if r]
    ints.sort(key=lambda r: (len(r), sorted(r.items())))
    return ints


def nullspace(ncols: int, rows: Iterable[Mapping[int, object]]) -> List[Dict[int, Fraction]]:
    ech = Echelon()
    for row in _short_first(rows):
        ech.add(row)
    return ech.nullspace(ncols)


class Indexer:
    """Stable mapping from hashable keys to consecutive column indices."""

    def __init__(self, keys: Iterable[Hashable] = ()):
        self.index: Dict[Hashable, int] = {}
        self.keys: List[Hashable] = []
        for k in keys:
            self(k)

    def __call__(self, key: Hashable) -> int:
        i = self.index.get(key)
        if i is None:
            i = len(self.keys)
            self.index[key] = i
            self.keys.append(key)
        return i

    def __len__(self) -> int:
        return len(self.keys)


def transpose_vectors(vectors: Sequence[Mapping[Hashable, object]]) -> Tuple[List[Row], Indexer]:
    """Rows of the matrix whose columns are ``vectors`` (sparse, keyed by coordinate)."""
    keys = Indexer()
    rows: Dict[int, Dict[int, object]] = {}
    for j, vec in enumerate(vectors):
        for key, v in vec.items():
            if v:
                rows.setdefault(keys(key), {})[j] = v
    return [rows[i] for i in sorted(rows)], keys


def solve_combination(
    vectors: Sequence[Mapping[Hashable, object]], target: Mapping[Hashable, object]
) -> Optional[List[Fraction]]:
    """Coefficients ``c`` with ``sum c_j vectors[j] == target``, or None.

    Free unknowns are set to zero, so the answer is deterministic even when
    the vectors are dependent.
    """
    n = len(vectors)
    augmented = list(vectors) + [target]
    rows, _ = transpose_vectors(augmented)
    ech = Echelon()
    for row in _short_first(rows):
        ech.add(row)
    if n in ech.pivots:
        return None
    x: Dict[int, Fraction] = {n: Fraction(-1)}
    for c in sorted(ech.pivots, reverse=True):
        row = ech.pivots[c]
        s = sum((v * x[k] for k, v in row.items() if k != c and k in x), Fraction(0))
        if s:
            x[c] = -s / row[c]
    return [x.get(j, Fraction(0)) for j in range(n)]


def vectors_rank(vectors: Sequence[Mapping[Hashable, object]]) -> int:
    rows, _ = transpose_vectors(vectors)
    return rank(rows)
