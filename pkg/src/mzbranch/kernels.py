"""Exact kernels on tri-homogeneous polynomial components.

Joint nullspaces are computed blockwise: domain basis vectors that never
share an image coordinate are independent, so the matrix splits into
connected components, each eliminated separately. The resulting basis is the
same one the unsplit reduced echelon form would give.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .linalg import Echelon, Indexer, integer_row, nullspace
from .poly import (
    Polynomial,
    TriDegree,
    component_basis,
    linear_combination,
    monomial_key,
    poly_from_json,
    poly_to_json,
    tri_degree,
)
from .realizations import NEGATIVE, build_catalog, simplicial_operators
from .weyl import WeylOperator

PolyMap = Union[WeylOperator, Callable[[Polynomial], Polynomial]]


@dataclass
class OperatorMatrix:
    """Blocks ``target degree -> rows`` (rows follow the target basis, columns the source basis)."""

    source: TriDegree
    blocks: Dict[TriDegree, List[List[Fraction]]]


def operator_matrix(A: WeylOperator, src) -> OperatorMatrix:
    m = A.m
    src = TriDegree(*src)
    cols = component_basis(m, src)
    images = [A.apply_monomial(mono) for mono in cols]
    targets = sorted({tri_degree(t, m) for img in images for t in img})
    blocks = {}
    for d in targets:
        basis = component_basis(m, d)
        index = {mono: i for i, mono in enumerate(basis)}
        mat = [[Fraction(0)] * len(cols) for _ in basis]
        for j, img in enumerate(images):
            for mono, c in img.items():
                if mono in index:
                    mat[index[mono]][j] = c
        blocks[d] = mat
    return OperatorMatrix(src, blocks)


class Subspace:
    """A linear subspace given by an exact basis."""

    def __init__(self, m: int, basis: Sequence[Polynomial], ambient: Sequence = ()):
        self.m = m
        self.basis = list(basis)
        self.ambient = tuple(TriDegree(*d) for d in ambient)
        self._ech: Optional[Echelon] = None
        self._cols: Optional[Indexer] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    rank = dim

    def __len__(self) -> int:
        return len(self.basis)

    def _echelon(self):
        if self._ech is None:
            monos = sorted({mono for b in self.basis for mono in b.terms}, key=monomial_key)
            self._cols = Indexer(monos)
            self._ech = Echelon()
            for b in self.basis:
                self._ech.add(integer_row({self._cols.index[k]: c for k, c in b.terms.items()}))
            if self._ech.rank != len(self.basis):
                raise ValueError("subspace basis is linearly dependent")
        return self._ech, self._cols

    def check_independent(self) -> bool:
        try:
            self._echelon()
        except ValueError:
            return False
        return True

    def contains(self, p: Polynomial) -> bool:
        if p.is_zero():
            return True
        ech, cols = self._echelon()
        row = {}
        for mono, c in p.terms.items():
            i = cols.index.get(mono)
            if i is None:
                return False
            row[i] = c
        return ech.contains(integer_row(row))

    def __contains__(self, p: Polynomial) -> bool:
        return self.contains(p)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def equals(self, other: "Subspace") -> bool:
        """Set equality by mutual membership."""
        return self.is_subspace_of(other) and other.is_subspace_of(self)

    def intersection(self, other: "Subspace") -> "Subspace":
        from .linalg import transpose_vectors

        vecs = [b.terms for b in self.basis] + [(-b).terms for b in other.basis]
        rows, _ = transpose_vectors(vecs)
        null = nullspace(len(vecs), rows)
        out = []
        for x in null:
            out.append(
                linear_combination(self.m, ((x.get(j, 0), b) for j, b in enumerate(self.basis)))
            )
        basis = _independent(self.m, out)
        return Subspace(self.m, basis, self.ambient)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "ambient": [list(d) for d in self.ambient],
            "dim": self.dim,
            "basis": [poly_to_json(b) for b in self.basis],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Subspace":
        basis = [poly_from_json(b) for b in obj["basis"]]
        return cls(int(obj["m"]), basis, [tuple(d) for d in obj["ambient"]])

    def __repr__(self) -> str:
        return f"Subspace(m={self.m}, dim={self.dim}, ambient={[tuple(d) for d in self.ambient]})"


def _independent(m: int, polys: Iterable[Polynomial]) -> List[Polynomial]:
    """Greedy independent subsequence (order preserved)."""
    cols = Indexer()
    ech = Echelon()
    out = []
    for p in polys:
        if p.is_zero():
            continue
        row = integer_row({cols(k): c for k, c in p.terms.items()})
        if ech.add(row):
            out.append(p)
    return out


def span_rank(polys: Iterable[Polynomial]) -> int:
    cols = Indexer()
    ech = Echelon()
    for p in polys:
        if not p.is_zero():
            ech.add(integer_row({cols(k): c for k, c in p.terms.items()}))
    return ech.rank


def independent_subset(m: int, polys: Iterable[Polynomial]) -> List[Polynomial]:
    return _independent(m, polys)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if ri < rj:
                self.parent[rj] = ri
            else:
                self.parent[ri] = rj


def _domain_vectors(m: int, domain) -> Tuple[List, bool, Tuple[TriDegree, ...]]:
    if isinstance(domain, Subspace):
        return list(domain.basis), False, domain.ambient
    items = list(domain)
    if items and isinstance(items[0], Polynomial):
        ambient = tuple(sorted({d for p in items for d in p.tri_degrees()}))
        return items, False, ambient
    degrees = tuple(TriDegree(*d) for d in items)
    cols = [mono for d in degrees for mono in component_basis(m, d)]
    return cols, True, degrees


def joint_nullspace(ops: Sequence[PolyMap], domain, m: Optional[int] = None) -> Subspace:
    """Exact basis of the common kernel of ``ops`` on ``domain``.

    ``domain`` is a sequence of tri-degrees (their direct sum), a Subspace, or a
    list of polynomials spanning the domain (assumed independent).
    """
    if m is None:
        m = next((A.m for A in ops if isinstance(A, WeylOperator)), None)
        if m is None and isinstance(domain, Subspace):
            m = domain.m
        if m is None:
            raise ValueError("cannot infer m")
    vectors, monomial_domain, ambient = _domain_vectors(m, domain)
    n = len(vectors)
    rowkeys = Indexer()
    columns: List[Dict[int, Fraction]] = []
    for v in vectors:
        col: Dict[int, Fraction] = {}
        for k, A in enumerate(ops):
            if monomial_domain and isinstance(A, WeylOperator):
                img = A.apply_monomial(v)
            else:
                p = Polynomial.from_monomial(m, v) if monomial_domain else v
                img = (A.apply(p) if isinstance(A, WeylOperator) else A(p)).terms
            for mono, c in img.items():
                col[rowkeys((k, mono))] = c
        columns.append(col)

    uf = _UnionFind(n)
    first: Dict[int, int] = {}
    for j, col in enumerate(columns):
        for r in col:
            if r in first:
                uf.union(first[r], j)
            else:
                first[r] = j
    blocks: Dict[int, List[int]] = {}
    for j in range(n):
        blocks.setdefault(uf.find(j), []).append(j)

    null_vectors: List[Tuple[int, Dict[int, Fraction]]] = []
    for root in sorted(blocks):
        cols = blocks[root]
        local = {g: i for i, g in enumerate(cols)}
        rows: Dict[int, Dict[int, Fraction]] = {}
        for g in cols:
            for r, c in columns[g].items():
                rows.setdefault(r, {})[local[g]] = c
        for x in nullspace(len(cols), rows.values()):
            null_vectors.append((cols[_free_column(x)], {cols[i]: c for i, c in x.items()}))
    null_vectors.sort(key=lambda t: t[0])

    basis = []
    for _, x in null_vectors:
        if monomial_domain:
            basis.append(Polynomial(m, {vectors[j]: c for j, c in x.items()}))
        else:
            basis.append(linear_combination(m, ((c, vectors[j]) for j, c in sorted(x.items()))))
    return Subspace(m, basis, ambient)


def _free_column(x: Dict[int, Fraction]) -> int:
    # the RREF nullspace vector attached to free column f has x_f = 1 and no entries beyond f
    return max(x)


def howe_harmonics(m: int, d) -> Subspace:
    return joint_nullspace(list(build_catalog(m).g_minus.values()), [TriDegree(*d)], m)


def simplicial_harmonics(m: int, d) -> Subspace:
    return joint_nullspace(simplicial_operators(m), [TriDegree(*d)], m)


def z_harmonics(m: int, t: int) -> Subspace:
    return joint_nullspace([build_catalog(m).g_minus["lap(z)"]], [TriDegree(t, 0, 0)], m)


# dimension oracle


def weyl_dim_so(m: int, weight) -> int:
    """Dimension of the irreducible so(m)-module with the given highest weight.

    ``weight`` lists the leading entries; it is padded with zeros to rank m//2.
    """
    if m < 1:
        raise ValueError("m must be positive")
    r = m // 2
    w = [Fraction(v) for v in weight]
    if any(v < 0 for v in w) or any(w[i] < w[i + 1] for i in range(len(w) - 1)):
        raise ValueError(f"weight {tuple(weight)} is not dominant")
    if any(w[r:]):
        raise ValueError(f"weight {tuple(weight)} has more than {r} nonzero entries for so({m})")
    w = (w + [Fraction(0)] * r)[:r]
    if m % 2:
        rho = [Fraction(2 * (r - i) - 1, 2) for i in range(r)]
    else:
        rho = [Fraction(r - i - 1) for i in range(r)]
    l = [wi + ri for wi, ri in zip(w, rho)]
    num = Fraction(1)
    den = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            num *= (l[i] - l[j]) * (l[i] + l[j])
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j])
        if m % 2:
            num *= l[i]
            den *= rho[i]
    val = num / den
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral dimension {val}")
    return int(val)


def is_dominant(d) -> bool:
    a, b, c = d
    return a >= b >= c >= 0


# audits


def fischer_audit(m: int, max_k: int) -> List[dict]:
    """Check P_t(z) = sum_p |z|^{2p} H_{t-2p} for t = 0..max_k (dimensions and spanning rank)."""
    cat = build_catalog(m)
    r2 = cat.g_plus["norm2(z)"]
    harmonics = {s: z_harmonics(m, s) for s in range(max_k + 1)}
    rows = []
    for t in range(max_k + 1):
        dims = [harmonics[t - 2 * p].dim for p in range(t // 2 + 1)]
        total = component_basis(m, (t, 0, 0))
        pieces = []
        for p in range(t // 2 + 1):
            for h in harmonics[t - 2 * p].basis:
                for _ in range(p):
                    h = r2.apply(h)
                pieces.append(h)
        rank = span_rank(pieces)
        ok = sum(dims) == len(total) and rank == len(total)
        rows.append(
            {"m": m, "t": t, "harmonic_dims": dims, "dim_P": len(total), "sum_dims": sum(dims),
             "rank": rank, "pass": ok}
        )
    return rows


def negative_operators(m: int) -> List[WeylOperator]:
    cat = build_catalog(m)
    return [e.op for e in cat.by_color(NEGATIVE)]


def kernel_characterization_audit(m: int, d, projected: bool = False) -> dict:
    """Compare ker(D_s, L, negative Q) on P_d with the simplicial harmonics.

    With ``projected=True`` the negative generators are used in projected form,
    acting on a basis of ker(D_s, L) on P_d.
    """
    d = TriDegree(*d)
    cat = build_catalog(m)
    rhs = simplicial_harmonics(m, d)
    lhs = joint_nullspace([cat["Ds"], cat["L"]] + negative_operators(m), [d], m)
    report = {
        "m": m,
        "deg": list(d),
        "lhs_dim": lhs.dim,
        "rhs_dim": rhs.dim,
        "equal": lhs.equals(rhs),
        "dominant": is_dominant(d),
    }
    if projected:
        from .transvector import ProjectorContext, SingularWeight, generators

        ctx = ProjectorContext(m)
        kernel = joint_nullspace([cat["Ds"], cat["L"]], [d], m)
        maps = [lambda p, g=g: g.apply(p, check_domain=False) for g in generators(ctx, NEGATIVE)]
        try:
            proj = joint_nullspace(maps, kernel, m)
            report["projected_dim"] = proj.dim
            report["projected_equal"] = proj.equals(rhs)
        except SingularWeight as exc:
            report["projected_singular"] = str(exc)
    if is_dominant(d):
        try:
            report["weyl_dim"] = weyl_dim_so(m, d)
        except ValueError:
            report["weyl_dim"] = None
    return report
