"""Channel-by-channel audit of the branching of degree-k symplectic monogenics.

A channel fixes the (x,y)-degree k and the weight lam = deg x - deg y - deg z,
which D_s preserves; each channel is a finite sum of tri-homogeneous
components. Towers ``R^ell P_word H_seed`` are realized exactly and compared
against the kernel of D_s on the channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

from .kernels import Subspace, independent_subset, joint_nullspace, simplicial_harmonics, span_rank
from .poly import Polynomial, TriDegree
from .realizations import LABELS, POSITIVE, Label, color_of
from .transvector import ProjectorContext, SingularWeight, apply_word


def channel_components(lam: int, k: int = 1) -> List[TriDegree]:
    """Valid tri-degrees (a; b, c) with b + c = k and b - c - a = lam."""
    out = []
    for b in range(k, -1, -1):
        c = k - b
        a = b - c - lam
        if a >= 0:
            out.append(TriDegree(a, b, c))
    return out


def monogenic_channel(m: int, lam: int, k: int = 1, ctx: Optional[ProjectorContext] = None) -> Subspace:
    ctx = ctx or ProjectorContext(m)
    comps = channel_components(lam, k)
    if not comps:
        return Subspace(m, [], ())
    return joint_nullspace([ctx.catalog["Ds"]], comps, m)


def monogenic_channel_dim(m: int, lam: int, k: int = 1) -> int:
    return monogenic_channel(m, lam, k).dim


def _label_text(lab: Label) -> str:
    return f"P({lab[0]},{lab[1]})"


@dataclass(frozen=True)
class TowerGenerator:
    seed: TriDegree
    word: Tuple[Label, ...]
    ell: int

    @property
    def a(self) -> int:
        return self.seed.a

    @property
    def tag(self) -> str:
        """Family name, independent of the seed's z-degree and of ell."""
        letters = "".join(_label_text(l) for l in self.word)
        return f"{letters}H(a,{self.seed.b},{self.seed.c})"

    def describe(self) -> str:
        letters = "".join(_label_text(l) for l in self.word)
        r = f"R^{self.ell} " if self.ell else ""
        return f"{r}{letters}H{tuple(self.seed)}"

    def to_json(self) -> dict:
        return {"tag": self.tag, "a": self.a, "seed": list(self.seed),
                "word": [list(l) for l in self.word], "ell": self.ell}


def _seed_shapes(k: int) -> List[Tuple[int, int]]:
    return [(b, c) for b in range(k + 1) for c in range(b + 1) if b + c <= k]


def _words(letters: Sequence[Label], degree: int, cap: int) -> Iterable[Tuple[Label, ...]]:
    """Words of length <= cap whose letters raise the (x,y)-degree by ``degree`` in total."""
    for n in range(0, cap + 1):
        for word in product(letters, repeat=n):
            if sum(l[1] // 2 for l in word) == degree:
                yield word


def enumerate_towers(m: int, lam: int, word_cap: int = 2, k: int = 1) -> List[TowerGenerator]:
    if word_cap < 1:
        raise ValueError("word_cap must be at least 1")
    letters = [l for l in LABELS if color_of(l) == POSITIVE and 0 <= l[1] <= 2 * k]
    out = []
    for b, c in _seed_shapes(k):
        for word in _words(letters, k - b - c, word_cap):
            shift = sum(l[0] for l in word)
            # seed weight b - c - a, plus the word, minus 2 per power of R
            top = b - c + shift - lam
            ell = 0
            while top - 2 * ell >= 0:
                out.append(TowerGenerator(TriDegree(top - 2 * ell, b, c), word, ell))
                ell += 1
    out.sort(key=lambda g: (len(g.word), g.seed.b, g.seed.c, g.word, g.ell, g.seed.a))
    return out


@dataclass
class RealizedTower:
    generator: TowerGenerator
    space: Subspace
    seed_dim: int
    zero_images: int
    certified: bool


def realize_tower(g: TowerGenerator, m: int, ctx: Optional[ProjectorContext] = None) -> RealizedTower:
    ctx = ctx or ProjectorContext(m)
    R = ctx.catalog["R"]
    Ds = ctx.catalog["Ds"]
    seed = simplicial_harmonics(m, g.seed)
    images = []
    zeros = 0
    for h in seed.basis:
        v = apply_word(ctx, g.word, h)
        for _ in range(g.ell):
            if v.is_zero():
                break
            v = R.apply(v)
        if v.is_zero():
            zeros += 1
        images.append(v)
    certified = all(Ds.apply(v).is_zero() for v in images)
    basis = independent_subset(m, images)
    ambient = sorted({d for v in basis for d in v.tri_degrees()})
    return RealizedTower(g, Subspace(m, basis, ambient), seed.dim, zeros, certified)


def _z_parities(polys: Iterable[Polynomial]) -> set:
    out = set()
    for p in polys:
        for d in p.tri_degrees():
            out.add(d.a % 2)
    return out


def audit_channel(m: int, lam: int, word_cap: int = 2, k: int = 1,
                  ctx: Optional[ProjectorContext] = None) -> dict:
    ctx = ctx or ProjectorContext(m)
    comps = channel_components(lam, k)
    kernel_dim = monogenic_channel(m, lam, k, ctx).dim
    families = []
    singular = []
    short: List[Polynomial] = []
    longer: List[Tuple[dict, List[Polynomial]]] = []
    certified = True
    in_channel = True
    parity_ok = True
    for g in enumerate_towers(m, lam, word_cap, k):
        try:
            t = realize_tower(g, m, ctx)
        except SingularWeight as exc:
            singular.append({**g.to_json(), "component": list(exc.degree), "h": str(exc.h),
                             "triple": exc.triple})
            continue
        certified &= t.certified
        basis = t.space.basis
        in_channel &= all(d in comps for v in basis for d in v.tri_degrees())
        parity_ok &= len(_z_parities(basis)) <= 1
        fam = {**g.to_json(), "seed_dim": t.seed_dim, "dim": t.space.dim, "redundant": False}
        families.append(fam)
        if len(g.word) <= 1:
            short.extend(basis)
        else:
            longer.append((fam, basis))
    # longer words are only counted toward directness when they add something new
    short_rank = span_rank(short)
    everything = list(short)
    for fam, basis in longer:
        if basis and span_rank(short + basis) == short_rank:
            fam["redundant"] = True
        everything.extend(basis)
    sum_rank = span_rank(everything)
    counted = sum(f["dim"] for f in families if not f["redundant"])
    return {
        "lambda": lam,
        "k": k,
        "components": [list(d) for d in comps],
        "kernel_dim": kernel_dim,
        "families": families,
        "tower_dims": [f["dim"] for f in families],
        "sum_rank": sum_rank,
        "complete": sum_rank == kernel_dim,
        "independent": sum_rank == counted,
        "word_cap_invariant": short_rank == sum_rank,
        "certified": certified,
        "in_channel": in_channel,
        "single_parity": parity_ok,
        "singular": singular,
        "deficit": kernel_dim - sum_rank,
    }


def verify_branching_k1(m: int, lambdas: Iterable[int], word_cap: int = 2) -> List[dict]:
    ctx = ProjectorContext(m)
    return [audit_channel(m, lam, word_cap, 1, ctx) for lam in lambdas]
