"""Named operator families and the exact relation suites they satisfy."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

from .dsl import contraction, euler, laplacian, norm2, op
from .linalg import solve_combination, vectors_rank
from .poly import TriDegree
from .weyl import WeylOperator, bigrade, commutator, to_dsl

Label = Tuple[int, int]

NEGATIVE, CARTAN, POSITIVE = "negative", "cartan", "positive"

# the 15 complement operators by (lam, mu) label; the (0,0) entry gets "+ m" added
Q_TEXT: Dict[Label, str] = {
    (-2, -4): "lap(x)",
    (-2, -2): "c(z,dx)",
    (-2, 0): "c(y,dx) - norm2(z)",
    (-2, 2): "c(y,z)",
    (-2, 4): "norm2(y)",
    (0, -4): "c(dx,dy)",
    (0, -2): "c(z,dy) + c(dz,dx)",
    (0, 0): "E(x) - E(y) + 2*E(z)",
    (0, 2): "c(x,z) - c(y,dz)",
    (0, 4): "c(x,y)",
    (2, -4): "lap(y)",
    (2, -2): "c(dy,dz)",
    (2, 0): "c(x,dy) + lap(z)",
    (2, 2): "c(x,dz)",
    (2, 4): "norm2(x)",
}

LABELS: List[Label] = sorted(Q_TEXT)


def color_of(label: Label) -> str:
    """Negative labels point along D_s (mu < 0) or along L (mu = 0, lam > 0)."""
    lam, mu = label
    if label == (0, 0):
        return CARTAN
    if mu < 0 or (mu == 0 and lam > 0):
        return NEGATIVE
    return POSITIVE


@dataclass(frozen=True)
class Sl2Triple:
    """``[H,X] = 2X, [X,Y] = H, [H,Y] = -2Y``; ``weight`` is H's eigenvalue on P_d."""

    name: str
    X: WeylOperator
    Y: WeylOperator
    H: WeylOperator
    weight: Callable[[TriDegree], Fraction] = field(compare=False)

    @property
    def m(self) -> int:
        return self.X.m


def _ds_weight(m: int):
    return lambda d: Fraction(-2 * (d[1] + d[2] + m))


def _l_weight(m: int):
    return lambda d: Fraction(d[1] - d[2] - d[0]) - Fraction(m, 2)


@dataclass
class QEntry:
    label: Label
    color: str
    op: WeylOperator
    text: str


@dataclass
class OperatorCatalog:
    m: int
    ops: Dict[str, WeylOperator]
    q: Dict[Label, QEntry]
    g_minus: Dict[str, WeylOperator]
    g_zero: Dict[str, WeylOperator]
    g_plus: Dict[str, WeylOperator]
    sp2m: Dict[str, WeylOperator]
    som: Dict[str, WeylOperator]

    def __getitem__(self, name: str) -> WeylOperator:
        return self.ops[name]

    def Q(self, lam: int, mu: int) -> WeylOperator:
        return self.q[(lam, mu)].op

    def by_color(self, color: str) -> List[QEntry]:
        return [e for lab, e in sorted(self.q.items()) if e.color == color]

    @property
    def ds_triple(self) -> Sl2Triple:
        return Sl2Triple("Ds", self.ops["Ds"], 2 * self.ops["Xs"], self.ops["H_D"], _ds_weight(self.m))

    @property
    def l_triple(self) -> Sl2Triple:
        return Sl2Triple("L", self.ops["L"], self.ops["R"], self.ops["H_L"], _l_weight(self.m))

    def to_json(self) -> dict:
        out = {name: A.to_json() for name, A in sorted(self.ops.items())}
        for lab, e in sorted(self.q.items()):
            out[f"Q({lab[0]},{lab[1]})"] = e.op.to_json()
        for group in (self.sp2m, self.som):
            for name, A in sorted(group.items()):
                out[name] = A.to_json()
        return out


def _q_ops(m: int) -> Dict[Label, WeylOperator]:
    out = {}
    for lab, text in Q_TEXT.items():
        A = op(text, m)
        if lab == (0, 0):
            A = A + m
        out[lab] = A
    return out


def _sp2m(m: int) -> Dict[str, WeylOperator]:
    half = Fraction(1, 2)
    V = lambda n, i: WeylOperator.variable(m, n, i)
    D = lambda n, i: WeylOperator.derivative(m, n, i)
    out = {}
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            A = V("x", j) * D("x", k) - V("y", k) * D("y", j) - V("z", k) * D("z", j)
            if j == k:
                A = A - half
            out[f"X[{j},{k}]"] = A
    for j in range(1, m + 1):
        out[f"Y[{j},{j}]"] = V("x", j) * D("y", j) - half * (D("z", j) * D("z", j))
        out[f"Z[{j},{j}]"] = V("y", j) * D("x", j) + half * (V("z", j) * V("z", j))
        for k in range(j + 1, m + 1):
            out[f"Y[{j},{k}]"] = V("x", j) * D("y", k) + V("x", k) * D("y", j) - D("z", j) * D("z", k)
            out[f"Z[{j},{k}]"] = V("y", j) * D("x", k) + V("y", k) * D("x", j) + V("z", j) * V("z", k)
    return out


@lru_cache(maxsize=None)
def build_catalog(m: int) -> OperatorCatalog:
    if m < 1:
        raise ValueError("m must be positive")
    Ex, Ey, Ez = euler(m, "x"), euler(m, "y"), euler(m, "z")
    half = Fraction(1, 2)
    ops = {
        "Ds": contraction(m, "z", "dy") - contraction(m, "dx", "dz"),
        "Xs": contraction(m, "y", "dz") + contraction(m, "x", "z"),
        "Ex": Ex,
        "Ey": Ey,
        "Ez": Ez,
        "E": Ex + Ey,
        "L": contraction(m, "x", "dy") - half * laplacian(m, "z"),
        "R": contraction(m, "y", "dx") + half * norm2(m, "z"),
        "scriptE": Ey - Ex + Ez + Fraction(m, 2),
    }
    ops["H_D"] = -2 * (Ex + Ey + m)
    ops["H_L"] = -ops["scriptE"]
    g_minus = {
        "lap(x)": laplacian(m, "x"),
        "lap(y)": laplacian(m, "y"),
        "lap(z)": laplacian(m, "z"),
        "c(dx,dy)": contraction(m, "dx", "dy"),
        "c(dy,dz)": contraction(m, "dy", "dz"),
        "c(dx,dz)": contraction(m, "dx", "dz"),
    }
    g_zero = {
        f"c({u},{v})": contraction(m, u, v)
        for u, v in (("x", "dy"), ("y", "dx"), ("x", "dz"), ("z", "dx"), ("y", "dz"), ("z", "dy"))
    }
    g_zero.update({"E(x)": Ex, "E(y)": Ey, "E(z)": Ez})
    g_plus = {
        "norm2(x)": norm2(m, "x"),
        "norm2(y)": norm2(m, "y"),
        "norm2(z)": norm2(m, "z"),
        "c(x,y)": contraction(m, "x", "y"),
        "c(y,z)": contraction(m, "y", "z"),
        "c(x,z)": contraction(m, "x", "z"),
    }
    q = {
        lab: QEntry(lab, color_of(lab), A, Q_TEXT[lab] + (" + m" if lab == (0, 0) else ""))
        for lab, A in _q_ops(m).items()
    }
    sp2m = _sp2m(m)
    som = {
        f"Lso[{a},{b}]": sp2m[f"X[{a},{b}]"] - sp2m[f"X[{b},{a}]"]
        for a in range(1, m + 1)
        for b in range(a + 1, m + 1)
    }
    return OperatorCatalog(m, ops, q, g_minus, g_zero, g_plus, sp2m, som)


def named_operator(name: str, m: int) -> WeylOperator:
    return build_catalog(m).ops[name]


def q_operator(m: int, label: Label) -> WeylOperator:
    return build_catalog(m).q[tuple(label)].op


def simplicial_operators(m: int) -> List[WeylOperator]:
    """The nine operators whose joint kernel defines the simplicial harmonics."""
    cat = build_catalog(m)
    extra = [contraction(m, "z", "dx"), contraction(m, "z", "dy"), contraction(m, "x", "dy")]
    return list(cat.g_minus.values()) + extra


# verification suites


def _check(name: str, residual: WeylOperator, expect_zero: bool = True) -> dict:
    ok = residual.is_zero() if expect_zero else not residual.is_zero()
    rec = {"check": name, "pass": ok}
    if not residual.is_zero():
        rec["residual"] = to_dsl(residual)
    return rec


def verify_sl2(t: Sl2Triple) -> dict:
    checks = [
        _check(f"[H,X]-2X ({t.name})", commutator(t.H, t.X) - 2 * t.X),
        _check(f"[X,Y]-H ({t.name})", commutator(t.X, t.Y) - t.H),
        _check(f"[H,Y]+2Y ({t.name})", commutator(t.H, t.Y) + 2 * t.Y),
    ]
    return {"check": f"sl2[{t.name}]", "pass": all(c["pass"] for c in checks), "details": checks}


def verify_so4_split(m: int) -> dict:
    cat = build_catalog(m)
    checks = []
    for a in ("Ds", "Xs"):
        for b in ("L", "R"):
            checks.append(_check(f"[{a},{b}]", commutator(cat[a], cat[b])))
    # negative control: a bracket that must not vanish
    checks.append(
        _check("control [Ds,norm2(y)] != 0", commutator(cat["Ds"], norm2(m, "y")), expect_zero=False)
    )
    return {"check": f"so4-split m={m}", "pass": all(c["pass"] for c in checks), "details": checks}


def _vec(A: WeylOperator) -> Dict:
    return A.terms


def verify_reductive(m: int) -> dict:
    """Express every ``[s, Q]`` for s in so(4) exactly in the span of the fifteen Q."""
    cat = build_catalog(m)
    labels = LABELS
    basis = [_vec(cat.Q(*lab)) for lab in labels]
    s_labels = {"Ds": (0, -2), "Xs": (0, 2), "L": (2, 0), "R": (-2, 0), "H_D": (0, 0), "H_L": (0, 0)}
    constants: Dict[str, Dict[str, Dict[str, str]]] = {}
    checks = []
    for s, (ls, ms) in s_labels.items():
        table = {}
        for lab in labels:
            br = commutator(cat[s], cat.Q(*lab))
            coeffs = solve_combination(basis, _vec(br))
            key = f"Q({lab[0]},{lab[1]})"
            if coeffs is None:
                checks.append({"check": f"[{s},{key}] in span Q", "pass": False, "residual": to_dsl(br)})
                continue
            nz = {labels[i]: c for i, c in enumerate(coeffs) if c}
            table[key] = {f"Q({l[0]},{l[1]})": f"{c.numerator}/{c.denominator}" for l, c in nz.items()}
            target = (lab[0] + ls, lab[1] + ms)
            ok = set(nz) <= {target}
            if s == "H_D":
                ok = ok and br == -lab[1] * cat.Q(*lab)
            elif s == "H_L":
                ok = ok and br == lab[0] * cat.Q(*lab)
            checks.append({"check": f"[{s},{key}] -> label {target}", "pass": ok})
        constants[s] = table
    rank = vectors_rank(basis)
    checks.append({"check": "fifteen Q linearly independent", "pass": rank == 15, "rank": rank})
    grid_ok = all(bigrade(cat.Q(*lab)) == lab for lab in labels)
    checks.append({"check": "bigrade labels match grid", "pass": grid_ok})
    return {
        "check": f"reductive m={m}",
        "pass": all(c["pass"] for c in checks),
        "details": checks,
        "structure_constants": constants,
    }


def verify_invariance(m: int) -> dict:
    cat = build_catalog(m)
    e_shift = cat["E"] + m
    checks = []
    parity_ok = True
    for name, G in cat.sp2m.items():
        for a, A in (("Ds", cat["Ds"]), ("Xs", cat["Xs"]), ("E+m", e_shift)):
            checks.append(_check(f"[{a},{name}]", commutator(A, G)))
        if any(abs(s[0]) not in (0, 2) for s in G.shifts()):
            parity_ok = False
    checks.append({"check": "sp(2m) generators preserve z-parity", "pass": parity_ok})
    return {"check": f"invariance m={m}", "pass": all(c["pass"] for c in checks), "details": checks}


def verify_som_invariants(m: int) -> dict:
    cat = build_catalog(m)
    vecs = ("x", "y", "z", "dx", "dy", "dz")
    checks = []
    for name, G in cat.som.items():
        for u in vecs:
            for v in vecs:
                checks.append(_check(f"[{name},c({u},{v})]", commutator(G, contraction(m, u, v))))
    return {"check": f"so(m) invariants m={m}", "pass": all(c["pass"] for c in checks), "details": checks}


def check_weight_functional(t: Sl2Triple, degrees) -> bool:
    """H acts on each tri-homogeneous component by the scalar ``t.weight``."""
    from .poly import Polynomial, component_basis

    m = t.m
    for d in degrees:
        w = t.weight(TriDegree(*d))
        for mono in component_basis(m, d):
            p = Polynomial.from_monomial(m, mono)
            if t.H.apply(p) != p.scale(w):
                return False
    return True


SUITES = {
    "sl2": lambda m: [verify_sl2(build_catalog(m).ds_triple), verify_sl2(build_catalog(m).l_triple)],
    "so4": lambda m: [verify_so4_split(m)],
    "reductive": lambda m: [verify_reductive(m)],
    "invariance": lambda m: [verify_invariance(m)],
    "som": lambda m: [verify_som_invariants(m)],
}


def run_suites(names, m: int) -> List[dict]:
    out = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
        out.extend(SUITES[name](m))
    return out
