from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import coefficients
from mzbranch.branching import (
    TowerGenerator,
    audit_channel,
    channel_components,
    enumerate_towers,
    monogenic_channel,
    monogenic_channel_dim,
    realize_tower,
    verify_branching_k1,
)
from mzbranch.dsl import poly
from mzbranch.kernels import Subspace
from mzbranch.poly import TriDegree, linear_combination
from mzbranch.transvector import ProjectorContext

CTX = {m: ProjectorContext(m) for m in (2, 3)}


def z_count(m, n):
    return comb(n + m - 1, m - 1) if n >= 0 else 0


def channel_dim_oracle(m, lam):
    """D_s maps the channel onto the z-only component of degree -lam."""
    return m * z_count(m, 1 - lam) + m * z_count(m, -1 - lam) - z_count(m, -lam)


def test_channel_components():
    assert channel_components(1) == [TriDegree(0, 1, 0)]
    assert channel_components(0) == [TriDegree(1, 1, 0)]
    assert channel_components(-1) == [TriDegree(2, 1, 0), TriDegree(0, 0, 1)]
    assert channel_components(2) == []


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_channel_dim_examples(m):
    assert monogenic_channel_dim(m, 1) == m
    assert monogenic_channel_dim(m, 0) == m * m - 1
    assert monogenic_channel_dim(m, 2) == 0


@given(st.integers(2, 4), st.integers(-5, 1))
def test_channel_dim_oracle(m, lam):
    assert monogenic_channel_dim(m, lam) == channel_dim_oracle(m, lam)


def test_enumerate_top_channel():
    towers = enumerate_towers(3, 1, 2)
    assert {g.describe() for g in towers} == {"H(0, 1, 0)", "P(2,2)H(1, 0, 0)"}


def test_enumerate_zero_channel():
    found = {(tuple(g.seed), g.word, g.ell) for g in enumerate_towers(3, 0, 1)}
    assert found == {
        ((1, 1, 0), (), 0),
        ((2, 0, 0), ((2, 2),), 0),
        ((0, 0, 0), ((0, 2),), 0),
        ((0, 0, 0), ((2, 2),), 1),
    }
    with pytest.raises(ValueError):
        enumerate_towers(3, 0, 0)


@pytest.mark.parametrize("lam", [1, 0, -1, -2, -3])
def test_enumerated_weights_and_degrees(lam):
    for g in enumerate_towers(3, lam, 2):
        b, c = g.seed.b, g.seed.c
        assert b + c + sum(l[1] // 2 for l in g.word) == 1
        assert (b - c - g.seed.a) + sum(l[0] for l in g.word) - 2 * g.ell == lam


def test_realize_examples():
    m = 3
    t = realize_tower(TowerGenerator(TriDegree(1, 0, 0), ((2, 2),), 0), m, CTX[m])
    assert t.certified and t.space.equals(Subspace(m, [poly(f"x_{i}", m) for i in (1, 2, 3)]))
    t = realize_tower(TowerGenerator(TriDegree(0, 0, 0), ((0, 2),), 0), m, CTX[m])
    assert t.space.dim == 0 and t.zero_images == 1
    for a in (1, 2, 3):
        t = realize_tower(TowerGenerator(TriDegree(a, 1, 0), ((2, 0),), 0), m, CTX[m])
        assert t.space.dim == 0 and t.zero_images == t.seed_dim


def test_top_and_zero_channels_at_three():
    top, zero = verify_branching_k1(3, [1, 0])
    assert top["kernel_dim"] == 3 and top["sum_rank"] == 3 and top["complete"] and top["independent"]
    assert zero["kernel_dim"] == 8 and zero["complete"] and zero["independent"]
    dims = {(f["tag"], f["ell"]): f["dim"] for f in zero["families"] if len(f["word"]) <= 1}
    assert dims == {
        ("H(a,1,0)", 0): 3,
        ("P(2,2)H(a,0,0)", 0): 5,
        ("P(0,2)H(a,0,0)", 0): 0,
        ("P(2,2)H(a,0,0)", 1): 0,
    }


def test_zero_channel_at_two():
    rep = audit_channel(2, 0)
    assert rep["kernel_dim"] == 3 and rep["complete"]
    nonzero = sorted(f["dim"] for f in rep["families"] if f["dim"])
    assert nonzero == [1, 2]
    assert [f["dim"] for f in rep["families"] if f["tag"] == "P(0,2)H(a,0,0)"] == [0]


@pytest.mark.parametrize("lam", [1, 0, -1])
def test_word_cap_invariance(lam):
    one = audit_channel(3, lam, word_cap=1)
    two = audit_channel(3, lam, word_cap=2)
    assert one["sum_rank"] == two["sum_rank"]
    assert two["word_cap_invariant"]


def test_longer_words_marked_redundant():
    rep = audit_channel(3, -2, word_cap=2)
    longer = [f for f in rep["families"] if len(f["word"]) == 2 and f["dim"]]
    assert longer and all(f["redundant"] for f in longer)
    assert rep["independent"]


@pytest.mark.parametrize("lam", [0, -1, -2])
def test_towers_are_certified_and_conserve_channel(lam):
    rep = audit_channel(3, lam)
    assert rep["certified"] and rep["in_channel"] and rep["single_parity"]


@given(st.sampled_from([2, 3]), st.integers(-3, 1), st.data())
def test_raising_preserves_monogenics(m, lam, data):
    ctx = CTX[m]
    kernel = monogenic_channel(m, lam, ctx=ctx)
    if not kernel.dim:
        return
    cs = data.draw(st.lists(coefficients, min_size=kernel.dim, max_size=kernel.dim))
    v = linear_combination(m, zip(cs, kernel.basis))
    w = ctx.catalog["R"].apply(v)
    assert ctx.catalog["Ds"].apply(w).is_zero()
    assert all(d in channel_components(lam - 2) for d in w.tri_degrees())


def test_singular_weights_are_reported_at_two():
    rep = audit_channel(2, -1)
    assert rep["singular"]
    assert all(s["h"] == "-2" and s["component"] == [0, 0, 1] for s in rep["singular"])
