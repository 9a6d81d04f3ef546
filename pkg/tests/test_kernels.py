import pytest
from hypothesis import given
from hypothesis import strategies as st

from mzbranch.dsl import op, poly
from mzbranch.kernels import (
    Subspace,
    fischer_audit,
    howe_harmonics,
    joint_nullspace,
    operator_matrix,
    simplicial_harmonics,
    kernel_characterization_audit,
    weyl_dim_so,
    z_harmonics,
)
from mzbranch.linalg import nullspace
from mzbranch.poly import Polynomial, TriDegree, component_basis, component_dim
from mzbranch.realizations import build_catalog, simplicial_operators
from mzbranch.weyl import WeylOperator


def unsplit_nullspace(ops, d, m):
    """One elimination over the stacked matrices of all operators."""
    cols = component_basis(m, d)
    rows = []
    for A in ops:
        mat = operator_matrix(A, d)
        for target in sorted(mat.blocks):
            for row in mat.blocks[target]:
                rows.append({j: v for j, v in enumerate(row) if v})
    basis = []
    for x in nullspace(len(cols), rows):
        basis.append(Polynomial(m, {cols[j]: v for j, v in x.items()}))
    return basis


def test_operator_matrix_laplacian():
    mat = operator_matrix(op("lap(z)", 3), (2, 0, 0))
    assert list(mat.blocks) == [TriDegree(0, 0, 0)]
    assert mat.blocks[TriDegree(0, 0, 0)] == [[2, 0, 0, 2, 0, 2]]


def test_operator_matrix_ds_on_xz():
    m = 3
    mat = operator_matrix(op("Ds", m), (1, 1, 0))
    assert list(mat.blocks) == [TriDegree(0, 0, 0)]
    row = mat.blocks[TriDegree(0, 0, 0)][0]
    cols = component_basis(m, (1, 1, 0))
    for j, mono in enumerate(cols):
        diagonal = any(mono[i] and mono[m + i] for i in range(m))
        assert row[j] == (-1 if diagonal else 0)


def test_operator_matrix_of_zero():
    assert operator_matrix(WeylOperator.zero(2), (1, 1, 1)).blocks == {}


def test_joint_nullspace_examples():
    assert joint_nullspace([op("lap(z)", 3)], [(2, 0, 0)], 3).dim == 5
    assert joint_nullspace([WeylOperator.identity(3)], [(2, 0, 0)], 3).dim == 0
    for m in (1, 2, 3, 4):
        assert joint_nullspace([op("Ds", m)], [(1, 1, 0)], m).dim == m * m - 1


@pytest.mark.parametrize("m,d", [(2, (2, 1, 0)), (3, (2, 1, 0)), (3, (1, 1, 1)), (2, (3, 0, 1))])
def test_blockwise_matches_unsplit_elimination(m, d):
    ops = simplicial_operators(m)
    assert joint_nullspace(ops, [d], m).basis == unsplit_nullspace(ops, d, m)


def test_howe_examples():
    for m in (2, 3, 4):
        assert howe_harmonics(m, (1, 0, 0)).dim == m
    assert howe_harmonics(3, (2, 0, 0)).dim == 5
    assert howe_harmonics(2, (1, 1, 0)).dim == 3


def test_simplicial_examples():
    for m in (2, 3, 4):
        assert simplicial_harmonics(m, (1, 0, 0)).equals(
            Subspace(m, [Polynomial.var(m, "z", i) for i in range(1, m + 1)])
        )
        expected = [poly(f"x_{i}*z_{j} - x_{j}*z_{i}", m) for i in range(1, m + 1) for j in range(i + 1, m + 1)]
        space = simplicial_harmonics(m, (1, 1, 0))
        assert space.dim == m * (m - 1) // 2
        assert space.equals(Subspace(m, expected))
    assert simplicial_harmonics(3, (0, 1, 0)).dim == 0


@pytest.mark.parametrize("m,d", [(3, (2, 1, 0)), (3, (2, 1, 1)), (4, (2, 1, 1)), (2, (2, 2, 0))])
def test_exactness_and_monotonicity(m, d):
    cat = build_catalog(m)
    simp = simplicial_harmonics(m, d)
    howe = howe_harmonics(m, d)
    for b in simp.basis:
        for A in simplicial_operators(m):
            assert A.apply(b).is_zero()
    for b in howe.basis:
        for A in cat.g_minus.values():
            assert A.apply(b).is_zero()
    assert simp.is_subspace_of(howe)
    assert howe.dim <= component_dim(m, d)


def test_subspace_membership_and_intersection():
    m = 2
    a = Subspace(m, [poly("x_1", m), poly("x_2", m)])
    b = Subspace(m, [poly("x_1 + x_2", m), poly("y_1", m)])
    assert poly("3*x_1 - x_2", m) in a
    assert poly("y_1", m) not in a
    meet = a.intersection(b)
    assert meet.dim == 1 and poly("x_1 + x_2", m) in meet


def test_subspace_json_round_trip():
    s = simplicial_harmonics(3, (2, 1, 0))
    t = Subspace.from_json(s.to_json())
    assert t.basis == s.basis and t.ambient == s.ambient


def test_dependent_basis_detected():
    s = Subspace(2, [poly("x_1", 2), poly("2*x_1", 2)])
    assert not s.check_independent()


def test_weyl_dim_examples():
    for k in range(6):
        assert weyl_dim_so(3, (k,)) == 2 * k + 1
    for a in range(4):
        for b in range(a + 1):
            assert weyl_dim_so(4, (a, b)) == (a + b + 1) * (a - b + 1)
    for m in range(1, 9):
        assert weyl_dim_so(m, (0, 0, 0)) == 1
    assert weyl_dim_so(5, (1, 0)) == 5 and weyl_dim_so(5, (1, 1)) == 10
    assert weyl_dim_so(7, (1, 1, 1)) == 35
    with pytest.raises(ValueError):
        weyl_dim_so(3, (1, 2))


@given(st.integers(3, 6), st.integers(0, 5))
def test_z_harmonic_dims_match_weyl(m, k):
    assert z_harmonics(m, k).dim == weyl_dim_so(m, (k,))


@pytest.mark.parametrize("d", [(1, 0, 0), (1, 1, 0), (2, 1, 0), (2, 2, 0)])
def test_simplicial_matches_weyl_at_five(d):
    assert simplicial_harmonics(5, d).dim == weyl_dim_so(5, d[:2])


def test_fischer_examples():
    rows = fischer_audit(3, 4)
    assert rows[4]["harmonic_dims"] == [9, 5, 1] and rows[4]["dim_P"] == 15 and rows[4]["rank"] == 15
    assert all(r["pass"] for r in rows)
    row = fischer_audit(2, 2)[2]
    assert row["harmonic_dims"] == [2, 1] and row["dim_P"] == 3
    assert fischer_audit(5, 0)[0]["harmonic_dims"] == [1]


def test_kernel_characterization_examples():
    rep = kernel_characterization_audit(3, (1, 0, 0))
    assert rep["equal"] and rep["lhs_dim"] == 3
    rep = kernel_characterization_audit(3, (1, 1, 0))
    assert rep["equal"] and rep["lhs_dim"] == 3
    rep = kernel_characterization_audit(4, (2, 1, 0), projected=True)
    assert rep["equal"] and rep["projected_equal"]
    # the so(4) formula counts one of the two O(4) pieces
    assert rep["lhs_dim"] == 16 and rep["weyl_dim"] == 8


def test_nullspace_on_polynomial_domain():
    m = 2
    domain = [poly("x_1*z_1", m), poly("x_2*z_2", m), poly("x_1*z_2", m)]
    space = joint_nullspace([op("Ds", m)], domain, m)
    assert space.dim == 2
    assert poly("x_1*z_1 - x_2*z_2", m) in space


def test_deterministic_bases():
    a = simplicial_harmonics(4, (2, 1, 1)).to_json()
    b = simplicial_harmonics(4, (2, 1, 1)).to_json()
    assert a == b
