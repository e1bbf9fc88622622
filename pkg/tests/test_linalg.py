from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanlab.linalg import (
    AbelianGroup,
    cokernel_structure,
    det_int,
    integer_kernel_basis,
    kernel_basis_q,
    matmul,
    null_vector_int,
    primitive_integer,
    rank_q,
    rref,
    smith_normal_form,
    solve_q,
    transpose,
)

import oracles

small = st.integers(min_value=-6, max_value=6)


@st.composite
def int_matrices(draw, max_rows=5, max_cols=5):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(cols)] for _ in range(rows)]


def test_snf_known_values():
    # frozen from sympy invariant_factors
    assert smith_normal_form([[2, 4], [6, 8]]).diag == (2, 4)
    cube_rays = [[1, 1, -1, -1], [1, -1, -1, 1], [1, 1, 1, 1]]
    assert smith_normal_form(cube_rays).diag == (1, 2, 2)
    assert smith_normal_form([[1, 1], [0, 2]]).diag == (1, 2)


def test_cokernel_examples():
    assert cokernel_structure([[1, 0], [1, 2]]) == AbelianGroup.of(0, [2])
    assert cokernel_structure([], nrows=0, ncols=0) == AbelianGroup()
    assert cokernel_structure([[0, 0]]) == AbelianGroup.of(1, [])


def test_kernel_example():
    basis = kernel_basis_q([[1, 1, 1]])
    assert basis == [(1, 0, -1), (0, 1, -1)]


def test_rejects_non_integer_snf():
    with pytest.raises(TypeError):
        smith_normal_form([[Fraction(1, 2)]])


@given(int_matrices())
@settings(max_examples=80, deadline=None)
def test_snf_transforms(m):
    res = smith_normal_form(m)
    rows, cols = len(m), len(m[0])
    d = matmul(matmul(res.left, m), res.right)
    for i in range(rows):
        for j in range(cols):
            assert d[i][j] == (res.diag[i] if i == j and i < len(res.diag) else 0)
    assert abs(det_int(res.left)) == 1
    assert abs(det_int(res.right)) == 1
    nz = [x for x in res.diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert res.diag == oracles.snf_diag(m)


@given(int_matrices())
@settings(max_examples=80, deadline=None)
def test_rank_nullity(m):
    cols = len(m[0])
    rk = rank_q(m)
    assert rk == oracles.rank(m, cols)
    kernel = kernel_basis_q(m)
    assert rk + len(kernel) == cols
    for v in kernel:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@given(int_matrices())
@settings(max_examples=50, deadline=None)
def test_kernel_canonical_under_row_ops(m):
    # adding a combination of rows leaves the kernel, and its canonical basis, unchanged
    extra = [sum(row[j] for row in m) for j in range(len(m[0]))]
    assert kernel_basis_q(m) == kernel_basis_q(m + [extra])


@given(int_matrices(max_rows=4, max_cols=4), st.lists(small, min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_solve_consistent(a, x):
    x = x[: len(a[0])]
    b = [sum(p * q for p, q in zip(row, x)) for row in a]
    sol = solve_q(a, b)
    assert sol is not None
    assert [sum(p * q for p, q in zip(row, sol)) for row in a] == b


def test_solve_inconsistent():
    assert solve_q([[1, 1], [2, 2]], [1, 3]) is None


@given(int_matrices(max_rows=4, max_cols=5))
@settings(max_examples=60, deadline=None)
def test_integer_kernel_is_saturated(m):
    cols = len(m[0])
    basis = integer_kernel_basis(m, cols)
    assert len(basis) == cols - rank_q(m)
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
    if basis:
        # a saturated sublattice has all invariant factors 1
        assert all(x == 1 for x in smith_normal_form(transpose(basis, cols)).diag)


@given(st.integers(2, 5), st.data())
@settings(max_examples=60, deadline=None)
def test_null_vector(n, data):
    m = [[data.draw(small) for _ in range(n)] for _ in range(n - 1)]
    if rank_q(m) < n - 1:
        return
    v = null_vector_int(m, n)
    assert any(v)
    assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


def test_rref_unique():
    a, pa = rref([[2, 4, 6], [1, 1, 1]])
    b, pb = rref([[1, 1, 1], [3, 5, 7]])
    assert a == b and pa == pb == [0, 1]


def test_primitive_integer():
    assert primitive_integer([Fraction(1, 2), Fraction(-1, 3)]) == (3, -2)
    with pytest.raises(ValueError):
        primitive_integer([0, 0])


@given(st.integers(0, 3), st.lists(st.integers(0, 12), max_size=5))
def test_abelian_group_canonical(free, cyclic):
    g = AbelianGroup.of(free, cyclic)
    assert g.free_rank == free + sum(1 for c in cyclic if c == 0)
    t = g.torsion
    assert all(x > 1 for x in t)
    assert all(b % a == 0 for a, b in zip(t, t[1:]))
    assert AbelianGroup.from_json(g.to_json()) == g
    finite = [c for c in cyclic if c > 0]
    if g.free_rank == 0:
        prod = 1
        for c in finite:
            prod *= c
        assert g.order == prod


def test_abelian_group_arithmetic():
    z2 = AbelianGroup.cyclic(2)
    assert str(z2 * 3) == "(Z/2)^3"
    assert z2 + AbelianGroup.cyclic(3) == AbelianGroup.cyclic(6)
    assert AbelianGroup.of(1, [4]).tensor_cyclic(2) == AbelianGroup.of(0, [2, 2])
    assert str(AbelianGroup()) == "0"
