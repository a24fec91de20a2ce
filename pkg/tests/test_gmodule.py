import pytest
from hypothesis import given, strategies as st
from sympy import QQ

from tractorbgg.gmodule import (adjoint_module, grassmann_lambda2, projective_sym2,
                                standard_module)
from tractorbgg.graded_lie import build_sl_grassmann, build_sl_projective


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sym2_dimension_and_slots(n):
    V = projective_sym2(build_sl_projective(n))
    assert V.dim == (n + 1) * (n + 2) // 2
    assert sorted(set(V.slots)) == [0, 1, 2]
    assert [V.slots.count(s) for s in (0, 1, 2)] == [n * (n + 1) // 2, n, 1]
    assert V.check_homomorphism()[0] and V.check_grading()[0]


@pytest.mark.parametrize("q", [3, 4])
def test_lambda2_dimension_and_slots(q):
    V = grassmann_lambda2(build_sl_grassmann(q))
    N = q + 2
    assert V.dim == N * (N - 1) // 2
    assert [V.slots.count(s) for s in (0, 1, 2)] == [q * (q - 1) // 2, 2 * q, 1]
    assert V.check_homomorphism()[0] and V.check_grading()[0]


def test_adjoint_module_is_ad():
    g = build_sl_projective(2)
    A = adjoint_module(g)
    for b in range(g.dim):
        assert A.rho(g.basis_vector(b)) == g.ad(b)


@given(st.data())
def test_standard_module_is_matrix_action(data):
    g = build_sl_projective(3)
    V = standard_module(g)
    x = [QQ(data.draw(st.integers(-2, 2))) for _ in range(g.dim)]
    v = [QQ(data.draw(st.integers(-2, 2))) for _ in range(V.dim)]
    M = g.matrix(x)
    want = [sum((M[i][j] * v[j] for j in range(4)), QQ(0)) for i in range(4)]
    assert [QQ(a) for a in V.act(x, v)] == want


@given(st.data())
def test_rho_preserves_brackets(data):
    g = build_sl_grassmann(3)
    V = grassmann_lambda2(g)
    ints = st.integers(-2, 2)
    x = [QQ(data.draw(ints)) for _ in range(g.dim)]
    y = [QQ(data.draw(ints)) for _ in range(g.dim)]
    X, Y = V.rho(x), V.rho(y)
    assert V.rho(g.bracket(x, y)) == X @ Y - Y @ X
