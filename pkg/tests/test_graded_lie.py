import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, QQ

from tractorbgg.graded_lie import build_sl_grassmann, build_sl_projective

ALGS = {("proj", 2): build_sl_projective(2), ("proj", 3): build_sl_projective(3),
        ("grass", 3): build_sl_grassmann(3), ("grass", 4): build_sl_grassmann(4)}


@pytest.mark.parametrize("key", sorted(ALGS))
def test_structural_invariants(key):
    g = ALGS[key]
    assert g.check_jacobi()[0]
    assert g.check_grading()[0]
    assert g.check_antisymmetry()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_projective_dimensions(n):
    g = build_sl_projective(n)
    assert g.dims == (n, n * n, n)
    assert g.dim == (n + 1) ** 2 - 1


@pytest.mark.parametrize("q", [3, 4])
def test_grassmann_dimensions(q):
    g = build_sl_grassmann(q)
    assert g.m == 2 * q
    assert g.dims[1] == 4 + q * q - 1


def _to_sympy(g, x):
    return Matrix(g.matrix(x))


@given(st.data())
def test_bracket_is_matrix_commutator(data):
    g = ALGS[("proj", 3)]
    ints = st.integers(-3, 3)
    x = [QQ(data.draw(ints)) for _ in range(g.dim)]
    y = [QQ(data.draw(ints)) for _ in range(g.dim)]
    A, B = _to_sympy(g, x), _to_sympy(g, y)
    assert _to_sympy(g, g.bracket(x, y)) == A * B - B * A


def test_grading_element_acts_by_degree():
    g = build_sl_grassmann(3)
    E = g.grading_element
    for b in range(g.dim):
        e = g.basis_vector(b)
        assert g.bracket(E, e) == [g.degree[b] * v for v in e]


def test_coords_rejects_trace():
    g = build_sl_projective(2)
    with pytest.raises(ValueError):
        g.coords([[QQ(1), 0, 0], [0, 0, 0], [0, 0, 0]])
