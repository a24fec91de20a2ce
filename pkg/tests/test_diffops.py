from hypothesis import given, strategies as st
from sympy import QQ

from tractorbgg.diffops import DiffOp, polynomial_test_family
from tractorbgg.exact_arith import CoordinateRing
from tractorbgg.linalg import SMat

K = CoordinateRing(2)
coef = st.integers(-3, 3)


def _poly(draw):
    return K.poly([(draw(coef), [draw(st.integers(0, 2)), draw(st.integers(0, 2))])
                   for _ in range(2)])


@st.composite
def diffops(draw, shape=(2, 2)):
    terms = {}
    for alpha in [(0, 0), (1, 0), (0, 1)]:
        m = SMat(shape)
        for i in range(shape[0]):
            for j in range(shape[1]):
                if draw(st.booleans()):
                    m.add_at(i, j, _poly(draw))
        terms[alpha] = m
    return DiffOp(K, shape, terms)


@st.composite
def fields(draw, dim=2):
    return [_poly(draw) for _ in range(dim)]


@given(diffops(), diffops(), fields())
def test_composition_is_sequential_application(A, B, f):
    assert (A @ B).apply(f) == A.apply(B.apply(f))


@given(diffops(), diffops(), fields())
def test_sum_is_linear(A, B, f):
    assert (A + B).apply(f) == [a + b for a, b in zip(A.apply(f), B.apply(f))]


def test_first_order_composition_has_second_derivative():
    d0 = DiffOp(K, (1, 1), {(1, 0): SMat.identity(1)})
    sq = d0 @ d0
    assert sq.order == 2
    x, y = K.gens
    assert sq.apply([x ** 3 * y]) == [6 * x * y]


def test_test_family_size():
    # monomials of degree <= 2 in 2 variables: 6, times 3 components
    assert len(list(polynomial_test_family(K, 3, 2))) == 18


def test_algebraic_operator_is_matrix():
    m = SMat.from_dense([[1, 2], [0, QQ(1, 2)]])
    op = DiffOp.algebraic(K, m)
    x, y = K.gens
    assert op.apply([x, y]) == [x + 2 * y, y / 2]
