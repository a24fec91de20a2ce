import pytest
from sympy import QQ

from tractorbgg.connection import complex_of
from tractorbgg.geometries import (automorphism_membership, grassmann_pointwise, kappa_insertion,
                                   metrizable_patch, random_adjoint_element,
                                   sample_projective_patch, unimodular_example, _adjoint)


def test_sampling_is_deterministic():
    assert sample_projective_patch(3, 5).gamma == sample_projective_patch(3, 5).gamma
    assert sample_projective_patch(3, 5).gamma != sample_projective_patch(3, 6).gamma


@pytest.mark.parametrize("seed", range(3))
def test_normal_data_is_trace_free(seed):
    d = grassmann_pointwise(3, seed)
    assert not d.trace_residuals()


def test_control_breaks_traces():
    assert grassmann_pointwise(3, 0, normal=False).trace_residuals()


def test_curvature_blocks_are_antisymmetric():
    d = grassmann_pointwise(3, 1)
    for c1 in range(6):
        for c2 in range(6):
            if c1 == c2:
                continue
            b1, b2 = d.block(c1, c2), d.block(c2, c1)
            assert all(x == -y for r1, r2 in zip(b1, b2) for x, y in zip(r1, r2))


def test_kappa_insertion_has_homogeneity_at_least_one():
    d = grassmann_pointwise(3, 2, bianchi=True)
    S = complex_of(_adjoint(3)).space(1)
    chain = kappa_insertion(d, random_adjoint_element(3, 9))
    assert any(chain)
    assert all(S.homogeneity[i] >= 1 for i, v in enumerate(chain) if v)


def test_zero_curvature_is_trivially_member():
    d = grassmann_pointwise(3, 0)
    d.K = {k: [QQ(0)] * len(v) for k, v in d.K.items()}
    assert automorphism_membership(d, random_adjoint_element(3, 1)) == (True, None)


@pytest.mark.parametrize("n", [2, 3])
def test_metric_solves_metrizability_equation(n):
    g, F = unimodular_example(n)
    assert metrizable_patch(g, F).d0_residual() == []
