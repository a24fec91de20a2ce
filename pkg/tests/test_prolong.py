import random

import pytest

from tractorbgg.connection import ConnectionDatum
from tractorbgg.formulas import projective_phi
from tractorbgg.geometries import flat_patch, sample_projective_patch
from tractorbgg.gmodule import adjoint_module, projective_sym2
from tractorbgg.prolong import (curvature_change_law, higher_deformation, prolong_connection,
                                random_admissible_phi, skew_term, verify_normalized)


@pytest.fixture(scope="module")
def base():
    patch = sample_projective_patch(3, 4)
    return ConnectionDatum(patch, projective_sym2(patch.algebra))


@pytest.fixture(scope="module")
def result(base):
    return prolong_connection(base)


def test_flat_model_needs_no_correction():
    fp = flat_patch(3)
    res = prolong_connection(ConnectionDatum(fp, projective_sym2(fp.algebra)))
    assert res.phi.is_zero() and res.steps == [] and res.certified


def test_curved_patch_is_not_normal(base):
    assert not verify_normalized(base)[0]


def test_prolongation_is_certified_and_admissible(base, result):
    assert result.certified
    assert verify_normalized(result.connection) == (True, None)
    assert result.connection.is_admissible()[0]


def test_closed_form(base, result):
    assert result.phi == projective_phi(base.gauge, base.module)


def test_steps_rise_in_homogeneity(result):
    hs = [h for h, _ in result.steps]
    assert hs == sorted(hs) and len(set(hs)) == len(hs)


def test_skewed_lift_gives_same_phi(base, result):
    other = prolong_connection(base, "skewed", seed=3)
    assert any(a != b for (_, a), (_, b) in zip(other.steps, result.steps))
    assert other.phi == result.phi


def test_skew_term_is_admissible(base):
    t = skew_term(base, 1, random.Random(0))
    assert base.with_phi(t).is_admissible()[0]


def test_unknown_lift_rejected(base):
    with pytest.raises(ValueError):
        prolong_connection(base, "bogus")


@pytest.mark.parametrize("ibar", [2, 3])
def test_curvature_change_law(base, ibar):
    rng = random.Random(ibar)
    phi = random_admissible_phi(base, ibar, rng)
    assert not phi.is_zero()
    assert curvature_change_law(base, phi, ibar)[0]


def test_adjoint_module_prolongs():
    patch = sample_projective_patch(2, 1)
    res = prolong_connection(ConnectionDatum(patch, adjoint_module(patch.algebra)))
    assert res.certified


def test_higher_deformation_vanishes_on_flat_model():
    fp = flat_patch(3)
    conn = ConnectionDatum(fp, projective_sym2(fp.algebra))
    for k in (0, 1):
        assert higher_deformation(k, conn).phi.is_zero()
