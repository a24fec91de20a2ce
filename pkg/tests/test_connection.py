import json

import pytest
import sympy as sp

from tractorbgg.connection import ConnectionDatum, InvariantError
from tractorbgg.geometries import (dump_geometry, flat_patch, load_geometry, metrizable_patch,
                                   sample_projective_patch, unimodular_example)
from tractorbgg.gmodule import adjoint_module, projective_sym2
from tractorbgg.linalg import SMat


@pytest.fixture(scope="module")
def patch():
    return sample_projective_patch(3, 11)


def test_flat_patch_has_zero_curvature():
    fp = flat_patch(3)
    conn = ConnectionDatum(fp, projective_sym2(fp.algebra))
    assert conn.curvature.is_zero()
    assert conn.curvature_by_composition().is_zero()


def test_sample_patch_invariants(patch):
    assert patch.weyl_traces_vanish()
    assert patch.first_bianchi_holds()
    G = patch.gamma
    for a in range(3):
        assert not sum((G[r][r][a] for r in range(3)), patch.K.zero)


@pytest.mark.parametrize("make", [projective_sym2, adjoint_module])
def test_curvature_formula_matches_operator_square(patch, make):
    conn = ConnectionDatum(patch, make(patch.algebra))
    assert conn.curvature == conn.curvature_by_composition()


def test_d_nabla_preserves_filtration(patch):
    conn = ConnectionDatum(patch, projective_sym2(patch.algebra))
    for k in (0, 1):
        E = conn.ext_d_op(k)
        S0, S1 = conn.cx.space(k), conn.cx.space(k + 1)
        for alpha, m in E.terms.items():
            for i, j, _ in m.items():
                assert S1.homogeneity[i] - S0.homogeneity[j] + sum(alpha) >= 0


def test_zero_phi_is_admissible_and_wrong_shape_rejected(patch):
    V = projective_sym2(patch.algebra)
    conn = ConnectionDatum(patch, V)
    assert conn.is_admissible()[0]
    with pytest.raises(ValueError):
        ConnectionDatum(patch, V, SMat((3, 3)))


def test_geometry_json_roundtrip(patch):
    again = load_geometry(dump_geometry(patch))
    assert again.gamma == patch.gamma


def test_geometry_json_mirrors_and_conflicts():
    text = json.dumps({"n": 2, "gamma": [{"a": 0, "b": 0, "c": 1, "poly": [["1", [0, 1]]]},
                                         {"a": 1, "b": 1, "c": 1, "poly": [["-1", [0, 1]]]}]})
    p = load_geometry(text)
    assert p.gamma[0][1][0] == p.gamma[0][0][1]
    bad = json.dumps({"n": 2, "gamma": [{"a": 0, "b": 0, "c": 1, "poly": [["1", [0, 1]]]},
                                        {"a": 0, "b": 1, "c": 0, "poly": [["2", [0, 1]]]}]})
    with pytest.raises(InvariantError):
        load_geometry(bad)


def test_geometry_json_rejects_traces():
    text = json.dumps({"n": 2, "gamma": [{"a": 0, "b": 0, "c": 0, "poly": [["1", [0, 0]]]}]})
    with pytest.raises(InvariantError):
        load_geometry(text)


@pytest.mark.parametrize("n", [2, 3])
def test_levi_civita_against_sympy(n):
    g, F = unimodular_example(n)
    mp = metrizable_patch(g, F)
    xs = sp.symbols(f"x1:{n + 1}")
    G = sp.Matrix(n, n, lambda a, b: g[a][b].as_expr())
    Gi = G.inv()
    for a in range(n):
        for b in range(n):
            for c in range(n):
                want = sum(Gi[a, d] * (sp.diff(G[d, c], xs[b]) + sp.diff(G[d, b], xs[c])
                                       - sp.diff(G[b, c], xs[d])) for d in range(n)) / 2
                assert sp.simplify(mp.patch.gamma[a][b][c].as_expr() - want) == 0


def test_non_unimodular_metric_rejected():
    g, F = unimodular_example(2)
    g[0][0] = g[0][0] * 2
    with pytest.raises(InvariantError):
        metrizable_patch(g, F)
