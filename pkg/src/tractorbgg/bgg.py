"""Splitting operators and BGG operators for a square E_k: C_k -> C_(k+1).

Given E_k whose graded part is Kostant's del, the operator T = del* o E_k
restricted to Im del*-valued fields is box + N with N strictly raising
homogeneity.  Its inverse is the finite Neumann series
Q = sum_m (-box^+ N)^m box^+.
"""
from __future__ import annotations

from dataclasses import dataclass

from .connection import ConnectionDatum
from .diffops import DiffOp, polynomial_test_family
from .kostant import KostantComplex
from .linalg import SMat


class GradedPartError(ValueError):
    pass


def check_graded_part(cx: KostantComplex, k: int, E: DiffOp):
    """E must be filtration preserving with graded part del (derivatives count as +1)."""
    src, tgt = cx.space(k), cx.space(k + 1)
    d = cx.differential(k).matrix
    zero = E.zero_index()
    for alpha, m in E.terms.items():
        order = sum(alpha)
        for i, j, v in m.items():
            off = tgt.homogeneity[i] - src.homogeneity[j] + order
            if off < 0:
                return False, f"entry ({i},{j}) of order {order} lowers homogeneity"
            if off == 0 and (order > 0 or v - d[i, j]):
                return False, f"graded part differs from del at ({i},{j})"
    # every entry of del must be present in the offset-0 part
    m0 = E.terms.get(zero, SMat(E.shape))
    for i, j, v in d.items():
        if m0[i, j] - v:
            return False, f"graded part misses del entry ({i},{j})"
    return True, ""


def neumann_inverse(cx: KostantComplex, k: int, E: DiffOp) -> DiffOp:
    ok, why = check_graded_part(cx, k, E)
    if not ok:
        raise GradedPartError(why)
    K = E.K
    S = cx.space(k)
    hodge = cx.hodge(k)
    ds = cx.codifferential(k + 1).matrix
    T = E.left(ds)
    box_part = ds @ cx.differential(k).matrix
    N = T - DiffOp.algebraic(K, box_part)
    bp = DiffOp.algebraic(K, hodge.box_plus)
    step = N.left(-hodge.box_plus)
    term = bp
    Q = bp
    for _ in range(S.module.r + 3):
        term = step @ term
        if term.is_zero():
            return Q
        Q = Q + term
    raise ArithmeticError("Neumann series did not terminate")


@dataclass
class BggOperators:
    k: int
    E: DiffOp
    Q: DiffOp
    L_hat: DiffOp
    L: DiffOp
    D: DiffOp
    complex: KostantComplex

    def splitting(self, h):
        return self.L.apply(h)

    def apply_D(self, h):
        return self.D.apply(h)


def build_bgg(conn: ConnectionDatum, k: int = 0, E: DiffOp | None = None) -> BggOperators:
    cx = conn.cx
    K = conn.K
    E = conn.ext_d_op(k) if E is None else E
    Q = neumann_inverse(cx, k, E)
    S = cx.space(k)
    ds = cx.codifferential(k + 1).matrix
    T = E.left(ds)
    L_hat = DiffOp.identity(K, S.dim) - Q @ T
    lift = cx.hodge(k).harmonic
    L = L_hat.right(lift)
    Pi = cx.hodge(k + 1).projection_matrix()
    D = (E @ L).left(Pi)
    return BggOperators(k, E, Q, L_hat, L, D, cx)


def splitting_properties(ops: BggOperators):
    """The three characterising properties of L_k, each as an operator identity."""
    cx, k, K = ops.complex, ops.k, ops.L.K
    h = cx.hodge(k)
    res = {}
    if k > 0:
        res["im_L_in_ker_del_star"] = ops.L.left(cx.codifferential(k).matrix).is_zero()
    else:
        res["im_L_in_ker_del_star"] = True
    PiL = ops.L.left(h.projection_matrix())
    res["Pi_L_is_identity"] = PiL == DiffOp.identity(K, h.homology_dim)
    res["del_star_E_L_vanishes"] = (ops.E @ ops.L).left(cx.codifferential(k + 1).matrix).is_zero()
    return res


def check_neumann(ops: BggOperators, degree: int = 4):
    """Q o del* o E = Id on Im del*-valued polynomial fields up to ``degree``."""
    cx, k = ops.complex, ops.k
    K = ops.E.K
    P = cx.hodge(k).P_del_star
    T = ops.E.left(cx.codifferential(k + 1).matrix)
    comp = (ops.Q @ T).right(P) - DiffOp.algebraic(K, P)
    if comp.is_zero():
        return True, None
    for f in polynomial_test_family(K, cx.space(k).dim, degree):
        out = comp.apply(f)
        if any(out):
            return False, f
    return True, None


def bgg_operator(ops: BggOperators, h):
    return ops.D.apply(h)


def check_commutes(cx: KostantComplex, E0: DiffOp, E1: DiffOp, L: DiffOp, k: int = 0,
                   degree: int = 3):
    """del* o E_(k+1) o E_k vanishes on Im L_k (tested on polynomial homology fields)."""
    op = (E1 @ E0 @ L).left(cx.codifferential(k + 2).matrix)
    if op.is_zero():
        return True, None
    for f in polynomial_test_family(L.K, L.shape[1], degree):
        out = op.apply(f)
        if any(out):
            return False, {"field": f, "value": out}
    return True, None


def kernel_iso_check(conn: ConnectionDatum, sigma_h, ops: BggOperators | None = None):
    """nabla(L_0 sigma) = 0 and L_0 Pi_0 s = s for s = L_0 sigma."""
    ops = ops or build_bgg(conn, 0)
    s = ops.L.apply(sigma_h)
    parallel = not any(conn.nabla_op().apply(s))
    back = ops.L.apply(conn.cx.hodge(0).homology_projection(s))
    roundtrip = not any(a - b for a, b in zip(back, s))
    solves = not any(ops.D.apply(sigma_h))
    return {"parallel": parallel, "roundtrip": roundtrip, "solves_D0": solves}


def polynomial_kernel_dimension(D: DiffOp, degree: int) -> int:
    """dim of {h polynomial of degree <= degree : D h = 0}, by an exact linear solve."""
    from .linalg import rank
    K = D.K
    fields = list(polynomial_test_family(K, D.shape[1], degree))
    keys = {}
    cols = []
    for f in fields:
        col = {}
        for i, val in enumerate(D.apply(f)):
            if not val:
                continue
            for mono, coeff in K.convert(val).terms():
                col[keys.setdefault((i, mono), len(keys))] = coeff
        cols.append(col)
    rows = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    M = SMat((len(keys), len(fields)), rows)
    return len(fields) - (rank(M) if keys else 0)
