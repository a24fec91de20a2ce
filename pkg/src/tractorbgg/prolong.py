"""Prolongation: the normalised connection and operator-level deformations.

Both iterations follow the same pattern.  Compute the obstruction G
(del* of the curvature, or del* o d^nabla o E_k), take its lowest vertical
block, and subtract box^{-1} of it (box inverted on Im del*, where the block
lives).  Recompute exactly and stop when G vanishes identically.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from sympy import QQ

from .connection import ConnectionDatum, InvariantError
from .diffops import DiffOp, polynomial_test_family
from .linalg import SMat


class ProlongationError(ArithmeticError):
    pass


@dataclass
class ProlongationResult:
    phi: SMat
    steps: list            # [(vertical degree, correction matrix)]
    residual: SMat         # del* R of the final connection, must be zero
    connection: ConnectionDatum

    @property
    def certified(self):
        return self.residual.is_zero()


def _random_poly(K, rng, degree=1):
    terms = []
    for _ in range(2):
        exps = [0] * K.nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(K.nvars)] += 1
        terms.append((QQ(rng.randint(-3, 3), rng.randint(1, 3)), exps))
    return K.poly(terms)


def skew_term(conn: ConnectionDatum, above: int, rng: random.Random, k: int = 0) -> SMat:
    """Random algebraic map C_k -> C_(k+1) with values in Im del*.

    Rows have homogeneity > ``above`` and every entry raises homogeneity by at
    least one, so adding it to a correction is another admissible lift.
    """
    cx = conn.cx
    src, tgt = cx.space(k), cx.space(k + 1)
    raw = SMat((tgt.dim, src.dim))
    for i in range(tgt.dim):
        if tgt.homogeneity[i] <= above:
            continue
        for j in range(src.dim):
            if tgt.homogeneity[i] - src.homogeneity[j] >= 1 and rng.random() < 0.3:
                raw.add_at(i, j, _random_poly(conn.K, rng))
    return cx.hodge(k + 1).P_del_star @ raw


def normalization_residual(conn: ConnectionDatum) -> SMat:
    return conn.cx.codifferential(2).matrix @ conn.curvature


def verify_normalized(conn: ConnectionDatum):
    """(True, None) if del* R = 0, else (False, witness) for the lowest block."""
    G = normalization_residual(conn)
    if G.is_zero():
        return True, None
    S = conn.cx.space(1)
    low = min(S.homogeneity[i] for i in G.rows)
    block = G.select_rows(lambda i: S.homogeneity[i] == low)
    return False, {"homogeneity": low, "entries": block.nnz, "block": block}


def prolong_connection(base: ConnectionDatum, lift: str = "harmonic", seed: int = 0,
                       check_admissible: bool = True) -> ProlongationResult:
    if check_admissible:
        ok, why = base.is_admissible()
        if not ok:
            raise InvariantError(f"base connection not admissible: {why}")
    cx = base.cx
    S = cx.space(1)
    hodge = cx.hodge(1)
    box = cx.laplacian(1).matrix
    rng = random.Random(seed)
    phi = base.phi
    conn = base
    steps = []
    r = base.module.r
    for _ in range(r + 2):
        G = normalization_residual(conn)
        if G.is_zero():
            return ProlongationResult(phi, steps, G, conn)
        low = min(S.homogeneity[i] for i in G.rows)
        block = G.select_rows(lambda i: S.homogeneity[i] == low)
        if any(S.homogeneity[i] - base.module.slots[j] < 1 for i, j, _ in block.items()):
            raise ProlongationError(f"obstruction of homogeneity < 1 in block {low}")
        corr = -(hodge.box_plus @ block)
        if not (box @ corr + block).is_zero():
            raise ProlongationError(f"block {low} is not in Im del*")
        if lift == "skewed":
            corr = corr + skew_term(base, low, rng)
        elif lift != "harmonic":
            raise ValueError(f"unknown lift strategy {lift!r}")
        steps.append((low, corr))
        phi = phi + corr
        conn = base.with_phi(phi)
    G = normalization_residual(conn)
    if G.is_zero():
        return ProlongationResult(phi, steps, G, conn)
    ok, w = verify_normalized(conn)
    raise ProlongationError(f"residual did not vanish; lowest block {w['homogeneity']}")


def uniqueness_probe(base: ConnectionDatum, strategy_a="harmonic", strategy_b="skewed",
                     seed: int = 0) -> bool:
    a = prolong_connection(base, strategy_a, seed)
    b = prolong_connection(base, strategy_b, seed + 1)
    return a.certified and b.certified and a.phi == b.phi


@dataclass
class OperatorDeformation:
    k: int
    phi: DiffOp
    steps: list = field(default_factory=list)
    obstruction: DiffOp | None = None
    degree_bound: int = 4

    @property
    def order(self):
        return max(self.phi.order, 0) if not self.phi.is_zero() else 0

    @property
    def certified(self):
        return self.obstruction is not None and self.obstruction.is_zero()


def higher_deformation(k: int, conn: ConnectionDatum, lift: str = "harmonic",
                       seed: int = 0) -> OperatorDeformation:
    """Phi_k with del* o d^nabla o (d^nabla + Phi_k) = 0, built as a DiffOp."""
    m = conn.m
    if k + 2 > m:
        raise ValueError(f"need k + 2 <= {m}")
    cx = conn.cx
    S = cx.space(k + 1)
    K = conn.K
    ds = DiffOp.algebraic(K, cx.codifferential(k + 2).matrix)
    dnext = ds @ conn.ext_d_op(k + 1)
    E = conn.ext_d_op(k)
    hodge = cx.hodge(k + 1)
    box = cx.laplacian(k + 1).matrix
    rng = random.Random(seed)
    phi = DiffOp(K, E.shape)
    steps = []
    hom = S.homogeneity
    for _ in range(2 * (conn.module.r + 2) + 2):
        G = dnext @ (E + phi)
        if G.is_zero():
            return OperatorDeformation(k, phi, steps, G)
        low = min(hom[i] for i in G.nonzero_rows())
        block = G.rows_where(lambda i: hom[i] == low)
        corr = block.left(-hodge.box_plus)
        if not (corr.left(box) + block).is_zero():
            raise ProlongationError(f"operator block {low} is not in Im del*")
        if lift == "skewed":
            corr = corr + DiffOp.algebraic(K, skew_term(conn, low, rng, k))
        elif lift != "harmonic":
            raise ValueError(f"unknown lift strategy {lift!r}")
        steps.append((low, corr))
        phi = phi + corr
    G = dnext @ (E + phi)
    if G.is_zero():
        return OperatorDeformation(k, phi, steps, G)
    raise ProlongationError("operator iteration did not terminate")


def verify_operator_identity(conn: ConnectionDatum, deformation: OperatorDeformation,
                             degree: int = 4, components=None):
    """Check del* d^nabla (d^nabla + Phi_k) on polynomial k-form fields."""
    k = deformation.k
    cx = conn.cx
    K = conn.K
    ds = DiffOp.algebraic(K, cx.codifferential(k + 2).matrix)
    full = ds @ conn.ext_d_op(k + 1) @ (conn.ext_d_op(k) + deformation.phi)
    count = 0
    for f in polynomial_test_family(K, cx.space(k).dim, degree, components):
        count += 1
        if any(full.apply(f)):
            return False, count, f
    return True, count, None


def random_admissible_phi(conn: ConnectionDatum, ibar: int, rng: random.Random,
                          density: float = 0.4) -> SMat:
    """Random Phi in Im del*, homogeneity >= 1, rows of homogeneity >= ibar."""
    cx = conn.cx
    S = cx.space(1)
    slots = conn.module.slots
    raw = SMat((S.dim, conn.module.dim))
    for i in range(S.dim):
        if S.homogeneity[i] < ibar:
            continue
        for j in range(conn.module.dim):
            if S.homogeneity[i] - slots[j] >= 1 and rng.random() < density:
                raw.add_at(i, j, _random_poly(conn.K, rng))
    return cx.hodge(1).P_del_star @ raw


def curvature_change_law(conn: ConnectionDatum, phi: SMat, ibar: int):
    """gr_ibar(R_2 - R_1) = (gr del)(gr_ibar Phi), and R_2 - R_1 has nothing below ibar."""
    S1, S2 = conn.cx.space(1), conn.cx.space(2)
    R1 = conn.curvature
    R2 = conn.with_phi(conn.phi + phi).curvature
    diff = R2 - R1
    below = diff.select_rows(lambda i: S2.homogeneity[i] < ibar)
    if not below.is_zero():
        return False, {"below_filtration": below.nnz}
    lhs = diff.select_rows(lambda i: S2.homogeneity[i] == ibar)
    rhs = conn.cx.differential(1).matrix @ phi.select_rows(lambda i: S1.homogeneity[i] == ibar)
    if lhs == rhs:
        return True, None
    return False, {"mismatch_entries": (lhs - rhs).nnz}
