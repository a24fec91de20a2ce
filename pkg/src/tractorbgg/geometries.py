"""Example geometries and scenario checks.

Projective patches (flat, random polynomial, metrizable), pointwise
Grassmannian curvature data and the infinitesimal automorphism test.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .connection import ConnectionDatum, InvariantError, ProjectivePatch, complex_of
from .exact_arith import CoordinateRing, from_json
from .formulas import projective_D0
from .gmodule import adjoint_module, grassmann_lambda2
from .graded_lie import build_sl_grassmann
from .linalg import SMat, inverse, nullspace


# projective patches ---------------------------------------------------------

def flat_patch(n: int, K: CoordinateRing | None = None) -> ProjectivePatch:
    K = K or CoordinateRing(n)
    zero = [[[K.zero] * n for _ in range(n)] for _ in range(n)]
    return ProjectivePatch(n, K, zero)


def remove_trace(K, G, n):
    """Gamma^a_bc -= (delta^a_b T_c + delta^a_c T_b)/(n+1), T_b = Gamma^p_pb."""
    T = [sum((G[p][p][b] for p in range(n)), K.zero) for b in range(n)]
    f = QQ(1, n + 1)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                corr = (T[c] if a == b else K.zero) + (T[b] if a == c else K.zero)
                if corr:
                    G[a][b][c] = G[a][b][c] - corr * f
    return G


def sample_projective_patch(n: int, seed: int, degree: int = 2, terms: int = 3,
                            max_degree: int = 4) -> ProjectivePatch:
    """Random symmetric, trace-free polynomial Gamma (deterministic per seed)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= degree <= max_degree:
        raise ValueError(f"degree must lie in [0, {max_degree}]")
    rng = random.Random(seed)
    K = CoordinateRing(n)
    monos = [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) <= degree]

    def rp():
        k = min(terms, len(monos))
        return K.poly([(QQ(rng.randint(-3, 3), rng.randint(1, 3)), e)
                       for e in rng.sample(monos, k)])

    G = [[[K.zero] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                G[a][b][c] = G[a][c][b] = rp()
    return ProjectivePatch(n, K, remove_trace(K, G, n))


def load_geometry(text: str) -> ProjectivePatch:
    """Parse the geometry JSON {"n": .., "gamma": [{"a","b","c","poly"}, ...]}.

    A missing (a, c, b) entry is filled from (a, b, c); two entries that
    disagree raise InvariantError.  Trace-freeness is validated, not imposed.
    """
    data = json.loads(text)
    if not isinstance(data, dict) or not isinstance(data.get("n"), int):
        raise ValueError("geometry must be an object with integer 'n'")
    n = data["n"]
    if n < 2:
        raise ValueError("n must be at least 2")
    rational = any(isinstance(e.get("poly"), dict) for e in data.get("gamma", []))
    K = CoordinateRing(n, rational_functions=rational)
    given = {}
    for e in data.get("gamma", []):
        a, b, c = e["a"], e["b"], e["c"]
        if not all(isinstance(i, int) and 0 <= i < n for i in (a, b, c)):
            raise ValueError(f"index out of range in {e}")
        val = from_json(K, e["poly"])
        for key in ((a, b, c), (a, c, b)):
            if key in given and given[key][0] != val and given[key][1]:
                raise InvariantError(f"conflicting entries for Gamma^{a}_{b}{c}")
        given[(a, b, c)] = (val, True)
        given.setdefault((a, c, b), (val, False))
    G = [[[K.zero] * n for _ in range(n)] for _ in range(n)]
    for (a, b, c), (v, _) in given.items():
        G[a][b][c] = v
    return ProjectivePatch(n, K, G)


def dump_geometry(patch: ProjectivePatch) -> str:
    from .exact_arith import to_json
    out = []
    n, G = patch.n, patch.gamma
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                if G[a][b][c]:
                    out.append({"a": a, "b": b, "c": c, "poly": to_json(G[a][b][c])})
    return json.dumps({"n": n, "gamma": out}, sort_keys=True)


# metrizable patches ---------------------------------------------------------

@dataclass
class MetrizablePatch:
    n: int
    metric: list
    inverse: list
    patch: ProjectivePatch

    @property
    def sigma(self):
        """Canonical first BGG solution sigma^ab = g^ab."""
        return self.inverse

    def d0_residual(self):
        out = projective_D0(self.patch, self.inverse)
        return [v for c in out for row in c for v in row if v]


def metrizable_patch(metric, K: CoordinateRing) -> MetrizablePatch:
    """Levi-Civita connection of a unimodular metric given by rational entries."""
    n = K.nvars
    F = K.to_field()
    g = [[F.convert(metric[a][b]) for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if g[a][b] != g[b][a]:
                raise InvariantError("metric is not symmetric")
    M = DomainMatrix(g, (n, n), F.domain.to_domain())
    if M.det() != F.one:
        raise InvariantError("metric is not unimodular")
    inv = M.inv().to_list()
    gi = [[F.convert(inv[a][b]) for b in range(n)] for a in range(n)]
    dg = [[[F.derivative(g[a][b], c) for c in range(n)] for b in range(n)] for a in range(n)]
    half = QQ(1, 2)
    G = [[[F.zero] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(b, n):
                v = sum((gi[a][d] * (dg[d][c][b] + dg[d][b][c] - dg[b][c][d])
                         for d in range(n) if gi[a][d]), F.zero) * half
                G[a][b][c] = G[a][c][b] = v
    return MetrizablePatch(n, g, gi, ProjectivePatch(n, F, G))


def unimodular_example(n: int):
    """diag(f, 1/f, 1, ...) with f = 1 + x0^2, conjugated by a unipotent matrix for n >= 3."""
    F = CoordinateRing(n, rational_functions=True)
    x = F.gens
    f = F.one + x[0] ** 2
    D = [[F.zero] * n for _ in range(n)]
    D[0][0], D[1][1] = f, F.one / f
    for a in range(2, n):
        D[a][a] = F.one
    if n < 3:
        return D, F
    U = [[F.one if a == b else F.zero for b in range(n)] for a in range(n)]
    U[0][2] = x[1]
    U[1][2] = QQ(1, 2) * x[0]
    g = [[sum((U[r][a] * D[r][s] * U[s][b] for r in range(n) for s in range(n)), F.zero)
          for b in range(n)] for a in range(n)]
    return g, F


# grassmannian pointwise data --------------------------------------------------

@dataclass
class GrassmannAlgebraicData:
    """Pointwise curvature of a normal torsion-free Grassmannian structure.

    K[(c1, c2)] is an element of g_0 + g_1 (coordinates in the algebra basis)
    for c1 < c2 with c = alpha * q + alpha'.  C, Cp and A are the unprimed
    block, primed block and g_1 part, indexed [c1][c2][..].
    """
    q: int
    K: dict
    normal: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def algebra(self):
        return grassmann_algebra(self.q)

    def block(self, c1, c2):
        if c1 == c2:
            return None
        g = self.algebra
        if c1 < c2:
            return g.matrix(self.K[(c1, c2)], QQ(0))
        m = g.matrix(self.K[(c2, c1)], QQ(0))
        return [[-v for v in row] for row in m]

    def C(self, c1, c2, b, e):
        """Unprimed block entry (b, e) of K_c1c2."""
        if c1 == c2:
            return QQ(0)
        return self.block(c1, c2)[b][e]

    def Cp(self, c1, c2, b, e):
        """Primed block entry (b', e') of K_c1c2."""
        if c1 == c2:
            return QQ(0)
        p = self.algebra.p
        return self.block(c1, c2)[p + b][p + e]

    def A(self, c1, c2, a, i):
        """g_1 component: coefficient of Z[a, i] in K_c1c2."""
        if c1 == c2:
            return QQ(0)
        g = self.algebra
        x = self.K[(min(c1, c2), max(c1, c2))]
        v = x[g.plus[a * g.q + i]]
        return v if c1 < c2 else -v

    def traces(self):
        """Every contraction of an upper index of C, C' with a lower one, by name.

        Upper indices of C^{gamma alpha beta}_{gamma' phi' eta} are the unprimed
        form indices and the block row; the only unprimed lower index is the
        block column, and dually for C'.  Contractions into the second form
        index repeat those into the first by antisymmetry.
        """
        g = self.algebra
        p, q, m = g.p, g.q, g.m
        cs = lambda a, i: a * q + i
        out = {"C.endo": [], "Cp.endo": [], "C.form": [], "Cp.form": []}
        for c1 in range(m):
            for c2 in range(m):
                out["C.endo"].append(sum((self.C(c1, c2, b, b) for b in range(p)), QQ(0)))
                out["Cp.endo"].append(sum((self.Cp(c1, c2, b, b) for b in range(q)), QQ(0)))
        for a2 in range(p):
            for i1 in range(q):
                for i2 in range(q):
                    for e in range(p):
                        out["C.form"].append(sum((self.C(cs(t, i1), cs(a2, i2), t, e)
                                                  for t in range(p)), QQ(0)))
        for a1 in range(p):
            for a2 in range(p):
                for i2 in range(q):
                    for e in range(q):
                        out["Cp.form"].append(sum((self.Cp(cs(a1, t), cs(a2, i2), t, e)
                                                   for t in range(q)), QQ(0)))
        return out

    def trace_residuals(self):
        """Nonzero traces only; empty for valid data."""
        return {k: [v for v in vs if v] for k, vs in self.traces().items() if any(vs)}


_ALG = {}


def grassmann_algebra(q):
    if q not in _ALG:
        _ALG[q] = build_sl_grassmann(q)
    return _ALG[q]


def _adjoint(q):
    g = grassmann_algebra(q)
    key = ("adjoint", q)
    if key not in _ALG:
        _ALG[key] = adjoint_module(g)
    return _ALG[key]


def _rq(rng):
    return QQ(rng.randint(-5, 5), rng.randint(1, 4))


def _g0_indices(q):
    V = _adjoint(q)
    S = complex_of(V).space(2)
    return S, [i for i in range(S.dim) if S.slot(i) == 1]


def _chain_to_data(q, x, normal=True, meta=None):
    V = _adjoint(q)
    S = complex_of(V).space(2)
    Kc = {form: [x[fp * V.dim + b] for b in range(V.dim)] for form, fp in S.form_pos.items()}
    return GrassmannAlgebraicData(q, Kc, normal, meta or {})


def trace_free_projector(q):
    """Orthogonal projector (over Q) onto the trace-free g_0-valued 2-chains."""
    key = ("tf", q)
    if key in _ALG:
        return _ALG[key]
    S, idx = _g0_indices(q)
    cols = []
    for i in idx:
        x = [QQ(0)] * S.dim
        x[i] = QQ(1)
        tr = _chain_to_data(q, x).traces()
        cols.append([v for k in sorted(tr) for v in tr[k]])
    T = SMat.column_stack(len(cols[0]), cols)
    N = nullspace(T)
    P = N @ inverse(N.T @ N) @ N.T
    _ALG[key] = (idx, P)
    return idx, P


def grassmann_pointwise(q: int, seed: int, normal: bool = True,
                        bianchi: bool = False) -> GrassmannAlgebraicData:
    """Random pointwise curvature in Lambda^2 g_-1* (x) (g_0 + g_1).

    The g_0 part is projected exactly onto the subspace where every trace of
    C and C' vanishes.  With ``bianchi`` it is instead projected onto the
    harmonic part, as the Bianchi identity forces when the torsion vanishes.
    The g_1 part (A) has no possible traces and is left free.
    ``normal=False`` skips the projection and serves as a control.
    """
    if q <= 2:
        raise ValueError("q must be greater than 2")
    rng = random.Random(seed)
    S, idx = _g0_indices(q)
    x = [_rq(rng) if S.slot(i) in (1, 2) else QQ(0) for i in range(S.dim)]
    if normal:
        if bianchi:
            h = complex_of(_adjoint(q)).hodge(2)
            x0 = h.P_harmonic.apply([v if S.slot(i) == 1 else QQ(0) for i, v in enumerate(x)])
            for i in idx:
                x[i] = x0[i]
        else:
            _, P = trace_free_projector(q)
            y = P.apply([x[i] for i in idx])
            for k, i in enumerate(idx):
                x[i] = y[k]
    return _chain_to_data(q, x, normal, {"seed": seed, "bianchi": bianchi})


def curvature_chain(data: GrassmannAlgebraicData, module):
    """rho(K) as a C_2 x V matrix."""
    cx = complex_of(module)
    S = cx.space(2)
    dv = module.dim
    out = SMat((S.dim, dv))
    for form, fp in S.form_pos.items():
        for i, j, v in module.rho(data.K[form]).items():
            out.rows.setdefault(fp * dv + i, {})[j] = v
    return out


def delstar_K(data: GrassmannAlgebraicData, module=None):
    """del*(K . s) as a C_1 x V matrix."""
    module = module or grassmann_lambda2(data.algebra)
    cx = complex_of(module)
    return cx.codifferential(2).matrix @ curvature_chain(data, module)


def first_deformation(data: GrassmannAlgebraicData, module=None):
    """Phi_1 = -box^{-1} del*(K . s)."""
    module = module or grassmann_lambda2(data.algebra)
    cx = complex_of(module)
    return -(cx.hodge(1).box_plus @ delstar_K(data, module))


# infinitesimal automorphisms ----------------------------------------------------

def kappa_insertion(data: GrassmannAlgebraicData, s):
    """Chain in C_1 of the adjoint module: xi -> K(Pi(s), xi), Pi(s) the g_-1 part."""
    g = data.algebra
    V = _adjoint(data.q)
    S = complex_of(V).space(1)
    xi = [s[g.minus[c]] for c in range(g.m)]
    out = [QQ(0)] * S.dim
    for c in range(g.m):
        fp = S.form_pos[(c,)]
        for d in range(g.m):
            if not xi[d] or d == c:
                continue
            k = data.K[(min(d, c), max(d, c))]
            sgn = 1 if d < c else -1
            for b in range(V.dim):
                if k[b]:
                    out[fp * V.dim + b] += sgn * xi[d] * k[b]
    return out


def automorphism_membership(data: GrassmannAlgebraicData, s):
    """(member, witness): is xi -> K(Pi(s), xi) in Im del* of the adjoint module."""
    cx = complex_of(_adjoint(data.q))
    chain = kappa_insertion(data, s)
    h = cx.hodge(1)
    proj = h.P_del_star.apply(chain)
    res = [a - b for a, b in zip(chain, proj)]
    if any(res):
        return False, {i: str(v) for i, v in enumerate(res) if v}
    return True, None


def random_adjoint_element(q, seed):
    rng = random.Random(seed)
    g = grassmann_algebra(q)
    return [_rq(rng) for _ in range(g.dim)]
