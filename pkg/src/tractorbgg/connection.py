"""Tractor connections on a coordinate patch in a fixed Weyl gauge.

A gauge supplies the Cartan potential omega_c in g (x) K for each coordinate
direction c.  For a projective patch

    omega_c = X_c + Gamma_c + sum_a P_ca Z^a,   (Gamma_c)^a_b = Gamma^a_cb,

so on any module the tractor connection is d_c + rho(omega_c).  A deformation
Phi is an End V valued 1-form stored as a matrix C_1 x V (rows: chain
coordinates of the 1-form, columns: V basis).  Operators between form
degrees are ``DiffOp``s, and the curvature is read off as the (algebraic)
composite d^nabla o nabla.
"""
from __future__ import annotations

from functools import cached_property

from sympy import QQ

from .diffops import DiffOp
from .exact_arith import CoordinateRing
from .graded_lie import GradedLieAlgebra, build_sl_grassmann, build_sl_projective
from .gmodule import GModule
from .kostant import ChainSpace, KostantComplex, value_operator, wedge_matrix
from .linalg import SMat


def complex_of(module: GModule) -> KostantComplex:
    cx = module.meta.get("complex")
    if cx is None:
        cx = module.meta["complex"] = KostantComplex(module)
    return cx


class InvariantError(ValueError):
    pass


class Gauge:
    """Base class: subclasses provide algebra, ring K, m and omega(c)."""

    algebra: GradedLieAlgebra
    K: CoordinateRing

    @property
    def m(self):
        return self.algebra.m

    def omega(self, c):
        raise NotImplementedError

    @cached_property
    def omegas(self):
        return [self.omega(c) for c in range(self.m)]

    @cached_property
    def cartan_curvature(self):
        """K_{c1c2} = d_c1 omega_c2 - d_c2 omega_c1 + [omega_c1, omega_c2], c1 < c2."""
        g, K = self.algebra, self.K
        out = {}
        for c1 in range(self.m):
            for c2 in range(c1 + 1, self.m):
                w1, w2 = self.omegas[c1], self.omegas[c2]
                br = g.bracket(w1, w2)
                val = []
                for b in range(g.dim):
                    v = K.derivative(w2[b], c1) - K.derivative(w1[b], c2) + br[b]
                    val.append(K.convert(v))
                out[(c1, c2)] = val
        return out


class ProjectivePatch(Gauge):
    """Torsion-free, volume preserving connection Gamma^a_bc on an n-dim patch."""

    def __init__(self, n: int, K: CoordinateRing, gamma, validate: bool = True):
        if K.nvars != n:
            raise ValueError("coordinate ring has the wrong number of variables")
        self.n = n
        self.K = K
        self.gamma = [[[K.convert(gamma[a][b][c]) for c in range(n)] for b in range(n)]
                      for a in range(n)]
        self.algebra = build_sl_projective(n)
        if validate:
            self.validate()

    def __repr__(self):
        return f"ProjectivePatch(n={self.n}, {self.K})"

    def validate(self):
        n, G = self.n, self.gamma
        for a in range(n):
            for b in range(n):
                for c in range(b + 1, n):
                    if G[a][b][c] != G[a][c][b]:
                        raise InvariantError(f"torsion: Gamma^{a}_{b}{c} != Gamma^{a}_{c}{b}")
        for b in range(n):
            tr = sum((G[p][p][b] for p in range(n)), self.K.zero)
            if tr:
                raise InvariantError(f"not volume preserving: Gamma^p_p{b} = {tr}")
        return True

    @property
    def is_flat_gauge(self):
        return not any(v for a in self.gamma for b in a for v in b)

    @cached_property
    def riemann(self):
        """R[c1][c2][a][b] = R_{c1 c2}^a_b."""
        n, G, K = self.n, self.gamma, self.K
        R = [[[[K.zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for c1 in range(n):
            for c2 in range(n):
                if c1 == c2:
                    continue
                for a in range(n):
                    for b in range(n):
                        v = K.derivative(G[a][c2][b], c1) - K.derivative(G[a][c1][b], c2)
                        for p in range(n):
                            v += G[a][c1][p] * G[p][c2][b] - G[a][c2][p] * G[p][c1][b]
                        R[c1][c2][a][b] = v
        return R

    @cached_property
    def ricci(self):
        n, R = self.n, self.riemann
        return [[sum((R[p][a][p][b] for p in range(n)), self.K.zero) for b in range(n)]
                for a in range(n)]

    @cached_property
    def schouten(self):
        n = self.n
        f = QQ(1, n - 1)
        return [[self.ricci[a][b] * f for b in range(n)] for a in range(n)]

    @cached_property
    def weyl(self):
        """C_{c1c2}^a_b = R_{c1c2}^a_b - delta^a_c1 P_c2b + delta^a_c2 P_c1b."""
        n, R, P = self.n, self.riemann, self.schouten
        C = [[[[R[c1][c2][a][b] for b in range(n)] for a in range(n)] for c2 in range(n)]
             for c1 in range(n)]
        for c1 in range(n):
            for c2 in range(n):
                for b in range(n):
                    C[c1][c2][c1][b] -= P[c2][b]
                    C[c1][c2][c2][b] += P[c1][b]
        return C

    def covariant_derivative_2form(self, T, c):
        """D_c T_ab for a covariant 2-tensor T."""
        n, G, K = self.n, self.gamma, self.K
        out = [[K.zero] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                v = K.derivative(T[a][b], c)
                for p in range(n):
                    v -= G[p][c][a] * T[p][b] + G[p][c][b] * T[a][p]
                out[a][b] = v
        return out

    @cached_property
    def cotton(self):
        """A[a][c1][c2] = D_c1 P_c2a - D_c2 P_c1a."""
        n, P = self.n, self.schouten
        DP = [self.covariant_derivative_2form(P, c) for c in range(n)]
        return [[[DP[c1][c2][a] - DP[c2][c1][a] for c2 in range(n)] for c1 in range(n)]
                for a in range(n)]

    def omega(self, c):
        g, K, n = self.algebra, self.K, self.n
        N = n + 1
        mat = [[K.zero] * N for _ in range(N)]
        mat[1 + c][0] = K.one
        for a in range(n):
            for b in range(n):
                mat[1 + a][1 + b] = self.gamma[a][c][b]
        for a in range(n):
            mat[0][1 + a] = -self.schouten[c][a]
        return g.coords_general(mat, K.zero)

    # invariant checks used by tests and the verify suite
    def weyl_traces_vanish(self):
        n, C = self.n, self.weyl
        z = self.K.zero
        for x in range(n):
            for y in range(n):
                if sum((C[p][x][p][y] for p in range(n)), z):
                    return False
                if sum((C[x][p][p][y] for p in range(n)), z):
                    return False
                if sum((C[x][y][p][p] for p in range(n)), z):
                    return False
        return True

    def first_bianchi_holds(self):
        n, R = self.n, self.riemann
        for c1 in range(n):
            for c2 in range(n):
                for b in range(n):
                    for a in range(n):
                        if R[c1][c2][a][b] + R[c2][b][a][c1] + R[b][c1][a][c2]:
                            return False
        return True

    def weyl_divergence(self):
        """D_p C_{c1c2}^p_a as an array [a][c1][c2]."""
        n, G, C, K = self.n, self.gamma, self.weyl, self.K
        out = [[[K.zero] * n for _ in range(n)] for _ in range(n)]
        for a in range(n):
            for c1 in range(n):
                for c2 in range(n):
                    v = K.zero
                    for p in range(n):
                        t = K.derivative(C[c1][c2][p][a], p)
                        for r in range(n):
                            t -= G[r][p][c1] * C[r][c2][p][a] + G[r][p][c2] * C[c1][r][p][a]
                            t += G[p][p][r] * C[c1][c2][r][a] - G[r][p][a] * C[c1][c2][p][r]
                        v += t
                    out[a][c1][c2] = v
        return out


class FlatGrassmannChart(Gauge):
    """Flat coordinates on R^{2q} (Gamma = 0) with a free symmetric Schouten field.

    Used for the Grassmannian splitting operators, where derivatives are formal
    and curvature enters only through P.  The Schouten term acts through
    ``schouten_sign * sum_d P_cd Z^d``.
    """

    def __init__(self, q: int, K: CoordinateRing, schouten, schouten_sign=1):
        self.q = q
        self.algebra = build_sl_grassmann(q)
        if K.nvars != self.algebra.m:
            raise ValueError("need 2q coordinates")
        self.K = K
        m = self.algebra.m
        self.schouten = [[K.convert(schouten[a][b]) for b in range(m)] for a in range(m)]
        for a in range(m):
            for b in range(m):
                if self.schouten[a][b] != self.schouten[b][a]:
                    raise InvariantError("Schouten field must be symmetric")
        self.schouten_sign = schouten_sign

    def omega(self, c):
        g, K = self.algebra, self.K
        x = g.basis_vector(g.minus[c], K.one, K.zero)
        for d in range(g.m):
            x[g.plus[d]] = self.schouten[c][d] * self.schouten_sign
        return x


class ConnectionDatum:
    """nabla = nabla^omega + Phi on the tractor bundle of ``module``."""

    def __init__(self, gauge: Gauge, module: GModule, phi: SMat | None = None,
                 require_admissible: bool = False):
        if module.algebra.dims != gauge.algebra.dims or module.algebra.N != gauge.algebra.N:
            raise ValueError("module and gauge use different algebras")
        self.gauge = gauge
        self.module = module
        self.K = gauge.K
        self.cx = complex_of(module)
        c1 = self.cx.space(1)
        self.phi = phi if phi is not None else SMat((c1.dim, module.dim))
        if self.phi.shape != (c1.dim, module.dim):
            raise ValueError("deformation has the wrong shape")
        if require_admissible:
            ok, why = self.is_admissible()
            if not ok:
                raise InvariantError(why)

    @property
    def m(self):
        return self.gauge.m

    def with_phi(self, phi):
        return ConnectionDatum(self.gauge, self.module, phi)

    def is_admissible(self):
        """Phi takes values in Im del* pointwise and has homogeneity >= 1."""
        c1 = self.cx.space(1)
        slots = self.module.slots
        for i, j, _ in self.phi.items():
            if c1.homogeneity[i] - slots[j] < 1:
                return False, f"entry ({i},{j}) has homogeneity < 1"
        P = self.cx.hodge(1).P_del_star
        res = P @ self.phi - self.phi
        if not res.is_zero():
            return False, "Phi does not take values in Im del*"
        return True, ""

    def phi_component(self, c) -> SMat:
        dv = self.module.dim
        rows = {}
        for i, r in self.phi.rows.items():
            f, v = divmod(i, dv)
            if f == c:
                rows[v] = dict(r)
        return SMat((dv, dv), rows)

    @cached_property
    def potentials(self):
        return [self.module.rho(self.gauge.omegas[c]) + self.phi_component(c)
                for c in range(self.m)]

    def ext_d_op(self, k) -> DiffOp:
        """d^nabla from k-forms to (k+1)-forms."""
        if k not in self._ext_cache:
            src, tgt = self.cx.space(k), self.cx.space(k + 1)
            K = self.K
            terms = {}
            order0 = SMat((tgt.dim, src.dim))
            for c in range(self.m):
                W = wedge_matrix(src, tgt, c)
                alpha = tuple(1 if i == c else 0 for i in range(K.nvars))
                terms[alpha] = W
                order0 = order0 + W @ value_operator(src, self.potentials[c])
            terms[(0,) * K.nvars] = order0
            self._ext_cache[k] = DiffOp(K, (tgt.dim, src.dim), terms)
        return self._ext_cache[k]

    @cached_property
    def _ext_cache(self):
        return {}

    def nabla_op(self) -> DiffOp:
        return self.ext_d_op(0)

    @cached_property
    def base_potentials(self):
        return [self.module.rho(self.gauge.omegas[c]) for c in range(self.m)]

    @cached_property
    def curvature(self) -> SMat:
        """R^nabla as a matrix C_2 x V (End V valued 2-form).

        R = rho(K) + d^{nabla omega} Phi + [Phi ^ Phi], with K the Cartan
        curvature of the gauge.
        """
        C2 = self.cx.space(2)
        dv = self.module.dim
        K = self.K
        out = SMat((C2.dim, dv))
        phis = [self.phi_component(c) for c in range(self.m)]
        base = self.base_potentials
        for (c1, c2), k in self.gauge.cartan_curvature.items():
            blk = self.module.rho(k)
            p1, p2 = phis[c1], phis[c2]
            if not p1.is_zero() or not p2.is_zero():
                blk = (blk + p2.map(lambda v: K.derivative(v, c1))
                       - p1.map(lambda v: K.derivative(v, c2))
                       + base[c1] @ p2 - p2 @ base[c1] - base[c2] @ p1 + p1 @ base[c2]
                       + p1 @ p2 - p2 @ p1)
            off = C2.form_pos[(c1, c2)] * dv
            for i, r in blk.rows.items():
                out.rows[off + i] = dict(r)
        return out

    def curvature_by_composition(self) -> SMat:
        """Same curvature, read off from the operator d^nabla o nabla."""
        comp = self.ext_d_op(1) @ self.ext_d_op(0)
        if any(sum(a) > 0 for a in comp.terms):
            raise ArithmeticError("d^nabla o nabla is not algebraic")
        return comp.order0()


class SectionField:
    def __init__(self, space: ChainSpace, coeffs):
        if len(coeffs) != space.dim:
            raise ValueError("coefficient count does not match chain space")
        self.space = space
        self.coeffs = list(coeffs)

    def __eq__(self, other):
        return self.space.dim == other.space.dim and all(
            not (a - b) for a, b in zip(self.coeffs, other.coeffs))

    def is_zero(self):
        return not any(self.coeffs)


class CurvatureField:
    def __init__(self, space: ChainSpace, matrix: SMat):
        self.space = space
        self.matrix = matrix

    def component(self, c1, c2) -> SMat:
        """R_{c1c2} as an End V matrix (antisymmetric in c1, c2)."""
        if c1 == c2:
            return SMat((self.space.module.dim,) * 2)
        sign = 1
        if c1 > c2:
            c1, c2, sign = c2, c1, -1
        dv = self.space.module.dim
        f = self.space.form_pos[(c1, c2)]
        rows = {i - f * dv: dict(r) for i, r in self.matrix.rows.items() if i // dv == f}
        m = SMat((dv, dv), rows)
        return m if sign == 1 else -m


def tractor_nabla(conn: ConnectionDatum, s: SectionField) -> SectionField:
    if s.space.j != 0 or s.space.module is not conn.module:
        raise ValueError("expected a section of the connection's module")
    return SectionField(conn.cx.space(1), conn.nabla_op().apply(s.coeffs))


def ext_d(conn: ConnectionDatum, phi: SectionField) -> SectionField:
    k = phi.space.j
    return SectionField(conn.cx.space(k + 1), conn.ext_d_op(k).apply(phi.coeffs))


def curvature_of(conn: ConnectionDatum) -> CurvatureField:
    return CurvatureField(conn.cx.space(2), conn.curvature)


def curvature_action(gauge: Gauge, module: GModule, s: SectionField) -> SectionField:
    """(K . s)_{c1c2} = rho(K_{c1c2}) s for the Cartan curvature K of the gauge."""
    cx = complex_of(module)
    C2 = cx.space(2)
    dv = module.dim
    out = [gauge.K.zero] * C2.dim
    for (c1, c2), k in gauge.cartan_curvature.items():
        vals = module.rho(k).apply(s.coeffs)
        base = C2.form_pos[(c1, c2)] * dv
        for v in range(dv):
            if vals[v]:
                out[base + v] = vals[v]
    return SectionField(C2, out)


def derive_curvature_data(patch: ProjectivePatch) -> ProjectivePatch:
    patch.validate()
    for attr in ("riemann", "ricci", "schouten", "weyl", "cotton"):
        getattr(patch, attr)
    return patch
