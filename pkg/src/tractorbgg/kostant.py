"""Chain spaces Lambda^j g_1 (x) V, Kostant's del / del*, the Laplacian and Hodge data.

Conventions (fixed by the projective Sym^2 example):

    (del w)_{c0..cj}      = sum_i (-1)^i X_{ci} . w_{c0..^ci..cj}
    (del* w)_{c1..c(j-1)} = sum_p Z^p . w_{p c1..c(j-1)}

Chains are stored on sorted form-index tuples; index = form_pos * dim V + v.
Everything preserves homogeneity (form degree + V slot), so Hodge data is
computed one homogeneity block at a time.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations

from sympy import QQ

from .gmodule import GModule
from .linalg import SMat, columnspace, hstack, inverse, nullspace, rank, rational_eigenvalues, solve


class ChainSpace:
    def __init__(self, module: GModule, j: int):
        m = module.algebra.m
        if not 0 <= j <= m:
            raise ValueError(f"form degree {j} out of range 0..{m}")
        self.module = module
        self.j = j
        self.m = m
        self.forms = list(combinations(range(m), j))
        self.form_pos = {f: k for k, f in enumerate(self.forms)}
        self.dim = len(self.forms) * module.dim
        dv = module.dim
        self.homogeneity = [j + module.slots[i % dv] for i in range(self.dim)]

    def __repr__(self):
        return f"ChainSpace({self.module.name}, j={self.j}, dim={self.dim})"

    def index(self, form, v):
        return self.form_pos[tuple(form)] * self.module.dim + v

    def split(self, idx):
        f, v = divmod(idx, self.module.dim)
        return self.forms[f], v

    def slot(self, idx):
        return self.module.slots[idx % self.module.dim]

    def block_indices(self, hom):
        return [i for i, h in enumerate(self.homogeneity) if h == hom]

    @cached_property
    def homogeneities(self):
        return sorted(set(self.homogeneity))


class GradedLinearMap:
    def __init__(self, source: ChainSpace, target: ChainSpace, matrix: SMat):
        self.source, self.target, self.matrix = source, target, matrix

    def offset(self, i, j):
        return self.target.homogeneity[i] - self.source.homogeneity[j]

    def blocks(self):
        out = {}
        for i, j, v in self.matrix.items():
            d = self.offset(i, j)
            out.setdefault(d, SMat(self.matrix.shape)).rows.setdefault(i, {})[j] = v
        return out

    def min_offset(self):
        return min(self.blocks(), default=None)

    def __matmul__(self, other):
        return GradedLinearMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        return GradedLinearMap(self.source, self.target, self.matrix + other.matrix)


def gr_extract(m: GradedLinearMap, offset: int) -> GradedLinearMap:
    return GradedLinearMap(m.source, m.target, m.blocks().get(offset, SMat(m.matrix.shape)))


def wedge_matrix(src: ChainSpace, tgt: ChainSpace, c: int) -> SMat:
    """epsilon^c wedge (.) on forms, identity on values: src degree j -> j+1."""
    dv = src.module.dim
    out = SMat((tgt.dim, src.dim))
    for fpos, form in enumerate(src.forms):
        if c in form:
            continue
        g = tuple(sorted(form + (c,)))
        sign = QQ(-1) ** g.index(c)
        tpos = tgt.form_pos[g]
        for v in range(dv):
            out.rows.setdefault(tpos * dv + v, {})[fpos * dv + v] = sign
    return out


def contraction_matrix(src: ChainSpace, tgt: ChainSpace, c: int) -> SMat:
    """Insertion of the c-th tangent vector into the first slot: j -> j-1."""
    dv = src.module.dim
    out = SMat((tgt.dim, src.dim))
    for fpos, form in enumerate(src.forms):
        if c not in form:
            continue
        i = form.index(c)
        h = form[:i] + form[i + 1:]
        sign = QQ(-1) ** i
        tpos = tgt.form_pos[h]
        for v in range(dv):
            out.rows.setdefault(tpos * dv + v, {})[fpos * dv + v] = sign
    return out


def value_operator(space: ChainSpace, a: SMat) -> SMat:
    """Apply an endomorphism of V to the values of every form component."""
    dv = space.module.dim
    out = SMat((space.dim, space.dim))
    nf = len(space.forms)
    for i, j, v in a.items():
        for f in range(nf):
            out.rows.setdefault(f * dv + i, {})[f * dv + j] = v
    return out


class HodgeDecomposition:
    """Ker box (+) Im del (+) Im del* in one chain space, with projectors."""

    def __init__(self, cx: "KostantComplex", j: int):
        self.space = S = cx.space(j)
        self.j = j
        d_in = cx.differential(j - 1).matrix if j > 0 else SMat((S.dim, 0))
        ds_in = cx.codifferential(j + 1).matrix if j < S.m else SMat((S.dim, 0))
        box = cx.laplacian(j).matrix
        dim = S.dim
        harm_cols, imd_cols, imds_cols = [], [], []
        P_harm, P_d, P_ds, box_plus = (SMat((dim, dim)) for _ in range(4))
        self.block_spectra = {}
        for hom in S.homogeneities:
            idx = S.block_indices(hom)
            B_box = box.submatrix(idx, idx)
            ker = columnspace(nullspace(B_box))
            imd = columnspace(d_in.submatrix(idx, range(d_in.shape[1])))
            imds = columnspace(ds_in.submatrix(idx, range(ds_in.shape[1])))
            B = hstack(ker, imd, imds)
            if B.shape[1] != len(idx) or rank(B) != len(idx):
                raise ArithmeticError(f"Hodge decomposition fails in homogeneity {hom}")
            Binv = inverse(B)
            k0, k1 = ker.shape[1], ker.shape[1] + imd.shape[1]
            rows_h = Binv.select_rows(lambda r: r < k0)
            rows_d = Binv.select_rows(lambda r: k0 <= r < k1)
            rows_s = Binv.select_rows(lambda r: r >= k1)
            ph = B.select_cols(lambda c: c < k0) @ rows_h
            pd = B.select_cols(lambda c: k0 <= c < k1) @ rows_d
            ps = B.select_cols(lambda c: c >= k1) @ rows_s
            if imds.shape[1]:
                M = solve(imds, B_box @ imds)
                Minv = inverse(M)
                coords = SMat((imds.shape[1], len(idx)))
                for r, c, v in rows_s.items():
                    coords.rows.setdefault(r - k1, {})[c] = v
                bp = imds @ Minv @ coords
            else:
                bp = SMat((len(idx), len(idx)))
            for P, part in ((P_harm, ph), (P_d, pd), (P_ds, ps), (box_plus, bp)):
                for r, c, v in part.items():
                    P.rows.setdefault(idx[r], {})[idx[c]] = v
            for cols, target in ((ker, harm_cols), (imd, imd_cols), (imds, imds_cols)):
                for c in range(cols.shape[1]):
                    col = [QQ(0)] * dim
                    for r, v in enumerate(cols.column(c)):
                        if v:
                            col[idx[r]] = v
                    target.append(col)
        self.harmonic = SMat.column_stack(dim, harm_cols)
        self.im_del = SMat.column_stack(dim, imd_cols)
        self.im_del_star = SMat.column_stack(dim, imds_cols)
        self.P_harmonic, self.P_del, self.P_del_star = P_harm, P_d, P_ds
        self.box_plus = box_plus
        # harmonic coordinates: row k of Pi picks the coefficient of harmonic column k
        self._harm_coords = solve(self.harmonic, P_harm) if harm_cols else SMat((0, dim))
        self.codiff = cx.codifferential(j).matrix if j > 0 else None

    @property
    def homology_dim(self):
        return self.harmonic.shape[1]

    def projection_matrix(self) -> SMat:
        """Pi_j as a matrix; only meaningful on Ker del*."""
        return self._harm_coords

    def homology_projection(self, chain):
        if self.codiff is not None and any(self.codiff.apply(chain)):
            raise ValueError("chain is not in Ker del*")
        return self._harm_coords.apply(chain)

    def lift(self, h):
        return self.harmonic.apply(h)

    def in_image_of_codiff(self, chain) -> bool:
        res = [a - b for a, b in zip(chain, self.P_del_star.apply(chain))]
        return not any(res)


class KostantComplex:
    """del, del*, box on Lambda^* g_1 (x) V for one module, with caching."""

    def __init__(self, module: GModule):
        self.module = module
        self.algebra = g = module.algebra
        self.m = g.m
        self.X = [module.action[g.minus[c]] for c in range(self.m)]
        self.Z = [module.action[g.plus[c]] for c in range(self.m)]
        self._spaces, self._d, self._ds, self._box, self._hodge = {}, {}, {}, {}, {}

    def space(self, j) -> ChainSpace:
        if j not in self._spaces:
            self._spaces[j] = ChainSpace(self.module, j)
        return self._spaces[j]

    def differential(self, j) -> GradedLinearMap:
        if not 0 <= j < self.m:
            raise ValueError(f"del is defined for 0 <= j < {self.m}, got {j}")
        if j not in self._d:
            src, tgt = self.space(j), self.space(j + 1)
            mat = SMat((tgt.dim, src.dim))
            for c in range(self.m):
                mat = mat + wedge_matrix(src, tgt, c) @ value_operator(src, self.X[c])
            self._d[j] = GradedLinearMap(src, tgt, mat)
        return self._d[j]

    def codifferential(self, j) -> GradedLinearMap:
        if not 1 <= j <= self.m:
            raise ValueError(f"del* is defined for 1 <= j <= {self.m}, got {j}")
        if j not in self._ds:
            src, tgt = self.space(j), self.space(j - 1)
            mat = SMat((tgt.dim, src.dim))
            for c in range(self.m):
                mat = mat + value_operator(tgt, self.Z[c]) @ contraction_matrix(src, tgt, c)
            self._ds[j] = GradedLinearMap(src, tgt, mat)
        return self._ds[j]

    def laplacian(self, j) -> GradedLinearMap:
        if j not in self._box:
            S = self.space(j)
            mat = SMat((S.dim, S.dim))
            if j > 0:
                mat = mat + self.differential(j - 1).matrix @ self.codifferential(j).matrix
            if j < self.m:
                mat = mat + self.codifferential(j + 1).matrix @ self.differential(j).matrix
            self._box[j] = GradedLinearMap(S, S, mat)
        return self._box[j]

    def hodge(self, j) -> HodgeDecomposition:
        if j not in self._hodge:
            self._hodge[j] = HodgeDecomposition(self, j)
        return self._hodge[j]

    def spectrum(self, j) -> dict:
        """V-slot -> {eigenvalue: multiplicity} for box on j-chains."""
        S = self.space(j)
        box = self.laplacian(j).matrix
        out = {}
        for hom in S.homogeneities:
            idx = S.block_indices(hom)
            out[hom - j] = rational_eigenvalues(box.submatrix(idx, idx))
        return out

    def disjointness_defect(self, j) -> int:
        """dim (Ker del* cap Im del) in j-chains; Kostant says 0."""
        S = self.space(j)
        if j == 0:
            return 0
        imd = columnspace(self.differential(j - 1).matrix)
        if imd.shape[1] == 0:
            return 0
        # kernel of del* restricted to Im del
        return imd.shape[1] - rank(self.codifferential(j).matrix @ imd)
