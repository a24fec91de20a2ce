"""|1|-graded sl(N) with block sizes (p, N-p), in the elementary-matrix basis.

Basis order: g_{-1} (tangent index order), then g_0, then g_1 (form index
order).  A tangent index c stands for the pair (alpha, i') with
alpha < p, i' < q, c = alpha*q + i'; X_c = E[p+i', alpha] and the dual form
Z^c = -E[alpha, p+i'].  With this sign the pairing <Z^c, X_d> = -tr(Z^c X_d)
is delta^c_d, and g_1 embeds as in the projective block matrix
[[0, -eta], [0, 0]].

Elements are dense coordinate lists; entries may be any ring elements, so
the same bracket serves constant and field-valued elements.
"""
from __future__ import annotations

from functools import cached_property

from sympy import QQ

from .linalg import SMat, rank


def _elem(N, i, j):
    m = [[QQ(0)] * N for _ in range(N)]
    m[i][j] = QQ(1)
    return m


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n) if a[i][k] and b[k][j]), QQ(0))
             for j in range(n)] for i in range(n)]


def _commutator(a, b):
    ab, ba = _matmul(a, b), _matmul(b, a)
    return [[ab[i][j] - ba[i][j] for j in range(len(a))] for i in range(len(a))]


class GradedLieAlgebra:
    def __init__(self, name: str, N: int, p: int):
        if not 1 <= p < N:
            raise ValueError("block size out of range")
        self.name = name
        self.N, self.p, self.q = N, p, N - p
        q = self.q
        labels, mats, degree = [], [], []
        for a in range(p):
            for i in range(q):
                labels.append(f"X[{a},{i}]")
                mats.append(_elem(N, p + i, a))
                degree.append(-1)
        for i in range(N):
            for j in range(N):
                if i != j and (i < p) == (j < p):
                    labels.append(f"E[{i},{j}]")
                    mats.append(_elem(N, i, j))
                    degree.append(0)
        for k in range(N - 1):
            h = _elem(N, k, k)
            h[k + 1][k + 1] = QQ(-1)
            labels.append(f"H[{k}]")
            mats.append(h)
            degree.append(0)
        for a in range(p):
            for i in range(q):
                z = _elem(N, a, p + i)
                z[a][p + i] = QQ(-1)
                labels.append(f"Z[{a},{i}]")
                mats.append(z)
                degree.append(1)
        self.labels = labels
        self.matrices = mats
        self.degree = degree
        self.dim = len(mats)
        self.m = p * q
        self.minus = list(range(self.m))
        self.zero_part = [b for b in range(self.dim) if degree[b] == 0]
        self.plus = list(range(self.dim - self.m, self.dim))
        self._index = {}
        for b, mat in enumerate(mats):
            if degree[b] != 0 or labels[b].startswith("E"):
                i, j = next((i, j) for i in range(N) for j in range(N) if mat[i][j] and i != j)
                self._index[(i, j)] = (b, mat[i][j])
        self._h0 = self.dim - self.m - (N - 1)
        diag = [QQ(q, N)] * p + [QQ(-p, N)] * q
        self.grading_element = self.coords([[diag[i] if i == j else QQ(0) for j in range(N)]
                                            for i in range(N)])
        self.structure = [[self.coords(_commutator(mats[i], mats[j])) if i != j else None
                           for j in range(self.dim)] for i in range(self.dim)]
        self._sparse_structure = [[{k: v for k, v in enumerate(c) if v} if c else {}
                                   for c in row] for row in self.structure]

    def __repr__(self):
        return f"GradedLieAlgebra({self.name}, dims={self.dims})"

    @property
    def dims(self):
        return (self.m, len(self.zero_part), self.m)

    def tangent_pair(self, c):
        return divmod(c, self.q)

    # coordinates
    def coords(self, mat):
        """Coordinates of a trace-free N x N matrix."""
        N = self.N
        tr = sum((mat[i][i] for i in range(N)), QQ(0))
        if tr:
            raise ValueError("matrix is not trace-free")
        x = [QQ(0)] * self.dim
        for (i, j), (b, sign) in self._index.items():
            x[b] = sign * mat[i][j]
        acc = 0
        for k in range(N - 1):
            acc = acc + mat[k][k]
            x[self._h0 + k] = acc
        return x

    def coords_general(self, mat, zero):
        """Like ``coords`` but for matrices with ring-valued entries."""
        N = self.N
        x = [zero] * self.dim
        for (i, j), (b, sign) in self._index.items():
            x[b] = zero + sign * mat[i][j]
        acc = zero
        for k in range(N - 1):
            acc = acc + mat[k][k]
            x[self._h0 + k] = acc
        tr = acc + mat[N - 1][N - 1]
        if tr:
            raise ValueError("matrix is not trace-free")
        return x

    def matrix(self, x, zero=QQ(0)):
        N = self.N
        out = [[zero] * N for _ in range(N)]
        for b, c in enumerate(x):
            if not c:
                continue
            for i, j in self._support[b]:
                out[i][j] = out[i][j] + c * self.matrices[b][i][j]
        return out

    @cached_property
    def _support(self):
        return [[(i, j) for i in range(self.N) for j in range(self.N) if m[i][j]]
                for m in self.matrices]

    def basis_vector(self, b, one=QQ(1), zero=QQ(0)):
        x = [zero] * self.dim
        x[b] = one
        return x

    def tangent_element(self, xi, zero=QQ(0)):
        x = [zero] * self.dim
        for c, v in enumerate(xi):
            x[self.minus[c]] = v
        return x

    def form_element(self, eta, zero=QQ(0)):
        """sum_c eta_c Z^c."""
        x = [zero] * self.dim
        for c, v in enumerate(eta):
            x[self.plus[c]] = v
        return x

    # bracket
    def bracket(self, x, y):
        zero = 0
        out = [zero] * self.dim
        S = self._sparse_structure
        nzx = [(i, a) for i, a in enumerate(x) if a]
        nzy = [(j, b) for j, b in enumerate(y) if b]
        for i, a in nzx:
            Si = S[i]
            for j, b in nzy:
                if i == j:
                    continue
                ab = a * b
                for k, c in Si[j].items():
                    out[k] = out[k] + c * ab
        return out

    def component(self, x, deg):
        return [v if self.degree[b] == deg else 0 * v for b, v in enumerate(x)]

    # invariants
    def check_jacobi(self):
        S = self._sparse_structure
        d = self.dim
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    tot = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for s, cs in S[a][b].items():
                            if s == c:
                                continue
                            for t, ct in S[s][c].items():
                                tot[t] = tot.get(t, 0) + cs * ct
                    if any(tot.values()):
                        return False, (i, j, k)
        return True, None

    def check_grading(self):
        E = self.grading_element
        for b in range(self.dim):
            br = self.bracket(E, self.basis_vector(b))
            want = [QQ(self.degree[b]) if k == b else QQ(0) for k in range(self.dim)]
            if br != want:
                return False, b
            for b2 in range(self.dim):
                if b2 == b:
                    continue
                for k in self._sparse_structure[b][b2]:
                    if self.degree[k] != self.degree[b] + self.degree[b2]:
                        return False, (b, b2)
        return True, None

    def check_antisymmetry(self):
        d = self.dim
        return all(self.structure[i][j] == [-v for v in self.structure[j][i]]
                   for i in range(d) for j in range(d) if i != j)

    def killing_pairing_rank(self):
        """Rank of the Killing form restricted to g_{-1} x g_1."""
        ad = [self.ad(b) for b in range(self.dim)]
        rows = []
        for x in self.minus:
            rows.append([_trace(ad[x] @ ad[z]) for z in self.plus])
        return rank(SMat.from_dense(rows))

    def ad(self, b) -> SMat:
        m = SMat((self.dim, self.dim))
        for j in range(self.dim):
            if j == b:
                continue
            for k, c in self._sparse_structure[b][j].items():
                m.rows.setdefault(k, {})[j] = c
        return m

    def validate(self):
        if not self.check_antisymmetry():
            raise AssertionError("structure constants not antisymmetric")
        ok, w = self.check_grading()
        if not ok:
            raise AssertionError(f"grading violated at {w}")
        ok, w = self.check_jacobi()
        if not ok:
            raise AssertionError(f"Jacobi fails on {w}")
        return True


def _trace(m: SMat):
    return sum((m[i, i] for i in range(m.shape[0])), QQ(0))


def build_sl_projective(n: int) -> GradedLieAlgebra:
    if n < 2:
        raise ValueError("projective structures need n >= 2")
    return GradedLieAlgebra(f"sl({n + 1}) projective", n + 1, 1)


def build_sl_grassmann(q: int) -> GradedLieAlgebra:
    if q <= 2:
        raise ValueError("Grassmannian structures need q > 2")
    return GradedLieAlgebra(f"sl({q + 2}) grassmann", q + 2, 2)


def bracket(g: GradedLieAlgebra, x, y):
    return g.bracket(x, y)
