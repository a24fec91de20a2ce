"""Representations of a graded Lie algebra and their slot gradings.

Tensor modules keep their realization inside (C^N)^{tensor k}: ``embed`` maps
module coordinates to flattened tensor components and ``extract`` is a left
inverse.  This lets formulas be written in index notation on tensor
components and converted back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, combinations

from sympy import QQ

from .graded_lie import GradedLieAlgebra
from .linalg import SMat


@dataclass(eq=False)
class GModule:
    algebra: GradedLieAlgebra
    name: str
    dim: int
    action: list
    slots: tuple
    labels: list
    embed: SMat | None = None
    extract: SMat | None = None
    tensor_rank: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def r(self):
        return max(self.slots)

    def slot_indices(self, s):
        return [i for i, t in enumerate(self.slots) if t == s]

    def rho(self, x) -> SMat:
        """Action matrix of an element x (coefficients may be field-valued)."""
        out = SMat((self.dim, self.dim))
        for b, c in enumerate(x):
            if not c:
                continue
            for i, j, v in self.action[b].items():
                out.add_at(i, j, c * v)
        return out

    def act(self, x, v):
        return self.rho(x).apply(v)

    def to_tensor(self, v):
        return self.embed.apply(v)

    def from_tensor(self, t):
        return self.extract.apply(t)

    # invariants
    def check_homomorphism(self):
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self.rho(g.structure[i][j])
                rhs = self.action[i] @ self.action[j] - self.action[j] @ self.action[i]
                if lhs != rhs:
                    return False, (i, j)
        return True, None

    def check_grading(self):
        g = self.algebra
        for b in range(g.dim):
            d = g.degree[b]
            for i, j, _ in self.action[b].items():
                if self.slots[i] != self.slots[j] + d:
                    return False, (b, i, j)
        return min(self.slots) == 0, None

    def validate(self):
        ok, w = self.check_homomorphism()
        if not ok:
            raise AssertionError(f"not a representation: {w}")
        ok, w = self.check_grading()
        if not ok:
            raise AssertionError(f"grading not compatible: {w}")
        return True


def _slots_from_grading(algebra, action, dim):
    E = algebra.grading_element
    m = SMat((dim, dim))
    for b, c in enumerate(E):
        if c:
            m = m + action[b].scale(c)
    eig = []
    for i in range(dim):
        row = m.rows.get(i, {})
        if any(j != i for j in row):
            raise ValueError("grading element not diagonal in this basis")
        eig.append(row.get(i, QQ(0)))
    lo = min(eig)
    slots = []
    for e in eig:
        s = e - lo
        if QQ.denom(s) != 1:
            raise ValueError("non-integral shifted grading")
        slots.append(int(s))
    return tuple(slots)


def standard_module(g: GradedLieAlgebra) -> GModule:
    N = g.N
    action = [SMat.from_dense(mat) for mat in g.matrices]
    ident = SMat.identity(N)
    mod = GModule(g, "std", N, action, _slots_from_grading(g, action, N),
                  [f"e{i}" for i in range(N)], ident, ident, 1)
    return mod


def dual_module(V: GModule) -> GModule:
    action = [(-a).T for a in V.action]
    mod = GModule(V.algebra, f"dual({V.name})", V.dim, action,
                  _slots_from_grading(V.algebra, action, V.dim),
                  [f"{lab}*" for lab in V.labels])
    return mod


def _square(V: GModule, pairs, sym: bool, scale, name, label):
    """Sub-module of V (x) V spanned by (anti)symmetrised basis tensors."""
    n, d = V.dim, len(pairs)
    embed = SMat((n * n, d))
    extract = SMat((d, n * n))
    for k, (i, j) in enumerate(pairs):
        w = scale(i, j)
        embed.add_at(i * n + j, k, w)
        if i != j:
            embed.add_at(j * n + i, k, w if sym else -w)
        extract.add_at(k, i * n + j, 1 / w)
    ident = SMat.identity(n)
    action = []
    for a in V.action:
        big = _kron(a, ident) + _kron(ident, a)
        action.append(extract @ big @ embed)
    slots = _slots_from_grading(V.algebra, action, d)
    labels = [label(i, j) for i, j in pairs]
    return GModule(V.algebra, name, d, action, slots, labels, embed, extract, 2)


def _kron(a: SMat, b: SMat) -> SMat:
    n2 = b.shape[0]
    out = SMat((a.shape[0] * n2, a.shape[1] * b.shape[1]))
    for i, j, v in a.items():
        for k, l, w in b.items():
            out.rows.setdefault(i * n2 + k, {})[j * b.shape[1] + l] = v * w
    return out


def sym2(V: GModule, slot_scale: dict | None = None) -> GModule:
    """Symmetric square; coordinate k of pair (i, j) equals tensor entry / scale.

    ``slot_scale`` maps a slot of Sym^2 V to the factor between the coordinate
    and the tensor component s^{ij}; the default is 1 everywhere.
    """
    n = V.dim
    pairs = list(combinations_with_replacement(range(n), 2))
    Vs = V.slots
    slot_scale = slot_scale or {}

    def scale(i, j):
        s = Vs[i] + Vs[j] - 2 * min(Vs)
        return QQ.convert(slot_scale.get(s, 1))

    return _square(V, pairs, True, scale, f"sym2({V.name})",
                   lambda i, j: f"s{i}{j}")


def lambda2(V: GModule) -> GModule:
    pairs = list(combinations(range(V.dim), 2))
    return _square(V, pairs, False, lambda i, j: QQ(1), f"lambda2({V.name})",
                   lambda i, j: f"s{i}{j}")


def adjoint_module(g: GradedLieAlgebra) -> GModule:
    action = [g.ad(b) for b in range(g.dim)]
    slots = tuple(d + 1 for d in g.degree)
    return GModule(g, "adjoint", g.dim, action, slots, list(g.labels))


def projective_sym2(g: GradedLieAlgebra) -> GModule:
    """Sym^2 of the standard module in the coordinates (rho, mu^a, sigma^ab).

    Tensor components are s^00 = rho/2, s^0a = mu^a/2, s^ab = sigma^ab; this
    is the normalisation in which del, del* and the tractor connection take
    their textbook block form.
    """
    mod = sym2(standard_module(g), {2: QQ(1, 2), 1: QQ(1, 2)})
    mod.name = "sym2-std"
    n = g.N - 1
    labels = []
    for i, j in combinations_with_replacement(range(g.N), 2):
        if i == 0 and j == 0:
            labels.append("rho")
        elif i == 0:
            labels.append(f"mu^{j}")
        else:
            labels.append(f"sigma^{i}{j}")
    mod.labels = labels
    mod.meta["n"] = n
    return mod


def grassmann_lambda2(g: GradedLieAlgebra) -> GModule:
    """Lambda^2 of the standard module; slots v (top), w (middle), u (bottom)."""
    mod = lambda2(standard_module(g))
    mod.name = "lambda2-std"
    p = g.p
    labels = []
    for i, j in combinations(range(g.N), 2):
        if j < p:
            labels.append(f"v^{i}{j}")
        elif i < p:
            labels.append(f"w^{i},{j - p}'")
        else:
            labels.append(f"u^{i - p}'{j - p}'")
    mod.labels = labels
    return mod


class EndGrading:
    """Gradings on End V = V (x) V*: entry (i, j) maps basis j to basis i."""

    def __init__(self, module: GModule):
        self.module = module

    def vertical(self, i, j):
        return self.module.slots[i]

    def horizontal(self, i, j):
        return -self.module.slots[j]

    def diagonal(self, i, j):
        return self.vertical(i, j) + self.horizontal(i, j)

    def in_diagonal_filtration(self, m: SMat, ell: int, row_slot=None) -> bool:
        rs = row_slot or (lambda i: self.module.slots[i])
        return all(rs(i) - self.module.slots[j] >= ell for i, j, _ in m.items())

    def in_vertical_filtration(self, m: SMat, ibar: int, row_slot=None) -> bool:
        rs = row_slot or (lambda i: self.module.slots[i])
        return all(rs(i) >= ibar for i, _, _ in m.items())

    def diagonal_piece(self, m: SMat, ell: int) -> SMat:
        out = SMat(m.shape)
        for i, j, v in m.items():
            if self.diagonal(i, j) == ell:
                out.rows.setdefault(i, {})[j] = v
        return out
