"""Closed-form reference formulas, written on tensor components.

These are independent of the Kostant machinery: they only use the tensor
realisation of the modules and plain index contractions.  The pipeline
results are compared against them.

Projective Sym^2 coordinates: rho = 2 s^00, mu^a = 2 s^0a, sigma^ab = s^ab.
Grassmann Lambda^2 coordinates: v^ab = s^ab, w^a b' = s^a(p+b'),
u^a'b' = s^(p+a')(p+b').
"""
from __future__ import annotations

from sympy import QQ

from .linalg import SMat


# projective ---------------------------------------------------------------

def proj_split(V, coords):
    N = V.algebra.N
    n = N - 1
    t = V.to_tensor(coords)
    rho = 2 * t[0] if t[0] else t[0]
    mu = [2 * t[1 + a] for a in range(n)]
    sigma = [[t[(1 + a) * N + 1 + b] for b in range(n)] for a in range(n)]
    return rho, mu, sigma


def proj_join(V, rho, mu, sigma, zero=0):
    N = V.algebra.N
    n = N - 1
    t = [zero] * (N * N)
    half = QQ(1, 2)
    t[0] = rho * half
    for a in range(n):
        t[1 + a] = t[(1 + a) * N] = mu[a] * half
        for b in range(n):
            t[(1 + a) * N + 1 + b] = sigma[a][b]
    return V.from_tensor(t)


def form1_matrix(V, n, fn, zero):
    """Assemble an End V valued 1-form from fn(c, input coords) -> output coords."""
    dv = V.dim
    m = SMat((n * dv, dv))
    for j in range(dv):
        e = [QQ(0)] * dv
        e[j] = QQ(1)
        for c in range(n):
            out = fn(c, e)
            for i, v in enumerate(out):
                if v:
                    m.rows.setdefault(c * dv + i, {})[j] = v
    return m


def projective_phi(patch, V):
    """(2/n)(-2 A_pcq sigma^pq, C_cp^a_q sigma^pq, 0) as a C_1 x V matrix."""
    n, A, C, K = patch.n, patch.cotton, patch.weyl, patch.K
    f = QQ(2, n)

    def fn(c, e):
        _, _, s = proj_split(V, e)
        top = sum((A[p][c][q] * s[p][q] for p in range(n) for q in range(n) if s[p][q]), K.zero)
        mid = [sum((C[c][p][a][q] * s[p][q] for p in range(n) for q in range(n) if s[p][q]),
                   K.zero) * f for a in range(n)]
        zero_sigma = [[K.zero] * n for _ in range(n)]
        return proj_join(V, -2 * f * top, mid, zero_sigma, K.zero)

    return form1_matrix(V, n, fn, K.zero)


def projective_phi_first_step(patch, V):
    n, C, K = patch.n, patch.weyl, patch.K
    f = QQ(2, n)

    def fn(c, e):
        _, _, s = proj_split(V, e)
        mid = [sum((C[c][p][a][q] * s[p][q] for p in range(n) for q in range(n) if s[p][q]),
                   K.zero) * f for a in range(n)]
        return proj_join(V, K.zero, mid, [[K.zero] * n for _ in range(n)], K.zero)

    return form1_matrix(V, n, fn, K.zero)


def _D_vector(patch, v, c):
    """D_c v^a for a vector field."""
    n, G, K = patch.n, patch.gamma, patch.K
    return [K.derivative(v[a], c) + sum((G[a][c][r] * v[r] for r in range(n)), K.zero)
            for a in range(n)]


def _D_sym2(patch, s, c):
    n, G, K = patch.n, patch.gamma, patch.K
    return [[K.derivative(s[a][b], c)
             + sum((G[a][c][r] * s[r][b] + G[b][c][r] * s[a][r] for r in range(n)), K.zero)
             for b in range(n)] for a in range(n)]


def divergence(patch, s):
    """D_p sigma^pa."""
    n, K = patch.n, patch.K
    Ds = [_D_sym2(patch, s, c) for c in range(n)]
    return [sum((Ds[p][p][a] for p in range(n)), K.zero) for a in range(n)]


def projective_L0_natural(patch, sigma, p_coeff=None):
    """Displayed splitting operator, returned as (rho, mu, sigma) components.

    Components are the natural ones rho = s^00, mu^a = s^0a.  ``p_coeff``
    overrides the displayed coefficient 1/(2n) of the P term.
    """
    n, K, P = patch.n, patch.K, patch.schouten
    cp = QQ(1, 2 * n) if p_coeff is None else p_coeff
    div = divergence(patch, sigma)
    ddiv = sum((_D_vector(patch, div, p)[p] for p in range(n)), K.zero)
    ps = sum((P[p][q] * sigma[p][q] for p in range(n) for q in range(n)), K.zero)
    rho = ddiv * QQ(1, n * (n + 1)) + ps * cp
    mu = [d * QQ(-1, n + 1) for d in div]
    return rho, mu, sigma


def projective_D0(patch, sigma):
    """D_c sigma^ab - 1/(n+1) (delta_c^a D_p sigma^pb + delta_c^b D_p sigma^pa).

    The symmetrisation in the trace term is read unnormalised, which makes
    the result trace-free.
    """
    n, K = patch.n, patch.K
    div = divergence(patch, sigma)
    out = []
    for c in range(n):
        Ds = _D_sym2(patch, sigma, c)
        out.append([[Ds[a][b] - QQ(1, n + 1) * ((div[b] if a == c else 0) + (div[a] if b == c else 0))
                     for b in range(n)] for a in range(n)])
    return out


# grassmann ----------------------------------------------------------------

def grass_split(V, coords):
    g = V.algebra
    N, p, q = g.N, g.p, g.q
    t = V.to_tensor(coords)
    v = [[t[a * N + b] for b in range(p)] for a in range(p)]
    w = [[t[a * N + p + b] for b in range(q)] for a in range(p)]
    u = [[t[(p + a) * N + p + b] for b in range(q)] for a in range(q)]
    return v, w, u


def grass_join(V, v, w, u, zero=0):
    g = V.algebra
    N, p, q = g.N, g.p, g.q
    t = [zero] * (N * N)
    for a in range(p):
        for b in range(p):
            t[a * N + b] = v[a][b]
        for b in range(q):
            t[a * N + p + b] = w[a][b]
            t[(p + b) * N + a] = -w[a][b]
    for a in range(q):
        for b in range(q):
            t[(p + a) * N + p + b] = u[a][b]
    return V.from_tensor(t)


def grassmann_L0(chart, V, u, p_coeff=None, dd_coeff=None, d_coeff=None):
    """Displayed Grassmannian splitting operator on a flat chart with Schouten P.

    v^ab = p_coeff P^ab_t1t2 u^t1t2 + dd_coeff D^[a_t1 D^b]_t2 u^t1t2,
    w^ab' = d_coeff D^a_t u^tb'.  Defaults are the displayed 1/(2q), -1/(1-q),
    1/(1-q).  Tangent index c = alpha * q + alpha'.
    """
    g = V.algebra
    p, q, K = g.p, g.q, chart.K
    cp = QQ(1, 2 * q) if p_coeff is None else p_coeff
    cdd = QQ(-1, 1 - q) if dd_coeff is None else dd_coeff
    cd = QQ(1, 1 - q) if d_coeff is None else d_coeff
    P = chart.schouten
    cs = lambda a, i: a * q + i
    d = K.derivative

    def X(a, b):
        return sum((cp * P[cs(a, t1)][cs(b, t2)] * u[t1][t2]
                    + cdd * d(d(u[t1][t2], cs(a, t1)), cs(b, t2))
                    for t1 in range(q) for t2 in range(q) if u[t1][t2]), K.zero)

    v = [[(X(a, b) - X(b, a)) * QQ(1, 2) for b in range(p)] for a in range(p)]
    w = [[cd * sum((d(u[t][b], cs(a, t)) for t in range(q)), K.zero) for b in range(q)]
         for a in range(p)]
    return v, w, u


def grassmann_D0(chart, u, coeff=None):
    """D^g_g' u^a'b' + coeff delta^[a'_g' D^|g|_t u^t|b'], normalised brackets.

    Returned as out[c][a'][b'] with c = gamma * q + gamma'.
    """
    q, K = chart.q, chart.K
    p = 2
    k = QQ(2, 1 - q) if coeff is None else coeff
    d = K.derivative
    out = []
    for c in range(p * q):
        gm, gp = divmod(c, q)
        div = [sum((d(u[t][b], gm * q + t) for t in range(q)), K.zero) for b in range(q)]
        out.append([[d(u[a][b], c)
                     + k * QQ(1, 2) * ((div[b] if a == gp else K.zero) - (div[a] if b == gp else K.zero))
                     for b in range(q)] for a in range(q)])
    return out


def grassmann_delstar_K(data, V, coeffs=(2, 2, -2), eps=1):
    """Displayed del*(K . s): (cC 2C w + cA A u, cM C' u, 0), times eps.

    C^{g a b}_{g' f e} is the unprimed block entry (b, e) of K at forms
    ((g, g'), (a, f)); C' likewise for the primed block.  The A term is read
    with forms ((g, g'), (a, e')) and g_1 index (b, f'), the display omitting g'.
    Returns the C_1 x V matrix.
    """
    g = V.algebra
    p, q, m = g.p, g.q, g.m
    cC, cA, cM = (QQ(x) for x in coeffs)
    cs = lambda a, i: a * q + i
    half = QQ(1, 2)
    zero = QQ(0)

    def fn(c, e):
        v, w, u = grass_split(V, e)

        def top(a, b):
            t = sum((data.C(c, cs(a, f), b, h) * w[h][f] for h in range(p) for f in range(q)), zero)
            t = t * cC
            t += cA * sum((data.A(c, cs(a, e1), b, f1) * u[e1][f1]
                           for e1 in range(q) for f1 in range(q)), zero)
            return t

        nv = [[(top(a, b) - top(b, a)) * half * eps for b in range(p)] for a in range(p)]
        nw = [[eps * cM * sum((data.Cp(c, cs(a, f), b, h) * u[f][h]
                               for f in range(q) for h in range(q)), zero)
               for b in range(q)] for a in range(p)]
        return grass_join(V, nv, nw, [[zero] * q for _ in range(q)], zero)

    return form1_matrix(V, m, fn, zero)


def grassmann_phi1(data, V, alt=None, sym=None):
    """Displayed Phi_1 on u inputs: alt C'^[g a]b' u + sym C'^(g a)b' u in the middle slot.

    Defaults are the displayed 2/q and 2/(q-2).  Only u columns are filled.
    """
    g = V.algebra
    p, q, m = g.p, g.q, g.m
    ka = QQ(2, q) if alt is None else alt
    ks = QQ(2, q - 2) if sym is None else sym
    cs = lambda a, i: a * q + i
    zero, half = QQ(0), QQ(1, 2)

    def fn(c, e):
        v, w, u = grass_split(V, e)
        gm, gp = divmod(c, q)

        def X(x, y, b):
            return sum((data.Cp(cs(x, gp), cs(y, f), b, h) * u[f][h]
                        for f in range(q) for h in range(q)), zero)

        nw = [[ka * (X(gm, a, b) - X(a, gm, b)) * half + ks * (X(gm, a, b) + X(a, gm, b)) * half
               for b in range(q)] for a in range(p)]
        return grass_join(V, [[zero] * p for _ in range(p)], nw, [[zero] * q for _ in range(q)], zero)

    return form1_matrix(V, m, fn, zero)
