"""Brute-force reference integration for validating assembly quadrature.

Everything here is deliberately independent of the production quadrature
code: element pairs are integrated by recursive dyadic subdivision with
fixed smooth-cell rules, and the band of sub-cell pairs still touching
at the cutoff depth d is omitted. The omitted mass scales like
2^{-d(2-2s)} + O(2^{-d(3-2s)}), so values at the last three depths are
extrapolated twice with those known ratios. The complement (tail) term
uses scipy adaptive quadrature in 1D and its own graded radial scheme in
2D.

Used only by tests; optimized for independence, not speed.
"""

import math

import numpy as np
import scipy.integrate
from numba import njit

from .problem import Domain

__all__ = [
    "OracleInconclusiveError",
    "brute_force_pair",
    "brute_force_entry",
    "brute_force_matrix",
    "oracle_tail_weight",
]


class OracleInconclusiveError(ArithmeticError):
    """Extrapolation of the dyadic values did not converge to tolerance."""


def _norm_const(n, s):
    return (2.0 ** (2.0 * s) * s * math.gamma(s + 0.5 * n)
            / (math.pi ** (0.5 * n) * math.gamma(1.0 - s)))


# ---------------------------------------------------------------------------
# smooth-cell rules (independent constructions)

_G6X, _G6W = np.polynomial.legendre.leggauss(6)

# Strang 7-point degree-5 rule, barycentric points and weights (sum 1)
_SQ15 = math.sqrt(15.0)
_T7L = np.array(
    [[1.0 / 3.0, 1.0 / 3.0]]
    + [[(6.0 - _SQ15) / 21.0, (6.0 - _SQ15) / 21.0],
       [(9.0 + 2.0 * _SQ15) / 21.0, (6.0 - _SQ15) / 21.0],
       [(6.0 - _SQ15) / 21.0, (9.0 + 2.0 * _SQ15) / 21.0]]
    + [[(6.0 + _SQ15) / 21.0, (6.0 + _SQ15) / 21.0],
       [(9.0 - 2.0 * _SQ15) / 21.0, (6.0 + _SQ15) / 21.0],
       [(6.0 + _SQ15) / 21.0, (9.0 - 2.0 * _SQ15) / 21.0]]
)
_T7W = np.array([9.0 / 40.0] + [(155.0 - _SQ15) / 1200.0] * 3
                + [(155.0 + _SQ15) / 1200.0] * 3)


# ---------------------------------------------------------------------------
# 1D recursion


@njit(cache=True)
def _cells_1d(a0, a1, b0, b1, pa, pb, s, dmax, far, gx, gw, S):
    """Depth-labelled smooth contributions S[k][i][j]; band at dmax omitted."""
    nmax = 40000
    st_geo = np.empty((nmax, 4))
    st_pa = np.empty((nmax, 4, 2))
    st_pb = np.empty((nmax, 4, 2))
    st_lab = np.empty(nmax, dtype=np.int64)
    sp = 0
    st_geo[0, 0], st_geo[0, 1], st_geo[0, 2], st_geo[0, 3] = a0, a1, b0, b1
    st_pa[0] = pa
    st_pb[0] = pb
    st_lab[0] = 0
    sp = 1
    e = -1.0 - 2.0 * s
    while sp > 0:
        sp -= 1
        x0, x1, y0, y1 = st_geo[sp, 0], st_geo[sp, 1], st_geo[sp, 2], st_geo[sp, 3]
        qa = st_pa[sp].copy()
        qb = st_pb[sp].copy()
        lab = st_lab[sp]
        la = x1 - x0
        lb = y1 - y0
        dist = max(x0 - y1, y0 - x1, 0.0)
        scale = max(la, lb)
        if dist > 1e-13 * scale:
            if dist >= far * scale:
                # tensor Gauss on the pair
                for ia in range(6):
                    xx = 0.5 * (x0 + x1) + 0.5 * la * gx[ia]
                    wx = 0.5 * la * gw[ia]
                    ta = (xx - x0) / la
                    for ib in range(6):
                        yy = 0.5 * (y0 + y1) + 0.5 * lb * gx[ib]
                        w = wx * 0.5 * lb * gw[ib]
                        tb = (yy - y0) / lb
                        ker = w * abs(xx - yy) ** e
                        for i in range(4):
                            fi = (qa[i, 0] + ta * (qa[i, 1] - qa[i, 0])
                                  - qb[i, 0] - tb * (qb[i, 1] - qb[i, 0]))
                            for j in range(4):
                                fj = (qa[j, 0] + ta * (qa[j, 1] - qa[j, 0])
                                      - qb[j, 0] - tb * (qb[j, 1] - qb[j, 0]))
                                S[lab, i, j] += ker * fi * fj
            else:
                # refine the longer interval; same depth label
                if sp + 2 > nmax - 2:
                    return -1
                if la >= lb:
                    xm = 0.5 * (x0 + x1)
                    pm0 = 0.5 * (qa[:, 0] + qa[:, 1])
                    for half in range(2):
                        st_geo[sp, 0] = x0 if half == 0 else xm
                        st_geo[sp, 1] = xm if half == 0 else x1
                        st_geo[sp, 2], st_geo[sp, 3] = y0, y1
                        for i in range(4):
                            st_pa[sp, i, 0] = qa[i, 0] if half == 0 else pm0[i]
                            st_pa[sp, i, 1] = pm0[i] if half == 0 else qa[i, 1]
                        st_pb[sp] = qb
                        st_lab[sp] = lab
                        sp += 1
                else:
                    ym = 0.5 * (y0 + y1)
                    pm0 = 0.5 * (qb[:, 0] + qb[:, 1])
                    for half in range(2):
                        st_geo[sp, 0], st_geo[sp, 1] = x0, x1
                        st_geo[sp, 2] = y0 if half == 0 else ym
                        st_geo[sp, 3] = ym if half == 0 else y1
                        st_pa[sp] = qa
                        for i in range(4):
                            st_pb[sp, i, 0] = qb[i, 0] if half == 0 else pm0[i]
                            st_pb[sp, i, 1] = pm0[i] if half == 0 else qb[i, 1]
                        st_lab[sp] = lab
                        sp += 1
        else:
            # touching or identical: split both, or drop at the cutoff
            if lab >= dmax:
                continue
            if sp + 4 > nmax - 4:
                return -1
            xm = 0.5 * (x0 + x1)
            ym = 0.5 * (y0 + y1)
            am = 0.5 * (qa[:, 0] + qa[:, 1])
            bm = 0.5 * (qb[:, 0] + qb[:, 1])
            for ha in range(2):
                for hb in range(2):
                    st_geo[sp, 0] = x0 if ha == 0 else xm
                    st_geo[sp, 1] = xm if ha == 0 else x1
                    st_geo[sp, 2] = y0 if hb == 0 else ym
                    st_geo[sp, 3] = ym if hb == 0 else y1
                    for i in range(4):
                        st_pa[sp, i, 0] = qa[i, 0] if ha == 0 else am[i]
                        st_pa[sp, i, 1] = am[i] if ha == 0 else qa[i, 1]
                        st_pb[sp, i, 0] = qb[i, 0] if hb == 0 else bm[i]
                        st_pb[sp, i, 1] = bm[i] if hb == 0 else qb[i, 1]
                    st_lab[sp] = lab + 1
                    sp += 1
    return 0


# ---------------------------------------------------------------------------
# 2D recursion


@njit(cache=True)
def _seg_dist_o(ax, ay, bx, by, cx, cy, dx, dy):
    # distance from segment ab to segment cd by mutual point projection
    best = 1e300
    for it in range(2):
        if it == 1:
            ax, ay, bx, by, cx, cy, dx, dy = cx, cy, dx, dy, ax, ay, bx, by
        ux, uy = bx - ax, by - ay
        uu = ux * ux + uy * uy
        for (px, py) in ((cx, cy), (dx, dy)):
            t = 0.0 if uu == 0.0 else ((px - ax) * ux + (py - ay) * uy) / uu
            t = min(1.0, max(0.0, t))
            qx = ax + t * ux - px
            qy = ay + t * uy - py
            d2 = qx * qx + qy * qy
            if d2 < best:
                best = d2
    return np.sqrt(best)


@njit(cache=True)
def _tri_dist_o(va, vb):
    best = 1e300
    for i in range(3):
        i2 = (i + 1) % 3
        for j in range(3):
            j2 = (j + 1) % 3
            d = _seg_dist_o(va[i, 0], va[i, 1], va[i2, 0], va[i2, 1],
                            vb[j, 0], vb[j, 1], vb[j2, 0], vb[j2, 1])
            if d < best:
                best = d
    return best


@njit(cache=True)
def _tri_diam(v):
    d = 0.0
    for i in range(3):
        j = (i + 1) % 3
        dd = (v[i, 0] - v[j, 0]) ** 2 + (v[i, 1] - v[j, 1]) ** 2
        if dd > d:
            d = dd
    return np.sqrt(d)


@njit(cache=True)
def _quarter(v, pvals, child, out_v, out_p):
    # child 0..3 of midpoint subdivision; pvals (6,3) transported
    m01x, m01y = 0.5 * (v[0, 0] + v[1, 0]), 0.5 * (v[0, 1] + v[1, 1])
    m12x, m12y = 0.5 * (v[1, 0] + v[2, 0]), 0.5 * (v[1, 1] + v[2, 1])
    m20x, m20y = 0.5 * (v[2, 0] + v[0, 0]), 0.5 * (v[2, 1] + v[0, 1])
    p01 = 0.5 * (pvals[:, 0] + pvals[:, 1])
    p12 = 0.5 * (pvals[:, 1] + pvals[:, 2])
    p20 = 0.5 * (pvals[:, 2] + pvals[:, 0])
    if child == 0:
        out_v[0, 0], out_v[0, 1] = v[0, 0], v[0, 1]
        out_v[1, 0], out_v[1, 1] = m01x, m01y
        out_v[2, 0], out_v[2, 1] = m20x, m20y
        out_p[:, 0] = pvals[:, 0]
        out_p[:, 1] = p01
        out_p[:, 2] = p20
    elif child == 1:
        out_v[0, 0], out_v[0, 1] = m01x, m01y
        out_v[1, 0], out_v[1, 1] = v[1, 0], v[1, 1]
        out_v[2, 0], out_v[2, 1] = m12x, m12y
        out_p[:, 0] = p01
        out_p[:, 1] = pvals[:, 1]
        out_p[:, 2] = p12
    elif child == 2:
        out_v[0, 0], out_v[0, 1] = m20x, m20y
        out_v[1, 0], out_v[1, 1] = m12x, m12y
        out_v[2, 0], out_v[2, 1] = v[2, 0], v[2, 1]
        out_p[:, 0] = p20
        out_p[:, 1] = p12
        out_p[:, 2] = pvals[:, 2]
    else:
        out_v[0, 0], out_v[0, 1] = m01x, m01y
        out_v[1, 0], out_v[1, 1] = m12x, m12y
        out_v[2, 0], out_v[2, 1] = m20x, m20y
        out_p[:, 0] = p01
        out_p[:, 1] = p12
        out_p[:, 2] = p20


@njit(cache=True)
def _cells_2d(va, vb, pa, pb, s, dmax, far, t7l, t7w, S):
    nmax = 60000
    st_va = np.empty((nmax, 3, 2))
    st_vb = np.empty((nmax, 3, 2))
    st_pa = np.empty((nmax, 6, 3))
    st_pb = np.empty((nmax, 6, 3))
    st_lab = np.empty(nmax, dtype=np.int64)
    st_va[0] = va
    st_vb[0] = vb
    st_pa[0] = pa
    st_pb[0] = pb
    st_lab[0] = 0
    sp = 1
    e = -1.0 - s  # exponent for squared distance
    fa = np.empty(6)
    fd = np.empty(6)
    while sp > 0:
        sp -= 1
        cva = st_va[sp].copy()
        cvb = st_vb[sp].copy()
        qa = st_pa[sp].copy()
        qb = st_pb[sp].copy()
        lab = st_lab[sp]
        da = _tri_diam(cva)
        db = _tri_diam(cvb)
        scale = max(da, db)
        dist = _tri_dist_o(cva, cvb)
        if dist > 1e-12 * scale:
            if dist >= far * scale:
                a2a = abs((cva[1, 0] - cva[0, 0]) * (cva[2, 1] - cva[0, 1])
                          - (cva[1, 1] - cva[0, 1]) * (cva[2, 0] - cva[0, 0]))
                a2b = abs((cvb[1, 0] - cvb[0, 0]) * (cvb[2, 1] - cvb[0, 1])
                          - (cvb[1, 1] - cvb[0, 1]) * (cvb[2, 0] - cvb[0, 0]))
                for ka in range(7):
                    l1, l2 = t7l[ka, 0], t7l[ka, 1]
                    l0 = 1.0 - l1 - l2
                    xx = l0 * cva[0, 0] + l1 * cva[1, 0] + l2 * cva[2, 0]
                    xy = l0 * cva[0, 1] + l1 * cva[1, 1] + l2 * cva[2, 1]
                    wa = 0.5 * a2a * t7w[ka]
                    for i in range(6):
                        fa[i] = l0 * qa[i, 0] + l1 * qa[i, 1] + l2 * qa[i, 2]
                    for kb in range(7):
                        m1, m2 = t7l[kb, 0], t7l[kb, 1]
                        m0 = 1.0 - m1 - m2
                        yx = m0 * cvb[0, 0] + m1 * cvb[1, 0] + m2 * cvb[2, 0]
                        yy = m0 * cvb[0, 1] + m1 * cvb[1, 1] + m2 * cvb[2, 1]
                        w = wa * 0.5 * a2b * t7w[kb]
                        r2 = (xx - yx) ** 2 + (xy - yy) ** 2
                        ker = w * r2 ** e
                        for i in range(6):
                            fd[i] = fa[i] - (m0 * qb[i, 0] + m1 * qb[i, 1]
                                             + m2 * qb[i, 2])
                        # upper triangle only; mirrored by the caller
                        for i in range(6):
                            ei = ker * fd[i]
                            for j in range(i, 6):
                                S[lab, i, j] += ei * fd[j]
            else:
                if sp + 4 > nmax - 4:
                    return -1
                if da >= db:
                    for ch in range(4):
                        _quarter(cva, qa, ch, st_va[sp], st_pa[sp])
                        st_vb[sp] = cvb
                        st_pb[sp] = qb
                        st_lab[sp] = lab
                        sp += 1
                else:
                    for ch in range(4):
                        _quarter(cvb, qb, ch, st_vb[sp], st_pb[sp])
                        st_va[sp] = cva
                        st_pa[sp] = qa
                        st_lab[sp] = lab
                        sp += 1
        else:
            if lab >= dmax:
                continue
            if sp + 16 > nmax - 16:
                return -1
            for ca in range(4):
                for cb in range(4):
                    _quarter(cva, qa, ca, st_va[sp], st_pa[sp])
                    _quarter(cvb, qb, cb, st_vb[sp], st_pb[sp])
                    st_lab[sp] = lab + 1
                    sp += 1
    return 0


# ---------------------------------------------------------------------------
# extrapolation and public pair interface


def _extrapolate(V, s, tol, scale=0.0):
    """Richardson in the omitted band size, ratios 2^-(m-2s), m = 2, 3, 4.

    The error estimate is judged relative to max(|value|, 0.1 * scale)
    so that near-cancelling entries of a pair matrix are held to an
    absolute tolerance at the scale of the pair.
    """
    if len(V) < 5:
        raise ValueError("extrapolation needs at least 4 subdivision levels")
    scale = max(abs(V[-1]), 0.1 * scale, 1e-300)
    if abs(V[-1] - V[-2]) <= 1e-12 * scale:
        return V[-1], abs(V[-1] - V[-2])

    def triple(window):
        vals = list(window)
        for stage in range(3):
            q = 2.0 ** (-(2.0 + stage - 2.0 * s))
            vals = [(vals[k + 1] - q * vals[k]) / (1.0 - q)
                    for k in range(len(vals) - 1)]
        return vals[-1]

    r = triple(V[-4:])
    prev = triple(V[-5:-1])
    est = abs(r - prev) + 1e-15 * scale
    if est > tol * max(abs(r), scale):
        raise OracleInconclusiveError(
            f"extrapolation error estimate {est:.3e} exceeds {tol:.1e} relative")
    return r, est


def _pair_matrix_1d(mesh, ta, tb, s, levels, tol):
    x = mesh.nodes
    ids = np.array([ta, ta + 1, tb, tb + 1], dtype=np.int64)
    pa = np.zeros((4, 2))
    pb = np.zeros((4, 2))
    for slot in range(4):
        g = ids[slot]
        for p in range(2):
            pa[slot, p] = 1.0 if ta + p == g else 0.0
            pb[slot, p] = 1.0 if tb + p == g else 0.0
    S = np.zeros((levels + 1, 4, 4))
    rc = _cells_1d(x[ta], x[ta + 1], x[tb], x[tb + 1], pa, pb, s, levels,
                   4.0, _G6X, _G6W, S)
    if rc != 0:
        raise OracleInconclusiveError("subdivision stack overflow")
    V = np.cumsum(S, axis=0)
    scale = float(np.max(np.abs(V[-1])))
    out = np.empty((4, 4))
    for i in range(4):
        for j in range(4):
            out[i, j], _ = _extrapolate(V[:, i, j], s, tol, scale)
    return out, ids


def _pair_matrix_2d(mesh, ta, tb, s, levels, tol):
    nodes = mesh.nodes
    ea = mesh.elements[ta]
    eb = mesh.elements[tb]
    ids = np.concatenate([ea, eb]).astype(np.int64)
    pa = np.zeros((6, 3))
    pb = np.zeros((6, 3))
    for slot in range(6):
        g = ids[slot]
        for p in range(3):
            pa[slot, p] = 1.0 if ea[p] == g else 0.0
            pb[slot, p] = 1.0 if eb[p] == g else 0.0
    S = np.zeros((levels + 1, 6, 6))
    rc = _cells_2d(np.ascontiguousarray(nodes[ea], dtype=float),
                   np.ascontiguousarray(nodes[eb], dtype=float),
                   pa, pb, s, levels, 2.0, _T7L, _T7W, S)
    if rc != 0:
        raise OracleInconclusiveError("subdivision stack overflow")
    iu = np.triu_indices(6, 1)
    S[:, iu[1], iu[0]] = S[:, iu[0], iu[1]]
    V = np.cumsum(S, axis=0)
    scale = float(np.max(np.abs(V[-1])))
    out = np.empty((6, 6))
    for i in range(6):
        for j in range(6):
            out[i, j], _ = _extrapolate(V[:, i, j], s, tol, scale)
    return out, ids


def brute_force_pair(mesh, t_a, t_b, s, i, j, levels=None, tol=1e-6):
    """Reference value of the pair contribution for local bases i, j."""
    if levels is not None and levels > 12:
        raise ValueError("dyadic depth capped at 12")
    if mesh.dim == 1:
        L = 12 if levels is None else levels
        out, _ = _pair_matrix_1d(mesh, t_a, t_b, s, L, tol)
        return float(out[i, 2 + j])
    L = 5 if levels is None else levels
    out, _ = _pair_matrix_2d(mesh, t_a, t_b, s, L, tol)
    return float(out[i, 3 + j])


# ---------------------------------------------------------------------------
# tail terms (independent quadrature)


def oracle_tail_weight(x, domain, s):
    """Independent evaluation of omega(x); vectorized over points for the disk."""
    if domain == Domain.INTERVAL:
        return ((1.0 + x) ** (-2.0 * s) + (1.0 - x) ** (-2.0 * s)) / (2.0 * s)
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    rho = np.hypot(pts[:, 0], pts[:, 1])
    # composite Gauss in the ray angle, refined toward 0 down to the
    # smallest boundary gap in the batch
    gap = max(float(np.min(1.0 - rho)), 1e-14)
    edges = [np.pi]
    while edges[-1] > 0.02 * gap and len(edges) < 80:
        edges.append(edges[-1] * 0.5)
    edges.append(0.0)
    edges = np.array(edges[::-1])
    gx20, gw20 = np.polynomial.legendre.leggauss(20)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    th = (mid[:, None] + half[:, None] * gx20).ravel()
    w = (half[:, None] * gw20).ravel()
    st = np.sin(th)
    ct = np.cos(th)
    root = np.sqrt(1.0 - np.minimum((rho[:, None] * st) ** 2, 1.0))
    R = np.where(ct >= 0.0,
                 (1.0 - rho[:, None] ** 2) / (root + rho[:, None] * ct),
                 root - rho[:, None] * ct)
    om = np.sum(w * R ** (-2.0 * s), axis=1) / s
    return om if np.asarray(x).ndim > 1 else float(om[0])


def _tail_entry_1d(mesh, s):
    """Matrix of int phi_i phi_j omega over interior dofs, by scipy quad."""
    x = mesh.nodes
    dof = mesh.dof_of_node
    nd = mesh.n_dofs
    M = np.zeros((nd, nd))
    ts = 2.0 * s
    for e in range(mesh.n_elements):
        xl, xr = x[e], x[e + 1]
        h = xr - xl

        def cell(f):
            val, _ = scipy.integrate.quad(
                f, xl, xr, epsabs=1e-14, epsrel=1e-12, limit=400)
            return val

        def om(t):
            return ((1.0 + t) ** (-ts) + (1.0 - t) ** (-ts)) / ts

        # entries touching a boundary node diverge and are never used
        hats = (lambda t: (xr - t) / h, lambda t: (t - xl) / h)
        for a in range(2):
            da = dof[e + a]
            if da < 0:
                continue
            for b in range(a, 2):
                db = dof[e + b]
                if db < 0:
                    continue
                val = cell(lambda t: hats[a](t) * hats[b](t) * om(t))
                M[da, db] += val
                if db != da:
                    M[db, da] += val
    return M


def _tail_tri(verts, pvals, s, depth=0):
    """int over the triangle of p_i p_j omega, adaptive toward the circle."""
    r = np.hypot(verts[:, 0], verts[:, 1])
    diam = max(np.linalg.norm(verts[0] - verts[1]),
               np.linalg.norm(verts[1] - verts[2]),
               np.linalg.norm(verts[2] - verts[0]))
    gap = float(1.0 - np.max(r))
    if gap > diam or depth >= 12:
        lam = np.column_stack([1.0 - _T7L[:, 0] - _T7L[:, 1],
                               _T7L[:, 0], _T7L[:, 1]])
        pts = lam @ verts
        om = oracle_tail_weight(pts, Domain.UNIT_DISK, s)
        a2 = abs((verts[1, 0] - verts[0, 0]) * (verts[2, 1] - verts[0, 1])
                 - (verts[1, 1] - verts[0, 1]) * (verts[2, 0] - verts[0, 0]))
        f = lam @ pvals.T  # (7, nslots)
        w = 0.5 * a2 * _T7W * om
        return (f.T * w) @ f
    mids = 0.5 * (verts + verts[[1, 2, 0]])
    pm = 0.5 * (pvals + pvals[:, [1, 2, 0]])
    out = 0.0
    combos = [
        (np.array([verts[0], mids[0], mids[2]]),
         np.column_stack([pvals[:, 0], pm[:, 0], pm[:, 2]])),
        (np.array([mids[0], verts[1], mids[1]]),
         np.column_stack([pm[:, 0], pvals[:, 1], pm[:, 1]])),
        (np.array([mids[2], mids[1], verts[2]]),
         np.column_stack([pm[:, 2], pm[:, 1], pvals[:, 2]])),
        (np.array([mids[0], mids[1], mids[2]]),
         np.column_stack([pm[:, 0], pm[:, 1], pm[:, 2]])),
    ]
    for cv, cp in combos:
        out = out + _tail_tri(cv, cp, s, depth + 1)
    return out


def _tail_entry_2d(mesh, s):
    dof = mesh.dof_of_node
    nd = mesh.n_dofs
    M = np.zeros((nd, nd))
    for e in range(mesh.n_elements):
        verts = np.asarray(mesh.nodes[mesh.elements[e]], dtype=float)
        loc = _tail_tri(verts, np.eye(3), s)
        for a in range(3):
            da = dof[mesh.elements[e, a]]
            if da < 0:
                continue
            for b in range(3):
                db = dof[mesh.elements[e, b]]
                if db < 0:
                    continue
                M[da, db] += loc[a, b]
    return M


# ---------------------------------------------------------------------------
# full-matrix oracle


def brute_force_matrix(mesh, s, levels=None, tol=1e-6):
    """All stiffness entries by the brute-force route; cached on the mesh."""
    L = (12 if mesh.dim == 1 else 5) if levels is None else levels
    key = (s, L, tol)
    cache = getattr(mesh, "_oracle_cache", None)
    if cache is not None and key in cache:
        return cache[key]
    nd = mesh.n_dofs
    dof = mesh.dof_of_node
    A = np.zeros((nd, nd))
    ne = mesh.n_elements
    for a in range(ne):
        for b in range(a, ne):
            if mesh.dim == 1:
                loc, ids = _pair_matrix_1d(mesh, a, b, s, L, tol)
            else:
                loc, ids = _pair_matrix_2d(mesh, a, b, s, L, tol)
            mult = 1.0 if a == b else 2.0
            # slots may duplicate shared nodes; keep the first of each id
            seen = {}
            for k, g in enumerate(ids):
                if g not in seen:
                    seen[g] = k
            for gi, ki in seen.items():
                di = dof[gi]
                if di < 0:
                    continue
                for gj, kj in seen.items():
                    dj = dof[gj]
                    if dj < 0:
                        continue
                    A[di, dj] += mult * loc[ki, kj]
    n = 1 if mesh.dim == 1 else 2
    c = _norm_const(n, s)
    T = _tail_entry_1d(mesh, s) if mesh.dim == 1 else _tail_entry_2d(mesh, s)
    A = 0.5 * c * A + c * T
    A = 0.5 * (A + A.T)
    if cache is None:
        cache = {}
        mesh._oracle_cache = cache
    cache[key] = A
    return A


def brute_force_entry(mesh, i, j, s, levels=None, tol=1e-6):
    """Reference stiffness entry for interior dofs i, j."""
    A = brute_force_matrix(mesh, s, levels, tol)
    return float(A[i, j])
