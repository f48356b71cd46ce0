"""Numba kernels for the 2D nonlocal stiffness assembly on the unit disk.

Touching element pairs are reduced by radial homogeneity of the kernel
|x-y|^{-2-2s}. The identical-pair integral collapses to an angular
integral of the set covariogram of the reference triangle; the shared
edge and shared vertex cases are written in local coordinates about the
shared feature and integrated radially in closed form, leaving smooth
integrals over faces of a parameter box (edge case) or the unit cube
(vertex case). Disjoint pairs use tensor product rules on both
triangles, with one midpoint subdivision of each when the gap is small
relative to the diameters.

All pair values are independent of thread count; scatter is serial, so
the assembled matrix is bitwise reproducible.
"""

import numpy as np
from numba import njit, prange

# ---------------------------------------------------------------------------
# geometry helpers


@njit(cache=True)
def _seg_seg_dist(p0x, p0y, p1x, p1y, q0x, q0y, q1x, q1y):
    """Minimum distance between segments p0p1 and q0q1 (assumed disjoint)."""
    ux, uy = p1x - p0x, p1y - p0y
    vx, vy = q1x - q0x, q1y - q0y
    wx, wy = p0x - q0x, p0y - q0y
    a = ux * ux + uy * uy
    b = ux * vx + uy * vy
    c = vx * vx + vy * vy
    d = ux * wx + uy * wy
    e = vx * wx + vy * wy
    den = a * c - b * b
    if den > 1e-14 * a * c:
        sc = (b * e - c * d) / den
        tc = (a * e - b * d) / den
    else:
        sc = 0.0
        tc = e / c if c > 0.0 else 0.0
    if sc < 0.0:
        sc = 0.0
    elif sc > 1.0:
        sc = 1.0
    # re-clamp t for the clamped s, then s once more
    tc = (e + sc * b) / c if c > 0.0 else 0.0
    if tc < 0.0:
        tc = 0.0
    elif tc > 1.0:
        tc = 1.0
    sc2 = (tc * b - d) / a if a > 0.0 else 0.0
    if sc2 < 0.0:
        sc2 = 0.0
    elif sc2 > 1.0:
        sc2 = 1.0
    dx = wx + sc2 * ux - tc * vx
    dy = wy + sc2 * uy - tc * vy
    return np.sqrt(dx * dx + dy * dy)


@njit(cache=True)
def _tri_tri_dist(va, vb):
    best = 1e300
    for i in range(3):
        i2 = (i + 1) % 3
        for j in range(3):
            j2 = (j + 1) % 3
            d = _seg_seg_dist(
                va[i, 0], va[i, 1], va[i2, 0], va[i2, 1],
                vb[j, 0], vb[j, 1], vb[j2, 0], vb[j2, 1],
            )
            if d < best:
                best = d
    return best


# ---------------------------------------------------------------------------
# identical pair: angular covariogram matrix, computed once per triangle


@njit(cache=True, parallel=True)
def angular_matrices(tv, s, gx, gw, goff, out):
    """out[t] = (S11, S12, S22) of int m m^T |m|^{-2-2s} c(th)^{2s-2} dth.

    m(th) = cos E1 + sin E2 and c is the support-type function of the
    reference covariogram, with kinks at {0, pi/2, 3pi/4, pi, 3pi/2,
    7pi/4}; Gauss-16 per smooth arc.
    """
    pi = np.pi
    brk = np.array([0.0, 0.5 * pi, 0.75 * pi, pi, 1.5 * pi, 1.75 * pi, 2.0 * pi])
    m = 16
    o = goff[m]
    for t in prange(tv.shape[0]):
        e1x = tv[t, 1, 0] - tv[t, 0, 0]
        e1y = tv[t, 1, 1] - tv[t, 0, 1]
        e2x = tv[t, 2, 0] - tv[t, 0, 0]
        e2y = tv[t, 2, 1] - tv[t, 0, 1]
        s11 = 0.0
        s12 = 0.0
        s22 = 0.0
        for arc in range(6):
            mid = 0.5 * (brk[arc] + brk[arc + 1])
            half = 0.5 * (brk[arc + 1] - brk[arc])
            for q in range(m):
                th = mid + half * gx[o + q]
                ct = np.cos(th)
                st = np.sin(th)
                c = max(0.0, ct) + max(0.0, st) + max(0.0, -ct - st)
                mx = ct * e1x + st * e2x
                my = ct * e1y + st * e2y
                r2 = mx * mx + my * my
                wgt = half * gw[o + q] * r2 ** (-1.0 - s) * c ** (2.0 * s - 2.0)
                s11 += wgt * mx * mx
                s12 += wgt * mx * my
                s22 += wgt * my * my
        out[t, 0] = s11
        out[t, 1] = s12
        out[t, 2] = s22


@njit(cache=True)
def _identical_local(area, g, smat, s, local):
    # I(i,j) = (2A)^2 (kappa/2) g_i . S g_j
    kappa = 1.0 / (2.0 - 2.0 * s) - 2.0 / (3.0 - 2.0 * s) + 1.0 / (4.0 - 2.0 * s)
    fac = (2.0 * area) ** 2 * 0.5 * kappa
    for i in range(3):
        for j in range(3):
            v = (
                g[i, 0] * (smat[0] * g[j, 0] + smat[1] * g[j, 1])
                + g[i, 1] * (smat[1] * g[j, 0] + smat[2] * g[j, 1])
            )
            local[i, j] = fac * v


# ---------------------------------------------------------------------------
# shared edge pair


@njit(cache=True)
def _edge_local(A, B, Ca, Cb, area_a, area_b, s, sqp, sqw, tre, trew, local):
    """4x4 local matrix in node order [A, B, Ca, Cb] (A, B shared).

    Both triangles are charted as A + u e + v d over the reference
    triangle; with t = u1 - u2 the radial direction integrates exactly
    and the remainder is a sum over faces of the box [-1,1] x [0,1]^2,
    each split along the kink lines of the overlap length function.
    """
    ex, ey = B[0] - A[0], B[1] - A[1]
    dax, day = Ca[0] - A[0], Ca[1] - A[1]
    dbx, dby = Cb[0] - A[0], Cb[1] - A[1]
    dl = np.array([-1.0, 1.0, 0.0, 0.0])
    av = np.array([-1.0, 0.0, 1.0, 0.0])
    bv = np.array([-1.0, 0.0, 0.0, 1.0])
    em = -1.0 - s  # exponent of |M|^2
    ec = -(3.0 - 2.0 * s)
    acc = np.zeros((4, 4))
    ell = np.empty(4)
    # 8 smooth pieces: regions 0-3 over the unit square, 4-7 over the
    # reference triangle (the kink lines of the overlap length split two
    # faces diagonally)
    for region in range(8):
        npts = sqp.shape[0] if region < 4 else tre.shape[0]
        for q in range(npts):
            if region < 4:
                u = sqp[q, 0]
                v = sqp[q, 1]
                w = sqw[q]
            else:
                u = tre[q, 0]
                v = tre[q, 1]
                w = trew[q]
            if region == 0:    # face t = 1
                t, v1, v2, c = 1.0, u, v, 1.0 + u
            elif region == 1:  # face t = -1
                t, v1, v2, c = -1.0, u, v, 1.0 + v
            elif region == 2:  # face v1 = 1, t >= 0
                t, v1, v2, c = u, 1.0, v, 1.0 + u
            elif region == 3:  # face v2 = 1, t <= 0
                t, v1, v2, c = -u, v, 1.0, 1.0 + u
            elif region == 4:  # face v1 = 1, t < 0, below the kink
                t, v1, v2, c = u + v - 1.0, 1.0, v, 1.0
            elif region == 5:  # face v1 = 1, t < 0, above the kink
                t, v1, v2, c = u - 1.0, 1.0, u + v, u + v - (u - 1.0)
            elif region == 6:  # face v2 = 1, t > 0, below the kink
                t, v1, v2, c = u, v, 1.0, 1.0
            else:              # face v2 = 1, t > 0, above the kink
                t, v1, v2, c = u + v, 1.0 - u, 1.0, 1.0 + v
            mx = t * ex + v1 * dax - v2 * dbx
            my = t * ey + v1 * day - v2 * dby
            ker = w * (mx * mx + my * my) ** em * c ** ec
            for i in range(4):
                ell[i] = t * dl[i] + v1 * av[i] - v2 * bv[i]
            for i in range(4):
                ei = ell[i] * ker
                for j in range(4):
                    acc[i, j] += ei * ell[j]
    kap = 1.0 / (3.0 - 2.0 * s) - 1.0 / (4.0 - 2.0 * s)
    fac = 4.0 * area_a * area_b * kap
    for i in range(4):
        for j in range(4):
            local[i, j] = fac * acc[i, j]


# ---------------------------------------------------------------------------
# shared vertex pair


@njit(cache=True)
def _vertex_sector(Eax, Eay, Fax, Fay, Ebx, Eby, Fbx, Fby,
                   pa, qa, pb, qb, s, cup, cuw, acc):
    em = -1.0 - s
    ell = np.empty(5)
    for q in range(cup.shape[0]):
        z1 = cup[q, 0]
        w2 = cup[q, 1]
        z2 = cup[q, 2]
        mx = Eax + z1 * Fax - w2 * (Ebx + z2 * Fbx)
        my = Eay + z1 * Fay - w2 * (Eby + z2 * Fby)
        ker = cuw[q] * w2 * (mx * mx + my * my) ** em
        for i in range(5):
            ell[i] = pa[i] + z1 * qa[i] - w2 * (pb[i] + z2 * qb[i])
        for i in range(5):
            ei = ell[i] * ker
            for j in range(5):
                acc[i, j] += ei * ell[j]


@njit(cache=True)
def _vertex_local(V, P1a, P2a, P1b, P2b, area_a, area_b, s, cup, cuw, local):
    """5x5 local matrix in node order [V, P1a, P2a, P1b, P2b] (V shared)."""
    Eax, Eay = P1a[0] - V[0], P1a[1] - V[1]
    Fax, Fay = P2a[0] - P1a[0], P2a[1] - P1a[1]
    Ebx, Eby = P1b[0] - V[0], P1b[1] - V[1]
    Fbx, Fby = P2b[0] - P1b[0], P2b[1] - P1b[1]
    pa = np.array([-1.0, 1.0, 0.0, 0.0, 0.0])
    qa = np.array([0.0, -1.0, 1.0, 0.0, 0.0])
    pb = np.array([-1.0, 0.0, 0.0, 1.0, 0.0])
    qb = np.array([0.0, 0.0, 0.0, -1.0, 1.0])
    acc = np.zeros((5, 5))
    _vertex_sector(Eax, Eay, Fax, Fay, Ebx, Eby, Fbx, Fby,
                   pa, qa, pb, qb, s, cup, cuw, acc)
    _vertex_sector(Ebx, Eby, Fbx, Fby, Eax, Eay, Fax, Fay,
                   pb, qb, pa, qa, s, cup, cuw, acc)
    fac = 4.0 * area_a * area_b / (4.0 - 2.0 * s)
    for i in range(5):
        for j in range(5):
            local[i, j] = fac * acc[i, j]


# ---------------------------------------------------------------------------
# disjoint pair


@njit(cache=True)
def _disjoint_core(cva, cvb, anch_a, ga, anch_b, gb, area_fac, s,
                   trp, trw, o, m2, local):
    """Tensor rule over sub-triangles cva x cvb; hats from parent gradients.

    No node is shared, so phi_i(x) - phi_i(y) has only one nonzero term
    and the 6x6 accumulation factorizes: the aa and bb blocks need the
    per-point kernel marginals, the cross block needs 3 projections.
    """
    em = -1.0 - s
    px = np.empty(m2)
    py = np.empty(m2)
    qx = np.empty(m2)
    qy = np.empty(m2)
    ha = np.empty((m2, 3))
    hb = np.empty((m2, 3))
    for q in range(m2):
        u = trp[o + q, 0]
        v = trp[o + q, 1]
        px[q] = cva[0, 0] + u * (cva[1, 0] - cva[0, 0]) + v * (cva[2, 0] - cva[0, 0])
        py[q] = cva[0, 1] + u * (cva[1, 1] - cva[0, 1]) + v * (cva[2, 1] - cva[0, 1])
        qx[q] = cvb[0, 0] + u * (cvb[1, 0] - cvb[0, 0]) + v * (cvb[2, 0] - cvb[0, 0])
        qy[q] = cvb[0, 1] + u * (cvb[1, 1] - cvb[0, 1]) + v * (cvb[2, 1] - cvb[0, 1])
        for i in range(3):
            ha[q, i] = (1.0 if i == 0 else 0.0) + ga[i, 0] * (px[q] - anch_a[0]) \
                + ga[i, 1] * (py[q] - anch_a[1])
            hb[q, i] = (1.0 if i == 0 else 0.0) + gb[i, 0] * (qx[q] - anch_b[0]) \
                + gb[i, 1] * (qy[q] - anch_b[1])
    ka = np.zeros(m2)   # per-x marginal of w_b K
    kb = np.zeros(m2)   # per-y marginal of w_a K
    proj = np.zeros((m2, 3))  # per-y projections of w_a ha_i K
    for qa in range(m2):
        wa = trw[o + qa]
        xax = px[qa]
        xay = py[qa]
        h0 = wa * ha[qa, 0]
        h1 = wa * ha[qa, 1]
        h2 = wa * ha[qa, 2]
        acc = 0.0
        for qb in range(m2):
            dx = xax - qx[qb]
            dy = xay - qy[qb]
            ker = (dx * dx + dy * dy) ** em
            wk = trw[o + qb] * ker
            acc += wk
            kb[qb] += wa * ker
            proj[qb, 0] += h0 * ker
            proj[qb, 1] += h1 * ker
            proj[qb, 2] += h2 * ker
        ka[qa] = acc
    for qa in range(m2):
        c = area_fac * trw[o + qa] * ka[qa]
        for i in range(3):
            e = c * ha[qa, i]
            for j in range(3):
                local[i, j] += e * ha[qa, j]
    for qb in range(m2):
        c = area_fac * trw[o + qb] * kb[qb]
        for i in range(3):
            e = c * hb[qb, i]
            for j in range(3):
                local[3 + i, 3 + j] += e * hb[qb, j]
        cw = area_fac * trw[o + qb]
        for i in range(3):
            e = cw * proj[qb, i]
            for j in range(3):
                local[i, 3 + j] -= e * hb[qb, j]
                local[3 + j, i] -= e * hb[qb, j]


@njit(cache=True)
def _split4(v, out):
    # four midpoint children of triangle v
    m01x, m01y = 0.5 * (v[0, 0] + v[1, 0]), 0.5 * (v[0, 1] + v[1, 1])
    m12x, m12y = 0.5 * (v[1, 0] + v[2, 0]), 0.5 * (v[1, 1] + v[2, 1])
    m20x, m20y = 0.5 * (v[2, 0] + v[0, 0]), 0.5 * (v[2, 1] + v[0, 1])
    out[0, 0, 0], out[0, 0, 1] = v[0, 0], v[0, 1]
    out[0, 1, 0], out[0, 1, 1] = m01x, m01y
    out[0, 2, 0], out[0, 2, 1] = m20x, m20y
    out[1, 0, 0], out[1, 0, 1] = m01x, m01y
    out[1, 1, 0], out[1, 1, 1] = v[1, 0], v[1, 1]
    out[1, 2, 0], out[1, 2, 1] = m12x, m12y
    out[2, 0, 0], out[2, 0, 1] = m20x, m20y
    out[2, 1, 0], out[2, 1, 1] = m12x, m12y
    out[2, 2, 0], out[2, 2, 1] = v[2, 0], v[2, 1]
    out[3, 0, 0], out[3, 0, 1] = m01x, m01y
    out[3, 1, 0], out[3, 1, 1] = m12x, m12y
    out[3, 2, 0], out[3, 2, 1] = m20x, m20y


@njit(cache=True)
def _disjoint_local(va, vb, ga, gb, area_a, area_b, s, trp, trw, troff, local):
    # diameters
    da = 0.0
    db = 0.0
    for i in range(3):
        j = (i + 1) % 3
        la = (va[i, 0] - va[j, 0]) ** 2 + (va[i, 1] - va[j, 1]) ** 2
        lb = (vb[i, 0] - vb[j, 0]) ** 2 + (vb[i, 1] - vb[j, 1]) ** 2
        if la > da:
            da = la
        if lb > db:
            db = lb
    diam = np.sqrt(max(da, db))
    # quick centroid bound before the exact segment distance
    cax = (va[0, 0] + va[1, 0] + va[2, 0]) / 3.0
    cay = (va[0, 1] + va[1, 1] + va[2, 1]) / 3.0
    cbx = (vb[0, 0] + vb[1, 0] + vb[2, 0]) / 3.0
    cby = (vb[0, 1] + vb[1, 1] + vb[2, 1]) / 3.0
    dc = np.sqrt((cax - cbx) ** 2 + (cay - cby) ** 2) - diam
    if dc > 8.0 * diam:
        ratio = dc / diam
    else:
        ratio = _tri_tri_dist(va, vb) / diam
    fac = 4.0 * area_a * area_b
    if ratio < 0.35:
        m = 5
        o = troff[m]
        ca = np.empty((4, 3, 2))
        cb = np.empty((4, 3, 2))
        _split4(va, ca)
        _split4(vb, cb)
        for ia in range(4):
            for ib in range(4):
                # child area factor: each child chart has 1/4 the Jacobian
                _disjoint_core(ca[ia], cb[ib], va[0], ga, vb[0], gb,
                               fac / 16.0, s, trp, trw, o, m * m, local)
        return
    if ratio < 1.5:
        m = 6
    elif ratio < 4.0:
        m = 4
    elif ratio < 10.0:
        m = 3
    else:
        m = 2
    o = troff[m]
    _disjoint_core(va, vb, va[0], ga, vb[0], gb, fac, s, trp, trw, o, m * m, local)


# ---------------------------------------------------------------------------
# pair dispatch


@njit(cache=True)
def pair_local_2d(a, b, elements, tv, area, grads, smat, s,
                  sqp, sqw, tre, trew, cup, cuw, trp, trw, troff,
                  local, ids):
    """Local pair matrix with its global node ids; returns the node count."""
    for i in range(6):
        ids[i] = -1
        for j in range(6):
            local[i, j] = 0.0
    if a == b:
        _identical_local(area[a], grads[a], smat[a], s, local)
        for i in range(3):
            ids[i] = elements[a, i]
        return 3
    # shared global nodes
    ns = 0
    sa0 = sa1 = sb0 = sb1 = -1
    for i in range(3):
        for j in range(3):
            if elements[a, i] == elements[b, j]:
                if ns == 0:
                    sa0, sb0 = i, j
                else:
                    sa1, sb1 = i, j
                ns += 1
    if ns == 2:
        # order the shared pair by global id for a deterministic chart
        if elements[a, sa0] > elements[a, sa1]:
            sa0, sa1 = sa1, sa0
            sb0, sb1 = sb1, sb0
        ca = 3 - sa0 - sa1
        cb = 3 - sb0 - sb1
        _edge_local(tv[a, sa0], tv[a, sa1], tv[a, ca], tv[b, cb],
                    area[a], area[b], s, sqp, sqw, tre, trew, local)
        ids[0] = elements[a, sa0]
        ids[1] = elements[a, sa1]
        ids[2] = elements[a, ca]
        ids[3] = elements[b, cb]
        return 4
    if ns == 1:
        o1a = (sa0 + 1) % 3
        o2a = (sa0 + 2) % 3
        o1b = (sb0 + 1) % 3
        o2b = (sb0 + 2) % 3
        _vertex_local(tv[a, sa0], tv[a, o1a], tv[a, o2a],
                      tv[b, o1b], tv[b, o2b],
                      area[a], area[b], s, cup, cuw, local)
        ids[0] = elements[a, sa0]
        ids[1] = elements[a, o1a]
        ids[2] = elements[a, o2a]
        ids[3] = elements[b, o1b]
        ids[4] = elements[b, o2b]
        return 5
    _disjoint_local(tv[a], tv[b], grads[a], grads[b], area[a], area[b],
                    s, trp, trw, troff, local)
    for i in range(3):
        ids[i] = elements[a, i]
        ids[3 + i] = elements[b, i]
    return 6


@njit(cache=True)
def _pair_from_index(t, ne):
    a = int((2.0 * ne + 1.0 - np.sqrt((2.0 * ne + 1.0) ** 2 - 8.0 * t)) // 2)
    if a > ne - 1:
        a = ne - 1
    while a * ne - a * (a - 1) // 2 > t:
        a -= 1
    while (a + 1) * ne - (a + 1) * a // 2 <= t:
        a += 1
    b = a + (t - (a * ne - a * (a - 1) // 2))
    return a, b


@njit(cache=True, parallel=True)
def _pair_chunk_2d(elements, tv, area, grads, smat, s,
                   sqp, sqw, tre, trew, cup, cuw, trp, trw, troff,
                   t0, t1, vals, idsbuf):
    ne = elements.shape[0]
    for k in prange(t1 - t0):
        a, b = _pair_from_index(t0 + k, ne)
        local = np.empty((6, 6))
        ids = np.empty(6, dtype=np.int64)
        pair_local_2d(a, b, elements, tv, area, grads, smat, s,
                      sqp, sqw, tre, trew, cup, cuw, trp, trw, troff,
                      local, ids)
        mult = 1.0 if a == b else 2.0
        for i in range(6):
            idsbuf[k, i] = ids[i]
            for j in range(6):
                vals[k, 6 * i + j] = mult * local[i, j]


@njit(cache=True)
def _scatter_chunk_2d(A, dof, vals, idsbuf, count):
    for k in range(count):
        for i in range(6):
            ni = idsbuf[k, i]
            if ni < 0:
                continue
            di = dof[ni]
            if di < 0:
                continue
            for j in range(6):
                nj = idsbuf[k, j]
                if nj < 0:
                    continue
                dj = dof[nj]
                if dj < 0:
                    continue
                A[di, dj] += vals[k, 6 * i + j]


def interaction_matrix_2d(elements, tv, area, grads, smat, s, dof, rules,
                          chunk=1 << 15):
    """Sum of pair contributions over ordered element pairs (no C(n,s)/2)."""
    sqp, sqw, tre, trew, cup, cuw, trp, trw, troff = rules
    ne = elements.shape[0]
    ndof = int(dof.max()) + 1
    A = np.zeros((ndof, ndof))
    npairs = ne * (ne + 1) // 2
    vals = np.empty((chunk, 36))
    idsbuf = np.empty((chunk, 6), dtype=np.int64)
    t0 = 0
    while t0 < npairs:
        t1 = min(npairs, t0 + chunk)
        _pair_chunk_2d(elements, tv, area, grads, smat, s,
                       sqp, sqw, tre, trew, cup, cuw, trp, trw, troff,
                       t0, t1, vals, idsbuf)
        _scatter_chunk_2d(A, dof, vals, idsbuf, t1 - t0)
        t0 = t1
    return A


# ---------------------------------------------------------------------------
# complement (tail) weight for the unit disk


@njit(cache=True)
def omega_disk(rho, s, gx, gw, goff):
    """omega(x) = int_{|y|>1} |x-y|^{-2-2s} dy for |x| = rho < 1.

    Integrating the ray length outside the disk gives
    omega = (1/2s) int_0^{2pi} R(th)^{-2s} dth with
    R(th) = sqrt(1 - rho^2 sin^2 th) - rho cos th, the distance from x
    to the circle along direction th. Composite Gauss graded toward
    th = 0 where R -> 1 - rho.
    """
    if rho < 1e-15:
        return np.pi / s
    m = 10
    o = goff[m]
    total = 0.0
    hi = np.pi
    # resolve down to a fraction of 1 - rho, the scale on which R varies
    nlev = 6
    while np.pi * 0.5 ** nlev > 0.125 * (1.0 - rho) and nlev < 40:
        nlev += 1
    for lev in range(nlev):
        lo = 0.0 if lev == nlev - 1 else hi * 0.5
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        for q in range(m):
            th = mid + half * gx[o + q]
            ct = np.cos(th)
            st = np.sin(th)
            if ct >= 0.0:
                # avoid cancellation as rho -> 1, th -> 0
                R = (1.0 - rho * rho) / (np.sqrt(1.0 - (rho * st) ** 2) + rho * ct)
            else:
                R = np.sqrt(1.0 - (rho * st) ** 2) - rho * ct
            total += half * gw[o + q] * R ** (-2.0 * s)
        hi = lo if lo > 0.0 else hi
        if lo == 0.0:
            break
    return total / s


@njit(cache=True)
def omega_spline_eval(rho, s, dt, coefs):
    """Evaluate omega from the precomputed cubic spline of its radial
    profile: G(t) = omega(1 - t^2) t^{4s} with t = sqrt(1 - rho)."""
    t = np.sqrt(max(1.0 - rho, 1e-14))
    if t > 1.0:
        t = 1.0
    n = coefs.shape[1]
    i = int(t / dt)
    if i > n - 1:
        i = n - 1
    xi = t - i * dt
    G = ((coefs[0, i] * xi + coefs[1, i]) * xi + coefs[2, i]) * xi + coefs[3, i]
    return G * t ** (-4.0 * s)


@njit(cache=True)
def _tail_point(xx, xy, w, anch, g, s, dt, coefs, loc):
    om = omega_spline_eval(np.sqrt(xx * xx + xy * xy), s, dt, coefs)
    l0 = 1.0 + g[0, 0] * (xx - anch[0]) + g[0, 1] * (xy - anch[1])
    l1 = g[1, 0] * (xx - anch[0]) + g[1, 1] * (xy - anch[1])
    l2 = g[2, 0] * (xx - anch[0]) + g[2, 1] * (xy - anch[1])
    wo = w * om
    loc[0, 0] += wo * l0 * l0
    loc[0, 1] += wo * l0 * l1
    loc[0, 2] += wo * l0 * l2
    loc[1, 1] += wo * l1 * l1
    loc[1, 2] += wo * l1 * l2
    loc[2, 2] += wo * l2 * l2


@njit(cache=True)
def tail_matrix_2d(elements, tv, area, grads, bnode, dof, s,
                   gx, gw, goff, dt, coefs, trp4, trw4):
    """M_ij = int phi_i phi_j omega(x) dx over the disk mesh.

    Interior elements use a fixed triangle rule. Elements touching the
    unit circle are charted from an interior anchor toward the boundary
    feature and integrated with geometric grading toward it (plus
    grading toward both endpoints of a boundary edge, where the
    complement weight is genuinely singular).
    """
    ndof = int(dof.max()) + 1
    M = np.zeros((ndof, ndof))
    m1 = 8
    o1 = goff[m1]
    for e in range(elements.shape[0]):
        nb = 0
        for i in range(3):
            if bnode[elements[e, i]] != 0:
                nb += 1
        loc = np.zeros((3, 3))
        anch = tv[e, 0]
        g = grads[e]
        if nb == 0:
            for q in range(trp4.shape[0]):
                u = trp4[q, 0]
                v = trp4[q, 1]
                xx = tv[e, 0, 0] + u * (tv[e, 1, 0] - tv[e, 0, 0]) \
                    + v * (tv[e, 2, 0] - tv[e, 0, 0])
                xy = tv[e, 0, 1] + u * (tv[e, 1, 1] - tv[e, 0, 1]) \
                    + v * (tv[e, 2, 1] - tv[e, 0, 1])
                w = 2.0 * area[e] * trw4[q]
                _tail_point(xx, xy, w, anch, g, s, dt, coefs, loc)
        elif nb == 1:
            # chart x = V + t (Q(sig) - V); integrable peak at t = 0
            iv = 0
            for i in range(3):
                if bnode[elements[e, i]] != 0:
                    iv = i
            V = tv[e, iv]
            P1 = tv[e, (iv + 1) % 3]
            P2 = tv[e, (iv + 2) % 3]
            t1 = 1.0
            for lev in range(17):
                t0 = 0.0 if lev == 16 else t1 * 0.5
                tm = 0.5 * (t0 + t1)
                th = 0.5 * (t1 - t0)
                for qt in range(m1):
                    t = tm + th * gx[o1 + qt]
                    wt = th * gw[o1 + qt]
                    for qs in range(m1):
                        sg = 0.5 * (1.0 + gx[o1 + qs])
                        ws = 0.5 * gw[o1 + qs]
                        qx = P1[0] + sg * (P2[0] - P1[0])
                        qy = P1[1] + sg * (P2[1] - P1[1])
                        xx = V[0] + t * (qx - V[0])
                        xy = V[1] + t * (qy - V[1])
                        w = 2.0 * area[e] * t * wt * ws
                        _tail_point(xx, xy, w, anch, g, s, dt, coefs, loc)
                t1 = t0
                if t0 == 0.0:
                    break
        else:
            # boundary edge P1-P2; grade toward t = 1 and both edge ends
            i0 = 0
            for i in range(3):
                if bnode[elements[e, i]] == 0:
                    i0 = i
            P0 = tv[e, i0]
            P1 = tv[e, (i0 + 1) % 3]
            P2 = tv[e, (i0 + 2) % 3]
            m2 = 6
            o2 = goff[m2]
            # sigma breakpoints graded toward 0 and 1
            nseg = 20
            sbrk = np.empty(nseg + 1)
            sbrk[0] = 0.0
            for k in range(1, 11):
                sbrk[k] = 0.5 ** (11 - k)
            for k in range(1, 11):
                sbrk[10 + k] = 1.0 - sbrk[10 - k]
            t1 = 0.0  # here grade t toward 1
            w1 = 0.5
            for lev in range(17):
                ta = t1
                tb = 1.0 if lev == 16 else t1 + w1
                tm = 0.5 * (ta + tb)
                th = 0.5 * (tb - ta)
                for qt in range(m1):
                    t = tm + th * gx[o1 + qt]
                    wt = th * gw[o1 + qt]
                    for seg in range(nseg):
                        sm = 0.5 * (sbrk[seg] + sbrk[seg + 1])
                        sh = 0.5 * (sbrk[seg + 1] - sbrk[seg])
                        for qs in range(m2):
                            sg = sm + sh * gx[o2 + qs]
                            ws = sh * gw[o2 + qs]
                            qx = P1[0] + sg * (P2[0] - P1[0])
                            qy = P1[1] + sg * (P2[1] - P1[1])
                            xx = P0[0] + t * (qx - P0[0])
                            xy = P0[1] + t * (qy - P0[1])
                            w = 2.0 * area[e] * t * wt * ws
                            _tail_point(xx, xy, w, anch, g, s, dt, coefs, loc)
                t1 = tb
                w1 *= 0.5
                if tb == 1.0:
                    break
        loc[1, 0] = loc[0, 1]
        loc[2, 0] = loc[0, 2]
        loc[2, 1] = loc[1, 2]
        for i in range(3):
            di = dof[elements[e, i]]
            if di < 0:
                continue
            for j in range(3):
                dj = dof[elements[e, j]]
                if dj < 0:
                    continue
                M[di, dj] += loc[i, j]
    return M
