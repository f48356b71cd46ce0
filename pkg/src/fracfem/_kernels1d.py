"""Numba kernels for the 1D nonlocal stiffness assembly.

Element-pair integrals of

    (phi_i(x) - phi_i(y)) (phi_j(x) - phi_j(y)) / |x-y|^{1+2s}

over [x_a, x_a+1] x [x_b, x_b+1]. Identical and vertex-touching pairs
reduce to closed forms: the P1 difference on a single element is linear
in (x - y), and for a touching pair the integrand is homogeneous about
the shared node, so a Duffy split leaves elementary 1D integrals of
polynomials against (c + v)^{-1-2s}. Disjoint pairs use tensor Gauss
with geometric subdivision toward the near endpoints when the gap is
small relative to the element sizes.

Every pair value is computed independently of thread count; the scatter
into the global matrix runs serially in pair order, so assembly output
is bitwise reproducible for any thread count.
"""

import numpy as np
from numba import njit, prange

# ---------------------------------------------------------------------------
# elementary integrals


@njit(cache=True)
def _pint(e, x0, x1):
    # int_{x0}^{x1} w^e dw with the log limit at e = -1
    if abs(e + 1.0) < 1e-8:
        return np.log(x1 / x0)
    return (x1 ** (e + 1.0) - x0 ** (e + 1.0)) / (e + 1.0)


@njit(cache=True)
def _lin_weighted(c, H, q, e):
    # int_0^H v^q (c+v)^e dv for q in {0,1,2}
    if q == 0:
        return _pint(e, c, c + H)
    if q == 1:
        return _pint(e + 1.0, c, c + H) - c * _pint(e, c, c + H)
    return (
        _pint(e + 2.0, c, c + H)
        - 2.0 * c * _pint(e + 1.0, c, c + H)
        + c * c * _pint(e, c, c + H)
    )


@njit(cache=True)
def touching_moments(h1, h2, s):
    """(I20, I11, I02) with Ipq = int a^p v^q (a+v)^{-1-2s} over [0,h1]x[0,h2]."""
    e = -1.0 - 2.0 * s
    den = 3.0 - 2.0 * s
    out = np.empty(3)
    k = 0
    for p in range(2, -1, -1):
        q = 2 - p
        j1 = _lin_weighted(h1, h2, q, e)
        j2 = _lin_weighted(h2, h1, p, e)
        out[k] = (h1 ** (p + 1) * j1 + h2 ** (q + 1) * j2) / den
        k += 1
    return out


@njit(cache=True)
def identical_value(h, s):
    """int over T x T of |x-y|^{1-2s}; multiply by slope products."""
    return 2.0 * h ** (3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s))


# ---------------------------------------------------------------------------
# disjoint pairs


@njit(cache=True)
def _geom_cells(p, q, gap, cells):
    """Geometric subdivision of [p,q] toward p; cell k spans gap*(2^k-1..2^k+1-1)."""
    n = 0
    lo = p
    width = gap
    while lo + width < q and n < cells.shape[0] - 1:
        cells[n, 0] = lo
        cells[n, 1] = lo + width
        lo += width
        width *= 2.0
        n += 1
    cells[n, 0] = lo
    cells[n, 1] = q
    n += 1
    return n


@njit(cache=True)
def disjoint_pair_1d(a0, a1, b0, b1, s, gx, gw, goff, local):
    """Accumulate the 4x4 local matrix for a disjoint pair (a before b).

    local is zeroed here; node order [na0, na1, nb0, nb1].
    """
    la = a1 - a0
    lb = b1 - b0
    gap = b0 - a1
    ratio = gap / max(la, lb)
    if ratio < 1.0:
        m = 8
    elif ratio < 4.0:
        m = 6
    elif ratio < 16.0:
        m = 5
    else:
        m = 4
    for i in range(4):
        for j in range(4):
            local[i, j] = 0.0

    ca = np.empty((64, 2))
    cb = np.empty((64, 2))
    if ratio < 1.0:
        na = _geom_cells(-a1, -a0, gap, ca)  # grade toward a1: mirror
        for k in range(na):
            t0, t1 = ca[k, 0], ca[k, 1]
            ca[k, 0] = -t1
            ca[k, 1] = -t0
        nb = _geom_cells(b0, b1, gap, cb)
    else:
        na = 1
        ca[0, 0] = a0
        ca[0, 1] = a1
        nb = 1
        cb[0, 0] = b0
        cb[0, 1] = b1

    o = goff[m]
    e = -1.0 - 2.0 * s
    p = np.empty(4)
    for kc in range(na):
        xa0, xa1 = ca[kc, 0], ca[kc, 1]
        hxa = 0.5 * (xa1 - xa0)
        mxa = 0.5 * (xa1 + xa0)
        for lc in range(nb):
            yb0, yb1 = cb[lc, 0], cb[lc, 1]
            hyb = 0.5 * (yb1 - yb0)
            myb = 0.5 * (yb1 + yb0)
            for qa in range(m):
                x = mxa + hxa * gx[o + qa]
                wxa = hxa * gw[o + qa]
                p[0] = (a1 - x) / la
                p[1] = (x - a0) / la
                for qb in range(m):
                    y = myb + hyb * gx[o + qb]
                    w = wxa * hyb * gw[o + qb]
                    ker = w * (y - x) ** e
                    p[2] = -(b1 - y) / lb
                    p[3] = -(y - b0) / lb
                    for i in range(4):
                        pi = p[i] * ker
                        for j in range(4):
                            local[i, j] += pi * p[j]


# ---------------------------------------------------------------------------
# pair dispatch


@njit(cache=True)
def pair_local_1d(x, a, b, s, gx, gw, goff, local, ids):
    """Local pair matrix and its (up to 4) global node ids; returns count."""
    for i in range(4):
        ids[i] = -1
        for j in range(4):
            local[i, j] = 0.0
    if a == b:
        h = x[a + 1] - x[a]
        base = identical_value(h, s)
        sl0 = -1.0 / h
        sl1 = 1.0 / h
        local[0, 0] = base * sl0 * sl0
        local[0, 1] = base * sl0 * sl1
        local[1, 0] = local[0, 1]
        local[1, 1] = base * sl1 * sl1
        ids[0] = a
        ids[1] = a + 1
        return 2
    if b == a + 1:
        h1 = x[a + 1] - x[a]
        h2 = x[b + 1] - x[b]
        mom = touching_moments(h1, h2, s)  # I20, I11, I02
        # slopes of the three hats on the left/right element
        al0, al1, al2 = -1.0 / h1, 1.0 / h1, 0.0
        be0, be1, be2 = 0.0, -1.0 / h2, 1.0 / h2
        alpha = (al0, al1, al2)
        beta = (be0, be1, be2)
        for i in range(3):
            for j in range(3):
                local[i, j] = (
                    alpha[i] * alpha[j] * mom[0]
                    + (alpha[i] * beta[j] + alpha[j] * beta[i]) * mom[1]
                    + beta[i] * beta[j] * mom[2]
                )
        ids[0] = a
        ids[1] = a + 1
        ids[2] = a + 2
        return 3
    disjoint_pair_1d(x[a], x[a + 1], x[b], x[b + 1], s, gx, gw, goff, local)
    ids[0] = a
    ids[1] = a + 1
    ids[2] = b
    ids[3] = b + 1
    return 4


@njit(cache=True)
def _pair_from_index(t, ne):
    # invert t = a*ne - a(a-1)/2 + (b-a) for 0 <= a <= b < ne
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
def _pair_chunk(x, s, gx, gw, goff, t0, t1, vals, idsbuf):
    for k in prange(t1 - t0):
        a, b = _pair_from_index(t0 + k, x.shape[0] - 1)
        local = np.empty((4, 4))
        ids = np.empty(4, dtype=np.int64)
        pair_local_1d(x, a, b, s, gx, gw, goff, local, ids)
        mult = 1.0 if a == b else 2.0
        for i in range(4):
            idsbuf[k, i] = ids[i]
            for j in range(4):
                vals[k, 4 * i + j] = mult * local[i, j]


@njit(cache=True)
def _scatter_chunk(A, dof, vals, idsbuf, count):
    for k in range(count):
        for i in range(4):
            ni = idsbuf[k, i]
            if ni < 0:
                continue
            di = dof[ni]
            if di < 0:
                continue
            for j in range(4):
                nj = idsbuf[k, j]
                if nj < 0:
                    continue
                dj = dof[nj]
                if dj < 0:
                    continue
                A[di, dj] += vals[k, 4 * i + j]


def interaction_matrix_1d(x, s, dof, gx, gw, goff, chunk=1 << 17):
    """Sum of pair contributions over ordered element pairs (no C(n,s)/2 yet)."""
    ne = len(x) - 1
    ndof = int(dof.max()) + 1
    A = np.zeros((ndof, ndof))
    npairs = ne * (ne + 1) // 2
    vals = np.empty((chunk, 16))
    idsbuf = np.empty((chunk, 4), dtype=np.int64)
    t0 = 0
    while t0 < npairs:
        t1 = min(npairs, t0 + chunk)
        _pair_chunk(x, s, gx, gw, goff, t0, t1, vals, idsbuf)
        _scatter_chunk(A, dof, vals, idsbuf, t1 - t0)
        t0 = t1
    return A


# ---------------------------------------------------------------------------
# complement (tail) weight and its mass-type matrix


@njit(cache=True)
def omega_interval(xp, s):
    return ((1.0 + xp) ** (-2.0 * s) + (1.0 - xp) ** (-2.0 * s)) / (2.0 * s)


@njit(cache=True)
def tail_matrix_1d(x, s, dof, gx, gw, goff, levels=20):
    """M_ij = int phi_i phi_j omega(x) dx, graded toward the endpoints."""
    ne = len(x) - 1
    ndof = int(dof.max()) + 1
    M = np.zeros((ndof, ndof))
    m_in = 8
    m_bd = 10
    for e in range(ne):
        xl = x[e]
        xr = x[e + 1]
        h = xr - xl
        loc = np.zeros((2, 2))
        if e == 0 or e == ne - 1:
            # geometric composite toward the boundary endpoint; work in the
            # local distance-to-boundary coordinate so the near-boundary
            # weight never suffers cancellation, even for h ~ 1e-9
            toward_left = e == 0
            o = goff[m_bd]
            t0 = 0.0
            width = 0.5
            for lev in range(levels + 1):
                t1 = 1.0 if lev == levels else t0 + width
                # fraction of h away from the endpoint; flip so the
                # geometric refinement accumulates at the boundary
                u0 = 1.0 - t1
                u1 = 1.0 - t0
                mid_t = 0.5 * (u0 + u1)
                half_t = 0.5 * (u1 - u0)
                for q in range(m_bd):
                    tq = mid_t + half_t * gx[o + q]
                    dnear = h * tq
                    dfar = 2.0 - dnear
                    om = (dnear ** (-2.0 * s) + dfar ** (-2.0 * s)) / (2.0 * s)
                    w = h * half_t * gw[o + q] * om
                    # hat value at the boundary-touching node is 1 - tq
                    if toward_left:
                        p0, p1 = 1.0 - tq, tq
                    else:
                        p0, p1 = tq, 1.0 - tq
                    loc[0, 0] += w * p0 * p0
                    loc[0, 1] += w * p0 * p1
                    loc[1, 1] += w * p1 * p1
                t0 = t1
                width *= 0.5
        else:
            o = goff[m_in]
            mid = 0.5 * (xl + xr)
            half = 0.5 * h
            for q in range(m_in):
                xp = mid + half * gx[o + q]
                w = half * gw[o + q] * omega_interval(xp, s)
                p0 = (xr - xp) / h
                p1 = (xp - xl) / h
                loc[0, 0] += w * p0 * p0
                loc[0, 1] += w * p0 * p1
                loc[1, 1] += w * p1 * p1
        loc[1, 0] = loc[0, 1]
        for i in range(2):
            di = dof[e + i]
            if di < 0:
                continue
            for j in range(2):
                dj = dof[e + j]
                if dj < 0:
                    continue
                M[di, dj] += loc[i, j]
    return M
