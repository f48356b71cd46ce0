"""Pairwise singular integrals and the complement (tail) weight.

Public wrappers around the compiled kernels: pair_integral evaluates a
single element-pair contribution to the nonlocal form, and
complement_integral evaluates omega(x) = int_{Omega^c} |x-y|^{-n-2s} dy.
"""

import numpy as np

from . import _kernels1d, _kernels2d
from .problem import Domain
from .quadrule import (
    QuadratureRule,
    gauss_legendre,
    gauss_on,
    gauss_tables,
    graded_segments,
    triangle_rule,
)

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "gauss_on",
    "triangle_rule",
    "graded_segments",
    "pair_integral",
    "complement_integral",
    "gauss_flat",
    "assembly_rules_2d",
]

_GAUSS_FLAT = None
_RULES_2D = None


def gauss_flat():
    """Flat Gauss tables (gx, gw, goff) shared by the compiled kernels."""
    global _GAUSS_FLAT
    if _GAUSS_FLAT is None:
        _GAUSS_FLAT = gauss_tables(24)
    return _GAUSS_FLAT


def assembly_rules_2d():
    """Rule tables for the 2D pair kernels.

    (sqp, sqw): 8x8 tensor Gauss on the unit square,
    (tre, trew): collapsed 8^2 rule on the reference triangle,
    (cup, cuw): 8^3 tensor Gauss on the unit cube,
    (trp, trw, troff): concatenated m^2 triangle rules, m = 2..6.
    """
    global _RULES_2D
    if _RULES_2D is None:
        g = gauss_legendre(8)
        a = 0.5 * (g.points + 1.0)
        wa = 0.5 * g.weights
        sqp = np.column_stack([np.repeat(a, 8), np.tile(a, 8)])
        sqw = np.repeat(wa, 8) * np.tile(wa, 8)
        tr = triangle_rule(8)
        i, j, k = np.meshgrid(np.arange(8), np.arange(8), np.arange(8),
                              indexing="ij")
        cup = np.column_stack([a[i.ravel()], a[j.ravel()], a[k.ravel()]])
        cuw = wa[i.ravel()] * wa[j.ravel()] * wa[k.ravel()]
        troff = np.zeros(8, dtype=np.int64)
        pts, wts = [], []
        off = 0
        for m in range(2, 7):
            troff[m] = off
            r = triangle_rule(m)
            pts.append(r.points)
            wts.append(r.weights)
            off += m * m
        troff[7] = off
        _RULES_2D = (
            sqp, sqw,
            np.ascontiguousarray(tr.points), tr.weights,
            cup, cuw,
            np.ascontiguousarray(np.vstack(pts)), np.concatenate(wts), troff,
        )
    return _RULES_2D


_OMEGA_SPLINES = {}


def omega_spline_2d(s):
    """Cubic spline of the disk complement weight's radial profile.

    omega depends on |x| only; G(t) = omega(1 - t^2) t^{4s} is smooth in
    t = sqrt(1 - rho) on [0, 1], so a dense spline of G reproduces omega
    to near machine precision at a fraction of the direct cost. Returns
    (dt, coefs) for the compiled evaluator.
    """
    cached = _OMEGA_SPLINES.get(s)
    if cached is not None:
        return cached
    import scipy.interpolate

    gx, gw, goff = gauss_flat()
    n = 2049
    t = np.linspace(0.0, 1.0, n)
    G = np.empty(n)
    for i in range(1, n):
        rho = 1.0 - t[i] * t[i]
        G[i] = _kernels2d.omega_disk(rho, s, gx, gw, goff) * t[i] ** (4.0 * s)
    # endpoint limit by linear extrapolation from just inside
    ta, tb = 1e-6, 2e-6
    Ga = _kernels2d.omega_disk(1.0 - ta * ta, s, gx, gw, goff) * ta ** (4.0 * s)
    Gb = _kernels2d.omega_disk(1.0 - tb * tb, s, gx, gw, goff) * tb ** (4.0 * s)
    G[0] = 2.0 * Ga - Gb
    sp = scipy.interpolate.CubicSpline(t, G)
    out = (t[1] - t[0], np.ascontiguousarray(sp.c))
    _OMEGA_SPLINES[s] = out
    return out


def _element_geometry_2d(mesh):
    """(tv, area, grads) arrays for the compiled kernels; cached on the mesh."""
    cached = getattr(mesh, "_geom2d", None)
    if cached is not None:
        return cached
    tv = np.ascontiguousarray(mesh.nodes[mesh.elements], dtype=float)
    e1 = tv[:, 1] - tv[:, 0]
    e2 = tv[:, 2] - tv[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    area = 0.5 * np.abs(det)
    if np.any(area <= 0.0):
        raise ValueError("degenerate element in mesh")
    grads = np.empty((len(tv), 3, 2))
    # gradients of the barycentric coordinates: rows of the chart inverse
    grads[:, 1, 0] = e2[:, 1] / det
    grads[:, 1, 1] = -e2[:, 0] / det
    grads[:, 2, 0] = -e1[:, 1] / det
    grads[:, 2, 1] = e1[:, 0] / det
    grads[:, 0] = -grads[:, 1] - grads[:, 2]
    geom = (tv, area, grads)
    mesh._geom2d = geom
    return geom


def _angular_cache(mesh, s):
    cached = getattr(mesh, "_smat_cache", None)
    if cached is not None and cached[0] == s:
        return cached[1]
    tv, area, grads = _element_geometry_2d(mesh)
    gx, gw, goff = gauss_flat()
    smat = np.empty((len(tv), 3))
    _kernels2d.angular_matrices(tv, s, gx, gw, goff, smat)
    mesh._smat_cache = (s, smat)
    return smat


def pair_integral(mesh, t_a, t_b, s, i, j):
    """One element-pair contribution to the nonlocal bilinear form.

    Returns the double integral over T_a x T_b of

        (phi_i(x) - phi_i(y)) (phi_j(x) - phi_j(y)) / |x-y|^{n+2s},

    where phi_i is the global hat at local vertex i of T_a and phi_j the
    one at local vertex j of T_b. No C(n,s)/2 factor is applied.
    """
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0,1), got {s}")
    nloc = mesh.dim + 1
    if not (0 <= i < nloc and 0 <= j < nloc):
        raise ValueError("local basis index out of range")
    gx, gw, goff = gauss_flat()
    if mesh.dim == 1:
        x = mesh.nodes
        if x[t_a + 1] <= x[t_a] or x[t_b + 1] <= x[t_b]:
            raise ValueError("degenerate element")
        a, b = (t_a, t_b) if t_a <= t_b else (t_b, t_a)
        local = np.empty((4, 4))
        ids = np.empty(4, dtype=np.int64)
        _kernels1d.pair_local_1d(x, a, b, s, gx, gw, goff, local, ids)
        gi = mesh.elements[t_a, i]
        gj = mesh.elements[t_b, j]
    else:
        tv, area, grads = _element_geometry_2d(mesh)
        smat = _angular_cache(mesh, s)
        rules = assembly_rules_2d()
        a, b = (t_a, t_b) if t_a <= t_b else (t_b, t_a)
        local = np.empty((6, 6))
        ids = np.empty(6, dtype=np.int64)
        _kernels2d.pair_local_2d(a, b, mesh.elements, tv, area, grads, smat,
                                 s, *rules, local, ids)
        gi = mesh.elements[t_a, i]
        gj = mesh.elements[t_b, j]
    si = sj = -1
    for k in range(len(ids)):
        if ids[k] == gi:
            si = k
        if ids[k] == gj:
            sj = k
    if si < 0 or sj < 0:
        raise RuntimeError("pair bookkeeping lost a node id")
    return float(local[si, sj])


def complement_integral(x, domain, s):
    """Tail weight omega(x) = int over the complement of |x-y|^{-n-2s} dy."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0,1), got {s}")
    if domain == Domain.INTERVAL:
        xv = float(np.asarray(x).reshape(()))
        if abs(xv) >= 1.0:
            raise ValueError(f"point {xv} not strictly inside (-1,1)")
        return float(_kernels1d.omega_interval(xv, s))
    rho = float(np.hypot(*np.asarray(x, dtype=float).reshape(2)))
    if rho >= 1.0:
        raise ValueError(f"point with |x| = {rho} not strictly inside the disk")
    gx, gw, goff = gauss_flat()
    return float(_kernels2d.omega_disk(rho, s, gx, gw, goff))
