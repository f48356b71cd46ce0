"""Error norms between discrete and exact solutions, and order fitting.

The exact gradient blows up like (1 - |x|^2)^{s-1} at the boundary, so
elements touching the boundary are integrated with geometric composite
rules graded toward it. The energy error uses the identity

    ||u - u_h||^2 = <f,u> - 2 <f,v> + v^T A v

(valid for any discrete v by a(u,.) = <f,.>), so no singular double
integral is ever formed.
"""

from dataclasses import dataclass

import numpy as np

from .problem import ProblemSpec, exact_gradient, exact_rhs, exact_solution
from .quadrule import gauss_legendre, graded_segments, triangle_rule
from .special import jacobi_poly, jacobi_poly_deriv

__all__ = [
    "ErrorReport",
    "l2_error",
    "h1_error",
    "h1_seminorm_discrete",
    "energy_error",
    "fit_order",
    "load_pairing_quadrature",
]

_BLEVELS = 12  # geometric levels toward the boundary, ratio 1/2


@dataclass
class ErrorReport:
    l2: float
    h1_semi: float
    energy: float
    dofs: int
    h: float
    h_min: float


def _check(sol, spec):
    if (sol.mesh.dim == 1) != (spec.n == 1):
        raise ValueError("solution mesh and problem dimension disagree")
    if len(sol.coefficients) != sol.mesh.n_dofs:
        raise ValueError("coefficient count does not match mesh dofs")


def _node_values(sol):
    vals = np.zeros(len(sol.mesh.nodes))
    vals[sol.mesh.interior_nodes] = sol.coefficients
    return vals


# ---------------------------------------------------------------------------
# quadrature point generators per element


def _points_1d(mesh, e, m, graded):
    x = mesh.nodes
    xl, xr = x[e], x[e + 1]
    g = gauss_legendre(m)
    if not graded:
        return (0.5 * (xl + xr) + 0.5 * (xr - xl) * g.points,
                0.5 * (xr - xl) * g.weights)
    toward_right = xl > -0.5  # grade toward whichever endpoint is boundary
    cuts = graded_segments(xl, xr, _BLEVELS, toward_b=toward_right)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    halfs = 0.5 * np.diff(cuts)
    pts = (mids[:, None] + halfs[:, None] * g.points).ravel()
    wts = (halfs[:, None] * g.weights).ravel()
    return pts, wts


def _points_tri_plain(p0, p1, p2, m):
    tr = triangle_rule(m)
    u = tr.points[:, 0][:, None]
    v = tr.points[:, 1][:, None]
    pts = p0 + u * (p1 - p0) + v * (p2 - p0)
    area2 = abs((p1[0] - p0[0]) * (p2[1] - p0[1])
                - (p1[1] - p0[1]) * (p2[0] - p0[0]))
    return pts, area2 * tr.weights


def _graded_01(levels, m, toward_one):
    cuts = graded_segments(0.0, 1.0, levels, toward_b=toward_one)
    g = gauss_legendre(m)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    halfs = 0.5 * np.diff(cuts)
    t = (mids[:, None] + halfs[:, None] * g.points).ravel()
    w = (halfs[:, None] * g.weights).ravel()
    return t, w


def _both_ends_01(levels, m):
    t1, w1 = _graded_01(levels, m, toward_one=False)
    half_t = 0.5 * t1
    half_w = 0.5 * w1
    return (np.concatenate([half_t, 1.0 - half_t[::-1]]),
            np.concatenate([half_w, half_w[::-1]]))


def _points_tri_boundary(mesh, e):
    """Graded chart quadrature for a triangle touching the unit circle."""
    nodes = mesh.nodes[mesh.elements[e]]
    r = np.hypot(nodes[:, 0], nodes[:, 1])
    onb = r >= 1.0 - 1e-12
    nb = int(onb.sum())
    if nb == 1:
        iv = int(np.argmax(onb))
        V = nodes[iv]
        P1 = nodes[(iv + 1) % 3]
        P2 = nodes[(iv + 2) % 3]
        t, wt = _graded_01(_BLEVELS, 8, toward_one=False)
        sg, ws = 0.5 * (1.0 + gauss_legendre(8).points), 0.5 * gauss_legendre(8).weights
    elif nb == 2:
        i0 = int(np.argmin(onb))
        V = nodes[i0]  # interior apex; chart toward the boundary edge
        P1 = nodes[(i0 + 1) % 3]
        P2 = nodes[(i0 + 2) % 3]
        t, wt = _graded_01(_BLEVELS, 8, toward_one=True)
        sg, ws = _both_ends_01(8, 6)
    else:
        raise ValueError("element with all three vertices on the boundary")
    area2 = abs((P1[0] - V[0]) * (P2[1] - V[1]) - (P1[1] - V[1]) * (P2[0] - V[0]))
    Q = P1[None, :] + sg[:, None] * (P2 - P1)[None, :]      # (ns, 2)
    pts = V[None, None, :] + t[:, None, None] * (Q[None, :, :] - V[None, None, :])
    w = area2 * (t * wt)[:, None] * ws[None, :]
    return pts.reshape(-1, 2), w.ravel()


# ---------------------------------------------------------------------------
# error norms


def l2_error(sol, spec: ProblemSpec):
    """Elementwise Gauss integration of (u - u_h)^2, refined at the boundary."""
    _check(sol, spec)
    mesh = sol.mesh
    vals = _node_values(sol)
    acc = 0.0
    if mesh.dim == 1:
        x = mesh.nodes
        for e in range(mesh.n_elements):
            bd = mesh.elem_dist[e] <= 1e-12
            pts, w = _points_1d(mesh, e, 16 if bd else 8, graded=False)
            h = x[e + 1] - x[e]
            uh = (vals[e] * (x[e + 1] - pts) + vals[e + 1] * (pts - x[e])) / h
            diff = exact_solution(spec, pts) - uh
            acc += float(np.sum(w * diff * diff))
    else:
        p = mesh.nodes[mesh.elements]
        for e in range(mesh.n_elements):
            bd = mesh.elem_dist[e] <= 1e-12
            pts, w = _points_tri_plain(p[e, 0], p[e, 1], p[e, 2], 8 if bd else 4)
            uh = _p1_eval(mesh, e, vals, pts)
            diff = exact_solution(spec, pts) - uh
            acc += float(np.sum(w * diff * diff))
        # the polygon is a strict subset of the disk; u_h = 0 on the rest
        acc += _sliver_term(mesh, spec, "l2")
    return float(np.sqrt(max(acc, 0.0)))


def _sliver_term(mesh, spec, kind):
    """Error mass between the boundary polygon and the unit circle.

    u_h vanishes there, so the contribution is the integral of |u|^2
    (kind "l2") or |grad u|^2 (kind "h1") over the circular segments cut
    off by the boundary chords.  The exact solutions are radial, and the
    segment integral only depends on the chord's angular gap, so distinct
    gaps are computed once and reused.
    """
    b = mesh.boundary_nodes
    theta = np.sort(np.arctan2(mesh.nodes[b, 1], mesh.nodes[b, 0]))
    gaps = np.diff(np.append(theta, theta[0] + 2.0 * np.pi))
    uniq, counts = np.unique(np.round(gaps, 12), return_counts=True)

    s = spec.s
    # radial substitution r = 1 - a v^p flattens the (1-r)^{2s-2} factor
    p = 1.0 / (2.0 * s - 1.0) if kind == "h1" else 1.0
    gt = gauss_legendre(8)
    gv = gauss_legendre(16)
    tq = 0.5 * (1.0 + gt.points)
    tw = 0.5 * gt.weights
    vq = 0.5 * (1.0 + gv.points)
    vw = 0.5 * gv.weights

    acc = 0.0
    for gap, count in zip(uniq, counts):
        if gap <= 0.0:
            continue
        rc = np.cos(0.5 * gap) / np.cos(gap * (tq - 0.5))  # chord radius
        a = 1.0 - rc                                       # (nt,)
        d = a[:, None] * vq[None, :] ** p                  # dist to circle
        jac = a[:, None] * p * vq[None, :] ** (p - 1.0) * vw[None, :]
        om = d * (2.0 - d)                                 # 1 - r^2, stable
        t = 1.0 - 2.0 * om                                 # 2 r^2 - 1
        r = 1.0 - d
        P = np.asarray(jacobi_poly(spec.k, s, spec.jacobi_beta, t))
        if kind == "h1":
            Pd = np.asarray(jacobi_poly_deriv(spec.k, s, spec.jacobi_beta, t))
            du = spec.solution_constant * r * (
                -2.0 * s * om ** (s - 1.0) * P + 4.0 * om ** s * Pd)
            f = du * du
        else:
            u = spec.solution_constant * om ** s * P
            f = u * u
        radial = np.sum(f * r * jac, axis=1)               # (nt,)
        acc += count * gap * float(np.sum(tw * radial))
    return acc


def _p1_eval(mesh, e, vals, pts):
    nodes = mesh.nodes[mesh.elements[e]]
    e1 = nodes[1] - nodes[0]
    e2 = nodes[2] - nodes[0]
    det = e1[0] * e2[1] - e1[1] * e2[0]
    d = pts - nodes[0]
    u = (d[:, 0] * e2[1] - d[:, 1] * e2[0]) / det
    v = (e1[0] * d[:, 1] - e1[1] * d[:, 0]) / det
    c = vals[mesh.elements[e]]
    return c[0] * (1.0 - u - v) + c[1] * u + c[2] * v


def _p1_grad(mesh, e, vals):
    nodes = mesh.nodes[mesh.elements[e]]
    e1 = nodes[1] - nodes[0]
    e2 = nodes[2] - nodes[0]
    det = e1[0] * e2[1] - e1[1] * e2[0]
    g1 = np.array([e2[1], -e2[0]]) / det
    g2 = np.array([-e1[1], e1[0]]) / det
    g0 = -g1 - g2
    c = vals[mesh.elements[e]]
    return c[0] * g0 + c[1] * g1 + c[2] * g2


def h1_error(sol, spec: ProblemSpec):
    """sqrt of the elementwise integral of |grad u - grad u_h|^2."""
    _check(sol, spec)
    mesh = sol.mesh
    vals = _node_values(sol)
    acc = 0.0
    if mesh.dim == 1:
        x = mesh.nodes
        for e in range(mesh.n_elements):
            bd = mesh.elem_dist[e] <= 1e-12
            pts, w = _points_1d(mesh, e, 8, graded=bd)
            duh = (vals[e + 1] - vals[e]) / (x[e + 1] - x[e])
            diff = exact_gradient(spec, pts) - duh
            acc += float(np.sum(w * diff * diff))
    else:
        p = mesh.nodes[mesh.elements]
        for e in range(mesh.n_elements):
            bd = mesh.elem_dist[e] <= 1e-12
            if bd:
                pts, w = _points_tri_boundary(mesh, e)
            else:
                pts, w = _points_tri_plain(p[e, 0], p[e, 1], p[e, 2], 4)
            guh = _p1_grad(mesh, e, vals)
            diff = exact_gradient(spec, pts) - guh[None, :]
            acc += float(np.sum(w * np.sum(diff * diff, axis=1)))
        # gradient mass in the sliver between the polygon and the circle
        acc += _sliver_term(mesh, spec, "h1")
    return float(np.sqrt(max(acc, 0.0)))


def h1_seminorm_discrete(sol):
    """|u_h|_{H^1}: exact, since P1 gradients are constant per element."""
    mesh = sol.mesh
    vals = _node_values(sol)
    acc = 0.0
    if mesh.dim == 1:
        x = mesh.nodes
        d = np.diff(x)
        dv = np.diff(vals)
        acc = float(np.sum(dv * dv / d))
    else:
        meas = mesh.element_measures()
        for e in range(mesh.n_elements):
            g = _p1_grad(mesh, e, vals)
            acc += meas[e] * float(g @ g)
    return float(np.sqrt(max(acc, 0.0)))


def load_pairing_quadrature(spec: ProblemSpec, levels=24, m=16):
    """<f, u> by radial quadrature graded toward the boundary."""
    t, w = _graded_01(levels, m, toward_one=True)
    if spec.n == 1:
        fu = exact_rhs(spec, t) * exact_solution(spec, t)
        return 2.0 * float(np.sum(w * fu))
    pts = np.column_stack([t, np.zeros_like(t)])
    fu = exact_rhs(spec, pts) * exact_solution(spec, pts)
    return 2.0 * np.pi * float(np.sum(w * t * fu))


def energy_error(A, b, sol, spec: ProblemSpec):
    """Energy-norm error of any discrete coefficient vector."""
    _check(sol, spec)
    v = sol.coefficients
    if A.dim != len(v) or b.dim != len(v):
        raise ValueError("matrix/load dimensions do not match the solution")
    fu = load_pairing_quadrature(spec)
    quad = float(v @ (A.dense() @ v))
    val = fu - 2.0 * float(b.values @ v) + quad
    if val < -1e-10:
        raise ArithmeticError(f"energy error squared is {val:.3e} < -1e-10")
    return float(np.sqrt(max(val, 0.0)))


def fit_order(records, x_field, y_field="h1"):
    """Least-squares log-log slope, sign-adjusted to a positive order.

    records: objects with attributes (x_field, y_field) or (x, y) pairs.
    Order in h (or h_min) is the slope itself; order in dofs (or N) is
    minus the slope.
    """
    xs, ys = [], []
    for r in records:
        if isinstance(r, (tuple, list)):
            x, y = r
        else:
            x = getattr(r, x_field)
            y = getattr(r, y_field)
        xs.append(float(x))
        ys.append(float(y))
    if len(xs) < 3:
        raise ValueError(f"need at least 3 records to fit, got {len(xs)}")
    if min(ys) <= 0.0 or min(xs) <= 0.0:
        raise ValueError("order fit requires positive errors and sizes")
    slope = np.polyfit(np.log(xs), np.log(ys), 1)[0]
    if x_field in ("dofs", "N", "n"):
        slope = -slope
    return float(slope)
