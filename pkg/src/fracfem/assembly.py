"""Galerkin assembly of the nonlocal stiffness matrix and load vector.

The stiffness entry for interior hats phi_i, phi_j is

    A_ij = C(n,s)/2 * sum over element pairs of pair contributions
         + C(n,s) * int_Omega phi_i phi_j omega(x) dx,

with omega the complement weight; the decomposition is exact for
functions extended by zero. The pair loop runs over a <= b with factor 2
off the diagonal.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels1d, _kernels2d
from .problem import ProblemSpec, exact_rhs
from .quadrature import assembly_rules_2d, gauss_flat, triangle_rule
from .special import normalization_constant

__all__ = [
    "SymmetricMatrix",
    "LoadVector",
    "assemble_stiffness",
    "assemble_load",
    "save_matrix",
    "load_matrix",
]


@dataclass
class SymmetricMatrix:
    """Dense SPD matrix stored as the packed lower triangle, row-major."""

    dim: int
    storage: np.ndarray  # (dim*(dim+1)//2,)

    @classmethod
    def from_dense(cls, A):
        n = A.shape[0]
        idx = np.tril_indices(n)
        return cls(dim=n, storage=np.ascontiguousarray(A[idx]))

    def dense(self):
        A = np.zeros((self.dim, self.dim))
        idx = np.tril_indices(self.dim)
        A[idx] = self.storage
        A = A + A.T
        A[np.diag_indices(self.dim)] *= 0.5
        return A

    def diagonal(self):
        n = self.dim
        pos = np.arange(1, n + 1) * np.arange(2, n + 2) // 2 - 1
        return self.storage[pos]


@dataclass
class LoadVector:
    dim: int
    values: np.ndarray


def _check_mesh_s(mesh, s):
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0,1), got {s}")
    if mesh.n_dofs < 1:
        raise ValueError("mesh has no interior degrees of freedom")


def assemble_stiffness(mesh, s):
    """Stiffness matrix over interior-node hats; raises if not SPD."""
    _check_mesh_s(mesh, s)
    gx, gw, goff = gauss_flat()
    dof = mesh.dof_of_node
    n = 1 if mesh.dim == 1 else 2
    c = normalization_constant(n, s)
    if mesh.dim == 1:
        x = np.ascontiguousarray(mesh.nodes, dtype=float)
        P = _kernels1d.interaction_matrix_1d(x, s, dof, gx, gw, goff)
        T = _kernels1d.tail_matrix_1d(x, s, dof, gx, gw, goff)
    else:
        from .quadrature import (_angular_cache, _element_geometry_2d,
                                 omega_spline_2d)

        tv, area, grads = _element_geometry_2d(mesh)
        smat = _angular_cache(mesh, s)
        rules = assembly_rules_2d()
        P = _kernels2d.interaction_matrix_2d(mesh.elements, tv, area, grads,
                                             smat, s, dof, rules)
        bnode = np.zeros(len(mesh.nodes), dtype=np.int64)
        bnode[mesh.boundary_nodes] = 1
        tr4 = triangle_rule(4)
        dt, coefs = omega_spline_2d(s)
        T = _kernels2d.tail_matrix_2d(mesh.elements, tv, area, grads, bnode,
                                      dof, s, gx, gw, goff, dt, coefs,
                                      np.ascontiguousarray(tr4.points),
                                      tr4.weights)
    A = 0.5 * c * P + c * T
    # accumulation order makes the off-diagonal blocks equal, not bitwise
    # identical; symmetrize from the lower triangle
    Asym = np.tril(A) + np.tril(A, -1).T
    M = SymmetricMatrix.from_dense(Asym)
    try:
        scipy.linalg.cholesky(Asym, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise ArithmeticError(
            "assembled matrix is not positive definite; "
            "quadrature or sign bug"
        ) from exc
    return M


def assemble_load(mesh, spec: ProblemSpec):
    """b_i = int_Omega f phi_i dx, elementwise Gauss."""
    if (mesh.dim == 1) != (spec.n == 1):
        raise ValueError("mesh dimension does not match problem dimension")
    b = np.zeros(mesh.n_dofs)
    dof = mesh.dof_of_node
    if mesh.dim == 1:
        from .quadrule import gauss_legendre

        g = gauss_legendre(8)
        x = mesh.nodes
        for e in range(mesh.n_elements):
            xl, xr = x[e], x[e + 1]
            h = xr - xl
            xa = 0.5 * (xl + xr) + 0.5 * h * g.points
            w = 0.5 * h * g.weights
            fv = exact_rhs(spec, xa)
            p0 = (xr - xa) / h
            p1 = (xa - xl) / h
            for loc, p in ((0, p0), (1, p1)):
                d = dof[e + loc]
                if d >= 0:
                    b[d] += np.sum(w * fv * p)
    else:
        tr = triangle_rule(4)
        p = mesh.nodes[mesh.elements]
        areas = mesh.element_measures()
        u = tr.points[:, 0]
        v = tr.points[:, 1]
        lam = np.stack([1.0 - u - v, u, v], axis=1)  # (q, 3)
        for e in range(mesh.n_elements):
            pts = (np.outer(1.0 - u - v, p[e, 0]) + np.outer(u, p[e, 1])
                   + np.outer(v, p[e, 2]))
            fv = exact_rhs(spec, pts)
            w = 2.0 * areas[e] * tr.weights
            for loc in range(3):
                d = dof[mesh.elements[e, loc]]
                if d >= 0:
                    b[d] += np.sum(w * fv * lam[:, loc])
    return LoadVector(dim=mesh.n_dofs, values=b)


def save_matrix(M: SymmetricMatrix, path):
    """Binary dump: 8-byte unsigned dof count, then the little-endian
    8-byte float lower triangle in row-major order."""
    with open(path, "wb") as fh:
        fh.write(np.array(M.dim, dtype="<u8").tobytes())
        fh.write(M.storage.astype("<f8").tobytes())


def load_matrix(path):
    with open(path, "rb") as fh:
        dim = int(np.frombuffer(fh.read(8), dtype="<u8")[0])
        storage = np.frombuffer(fh.read(8 * dim * (dim + 1) // 2), dtype="<f8")
    if len(storage) != dim * (dim + 1) // 2:
        raise ValueError("truncated matrix file")
    return SymmetricMatrix(dim=dim, storage=storage.copy())
