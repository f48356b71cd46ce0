"""P1 finite elements for the integral fractional Laplacian.

Homogeneous Dirichlet problem for (-Delta)^s, s in (1/2, 1), on the
interval (-1, 1) and the unit disk, with uniform and boundary-graded
meshes, a family of closed-form solutions for convergence studies, and
a brute-force quadrature oracle for validating the assembled matrices.
"""

from .assembly import (LoadVector, SymmetricMatrix, assemble_load,
                       assemble_stiffness, load_matrix, save_matrix)
from .meshing import (Mesh, build_disk_mesh, build_graded_1d,
                      build_uniform_1d, load_mesh, mesh_stats, save_mesh,
                      shape_regularity)
from .norms import (ErrorReport, energy_error, fit_order, h1_error,
                    h1_seminorm_discrete, l2_error)
from .problem import (Domain, ProblemSpec, exact_gradient, exact_rhs,
                      exact_solution, load_solution_pairing)
from .quadrature import complement_integral, pair_integral
from .solve import DiscreteSolution, condition_estimate, solve_spd
from .special import jacobi_poly, normalization_constant
from .study import (ConvergenceRecord, StudyConfig, StudyConfigError,
                    emit_plot, export_gradient_field, grading_exponent,
                    load_study_config, probe_half, run_study)

__version__ = "0.1.0"

__all__ = [
    "Domain", "ProblemSpec", "exact_rhs", "exact_solution", "exact_gradient",
    "load_solution_pairing", "jacobi_poly", "normalization_constant",
    "Mesh", "build_uniform_1d", "build_graded_1d", "build_disk_mesh",
    "mesh_stats", "save_mesh", "load_mesh", "shape_regularity",
    "pair_integral", "complement_integral",
    "SymmetricMatrix", "LoadVector", "assemble_stiffness", "assemble_load",
    "save_matrix", "load_matrix",
    "DiscreteSolution", "solve_spd", "condition_estimate",
    "ErrorReport", "l2_error", "h1_error", "h1_seminorm_discrete",
    "energy_error", "fit_order",
    "StudyConfig", "StudyConfigError", "ConvergenceRecord",
    "load_study_config", "grading_exponent", "run_study", "probe_half",
    "emit_plot", "export_gradient_field",
]
