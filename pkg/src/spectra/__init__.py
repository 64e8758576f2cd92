"""Numerical experiments on the fundamental Dirichlet eigenvalue of a planar
domain with a rotating internal obstacle: exact dihedral-symmetric geometry,
deterministic triangulation, P1 finite elements, boundary-integral rotation
derivatives, and machine-checkable extremality verdicts."""

from .eigensolve import (
    ConvergenceError,
    EigenSolution,
    LinearSolution,
    second_eigenvalue,
    smallest_eigenpair,
    solve_linear,
)
from .experiments import (
    CheckResult,
    ReflectionReport,
    SweepRecord,
    TheoremReport,
    TheoryViolationError,
    reflection_test,
    schrodinger_sweep,
    solve_eigen,
    sweep,
    torsion_sweep,
    verify_symmetries,
    verify_theorems,
)
from .fem import (
    DirichletSystem,
    P1Interpolant,
    PointLocationError,
    PotentialTerm,
    assemble,
    assemble_potential,
    assemble_torsion_load,
)
from .geometry import (
    BoundaryPoint,
    Configuration,
    DomainPair,
    RadialProfile,
    RotatedProfile,
    Sector,
    boundary_point,
    check_free_rotation,
    eval_radius,
    inclusion_deficit,
    reflect,
    rotated_profile,
    validate_profile,
    vertices,
)
from .mesh import (
    ANNULAR,
    FULL,
    INTERIOR,
    OBSTACLE,
    OBSTACLE_BOUNDARY,
    ANNULUS,
    OUTER_BOUNDARY,
    MeshError,
    MeshParams,
    PlanarMesh,
    discretize_boundary,
    refine,
    triangulate,
)
from .oracle import bessel_j0, bessel_y0, disk_lambda1, first_j0_zero, oracle_annulus
from .shape_derivative import (
    BoundaryFlux,
    finite_difference_derivative,
    hadamard_derivative,
    recover_flux,
)

__version__ = "0.1.0"
