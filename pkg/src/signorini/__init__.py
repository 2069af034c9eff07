"""2D finite-element laboratory for the scalar boundary-obstacle problem.

Solves the unilateral boundary-constrained Poisson problem on ring,
disk, polygon and star domains, and certifies where the solution must
touch the obstacle via explicit supersolution barriers.
"""

__version__ = "0.1.0"

from .assembly import (
    AssemblyError,
    DiscreteSystem,
    assemble_load,
    assemble_mass,
    assemble_stiffness,
    build_system,
    check_compatibility,
)
from .barriers import (
    BarrierCertificate,
    BarrierError,
    comparison_check,
    intrinsic_barrier,
    ode_barrier,
    quadratic_barrier,
    ring_barrier,
    select_constants,
    verify_supersolution,
)
from .coincidence import CoincidenceReport, alpha_stability, coverage, extract_coincidence
from .fields import (
    ObstacleExtension,
    ScalarField,
    ZeroExtension,
    catalog_field,
    check_balance,
    constant_field,
    extend_obstacle,
    parse_field,
)
from .geometry import (
    DomainDescriptor,
    TriMesh,
    build_mesh,
    disk,
    intrinsic_distance,
    nonconvexity_defect,
    polygon,
    ring,
    star,
    tubular_frame,
)
from .pipeline import RunReport, run_scenario
from .solvers import (
    CompatibilityError,
    Solution,
    SolverError,
    SolverOptions,
    oracle_solve,
    solve_alpha,
    solve_dirichlet_signorini,
    solve_problem_one,
)
