"""Graph-limit optimization toolkit.

Kernels (graphons) for dense graph sequences, exact cut norms and
homomorphism densities, discrete and continuum cut energies, balanced-cut
solvers, and reproducible convergence experiments.
"""

from .errors import CapacityError, InfeasibleError, ParameterError
from .families import (
    FamilyInstance,
    bipartite,
    block_family,
    checkerboard,
    complete,
    halfgraph,
    sign_sin_field,
    w_random,
)
from .fields import (
    LabelModel,
    PartitionSpec,
    ThetaField,
    recovery_sequence,
    repair_mass,
    theta_from_labels,
    window_average,
)
from .functionals import (
    BlockReduction,
    KKTReport,
    QuadratureKernel,
    block_reduce,
    cell_averages,
    discrete_cut_energy,
    halfgraph_profile_energy,
    halfgraph_profiles,
    kkt_residual,
    limit_cut_energy,
    limit_energy_gradient,
    profile_energy_integral,
    spin_energy_gradient,
)
from .graphons import (
    AnalyticGraphon,
    BipartiteSplitKernel,
    BlockDiagonalKernel,
    CheckerboardKernel,
    ConstantKernel,
    CutNormForms,
    CutNormResult,
    Graph,
    HalfGraphKernel,
    StepGraphon,
    cut_distance_blocks,
    cut_norm,
    cut_norm_forms,
    degree,
    hom_density_graph,
    hom_density_graphon,
    motif_cycle4,
    motif_edge,
    motif_path3,
    motif_triangle,
    step_from_graph,
)
from .solvers import (
    BlockVertexResult,
    PlateauResult,
    SolveReport,
    block_vertex_minimum,
    brute_bisection,
    local_search_partition,
    minimize_limit_energy,
    project_box_mean,
    sharpen_plateau,
    swap_descent,
)

__version__ = "0.1.0"
