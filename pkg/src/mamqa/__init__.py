"""Quantum annealing with mid-anneal measurement on multi-objective Ising problems.

Closed-system simulator and analysis toolkit: seeded instance generation,
weighted-sum scalarization, instantaneous-ground-state measurement
distributions, deterministic sampling campaigns over a (timing x weight)
grid, and Pareto-front quality metrics (hypervolume, spacing, ratio of
non-dominated individuals).
"""

from .errors import (
    CapacityError,
    ConnectivityError,
    FormatError,
    NumericError,
    OverwriteRefusalError,
    UndefinedMetricError,
    UnsupportedDimensionError,
)
from .experiment import (
    DEFAULT_OMEGA_GRID,
    DEFAULT_SAMPLES,
    DEFAULT_TIMINGS,
    CampaignResult,
    ExperimentPlan,
    MetricsCurve,
    RecoveryRow,
    TimingResult,
    compute_metrics,
    load_timing_results,
    omega_grid,
    run_campaign,
    run_sweep,
    unsupported_recovery_report,
    write_results_dir,
)
from .ising import (
    ProblemInstance,
    all_objective_vectors,
    generate_instance,
    load_instance,
    objective_energy,
    objective_vector,
    save_instance,
    scalarize,
    scalarized_energies,
    weight_pair,
)
from .pareto import (
    ParetoFront,
    SolutionSet,
    classify_supported,
    dominates,
    enumerate_pareto,
    hypervolume,
    nondominated_filter,
    read_front_csv,
    read_solution_set_csv,
    reference_point,
    rni,
    spacing,
    supported_certificate,
    write_front_csv,
    write_solution_set_csv,
)
from .schedule import AnnealSchedule, default_schedule, load_schedule, save_schedule
from .spectrum import (
    GroundState,
    HamiltonianMatrix,
    MeasurementDistribution,
    build_hamiltonian,
    draw_samples,
    ground_state,
    measurement_distribution,
)

__version__ = "0.1.0"
