"""Variational-quantum-algorithm workbench: spin chains, Max-cut, and
the exact solvers and optimizers needed to study them end to end."""

from .circuits import (
    Circuit,
    Gate,
    build_efficient_su2,
    build_pauli_cluster_ansatz,
    build_qaoa_ansatz,
    circuit_depth,
    run_circuit,
)
from .exact import LanczosConvergenceError, dense_spectrum, lanczos_lowest, lowest_eigenvalues
from .optimizers import (
    GradConfig,
    OptimizationError,
    OptimizerTrace,
    QnspsaConfig,
    SpsaConfig,
    parameter_shift_gradient,
    qnspsa_minimize,
    shift_gradient_minimize,
    spsa_minimize,
)
from .pauli import (
    Observable,
    PauliString,
    PauliTerm,
    expectation,
    observable_from_pairs,
    observable_matvec,
    pauli_from_label,
    spectral_bound,
)
from .problems import (
    Graph,
    MgmParams,
    brute_force_maxcut,
    build_maxcut,
    build_mgm,
    cut_value,
    format_graph,
    mgm_bonds,
    parse_graph,
    random_graph,
)
from .statevector import (
    NoiseConfig,
    StateVector,
    estimate_expectation_sampled,
    fidelity,
    init_zero,
    measurement_groups,
    sample_counts,
)
from .vqa import (
    OptimizerChoice,
    SimConfig,
    VqaResult,
    energy_gap_scan,
    qaoa_run,
    vqd_run,
    vqe_run,
)

__version__ = "0.1.0"
