"""Grassmann-variable partition functions for a two-level fermionic mode.

The package exposes three layers: a sparse symbolic engine for
anticommuting generators (`grassmann`), an exact 2x2 operator oracle for
the single fermionic oscillator (`oscillator`), and a time-sliced
evaluator that recovers the same partition functions by contracting the
discretized propagator chain or by reducing its quadratic action to a
determinant (`path_integral`).
"""

from .grassmann import (
    DROP_TOLERANCE,
    GAUSSIAN_CAP,
    GeneratorRegistry,
    GrassmannElement,
    add,
    berezin_integrate,
    coefficient,
    determinant,
    exp_nilpotent,
    gaussian_integral_expand,
    integrate_pair,
    left_derivative,
    max_coefficient_difference,
    monomial,
    mul,
    one,
    register_generators,
    scale,
    substitute,
    trace_functional,
)
from .oscillator import (
    ThermalPoint,
    density_matrix,
    exact_kernel_coefficient,
    hamiltonian,
    ladder_matrices,
    number_operator,
    parity_operator,
    partition_trace,
    supertrace,
    thermal_observables,
)
from .path_integral import (
    SYMBOLIC_CHAIN_CAP,
    BoundaryCondition,
    DiscretizedChain,
    PropagatorKernel,
    SliceScheme,
    SweepPoint,
    action_matrix,
    close_boundary,
    closed_form_partition,
    contract_chain,
    convergence_sweep,
    kernel_paper_form,
    paper_normalized,
    partition_via_determinant,
    step_kernel,
)
from .selftest import CheckResult, run_selftest

__all__ = [
    "DROP_TOLERANCE",
    "GAUSSIAN_CAP",
    "SYMBOLIC_CHAIN_CAP",
    "GeneratorRegistry",
    "GrassmannElement",
    "add",
    "berezin_integrate",
    "coefficient",
    "determinant",
    "exp_nilpotent",
    "gaussian_integral_expand",
    "integrate_pair",
    "left_derivative",
    "max_coefficient_difference",
    "monomial",
    "mul",
    "one",
    "register_generators",
    "scale",
    "substitute",
    "trace_functional",
    "ThermalPoint",
    "density_matrix",
    "exact_kernel_coefficient",
    "hamiltonian",
    "ladder_matrices",
    "number_operator",
    "parity_operator",
    "partition_trace",
    "supertrace",
    "thermal_observables",
    "BoundaryCondition",
    "DiscretizedChain",
    "PropagatorKernel",
    "SliceScheme",
    "SweepPoint",
    "action_matrix",
    "close_boundary",
    "closed_form_partition",
    "contract_chain",
    "convergence_sweep",
    "kernel_paper_form",
    "paper_normalized",
    "partition_via_determinant",
    "step_kernel",
    "CheckResult",
    "run_selftest",
]

__version__ = "0.1.0"
