"""Classical LMG spin dynamics of polarised light in nonlinear optical fibres.

The package is layered bottom-up: Jacobi elliptic and theta functions, the
crystal-symmetry classification of coupled-mode coefficients, the quadratic
spin Hamiltonian and its Euler-top reduction, closed-form and numerical spin
trajectories, and the fibre side (Stokes map, field propagation, LP01 mode).
"""

from .elliptic import (
    complete_elliptic_K,
    jacobi_amplitude_inverse,
    jacobi_aux,
    jacobi_sn_cn_dn,
    quarter_periods,
    sn_cn_dn_via_theta,
    theta,
)
from .symmetry import (
    CMECoefficients,
    PointGroupFamily,
    build_spin_hamiltonian,
    constraint_table,
    family_membership,
    hamiltonian_form_check,
)
from .hamiltonian import (
    DegenerateRegimeError,
    QuadraticSpinHamiltonian,
    Regime,
    TopParameters,
    energy_bounds,
    fixed_points,
    hamiltonian_eval,
    reduce_to_principal_axes,
)
from .dynamics import (
    Branch,
    EnergyOutOfBoundsError,
    InfinitePeriodError,
    analytic_trajectory,
    eom_rhs,
    heteroclinic_area,
    heteroclinic_orbit,
    integrate_batch,
    numeric_trajectory,
    oscillation_period,
    phase_align,
    trajectory_params,
    trajectory_through,
)
from .fiber import (
    FiberGeometry,
    FieldGrid,
    PropagationParams,
    cw_evolve,
    gamma_parameter,
    length_scales,
    lmg_correspondence,
    lp01_solve,
    read_field_dump,
    split_step_propagate,
    stokes_map,
    write_field_dump,
)

__version__ = "0.1.0"

__all__ = [
    "complete_elliptic_K",
    "jacobi_amplitude_inverse",
    "jacobi_aux",
    "jacobi_sn_cn_dn",
    "quarter_periods",
    "sn_cn_dn_via_theta",
    "theta",
    "CMECoefficients",
    "PointGroupFamily",
    "build_spin_hamiltonian",
    "constraint_table",
    "family_membership",
    "hamiltonian_form_check",
    "DegenerateRegimeError",
    "QuadraticSpinHamiltonian",
    "Regime",
    "TopParameters",
    "energy_bounds",
    "fixed_points",
    "hamiltonian_eval",
    "reduce_to_principal_axes",
    "Branch",
    "EnergyOutOfBoundsError",
    "InfinitePeriodError",
    "analytic_trajectory",
    "eom_rhs",
    "heteroclinic_area",
    "heteroclinic_orbit",
    "integrate_batch",
    "numeric_trajectory",
    "oscillation_period",
    "phase_align",
    "trajectory_params",
    "trajectory_through",
    "FiberGeometry",
    "FieldGrid",
    "PropagationParams",
    "cw_evolve",
    "gamma_parameter",
    "length_scales",
    "lmg_correspondence",
    "lp01_solve",
    "read_field_dump",
    "split_step_propagate",
    "stokes_map",
    "write_field_dump",
]
