"""Spectrum, partition function and thermodynamics of a charged particle
in an exponentially decaying magnetic field."""

from .nu_method import (
    BranchInvalidError,
    NuBranch,
    NuCoefficients,
    NuDerived,
    WavefunctionForm,
    derive_parameters,
    eigenvalue_residual,
    evaluate_wavefunction,
    find_root,
    tau_prime_condition,
    wavefunction_descriptor,
)
from .partition import (
    PartitionResult,
    QMethod,
    log_partition,
    partition,
    partition_closed,
    partition_exact,
    partition_poisson_quadrature,
    poisson_sum,
)
from .quadrature import QuadratureError, QuadratureResult, QuadratureSpec, integrate
from .special import ErfiOverflowError, ErfiScaled, dawson, erfi, erfi_scaled
from .spectrum import (
    CutoffError,
    CutoffPolicy,
    EnergyLevel,
    NonNormalizableError,
    PhysicalSystem,
    SpectrumParams,
    TailMassError,
    energy_level,
    level_cutoff,
    magnetic_field,
    normalized_wavefunction,
    reduce_to_template,
    solve_level_energy,
    spectrum_params,
    vector_potential,
)
from .thermo import (
    LambdaSet,
    Mode,
    SingularityError,
    ThermoPoint,
    entropy,
    evaluate_point,
    free_energy,
    lambda_set,
    ln_q,
    magnetization,
    mean_energy_analytic,
    mean_energy_numeric,
    specific_heat,
    susceptibility,
    sweep,
    write_audit,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
