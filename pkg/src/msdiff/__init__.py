"""1D multicomponent gas diffusion: classical and higher-order Maxwell-Stefan.

Library layout:

* mixture      -- physical parameters and nondimensionalization
* grid         -- staggered dual grid, state container, initial data
* densesolve   -- small pivoted dense solves (single and batched)
* classical    -- explicit step for the classical Maxwell-Stefan system
* higher_order -- explicit step with deviatoric partial pressures
* diagnostics  -- conservation/stability/equilibrium metrics, run comparison
* config, run  -- JSON configs, run orchestration, CSV/JSON output
* cli          -- msdiff run|compare|sweep-gamma|params
"""

from .classical import (
    FluxSystemCoefficients,
    assemble_flux_system,
    ms_step,
    solve_fluxes,
    update_densities,
)
from .config import SimConfig, load_config, parse_config
from .densesolve import DenseSystem, solve_dense, solve_dense_batch
from .diagnostics import (
    DiagnosticRecord,
    DiagnosticTrace,
    SnapshotComparison,
    UphillResult,
    cfl_number,
    compare_runs,
    equilibrium_distance,
    total_mass,
    uphill_metric,
)
from .errors import (
    ComparisonError,
    ConfigurationError,
    InvalidParameterError,
    MsdiffError,
    PositivityError,
    SchemaError,
    SingularSystemError,
)
from .grid import (
    GridSpec,
    InitialCondition,
    MixtureState,
    build_grid,
    initial_state,
    midpoint_densities,
)
from .higher_order import (
    DeviatorSystem,
    assemble_deviator_system,
    homs_flux_rhs,
    homs_step,
    solve_deviator,
    solve_deviator_field,
    total_pressure,
)
from .mixture import (
    MixtureSpec,
    PhysicalMixture,
    cross_section_norm,
    duncan_toor_mixture,
    nondimensionalize,
    self_diffusivity,
)
from .run import CflWarning, CompareReport, RunReport, SweepReport, compare, params, run, sweep_gamma

__version__ = "0.1.0"
