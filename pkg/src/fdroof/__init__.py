"""fdroof: roofline performance prediction for finite-difference wave solvers.

The toolkit answers, before any implementation work, how fast an explicit
wave-equation kernel can possibly run on a given machine: it derives
operational intensity from stencil descriptions, evaluates roofline bounds,
finds the minimum discretization order that saturates the compute units,
estimates cost-to-solution across orders via CFL/dispersion analysis, and
validates the FLOP model with a naive reference acoustic kernel.
"""

from .analysis import (
    OICurveSet,
    OISeries,
    RooflineDataset,
    RooflinePoint,
    UtilizationReport,
    achieved_gflops,
    min_compute_bound_order,
    oi_curve,
    order_to_k,
    roofline_dataset,
    roofline_point,
    utilization,
)
from .charts import (
    DEFAULT_REFERENCE_MARKERS,
    ChartSpec,
    oi_curve_chart,
    render_svg,
    roofline_chart,
    write_svg,
)
from .cost import (
    CostRow,
    CostScenario,
    MachineCost,
    cost_csv,
    grid_spacing,
    load_scenario,
    points_per_wavelength,
    scenario_table,
    stable_dt,
)
from .equations import (
    BUILTIN_EQUATIONS,
    EquationSpec,
    OIResult,
    bytes_per_point,
    equation_registry,
    get_equation,
    kernel_flops,
    load_equations,
    operational_intensity,
    traffic_model,
)
from .errors import (
    AchievableRatesUnknownError,
    FdroofError,
    RegistryConflictError,
    RegistryParseError,
    ValidationError,
)
from .kernel import (
    BenchResult,
    KernelConfig,
    Source,
    StabilityWarning,
    Wavefield,
    dump_wavefield,
    max_stable_dt,
    oracle_step,
    run_benchmark,
    step,
)
from .machines import (
    BUILTIN_MACHINES,
    ArchParams,
    MachineSpec,
    MemParams,
    attainable_performance,
    classify_boundedness,
    get_machine,
    load_machines,
    machine_registry,
    ridge_point,
    theoretical_peak_bandwidth,
    theoretical_peak_flops,
)
from .stencils import (
    DerivativeKind,
    FDWeights,
    StencilGeometry,
    a2_sum,
    derivative_flops,
    fd_weights,
    stencil_geometry,
)

__version__ = "1.0.0"
