"""Characteristic-function estimation of integrated volatility.

Estimators of daily integrated variance for equally spaced log prices
that stay rate-efficient when the path carries jumps of infinite
variation, where truncation-based estimators lose their edge. Local
empirical characteristic functions of rescaled increments are
log-transformed into spot variance estimates, aggregated, and debiased
across a geometric grid of CF arguments.

Modules: core (path and block containers), estimators (CF estimators
and baselines), theory (bias functionals and rate diagnostics),
simulation (test models), montecarlo (replication studies), dataio and
cli (files and command line).
"""

from .core import (
    BlockIndex,
    EstimatorConfig,
    SampledPath,
    block_partition,
    grid_count,
    increments,
)
from .estimators import (
    IVEstimate,
    SpotBlock,
    SpotSeries,
    adaptive_u,
    avar_fixed_u,
    avar_plugin,
    bipower_variation,
    debiased_iv,
    integrated_vol,
    local_cf,
    panel_debiased_daily,
    realized_vol,
    spot_series,
    spot_vol,
    truncated_rv,
    truncation_threshold,
    zeta_debias,
)
from .montecarlo import (
    DEFAULT_REPS,
    ESTIMATOR_TAGS,
    McScenario,
    McSummary,
    coverage_test,
    k_n_for_grid,
    run_study,
    summarize,
)
from .simulation import (
    SimOutput,
    SimScenario,
    sample_stable_increments,
    simulate_cir,
    simulate_levy_const,
    simulate_sv_path,
    split_seed,
)
from .theory import (
    BiasValue,
    RateReport,
    StableTailParams,
    cf_equivalent_scale,
    cosine_power_integral,
    jump_bias,
    jump_bias_cf,
    rate_diagnostics,
    sine_power_integral,
)

__version__ = "0.1.0"

__all__ = [
    "BlockIndex",
    "EstimatorConfig",
    "SampledPath",
    "block_partition",
    "grid_count",
    "increments",
    "IVEstimate",
    "SpotBlock",
    "SpotSeries",
    "adaptive_u",
    "avar_fixed_u",
    "avar_plugin",
    "bipower_variation",
    "debiased_iv",
    "integrated_vol",
    "local_cf",
    "panel_debiased_daily",
    "realized_vol",
    "spot_series",
    "spot_vol",
    "truncated_rv",
    "truncation_threshold",
    "zeta_debias",
    "DEFAULT_REPS",
    "ESTIMATOR_TAGS",
    "McScenario",
    "McSummary",
    "coverage_test",
    "k_n_for_grid",
    "run_study",
    "summarize",
    "SimOutput",
    "SimScenario",
    "sample_stable_increments",
    "simulate_cir",
    "simulate_levy_const",
    "simulate_sv_path",
    "split_seed",
    "BiasValue",
    "RateReport",
    "StableTailParams",
    "cf_equivalent_scale",
    "cosine_power_integral",
    "jump_bias",
    "jump_bias_cf",
    "rate_diagnostics",
    "sine_power_integral",
    "__version__",
]
