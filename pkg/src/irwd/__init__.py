"""Toolkit for the two-user Gaussian interference channel helped by an
instantaneous amplify-and-forward relay: gain design, regime
classification, rate regions, Monte Carlo validation, and link
simulation."""

from .af_relay import (
    AfGains,
    EquivalentChannel,
    af_power_required,
    af_residuals,
    alignment_det,
    equivalent_channel,
    solve_af_gains,
)
from .channel import (
    COMPONENTS,
    ChannelGains,
    ChannelSample,
    PowerBudget,
    SampleBlock,
    channel_spec_dict,
    derive_seed,
    load_channel_spec,
    parse_channel_spec,
    resolve_workers,
    sample,
    sample_all,
    sample_blocks,
)
from .classify import (
    COLLINEAR_TOL,
    ClassificationReport,
    Regime,
    classify,
    is_collinear,
    is_strong,
    is_very_strong,
    pr_threshold,
)
from .exceptions import (
    AfInfeasible,
    ChannelSpecError,
    CodebookTooLarge,
    DegenerateChannel,
    IrwdError,
    NotInRegime,
    SingularCovariance,
    SingularRelayGeometry,
)
from .linksim import (
    MAX_CODEBOOK,
    SimConfig,
    SimResult,
    SweepPoint,
    codebook_size,
    simulate,
    sweep_boundary,
    wilson_interval,
)
from .regions import (
    Halfspace,
    RatePair,
    RateRegion,
    achievable_region,
    contains,
    half_log,
    is_subset,
    redundancy_check,
    region_to_csv,
    region_to_dict,
    region_to_json,
    strong_capacity,
    strong_outer_bound,
    vertices,
    very_strong_capacity,
)
from .validate import (
    CheckResult,
    MiEstimate,
    MiQuery,
    NamedCovariance,
    ValidationReport,
    empirical_equivalent_channel,
    estimate_mi_mc,
    exact_covariance,
    gaussian_mi_closed_form,
    run_validation,
    standard_queries,
)

__version__ = "0.1.0"
