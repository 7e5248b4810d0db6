"""Pointwise strain invariants, stress-energy tensors, and energy-condition checks.

The package computes, at a single point, the strain of a map between a
Lorentzian source and a Riemannian target, the elementary symmetric
invariants of that strain by three independent routes, stress-energy tensors
of invariant Lagrangians (closed form and finite-difference oracle), and
dominant-energy-condition verdicts, plus a deterministic randomized campaign
harness with a CLI.
"""

from .errors import (
    ConditioningError,
    ConfigError,
    DomainError,
    SamplerStarvationError,
    StepError,
    StrainDecError,
)
from .multilinear import (
    CausalClass,
    LorentzianMetric,
    OrthonormalFrame,
    RiemannianMetric,
    WedgeBasis,
    canonical_frame,
    causal_classify,
    exterior_power,
    induced_metric_on_wedge,
    orthonormalize,
    principal_minor_sum,
    wedge_basis,
)
from .strain import (
    InvariantVector,
    PointGeometry,
    StrainTensor,
    power_sums,
    charpoly_coefficients,
    invariants_charpoly,
    invariants_newton,
    invariants_wedge,
    rank_of_map,
    strain,
    strain_invariants,
)
from .lagrangians import (
    AuditCheck,
    FlagAuditReport,
    LagrangianFlags,
    LagrangianSpec,
    born_infeld,
    box_rejection_sampler,
    evaluate_lagrangian,
    linear_combination,
    minimal_surface,
    resolve_lagrangian,
    skyrme,
    verify_flags,
    wave_map,
)
from .stress import (
    StressEnergy,
    WedgeDecomposition,
    stress_elementary,
    stress_general,
    stress_scale,
    stress_scale_general,
    stress_variational,
    wedge_decomposition,
)
from .dec import (
    CheckStatus,
    ConvexityCombinationCheck,
    DECVerdict,
    DECWitness,
    PointwiseCorollaryCheck,
    RankConditionCheck,
    check_convexity_lemma,
    check_dec,
    check_pointwise_corollary,
    check_rank_condition,
    dec_witness,
)
from .sampling import (
    derive_rng,
    sample_geometry,
    sample_timelike_directions,
)
from .campaign import (
    CampaignConfig,
    CampaignReport,
    load_config,
    load_geometry,
    replay_fixture,
    report_bytes,
    run_campaign,
)

__version__ = "0.1.0"

__all__ = [
    "AuditCheck",
    "CampaignConfig",
    "CampaignReport",
    "CausalClass",
    "CheckStatus",
    "ConditioningError",
    "ConfigError",
    "ConvexityCombinationCheck",
    "DECVerdict",
    "DECWitness",
    "DomainError",
    "FlagAuditReport",
    "InvariantVector",
    "LagrangianFlags",
    "LagrangianSpec",
    "LorentzianMetric",
    "OrthonormalFrame",
    "PointGeometry",
    "PointwiseCorollaryCheck",
    "RankConditionCheck",
    "RiemannianMetric",
    "SamplerStarvationError",
    "StepError",
    "StrainDecError",
    "StrainTensor",
    "StressEnergy",
    "WedgeBasis",
    "WedgeDecomposition",
    "born_infeld",
    "box_rejection_sampler",
    "canonical_frame",
    "causal_classify",
    "charpoly_coefficients",
    "check_convexity_lemma",
    "check_dec",
    "check_pointwise_corollary",
    "check_rank_condition",
    "dec_witness",
    "derive_rng",
    "evaluate_lagrangian",
    "exterior_power",
    "induced_metric_on_wedge",
    "invariants_charpoly",
    "invariants_newton",
    "invariants_wedge",
    "linear_combination",
    "load_config",
    "load_geometry",
    "minimal_surface",
    "orthonormalize",
    "power_sums",
    "principal_minor_sum",
    "rank_of_map",
    "replay_fixture",
    "report_bytes",
    "resolve_lagrangian",
    "run_campaign",
    "sample_geometry",
    "sample_timelike_directions",
    "skyrme",
    "strain",
    "strain_invariants",
    "stress_elementary",
    "stress_general",
    "stress_scale",
    "stress_scale_general",
    "stress_variational",
    "verify_flags",
    "wave_map",
    "wedge_basis",
    "wedge_decomposition",
]
