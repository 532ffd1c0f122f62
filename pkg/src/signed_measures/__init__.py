"""Simulation and inference toolkit for random signed measures."""

from .measure import (
    Atom,
    BorelSet,
    Interval,
    MarkedPointPattern,
    SignedAtomicMeasure,
    StepDensity,
    evaluate,
    from_marked_point_pattern,
    jordan_decompose,
    linear_combine,
    to_marked_point_pattern,
    total_variation,
)
from .levy import (
    CharacteristicPair,
    ExponentialWeight,
    FiniteDiscrete,
    GammaWeight,
    GenericDensity,
    LevySpec,
    StableWeight,
    TwoSided,
    WeightMeasure,
    ZeroWeight,
    activity,
    bnp_alpha_weight,
    char_fn,
    check_levy_integrability,
    compose_two_sided,
    spec_from_json,
    weight_from_json,
)
from .rng import RngStream
from .samplers import (
    GrmKernelSpec,
    check_grm_kernel,
    sample_crm,
    sample_crsm,
    sample_grm,
    sample_poisson_pp,
    sample_skellam_pp,
    skellam_pmf,
)
from .bnp import (
    ContinuousLikelihood,
    DiscreteLikelihood,
    FixedAtom,
    NormalDist,
    Observation,
    PosteriorResult,
    TraitPrior,
    UniformBase,
    check_assumptions,
    eval_mean_function,
    gaussian_example_prior,
    posterior_update_continuous,
    posterior_update_discrete,
    sample_prior_draw,
    signed_poisson_likelihood,
)
from .graph import (
    GraphConfig,
    SignedGraph,
    SignedMultigraph,
    count_observed,
    exchangeability_probe,
    generate_graph,
    sparsity_scan,
)

__version__ = "0.1.0"
