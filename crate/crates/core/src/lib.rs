//! Orlicz-Lorentz spaces on step functions.
//!
//! φ-functions are stored as piecewise-linear maps in log-log coordinates, which makes
//! inverses, composition and the modular integrals of step functions exact. Norms are
//! returned as certified brackets. On top of that sit the Zippin and Boyd index
//! computations, the block counterexamples and the convexity probes.

pub mod convexity;
pub mod counterexample;
pub mod error;
pub mod functionals;
pub mod indices;
pub mod phi;
pub mod quadrature;
pub mod sampling;
pub mod spec;
pub mod step;

pub use error::{End, Error, Result};
pub use phi::{Decision, Extent, MatuszewskaIndices, PhiFunction, Provenance};
pub use step::{pointwise_power_sum, DilationFactor, LogStep, StepFunction};
pub use functionals::{
    hardy_lowerstar, hardy_norm, hardy_star, luxemburg_norm, norm_of_envelope,
    orlicz_lorentz_norm, torchinsky_norm, HardyEnvelope, HardyKind, NormResult, DEFAULT_TOL,
};
pub use indices::{
    boyd_analytic_bracket, boyd_empirical_bounds, default_a_grid, default_dictionary, dilation_profile,
    zippin_indices, BoydAnalytic, BoydEmpirical, DictionaryEntry, DilationProfile, IndexBracket,
};
pub use convexity::{
    concavity_probe, convexity_probe, hardy_inequality_probe, theorem51_hypotheses, theorem53_necessity_probe,
    ConvexityReport, FamilyConfig, FamilyKind,
};
pub use counterexample::{solve_block_scale, verify_lemma43, CounterexampleSpec, LemmaBlock, Schedule};
pub use functionals::OrliczLorentz;
pub use spec::PhiSpec;
