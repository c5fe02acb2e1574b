//! Discrete heavy-tailed distribution fitting for activity counts.
//!
//! Counts such as posts-per-user or posts-per-thread are fitted with four
//! discrete families conditioned on a shared lower bound `xmin`:
//! power law, truncated power law, lognormal and exponential. The power law
//! picks `xmin` by minimising the Kolmogorov–Smirnov distance; the other
//! three are fitted on the same tail so their likelihoods are comparable, and
//! pairs are compared with a normalised log-likelihood-ratio test.
//!
//! ```
//! use npswatch_heavytail::{fit_power_law, Sample, Params};
//!
//! let sample = Sample::new([1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 4, 6, 9, 15, 40]).unwrap();
//! let fit = fit_power_law(&sample).unwrap();
//! let Params::PowerLaw { alpha } = fit.params else { unreachable!() };
//! assert!(alpha > 1.0);
//! assert!(fit.ks_distance <= 1.0);
//! ```

mod compare;
mod error;
mod fit;
mod model;
mod optimize;
mod sample;
pub mod zeta;

pub use compare::{
    compare, model_ordering, model_ordering_at, Comparison, DistFitReport, RankEntry,
    INDISTINGUISHABLE_P,
};
pub use error::FitError;
pub use fit::{
    fit_alternatives, fit_exponential, fit_lognormal, fit_power_law, fit_power_law_at,
    fit_power_law_with, fit_truncated_power_law, xmin_scan, AlphaEstimator, Alternatives,
    FitResult, XminCandidate, LIKELIHOOD_TOLERANCE, NEWTON_MAX_ITER, SEARCH_MAX_EVALUATIONS,
};
pub use model::{Model, Params, TailDistribution};
pub use sample::Sample;
