//! Robust rank-order (Fligner-Policello) test of a difference in medians,
//! with p-values from a Monte-Carlo null built on maximum-likelihood Johnson
//! S_U fits, an exact permutation null for small samples, and the standard
//! normal approximation. Also contains the simulation harness used to study
//! type-1 error and power of the three approaches.
//!
//! ```
//! use rro_core::{rro_normal_test, Sample, Tail};
//!
//! let x = Sample::new(vec![1.2, 0.4, 2.2, 1.9, 0.8, 1.1]).unwrap();
//! let y = Sample::new(vec![2.5, 3.1, 1.7, 2.8, 4.0, 2.6]).unwrap();
//! let result = rro_normal_test(&x, &y, 0.05, Tail::Two).unwrap();
//! assert!(result.statistic.value < 0.0);
//! ```

pub mod dist;
pub mod error;
pub mod mc;
pub mod null;
pub mod optim;
pub mod rng;
pub mod rro;
pub mod sample;
pub mod sim;

pub use dist::{
    family_by_name, fit_mle, log_likelihood, moment_match, CentralMoments, DistributionFamily, Fit, JohnsonSu,
    JohnsonSuFamily, MomentSpec, NormalFamily, Parent,
};
pub use error::{Error, Result};
pub use mc::{
    critical_values, fit_null_parents, mc_null, mc_null_nested, mc_pvalue, mc_pvalue_with, rro_exact_test,
    rro_mc_test, rro_normal_test, CriticalValues, McOptions, Method, NullParents, PValueEstimator, TestResult,
};
pub use null::{NullDistribution, Provenance, Tail};
pub use rro::{
    align_samples, exact_null_distribution, exact_null_distribution_with_cap, hodges_lehmann_shift,
    interleaving_count, normal_pvalue, placements, rro_statistic, PlacementSummary, RroStatistic,
    DEFAULT_ENUMERATION_CAP,
};
pub use sample::Sample;
