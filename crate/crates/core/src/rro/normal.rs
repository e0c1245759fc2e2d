use statrs::distribution::{ContinuousCDF, Normal};

use super::RroStatistic;
use crate::null::Tail;

fn standard() -> Normal {
    Normal::standard()
}

pub fn standard_normal_cdf(z: f64) -> f64 {
    if z == f64::INFINITY {
        1.0
    } else if z == f64::NEG_INFINITY {
        0.0
    } else {
        standard().cdf(z)
    }
}

/// Inverse of the standard normal CDF for `0 < u < 1`.
pub fn standard_normal_quantile(u: f64) -> f64 {
    standard().inverse_cdf(u)
}

/// Tail probability of the statistic under the standard normal approximation.
///
/// Two-sided values are `min(2 * min(left, right), 1)`.
pub fn normal_pvalue(stat: RroStatistic, tail: Tail) -> f64 {
    let left = standard_normal_cdf(stat.value);
    let right = standard_normal_cdf(-stat.value);
    match tail {
        Tail::Left => left,
        Tail::Right => right,
        Tail::Two => (2.0 * left.min(right)).min(1.0),
    }
}
